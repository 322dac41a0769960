#pragma once

// Lattice points in simplicial cones, local sails of two-dimensional
// continued fractions and the face-membership oracle.

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "klein/lattice.hpp"

namespace klein {

struct Vec3d {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

double dot(const Vec3d& a, const Vec3d& b);
Vec3d cross(const Vec3d& a, const Vec3d& b);
double norm(const Vec3d& a);
Vec3d to_vec3d(const IntVec3& v);

/// Closed simplicial cone spanned by three independent directions.
///
/// Directions are stored normalized. A cone built from integer generators
/// keeps them and decides membership exactly; otherwise membership uses a
/// relative margin and reports points within it as uncertain.
class Cone3 {
public:
    /// Throws ErrorKind::singular when the directions are (numerically) dependent.
    explicit Cone3(const std::array<Vec3d, 3>& directions);

    /// The orthant of three lines through the origin selected by signs (+1 or -1).
    static Cone3 from_lines(const std::array<Vec3d, 3>& lines, const std::array<int, 3>& signs);

    /// Rational cone with exact generators.
    static Cone3 rational(const std::array<IntVec3, 3>& generators);

    const std::array<Vec3d, 3>& directions() const noexcept { return directions_; }
    const std::optional<std::array<IntVec3, 3>>& generators() const noexcept { return generators_; }
    bool is_exact() const noexcept { return generators_.has_value(); }

    /// Unit inward normals of the three facets; normal k is opposite direction k.
    const std::array<Vec3d, 3>& inward_normals() const noexcept { return normals_; }
    /// Integer inward normals; meaningful only for rational cones.
    const std::array<IntVec3, 3>& exact_inward_normals() const noexcept { return exact_normals_; }

    Cone3 transformed(const UnimodularMap3& map) const;

private:
    Cone3() = default;
    void init_normals();

    std::array<Vec3d, 3> directions_{};
    std::array<Vec3d, 3> normals_{};
    std::optional<std::array<IntVec3, 3>> generators_;
    std::array<IntVec3, 3> exact_normals_{};
};

enum class Membership { inside, outside, uncertain };

inline constexpr double default_margin = 1e-9;

/// Closed-cone membership. Exact for rational cones; otherwise points whose
/// normalized distance to a facet plane is within `margin` are uncertain.
Membership classify(const Cone3& cone, const IntVec3& point, double margin = default_margin);

/// Cone cut by {normal . x <= depth}.
struct TruncatedConeRegion {
    Cone3 cone;
    IntVec3 normal;  // primitive
    Integer depth;
};

struct ConeLatticePoints {
    std::vector<IntVec3> points;     // sorted
    std::vector<IntVec3> uncertain;  // sorted; within the margin of the boundary
};

/// Nonzero lattice points of the truncated region, enumerated slice by slice
/// over {normal . x = j}, j = 1..depth. Throws ErrorKind::unbounded_region
/// unless every direction has a positive component along the normal, and
/// ErrorKind::invalid_argument for a non-primitive normal or negative depth.
ConeLatticePoints cone_lattice_points(const TruncatedConeRegion& region, double margin = default_margin);

enum class FaceVerdict { face, not_face, inconclusive };

enum class FaceReason {
    none,
    edge_misses_plane,     // a cone direction points away from the face plane
    vertex_outside,        // condition (i) fails
    intermediate_point,    // condition (ii) fails
    extra_point_on_plane,  // condition (iii) fails
    margin,                // a decisive point lies within the margin
    budget,                // enumeration budget exceeded
};

const char* to_string(FaceReason reason) noexcept;

struct FaceDecision {
    FaceVerdict verdict = FaceVerdict::inconclusive;
    FaceReason reason = FaceReason::none;
};

struct FaceOracleOptions {
    double margin = default_margin;
    std::uint64_t cell_budget = 10'000'000;
};

/// Decides whether a lattice face is a face of the sail of a cone.
///
/// The face is mapped into its plane frame once; cones are then checked
/// level by level between the origin and the face plane. Lattice points just
/// outside the face (within lattice distance one of an edge) are probed first
/// as a fast rejection.
class FaceOracle {
public:
    explicit FaceOracle(const LatticeFace& face, FaceOracleOptions options = {});

    FaceDecision classify(const Cone3& cone) const;

    /// Cone given in the face frame, where the face lies in {z = distance}.
    FaceDecision classify_in_frame(const Cone3& cone_in_frame) const;

    const LatticeFace& face() const noexcept { return face_; }
    const PlaneFrame& frame() const noexcept { return frame_; }
    const FaceOracleOptions& options() const noexcept { return options_; }

private:
    bool in_polygon(std::int64_t x, std::int64_t y) const;

    LatticeFace face_;
    PlaneFrame frame_;
    FaceOracleOptions options_;
    std::int64_t distance_ = 1;
    std::vector<std::array<std::int64_t, 3>> edges_;  // nx, ny, c with nx x + ny y <= c inside
    std::vector<std::array<std::int64_t, 2>> vertices_;
    std::vector<std::array<std::int64_t, 2>> probes_;
};

FaceDecision is_face(const LatticeFace& face, const Cone3& cone, FaceOracleOptions options = {});

/// Lattice points within lattice distance one outside the edges of a convex
/// counter-clockwise polygon: {n_e . x <= c_e + 1 for all edges} minus the
/// polygon, sorted.
std::vector<IntVec2> outer_ring_points(std::span<const IntVec2> convex_ccw);

struct SailFace {
    LatticeFace face;
    /// Every lattice point of the cone below the face plane would lie within
    /// the truncation, so the face is certified to be a face of the full sail.
    bool reliable = false;
};

struct SailFaceSet {
    std::vector<SailFace> faces;
    TruncatedConeRegion region;
};

/// Faces of the convex hull of the enumerated lattice points (together with
/// far points along the generators) whose inner normals are positive on the
/// cone. Requires a rational cone (ErrorKind::unsupported otherwise); throws
/// ErrorKind::insufficient_depth when fewer than four non-coplanar points are
/// available.
SailFaceSet local_sail(const TruncatedConeRegion& region);

}  // namespace klein
