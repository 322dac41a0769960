#pragma once

// Möbius form of two-dimensional framed continued fractions in vertex and
// dual coordinates, admissible domains of faces and their relative
// frequencies.

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "klein/cubature.hpp"
#include "klein/lattice.hpp"
#include "klein/sail2d.hpp"

namespace klein {

/// Three points P1, P2, P3 of the reference plane.
struct VertexConfig {
    std::array<Point2, 3> points;
};

/// Three lines a_i x + b_i y = 1, stored as (a_i, b_i).
struct DualConfig {
    std::array<Point2, 3> lines;
};

/// S = (x3 y2 - x2 y3 + x1 y3 - x3 y1 + x2 y1 - x1 y2) / 2.
double signed_area(const VertexConfig& v);

/// 1 / S^3. Throws ErrorKind::singular for collinear points.
double density_2d_vertex(const VertexConfig& v);

/// D = a3 b2 - a2 b3 + a1 b3 - a3 b1 + a2 b1 - a1 b2.
double dual_determinant(const DualConfig& d);

/// -8 / D^3. Throws ErrorKind::singular when D = 0.
double density_2d_dual(const DualConfig& d);

/// P1 = l2 ∩ l3, P2 = l1 ∩ l3, P3 = l1 ∩ l2.
VertexConfig dual_to_vertex(const DualConfig& d);

/// Line i passes through the two points other than P_i. Throws
/// ErrorKind::singular if such a line passes through the origin.
DualConfig vertex_to_dual(const VertexConfig& v);

/// Angular product form for n-dimensional framed continued fractions:
/// (-1)^[(n+3)/4] / 2^(n(n+1)) * prod_{i<j} cot^2((phi_ij - phi_ji) / 2).
/// `pairs` lists (phi_ij, phi_ji) for i < j in lexicographic order.
double density_nd_angular(int n, std::span<const std::array<double, 2>> pairs);

struct RationalPoint {
    Rational x;
    Rational y;
};

using RationalPolygon = std::vector<RationalPoint>;  // convex, counter-clockwise

/// Lattice points q outside the face polygon such that conv(F ∪ {q})
/// contains no lattice points other than those of F and q. Coordinates are in
/// the face's plane frame. The ring search stops at the first ring lying
/// outside the polygon pushed out by lattice distance one, which contains
/// every such point; ErrorKind::out_of_range if that takes more than
/// `max_radius` rings. Throws ErrorKind::unsupported for faces at distance
/// other than 1.
std::vector<IntVec2> protected_points(const LatticeFace& face, int max_radius = 64);

/// Same search on a polygon given directly in lattice coordinates.
std::vector<IntVec2> protected_points(std::span<const IntVec2> convex_ccw, int max_radius = 64);

struct ConstraintCell {
    std::array<RationalPolygon, 3> polygons;  // one per (a_i, b_i) plane
    std::vector<int> assignment;              // excluding line of each protected point
};

struct AdmissibleDomain {
    LatticeFace face;
    PlaneFrame frame;
    RationalPoint origin;                 // centroid of the face vertices, in frame coordinates
    RationalPolygon containment;          // (a, b) keeping every face vertex on the origin side
    std::vector<IntVec2> protected_pts;   // frame coordinates
    std::vector<ConstraintCell> cells;
};

/// Splits the dual-coordinate region of line triples having the face as a
/// sail face into disjoint products of convex polygons: protected point k is
/// excluded first by line assignment[k]. Throws ErrorKind::unsupported for
/// faces at distance other than 1.
AdmissibleDomain admissible_domain(const LatticeFace& face);

double area(const RationalPolygon& polygon);

/// Cone in the face frame whose trace on the face plane is the triangle cut
/// by the dual lines (coordinates centred at `origin`).
Cone3 cone_in_frame(const DualConfig& d, double origin_x, double origin_y, double distance);

/// Integral of (alpha + beta . x)^-3 over a convex counter-clockwise polygon
/// on which the affine function does not vanish, by the divergence theorem.
double integrate_inverse_cube(std::span<const Point2> convex_ccw, double alpha, Point2 beta);

enum class FrequencyMethod { exact, monte_carlo };

const char* to_string(FrequencyMethod method) noexcept;

struct FrequencyResult {
    double value = 0.0;
    double error = 0.0;  // quadrature error bound or standard error
    FrequencyMethod method = FrequencyMethod::exact;
    std::uint64_t samples = 0;  // Monte-Carlo draws, or final cubature regions
    std::uint64_t accepted = 0;
    std::uint64_t inconclusive = 0;
    std::uint64_t outside_support = 0;  // accepted draws outside the un-inflated box
    std::uint64_t cells = 0;            // constraint cells of the exact path
    std::vector<std::string> warnings;
};

struct ExactOptions {
    double rel_tol = 1e-5;
    std::size_t max_regions = 400000;
};

/// Integral of |density_2d_dual| / 3! over the admissible domain: adaptive
/// cubature over the first two polygons of each cell, closed form over the
/// third. Throws
/// ErrorKind::unsupported for faces at distance other than 1 and
/// BudgetExceeded when the tolerance is not reached.
FrequencyResult frequency_exact(const LatticeFace& face, const ExactOptions& options = {});

struct MonteCarloOptions {
    std::uint64_t samples = 1'000'000;
    std::uint64_t seed = 1;
    unsigned workers = 1;
    double inflation = 1.5;
    FaceOracleOptions oracle{};
};

/// Uniform sampling of a box around the admissible support weighted by
/// |density_2d_dual| / 3! and the face oracle. Results depend only on the
/// seed, not on the worker count. Throws ErrorKind::no_samples when no draw
/// is accepted.
FrequencyResult frequency_mc(const LatticeFace& face, const MonteCarloOptions& options = {});

}  // namespace klein
