#include "klein/sail2d.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace klein {

double dot(const Vec3d& a, const Vec3d& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

Vec3d cross(const Vec3d& a, const Vec3d& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

double norm(const Vec3d& a) { return std::sqrt(dot(a, a)); }

Vec3d to_vec3d(const IntVec3& v) { return {v.x.get_d(), v.y.get_d(), v.z.get_d()}; }

namespace {

Vec3d scaled(const Vec3d& v, double s) { return {v.x * s, v.y * s, v.z * s}; }

std::int64_t to_i64(const Integer& v, const char* what) {
    if (!v.fits_slong_p()) throw Error(ErrorKind::out_of_range, std::string(what) + " exceeds 64-bit range");
    return v.get_si();
}

constexpr double singular_threshold = 1e-12;

}  // namespace

// ---------------------------------------------------------------- Cone3

Cone3::Cone3(const std::array<Vec3d, 3>& directions) {
    for (int i = 0; i < 3; ++i) {
        const double n = norm(directions[i]);
        if (!(n > 0.0) || !std::isfinite(n)) throw Error(ErrorKind::singular, "cone direction must be finite and nonzero");
        directions_[i] = scaled(directions[i], 1.0 / n);
    }
    init_normals();
}

Cone3 Cone3::from_lines(const std::array<Vec3d, 3>& lines, const std::array<int, 3>& signs) {
    std::array<Vec3d, 3> dirs;
    for (int i = 0; i < 3; ++i) {
        if (signs[i] != 1 && signs[i] != -1) throw Error(ErrorKind::invalid_argument, "orthant signs must be +1 or -1");
        dirs[i] = scaled(lines[i], static_cast<double>(signs[i]));
    }
    return Cone3(dirs);
}

Cone3 Cone3::rational(const std::array<IntVec3, 3>& generators) {
    const Integer d = det(generators[0], generators[1], generators[2]);
    if (d == 0) throw Error(ErrorKind::singular, "cone generators are linearly dependent");
    Cone3 cone;
    cone.generators_ = generators;
    for (int i = 0; i < 3; ++i) {
        const Vec3d v = to_vec3d(generators[i]);
        cone.directions_[i] = scaled(v, 1.0 / norm(v));
    }
    const Integer sign = d > 0 ? 1 : -1;
    for (int k = 0; k < 3; ++k)
        cone.exact_normals_[k] = sign * cross(generators[(k + 1) % 3], generators[(k + 2) % 3]);
    cone.init_normals();
    return cone;
}

void Cone3::init_normals() {
    std::array<Vec3d, 3> n;
    for (int k = 0; k < 3; ++k) n[k] = cross(directions_[(k + 1) % 3], directions_[(k + 2) % 3]);
    const double d = dot(directions_[0], n[0]);
    if (!(std::abs(d) > singular_threshold)) throw Error(ErrorKind::singular, "cone directions are linearly dependent");
    for (int k = 0; k < 3; ++k) normals_[k] = scaled(n[k], (d > 0 ? 1.0 : -1.0) / norm(n[k]));
}

Cone3 Cone3::transformed(const UnimodularMap3& map) const {
    if (generators_) {
        const auto& g = *generators_;
        return rational({map.apply(g[0]), map.apply(g[1]), map.apply(g[2])});
    }
    std::array<Vec3d, 3> dirs;
    for (int i = 0; i < 3; ++i) {
        const Vec3d& d = directions_[i];
        dirs[i] = {map(0, 0).get_d() * d.x + map(0, 1).get_d() * d.y + map(0, 2).get_d() * d.z,
                   map(1, 0).get_d() * d.x + map(1, 1).get_d() * d.y + map(1, 2).get_d() * d.z,
                   map(2, 0).get_d() * d.x + map(2, 1).get_d() * d.y + map(2, 2).get_d() * d.z};
    }
    return Cone3(dirs);
}

namespace {

Membership classify_point(const Cone3& cone, double x, double y, double z, double margin) {
    if (cone.is_exact()) {
        const IntVec3 p{Integer(static_cast<long>(x)), Integer(static_cast<long>(y)), Integer(static_cast<long>(z))};
        for (const auto& n : cone.exact_inward_normals())
            if (dot(n, p) < 0) return Membership::outside;
        return Membership::inside;
    }
    const double len = std::sqrt(x * x + y * y + z * z);
    if (len == 0.0) return Membership::inside;
    bool uncertain = false;
    for (const auto& n : cone.inward_normals()) {
        const double s = (n.x * x + n.y * y + n.z * z) / len;
        if (s < -margin) return Membership::outside;
        if (s <= margin) uncertain = true;
    }
    return uncertain ? Membership::uncertain : Membership::inside;
}

enum class ScanStatus { completed, stopped, budget };

// Visits every lattice point (x, y) of a slightly widened slice {z = level}
// of a cone whose directions all have positive z. visit returns false to stop.
template <class Visit>
ScanStatus scan_slice(const std::array<Vec3d, 3>& dirs, double level, std::uint64_t& budget, Visit&& visit) {
    std::array<std::array<double, 2>, 3> t;
    double scale = 1.0;
    for (int i = 0; i < 3; ++i) {
        t[i] = {level * dirs[i].x / dirs[i].z, level * dirs[i].y / dirs[i].z};
        scale = std::max({scale, std::abs(t[i][0]), std::abs(t[i][1])});
    }
    const double delta = 1e-7 * scale;
    const double ymin = std::min({t[0][1], t[1][1], t[2][1]}) - delta;
    const double ymax = std::max({t[0][1], t[1][1], t[2][1]}) + delta;
    if (!std::isfinite(ymin) || !std::isfinite(ymax) || ymax - ymin + 1.0 > static_cast<double>(budget))
        return ScanStatus::budget;
    const auto y0 = static_cast<std::int64_t>(std::ceil(ymin));
    const auto y1 = static_cast<std::int64_t>(std::floor(ymax));
    for (std::int64_t y = y0; y <= y1; ++y) {
        const double yy = static_cast<double>(y);
        double lo = INFINITY, hi = -INFINITY;
        for (int e = 0; e < 3; ++e) {
            const auto& a = t[e];
            const auto& b = t[(e + 1) % 3];
            if (yy < std::min(a[1], b[1]) - delta || yy > std::max(a[1], b[1]) + delta) continue;
            const double dy = b[1] - a[1];
            if (std::abs(dy) <= delta) {
                lo = std::min({lo, a[0], b[0]});
                hi = std::max({hi, a[0], b[0]});
            } else {
                const double s = std::clamp((yy - a[1]) / dy, 0.0, 1.0);
                const double x = a[0] + s * (b[0] - a[0]);
                lo = std::min(lo, x);
                hi = std::max(hi, x);
            }
        }
        if (lo > hi) continue;
        const double xl = std::ceil(lo - delta), xh = std::floor(hi + delta);
        if (xl > xh) continue;
        const double width = xh - xl + 1.0;
        if (width > static_cast<double>(budget)) return ScanStatus::budget;
        budget -= static_cast<std::uint64_t>(width);
        for (auto x = static_cast<std::int64_t>(xl); x <= static_cast<std::int64_t>(xh); ++x)
            if (!visit(x, y)) return ScanStatus::stopped;
    }
    return ScanStatus::completed;
}

constexpr std::uint64_t enumeration_budget = 100'000'000;

}  // namespace

Membership classify(const Cone3& cone, const IntVec3& point, double margin) {
    if (cone.is_exact()) {
        for (const auto& n : cone.exact_inward_normals())
            if (dot(n, point) < 0) return Membership::outside;
        return Membership::inside;
    }
    const Vec3d p = to_vec3d(point);
    return classify_point(cone, p.x, p.y, p.z, margin);
}

ConeLatticePoints cone_lattice_points(const TruncatedConeRegion& region, double margin) {
    if (content(region.normal) != 1) throw Error(ErrorKind::invalid_argument, "cutting-plane normal must be primitive");
    if (region.depth < 0) throw Error(ErrorKind::invalid_argument, "depth must be nonnegative");
    const UnimodularMap3 to_frame = complete_to_unimodular(region.normal);
    const UnimodularMap3 from_frame = to_frame.inverse();
    const Cone3 cone = region.cone.transformed(to_frame);
    for (int i = 0; i < 3; ++i) {
        const bool positive = cone.is_exact() ? dot(region.normal, (*region.cone.generators())[i]) > 0
                                              : cone.directions()[i].z > margin * norm(cone.directions()[i]);
        if (!positive)
            throw Error(ErrorKind::unbounded_region, "cone direction " + std::to_string(i) +
                                                         " does not cross the cutting plane; region is unbounded");
    }
    ConeLatticePoints out;
    std::uint64_t budget = enumeration_budget;
    const std::int64_t depth = to_i64(region.depth, "depth");
    for (std::int64_t j = 1; j <= depth; ++j) {
        const auto status = scan_slice(cone.directions(), static_cast<double>(j), budget, [&](std::int64_t x, std::int64_t y) {
            const Membership m = classify_point(cone, static_cast<double>(x), static_cast<double>(y),
                                                static_cast<double>(j), margin);
            if (m == Membership::outside) return true;
            IntVec3 p = from_frame.apply({Integer(static_cast<long>(x)), Integer(static_cast<long>(y)), Integer(static_cast<long>(j))});
            (m == Membership::inside ? out.points : out.uncertain).push_back(std::move(p));
            return true;
        });
        if (status == ScanStatus::budget)
            throw Error(ErrorKind::budget_exceeded, "cone lattice enumeration exceeded " +
                                                        std::to_string(enumeration_budget) + " cells");
    }
    std::sort(out.points.begin(), out.points.end());
    std::sort(out.uncertain.begin(), out.uncertain.end());
    return out;
}

// ---------------------------------------------------------------- face oracle

const char* to_string(FaceReason reason) noexcept {
    switch (reason) {
        case FaceReason::none: return "none";
        case FaceReason::edge_misses_plane: return "edge misses plane";
        case FaceReason::vertex_outside: return "vertex outside cone";
        case FaceReason::intermediate_point: return "lattice point between origin and plane";
        case FaceReason::extra_point_on_plane: return "extra lattice point on face plane";
        case FaceReason::margin: return "within margin";
        case FaceReason::budget: return "enumeration budget exceeded";
    }
    return "unknown";
}

std::vector<IntVec2> outer_ring_points(std::span<const IntVec2> poly) {
    const std::size_t n = poly.size();
    if (n < 3) throw Error(ErrorKind::invalid_argument, "polygon needs at least three vertices");
    // Edge e: nx x + ny y <= c inside, primitive normal.
    std::vector<IntVec2> normals(n);
    std::vector<Integer> offsets(n);
    for (std::size_t i = 0; i < n; ++i) {
        const IntVec2 e = primitive(poly[(i + 1) % n] - poly[i]);
        normals[i] = {e.y, -e.x};
        offsets[i] = normals[i].x * poly[i].x + normals[i].y * poly[i].y;
    }
    // Vertices of the pushed-out polygon are intersections of consecutive pushed edges.
    Rational xmin, xmax, ymin, ymax;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = (i + 1) % n;
        const Integer c1 = offsets[i] + 1, c2 = offsets[j] + 1;
        const Integer d = det(normals[i], normals[j]);
        const Rational x(c1 * normals[j].y - c2 * normals[i].y, d);
        const Rational y(normals[i].x * c2 - normals[j].x * c1, d);
        if (i == 0 || x < xmin) xmin = x;
        if (i == 0 || x > xmax) xmax = x;
        if (i == 0 || y < ymin) ymin = y;
        if (i == 0 || y > ymax) ymax = y;
    }
    std::vector<IntVec2> out;
    for (Integer x = xmin.floor(); x <= xmax.floor(); ++x)
        for (Integer y = ymin.floor(); y <= ymax.floor(); ++y) {
            bool inside_plus = true, inside = true;
            for (std::size_t i = 0; i < n && inside_plus; ++i) {
                const Integer v = normals[i].x * x + normals[i].y * y;
                if (v > offsets[i] + 1) inside_plus = false;
                if (v > offsets[i]) inside = false;
            }
            if (inside_plus && !inside) out.push_back({x, y});
        }
    std::sort(out.begin(), out.end());
    return out;
}

FaceOracle::FaceOracle(const LatticeFace& face, FaceOracleOptions options)
    : face_(face), frame_(plane_frame(face)), options_(options) {
    distance_ = to_i64(frame_.distance, "face distance");
    const auto& poly = frame_.polygon;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        vertices_.push_back({to_i64(poly[i].x, "face coordinate"), to_i64(poly[i].y, "face coordinate")});
        const IntVec2 e = primitive(poly[(i + 1) % n] - poly[i]);
        const IntVec2 nrm{e.y, -e.x};
        edges_.push_back({to_i64(nrm.x, "edge normal"), to_i64(nrm.y, "edge normal"),
                          to_i64(nrm.x * poly[i].x + nrm.y * poly[i].y, "edge offset")});
    }
    for (const auto& q : outer_ring_points(poly)) probes_.push_back({to_i64(q.x, "probe"), to_i64(q.y, "probe")});
}

bool FaceOracle::in_polygon(std::int64_t x, std::int64_t y) const {
    for (const auto& e : edges_)
        if (static_cast<__int128>(e[0]) * x + static_cast<__int128>(e[1]) * y > e[2]) return false;
    return true;
}

FaceDecision FaceOracle::classify(const Cone3& cone) const {
    return classify_in_frame(cone.transformed(frame_.to_plane));
}

FaceDecision FaceOracle::classify_in_frame(const Cone3& cone) const {
    const double margin = options_.margin;
    const double d = static_cast<double>(distance_);
    bool uncertain = false;

    for (int i = 0; i < 3; ++i) {
        if (cone.is_exact()) {
            if ((*cone.generators())[i].z <= 0) return {FaceVerdict::not_face, FaceReason::edge_misses_plane};
        } else {
            const double z = cone.directions()[i].z;  // directions are unit vectors
            if (z < -margin) return {FaceVerdict::not_face, FaceReason::edge_misses_plane};
            if (z <= margin) return {FaceVerdict::inconclusive, FaceReason::margin};
        }
    }

    auto check = [&](double x, double y, double z) { return classify_point(cone, x, y, z, margin); };

    for (const auto& v : vertices_) {
        const Membership m = check(static_cast<double>(v[0]), static_cast<double>(v[1]), d);
        if (m == Membership::outside) return {FaceVerdict::not_face, FaceReason::vertex_outside};
        if (m == Membership::uncertain) uncertain = true;
    }
    for (const auto& q : probes_) {
        const Membership m = check(static_cast<double>(q[0]), static_cast<double>(q[1]), d);
        if (m == Membership::inside) return {FaceVerdict::not_face, FaceReason::extra_point_on_plane};
        if (m == Membership::uncertain) uncertain = true;
    }

    std::uint64_t budget = options_.cell_budget;
    FaceReason found = FaceReason::none;
    for (std::int64_t j = 1; j <= distance_; ++j) {
        const bool on_plane = j == distance_;
        const double z = static_cast<double>(j);
        const auto status = scan_slice(cone.directions(), z, budget, [&](std::int64_t x, std::int64_t y) {
            if (on_plane && in_polygon(x, y)) return true;
            const Membership m = check(static_cast<double>(x), static_cast<double>(y), z);
            if (m == Membership::inside) {
                found = on_plane ? FaceReason::extra_point_on_plane : FaceReason::intermediate_point;
                return false;
            }
            if (m == Membership::uncertain) uncertain = true;
            return true;
        });
        if (status == ScanStatus::stopped) return {FaceVerdict::not_face, found};
        if (status == ScanStatus::budget) return {FaceVerdict::inconclusive, FaceReason::budget};
    }
    if (uncertain) return {FaceVerdict::inconclusive, FaceReason::margin};
    return {FaceVerdict::face, FaceReason::none};
}

FaceDecision is_face(const LatticeFace& face, const Cone3& cone, FaceOracleOptions options) {
    return FaceOracle(face, options).classify(cone);
}

// ---------------------------------------------------------------- local sail

namespace {

using P3 = std::array<std::int64_t, 3>;
using I128 = __int128;

constexpr std::int64_t hull_coordinate_limit = std::int64_t{1} << 40;

I128 orient(const P3& a, const P3& b, const P3& c, const P3& d) {
    const I128 bx = b[0] - a[0], by = b[1] - a[1], bz = b[2] - a[2];
    const I128 cx = c[0] - a[0], cy = c[1] - a[1], cz = c[2] - a[2];
    const I128 dx = d[0] - a[0], dy = d[1] - a[1], dz = d[2] - a[2];
    return bx * (cy * dz - cz * dy) - by * (cx * dz - cz * dx) + bz * (cx * dy - cy * dx);
}

bool collinear(const P3& a, const P3& b, const P3& c) {
    const I128 bx = b[0] - a[0], by = b[1] - a[1], bz = b[2] - a[2];
    const I128 cx = c[0] - a[0], cy = c[1] - a[1], cz = c[2] - a[2];
    return by * cz - bz * cy == 0 && bz * cx - bx * cz == 0 && bx * cy - by * cx == 0;
}

struct HullFace {
    std::array<std::size_t, 3> v;
    bool alive = true;
};

// Incremental hull; faces are oriented with outward normals (b - a) x (c - a).
std::vector<std::array<std::size_t, 3>> hull3d(const std::vector<P3>& pts) {
    const std::size_t n = pts.size();
    std::size_t i1 = n, i2 = n, i3 = n;
    for (std::size_t i = 1; i < n && i1 == n; ++i)
        if (pts[i] != pts[0]) i1 = i;
    for (std::size_t i = 1; i < n && i1 < n && i2 == n; ++i)
        if (!collinear(pts[0], pts[i1], pts[i])) i2 = i;
    for (std::size_t i = 1; i < n && i2 < n && i3 == n; ++i)
        if (orient(pts[0], pts[i1], pts[i2], pts[i]) != 0) i3 = i;
    if (i3 == n) throw Error(ErrorKind::insufficient_depth, "fewer than four non-coplanar lattice points");

    std::vector<HullFace> faces;
    const std::array<std::size_t, 4> tet{0, i1, i2, i3};
    for (int skip = 0; skip < 4; ++skip) {
        std::array<std::size_t, 3> f;
        int k = 0;
        for (int j = 0; j < 4; ++j)
            if (j != skip) f[k++] = tet[j];
        if (orient(pts[f[0]], pts[f[1]], pts[f[2]], pts[tet[skip]]) > 0) std::swap(f[1], f[2]);
        faces.push_back({f});
    }

    for (std::size_t p = 0; p < n; ++p) {
        if (p == 0 || p == i1 || p == i2 || p == i3) continue;
        std::set<std::pair<std::size_t, std::size_t>> edges;
        bool any = false;
        for (auto& f : faces) {
            if (!f.alive) continue;
            if (orient(pts[f.v[0]], pts[f.v[1]], pts[f.v[2]], pts[p]) > 0) {
                f.alive = false;
                any = true;
                for (int e = 0; e < 3; ++e) edges.insert({f.v[e], f.v[(e + 1) % 3]});
            }
        }
        if (!any) continue;
        for (const auto& [a, b] : edges)
            if (!edges.contains({b, a})) faces.push_back({{a, b, p}});
        std::erase_if(faces, [](const HullFace& f) { return !f.alive; });
    }
    std::vector<std::array<std::size_t, 3>> out;
    for (const auto& f : faces) out.push_back(f.v);
    return out;
}

IntVec3 to_int_vec(const P3& p) {
    return {Integer(static_cast<long>(p[0])), Integer(static_cast<long>(p[1])), Integer(static_cast<long>(p[2]))};
}

}  // namespace

SailFaceSet local_sail(const TruncatedConeRegion& region) {
    if (!region.cone.is_exact()) throw Error(ErrorKind::unsupported, "local sail requires a rational cone");
    const auto& gens = *region.cone.generators();
    const ConeLatticePoints enumerated = cone_lattice_points(region);

    std::vector<IntVec3> candidates = enumerated.points;
    constexpr long far = 1024;
    for (const auto& g : gens) {
        const IntVec3 p = primitive(g);
        candidates.push_back(p);
        candidates.push_back(Integer(far) * p);
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    std::vector<P3> pts;
    for (const auto& c : candidates) {
        P3 p{to_i64(c.x, "hull coordinate"), to_i64(c.y, "hull coordinate"), to_i64(c.z, "hull coordinate")};
        for (auto v : p)
            if (v >= hull_coordinate_limit || v <= -hull_coordinate_limit)
                throw Error(ErrorKind::out_of_range, "hull coordinate exceeds 2^40");
        pts.push_back(p);
    }

    std::set<IntVec3> planes;  // primitive inner normals of accepted facets
    for (const auto& f : hull3d(pts)) {
        const IntVec3 a = to_int_vec(pts[f[0]]);
        const IntVec3 inner = primitive(-cross(to_int_vec(pts[f[1]]) - a, to_int_vec(pts[f[2]]) - a));
        bool positive = true;
        for (const auto& g : gens)
            if (dot(inner, g) <= 0) positive = false;
        if (positive) planes.insert(inner);
    }

    SailFaceSet out{{}, region};
    for (const auto& normal : planes) {
        Integer offset;
        bool first = true;
        std::vector<IntVec3> on_plane;
        for (const auto& c : candidates) {
            const Integer v = dot(normal, c);
            if (first || v < offset) {
                offset = v;
                on_plane.clear();
                first = false;
            }
            if (v == offset) on_plane.push_back(c);
        }
        const UnimodularMap3 to_frame = complete_to_unimodular(normal);
        const UnimodularMap3 from_frame = to_frame.inverse();
        std::vector<IntVec2> flat;
        for (const auto& c : on_plane) {
            const IntVec3 m = to_frame.apply(c);
            flat.push_back({m.x, m.y});
        }
        std::vector<IntVec3> vertices;
        for (const auto& q : convex_hull(flat)) vertices.push_back(from_frame.apply({q.x, q.y, offset}));
        if (vertices.size() < 3) continue;

        // Lattice points below the plane lie in the simplex cut by it; its
        // vertices offset * g / (normal . g) must stay within the depth.
        bool reliable = true;
        for (const auto& g : gens)
            if (Rational(offset * dot(region.normal, g), dot(normal, g)) > Rational(region.depth)) reliable = false;
        out.faces.push_back({LatticeFace(std::move(vertices)), reliable});
    }
    return out;
}

}  // namespace klein
