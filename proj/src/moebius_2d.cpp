#include "klein/moebius2d.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "klein/parallel.hpp"

namespace klein {

double signed_area(const VertexConfig& v) {
    const auto& [p1, p2, p3] = v.points;
    return 0.5 * (p3.x * p2.y - p2.x * p3.y + p1.x * p3.y - p3.x * p1.y + p2.x * p1.y - p1.x * p2.y);
}

double density_2d_vertex(const VertexConfig& v) {
    const double s = signed_area(v);
    if (s == 0.0) throw Error(ErrorKind::singular, "collinear vertex configuration");
    return 1.0 / (s * s * s);
}

double dual_determinant(const DualConfig& d) {
    const auto& [l1, l2, l3] = d.lines;
    return l3.x * l2.y - l2.x * l3.y + l1.x * l3.y - l3.x * l1.y + l2.x * l1.y - l1.x * l2.y;
}

double density_2d_dual(const DualConfig& d) {
    const double D = dual_determinant(d);
    if (D == 0.0) throw Error(ErrorKind::singular, "concurrent or degenerate line configuration");
    return -8.0 / (D * D * D);
}

namespace {

Point2 meet(const Point2& l, const Point2& m) {
    const double det = l.x * m.y - m.x * l.y;
    if (det == 0.0) throw Error(ErrorKind::singular, "parallel lines");
    return {(m.y - l.y) / det, (l.x - m.x) / det};
}

Point2 line_through(const Point2& p, const Point2& q) {
    const double det = p.x * q.y - q.x * p.y;
    if (det == 0.0) throw Error(ErrorKind::singular, "line through the origin has no dual coordinates");
    return {(q.y - p.y) / det, (p.x - q.x) / det};
}

}  // namespace

VertexConfig dual_to_vertex(const DualConfig& d) {
    const auto& l = d.lines;
    return {{meet(l[1], l[2]), meet(l[0], l[2]), meet(l[0], l[1])}};
}

DualConfig vertex_to_dual(const VertexConfig& v) {
    const auto& p = v.points;
    return {{line_through(p[1], p[2]), line_through(p[0], p[2]), line_through(p[0], p[1])}};
}

double density_nd_angular(int n, std::span<const std::array<double, 2>> pairs) {
    if (n < 1) throw Error(ErrorKind::out_of_range, "dimension must be >= 1");
    if (pairs.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n + 1) / 2)
        throw Error(ErrorKind::invalid_argument, "expected n(n+1)/2 angle pairs");
    const double sign = ((n + 3) / 4) % 2 == 0 ? 1.0 : -1.0;
    double value = sign * std::ldexp(1.0, -n * (n + 1));
    for (const auto& [a, b] : pairs) {
        const double half = 0.5 * std::remainder(a - b, 2.0 * M_PI);
        const double s = std::sin(half);
        if (s == 0.0) throw Error(ErrorKind::singular, "coincident angle pair");
        const double c = std::cos(half) / s;
        value *= c * c;
    }
    return value;
}

// ---------------------------------------------------------------- exact polygons

namespace {

Rational cross2(const RationalPoint& o, const RationalPoint& a, const RationalPoint& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Keeps alpha x + beta y <= gamma; an empty or degenerate result is cleared.
RationalPolygon clip(const RationalPolygon& poly, const Rational& alpha, const Rational& beta, const Rational& gamma) {
    RationalPolygon out;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const RationalPoint& p = poly[i];
        const RationalPoint& q = poly[(i + 1) % n];
        const Rational fp = alpha * p.x + beta * p.y - gamma;
        const Rational fq = alpha * q.x + beta * q.y - gamma;
        if (fp <= Rational(0)) out.push_back(p);
        if ((fp < Rational(0) && fq > Rational(0)) || (fp > Rational(0) && fq < Rational(0))) {
            const Rational t = fp / (fp - fq);
            out.push_back({p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)});
        }
    }
    RationalPolygon dedup;
    for (auto& p : out)
        if (dedup.empty() || !(dedup.back().x == p.x && dedup.back().y == p.y)) dedup.push_back(std::move(p));
    while (dedup.size() > 1 && dedup.front().x == dedup.back().x && dedup.front().y == dedup.back().y) dedup.pop_back();
    if (dedup.size() < 3 || area(dedup) == 0.0) return {};
    return dedup;
}

RationalPoint centroid(std::span<const IntVec2> poly) {
    Integer sx = 0, sy = 0;
    for (const auto& v : poly) {
        sx += v.x;
        sy += v.y;
    }
    const Integer n = static_cast<long>(poly.size());
    return {Rational(sx, n), Rational(sy, n)};
}

// {(a, b) : a (v_x - o_x) + b (v_y - o_y) <= 1 for every vertex v}; its vertices
// are the dual points of the edge lines.
RationalPolygon containment_polygon(std::span<const IntVec2> poly, const RationalPoint& o) {
    RationalPolygon out;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const RationalPoint p{Rational(poly[i].x) - o.x, Rational(poly[i].y) - o.y};
        const RationalPoint q{Rational(poly[(i + 1) % n].x) - o.x, Rational(poly[(i + 1) % n].y) - o.y};
        const Rational det = p.x * q.y - q.x * p.y;
        out.push_back({(q.y - p.y) / det, (p.x - q.x) / det});
    }
    if (area(out) < 0.0) std::reverse(out.begin(), out.end());
    return out;
}

bool inside_pushed(std::span<const IntVec2> poly, const IntVec2& q, bool& in_polygon) {
    const std::size_t n = poly.size();
    in_polygon = true;
    for (std::size_t i = 0; i < n; ++i) {
        const IntVec2 e = primitive(poly[(i + 1) % n] - poly[i]);
        const Integer v = det(e, q - poly[i]);  // >= 0 inside, lattice distance outside is -v
        if (v < 0) in_polygon = false;
        if (v < -1) return false;
    }
    return true;
}

}  // namespace

double area(const RationalPolygon& polygon) {
    if (polygon.size() < 3) return 0.0;
    Rational s = 0;
    for (std::size_t i = 1; i + 1 < polygon.size(); ++i) s = s + cross2(polygon[0], polygon[i], polygon[i + 1]);
    return (s * Rational(1, 2)).to_double();
}

std::vector<IntVec2> protected_points(std::span<const IntVec2> poly, int max_radius) {
    if (poly.size() < 3) throw Error(ErrorKind::invalid_argument, "polygon needs at least three vertices");
    const std::size_t own = lattice_points(poly).size();
    Integer x0 = poly[0].x, x1 = poly[0].x, y0 = poly[0].y, y1 = poly[0].y;
    for (const auto& v : poly) {
        x0 = std::min(x0, v.x);
        x1 = std::max(x1, v.x);
        y0 = std::min(y0, v.y);
        y1 = std::max(y1, v.y);
    }
    // Every protected point is within lattice distance one of each edge it
    // sees, so it lies in the pushed-out polygon; bound that polygon's box.
    const std::size_t n = poly.size();
    Rational px0, px1, py0, py1;
    for (std::size_t i = 0; i < n; ++i) {
        const IntVec2 e1 = primitive(poly[(i + 1) % n] - poly[i]);
        const IntVec2 e2 = primitive(poly[(i + 2) % n] - poly[(i + 1) % n]);
        const IntVec2 n1{e1.y, -e1.x}, n2{e2.y, -e2.x};
        const Integer c1 = n1.x * poly[i].x + n1.y * poly[i].y + 1;
        const Integer c2 = n2.x * poly[(i + 1) % n].x + n2.y * poly[(i + 1) % n].y + 1;
        const Integer d = det(n1, n2);
        const Rational x(c1 * n2.y - c2 * n1.y, d), y(n1.x * c2 - n2.x * c1, d);
        if (i == 0 || x < px0) px0 = x;
        if (i == 0 || x > px1) px1 = x;
        if (i == 0 || y < py0) py0 = y;
        if (i == 0 || y > py1) py1 = y;
    }

    std::vector<IntVec2> out;
    for (int r = 0;; ++r) {
        if (r > max_radius)
            throw Error(ErrorKind::out_of_range,
                        "protected-point search reached radius " + std::to_string(max_radius) + " without certificate");
        const Integer lx = x0 - r, hx = x1 + r, ly = y0 - r, hy = y1 + r;
        if (Rational(lx) < px0 && Rational(hx) > px1 && Rational(ly) < py0 && Rational(hy) > py1) break;
        std::vector<IntVec2> ring;
        if (r == 0) {
            for (Integer x = lx; x <= hx; ++x)
                for (Integer y = ly; y <= hy; ++y) ring.push_back({x, y});
        } else {
            for (Integer x = lx; x <= hx; ++x) {
                ring.push_back({x, ly});
                ring.push_back({x, hy});
            }
            for (Integer y = ly + 1; y < hy; ++y) {
                ring.push_back({lx, y});
                ring.push_back({hx, y});
            }
        }
        for (const auto& q : ring) {
            bool in_polygon = false;
            if (!inside_pushed(poly, q, in_polygon) || in_polygon) continue;
            std::vector<IntVec2> pts(poly.begin(), poly.end());
            pts.push_back(q);
            if (lattice_points(convex_hull(std::move(pts))).size() == own + 1) out.push_back(q);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<IntVec2> protected_points(const LatticeFace& face, int max_radius) {
    const PlaneFrame frame = plane_frame(face);
    if (frame.distance != 1)
        throw Error(ErrorKind::unsupported, "protected points are defined for faces at integer distance 1");
    return protected_points(frame.polygon, max_radius);
}

AdmissibleDomain admissible_domain(const LatticeFace& face) {
    PlaneFrame frame = plane_frame(face);
    if (frame.distance != 1)
        throw Error(ErrorKind::unsupported, "the exact domain is available only for faces at integer distance 1 (got " +
                                                frame.distance.get_str() + ")");
    AdmissibleDomain dom{face, frame, centroid(frame.polygon), {}, protected_points(frame.polygon), {}};
    dom.containment = containment_polygon(frame.polygon, dom.origin);

    std::vector<RationalPoint> qs;
    for (const auto& q : dom.protected_pts) qs.push_back({Rational(q.x) - dom.origin.x, Rational(q.y) - dom.origin.y});

    std::vector<int> assignment;
    std::function<void(std::size_t, const std::array<RationalPolygon, 3>&)> descend =
        [&](std::size_t k, const std::array<RationalPolygon, 3>& polys) {
            if (k == qs.size()) {
                dom.cells.push_back({polys, assignment});
                return;
            }
            for (int line = 0; line < 3; ++line) {
                std::array<RationalPolygon, 3> next = polys;
                bool empty = false;
                for (int l = 0; l < line && !empty; ++l) {
                    next[l] = clip(next[l], qs[k].x, qs[k].y, Rational(1));
                    empty = next[l].empty();
                }
                if (empty) continue;
                next[line] = clip(next[line], Rational(0) - qs[k].x, Rational(0) - qs[k].y, Rational(-1));
                if (next[line].empty()) continue;
                assignment.push_back(line);
                descend(k + 1, next);
                assignment.pop_back();
            }
        };
    descend(0, {dom.containment, dom.containment, dom.containment});
    return dom;
}

Cone3 cone_in_frame(const DualConfig& d, double origin_x, double origin_y, double distance) {
    const VertexConfig v = dual_to_vertex(d);
    std::array<Vec3d, 3> dirs;
    for (int i = 0; i < 3; ++i) dirs[i] = {origin_x + v.points[i].x, origin_y + v.points[i].y, distance};
    return Cone3(dirs);
}

double integrate_inverse_cube(std::span<const Point2> poly, double alpha, Point2 beta) {
    const std::size_t n = poly.size();
    if (n < 3) return 0.0;
    const double bb = beta.x * beta.x + beta.y * beta.y;
    auto value = [&](const Point2& p) { return alpha + beta.x * p.x + beta.y * p.y; };
    double scale = std::abs(alpha);
    for (const auto& p : poly) scale = std::max(scale, std::abs(value(p)));
    if (bb * 1e24 <= alpha * alpha) {
        double twice_area = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const Point2& p = poly[i];
            const Point2& q = poly[(i + 1) % n];
            twice_area += p.x * q.y - q.x * p.y;
        }
        return 0.5 * twice_area / (alpha * alpha * alpha);
    }
    // div(-(x - x*) L^-3) = L^-3 with L(x*) = 0; on each edge (x - x*) . normal
    // is constant and L is linear.
    const Point2 star{-alpha * beta.x / bb, -alpha * beta.y / bb};
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& p = poly[i];
        const Point2& q = poly[(i + 1) % n];
        const double u0 = value(p), u1 = value(q);
        if (u0 == 0.0 || u1 == 0.0 || (u0 < 0.0) != (u1 < 0.0))
            throw Error(ErrorKind::singular, "affine function vanishes on the polygon");
        const double c = (p.x - star.x) * (q.y - star.y) - (q.x - star.x) * (p.y - star.y);
        sum -= c * (u0 + u1) / (2.0 * u0 * u0 * u1 * u1);
    }
    return sum;
}

const char* to_string(FrequencyMethod method) noexcept {
    return method == FrequencyMethod::exact ? "exact" : "mc";
}

// ---------------------------------------------------------------- frequencies

namespace {

std::vector<Triangle2> fan(const RationalPolygon& poly) {
    std::vector<Triangle2> out;
    auto pt = [](const RationalPoint& p) { return Point2{p.x.to_double(), p.y.to_double()}; };
    for (std::size_t i = 1; i + 1 < poly.size(); ++i) out.push_back({pt(poly[0]), pt(poly[i]), pt(poly[i + 1])});
    return out;
}

constexpr double orderings = 6.0;

struct Box2 {
    double lo_x = INFINITY, hi_x = -INFINITY, lo_y = INFINITY, hi_y = -INFINITY;

    void add(const RationalPolygon& poly) {
        for (const auto& p : poly) {
            lo_x = std::min(lo_x, p.x.to_double());
            hi_x = std::max(hi_x, p.x.to_double());
            lo_y = std::min(lo_y, p.y.to_double());
            hi_y = std::max(hi_y, p.y.to_double());
        }
    }
    bool contains(double x, double y) const { return x >= lo_x && x <= hi_x && y >= lo_y && y <= hi_y; }
    Box2 inflated(double factor) const {
        const double cx = 0.5 * (lo_x + hi_x), cy = 0.5 * (lo_y + hi_y);
        const double hx = 0.5 * factor * (hi_x - lo_x), hy = 0.5 * factor * (hi_y - lo_y);
        return {cx - hx, cx + hx, cy - hy, cy + hy};
    }
};

struct ChunkTotals {
    double sum = 0.0;
    double sum_sq = 0.0;
    std::uint64_t accepted = 0;
    std::uint64_t inconclusive = 0;
    std::uint64_t outside = 0;
};

}  // namespace

FrequencyResult frequency_exact(const LatticeFace& face, const ExactOptions& options) {
    const AdmissibleDomain dom = admissible_domain(face);
    std::vector<TrianglePair> regions;
    std::vector<std::size_t> owner;
    std::vector<std::vector<Point2>> third;
    for (std::size_t c = 0; c < dom.cells.size(); ++c) {
        const auto& cell = dom.cells[c];
        for (const auto& a : fan(cell.polygons[0]))
            for (const auto& b : fan(cell.polygons[1])) {
                regions.push_back({a, b});
                owner.push_back(c);
            }
        std::vector<Point2> poly;
        for (const auto& p : cell.polygons[2]) poly.push_back({p.x.to_double(), p.y.to_double()});
        third.push_back(std::move(poly));
    }
    FrequencyResult result;
    result.method = FrequencyMethod::exact;
    result.cells = dom.cells.size();
    CubatureOptions cub;
    cub.rel_tol = options.rel_tol;
    cub.max_regions = std::max(options.max_regions, regions.size() + 3);
    double value = 0.0, error = 0.0;
    std::uint64_t count = 0;
    // Cells are integrated one at a time so the closed-form factor is fixed.
    for (std::size_t c = 0; c < dom.cells.size(); ++c) {
        std::vector<TrianglePair> mine;
        for (std::size_t r = 0; r < regions.size(); ++r)
            if (owner[r] == c) mine.push_back(regions[r]);
        const auto& poly = third[c];
        auto f = [&](const Point4& p) {
            // D = alpha + beta . (a3, b3) for fixed lines 1 and 2.
            const double alpha = p[2] * p[1] - p[0] * p[3];
            const Point2 beta{p[3] - p[1], p[0] - p[2]};
            return 8.0 * std::abs(integrate_inverse_cube(poly, alpha, beta));
        };
        try {
            const IntegralEstimate est = integrate_triangle_pairs(mine, f, cub);
            value += est.value;
            error += est.abs_error;
            count += est.samples_or_cells;
        } catch (const BudgetExceeded& e) {
            throw BudgetExceeded(e.what(), (value + e.best_value()) / orderings, (error + e.best_error()) / orderings);
        }
    }
    result.value = value / orderings;
    result.error = error / orderings;
    result.samples = count;
    return result;
}

FrequencyResult frequency_mc(const LatticeFace& face, const MonteCarloOptions& options) {
    if (options.samples < 2) throw Error(ErrorKind::invalid_argument, "need at least two samples");
    if (!(options.inflation >= 1.0)) throw Error(ErrorKind::invalid_argument, "inflation factor must be >= 1");
    const FaceOracle oracle(face, options.oracle);
    const PlaneFrame& frame = oracle.frame();
    const RationalPoint origin = centroid(frame.polygon);
    const RationalPolygon containment = containment_polygon(frame.polygon, origin);

    std::array<Box2, 3> support;
    bool from_cells = false;
    if (frame.distance == 1) {
        const AdmissibleDomain dom = admissible_domain(face);
        for (const auto& cell : dom.cells)
            for (int i = 0; i < 3; ++i) support[i].add(cell.polygons[i]);
        from_cells = !dom.cells.empty();
    }
    if (!from_cells)
        for (auto& b : support) b.add(containment);

    std::array<Box2, 3> box;
    double volume = 1.0;
    for (int i = 0; i < 3; ++i) {
        box[i] = support[i].inflated(options.inflation);
        volume *= (box[i].hi_x - box[i].lo_x) * (box[i].hi_y - box[i].lo_y);
    }
    const double ox = origin.x.to_double(), oy = origin.y.to_double(), dist = frame.distance.get_d();
    std::vector<std::array<double, 2>> verts;
    for (const auto& v : frame.polygon)
        verts.push_back({v.x.get_d() - ox, v.y.get_d() - oy});

    const auto chunks = detail::run_chunks<ChunkTotals>(
        options.samples, options.workers, [&](std::uint64_t chunk, std::uint64_t, std::uint64_t count) {
            auto gen = detail::chunk_stream(options.seed, chunk);
            ChunkTotals t;
            for (std::uint64_t s = 0; s < count; ++s) {
                DualConfig d;
                for (int i = 0; i < 3; ++i) {
                    d.lines[i].x = box[i].lo_x + (box[i].hi_x - box[i].lo_x) * detail::uniform01(gen);
                    d.lines[i].y = box[i].lo_y + (box[i].hi_y - box[i].lo_y) * detail::uniform01(gen);
                }
                bool contained = true;
                for (int i = 0; i < 3 && contained; ++i)
                    for (const auto& v : verts)
                        if (d.lines[i].x * v[0] + d.lines[i].y * v[1] > 1.0 + 1e-12) {
                            contained = false;
                            break;
                        }
                if (!contained) continue;
                const double D = dual_determinant(d);
                if (D == 0.0) continue;
                FaceDecision decision;
                try {
                    decision = oracle.classify_in_frame(cone_in_frame(d, ox, oy, dist));
                } catch (const Error& e) {
                    if (e.kind() != ErrorKind::singular) throw;
                    continue;
                }
                if (decision.verdict == FaceVerdict::inconclusive) {
                    ++t.inconclusive;
                    continue;
                }
                if (decision.verdict != FaceVerdict::face) continue;
                const double w = 8.0 / std::abs(D * D * D) * volume / orderings;
                t.sum += w;
                t.sum_sq += w * w;
                ++t.accepted;
                for (int i = 0; i < 3; ++i)
                    if (!support[i].contains(d.lines[i].x, d.lines[i].y)) {
                        ++t.outside;
                        break;
                    }
            }
            return t;
        });

    ChunkTotals total;
    for (const auto& c : chunks) {
        total.sum += c.sum;
        total.sum_sq += c.sum_sq;
        total.accepted += c.accepted;
        total.inconclusive += c.inconclusive;
        total.outside += c.outside;
    }
    if (total.accepted == 0)
        throw Error(ErrorKind::no_samples, "no sampled configuration has " + to_string(face) + " as a sail face");

    FrequencyResult r;
    r.method = FrequencyMethod::monte_carlo;
    r.samples = options.samples;
    r.accepted = total.accepted;
    r.inconclusive = total.inconclusive;
    r.outside_support = total.outside;
    const double n = static_cast<double>(options.samples - total.inconclusive);
    r.value = total.sum / n;
    const double var = std::max(0.0, (total.sum_sq / n - r.value * r.value) * n / (n - 1.0));
    r.error = std::sqrt(var / n);
    if (static_cast<double>(total.inconclusive) > 0.01 * static_cast<double>(options.samples))
        r.warnings.push_back("inconclusive rate above 1%");
    if (total.outside > 0)
        r.warnings.push_back(std::to_string(total.outside) + " accepted samples outside the derived support box");
    return r;
}

}  // namespace klein
