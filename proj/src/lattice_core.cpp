#include "klein/lattice.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace klein {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::invalid_argument: return "invalid argument";
        case ErrorKind::invalid_face: return "invalid face";
        case ErrorKind::invalid_map: return "invalid map";
        case ErrorKind::degenerate: return "degenerate input";
        case ErrorKind::out_of_range: return "out of range";
        case ErrorKind::singular: return "singular configuration";
        case ErrorKind::unbounded_region: return "unbounded region";
        case ErrorKind::insufficient_depth: return "insufficient depth";
        case ErrorKind::unsupported: return "unsupported";
        case ErrorKind::budget_exceeded: return "budget exceeded";
        case ErrorKind::no_samples: return "no accepted samples";
        case ErrorKind::parse_error: return "parse error";
    }
    return "unknown";
}

// ---------------------------------------------------------------- Rational

Rational::Rational(const Integer& numerator, const Integer& denominator) {
    if (denominator == 0) throw Error(ErrorKind::invalid_argument, "zero denominator");
    value_ = mpq_class(numerator, denominator);
    value_.canonicalize();
}

namespace {

bool parse_integer(std::string_view text, Integer& out) {
    std::size_t i = 0;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) ++i;
    if (i == text.size()) return false;
    for (std::size_t j = i; j < text.size(); ++j)
        if (!std::isdigit(static_cast<unsigned char>(text[j]))) return false;
    std::string s(text);
    if (s[0] == '+') s.erase(0, 1);
    return out.set_str(s, 10) == 0;
}

}  // namespace

Rational Rational::parse(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    const auto slash = text.find('/');
    Integer num, den = 1;
    const bool ok = slash == std::string_view::npos
                        ? parse_integer(text, num)
                        : parse_integer(text.substr(0, slash), num) &&
                              parse_integer(text.substr(slash + 1), den);
    if (!ok) throw Error(ErrorKind::parse_error, "malformed rational '" + std::string(text) + "'");
    if (den == 0) throw Error(ErrorKind::parse_error, "zero denominator in '" + std::string(text) + "'");
    return Rational(num, den);
}

Integer Rational::floor() const {
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), value_.get_num_mpz_t(), value_.get_den_mpz_t());
    return q;
}

std::string Rational::str() const {
    if (is_integer()) return value_.get_num().get_str();
    return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

Rational operator/(const Rational& a, const Rational& b) {
    if (b.value_ == 0) throw Error(ErrorKind::invalid_argument, "division by zero");
    return Rational::from_mpq(a.value_ / b.value_);
}

// ---------------------------------------------------------------- vectors

std::string to_string(const IntVec2& v) { return "(" + v.x.get_str() + "," + v.y.get_str() + ")"; }

std::string to_string(const IntVec3& v) {
    return "(" + v.x.get_str() + "," + v.y.get_str() + "," + v.z.get_str() + ")";
}

Integer gcd(const Integer& a, const Integer& b) {
    Integer g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

Integer det(const IntVec2& a, const IntVec2& b) { return a.x * b.y - a.y * b.x; }

Integer dot(const IntVec3& a, const IntVec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

IntVec3 cross(const IntVec3& a, const IntVec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

Integer det(const IntVec3& a, const IntVec3& b, const IntVec3& c) { return dot(a, cross(b, c)); }

Integer content(const IntVec2& v) { return gcd(v.x, v.y); }

Integer content(const IntVec3& v) { return gcd(gcd(v.x, v.y), v.z); }

IntVec2 primitive(const IntVec2& v) {
    const Integer g = content(v);
    if (g == 0) return v;
    return {v.x / g, v.y / g};
}

IntVec3 primitive(const IntVec3& v) {
    const Integer g = content(v);
    if (g == 0) return v;
    return {v.x / g, v.y / g, v.z / g};
}

Integer integer_length(const IntVec2& a, const IntVec2& b) {
    if (a == b) throw Error(ErrorKind::degenerate, "degenerate segment " + to_string(a));
    return content(b - a);
}

Integer integer_length(const IntVec3& a, const IntVec3& b) {
    if (a == b) throw Error(ErrorKind::degenerate, "degenerate segment " + to_string(a));
    return content(b - a);
}

// ---------------------------------------------------------------- polygons

namespace {

int sign(const Integer& v) { return sgn(v); }

int orientation(const IntVec2& a, const IntVec2& b, const IntVec2& c) { return sign(det(b - a, c - a)); }

bool on_segment(const IntVec2& a, const IntVec2& b, const IntVec2& p) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

bool segments_intersect(const IntVec2& p1, const IntVec2& p2, const IntVec2& q1, const IntVec2& q2) {
    const int o1 = orientation(p1, p2, q1), o2 = orientation(p1, p2, q2);
    const int o3 = orientation(q1, q2, p1), o4 = orientation(q1, q2, p2);
    if (o1 * o2 < 0 && o3 * o4 < 0) return true;
    if (o1 == 0 && on_segment(p1, p2, q1)) return true;
    if (o2 == 0 && on_segment(p1, p2, q2)) return true;
    if (o3 == 0 && on_segment(q1, q2, p1)) return true;
    if (o4 == 0 && on_segment(q1, q2, p2)) return true;
    return false;
}

}  // namespace

bool is_simple_polygon(std::span<const IntVec2> polygon) {
    const std::size_t n = polygon.size();
    if (n < 3) return false;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (polygon[i] == polygon[j]) return false;
    for (std::size_t i = 0; i < n; ++i) {
        const IntVec2& a = polygon[i];
        const IntVec2& b = polygon[(i + 1) % n];
        for (std::size_t j = i + 1; j < n; ++j) {
            const IntVec2& c = polygon[j];
            const IntVec2& d = polygon[(j + 1) % n];
            const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if (adjacent) {
                // shared endpoint only; overlapping collinear edges fold back
                const IntVec2& shared = (j == i + 1) ? b : a;
                const IntVec2& other1 = (j == i + 1) ? a : b;
                const IntVec2& other2 = (j == i + 1) ? d : c;
                if (orientation(other1, shared, other2) == 0) {
                    const IntVec2 u = shared - other1, v = other2 - shared;
                    if (u.x * v.x + u.y * v.y < 0) return false;
                }
                continue;
            }
            if (segments_intersect(a, b, c, d)) return false;
        }
    }
    return true;
}

Integer integer_area(std::span<const IntVec2> polygon) {
    if (polygon.size() < 3) throw Error(ErrorKind::invalid_argument, "polygon needs at least three vertices");
    if (!is_simple_polygon(polygon)) throw Error(ErrorKind::invalid_argument, "polygon is not simple");
    Integer twice = 0;
    for (std::size_t i = 0; i < polygon.size(); ++i)
        twice += det(polygon[i], polygon[(i + 1) % polygon.size()]);
    return abs(twice);
}

bool contains(std::span<const IntVec2> convex_ccw, const IntVec2& p) {
    const std::size_t n = convex_ccw.size();
    for (std::size_t i = 0; i < n; ++i)
        if (orientation(convex_ccw[i], convex_ccw[(i + 1) % n], p) < 0) return false;
    return true;
}

std::vector<IntVec2> lattice_points(std::span<const IntVec2> convex_ccw) {
    std::vector<IntVec2> out;
    if (convex_ccw.empty()) return out;
    Integer x0 = convex_ccw[0].x, x1 = x0, y0 = convex_ccw[0].y, y1 = y0;
    for (const auto& v : convex_ccw) {
        x0 = std::min(x0, v.x);
        x1 = std::max(x1, v.x);
        y0 = std::min(y0, v.y);
        y1 = std::max(y1, v.y);
    }
    for (Integer x = x0; x <= x1; ++x)
        for (Integer y = y0; y <= y1; ++y) {
            IntVec2 p{x, y};
            if (contains(convex_ccw, p)) out.push_back(std::move(p));
        }
    return out;
}

std::vector<IntVec2> convex_hull(std::vector<IntVec2> points) {
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    if (points.size() < 3) return points;
    std::vector<IntVec2> hull(2 * points.size());
    std::size_t k = 0;
    for (const auto& p : points) {
        while (k >= 2 && orientation(hull[k - 2], hull[k - 1], p) <= 0) --k;
        hull[k++] = p;
    }
    for (std::size_t i = points.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && orientation(hull[k - 2], hull[k - 1], points[i]) <= 0) --k;
        hull[k++] = points[i];
    }
    hull.resize(k - 1);
    return hull;
}

// ---------------------------------------------------------------- faces

const char* to_string(FaceDefect defect) noexcept {
    switch (defect) {
        case FaceDefect::too_few_vertices: return "too few vertices";
        case FaceDefect::repeated_vertex: return "repeated vertex";
        case FaceDefect::not_coplanar: return "vertices not coplanar";
        case FaceDefect::collinear_vertices: return "three consecutive vertices collinear";
        case FaceDefect::not_convex: return "polygon not strictly convex";
        case FaceDefect::plane_through_origin: return "plane passes through the origin";
    }
    return "unknown defect";
}

FaceError::FaceError(FaceDefect defect, const std::string& detail)
    : Error(ErrorKind::invalid_face, std::string(to_string(defect)) + (detail.empty() ? "" : ": " + detail)),
      defect_(defect) {}

LatticeFace::LatticeFace(std::vector<IntVec3> vertices) : vertices_(std::move(vertices)) {
    const std::size_t n = vertices_.size();
    if (n < 3) throw FaceError(FaceDefect::too_few_vertices, std::to_string(n) + " given");
    {
        auto sorted = vertices_;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw FaceError(FaceDefect::repeated_vertex, "");
    }
    auto turn = [&](std::size_t i) {
        const IntVec3& prev = vertices_[(i + n - 1) % n];
        const IntVec3& cur = vertices_[i];
        const IntVec3& next = vertices_[(i + 1) % n];
        return cross(cur - prev, next - cur);
    };
    const IntVec3 first_turn = turn(0);
    if (first_turn == IntVec3{}) throw FaceError(FaceDefect::collinear_vertices, "at " + to_string(vertices_[0]));
    normal_ = primitive(first_turn);
    const Integer level = dot(normal_, vertices_[0]);
    for (const auto& v : vertices_)
        if (dot(normal_, v) != level) throw FaceError(FaceDefect::not_coplanar, to_string(v));
    for (std::size_t i = 1; i < n; ++i) {
        const IntVec3 t = turn(i);
        if (t == IntVec3{}) throw FaceError(FaceDefect::collinear_vertices, "at " + to_string(vertices_[i]));
        if (dot(t, normal_) < 0) throw FaceError(FaceDefect::not_convex, "reflex turn at " + to_string(vertices_[i]));
    }
    for (std::size_t i = 0; i < n; ++i) {
        const IntVec3& a = vertices_[i];
        const IntVec3 edge = vertices_[(i + 1) % n] - a;
        for (std::size_t k = 0; k < n; ++k) {
            if (k == i || k == (i + 1) % n) continue;
            if (dot(cross(edge, vertices_[k] - a), normal_) <= 0)
                throw FaceError(FaceDefect::not_convex, "boundary winds more than once");
        }
    }
    if (level == 0) throw FaceError(FaceDefect::plane_through_origin, "");
    offset_ = level;
    if (offset_ < 0) {
        normal_ = -normal_;
        offset_ = -offset_;
        std::reverse(vertices_.begin() + 1, vertices_.end());
    }
}

Integer LatticeFace::integer_area() const {
    IntVec3 twice_area{};
    for (std::size_t i = 0; i < vertices_.size(); ++i)
        twice_area = twice_area + cross(vertices_[i], vertices_[(i + 1) % vertices_.size()]);
    return dot(twice_area, normal_) / dot(normal_, normal_);
}

bool operator==(const LatticeFace& a, const LatticeFace& b) { return a.vertices_ == b.vertices_; }

bool same_polygon(const LatticeFace& a, const LatticeFace& b) {
    if (a.size() != b.size()) return false;
    const auto& va = a.vertices();
    const auto& vb = b.vertices();
    const auto it = std::find(vb.begin(), vb.end(), va[0]);
    if (it == vb.end()) return false;
    const std::size_t shift = static_cast<std::size_t>(it - vb.begin());
    for (std::size_t i = 0; i < va.size(); ++i)
        if (!(va[i] == vb[(i + shift) % vb.size()])) return false;
    return true;
}

std::string to_string(const LatticeFace& face) {
    std::ostringstream out;
    for (std::size_t i = 0; i < face.size(); ++i) out << (i ? "," : "") << to_string(face.vertices()[i]);
    return out.str();
}

Integer integer_distance(const LatticeFace& face) { return face.offset(); }

LatticeFace apply_unimodular(const UnimodularMap3& map, const LatticeFace& face) {
    std::vector<IntVec3> image;
    image.reserve(face.size());
    for (const auto& v : face.vertices()) image.push_back(map.apply(v));
    return LatticeFace(std::move(image));
}

std::vector<IntVec2> apply_unimodular(const UnimodularMap2& map, std::span<const IntVec2> polygon) {
    std::vector<IntVec2> image;
    image.reserve(polygon.size());
    for (const auto& v : polygon) image.push_back(map.apply(v));
    return image;
}

UnimodularMap3 complete_to_unimodular(const IntVec3& row) {
    if (content(row) != 1) throw Error(ErrorKind::invalid_argument, "vector " + to_string(row) + " is not primitive");
    // Column operations reduce `r` to e3; U accumulates them, so row * U = e3
    // and the last row of U^{-1} is the input.
    std::array<Integer, 3> r{row.x, row.y, row.z};
    std::array<std::array<Integer, 3>, 3> u{};
    for (int i = 0; i < 3; ++i) u[i][i] = 1;
    auto add_column = [&](int dst, int src, const Integer& k) {
        r[dst] += k * r[src];
        for (int i = 0; i < 3; ++i) u[i][dst] += k * u[i][src];
    };
    auto swap_columns = [&](int a, int b) {
        std::swap(r[a], r[b]);
        for (int i = 0; i < 3; ++i) std::swap(u[i][a], u[i][b]);
    };
    for (;;) {
        int pivot = -1, nonzero = 0;
        for (int i = 0; i < 3; ++i) {
            if (r[i] == 0) continue;
            ++nonzero;
            if (pivot < 0 || abs(r[i]) < abs(r[pivot])) pivot = i;
        }
        if (nonzero <= 1) {
            if (pivot != 2) swap_columns(pivot, 2);
            break;
        }
        for (int i = 0; i < 3; ++i) {
            if (i == pivot || r[i] == 0) continue;
            Integer q;
            mpz_tdiv_q(q.get_mpz_t(), r[i].get_mpz_t(), r[pivot].get_mpz_t());
            add_column(i, pivot, -q);
        }
    }
    if (r[2] == -1)
        for (int i = 0; i < 3; ++i) u[i][2] = -u[i][2];
    return UnimodularMap3(u).inverse();
}

namespace {

Integer round_div(const Integer& a, const Integer& b) {
    Integer q;
    const Integer num = 2 * a + b, den = 2 * b;
    mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    return q;
}

// Maps (x, y, z) to (A (x, y) + t z, z), with A a Gauss-reduced basis for the
// vertex covariance and t moving the centroid next to the origin.
UnimodularMap3 reduce_in_plane(const std::vector<IntVec3>& pts, const Integer& distance) {
    const Integer n = static_cast<long>(pts.size());
    Integer sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (const auto& p : pts) {
        sx += p.x;
        sy += p.y;
        sxx += p.x * p.x;
        sxy += p.x * p.y;
        syy += p.y * p.y;
    }
    const Integer cxx = n * sxx - sx * sx, cxy = n * sxy - sx * sy, cyy = n * syy - sy * sy;
    auto form = [&](const IntVec2& a, const IntVec2& b) -> Integer {
        return a.x * cxx * b.x + (a.x * b.y + a.y * b.x) * cxy + a.y * cyy * b.y;
    };
    IntVec2 a{1, 0}, b{0, 1};
    while (true) {
        if (form(b, b) < form(a, a)) std::swap(a, b);
        const Integer mu = round_div(form(a, b), form(a, a));
        if (mu == 0) break;
        b = {b.x - mu * a.x, b.y - mu * a.y};
    }
    if (det(a, b) < 0) b = {-b.x, -b.y};
    const IntVec2 centre{a.x * sx + a.y * sy, b.x * sx + b.y * sy};
    const Integer tx = -round_div(centre.x, n * distance), ty = -round_div(centre.y, n * distance);
    return UnimodularMap3(UnimodularMap3::Entries{{{a.x, a.y, tx}, {b.x, b.y, ty}, {0, 0, 1}}});
}

}  // namespace

PlaneFrame plane_frame(const LatticeFace& face) {
    PlaneFrame frame;
    frame.to_plane = complete_to_unimodular(face.normal());
    frame.distance = face.offset();
    std::vector<IntVec3> lifted;
    for (const auto& v : face.vertices()) lifted.push_back(frame.to_plane.apply(v));
    frame.to_plane = reduce_in_plane(lifted, frame.distance) * frame.to_plane;
    frame.from_plane = frame.to_plane.inverse();
    for (const auto& v : face.vertices()) {
        const IntVec3 w = frame.to_plane.apply(v);
        frame.polygon.push_back({w.x, w.y});
    }
    Integer twice = 0;
    for (std::size_t i = 0; i < frame.polygon.size(); ++i)
        twice += det(frame.polygon[i], frame.polygon[(i + 1) % frame.polygon.size()]);
    if (twice < 0) std::reverse(frame.polygon.begin() + 1, frame.polygon.end());
    return frame;
}

}  // namespace klein
