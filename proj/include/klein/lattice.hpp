#pragma once

// Exact integer lattice geometry in dimensions 2 and 3.

#include <array>
#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include <gmpxx.h>

#include "klein/error.hpp"

namespace klein {

using Integer = mpz_class;

/// Exact rational number, always in lowest terms with a positive denominator.
class Rational {
public:
    Rational() = default;
    Rational(const Integer& value) : value_(value) {}  // NOLINT(implicit)
    Rational(long value) : value_(value) {}            // NOLINT(implicit)
    Rational(const Integer& numerator, const Integer& denominator);

    /// Parses "p" or "p/q" (optional sign, decimal digits only).
    static Rational parse(std::string_view text);

    Integer numerator() const { return value_.get_num(); }
    Integer denominator() const { return value_.get_den(); }
    Integer floor() const;
    double to_double() const { return value_.get_d(); }
    std::string str() const;
    bool is_integer() const { return value_.get_den() == 1; }

    friend Rational operator+(const Rational& a, const Rational& b) { return from_mpq(a.value_ + b.value_); }
    friend Rational operator-(const Rational& a, const Rational& b) { return from_mpq(a.value_ - b.value_); }
    friend Rational operator*(const Rational& a, const Rational& b) { return from_mpq(a.value_ * b.value_); }
    friend Rational operator/(const Rational& a, const Rational& b);
    friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        const int c = cmp(a.value_, b.value_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

private:
    static Rational from_mpq(mpq_class q) {
        Rational r;
        r.value_ = std::move(q);
        r.value_.canonicalize();
        return r;
    }
    mpq_class value_{0};
};

struct IntVec2 {
    Integer x{0};
    Integer y{0};

    friend IntVec2 operator+(const IntVec2& a, const IntVec2& b) { return {a.x + b.x, a.y + b.y}; }
    friend IntVec2 operator-(const IntVec2& a, const IntVec2& b) { return {a.x - b.x, a.y - b.y}; }
    friend IntVec2 operator*(const Integer& s, const IntVec2& a) { return {s * a.x, s * a.y}; }
    friend bool operator==(const IntVec2& a, const IntVec2& b) { return a.x == b.x && a.y == b.y; }
    friend bool operator<(const IntVec2& a, const IntVec2& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    }
};

struct IntVec3 {
    Integer x{0};
    Integer y{0};
    Integer z{0};

    friend IntVec3 operator+(const IntVec3& a, const IntVec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend IntVec3 operator-(const IntVec3& a, const IntVec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend IntVec3 operator-(const IntVec3& a) { return {-a.x, -a.y, -a.z}; }
    friend IntVec3 operator*(const Integer& s, const IntVec3& a) { return {s * a.x, s * a.y, s * a.z}; }
    friend bool operator==(const IntVec3& a, const IntVec3& b) {
        return a.x == b.x && a.y == b.y && a.z == b.z;
    }
    friend bool operator<(const IntVec3& a, const IntVec3& b) {
        if (a.x != b.x) return a.x < b.x;
        if (a.y != b.y) return a.y < b.y;
        return a.z < b.z;
    }
};

std::string to_string(const IntVec2& v);
std::string to_string(const IntVec3& v);

Integer gcd(const Integer& a, const Integer& b);
Integer det(const IntVec2& a, const IntVec2& b);
Integer dot(const IntVec3& a, const IntVec3& b);
IntVec3 cross(const IntVec3& a, const IntVec3& b);
Integer det(const IntVec3& a, const IntVec3& b, const IntVec3& c);
Integer content(const IntVec2& v);
Integer content(const IntVec3& v);
/// Divides by the gcd of the components. The zero vector is returned unchanged.
IntVec2 primitive(const IntVec2& v);
IntVec3 primitive(const IntVec3& v);

/// Number of lattice subsegments of AB. Throws ErrorKind::degenerate when A == B.
Integer integer_length(const IntVec2& a, const IntVec2& b);
Integer integer_length(const IntVec3& a, const IntVec3& b);

/// Twice the Euclidean area of a simple lattice polygon (shoelace).
/// Throws ErrorKind::invalid_argument for fewer than three vertices or a
/// self-intersecting boundary.
Integer integer_area(std::span<const IntVec2> polygon);

/// Whether the closed polygon boundary has no self-intersections.
bool is_simple_polygon(std::span<const IntVec2> polygon);

enum class FaceDefect {
    too_few_vertices,
    repeated_vertex,
    not_coplanar,
    collinear_vertices,
    not_convex,
    plane_through_origin,
};

const char* to_string(FaceDefect defect) noexcept;

class FaceError : public Error {
public:
    FaceError(FaceDefect defect, const std::string& detail);
    FaceDefect defect() const noexcept { return defect_; }

private:
    FaceDefect defect_;
};

/// Strictly convex lattice polygon in a plane of R^3 that misses the origin.
///
/// The plane is {x : normal . x = offset} with a primitive normal and a
/// positive offset. Vertices are kept in the input cyclic order, reversed if
/// necessary so that they run counter-clockwise seen from the tip of the
/// normal.
class LatticeFace {
public:
    explicit LatticeFace(std::vector<IntVec3> vertices);

    const std::vector<IntVec3>& vertices() const noexcept { return vertices_; }
    const IntVec3& normal() const noexcept { return normal_; }
    const Integer& offset() const noexcept { return offset_; }
    std::size_t size() const noexcept { return vertices_.size(); }

    /// Integer area in the lattice of the face plane.
    Integer integer_area() const;

    friend bool operator==(const LatticeFace& a, const LatticeFace& b);

private:
    std::vector<IntVec3> vertices_;
    IntVec3 normal_;
    Integer offset_;
};

/// Same polygon up to cyclic shift of the vertex list.
bool same_polygon(const LatticeFace& a, const LatticeFace& b);

std::string to_string(const LatticeFace& face);

Integer integer_distance(const LatticeFace& face);

template <std::size_t N>
class UnimodularMatrix {
    static_assert(N == 2 || N == 3);

public:
    using Vec = std::conditional_t<N == 2, IntVec2, IntVec3>;
    using Entries = std::array<std::array<Integer, N>, N>;

    UnimodularMatrix() {
        for (std::size_t i = 0; i < N; ++i) entries_[i][i] = 1;
    }

    explicit UnimodularMatrix(Entries entries) : entries_(std::move(entries)) {
        const Integer d = determinant();
        if (d != 1 && d != -1)
            throw Error(ErrorKind::invalid_map,
                        "matrix is not unimodular (determinant " + d.get_str() + ")");
    }

    static UnimodularMatrix identity() { return UnimodularMatrix(); }

    const Integer& operator()(std::size_t row, std::size_t col) const { return entries_[row][col]; }

    Integer determinant() const {
        const auto& m = entries_;
        if constexpr (N == 2) {
            return m[0][0] * m[1][1] - m[0][1] * m[1][0];
        } else {
            return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                   m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                   m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        }
    }

    Vec apply(const Vec& v) const {
        const auto& m = entries_;
        if constexpr (N == 2) {
            return {m[0][0] * v.x + m[0][1] * v.y, m[1][0] * v.x + m[1][1] * v.y};
        } else {
            return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
                    m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
                    m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
        }
    }

    UnimodularMatrix inverse() const {
        // adjugate / det with det = +-1
        const auto& m = entries_;
        const Integer d = determinant();
        Entries inv;
        if constexpr (N == 2) {
            inv = {{{m[1][1] * d, -m[0][1] * d}, {-m[1][0] * d, m[0][0] * d}}};
        } else {
            for (std::size_t i = 0; i < 3; ++i) {
                for (std::size_t j = 0; j < 3; ++j) {
                    const std::size_t r0 = (j + 1) % 3, r1 = (j + 2) % 3;
                    const std::size_t c0 = (i + 1) % 3, c1 = (i + 2) % 3;
                    inv[i][j] = (m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0]) * d;
                }
            }
        }
        return UnimodularMatrix(std::move(inv));
    }

    friend UnimodularMatrix operator*(const UnimodularMatrix& a, const UnimodularMatrix& b) {
        Entries out;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j) {
                Integer s = 0;
                for (std::size_t k = 0; k < N; ++k) s += a.entries_[i][k] * b.entries_[k][j];
                out[i][j] = s;
            }
        return UnimodularMatrix(std::move(out));
    }

    friend bool operator==(const UnimodularMatrix& a, const UnimodularMatrix& b) {
        return a.entries_ == b.entries_;
    }

private:
    Entries entries_{};
};

using UnimodularMap2 = UnimodularMatrix<2>;
using UnimodularMap3 = UnimodularMatrix<3>;

LatticeFace apply_unimodular(const UnimodularMap3& map, const LatticeFace& face);
std::vector<IntVec2> apply_unimodular(const UnimodularMap2& map, std::span<const IntVec2> polygon);

/// Unimodular matrix whose last row is the given primitive vector.
UnimodularMap3 complete_to_unimodular(const IntVec3& primitive_row);

/// Lattice coordinates adapted to a face: `to_plane` sends the face plane to
/// {z = distance}; `polygon` holds the (x, y) coordinates of the mapped
/// vertices, counter-clockwise.
struct PlaneFrame {
    UnimodularMap3 to_plane;
    UnimodularMap3 from_plane;
    Integer distance;
    std::vector<IntVec2> polygon;
};

PlaneFrame plane_frame(const LatticeFace& face);

/// Closed containment test for a convex counter-clockwise polygon.
bool contains(std::span<const IntVec2> convex_ccw, const IntVec2& p);

/// All lattice points of a closed convex counter-clockwise polygon, sorted.
std::vector<IntVec2> lattice_points(std::span<const IntVec2> convex_ccw);

/// Strict convex hull (no collinear vertices), counter-clockwise.
std::vector<IntVec2> convex_hull(std::vector<IntVec2> points);

}  // namespace klein
