#pragma once

// Ordinary continued fractions and the sail of a planar angle.

#include <cstdint>
#include <vector>

#include "klein/lattice.hpp"

namespace klein {

enum class Parity { shortest, even, odd };

/// Finite sequence [a0, a1, ..., an] with a0 any integer and ai >= 1 for i >= 1.
class ContinuedFraction {
public:
    explicit ContinuedFraction(std::vector<Integer> elements);

    const std::vector<Integer>& elements() const noexcept { return elements_; }
    std::size_t size() const noexcept { return elements_.size(); }
    /// Even or odd by the total number of elements.
    bool is_even() const noexcept { return elements_.size() % 2 == 0; }
    std::string str() const;

    friend bool operator==(const ContinuedFraction&, const ContinuedFraction&) = default;

private:
    std::vector<Integer> elements_;
};

ContinuedFraction cf_expand(const Rational& alpha, Parity parity = Parity::shortest);
Rational cf_value(const ContinuedFraction& cf);
/// [.., an] <-> [.., an - 1, 1]; the other decomposition of the same rational.
ContinuedFraction toggle_parity(const ContinuedFraction& cf);

/// Bounded part of the boundary of conv(Z^2 ∩ angle \ {0}) for the angle
/// between {y = 0, x >= 0} and {y = alpha x, x >= 0}.
struct SailPolyline {
    std::vector<IntVec2> vertices;       // A0 = (1,0), A1, ..., Ak
    std::vector<Integer> edge_lengths;   // integer length of A_i A_{i+1}
    std::vector<Integer> vertex_angles;  // integer angle at A_1 .. A_{k-1}
};

/// Throws ErrorKind::out_of_range when alpha < 1.
SailPolyline sail_vertices(const Rational& alpha);

/// Interleaves edge lengths and vertex angles recomputed from the vertices.
/// Throws ErrorKind::degenerate for fewer than two vertices.
ContinuedFraction sail_to_cf(const SailPolyline& sail);

/// Integer angle at B between the lattice rays BA and BC: |det| of the
/// primitive direction vectors.
Integer integer_angle(const IntVec2& a, const IntVec2& b, const IntVec2& c);

/// Samples of z_n(alpha) = [0; a_n, a_{n+1}, ...] for alpha uniform in (0,1).
class GaussKuzminSample {
public:
    GaussKuzminSample(int position, std::vector<double> sorted_values);

    int position() const noexcept { return position_; }
    std::size_t size() const noexcept { return values_.size(); }
    const std::vector<double>& sorted_values() const noexcept { return values_; }

    /// Fraction of samples with z_n < x.
    double cdf(double x) const;
    /// sup over x of |empirical CDF - log2(1 + x)|.
    double sup_deviation_from_gauss() const;
    /// sup over x of |empirical CDF - x|.
    double sup_deviation_from_uniform() const;
    /// Fraction of samples whose n-th partial quotient floor(1/z_n) equals k.
    double digit_frequency(std::int64_t k) const;

private:
    int position_;
    std::vector<double> values_;
};

inline constexpr int max_gauss_kuzmin_position = 12;

/// Runs n - 1 Gauss-map iterations on `samples` uniform draws. Deterministic
/// for a fixed seed, independent of the worker count.
GaussKuzminSample gauss_kuzmin_empirical(int position, std::uint64_t samples, std::uint64_t seed,
                                         unsigned workers = 1);

}  // namespace klein
