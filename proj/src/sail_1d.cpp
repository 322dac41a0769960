#include "klein/sail1d.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "klein/parallel.hpp"

namespace klein {

ContinuedFraction::ContinuedFraction(std::vector<Integer> elements) : elements_(std::move(elements)) {
    if (elements_.empty()) throw Error(ErrorKind::invalid_argument, "continued fraction needs at least one element");
    for (std::size_t i = 1; i < elements_.size(); ++i)
        if (elements_[i] < 1)
            throw Error(ErrorKind::invalid_argument,
                        "element a" + std::to_string(i) + " = " + elements_[i].get_str() + " must be positive");
}

std::string ContinuedFraction::str() const {
    std::ostringstream out;
    out << '[';
    for (std::size_t i = 0; i < elements_.size(); ++i) out << (i ? "," : "") << elements_[i].get_str();
    out << ']';
    return out.str();
}

ContinuedFraction toggle_parity(const ContinuedFraction& cf) {
    std::vector<Integer> e = cf.elements();
    if (e.size() >= 2 && e.back() == 1) {
        e.pop_back();
        e.back() += 1;
    } else {
        e.back() -= 1;
        e.push_back(1);
    }
    return ContinuedFraction(std::move(e));
}

ContinuedFraction cf_expand(const Rational& alpha, Parity parity) {
    std::vector<Integer> elements;
    Integer p = alpha.numerator();
    Integer q = alpha.denominator();
    for (;;) {
        Integer a, r;
        mpz_fdiv_qr(a.get_mpz_t(), r.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t());
        elements.push_back(a);
        if (r == 0) break;
        p = q;
        q = r;
    }
    ContinuedFraction cf(std::move(elements));
    if (parity == Parity::even && !cf.is_even()) return toggle_parity(cf);
    if (parity == Parity::odd && cf.is_even()) return toggle_parity(cf);
    return cf;
}

Rational cf_value(const ContinuedFraction& cf) {
    const auto& e = cf.elements();
    // p/q convergents by the forward recurrence
    Integer p_prev = 1, q_prev = 0, p = e[0], q = 1;
    for (std::size_t i = 1; i < e.size(); ++i) {
        Integer p_next = e[i] * p + p_prev;
        Integer q_next = e[i] * q + q_prev;
        p_prev = std::move(p);
        q_prev = std::move(q);
        p = std::move(p_next);
        q = std::move(q_next);
    }
    return Rational(p, q);
}

Integer integer_angle(const IntVec2& a, const IntVec2& b, const IntVec2& c) {
    return abs(det(primitive(a - b), primitive(c - b)));
}

SailPolyline sail_vertices(const Rational& alpha) {
    if (alpha < Rational(1)) throw Error(ErrorKind::out_of_range, "sail needs alpha >= 1, got " + alpha.str());
    const Integer p = alpha.numerator();
    const Integer q = alpha.denominator();

    // Column tops (x, floor(alpha x)) for x = 1..q; the chain from (1,0) turns
    // clockwise, so left turns and collinear points are popped.
    std::vector<IntVec2> chain{{1, 0}};
    auto push = [&](IntVec2 point) {
        while (chain.size() >= 2) {
            const IntVec2& a = chain[chain.size() - 2];
            const IntVec2& b = chain.back();
            if (det(b - a, point - b) >= 0)
                chain.pop_back();
            else
                break;
        }
        chain.push_back(std::move(point));
    };
    for (Integer x = 1; x <= q; ++x) {
        Integer top;
        mpz_fdiv_q(top.get_mpz_t(), Integer(p * x).get_mpz_t(), q.get_mpz_t());
        if (x == 1)
            chain.push_back({1, top});  // vertical first edge, never popped by later columns
        else
            push({x, top});
    }

    SailPolyline sail;
    sail.vertices = std::move(chain);
    for (std::size_t i = 0; i + 1 < sail.vertices.size(); ++i)
        sail.edge_lengths.push_back(integer_length(sail.vertices[i], sail.vertices[i + 1]));
    for (std::size_t i = 1; i + 1 < sail.vertices.size(); ++i)
        sail.vertex_angles.push_back(integer_angle(sail.vertices[i - 1], sail.vertices[i], sail.vertices[i + 1]));
    return sail;
}

ContinuedFraction sail_to_cf(const SailPolyline& sail) {
    const auto& v = sail.vertices;
    if (v.size() < 2) throw Error(ErrorKind::degenerate, "sail polyline needs at least two vertices");
    std::vector<Integer> elements;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        if (i > 0) elements.push_back(integer_angle(v[i - 1], v[i], v[i + 1]));
        elements.push_back(integer_length(v[i], v[i + 1]));
    }
    return ContinuedFraction(std::move(elements));
}

// ---------------------------------------------------------------- Gauss-Kuzmin

GaussKuzminSample::GaussKuzminSample(int position, std::vector<double> sorted_values)
    : position_(position), values_(std::move(sorted_values)) {}

double GaussKuzminSample::cdf(double x) const {
    if (values_.empty()) return 0.0;
    const auto it = std::lower_bound(values_.begin(), values_.end(), x);
    return static_cast<double>(it - values_.begin()) / static_cast<double>(values_.size());
}

namespace {

template <class Reference>
double sup_deviation(const std::vector<double>& sorted, Reference reference) {
    // Kolmogorov-Smirnov statistic against a continuous reference CDF.
    const double n = static_cast<double>(sorted.size());
    double sup = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = reference(sorted[i]);
        sup = std::max({sup, std::abs(static_cast<double>(i + 1) / n - f), std::abs(f - static_cast<double>(i) / n)});
    }
    return sup;
}

}  // namespace

double GaussKuzminSample::sup_deviation_from_gauss() const {
    return sup_deviation(values_, [](double x) { return std::log2(1.0 + x); });
}

double GaussKuzminSample::sup_deviation_from_uniform() const {
    return sup_deviation(values_, [](double x) { return x; });
}

double GaussKuzminSample::digit_frequency(std::int64_t k) const {
    if (k < 1) throw Error(ErrorKind::out_of_range, "partial quotients are positive");
    // floor(1/z) == k  <=>  1/(k+1) < z <= 1/k
    const double lo = 1.0 / static_cast<double>(k + 1), hi = 1.0 / static_cast<double>(k);
    const auto first = std::upper_bound(values_.begin(), values_.end(), lo);
    const auto last = std::upper_bound(values_.begin(), values_.end(), hi);
    return static_cast<double>(last - first) / static_cast<double>(values_.size());
}

GaussKuzminSample gauss_kuzmin_empirical(int position, std::uint64_t samples, std::uint64_t seed, unsigned workers) {
    if (position < 1 || position > max_gauss_kuzmin_position)
        throw Error(ErrorKind::out_of_range,
                    "position must be in 1.." + std::to_string(max_gauss_kuzmin_position));
    if (samples < 1) throw Error(ErrorKind::invalid_argument, "need at least one sample");

    auto chunks = detail::run_chunks<std::vector<double>>(
        samples, workers, [&](std::uint64_t chunk, std::uint64_t, std::uint64_t count) {
            auto gen = detail::chunk_stream(seed, chunk);
            std::vector<double> out;
            out.reserve(count);
            while (out.size() < count) {
                double z = detail::uniform01(gen);
                bool hit_rational = false;
                for (int step = 1; step < position; ++step) {
                    const double inv = 1.0 / z;
                    z = inv - std::floor(inv);
                    if (z <= 0.0) {
                        hit_rational = true;
                        break;
                    }
                }
                if (!hit_rational) out.push_back(z);
            }
            return out;
        });
    std::vector<double> values;
    values.reserve(samples);
    for (auto& c : chunks) values.insert(values.end(), c.begin(), c.end());
    std::sort(values.begin(), values.end());
    return GaussKuzminSample(position, std::move(values));
}

}  // namespace klein
