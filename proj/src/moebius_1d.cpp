#include "klein/moebius1d.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "klein/error.hpp"

namespace klein {

double density_1d_chart(ChartPoint1 p) {
    const double d = p.x - p.y;
    if (d == 0.0) throw Error(ErrorKind::singular, "chart point on the diagonal x = y");
    return 1.0 / (d * d);
}

double density_1d_angular(AngularPoint p) {
    const double half = 0.5 * std::remainder(p.phi1 - p.phi2, 2.0 * std::numbers::pi);
    const double s = std::sin(half);
    if (s == 0.0) throw Error(ErrorKind::singular, "coincident angular coordinates");
    const double c = std::cos(half) / s;
    return 0.25 * c * c;
}

double cross_ratio(double a, double b, double c, double d) {
    const double den = (c - b) * (d - a);
    if (den == 0.0) throw Error(ErrorKind::singular, "cross-ratio of coincident points");
    return (c - a) * (d - b) / den;
}

namespace {

void require_positive(std::int64_t k) {
    if (k < 1) throw Error(ErrorKind::out_of_range, "k must be >= 1, got " + std::to_string(k));
}

}  // namespace

double freq_1d_exact(std::int64_t k) {
    require_positive(k);
    const double kk = static_cast<double>(k);
    return std::log1p(1.0 / (kk * (kk + 2.0)));
}

double freq_1d_partial_sum(std::int64_t k_max) {
    require_positive(k_max);
    const double kk = static_cast<double>(k_max);
    // 2(K+1)/(K+2) = 1 + K/(K+2)
    return std::log1p(kk / (kk + 2.0));
}

IntegralEstimate integrate_1d_chart(double x0, double x1, double y0, double y1, double tolerance) {
    if (!(tolerance > 0.0)) throw Error(ErrorKind::invalid_argument, "tolerance must be positive");
    CubatureOptions options;
    options.abs_tol = tolerance;
    options.rel_tol = 0.0;
    return integrate_rectangle([](double x, double y) { return density_1d_chart({x, y}); }, x0, x1, y0, y1,
                               options);
}

IntegralEstimate freq_1d_numeric(std::int64_t k, double tolerance) {
    require_positive(k);
    const double kk = static_cast<double>(k);
    return integrate_1d_chart(-1.0, 0.0, kk, kk + 1.0, tolerance);
}

double gk_frequency(std::int64_t k) { return freq_1d_exact(k) / std::numbers::ln2; }

IntegralEstimate total_mass_check(double tolerance) {
    if (!(tolerance > 0.0)) throw Error(ErrorKind::invalid_argument, "tolerance must be positive");
    CubatureOptions options;
    options.abs_tol = tolerance;
    options.rel_tol = 0.0;
    return integrate_rectangle(
        [](double x, double u) {
            const double d = x * u - 1.0;
            return 1.0 / (d * d);
        },
        -1.0, 0.0, 0.0, 1.0, options);
}

}  // namespace klein
