#pragma once

// Möbius form of one-dimensional framed continued fractions and the relative
// frequencies of sail edges.

#include <cstdint>

#include "klein/cubature.hpp"

namespace klein {

/// Intersection coordinates of two lines with a reference line.
struct ChartPoint1 {
    double x = 0.0;
    double y = 0.0;
};

/// Doubled angular coordinates of two lines.
struct AngularPoint {
    double phi1 = 0.0;
    double phi2 = 0.0;
};

/// 1 / (x - y)^2. Throws ErrorKind::singular when x == y.
double density_1d_chart(ChartPoint1 p);

/// cot^2((phi1 - phi2) / 2) / 4. Throws ErrorKind::singular when the angles
/// coincide modulo 2 pi.
double density_1d_angular(AngularPoint p);

/// (c - a)(d - b) / ((c - b)(d - a)).
double cross_ratio(double a, double b, double c, double d);

/// ln(1 + 1/(k(k+2))). Throws ErrorKind::out_of_range for k < 1.
double freq_1d_exact(std::int64_t k);

/// ln(2(K+1)/(K+2)), the sum of freq_1d_exact(k) over k = 1..K.
double freq_1d_partial_sum(std::int64_t k_max);

/// Integral of density_1d_chart over [x0, x1] x [y0, y1].
IntegralEstimate integrate_1d_chart(double x0, double x1, double y0, double y1, double tolerance = 1e-10);

/// Integral of density_1d_chart over [-1, 0] x [k, k+1] to absolute
/// tolerance. Throws BudgetExceeded if the tolerance is not reached.
IntegralEstimate freq_1d_numeric(std::int64_t k, double tolerance = 1e-10);

/// freq_1d_exact(k) / ln 2.
double gk_frequency(std::int64_t k);

/// Integral of density_1d_chart over [-1, 0] x [1, inf) via y = 1/u.
IntegralEstimate total_mass_check(double tolerance = 1e-10);

}  // namespace klein
