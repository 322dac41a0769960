#pragma once

// Adaptive cubature on rectangles and on products of three triangles.

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace klein {

enum class Method { exact, quadrature, monte_carlo };

const char* to_string(Method method) noexcept;

struct IntegralEstimate {
    double value = 0.0;
    double abs_error = 0.0;
    Method method = Method::quadrature;
    std::uint64_t samples_or_cells = 0;
};

struct CubatureOptions {
    double abs_tol = 0.0;
    double rel_tol = 1e-10;
    std::size_t max_regions = 200000;
};

/// Tensor Gauss-Kronrod (7/15) with global adaptive bisection of the worst
/// region. Throws BudgetExceeded when the tolerance is not met within
/// max_regions.
IntegralEstimate integrate_rectangle(const std::function<double(double, double)>& f, double x0, double x1,
                                     double y0, double y1, const CubatureOptions& options = {});

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

using Triangle2 = std::array<Point2, 3>;

double area(const Triangle2& t);

/// Region T1 x T2 x T3 of R^6; a point is (a1, b1, a2, b2, a3, b3).
using TriangleProduct = std::array<Triangle2, 3>;

using Point6 = std::array<double, 6>;

/// Region T1 x T2 of R^4; a point is (a1, b1, a2, b2).
using TrianglePair = std::array<Triangle2, 2>;

using Point4 = std::array<double, 4>;

/// Integrates f over a union of triangle products. Each region uses the
/// degree-5 seven-point rule in every factor; the error in each factor is
/// estimated against a degree-3 rule, and the worst region is refined by
/// splitting its worst factor into four.
IntegralEstimate integrate_triangle_products(const std::vector<TriangleProduct>& regions,
                                             const std::function<double(const Point6&)>& f,
                                             const CubatureOptions& options = {});

/// Same scheme on a union of triangle pairs.
IntegralEstimate integrate_triangle_pairs(const std::vector<TrianglePair>& regions,
                                          const std::function<double(const Point4&)>& f,
                                          const CubatureOptions& options = {});

}  // namespace klein
