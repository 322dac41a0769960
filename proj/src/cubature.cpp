#include "klein/cubature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "klein/error.hpp"

namespace klein {

const char* to_string(Method method) noexcept {
    switch (method) {
        case Method::exact: return "exact";
        case Method::quadrature: return "quadrature";
        case Method::monte_carlo: return "mc";
    }
    return "unknown";
}

namespace {

// Gauss-Kronrod 7/15 on [-1, 1]; Gauss weights are zero on Kronrod-only nodes.
struct GaussKronrod15 {
    std::array<double, 15> nodes{};
    std::array<double, 15> kronrod{};
    std::array<double, 15> gauss{};

    GaussKronrod15() {
        constexpr std::array<double, 8> xgk{0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                            0.207784955007898467600689403773245, 0.0};
        constexpr std::array<double, 8> wgk{0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
        constexpr std::array<double, 4> wg{0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
        for (int i = 0; i < 7; ++i) {
            nodes[i] = -xgk[i];
            nodes[14 - i] = xgk[i];
            kronrod[i] = kronrod[14 - i] = wgk[i];
            gauss[i] = gauss[14 - i] = (i % 2 == 1) ? wg[i / 2] : 0.0;
        }
        nodes[7] = 0.0;
        kronrod[7] = wgk[7];
        gauss[7] = wg[3];
    }
};

const GaussKronrod15& gk15() {
    static const GaussKronrod15 rule;
    return rule;
}

struct Rect {
    double x0, x1, y0, y1;
    double value, error;
};

struct ByError {
    template <class T>
    bool operator()(const T& a, const T& b) const {
        return a.error < b.error;
    }
};

Rect evaluate_rect(const std::function<double(double, double)>& f, double x0, double x1, double y0, double y1) {
    const auto& r = gk15();
    const double cx = 0.5 * (x0 + x1), hx = 0.5 * (x1 - x0);
    const double cy = 0.5 * (y0 + y1), hy = 0.5 * (y1 - y0);
    double k = 0.0, g = 0.0;
    for (int i = 0; i < 15; ++i) {
        const double x = cx + hx * r.nodes[i];
        for (int j = 0; j < 15; ++j) {
            const double v = f(x, cy + hy * r.nodes[j]);
            k += r.kronrod[i] * r.kronrod[j] * v;
            g += r.gauss[i] * r.gauss[j] * v;
        }
    }
    const double jac = hx * hy;
    return {x0, x1, y0, y1, k * jac, std::abs(k - g) * jac};
}

double tolerance(const CubatureOptions& options, double value) {
    return std::max({options.abs_tol, options.rel_tol * std::abs(value),
                     64.0 * std::numeric_limits<double>::epsilon() * std::abs(value)});
}

}  // namespace

IntegralEstimate integrate_rectangle(const std::function<double(double, double)>& f, double x0, double x1,
                                     double y0, double y1, const CubatureOptions& options) {
    if (!(x0 < x1) || !(y0 < y1)) throw Error(ErrorKind::invalid_argument, "empty integration rectangle");
    std::priority_queue<Rect, std::vector<Rect>, ByError> queue;
    queue.push(evaluate_rect(f, x0, x1, y0, y1));
    double value = queue.top().value, error = queue.top().error;
    std::size_t regions = 1;
    while (error > tolerance(options, value)) {
        if (regions + 3 > options.max_regions)
            throw BudgetExceeded("rectangle cubature did not reach tolerance within " +
                                     std::to_string(options.max_regions) + " regions",
                                 value, error);
        const Rect worst = queue.top();
        queue.pop();
        value -= worst.value;
        error -= worst.error;
        const double mx = 0.5 * (worst.x0 + worst.x1), my = 0.5 * (worst.y0 + worst.y1);
        for (const Rect& child : {evaluate_rect(f, worst.x0, mx, worst.y0, my), evaluate_rect(f, mx, worst.x1, worst.y0, my),
                                  evaluate_rect(f, worst.x0, mx, my, worst.y1), evaluate_rect(f, mx, worst.x1, my, worst.y1)}) {
            value += child.value;
            error += child.error;
            queue.push(child);
        }
        regions += 3;
    }
    // Re-sum to shed the running-update drift.
    value = error = 0.0;
    for (; !queue.empty(); queue.pop()) {
        value += queue.top().value;
        error += queue.top().error;
    }
    return {value, error, Method::quadrature, regions};
}

double area(const Triangle2& t) {
    return 0.5 * std::abs((t[1].x - t[0].x) * (t[2].y - t[0].y) - (t[2].x - t[0].x) * (t[1].y - t[0].y));
}

namespace {

struct TriangleRule {
    std::vector<std::array<double, 3>> barycentric;
    std::vector<double> weights;
};

TriangleRule permuted(std::initializer_list<std::pair<std::array<double, 3>, double>> orbits) {
    TriangleRule rule;
    for (const auto& [b, w] : orbits) {
        std::array<double, 3> p = b;
        std::sort(p.begin(), p.end());
        do {
            rule.barycentric.push_back(p);
            rule.weights.push_back(w);
        } while (std::next_permutation(p.begin(), p.end()));
    }
    return rule;
}

const TriangleRule& degree5() {
    static const TriangleRule rule = permuted({
        {{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}, 0.225},
        {{0.059715871789770, 0.470142064105115, 0.470142064105115}, 0.132394152788506},
        {{0.797426985353087, 0.101286507323456, 0.101286507323456}, 0.125939180544827},
    });
    return rule;
}

const TriangleRule& degree3() {
    static const TriangleRule rule = permuted({
        {{0.659027622374092, 0.231933368553031, 0.109039009072877}, 1.0 / 6.0},
    });
    return rule;
}

std::vector<Point2> rule_points(const TriangleRule& rule, const Triangle2& t) {
    std::vector<Point2> out;
    out.reserve(rule.weights.size());
    for (const auto& b : rule.barycentric)
        out.push_back({b[0] * t[0].x + b[1] * t[1].x + b[2] * t[2].x, b[0] * t[0].y + b[1] * t[1].y + b[2] * t[2].y});
    return out;
}

template <std::size_t K>
struct Box {
    std::array<Triangle2, K> factors;
    double value = 0.0;
    double error = 0.0;
    std::size_t worst_factor = 0;
};

template <std::size_t K, class F>
void evaluate_box(Box<K>& box, const F& f) {
    const TriangleRule& hi = degree5();
    const TriangleRule& lo = degree3();
    std::array<std::vector<Point2>, K> p_hi, p_lo;
    double volume = 1.0;
    for (std::size_t k = 0; k < K; ++k) {
        p_hi[k] = rule_points(hi, box.factors[k]);
        p_lo[k] = rule_points(lo, box.factors[k]);
        volume *= area(box.factors[k]);
    }
    // Tensor rule with factor `low` (or none when low == K) using the degree-3 rule.
    auto sum = [&](std::size_t low) {
        std::array<const TriangleRule*, K> rules;
        std::array<const std::vector<Point2>*, K> pts;
        for (std::size_t k = 0; k < K; ++k) {
            rules[k] = k == low ? &lo : &hi;
            pts[k] = k == low ? &p_lo[k] : &p_hi[k];
        }
        std::array<double, 2 * K> x;
        auto recurse = [&](auto&& self, std::size_t k) -> double {
            if (k == K) return f(x);
            double s = 0.0;
            for (std::size_t i = 0; i < rules[k]->weights.size(); ++i) {
                x[2 * k] = (*pts[k])[i].x;
                x[2 * k + 1] = (*pts[k])[i].y;
                s += rules[k]->weights[i] * self(self, k + 1);
            }
            return s;
        };
        return recurse(recurse, 0) * volume;
    };
    box.value = sum(K);
    box.error = 0.0;
    double worst = -1.0;
    for (std::size_t k = 0; k < K; ++k) {
        const double e = std::abs(box.value - sum(k));
        box.error += e;
        if (e > worst) {
            worst = e;
            box.worst_factor = k;
        }
    }
}

std::array<Triangle2, 4> split(const Triangle2& t) {
    auto mid = [](const Point2& a, const Point2& b) { return Point2{0.5 * (a.x + b.x), 0.5 * (a.y + b.y)}; };
    const Point2 m01 = mid(t[0], t[1]), m12 = mid(t[1], t[2]), m20 = mid(t[2], t[0]);
    return {{{t[0], m01, m20}, {m01, t[1], m12}, {m20, m12, t[2]}, {m01, m12, m20}}};
}

template <std::size_t K, class F>
IntegralEstimate integrate_products(const std::vector<std::array<Triangle2, K>>& regions, const F& f,
                                    const CubatureOptions& options) {
    std::priority_queue<Box<K>, std::vector<Box<K>>, ByError> queue;
    double value = 0.0, error = 0.0;
    for (const auto& r : regions) {
        Box<K> box{r};
        evaluate_box(box, f);
        value += box.value;
        error += box.error;
        queue.push(std::move(box));
    }
    std::size_t count = queue.size();
    if (count == 0) return {0.0, 0.0, Method::quadrature, 0};
    while (error > tolerance(options, value)) {
        if (count + 3 > options.max_regions)
            throw BudgetExceeded("triangle-product cubature did not reach tolerance within " +
                                     std::to_string(options.max_regions) + " regions",
                                 value, error);
        const Box<K> worst = queue.top();
        queue.pop();
        value -= worst.value;
        error -= worst.error;
        for (const Triangle2& piece : split(worst.factors[worst.worst_factor])) {
            Box<K> child{worst.factors};
            child.factors[worst.worst_factor] = piece;
            evaluate_box(child, f);
            value += child.value;
            error += child.error;
            queue.push(std::move(child));
        }
        count += 3;
    }
    value = error = 0.0;
    for (; !queue.empty(); queue.pop()) {
        value += queue.top().value;
        error += queue.top().error;
    }
    return {value, error, Method::quadrature, count};
}

}  // namespace

IntegralEstimate integrate_triangle_products(const std::vector<TriangleProduct>& regions,
                                             const std::function<double(const Point6&)>& f,
                                             const CubatureOptions& options) {
    return integrate_products<3>(regions, f, options);
}

IntegralEstimate integrate_triangle_pairs(const std::vector<TrianglePair>& regions,
                                          const std::function<double(const Point4&)>& f,
                                          const CubatureOptions& options) {
    return integrate_products<2>(regions, f, options);
}

}  // namespace klein
