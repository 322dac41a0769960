#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "jacobian.hpp"
#include "klein/catalog.hpp"
#include "klein/moebius1d.hpp"
#include "klein/moebius2d.hpp"

using namespace klein;

namespace {

const LatticeFace unit_triangle({{0, 0, 1}, {0, 1, 1}, {1, 0, 1}});
const LatticeFace interior_triangle({{-1, -1, 1}, {1, 0, 1}, {0, 1, 1}});

// conv(F ∪ {q}) has no lattice points besides those of F and q: checked by
// scanning a box and testing membership in the hull.
bool brute_protected(const std::vector<IntVec2>& poly, const IntVec2& q) {
    if (contains(poly, q)) return false;
    std::vector<IntVec2> pts = poly;
    pts.push_back(q);
    const auto hull = convex_hull(pts);
    const auto inside = lattice_points(hull);
    const auto own = lattice_points(poly);
    return inside.size() == own.size() + 1;
}

bool in_polygon(const RationalPolygon& poly, double x, double y) {
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& p = poly[i];
        const auto& q = poly[(i + 1) % n];
        const double px = p.x.to_double(), py = p.y.to_double();
        const double cr = (q.x.to_double() - px) * (y - py) - (q.y.to_double() - py) * (x - px);
        if (cr < -1e-12) return false;
    }
    return true;
}

Point2 sample_polygon(const RationalPolygon& poly, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    // Random convex combination of the vertices, biased but covering the polygon.
    std::vector<double> w(poly.size());
    double total = 0.0;
    for (auto& x : w) total += x = -std::log(u(rng));
    Point2 p;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        p.x += w[i] / total * poly[i].x.to_double();
        p.y += w[i] / total * poly[i].y.to_double();
    }
    return p;
}

std::vector<Triangle2> fan_of(const RationalPolygon& poly) {
    std::vector<Triangle2> out;
    for (std::size_t i = 1; i + 1 < poly.size(); ++i)
        out.push_back({Point2{poly[0].x.to_double(), poly[0].y.to_double()},
                       Point2{poly[i].x.to_double(), poly[i].y.to_double()},
                       Point2{poly[i + 1].x.to_double(), poly[i + 1].y.to_double()}});
    return out;
}

}  // namespace

TEST_SUITE("moebius_2d") {
    TEST_CASE("vertex density") {
        const VertexConfig v{{Point2{0, 0}, Point2{1, 0}, Point2{0, 1}}};
        CHECK(signed_area(v) == -0.5);
        CHECK(density_2d_vertex(v) == -8.0);
        const VertexConfig cyc{{v.points[1], v.points[2], v.points[0]}};
        CHECK(signed_area(cyc) == signed_area(v));
        const double t = 1.7;
        const VertexConfig scaled{{Point2{0, 0}, Point2{t, 0}, Point2{0, t}}};
        CHECK(density_2d_vertex(scaled) == doctest::Approx(density_2d_vertex(v) * std::pow(t, -6.0)));
        CHECK_THROWS_AS(density_2d_vertex({{Point2{0, 0}, Point2{1, 1}, Point2{2, 2}}}), Error);
    }

    TEST_CASE("dual density") {
        const DualConfig d{{Point2{1, 0}, Point2{0, 1}, Point2{-1, -1}}};
        CHECK(dual_determinant(d) == -3.0);
        CHECK(density_2d_dual(d) == doctest::Approx(8.0 / 27.0));
        const DualConfig even{{d.lines[1], d.lines[2], d.lines[0]}};
        CHECK(density_2d_dual(even) == doctest::Approx(density_2d_dual(d)));
        const DualConfig odd{{d.lines[1], d.lines[0], d.lines[2]}};
        CHECK(density_2d_dual(odd) == doctest::Approx(-density_2d_dual(d)));
        CHECK_THROWS_AS(density_2d_dual({{Point2{1, 0}, Point2{0, 1}, Point2{0.5, 0.5}}}), Error);
    }

    TEST_CASE("dual and vertex coordinates are inverse") {
        const DualConfig d{{Point2{1, 0}, Point2{0, 1}, Point2{-1, -1}}};
        const VertexConfig v = dual_to_vertex(d);
        CHECK(v.points[0].x == doctest::Approx(-2.0));
        CHECK(v.points[0].y == doctest::Approx(1.0));
        const DualConfig back = vertex_to_dual(v);
        for (int i = 0; i < 3; ++i) {
            CHECK(back.lines[i].x == doctest::Approx(d.lines[i].x));
            CHECK(back.lines[i].y == doctest::Approx(d.lines[i].y));
        }
    }

    TEST_CASE("dual density is the vertex density times the Jacobian") {
        std::mt19937_64 rng(201);
        for (int i = 0; i < 100; ++i) {
            const DualConfig d = jacobian::random_dual(rng);
            const double jac = jacobian::dual_to_vertex_jacobian(d);
            const double expected = density_2d_vertex(dual_to_vertex(d)) * std::abs(jac);
            CHECK(std::abs(density_2d_dual(d)) == doctest::Approx(std::abs(expected)).epsilon(1e-8));
        }
    }

    TEST_CASE("Jacobian oracle matches finite differences") {
        std::mt19937_64 rng(202);
        for (int i = 0; i < 10; ++i) {
            const DualConfig d = jacobian::random_dual(rng);
            std::array<std::array<double, 6>, 6> fd{};
            const double h = 1e-6;
            for (int c = 0; c < 6; ++c) {
                DualConfig plus = d, minus = d;
                (c % 2 == 0 ? plus.lines[c / 2].x : plus.lines[c / 2].y) += h;
                (c % 2 == 0 ? minus.lines[c / 2].x : minus.lines[c / 2].y) -= h;
                const VertexConfig vp = dual_to_vertex(plus), vm = dual_to_vertex(minus);
                for (int r = 0; r < 6; ++r) {
                    const double fp = r % 2 == 0 ? vp.points[r / 2].x : vp.points[r / 2].y;
                    const double fm = r % 2 == 0 ? vm.points[r / 2].x : vm.points[r / 2].y;
                    fd[r][c] = (fp - fm) / (2 * h);
                }
            }
            CHECK(jacobian::dual_to_vertex_jacobian(d) == doctest::Approx(jacobian::det6(fd)).epsilon(1e-5));
        }
    }

    TEST_CASE("angular density in n dimensions") {
        const std::array<double, 2> quarter{std::numbers::pi / 2, 0.0};
        CHECK(std::abs(density_nd_angular(1, std::span(&quarter, 1))) == doctest::Approx(0.25));
        std::mt19937_64 rng(203);
        std::uniform_real_distribution<double> phi(-3.0, 3.0);
        for (int i = 0; i < 50; ++i) {
            const std::array<double, 2> p{phi(rng), phi(rng)};
            CHECK(std::abs(density_nd_angular(1, std::span(&p, 1))) ==
                  doctest::Approx(density_1d_angular({p[0], p[1]})).epsilon(1e-12));
        }
        const std::array<std::array<double, 2>, 3> three{quarter, quarter, quarter};
        CHECK(density_nd_angular(2, three) == doctest::Approx(-1.0 / 64.0));
        CHECK_THROWS_AS(density_nd_angular(2, std::span(&quarter, 1)), Error);
        const std::array<double, 2> same{1.0, 1.0};
        CHECK_THROWS_AS(density_nd_angular(1, std::span(&same, 1)), Error);
    }

    TEST_CASE("vertex density integrals are projectively invariant") {
        // Projective maps send triangles to triangles, so both sides are
        // integrals over products of triangles.
        const double a = 1.1, b = 0.2, c = 0.1, d = -0.15, e = 0.9, f = 0.05, g = 0.12, h = -0.08;
        auto map = [&](Point2 p) {
            const double w = g * p.x + h * p.y + 1.0;
            return Point2{(a * p.x + b * p.y + c) / w, (d * p.x + e * p.y + f) / w};
        };
        const TriangleProduct box{{{Point2{0, 0}, Point2{0.4, 0}, Point2{0, 0.3}},
                                   {Point2{1.5, 0.1}, Point2{1.9, 0.2}, Point2{1.6, 0.5}},
                                   {Point2{0.2, 1.4}, Point2{0.6, 1.5}, Point2{0.3, 1.9}}}};
        TriangleProduct image;
        for (int k = 0; k < 3; ++k)
            for (int j = 0; j < 3; ++j) image[k][j] = map(box[k][j]);
        auto f6 = [](const Point6& x) {
            return std::abs(density_2d_vertex({{Point2{x[0], x[1]}, Point2{x[2], x[3]}, Point2{x[4], x[5]}}}));
        };
        CubatureOptions opt;
        opt.rel_tol = 1e-6;
        opt.max_regions = 1000000;
        const double lhs = integrate_triangle_products({box}, f6, opt).value;
        const double rhs = integrate_triangle_products({image}, f6, opt).value;
        CHECK(rhs == doctest::Approx(lhs).epsilon(1e-5));
    }

    TEST_CASE("protected points of the unit triangle") {
        const std::vector<IntVec2> t{{0, 0}, {1, 0}, {0, 1}};
        const auto got = protected_points(t);
        std::vector<IntVec2> brute;
        for (long x = -10; x <= 10; ++x)
            for (long y = -10; y <= 10; ++y)
                if (brute_protected(t, {x, y})) brute.push_back({x, y});
        CHECK(got == brute);
        CHECK(got.size() == 12);
        for (const IntVec2& q : {IntVec2{1, 1}, IntVec2{-1, 0}, IntVec2{0, -1}, IntVec2{-1, 1}, IntVec2{1, -1}})
            CHECK(std::find(got.begin(), got.end(), q) != got.end());
    }

    TEST_CASE("protected points match brute force on other polygons") {
        const std::vector<std::vector<IntVec2>> polys{
            {{0, 0}, {1, 0}, {1, 1}, {0, 1}},
            {{0, 0}, {2, 0}, {0, 2}},
            {{-1, -1}, {1, 0}, {0, 1}},
            {{0, 0}, {3, 1}, {1, 2}},
        };
        for (const auto& p : polys) {
            std::vector<IntVec2> brute;
            for (long x = -10; x <= 10; ++x)
                for (long y = -10; y <= 10; ++y)
                    if (brute_protected(p, {x, y})) brute.push_back({x, y});
            CHECK(protected_points(p) == brute);
        }
    }

    TEST_CASE("protected points are equivariant") {
        const std::vector<IntVec2> t{{0, 0}, {1, 0}, {0, 1}};
        const UnimodularMap2 m(UnimodularMap2::Entries{{{2, 1}, {1, 1}}});
        const auto image = apply_unimodular(m, t);
        auto expected = apply_unimodular(m, protected_points(t));
        std::sort(expected.begin(), expected.end());
        CHECK(protected_points(image) == expected);
        CHECK_THROWS_AS(protected_points(LatticeFace({{0, 0, 2}, {1, 0, 2}, {0, 1, 2}})), Error);
    }

    TEST_CASE("admissible domain of the unit triangle") {
        const AdmissibleDomain dom = admissible_domain(unit_triangle);
        CHECK(dom.protected_pts.size() == 12);
        CHECK_FALSE(dom.cells.empty());
        for (const auto& cell : dom.cells)
            for (const auto& poly : cell.polygons) {
                CHECK(poly.size() >= 3);
                CHECK(area(poly) > 0.0);
            }
        CHECK_THROWS_AS(admissible_domain(LatticeFace({{1, 0, 2}, {1, 1, 2}, {0, 1, 2}})), Error);
    }

    TEST_CASE("domain cells map to cones having the face") {
        std::mt19937_64 rng(207);
        for (const LatticeFace* face : {&unit_triangle, &interior_triangle}) {
            const AdmissibleDomain dom = admissible_domain(*face);
            const FaceOracle oracle(*face);
            const double ox = dom.origin.x.to_double(), oy = dom.origin.y.to_double();
            int faces = 0, total = 0;
            for (int s = 0; s < 1000; ++s) {
                const auto& cell = dom.cells[s % dom.cells.size()];
                DualConfig d;
                for (int i = 0; i < 3; ++i) d.lines[i] = sample_polygon(cell.polygons[i], rng);
                const auto verdict =
                    oracle.classify_in_frame(cone_in_frame(d, ox, oy, dom.frame.distance.get_d())).verdict;
                if (verdict == FaceVerdict::inconclusive) continue;
                ++total;
                faces += verdict == FaceVerdict::face;
            }
            CHECK(total > 950);
            CHECK(faces == total);
        }
    }

    TEST_CASE("cones having the face lie in a domain cell") {
        std::mt19937_64 rng(209);
        const AdmissibleDomain dom = admissible_domain(unit_triangle);
        const FaceOracle oracle(unit_triangle);
        const double ox = dom.origin.x.to_double(), oy = dom.origin.y.to_double();
        std::uniform_real_distribution<double> u(-4.0, 4.0);
        int found = 0;
        for (int s = 0; s < 200000 && found < 300; ++s) {
            DualConfig d;
            for (auto& l : d.lines) l = {u(rng), u(rng)};
            if (dual_determinant(d) == 0.0) continue;
            if (oracle.classify_in_frame(cone_in_frame(d, ox, oy, 1.0)).verdict != FaceVerdict::face) continue;
            ++found;
            const bool covered = std::any_of(dom.cells.begin(), dom.cells.end(), [&](const ConstraintCell& c) {
                for (int i = 0; i < 3; ++i)
                    if (!in_polygon(c.polygons[i], d.lines[i].x, d.lines[i].y)) return false;
                return true;
            });
            CHECK(covered);
        }
        CHECK(found >= 50);
    }

    TEST_CASE("closed-form polygon integral") {
        const std::vector<Point2> square{{0.1, 0.2}, {0.9, 0.2}, {0.9, 0.7}, {0.1, 0.7}};
        for (const auto& [alpha, beta] : {std::pair{2.0, Point2{0.5, -0.3}}, std::pair{-1.5, Point2{0.2, 0.4}},
                                          std::pair{3.0, Point2{0.0, 0.0}}, std::pair{1.0, Point2{1e-14, 0.0}}}) {
            CubatureOptions opt;
            opt.rel_tol = 1e-12;
            const double numeric =
                integrate_rectangle([&](double x, double y) { return std::pow(alpha + beta.x * x + beta.y * y, -3.0); },
                                    0.1, 0.9, 0.2, 0.7, opt)
                    .value;
            CHECK(integrate_inverse_cube(square, alpha, beta) == doctest::Approx(numeric).epsilon(1e-10));
        }
    }

    TEST_CASE("exact frequency of the triangle with one interior point") {
        const FrequencyResult r = frequency_exact(interior_triangle);
        CHECK(r.method == FrequencyMethod::exact);
        CHECK(r.cells > 0);
        CHECK(r.error <= 1e-5 * r.value);
        CHECK(std::abs(r.value - 0.013990) < 1e-6);

        // Same integral in six dimensions without the closed-form factor.
        const AdmissibleDomain dom = admissible_domain(interior_triangle);
        std::vector<TriangleProduct> regions;
        for (const auto& cell : dom.cells)
            for (const auto& a : fan_of(cell.polygons[0]))
                for (const auto& b : fan_of(cell.polygons[1]))
                    for (const auto& c : fan_of(cell.polygons[2])) regions.push_back({a, b, c});
        CubatureOptions opt;
        opt.rel_tol = 1e-4;
        opt.max_regions = 2'000'000;
        const IntegralEstimate six = integrate_triangle_products(
            regions,
            [](const Point6& x) {
                const DualConfig d{{Point2{x[0], x[1]}, Point2{x[2], x[3]}, Point2{x[4], x[5]}}};
                return std::abs(density_2d_dual(d));
            },
            opt);
        CHECK(six.value / 6.0 == doctest::Approx(r.value).epsilon(2e-4));
    }

    TEST_CASE("exact frequencies are lattice invariants") {
        const UnimodularMap3 m(UnimodularMap3::Entries{{{1, 2, 0}, {0, 1, 0}, {1, 1, 1}}});
        const FrequencyResult a = frequency_exact(interior_triangle);
        const FrequencyResult b = frequency_exact(apply_unimodular(m, interior_triangle));
        CHECK(b.value == doctest::Approx(a.value).epsilon(3e-5));
        CHECK(frequency_exact(square_b(2).face).value == 0.0);
        CHECK_THROWS_AS(frequency_exact(LatticeFace({{1, 0, 2}, {1, 1, 2}, {0, 1, 2}})), Error);
    }

    TEST_CASE("budget overflow reports the best estimate") {
        ExactOptions opt;
        opt.rel_tol = 1e-12;
        opt.max_regions = 10;
        try {
            frequency_exact(interior_triangle, opt);
            FAIL("expected a budget error");
        } catch (const BudgetExceeded& e) {
            CHECK(e.best_value() > 0.0);
            CHECK(e.best_error() > 0.0);
        }
    }

    TEST_CASE("Monte-Carlo frequency agrees with the exact value") {
        MonteCarloOptions opt;
        opt.samples = 1'000'000;
        opt.seed = 5;
        const FrequencyResult mc = frequency_mc(interior_triangle, opt);
        const FrequencyResult ex = frequency_exact(interior_triangle);
        CHECK(mc.method == FrequencyMethod::monte_carlo);
        CHECK(mc.accepted > 0);
        CHECK(mc.outside_support == 0);
        CHECK(std::abs(mc.value - ex.value) <= 3.0 * std::hypot(mc.error, ex.error));
    }

    TEST_CASE("Monte-Carlo results do not depend on the worker count") {
        MonteCarloOptions opt;
        opt.samples = 300'000;
        opt.seed = 9;
        opt.workers = 1;
        const FrequencyResult a = frequency_mc(unit_triangle, opt);
        opt.workers = 3;
        const FrequencyResult b = frequency_mc(unit_triangle, opt);
        CHECK(a.value == b.value);
        CHECK(a.error == b.error);
        CHECK(a.accepted == b.accepted);
        opt.seed = 10;
        CHECK(frequency_mc(unit_triangle, opt).value != a.value);
    }

    TEST_CASE("Monte-Carlo standard error shrinks like one over root n") {
        MonteCarloOptions opt;
        opt.seed = 13;
        opt.samples = 250'000;
        const double small = frequency_mc(interior_triangle, opt).error;
        opt.samples = 4'000'000;
        const double large = frequency_mc(interior_triangle, opt).error;
        CHECK(small / large == doctest::Approx(4.0).epsilon(0.35));
    }

    TEST_CASE("Monte-Carlo frequencies are lattice invariants") {
        const UnimodularMap3 m(UnimodularMap3::Entries{{{1, 2, 0}, {0, 1, 0}, {1, 1, 1}}});
        MonteCarloOptions opt;
        opt.samples = 1'000'000;
        opt.seed = 21;
        const FrequencyResult a = frequency_mc(interior_triangle, opt);
        const FrequencyResult b = frequency_mc(apply_unimodular(m, interior_triangle), opt);
        CHECK(std::abs(a.value - b.value) <= 3.0 * std::hypot(a.error, b.error));

        // An image whose plane coordinates start out long and thin.
        const LatticeFace skinny({{0, 0, 1}, {1, -2, -1}, {-1, 3, 3}});
        const FrequencyResult c = frequency_mc(unit_triangle, opt);
        const FrequencyResult d = frequency_mc(skinny, opt);
        CHECK(d.accepted > 100);
        CHECK(std::abs(c.value - d.value) <= 3.0 * std::hypot(c.error, d.error));
    }

    TEST_CASE("Monte-Carlo input validation") {
        MonteCarloOptions opt;
        opt.samples = 1;
        CHECK_THROWS_AS(frequency_mc(unit_triangle, opt), Error);
        opt.samples = 1000;
        opt.inflation = 0.5;
        CHECK_THROWS_AS(frequency_mc(unit_triangle, opt), Error);
        opt.inflation = 1.5;
        opt.samples = 200'000;
        try {
            frequency_mc(square_b(2).face, opt);
            FAIL("expected no accepted samples");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::no_samples);
        }
    }
}
