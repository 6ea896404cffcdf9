#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "nlneumann/local_limit.hpp"

using namespace nlneumann;

namespace {

double manufactured_error(int n, double d, double b) {
    const double L = 4.0;
    const double k = std::numbers::pi / L;
    auto exact = [&](double x) { return std::cos(k * x); };
    auto f = [&](double x) { return d * k * k * std::cos(k * x) + b * k * std::sin(k * x) + std::cos(k * x); };
    const Grid g = Grid::half_line(L, n);
    const LocalSolution s = solve_local_neumann(d, b, f, g);
    double e = 0.0;
    for (int i = 0; i < n; ++i) e = std::max(e, std::abs(s.u.values[i] - exact(g.x(i))));
    return e;
}

ProblemSpec sweep_template(DensityNumerator g, std::function<double(double)> f) {
    const double alpha = 1.5;
    return ProblemSpec{LevyMeasureSpec(1, alpha, std::move(g), 1), ReflectionKind::Censored, std::move(f),
                       Grid::half_line(8.0, 401), true, {}, {}};
}

}  // namespace

TEST_CASE("local coefficients") {
    const auto c1 = local_coefficients(constant_numerator(1.0), 1);
    CHECK(c1.a == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(c1.b1() == 0.0);
    CHECK(c1.diffusion() == doctest::Approx(1.0));
    const auto c2 = local_coefficients(affine_numerator(1.0, 1.0, 2.0), 1);
    CHECK(c2.a == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(c2.b1() == doctest::Approx(2.0).epsilon(1e-12));
    const auto c3 = local_coefficients(constant_numerator(1.0), 2);
    CHECK(c3.a == doctest::Approx(std::numbers::pi).epsilon(1e-14));
    REQUIRE(c3.b.size() == 2);
    CHECK(c3.b[0] == 0.0);
    CHECK(c3.b[1] == 0.0);
    CHECK_THROWS(local_coefficients(constant_numerator(0.0), 1));
}

TEST_CASE("concentration of the normalized second moment") {
    for (double alpha : {0.3, 1.0, 1.5, 1.9, 1.99}) {
        const auto r = measure_concentration(constant_numerator(1.0), alpha, 1.0, 1);
        CHECK(std::abs(r.mass_nu1 - 2.0) <= 1e-10);
        CHECK(r.mass_nu2 == 0.0);
    }
    const auto r = measure_concentration(constant_numerator(1.0), 1.9, 0.5, 1);
    CHECK(r.mass_nu1 == doctest::Approx(2.0 * std::pow(0.5, 0.1)).epsilon(1e-12));
    const auto r2 = measure_concentration(exp_numerator(1.0, 1.0), 1.7, 1.0, 2);
    CHECK(r2.max_offdiag < 1e-12);
}

TEST_CASE("normalized tail mass matches its closed form") {
    for (double alpha : {1.5, 1.9, 1.95}) {
        const auto m = LevyMeasureSpec::stable(alpha).scaled(2.0 - alpha);
        for (double delta : {0.25, 1.0}) {
            const double computed = 2.0 * cell_moments(m, delta, INFINITY, 0);
            const double bound = 2.0 * (2.0 - alpha) * std::pow(delta, -alpha) / alpha;
            CHECK(computed / bound <= 1.01);
            CHECK(computed / bound >= 1.0 / 1.01);
        }
    }
}

TEST_CASE("local Neumann solver") {
    const Grid g = Grid::half_line(5.0, 101);
    const auto c = solve_local_neumann(0.7, 0.3, [](double) { return 4.0; }, g);
    for (double v : c.u.values) CHECK(std::abs(v - 4.0) <= 1e-12);

    auto f = [](double x) { return std::sin(3.0 * x) + 0.2 * x; };
    const auto s = solve_local_neumann(1.0, 2.0, f, g);
    double lo = INFINITY, hi = -INFINITY;
    for (double x : g.nodes()) {
        lo = std::min(lo, f(x));
        hi = std::max(hi, f(x));
    }
    for (double v : s.u.values) {
        CHECK(v >= lo - 1e-12);
        CHECK(v <= hi + 1e-12);
    }

    const auto sym = solve_local_neumann(1.0, 0.0, [](double x) { return std::cos(2.0 * (x - 2.5)); }, g);
    for (int i = 0; i < g.n; ++i) CHECK(std::abs(sym.u.values[i] - sym.u.values[g.n - 1 - i]) <= 1e-10);
}

TEST_CASE("local solver is second order") {
    for (auto [d, b] : {std::pair{1.0, 0.0}, std::pair{0.5, 1.0}}) {
        const double e1 = manufactured_error(101, d, b);
        const double e2 = manufactured_error(201, d, b);
        const double e3 = manufactured_error(401, d, b);
        CHECK(e1 / e2 >= 3.5);
        CHECK(e1 / e2 <= 4.5);
        CHECK(e2 / e3 >= 3.5);
        CHECK(e2 / e3 <= 4.5);
    }
}

TEST_CASE("upwinding switches on at large Peclet number") {
    const Grid g = Grid::half_line(1.0, 11);
    const auto s = solve_local_neumann(0.01, 1.0, [](double x) { return x; }, g);
    CHECK(s.upwind);
    CHECK(s.peclet > 1.0);
}

TEST_CASE("alpha sweep localizes for every model") {
    const std::vector<double> alphas{1.5, 1.7, 1.9, 1.95};
    const std::vector<ReflectionKind> kinds{ReflectionKind::Censored, ReflectionKind::Fleas,
                                            ReflectionKind::Projection, ReflectionKind::Mirror};
    auto f = [](double x) { return std::exp(-(x - 1.0) * (x - 1.0)); };
    for (const auto& g : {constant_numerator(1.0), affine_numerator(1.0, 1.0, 2.0)}) {
        const SweepTable t = alpha_sweep(sweep_template(g, f), alphas, kinds);
        CHECK(t.e_decreasing);
        CHECK(t.gap_shrinks);
        CHECK(t.rows.size() == 16);
        CHECK(t.cross_model_gap.back() < t.cross_model_gap.front());
    }
    const SweepTable c = alpha_sweep(sweep_template(constant_numerator(1.0), [](double) { return 1.5; }), alphas, kinds);
    for (const auto& row : c.rows) CHECK(row.e_alpha <= 1e-10);
}

TEST_CASE("limit diffusion carries the Taylor factor one half") {
    const double alpha = 1.95;
    auto f = [](double x) { return std::exp(-(x - 1.0) * (x - 1.0)); };
    ProblemSpec p = sweep_template(constant_numerator(1.0), f);
    p.measure = p.measure.with_alpha(alpha);
    const auto nl = solve_direct(p);
    const auto coef = local_coefficients(constant_numerator(1.0), 1);
    auto err = [&](double d) {
        const auto loc = solve_local_neumann(d, coef.b1(), f, p.grid);
        double e = 0.0;
        for (int i = 0; i < p.grid.n; ++i) {
            if (p.grid.x(i) <= 0.8 * p.grid.length()) e = std::max(e, std::abs(loc.u.values[i] - nl.u.values[i]));
        }
        return e;
    };
    CHECK(err(coef.diffusion()) < 0.2 * err(coef.a));
}
