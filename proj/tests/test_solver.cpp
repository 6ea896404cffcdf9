#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "nlneumann/solver.hpp"

using namespace nlneumann;

namespace {

ProblemSpec make(double alpha, ReflectionKind kind, std::function<double(double)> f, int n = 81) {
    return ProblemSpec{LevyMeasureSpec::stable(alpha), kind, std::move(f), Grid::half_line(8.0, n), false, {}, {}};
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

double max_abs(const std::vector<double>& a) {
    double d = 0.0;
    for (double v : a) d = std::max(d, std::abs(v));
    return d;
}

const ReflectionKind kAll[] = {ReflectionKind::Censored, ReflectionKind::Fleas, ReflectionKind::Projection,
                               ReflectionKind::Mirror};

}  // namespace

TEST_CASE("iteration step") {
    CHECK(iteration_epsilon(0.0) == doctest::Approx(0.9));
    CHECK(iteration_epsilon(4.0) == doctest::Approx(0.1));
}

TEST_CASE("truncated solve keeps constants") {
    for (double alpha : {0.5, 1.5}) {
        for (int k : {2, 8}) {
            const auto r = solve_truncated(make(alpha, ReflectionKind::Mirror, [](double) { return 3.0; }), k, 1e-11,
                                           100000);
            CHECK(r.converged);
            CHECK(r.residual < 1e-10);
            for (double v : r.u.values) CHECK(std::abs(v - 3.0) <= 1e-10);
        }
    }
}

TEST_CASE("truncated solve: maximum principle, comparison, contraction") {
    const double tol = 1e-10;
    for (auto kind : kAll) {
        const ProblemSpec p = make(0.5, kind, [](double x) { return std::cos(x); });
        ProblemSpec q = p;
        q.f = [](double x) { return std::cos(x) + 0.5; };
        const auto a = solve_truncated(p, 8, tol, 100000);
        const auto b = solve_truncated(q, 8, tol, 100000);
        REQUIRE(a.converged);
        REQUIRE(b.converged);
        CHECK(max_abs(a.u.values) <= 1.0 + tol);
        for (std::size_t i = 0; i < a.u.values.size(); ++i) {
            const double d = b.u.values[i] - a.u.values[i];
            CHECK(d >= 0.0);
            CHECK(d <= 0.5 + 2.0 * tol);
        }
        CHECK(a.contraction_factor <= 1.0 - 0.05 * a.epsilon);
        CHECK(a.epsilon == doctest::Approx(iteration_epsilon(truncate(p.measure, 8).total_mass())));
    }
}

TEST_CASE("limit solve: decreasing increments, constants, uniqueness") {
    const double tol = 1e-10;
    const ProblemSpec p = make(0.5, ReflectionKind::Censored, [](double x) { return std::exp(-(x - 1) * (x - 1)); });
    const auto r = solve_limit(p, {8, 16, 32, 64}, tol, 200000);
    CHECK(r.converged);
    REQUIRE(r.cauchy_increments.size() == 3);
    CHECK(r.cauchy_monotone);
    for (std::size_t i = 1; i < r.cauchy_increments.size(); ++i) {
        CHECK(r.cauchy_increments[i] < r.cauchy_increments[i - 1]);
    }
    const auto r0 = solve_limit(p, {8, 16, 32, 64}, tol, 200000, std::vector<double>(p.grid.n, 0.0));
    CHECK(max_diff(r.u.values, r0.u.values) <= 2.0 * tol);

    const auto c = solve_limit(make(1.5, ReflectionKind::Fleas, [](double) { return -2.0; }), {4, 8, 16}, tol, 200000);
    for (double v : c.u.values) CHECK(std::abs(v + 2.0) <= 1e-10);
    for (double d : c.cauchy_increments) CHECK(d <= 1e-10);
    CHECK_THROWS(solve_limit(p, {8, 16}, tol, 100));
}

TEST_CASE("direct solve: constants, dominance, agreement with iteration") {
    const double tol = 1e-10;
    for (double alpha : {0.5, 1.5}) {
        for (auto kind : kAll) {
            const auto r = solve_direct(make(alpha, kind, [](double) { return 1.25; }));
            for (double v : r.u.values) CHECK(std::abs(v - 1.25) <= 1e-10);
            CHECK(r.dominance_margin >= 1.0 - 1e-6);
        }
    }
    const ProblemSpec p = make(0.5, ReflectionKind::Projection, [](double x) { return std::sin(x); });
    const auto d = solve_direct(p, 32);
    const auto t = solve_truncated(p, 32, tol, 200000);
    REQUIRE(t.converged);
    CHECK(max_diff(d.u.values, t.u.values) <= 10.0 * tol);
}

TEST_CASE("singular direct solve uses the Neumann closure when c = 1") {
    const auto r = solve_direct(make(1.5, ReflectionKind::Censored, [](double x) { return std::cos(x); }));
    CHECK(r.neumann_boundary);
    CHECK(r.boundary_residual < 1e-10);
    CHECK(r.residual < 1e-9);
    const auto r0 = solve_direct(make(0.5, ReflectionKind::Censored, [](double x) { return std::cos(x); }));
    CHECK_FALSE(r0.neumann_boundary);
    CHECK(r0.boundary_residual < 1e-9);
}

TEST_CASE("discrete maximum principle and linearity") {
    const double tol = 1e-10;
    auto f = [](double x) { return std::sin(2.0 * x) + 0.3; };
    auto g = [](double x) { return std::exp(-x); };
    for (double alpha : {0.5, 1.5}) {
        for (auto kind : kAll) {
            const auto uf = solve_direct(make(alpha, kind, f));
            const auto ug = solve_direct(make(alpha, kind, g));
            const auto ufg = solve_direct(make(alpha, kind, [&](double x) { return f(x) + g(x); }));
            const auto src = make(alpha, kind, f).source();
            const auto [lo, hi] = std::minmax_element(src.begin(), src.end());
            for (std::size_t i = 0; i < uf.u.values.size(); ++i) {
                CHECK(uf.u.values[i] >= *lo - tol);
                CHECK(uf.u.values[i] <= *hi + tol);
                CHECK(std::abs(ufg.u.values[i] - uf.u.values[i] - ug.u.values[i]) <= 3.0 * tol);
            }
        }
    }
}

TEST_CASE("fleas and projection agree bit for bit in one dimension") {
    for (double alpha : {0.5, 1.5}) {
        auto f = [](double x) { return std::cos(x); };
        const auto a = solve_direct(make(alpha, ReflectionKind::Fleas, f));
        const auto b = solve_direct(make(alpha, ReflectionKind::Projection, f));
        CHECK(a.u.values == b.u.values);
        const auto at = solve_truncated(make(alpha, ReflectionKind::Fleas, f), 4, 1e-10, 100000);
        const auto bt = solve_truncated(make(alpha, ReflectionKind::Projection, f), 4, 1e-10, 100000);
        CHECK(at.u.values == bt.u.values);
        CHECK(at.iterations == bt.iterations);
    }
}

TEST_CASE("mirror solution equals the free-space solution with even data") {
    const double tol = 1e-10;
    // With c = 1 the untruncated half-line row 0 carries the Neumann closure, so compare truncated operators there.
    for (auto [alpha, k] : {std::pair{0.5, 0}, std::pair{1.5, 64}}) {
        auto f = [](double x) { return std::cos(x) + 0.2 * std::abs(x); };
        const ProblemSpec ph = make(alpha, ReflectionKind::Mirror, f);
        ProblemSpec pw = ph;
        pw.grid = Grid::whole_line(8.0, 81);
        const auto a = solve_direct(ph, k);
        const auto b = solve_direct(pw, k);
        for (int i = 0; i < 81; ++i) CHECK(std::abs(a.u.values[i] - b.u.values[80 + i]) <= 5.0 * tol);
    }
}

TEST_CASE("viscous solve") {
    for (double eps : {0.1, 0.01}) {
        const auto c = solve_viscous(make(1.5, ReflectionKind::Censored, [](double) { return 2.0; }), eps, 10.0,
                                     1e-11, 50);
        for (double v : c.u.values) CHECK(std::abs(v - 2.0) <= 1e-10);
    }
    const ProblemSpec p = make(1.5, ReflectionKind::Censored, [](double x) { return std::cos(x); });
    const auto d = solve_direct(p);
    double prev = INFINITY;
    for (double eps : {0.1, 0.05, 0.025}) {
        const auto v = solve_viscous(p, eps, 1e6, 1e-10, 50);
        CHECK(v.converged);
        CHECK(v.active_clamps == 0);
        CHECK(v.max_abs_operator < 1e6 / 2.0);
        const double e = max_diff(v.u.values, d.u.values);
        CHECK(e < prev);
        prev = e;
    }
    const auto clamped = solve_viscous(p, 0.05, 0.2, 1e-10, 200);
    CHECK(clamped.active_clamps > 0);
    CHECK(clamped.max_abs_operator >= 0.2 - 1e-12);
}

TEST_CASE("Holder quotient") {
    const Grid g = Grid::half_line(1.0, 101);
    std::vector<double> lin, root;
    for (double x : g.nodes()) {
        lin.push_back(x);
        root.push_back(std::sqrt(x));
    }
    CHECK(holder_quotient(GridFunction(g, lin), 1.0, 0.5) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(holder_quotient(GridFunction(g, root), 0.5, 0.5) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS(holder_quotient(GridFunction(g, lin), 0.0, 0.5));
}

TEST_CASE("normalized problems scale the measure") {
    ProblemSpec p = make(1.5, ReflectionKind::Censored, [](double) { return 0.0; });
    p.normalized = true;
    CHECK(p.effective_measure().scale() == doctest::Approx(0.5));
}
