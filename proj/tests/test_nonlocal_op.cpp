#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "nlneumann/appendix_oracles.hpp"
#include "nlneumann/nonlocal_op.hpp"

using namespace nlneumann;

namespace {

const ReflectionKind kAll[] = {ReflectionKind::Censored, ReflectionKind::Fleas, ReflectionKind::Projection,
                               ReflectionKind::Mirror};

GridFunction sample(const Grid& g, double (*f)(double)) {
    std::vector<double> v;
    for (double x : g.nodes()) v.push_back(f(x));
    return GridFunction(g, v);
}

AnalyticFunction bump() {
    AnalyticFunction phi;
    phi.f = [](double s) { return std::exp(-(s - 1.0) * (s - 1.0)); };
    phi.df = [](double s) { return -2.0 * (s - 1.0) * std::exp(-(s - 1.0) * (s - 1.0)); };
    phi.d2f = [](double s) {
        const double t = s - 1.0;
        return (4.0 * t * t - 2.0) * std::exp(-t * t);
    };
    return phi;
}

}  // namespace

TEST_CASE("constants are annihilated") {
    const Grid g = Grid::half_line(8.0, 81);
    const GridFunction u(g, std::vector<double>(81, 7.0));
    for (double alpha : {0.5, 1.5}) {
        const auto m = LevyMeasureSpec::stable(alpha);
        for (auto kind : kAll) {
            for (int i : {1, 3, 40, 80}) {
                const double x = g.x(i);
                CHECK(std::abs(eval_inner(u, m, kind, x, {})) < 1e-10);
                CHECK(std::abs(eval_outer(u, m, kind, x, {})) < 1e-10);
            }
            const AssembledOperator op = assemble_operator({g, m, kind, {}, 0, {}});
            const Eigen::VectorXd r = op.A * Eigen::VectorXd::Constant(81, 7.0) + 7.0 * op.b;
            CHECK(r.cwiseAbs().maxCoeff() < 1e-10);
        }
    }
}

TEST_CASE("linear function has zero inner part in the interior") {
    const Grid g = Grid::half_line(8.0, 81);
    const GridFunction u = sample(g, [](double x) { return x; });
    const auto m = LevyMeasureSpec::stable(0.5);
    for (int i : {20, 40, 60}) CHECK(std::abs(eval_inner(u, m, ReflectionKind::Censored, g.x(i), {})) < 1e-12);
}

TEST_CASE("quadratic inner part matches the closed form") {
    AnalyticFunction phi;
    phi.f = [](double s) { return s * s; };
    phi.df = [](double s) { return 2.0 * s; };
    phi.d2f = [](double) { return 2.0; };
    for (double alpha : {0.5, 1.2, 1.5}) {
        const auto m = LevyMeasureSpec::stable(alpha);
        const double delta = 0.25;
        const double exact = 2.0 * std::pow(delta, 2.0 - alpha) / (2.0 - alpha);
        for (auto kind : kAll) {
            const OperatorValue v = eval_inner(phi, m, kind, 2.0, delta);
            CHECK(std::abs(v.value - exact) <= 1e-8 * exact);
        }
    }
}

TEST_CASE("outer part is bounded by the tail mass") {
    const Grid g = Grid::half_line(8.0, 161);
    const GridFunction u = sample(g, [](double x) { return std::cos(3.0 * x); });
    for (double alpha : {0.5, 1.5, 1.9}) {
        const auto m = LevyMeasureSpec::stable(alpha).scaled(2.0 - alpha);
        for (double delta : {0.5, 1.0}) {
            const double bound = 2.0 * 2.0 * (2.0 - alpha) * std::pow(delta, -alpha) / alpha;
            for (auto kind : kAll) {
                for (int i : {0, 10, 80, 160}) {
                    CHECK(std::abs(eval_outer(u, m, kind, g.x(i), {delta, 1, 1e-6})) <= bound);
                }
            }
        }
    }
}

TEST_CASE("mirror outer part equals the free-space outer part of the even extension") {
    const int n = 81;
    const Grid half = Grid::half_line(8.0, n);
    const Grid whole = Grid::whole_line(8.0, n);
    const GridFunction uh = sample(half, [](double x) { return std::cos(x) + 0.1 * x; });
    const GridFunction uw = sample(whole, [](double x) { return std::cos(x) + 0.1 * std::abs(x); });
    for (double alpha : {0.5, 1.5}) {
        const auto m = LevyMeasureSpec::stable(alpha);
        for (int i : {0, 1, 5, 30, 80}) {
            const double x = half.x(i);
            const double a = eval_outer(uh, m, ReflectionKind::Mirror, x, {});
            const double b = eval_outer(uw, m, ReflectionKind::Censored, x, {});
            CHECK(std::abs(a - b) <= 1e-10);
        }
    }
}

TEST_CASE("compensator drift") {
    const auto m = LevyMeasureSpec::stable(1.5);
    for (double x : {0.1, 0.25, 0.5}) {
        const DriftValue d = compensator_drift(m, ReflectionKind::Censored, x, 1.0);
        const double exact = (std::pow(x, -0.5) - 1.0) / 0.5;
        CHECK(std::abs(d.value - exact) <= 1e-10 * exact);
        CHECK_FALSE(d.divergent);
    }
    for (double alpha : {0.5, 1.5}) {
        const auto ms = LevyMeasureSpec::stable(alpha);
        for (auto kind : kAll) CHECK(std::abs(compensator_drift(ms, kind, 2.0, 1.0).value) < 1e-12);
        for (double x : {0.01, 0.2, 0.7, 1.5}) CHECK(compensator_drift(ms, ReflectionKind::Mirror, x, 1.0).value >= 0.0);
    }
    const DriftValue at0 = compensator_drift(m, ReflectionKind::Censored, 0.0, 1.0);
    CHECK(at0.divergent);
}

TEST_CASE("assembled truncated operator is a monotone scheme") {
    const Grid g = Grid::half_line(8.0, 81);
    for (double alpha : {0.5, 1.5}) {
        const LevyMeasureSpec m(1, alpha, affine_numerator(1.0, 0.5, 2.0), default_c_flag(alpha));
        for (auto kind : kAll) {
            for (int k : {4, 16}) {
                const AssembledOperator op = assemble_operator({g, m, kind, {}, k, {}});
                for (int i = 0; i < g.n; ++i) {
                    CHECK(op.A(i, i) <= 0.0);
                    double rs = 0.0;
                    for (int j = 0; j < g.n; ++j) {
                        if (j != i) CHECK(op.A(i, j) >= 0.0);
                        rs += op.A(i, j);
                    }
                    CHECK(std::abs(rs) <= 1e-6);
                }
            }
        }
    }
}

TEST_CASE("strict interior maximum gives a nonpositive operator value") {
    const Grid g = Grid::half_line(8.0, 81);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ud(-1.0, 1.0);
    for (double alpha : {0.5, 1.5}) {
        const auto m = LevyMeasureSpec::stable(alpha);
        for (auto kind : kAll) {
            for (int k : {0, 16}) {
                const AssembledOperator op = assemble_operator({g, m, kind, {}, k, {}});
                for (int trial = 0; trial < 20; ++trial) {
                    Eigen::VectorXd u(g.n);
                    for (int i = 0; i < g.n; ++i) u(i) = ud(rng);
                    const int imax = 1 + trial * 3;
                    u(imax) = 2.0;
                    const double v = op.A.row(imax).dot(u) + op.b(imax);
                    CHECK(v <= 1e-10);
                }
            }
        }
    }
}

TEST_CASE("inner and outer parts are consistent across split radii") {
    const AnalyticFunction phi = bump();
    for (double alpha : {0.5, 1.5}) {
        const auto m = LevyMeasureSpec::stable(alpha);
        for (auto kind : kAll) {
            for (double x : {0.3, 1.5}) {
                const double a = eval_inner(phi, m, kind, x, 0.2).value + eval_outer(phi, m, kind, x, 0.2).value;
                const double b = eval_inner(phi, m, kind, x, 0.5).value + eval_outer(phi, m, kind, x, 0.5).value;
                CHECK(std::abs(a - b) <= 1e-8);
            }
        }
    }
}

TEST_CASE("inner part vanishes with the split radius") {
    const AnalyticFunction phi = bump();
    for (double alpha : {0.5, 1.5}) {
        const auto m = LevyMeasureSpec::stable(alpha);
        for (auto kind : kAll) {
            double prev = INFINITY;
            for (double delta : {0.2, 0.1, 0.05, 0.025}) {
                const double v = std::abs(eval_inner(phi, m, kind, 2.0, delta).value);
                CHECK(v < prev);
                prev = v;
            }
        }
    }
}

TEST_CASE("censored operator on minus log scales like J") {
    AnalyticFunction phi;
    phi.f = [](double s) { return -std::log(s); };
    phi.df = [](double s) { return -1.0 / s; };
    phi.d2f = [](double s) { return 1.0 / (s * s); };
    for (double alpha : {0.3, 0.5, 0.8}) {
        const double J = integral_J(alpha).value;
        const auto m = LevyMeasureSpec::stable(alpha);
        for (double x : {0.1, 1.0, 3.0}) {
            const double v = -apply_operator(phi, m, ReflectionKind::Censored, x, 0.5 * x).value * std::pow(x, alpha);
            CHECK(std::abs(v - J) <= 1e-4);
        }
    }
}

TEST_CASE("truncated rows converge to the untruncated row") {
    const Grid g = Grid::half_line(8.0, 81);
    const auto m = LevyMeasureSpec::stable(1.5);
    const AssembledOperator a0 = assemble_operator({g, m, ReflectionKind::Fleas, {}, 0, {}});
    double prev = INFINITY;
    for (int k : {4, 16, 64, 256}) {
        const AssembledOperator ak = assemble_operator({g, m, ReflectionKind::Fleas, {}, k, {}});
        const double d = (ak.A - a0.A).bottomRows(g.n - 1).cwiseAbs().maxCoeff();
        CHECK(d < prev);
        prev = d;
    }
    CHECK(a0.neumann_boundary);
}
