#include "nlneumann/local_limit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nlneumann {

LocalCoefficients local_coefficients(const DensityNumerator& g, int dimension) {
    if (dimension < 1) throw std::invalid_argument("dimension must be >= 1");
    std::vector<double> zero(dimension, 0.0);
    const double g0 = g(zero);
    if (!(g0 > 0.0)) throw std::domain_error("local coefficients need g(0) > 0");
    const double factor = unit_sphere_area(dimension) / dimension;

    std::vector<double> grad;
    if (g.grad_at_zero && static_cast<int>(g.grad_at_zero->size()) == dimension) {
        grad = *g.grad_at_zero;
    } else if (g.grad_at_zero && g.grad_at_zero->size() == 1) {
        // Presets depending on z_N only.
        grad.assign(dimension, 0.0);
        grad.back() = g.grad_at_zero->front();
    } else {
        grad.assign(dimension, 0.0);
        const double step = 1e-6;
        for (int i = 0; i < dimension; ++i) {
            std::vector<double> p(zero), m(zero);
            p[i] = step;
            m[i] = -step;
            grad[i] = (g(p) - g(m)) / (2.0 * step);
        }
    }
    LocalCoefficients c;
    c.a = g0 * factor;
    for (double d : grad) c.b.push_back(d * factor);
    return c;
}

ConcentrationReport measure_concentration(const DensityNumerator& g, double alpha, double delta, int dimension,
                                          int sphere_samples) {
    if (!(alpha > 0.0 && alpha < 2.0)) throw std::invalid_argument("alpha must lie in (0,2)");
    if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
    const int n = dimension;
    const std::vector<double> zero(n, 0.0);
    const double g0 = g(zero);
    const double norm = 2.0 - alpha;

    ConcentrationReport rep;
    rep.nu1.assign(n, std::vector<double>(n, 0.0));
    rep.nu2.assign(n, 0.0);

    std::vector<std::vector<double>> dirs;
    double weight;
    if (n == 1) {
        dirs = {{1.0}, {-1.0}};
        weight = 1.0;
    } else {
        dirs = sphere_directions(n, sphere_samples);
        weight = unit_sphere_area(n) / static_cast<double>(dirs.size());
    }
    for (const auto& d : dirs) {
        RadialNumerator full{[&](double r) {
                                 std::vector<double> y(d);
                                 for (double& c : y) c *= r;
                                 return g(y);
                             },
                             g.is_constant};
        RadialNumerator diff{[&](double r) {
                                 std::vector<double> y(d);
                                 for (double& c : y) c *= r;
                                 return g(y) - g0;
                             },
                             g.is_constant};
        const double m2 = norm * weight * radial_moment(full, alpha, 0.0, delta, 2);
        const double m1 = g.is_constant ? 0.0 : norm * weight * radial_moment(diff, alpha, 0.0, delta, 1);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) rep.nu1[i][j] += d[i] * d[j] * m2;
            rep.nu2[i] += d[i] * m1;
        }
    }
    rep.mass_nu1 = rep.nu1[0][0];
    rep.mass_nu2 = 0.0;
    for (double v : rep.nu2) rep.mass_nu2 = std::max(rep.mass_nu2, std::abs(v));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i != j) rep.max_offdiag = std::max(rep.max_offdiag, std::abs(rep.nu1[i][j]));
        }
    }
    return rep;
}

LocalSolution solve_local_neumann(double diffusion, double drift, const std::vector<double>& f, const Grid& grid) {
    if (!(diffusion > 0.0)) throw std::invalid_argument("local solver needs a positive diffusion coefficient");
    const int n = grid.n;
    if (static_cast<int>(f.size()) != n) throw std::invalid_argument("local solver: source size mismatch");
    if (n < 3) throw std::invalid_argument("local solver: n >= 3 required");
    const double h = grid.dx();

    LocalSolution sol;
    sol.peclet = std::abs(drift) * h / (2.0 * diffusion);
    sol.upwind = sol.peclet > 1.0;

    // Row i: lower * u_{i-1} + diag * u_i + upper * u_{i+1} = f_i.
    const double d = diffusion / (h * h);
    double lower = -d, upper = -d, centre = 2.0 * d + 1.0;
    if (!sol.upwind) {
        lower += drift / (2.0 * h);
        upper -= drift / (2.0 * h);
    } else if (drift > 0.0) {
        upper -= drift / h;
        centre += drift / h;
    } else {
        lower += drift / h;
        centre -= drift / h;
    }
    std::vector<double> lo(n, lower), di(n, centre), up(n, upper), rhs(f);
    // Ghost nodes mirror the neighbour: u_{-1} = u_1, u_n = u_{n-2}.
    up[0] += lo[0];
    lo[0] = 0.0;
    lo[n - 1] += up[n - 1];
    up[n - 1] = 0.0;

    for (int i = 1; i < n; ++i) {
        const double w = lo[i] / di[i - 1];
        di[i] -= w * up[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    std::vector<double> u(n);
    u[n - 1] = rhs[n - 1] / di[n - 1];
    for (int i = n - 2; i >= 0; --i) u[i] = (rhs[i] - up[i] * u[i + 1]) / di[i];
    sol.u = GridFunction(grid, std::move(u));
    return sol;
}

LocalSolution solve_local_neumann(double diffusion, double drift, const std::function<double(double)>& f,
                                  const Grid& grid) {
    std::vector<double> v(grid.n);
    for (int i = 0; i < grid.n; ++i) v[i] = f(grid.x(i));
    return solve_local_neumann(diffusion, drift, v, grid);
}

SweepTable alpha_sweep(const ProblemSpec& problem_template, const std::vector<double>& alphas,
                       const std::vector<ReflectionKind>& kinds, double window_fraction) {
    if (!problem_template.normalized) throw std::invalid_argument("alpha_sweep requires a normalized problem");
    if (problem_template.measure.dimension() != 1) throw std::invalid_argument("alpha_sweep is 1-d only");
    SweepTable table;
    table.alphas = alphas;
    table.coefficients = local_coefficients(problem_template.measure.numerator(), 1);
    const double scale = problem_template.measure.scale();
    const Grid& grid = problem_template.grid;
    const LocalSolution local = solve_local_neumann(scale * table.coefficients.diffusion(),
                                                    scale * table.coefficients.b1(), problem_template.f, grid);
    table.window = window_fraction * grid.length();
    int last = 0;
    while (last + 1 < grid.n && grid.x(last + 1) <= table.window * (1.0 + 1e-12)) ++last;

    std::vector<double> prev_e(kinds.size(), std::numeric_limits<double>::infinity());
    for (double alpha : alphas) {
        ProblemSpec p = problem_template;
        p.measure = problem_template.measure.with_alpha(alpha);
        std::vector<std::vector<double>> sols;
        for (std::size_t m = 0; m < kinds.size(); ++m) {
            p.kind = kinds[m];
            SweepRow row;
            row.alpha = alpha;
            row.kind = kinds[m];
            try {
                const SolveReport rep = solve_direct(p, 0);
                double e = 0.0;
                for (int i = 0; i <= last; ++i) e = std::max(e, std::abs(rep.u.values[i] - local.u.values[i]));
                row.e_alpha = e;
                row.iterations = rep.iterations;
                row.residual = rep.residual;
                sols.push_back(rep.u.values);
                if (!(e < prev_e[m]) && !(e == 0.0 && prev_e[m] == 0.0)) table.e_decreasing = false;
                prev_e[m] = e;
            } catch (const std::exception& ex) {
                row.ok = false;
                row.message = ex.what();
                table.e_decreasing = false;
            }
            table.rows.push_back(row);
        }
        double gap = 0.0;
        for (std::size_t a = 0; a < sols.size(); ++a) {
            for (std::size_t b = a + 1; b < sols.size(); ++b) {
                for (int i = 0; i <= last; ++i) gap = std::max(gap, std::abs(sols[a][i] - sols[b][i]));
            }
        }
        table.cross_model_gap.push_back(gap);
    }
    if (table.cross_model_gap.size() >= 2) {
        table.gap_shrinks = table.cross_model_gap.back() < table.cross_model_gap.front() ||
                            (table.cross_model_gap.back() == 0.0 && table.cross_model_gap.front() == 0.0);
    }
    return table;
}

}  // namespace nlneumann
