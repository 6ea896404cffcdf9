#pragma once

#include <functional>
#include <string>
#include <vector>

#include "nlneumann/grid.hpp"
#include "nlneumann/measures.hpp"
#include "nlneumann/reflect.hpp"
#include "nlneumann/solver.hpp"

namespace nlneumann {

/// a = g(0)|S^{N-1}|/N, b = Dg(0)|S^{N-1}|/N.
struct LocalCoefficients {
    double a = 0.0;
    std::vector<double> b;

    double b1() const { return b.empty() ? 0.0 : b.front(); }
    /// Coefficient of -u'' in the limit equation. The second-order Taylor
    /// term of u(x+z) - u(x) carries a factor 1/2, so the limit operator is
    /// (a/2) u'' + b u'.
    double diffusion() const { return 0.5 * a; }
};

LocalCoefficients local_coefficients(const DensityNumerator& g, int dimension);

struct ConcentrationReport {
    /// (2-alpha) int_{|z|<delta} z_i z_j g(z)|z|^{-N-alpha} dz.
    std::vector<std::vector<double>> nu1;
    /// (2-alpha) int_{|z|<delta} z (g(z) - g(0))|z|^{-N-alpha} dz.
    std::vector<double> nu2;
    double mass_nu1 = 0.0;
    double mass_nu2 = 0.0;
    double max_offdiag = 0.0;
};

ConcentrationReport measure_concentration(const DensityNumerator& g, double alpha, double delta, int dimension,
                                          int sphere_samples = 256);

struct LocalSolution {
    GridFunction u;
    double peclet = 0.0;
    bool upwind = false;
};

/// -d u'' - b u' + u = f on [0, L] with u'(0) = u'(L) = 0 (ghost nodes);
/// d is the diffusion coefficient, see LocalCoefficients::diffusion.
LocalSolution solve_local_neumann(double diffusion, double drift, const std::vector<double>& f, const Grid& grid);
LocalSolution solve_local_neumann(double diffusion, double drift, const std::function<double(double)>& f,
                                  const Grid& grid);

struct SweepRow {
    double alpha = 0.0;
    ReflectionKind kind{};
    double e_alpha = 0.0;
    int iterations = 0;
    double residual = 0.0;
    bool ok = true;
    std::string message;
};

struct SweepTable {
    std::vector<SweepRow> rows;
    LocalCoefficients coefficients;
    /// max over model pairs of |u_model - u_model'| on the comparison window, per alpha.
    std::vector<double> cross_model_gap;
    std::vector<double> alphas;
    bool e_decreasing = true;
    bool gap_shrinks = true;
    double window = 0.0;
};

/// Solves the normalized nonlocal problem for every alpha and model with the
/// direct solver and compares against the local Neumann solution on [0, 0.8 L].
SweepTable alpha_sweep(const ProblemSpec& problem_template, const std::vector<double>& alphas,
                       const std::vector<ReflectionKind>& kinds, double window_fraction = 0.8);

}  // namespace nlneumann
