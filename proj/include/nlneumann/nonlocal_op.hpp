#pragma once

#include <Eigen/Dense>

#include <functional>
#include <vector>

#include "nlneumann/grid.hpp"
#include "nlneumann/measures.hpp"
#include "nlneumann/reflect.hpp"

namespace nlneumann {

struct OperatorSplitParams {
    /// Inner/outer split radius; 0 selects max(4 dx, L/64).
    double delta = 0.0;
    /// Sub-cells per grid cell for the kernel moments of a non-constant g.
    int quad_cells_per_node = 1;
    /// Reported bound for the measure mass beyond L/2.
    double tail_tol = 1e-6;
};

double default_delta(const Grid& grid);
/// Resolves params.delta against the grid and validates delta <= L/4.
double resolve_delta(const Grid& grid, const OperatorSplitParams& params);

/// Discretization of I on a grid. k = 0 means the untruncated measure,
/// k >= 1 restricts it to |z| > 1/k. Half-line grids use the reflection
/// model; whole-line grids ignore it (free-space operator).
struct OperatorSetup {
    Grid grid;
    LevyMeasureSpec measure;
    ReflectionKind kind = ReflectionKind::Censored;
    OperatorSplitParams params;
    int k = 0;
    Extension extension;
};

/// One discrete row: (I u)(x_i) ~ sum_j weights[j] u_j + affine.
struct OperatorRow {
    std::vector<double> weights;
    double affine = 0.0;
    /// True when the row is undefined (boundary node of a singular operator
    /// whose first moment diverges); weights are zero then.
    bool singular = false;
};

/// Row contribution of jumps with r_from <= |z| < r_to.
OperatorRow operator_row(const OperatorSetup& setup, int i, double r_from, double r_to);

struct AssembledOperator {
    Eigen::MatrixXd A;
    Eigen::VectorXd b;
    /// Row 0 is to be replaced by the discrete Neumann condition.
    bool neumann_boundary = false;
    double delta = 0.0;
    /// Measure mass on |z| > L/2, compared against params.tail_tol (reported only).
    double tail_mass = 0.0;
    bool tail_within_tol = true;
};

AssembledOperator assemble_operator(const OperatorSetup& setup);

/// I_delta and I^delta of a grid function at node x (x must be a grid node).
double eval_inner(const GridFunction& u, const LevyMeasureSpec& measure, ReflectionKind kind, double x,
                  const OperatorSplitParams& params, int k = 0);
double eval_outer(const GridFunction& u, const LevyMeasureSpec& measure, ReflectionKind kind, double x,
                  const OperatorSplitParams& params, int k = 0);

/// Function on the closed half-line with two derivatives. Breakpoints mark
/// points where the function or its derivatives are not smooth.
struct AnalyticFunction {
    std::function<double(double)> f;
    std::function<double(double)> df;
    std::function<double(double)> d2f;
    std::vector<double> breakpoints;
};

struct OperatorValue {
    double value = 0.0;
    double error = 0.0;
};

/// I_delta[phi](x): symmetric part paired as phi(x+r)+phi(x-r)-2phi(x) on
/// |z| < min(delta, x), second-order Taylor expansion below 1e-3 of that
/// window, direct quadrature on the remainder of |z| < delta.
OperatorValue eval_inner(const AnalyticFunction& phi, const LevyMeasureSpec& measure, ReflectionKind kind, double x,
                         double delta);
OperatorValue eval_outer(const AnalyticFunction& phi, const LevyMeasureSpec& measure, ReflectionKind kind, double x,
                         double delta);
OperatorValue apply_operator(const AnalyticFunction& phi, const LevyMeasureSpec& measure, ReflectionKind kind,
                             double x, double delta);

struct DriftValue {
    double value = 0.0;
    /// Set at x = 0 when the first moment of the symmetric part diverges.
    bool divergent = false;
};

/// gamma_r(x): integral of eta over |z| < r against the non-symmetric part
/// plus the symmetric part over x <= |z| < r (1-d).
DriftValue compensator_drift(const LevyMeasureSpec& measure, ReflectionKind kind, double x, double r);

}  // namespace nlneumann
