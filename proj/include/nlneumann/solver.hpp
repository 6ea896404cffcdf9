#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nlneumann/grid.hpp"
#include "nlneumann/measures.hpp"
#include "nlneumann/nonlocal_op.hpp"
#include "nlneumann/reflect.hpp"

namespace nlneumann {

/// One instance of u - I[u] = f on a half-line window (or the whole line
/// when the grid is symmetric about 0).
struct ProblemSpec {
    LevyMeasureSpec measure;
    ReflectionKind kind = ReflectionKind::Censored;
    std::function<double(double)> f;
    Grid grid;
    /// Multiply the measure by (2 - alpha).
    bool normalized = false;
    OperatorSplitParams params;
    Extension extension;

    LevyMeasureSpec effective_measure() const;
    std::vector<double> source() const;
};

struct SolveReport {
    std::string method;
    GridFunction u;
    bool converged = false;
    int iterations = 0;
    /// Max-norm of u - I[u] - f over interior nodes.
    double residual = 0.0;
    /// Boundary node: equation residual, or the Neumann residual when that row is replaced.
    double boundary_residual = 0.0;
    bool neumann_boundary = false;
    /// |residual| per node, with the boundary entry following boundary_residual.
    std::vector<double> nodal_residual;
    /// Iteration step and the largest observed ratio of successive increments.
    double epsilon = 0.0;
    double contraction_factor = 0.0;
    std::vector<int> k_schedule;
    std::vector<double> cauchy_increments;
    bool cauchy_monotone = true;
    /// min_i (|M_ii| - sum_{j != i} |M_ij|) over equation rows of Id - A.
    double dominance_margin = 0.0;
    double tail_mass = 0.0;
    bool tail_within_tol = true;
    /// Viscous solver diagnostics.
    double damping = 1.0;
    int active_clamps = 0;
    double max_abs_operator = 0.0;
    std::string message;
};

/// Step of the fixed-point map T u = u - eps (u - I_k[u] - f).
double iteration_epsilon(double truncated_mass);

SolveReport solve_truncated(const ProblemSpec& problem, int k, double tol, int max_iter,
                            std::optional<std::vector<double>> initial = std::nullopt);

/// Truncated solves along an increasing schedule, warm-started.
SolveReport solve_limit(const ProblemSpec& problem, const std::vector<int>& k_schedule, double tol, int max_iter,
                        std::optional<std::vector<double>> initial = std::nullopt);

/// Dense LU solve of (Id - A) u = f + b; k = 0 is the untruncated operator.
SolveReport solve_direct(const ProblemSpec& problem, int k = 0);

/// -eps u_xx - T_R(I[u]) + u = f with a second-order Neumann closure at both
/// ends; T_R clamps to [-R, R].
SolveReport solve_viscous(const ProblemSpec& problem, double epsilon, double r_trunc, double tol, int max_iter);

/// max over node pairs with |x_i - x_j| <= window of |u_i - u_j| / |x_i - x_j|^beta.
double holder_quotient(const GridFunction& u, double beta, double window);

}  // namespace nlneumann
