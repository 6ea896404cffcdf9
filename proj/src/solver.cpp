#include "nlneumann/solver.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace nlneumann {

LevyMeasureSpec ProblemSpec::effective_measure() const {
    return normalized ? measure.scaled(2.0 - measure.alpha()) : measure;
}

std::vector<double> ProblemSpec::source() const {
    if (!f) throw std::invalid_argument("problem has no source function");
    std::vector<double> v(grid.n);
    for (int i = 0; i < grid.n; ++i) v[i] = f(grid.x(i));
    return v;
}

double iteration_epsilon(double truncated_mass) { return 0.9 / (1.0 + 2.0 * truncated_mass); }

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

VectorXd to_vec(const std::vector<double>& v) { return Eigen::Map<const VectorXd>(v.data(), v.size()); }
std::vector<double> to_std(const VectorXd& v) { return {v.data(), v.data() + v.size()}; }

OperatorSetup setup_for(const ProblemSpec& p, int k) {
    return OperatorSetup{p.grid, p.effective_measure(), p.kind, p.params, k, p.extension};
}

bool has_boundary_node(const ProblemSpec& p) { return p.grid.is_half_line(); }

void fill_residuals(SolveReport& rep, const ProblemSpec& p, const VectorXd& res) {
    const int n = static_cast<int>(res.size());
    const int lo = has_boundary_node(p) ? 1 : 0;
    rep.residual = n > lo ? res.segment(lo, n - lo).cwiseAbs().maxCoeff() : 0.0;
    rep.boundary_residual = lo == 1 ? std::abs(res(0)) : 0.0;
    rep.nodal_residual = to_std(res.cwiseAbs());
}

double neumann_residual(const VectorXd& u) { return std::abs(3.0 * u(0) - 4.0 * u(1) + u(2)); }

double dominance(const MatrixXd& m, int first_row) {
    double margin = std::numeric_limits<double>::infinity();
    for (int i = first_row; i < m.rows(); ++i) {
        double off = 0.0;
        for (int j = 0; j < m.cols(); ++j) {
            if (j != i) off += std::abs(m(i, j));
        }
        margin = std::min(margin, std::abs(m(i, i)) - off);
    }
    return margin;
}

}  // namespace

SolveReport solve_truncated(const ProblemSpec& problem, int k, double tol, int max_iter,
                            std::optional<std::vector<double>> initial) {
    if (k < 1) throw std::invalid_argument("solve_truncated: k must be >= 1");
    if (!(tol > 0.0)) throw std::invalid_argument("solve_truncated: tol must be positive");
    const AssembledOperator op = assemble_operator(setup_for(problem, k));
    const double mass = truncate(problem.effective_measure(), k).total_mass();
    const double eps = iteration_epsilon(mass);

    const VectorXd f = to_vec(problem.source());
    VectorXd u = initial ? to_vec(*initial) : f;
    if (u.size() != f.size()) throw std::invalid_argument("solve_truncated: initial guess size mismatch");

    SolveReport rep;
    rep.method = "truncated";
    rep.epsilon = eps;
    rep.k_schedule = {k};
    rep.tail_mass = op.tail_mass;
    rep.tail_within_tol = op.tail_within_tol;

    VectorXd res = u - op.A * u - op.b - f;
    double prev_step = -1.0;
    int it = 0;
    while (res.cwiseAbs().maxCoeff() > tol && it < max_iter) {
        const VectorXd step = eps * res;
        u -= step;
        ++it;
        const double s = step.cwiseAbs().maxCoeff();
        const double floor = 1e-11 * std::max(1.0, u.cwiseAbs().maxCoeff());
        if (prev_step > floor && s > floor) rep.contraction_factor = std::max(rep.contraction_factor, s / prev_step);
        prev_step = s;
        res = u - op.A * u - op.b - f;
    }
    rep.iterations = it;
    rep.converged = res.cwiseAbs().maxCoeff() <= tol;
    fill_residuals(rep, problem, res);
    if (!rep.converged) rep.message = "max_iter reached before the residual dropped below tol";
    rep.u = GridFunction(problem.grid, to_std(u), problem.extension);
    return rep;
}

SolveReport solve_limit(const ProblemSpec& problem, const std::vector<int>& k_schedule, double tol, int max_iter,
                        std::optional<std::vector<double>> initial) {
    if (k_schedule.size() < 3) throw std::invalid_argument("solve_limit: k_schedule needs at least 3 entries");
    for (std::size_t j = 1; j < k_schedule.size(); ++j) {
        if (k_schedule[j] <= k_schedule[j - 1]) throw std::invalid_argument("solve_limit: k_schedule must increase");
    }
    SolveReport rep;
    std::optional<std::vector<double>> guess = std::move(initial);
    std::vector<double> prev;
    int total = 0;
    for (int k : k_schedule) {
        SolveReport stage = solve_truncated(problem, k, tol, max_iter, guess);
        total += stage.iterations;
        if (!prev.empty()) {
            double d = 0.0;
            for (std::size_t i = 0; i < prev.size(); ++i) d = std::max(d, std::abs(prev[i] - stage.u.values[i]));
            rep.cauchy_increments.push_back(d);
        }
        prev = stage.u.values;
        guess = stage.u.values;
        rep.contraction_factor = std::max(rep.contraction_factor, stage.contraction_factor);
        const bool ok = stage.converged && (rep.k_schedule.empty() || rep.converged);
        rep.u = std::move(stage.u);
        rep.residual = stage.residual;
        rep.boundary_residual = stage.boundary_residual;
        rep.nodal_residual = stage.nodal_residual;
        rep.epsilon = stage.epsilon;
        rep.tail_mass = stage.tail_mass;
        rep.tail_within_tol = stage.tail_within_tol;
        rep.converged = ok;
        rep.k_schedule.push_back(k);
    }
    rep.method = "limit";
    rep.iterations = total;
    for (std::size_t j = 1; j < rep.cauchy_increments.size(); ++j) {
        if (rep.cauchy_increments[j] > rep.cauchy_increments[j - 1]) rep.cauchy_monotone = false;
    }
    if (!rep.cauchy_monotone) rep.message = "warning: Cauchy increments are not non-increasing";
    if (!rep.converged) rep.message = "a truncated stage did not converge";
    return rep;
}

SolveReport solve_direct(const ProblemSpec& problem, int k) {
    if (k < 0) throw std::invalid_argument("solve_direct: k must be >= 0");
    const AssembledOperator op = assemble_operator(setup_for(problem, k));
    const int n = problem.grid.n;
    MatrixXd m = MatrixXd::Identity(n, n) - op.A;
    VectorXd rhs = to_vec(problem.source()) + op.b;

    SolveReport rep;
    rep.method = k == 0 ? "direct" : "direct-truncated";
    if (k > 0) rep.k_schedule = {k};
    rep.neumann_boundary = op.neumann_boundary;
    rep.tail_mass = op.tail_mass;
    rep.tail_within_tol = op.tail_within_tol;
    rep.dominance_margin = dominance(m, op.neumann_boundary ? 1 : 0);
    if (op.neumann_boundary) {
        if (n < 3) throw std::invalid_argument("solve_direct: Neumann closure needs n >= 3");
        m.row(0).setZero();
        m(0, 0) = 3.0;
        m(0, 1) = -4.0;
        m(0, 2) = 1.0;
        rhs(0) = 0.0;
    }
    const VectorXd u = Eigen::PartialPivLU<MatrixXd>(m).solve(rhs);
    if (!u.allFinite()) throw std::runtime_error("solve_direct: singular system");

    VectorXd res = u - op.A * u - op.b - to_vec(problem.source());
    fill_residuals(rep, problem, res);
    if (op.neumann_boundary) {
        rep.boundary_residual = neumann_residual(u);
        rep.nodal_residual[0] = rep.boundary_residual;
    }
    rep.converged = std::isfinite(rep.residual);
    rep.iterations = 1;
    rep.u = GridFunction(problem.grid, to_std(u), problem.extension);
    return rep;
}

SolveReport solve_viscous(const ProblemSpec& problem, double epsilon, double r_trunc, double tol, int max_iter) {
    if (!(epsilon > 0.0) || !(r_trunc > 0.0)) throw std::invalid_argument("solve_viscous: epsilon and R_trunc must be positive");
    if (!problem.grid.is_half_line()) throw std::invalid_argument("solve_viscous: half-line grid required");
    const AssembledOperator op = assemble_operator(setup_for(problem, 0));
    const int n = problem.grid.n;
    if (n < 3) throw std::invalid_argument("solve_viscous: n >= 3 required");
    const double h = problem.grid.dx();
    const VectorXd f = to_vec(problem.source());

    // Viscous part: second difference with mirrored ghost nodes at both ends.
    MatrixXd visc = MatrixXd::Zero(n, n);
    const double c = epsilon / (h * h);
    for (int i = 0; i < n; ++i) {
        const int l = i == 0 ? 1 : i - 1;
        const int r = i == n - 1 ? n - 2 : i + 1;
        visc(i, i) += 2.0 * c;
        visc(i, l) -= c;
        visc(i, r) -= c;
    }
    const int first = op.neumann_boundary ? 1 : 0;
    auto clamp = [&](double s) { return std::clamp(s, -r_trunc, r_trunc); };

    SolveReport rep;
    rep.method = "viscous";
    rep.neumann_boundary = op.neumann_boundary;
    rep.tail_mass = op.tail_mass;
    rep.tail_within_tol = op.tail_within_tol;

    VectorXd u = f;
    std::set<std::vector<int>> seen;
    double damping = 1.0;
    VectorXd res(n);
    int it = 0;
    for (; it <= max_iter; ++it) {
        const VectorXd iu = op.A * u + op.b;
        const VectorXd vu = visc * u;
        for (int i = 0; i < n; ++i) res(i) = vu(i) - clamp(iu(i)) + u(i) - f(i);
        if (op.neumann_boundary) res(0) = 3.0 * u(0) - 4.0 * u(1) + u(2);
        if (res.cwiseAbs().maxCoeff() <= tol) break;
        if (it == max_iter) break;

        // Active-set step: clamped rows see a constant operator value.
        std::vector<int> state(n, 0);
        MatrixXd m = visc + MatrixXd::Identity(n, n);
        VectorXd rhs = f;
        for (int i = first; i < n; ++i) {
            if (iu(i) > r_trunc) {
                state[i] = 1;
                rhs(i) += r_trunc;
            } else if (iu(i) < -r_trunc) {
                state[i] = -1;
                rhs(i) -= r_trunc;
            } else {
                m.row(i) -= op.A.row(i);
                rhs(i) += op.b(i);
            }
        }
        if (op.neumann_boundary) {
            m.row(0).setZero();
            m(0, 0) = 3.0;
            m(0, 1) = -4.0;
            m(0, 2) = 1.0;
            rhs(0) = 0.0;
        }
        if (!seen.insert(state).second) damping = 0.5;
        const VectorXd next = Eigen::PartialPivLU<MatrixXd>(m).solve(rhs);
        u = damping * next + (1.0 - damping) * u;
    }
    const VectorXd iu = op.A * u + op.b;
    rep.active_clamps = 0;
    for (int i = first; i < n; ++i) {
        if (std::abs(iu(i)) >= r_trunc) ++rep.active_clamps;
    }
    rep.max_abs_operator = iu.segment(first, n - first).cwiseAbs().maxCoeff();
    rep.damping = damping;
    rep.iterations = it;
    rep.converged = res.cwiseAbs().maxCoeff() <= tol;
    rep.residual = res.segment(1, n - 1).cwiseAbs().maxCoeff();
    rep.boundary_residual = std::abs(res(0));
    rep.nodal_residual = to_std(res.cwiseAbs());
    rep.epsilon = epsilon;
    if (!rep.converged) rep.message = "active-set iteration stagnated";
    rep.u = GridFunction(problem.grid, to_std(u), problem.extension);
    return rep;
}

double holder_quotient(const GridFunction& u, double beta, double window) {
    if (!(beta > 0.0 && beta <= 1.0)) throw std::invalid_argument("holder_quotient: beta must lie in (0,1]");
    const Grid& g = u.grid;
    const double h = g.dx();
    const int reach = std::max(1, static_cast<int>(std::floor(window / h * (1.0 + 1e-12))));
    double q = 0.0;
    for (int i = 0; i < g.n; ++i) {
        for (int j = i + 1; j < g.n && j - i <= reach; ++j) {
            const double d = (j - i) * h;
            q = std::max(q, std::abs(u.values[j] - u.values[i]) / std::pow(d, beta));
        }
    }
    return q;
}

}  // namespace nlneumann
