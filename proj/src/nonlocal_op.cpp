#include "nlneumann/nonlocal_op.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "nlneumann/quadrature.hpp"

namespace nlneumann {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int side_index(int s) { return s > 0 ? 0 : 1; }

struct Numerators {
    RadialNumerator full[2];
    RadialNumerator sym;
    RadialNumerator sharp[2];
};

Numerators make_numerators(const LevyMeasureSpec& m) {
    const bool constant = m.numerator().is_constant;
    Numerators nums;
    for (int s : {1, -1}) {
        nums.full[side_index(s)] = {[m, s](double r) { return m.g1(s * r); }, constant};
        nums.sharp[side_index(s)] = {[m, s](double r) { return m.g1(s * r) - std::min(m.g1(r), m.g1(-r)); },
                                     constant};
    }
    nums.sym = {[m](double r) { return std::min(m.g1(r), m.g1(-r)); }, constant};
    if (constant) {
        for (auto& sh : nums.sharp) sh = {[](double) { return 0.0; }, true};
    }
    return nums;
}

// Builds discrete rows. Jumps with |z| < dx are folded into a second
// difference (symmetric part) and one-sided differences (remainder); larger
// jumps integrate the piecewise-linear interpolant exactly against the
// kernel moments of each r-cell [m dx, (m+1) dx].
class RowBuilder {
public:
    explicit RowBuilder(const OperatorSetup& s)
        : s_(s),
          h_(s.grid.dx()),
          n_(s.grid.n),
          alpha_(s.measure.alpha()),
          r_lo_(s.k > 0 ? 1.0 / s.k : 0.0),
          max_cell_(h_ / std::max(1, s.params.quad_cells_per_node)),
          half_line_(s.grid.is_half_line()),
          nums_(make_numerators(s.measure)) {
        if (s.measure.dimension() != 1) throw std::invalid_argument("operator assembly is 1-d only");
        cache_cells_ = 2 * (n_ - 1) + 2;
        for (int si = 0; si < 2; ++si) {
            m0_[si].resize(cache_cells_);
            m1_[si].resize(cache_cells_);
            tail_[si].resize(cache_cells_ + 1);
            for (int m = 0; m < cache_cells_; ++m) {
                const double a = m * h_;
                const double b = (m + 1) * h_;
                m0_[si][m] = m == 0 ? kInf : radial_moment(nums_.full[si], alpha_, a, b, 0, max_cell_);
                m1_[si][m] = m == 0 && alpha_ >= 1.0 ? kInf : radial_moment(nums_.full[si], alpha_, a, b, 1, max_cell_);
            }
            if (s.measure.numerator().is_constant) {
                for (int m = 1; m <= cache_cells_; ++m) tail_[si][m] = radial_moment(nums_.full[si], alpha_, m * h_, kInf, 0);
            } else {
                tail_[si][cache_cells_] = radial_moment(nums_.full[si], alpha_, cache_cells_ * h_, kInf, 0);
                for (int m = cache_cells_ - 1; m >= 1; --m) tail_[si][m] = tail_[si][m + 1] + m0_[si][m];
            }
            tail_[si][0] = kInf;
        }
    }

    OperatorRow row(int i, double r_from, double r_to) const {
        OperatorRow out;
        out.weights.assign(n_, 0.0);
        diag_ = 0.0;
        w_ = &out.weights;
        affine_ = &out.affine;
        i_ = i;

        const double lo = std::max(r_from, r_lo_);
        const double near_hi = std::min(r_to, h_);
        const bool boundary = half_line_ && i == 0;
        const bool mirror = s_.kind == ReflectionKind::Mirror;

        if (near_hi > lo) {
            if (boundary && !mirror) {
                if (lo == 0.0 && alpha_ >= 1.0) {
                    out.singular = true;
                    return out;
                }
                pl_segment(1, lo, near_hi, 0, 1, true);
            } else {
                near_window(lo, near_hi);
            }
        }

        const double pl_lo = std::max(lo, h_);
        if (r_to > pl_lo) {
            const double x = i * h_;
            pl_segment(1, pl_lo, r_to, i, 1, true);
            if (!half_line_) {
                pl_segment(-1, pl_lo, r_to, i, -1, true);
            } else {
                pl_segment(-1, pl_lo, std::min(r_to, x), i, -1, true);
                const double ra = std::max(pl_lo, x);
                if (r_to > ra && !(boundary && !mirror)) {
                    switch (s_.kind) {
                        case ReflectionKind::Censored: break;
                        case ReflectionKind::Fleas:
                        case ReflectionKind::Projection: add_mass(0, mass(-1, ra, r_to)); break;
                        case ReflectionKind::Mirror: pl_segment(-1, ra, r_to, -i, 1, false); break;
                    }
                }
            }
        }
        out.weights[i] += diag_;
        return out;
    }

private:
    void add(int col, double w) const {
        (*w_)[col] += w;
        diag_ -= w;
    }

    void add_mass(int col, double m) const {
        if (col == i_) return;
        add(col, m);
    }

    void add_extension(bool right, double m) const {
        if (s_.extension.kind == Extension::Kind::Prescribed) {
            *affine_ += s_.extension.value * m;
            diag_ -= m;
        } else {
            add_mass(right ? n_ - 1 : 0, m);
        }
    }

    bool aligned(double a, double b, int m) const {
        const double tol = 1e-12 * h_ * (m + 1);
        return std::abs(a - m * h_) <= tol && std::abs(b - (m + 1) * h_) <= tol && m < cache_cells_;
    }

    double moment(int s, double a, double b, int p, int m) const {
        const int si = side_index(s);
        if (aligned(a, b, m)) return p == 0 ? m0_[si][m] : m1_[si][m];
        return radial_moment(nums_.full[si], alpha_, a, b, p, max_cell_);
    }

    double mass(int s, double a, double b) const {
        if (!(b > a)) return 0.0;
        const int si = side_index(s);
        const int m = static_cast<int>(std::llround(a / h_));
        if (std::isinf(b) && m >= 1 && m <= cache_cells_ && std::abs(a - m * h_) <= 1e-12 * h_ * (m + 1)) {
            return tail_[si][m];
        }
        return radial_moment(nums_.full[si], alpha_, a, b, 0, max_cell_);
    }

    // Jumps of side s with r in [ra, rb) whose target is t0_idx*dx + tau*r
    // (node units relative to x_min). `anchored` marks t0 == x_i, where the
    // first cell pairs with the row's own node.
    void pl_segment(int s, double ra, double rb, int t0_idx, int tau, bool anchored) const {
        if (!(rb > ra)) return;
        const double r_edge = tau > 0 ? (n_ - 1 - t0_idx) * h_ : t0_idx * h_;
        const double in_end = std::min(rb, r_edge);
        if (in_end > ra) {
            const int first = static_cast<int>(std::floor(ra / h_ + 1e-9));
            for (int m = first;; ++m) {
                const double a = m == first ? ra : m * h_;
                if (a >= in_end) break;
                const double b = std::min((m + 1) * h_, in_end);
                if (!(b > a)) continue;
                const int j = tau > 0 ? t0_idx + m : t0_idx - m - 1;
                if (j < 0 || j > n_ - 2) throw std::logic_error("operator row: target cell out of range");
                const double m1 = moment(s, a, b, 1, m);
                if (anchored && m == 0) {
                    add(tau > 0 ? j + 1 : j, m1 / h_);
                    continue;
                }
                const double mass0 = moment(s, a, b, 0, m);
                const double theta = std::clamp((t0_idx - j) * mass0 + tau * m1 / h_, 0.0, mass0);
                add_mass(j, mass0 - theta);
                add_mass(j + 1, theta);
            }
        }
        if (rb > r_edge) add_extension(tau > 0, mass(s, std::max(ra, r_edge), rb));
    }

    void near_window(double lo, double hi) const {
        const bool full = lo == r_lo_ && hi == h_;
        if (full && !near_cached_) {
            near_ws_ = radial_moment(nums_.sym, alpha_, lo, hi, 2, max_cell_);
            near_wp_ = radial_moment(nums_.sharp[0], alpha_, lo, hi, 1, max_cell_);
            near_wm_ = radial_moment(nums_.sharp[1], alpha_, lo, hi, 1, max_cell_);
            near_cached_ = true;
        }
        const double ws = full ? near_ws_ : radial_moment(nums_.sym, alpha_, lo, hi, 2, max_cell_);
        const double wp = full ? near_wp_ : radial_moment(nums_.sharp[0], alpha_, lo, hi, 1, max_cell_);
        const double wm = full ? near_wm_ : radial_moment(nums_.sharp[1], alpha_, lo, hi, 1, max_cell_);
        const double q = ws / (h_ * h_);
        neighbour(1, q + wp / h_);
        neighbour(-1, q + wm / h_);
    }

    void neighbour(int s, double w) const {
        const int j = i_ + s;
        if (j > n_ - 1) {
            add_extension(true, w);
        } else if (j < 0) {
            if (half_line_) {
                add(1, w);  // even reflection of the node at -dx
            } else {
                add_extension(false, w);
            }
        } else {
            add(j, w);
        }
    }

    const OperatorSetup& s_;
    double h_;
    int n_;
    double alpha_;
    double r_lo_;
    double max_cell_;
    bool half_line_;
    Numerators nums_;
    int cache_cells_ = 0;
    std::vector<double> m0_[2], m1_[2], tail_[2];

    mutable double diag_ = 0.0;
    mutable std::vector<double>* w_ = nullptr;
    mutable double* affine_ = nullptr;
    mutable int i_ = 0;
    mutable bool near_cached_ = false;
    mutable double near_ws_ = 0.0, near_wp_ = 0.0, near_wm_ = 0.0;
};

int node_index(const Grid& grid, double x) {
    const double s = (x - grid.x_min) / grid.dx();
    const long i = std::lround(s);
    if (i < 0 || i >= grid.n || std::abs(s - static_cast<double>(i)) > 1e-9) {
        throw std::invalid_argument("grid evaluation point must be a grid node");
    }
    return static_cast<int>(i);
}

double apply_row(const OperatorRow& row, const GridFunction& u) {
    double v = row.affine;
    for (std::size_t j = 0; j < row.weights.size(); ++j) v += row.weights[j] * u.values[j];
    return v;
}

}  // namespace

double default_delta(const Grid& grid) { return std::max(4.0 * grid.dx(), grid.length() / 64.0); }

double resolve_delta(const Grid& grid, const OperatorSplitParams& params) {
    const double d = params.delta > 0.0 ? params.delta : default_delta(grid);
    if (d > grid.length() / 4.0 * (1.0 + 1e-12)) throw std::invalid_argument("delta must not exceed L/4");
    return d;
}

OperatorRow operator_row(const OperatorSetup& setup, int i, double r_from, double r_to) {
    if (i < 0 || i >= setup.grid.n) throw std::out_of_range("operator_row: node index");
    return RowBuilder(setup).row(i, r_from, r_to);
}

AssembledOperator assemble_operator(const OperatorSetup& setup) {
    const int n = setup.grid.n;
    AssembledOperator op;
    op.A = Eigen::MatrixXd::Zero(n, n);
    op.b = Eigen::VectorXd::Zero(n);
    op.delta = resolve_delta(setup.grid, setup.params);
    const RowBuilder builder(setup);
    for (int i = 0; i < n; ++i) {
        const OperatorRow row = builder.row(i, 0.0, kInf);
        if (row.singular) continue;
        for (int j = 0; j < n; ++j) op.A(i, j) = row.weights[j];
        op.b(i) = row.affine;
    }
    op.neumann_boundary = setup.grid.is_half_line() && setup.k == 0 && setup.measure.c_flag() == 1;
    if (op.neumann_boundary) {
        op.A.row(0).setZero();
        op.b(0) = 0.0;
    }
    const Numerators nums = make_numerators(setup.measure);
    const double half = 0.5 * setup.grid.length();
    op.tail_mass = radial_moment(nums.full[0], setup.measure.alpha(), half, kInf, 0) +
                   radial_moment(nums.full[1], setup.measure.alpha(), half, kInf, 0);
    op.tail_within_tol = op.tail_mass <= setup.params.tail_tol;
    return op;
}

double eval_inner(const GridFunction& u, const LevyMeasureSpec& measure, ReflectionKind kind, double x,
                  const OperatorSplitParams& params, int k) {
    const int i = node_index(u.grid, x);
    if (u.grid.is_half_line() && i == 0 && measure.c_flag() == 1 && k == 0) {
        throw std::domain_error("inner operator undefined on the boundary when c = 1 (Neumann condition applies)");
    }
    const OperatorSetup setup{u.grid, measure, kind, params, k, u.extension};
    const double delta = resolve_delta(u.grid, params);
    return apply_row(operator_row(setup, i, 0.0, delta), u);
}

double eval_outer(const GridFunction& u, const LevyMeasureSpec& measure, ReflectionKind kind, double x,
                  const OperatorSplitParams& params, int k) {
    const int i = node_index(u.grid, x);
    const OperatorSetup setup{u.grid, measure, kind, params, k, u.extension};
    const double delta = resolve_delta(u.grid, params);
    return apply_row(operator_row(setup, i, delta, kInf), u);
}

namespace {

// Integral over [a, b) (b may be infinite) split at the given cut points.
OperatorValue integrate_pieces(const std::function<double(double)>& f, double a, double b, std::vector<double> cuts) {
    OperatorValue out;
    if (!(b > a)) return out;
    cuts.push_back(a);
    if (std::isfinite(b)) cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::remove_if(cuts.begin(), cuts.end(), [&](double c) { return c < a || c > b; }), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const QuadResult q = integrate(f, cuts[k], cuts[k + 1]);
        out.value += q.value;
        out.error += q.error;
    }
    if (std::isinf(b)) {
        const QuadResult q = integrate_to_inf(f, cuts.back());
        out.value += q.value;
        out.error += q.error;
    }
    return out;
}

// Radii at which a jump from x lands on a breakpoint of phi.
std::vector<double> jump_cuts(const AnalyticFunction& phi, double x, ReflectionKind kind) {
    std::vector<double> cuts;
    for (double b : phi.breakpoints) {
        cuts.push_back(b - x);
        cuts.push_back(x - b);
        if (kind == ReflectionKind::Mirror) cuts.push_back(b + x);
    }
    cuts.push_back(x);
    return cuts;
}

// phi(P(x, -r)) - phi(x) for the landing point of a negative jump.
double left_difference(const AnalyticFunction& phi, ReflectionKind kind, double x, double fx, double r) {
    if (r < x) return phi.f(x - r) - fx;
    switch (kind) {
        case ReflectionKind::Censored: return 0.0;
        case ReflectionKind::Fleas:
        case ReflectionKind::Projection: return phi.f(0.0) - fx;
        case ReflectionKind::Mirror: return phi.f(r - x) - fx;
    }
    return 0.0;
}

// Jumps of both signs with r in [a, b), no pairing.
OperatorValue direct_part(const AnalyticFunction& phi, const LevyMeasureSpec& measure, ReflectionKind kind, double x,
                          double a, double b) {
    const double fx = phi.f(x);
    const double alpha = measure.alpha();
    auto integrand = [&](double r) {
        const double w = std::pow(r, -1.0 - alpha);
        double v = (phi.f(x + r) - fx) * measure.g1(r);
        if (!(kind == ReflectionKind::Censored && r >= x)) {
            v += left_difference(phi, kind, x, fx, r) * measure.g1(-r);
        }
        return v * w;
    };
    return integrate_pieces(integrand, a, b, jump_cuts(phi, x, kind));
}

}  // namespace

OperatorValue eval_inner(const AnalyticFunction& phi, const LevyMeasureSpec& measure, ReflectionKind kind, double x,
                         double delta) {
    if (measure.dimension() != 1) throw std::invalid_argument("eval_inner is 1-d only");
    if (x < 0.0) throw std::domain_error("eval_inner: x outside the closed half-line");
    if (x == 0.0 && measure.c_flag() == 1) {
        throw std::domain_error("inner operator undefined on the boundary when c = 1 (Neumann condition applies)");
    }
    if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
    const double alpha = measure.alpha();
    const Numerators nums = make_numerators(measure);
    OperatorValue out;

    const double w = std::min(delta, x);
    if (w > 0.0) {
        const double rt = 1e-3 * w;
        const double d1 = phi.df(x);
        const double d2 = phi.d2f(x);
        out.value += d2 * radial_moment(nums.sym, alpha, 0.0, rt, 2);
        for (int s : {1, -1}) {
            const auto& sh = nums.sharp[side_index(s)];
            out.value += s * d1 * radial_moment(sh, alpha, 0.0, rt, 1) + 0.5 * d2 * radial_moment(sh, alpha, 0.0, rt, 2);
        }
        const double fx = phi.f(x);
        auto paired = [&](double r) {
            const double fp = phi.f(x + r);
            const double fm = phi.f(x - r);
            double v = (fp + fm - 2.0 * fx) * nums.sym.f(r);
            v += (fp - fx) * nums.sharp[0].f(r) + (fm - fx) * nums.sharp[1].f(r);
            return v * std::pow(r, -1.0 - alpha);
        };
        const OperatorValue q = integrate_pieces(paired, rt, w, jump_cuts(phi, x, kind));
        out.value += q.value;
        out.error += q.error;
    }
    if (delta > w) {
        const OperatorValue q = direct_part(phi, measure, kind, x, w, delta);
        out.value += q.value;
        out.error += q.error;
    }
    return out;
}

OperatorValue eval_outer(const AnalyticFunction& phi, const LevyMeasureSpec& measure, ReflectionKind kind, double x,
                         double delta) {
    if (measure.dimension() != 1) throw std::invalid_argument("eval_outer is 1-d only");
    if (x < 0.0) throw std::domain_error("eval_outer: x outside the closed half-line");
    if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
    return direct_part(phi, measure, kind, x, delta, kInf);
}

OperatorValue apply_operator(const AnalyticFunction& phi, const LevyMeasureSpec& measure, ReflectionKind kind,
                             double x, double delta) {
    const OperatorValue a = eval_inner(phi, measure, kind, x, delta);
    const OperatorValue b = eval_outer(phi, measure, kind, x, delta);
    return {a.value + b.value, a.error + b.error};
}

DriftValue compensator_drift(const LevyMeasureSpec& measure, ReflectionKind kind, double x, double r) {
    if (measure.dimension() != 1) throw std::invalid_argument("compensator_drift is 1-d only");
    if (x < 0.0) throw std::domain_error("compensator_drift: x outside the closed half-line");
    if (!(r > 0.0)) throw std::invalid_argument("compensator_drift: r must be positive");
    const double alpha = measure.alpha();
    const Numerators nums = make_numerators(measure);
    if (x == 0.0 && alpha >= 1.0) return {kInf, true};

    const double cell = r / 256.0;
    auto mom = [&](const RadialNumerator& num, double a, double b, int p) {
        return b > a ? radial_moment(num, alpha, a, b, p, cell) : 0.0;
    };
    // Integral of eta over the negative jumps of size in [a, b), all beyond x.
    auto reflected = [&](const RadialNumerator& num, double a, double b) {
        switch (kind) {
            case ReflectionKind::Censored: return 0.0;
            case ReflectionKind::Fleas:
            case ReflectionKind::Projection: return x > 0.0 ? -x * mom(num, a, b, 0) : 0.0;
            case ReflectionKind::Mirror: return mom(num, a, b, 1) - (x > 0.0 ? 2.0 * x * mom(num, a, b, 0) : 0.0);
        }
        return 0.0;
    };

    double g = 0.0;
    g += mom(nums.sharp[0], 0.0, r, 1);
    g -= mom(nums.sharp[1], 0.0, std::min(x, r), 1);
    if (r > x) g += reflected(nums.sharp[1], x, r);
    if (r > x) {
        g += mom(nums.sym, x, r, 1);
        g += reflected(nums.sym, x, r);
    }
    return {g, false};
}

}  // namespace nlneumann
