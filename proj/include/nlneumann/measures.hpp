#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace nlneumann {

/// Numerator g of a stable-type Levy density g(z)/|z|^{N+alpha}.
///
/// Presets carry their own sup bound (used for far-field tail estimates) and,
/// when available in closed form, the gradient at the origin.
struct DensityNumerator {
    std::string name;
    std::function<double(std::span<const double>)> eval;
    std::optional<std::vector<double>> grad_at_zero;
    double sup_bound = 0.0;
    bool is_constant = false;

    double operator()(std::span<const double> z) const { return eval(z); }
    double at(double z) const { return eval(std::span<const double>(&z, 1)); }
};

DensityNumerator constant_numerator(double value);
/// g(z) = clamp(g0 + slope * z_N, 0, cap). C^1 near the origin whenever g0 > 0.
DensityNumerator affine_numerator(double g0, double slope, double cap);
/// g(z) = g0 * exp(-rate |z|), the tempered-stable numerator.
DensityNumerator exp_numerator(double g0, double rate);

/// Levy measure mu with density scale * g(z)/|z|^{N+alpha}, split as
/// mu = c mu_* + mu_# (c is the singular-part indicator).
class LevyMeasureSpec {
public:
    LevyMeasureSpec(int dimension, double alpha, DensityNumerator g, int c_flag, double scale = 1.0);

    /// Stable measure with constant numerator; c_flag follows alpha >= 1.
    static LevyMeasureSpec stable(double alpha, double g_value = 1.0, int dimension = 1);

    int dimension() const { return dimension_; }
    double alpha() const { return alpha_; }
    int c_flag() const { return c_flag_; }
    double scale() const { return scale_; }
    const DensityNumerator& numerator() const { return g_; }
    /// Upper bound of scale * g at infinity.
    double tail_bound() const { return scale_ * g_.sup_bound; }

    /// scale * g(z) for 1-d measures.
    double g1(double z) const { return scale_ * g_.at(z); }
    double g(std::span<const double> z) const { return scale_ * g_(z); }

    LevyMeasureSpec with_alpha(double alpha) const;
    LevyMeasureSpec scaled(double factor) const;

private:
    int dimension_;
    double alpha_;
    DensityNumerator g_;
    int c_flag_;
    double scale_;
};

/// c = 1 exactly when the first absolute moment near 0 diverges (alpha >= 1).
int default_c_flag(double alpha);

double kernel_density(const LevyMeasureSpec& measure, std::span<const double> z);
double kernel_density(const LevyMeasureSpec& measure, double z);

struct MeasureSplit {
    /// Symmetric minorant h(z) = min over |y| = |z| of g(y).
    std::function<double(std::span<const double>)> h;
    std::function<double(std::span<const double>)> mu_star_density;
    std::function<double(std::span<const double>)> mu_sharp_density;
    int sphere_samples = 0;
};

/// Splits the numerator into a symmetric part and a nonnegative remainder.
/// N = 1 uses the exact pair {z, -z}; N >= 2 samples the sphere of radius
/// |z| at `sphere_samples` deterministic directions plus the pair {z, -z}.
MeasureSplit split_measure(const LevyMeasureSpec& measure, int sphere_samples);

/// 1-d symmetric / sharp numerators, in radial form on side `side` (+1 or -1).
double symmetric_numerator(const LevyMeasureSpec& measure, double r);
double sharp_numerator(const LevyMeasureSpec& measure, double r, int side);

/// Exact integral of r^{p-1-alpha} over [a, b], 0 <= a < b <= inf.
/// Returns +inf when divergent.
double power_moment(double alpha, double a, double b, int p);

/// Integral of z^order g(z)|z|^{-1-alpha} over (lo, hi) (1-d, scale included).
/// g is taken at the cell midpoint and the power factor is integrated
/// exactly. Infinite endpoints and non-constant g are handled by geometric
/// subdivision of the unbounded part.
double cell_moments(const LevyMeasureSpec& measure, double lo, double hi, int order);

/// Radial numerator for `radial_moment`; `constant` enables the exact single-cell path.
struct RadialNumerator {
    std::function<double(double)> f;
    bool constant = false;
};

/// Integral over r in [a, b] of r^order * num(r) * r^{-1-alpha}, num taken at
/// cell midpoints. Cells wider than `max_cell` (when > 0) are split. A cell
/// touching r = 0 is graded geometrically so that numerators vanishing at the
/// origin are integrated consistently; an unbounded cell is split
/// geometrically up to a negligible remainder. Throws std::domain_error when
/// the integral diverges.
double radial_moment(const RadialNumerator& num, double alpha, double a, double b, int order,
                     double max_cell = 0.0);

class TruncatedMeasure;
TruncatedMeasure truncate(const LevyMeasureSpec& measure, int k);

class TruncatedMeasure {
public:
    TruncatedMeasure(LevyMeasureSpec base, int k);

    const LevyMeasureSpec& base() const { return base_; }
    int k() const { return k_; }
    double cutoff() const { return 1.0 / k_; }
    /// Total mass of 1_{|z| > 1/k} mu.
    double total_mass() const;

private:
    LevyMeasureSpec base_;
    int k_;
};

double unit_sphere_area(int dimension);

/// Deterministic unit directions used for sphere sampling (uniform angles for
/// N = 2, a fixed-seed Gaussian cloud for N >= 3).
std::vector<std::vector<double>> sphere_directions(int dimension, int count);

}  // namespace nlneumann
