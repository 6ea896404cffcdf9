#include "nlneumann/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <random>
#include <stdexcept>

namespace nlneumann {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double norm(std::span<const double> z) {
    double s = 0.0;
    for (double v : z) s += v * v;
    return std::sqrt(s);
}

// Number of dyadic levels used when grading a cell towards r = 0.
constexpr int kGradingLevels = 60;

double single_cell(const RadialNumerator& num, double alpha, double a, double b, int p) {
    const double pm = power_moment(alpha, a, b, p);
    if (!std::isfinite(pm)) {
        throw std::domain_error("radial moment diverges on [" + std::to_string(a) + ", " + std::to_string(b) + "]");
    }
    return num.f(0.5 * (a + b)) * pm;
}

double graded_from_zero(const RadialNumerator& num, double alpha, double b, int p) {
    if (num.constant) {
        if (num.f(0.5 * b) == 0.0) return 0.0;
        const double pm = power_moment(alpha, 0.0, b, p);
        if (!std::isfinite(pm)) throw std::domain_error("radial moment diverges at the origin");
        return num.f(0.5 * b) * pm;
    }
    double total = 0.0;
    double hi = b;
    double seen = 0.0;
    for (int j = 0; j < kGradingLevels; ++j) {
        const double lo = 0.5 * hi;
        const double v = num.f(0.75 * hi);
        seen = std::max(seen, std::abs(v));
        total += v * power_moment(alpha, lo, hi, p);
        hi = lo;
    }
    // Remainder on [0, hi]: constant model if integrable, otherwise the
    // numerator must vanish linearly at the origin.
    const double v = num.f(0.5 * hi);
    if (p - alpha > 0.0) {
        total += v * power_moment(alpha, 0.0, hi, p);
    } else if (std::abs(v) <= 1e-12 * std::max(seen, 1e-300) || v == 0.0) {
        const double pm = power_moment(alpha, 0.0, hi, p + 1);
        if (!std::isfinite(pm)) throw std::domain_error("radial moment diverges at the origin");
        total += (v / (0.5 * hi)) * pm;
    } else {
        throw std::domain_error("radial moment diverges at the origin (numerator does not vanish)");
    }
    return total;
}

double geometric_tail(const RadialNumerator& num, double alpha, double a, int p) {
    if (p - alpha >= 0.0) throw std::domain_error("radial moment diverges at infinity");
    if (num.constant) return num.f(a) == 0.0 ? 0.0 : num.f(a) * power_moment(alpha, a, kInf, p);
    double total = 0.0;
    double lo = a;
    for (int j = 0; j < 4000; ++j) {
        const double hi = 2.0 * lo;
        const double v = num.f(0.5 * (lo + hi));
        total += v * power_moment(alpha, lo, hi, p);
        lo = hi;
        const double rest = power_moment(alpha, lo, kInf, p);
        if (rest * std::max(std::abs(v), 1.0) < 1e-17 * std::max(std::abs(total), 1e-300) || rest < 1e-300) break;
        if (!std::isfinite(2.0 * lo)) break;
    }
    const double rest = power_moment(alpha, lo, kInf, p);
    if (std::isfinite(2.0 * lo)) total += num.f(2.0 * lo) * rest;
    return total;
}

}  // namespace

DensityNumerator constant_numerator(double value) {
    if (!(value >= 0.0)) throw std::invalid_argument("constant numerator must be nonnegative");
    DensityNumerator g;
    g.name = "const";
    g.eval = [value](std::span<const double>) { return value; };
    g.sup_bound = value;
    g.is_constant = true;
    return g;
}

DensityNumerator affine_numerator(double g0, double slope, double cap) {
    if (!(cap >= g0) || !(g0 >= 0.0)) throw std::invalid_argument("affine numerator needs 0 <= g0 <= cap");
    DensityNumerator g;
    g.name = "affine";
    g.eval = [g0, slope, cap](std::span<const double> z) {
        return std::clamp(g0 + slope * z.back(), 0.0, cap);
    };
    g.sup_bound = cap;
    g.grad_at_zero = std::vector<double>{slope};
    return g;
}

DensityNumerator exp_numerator(double g0, double rate) {
    if (!(g0 >= 0.0) || !(rate >= 0.0)) throw std::invalid_argument("exp numerator needs g0, rate >= 0");
    DensityNumerator g;
    g.name = "exp";
    g.eval = [g0, rate](std::span<const double> z) { return g0 * std::exp(-rate * norm(z)); };
    g.sup_bound = g0;
    g.is_constant = rate == 0.0;
    return g;
}

LevyMeasureSpec::LevyMeasureSpec(int dimension, double alpha, DensityNumerator g, int c_flag, double scale)
    : dimension_(dimension), alpha_(alpha), g_(std::move(g)), c_flag_(c_flag), scale_(scale) {
    if (dimension_ < 1) throw std::invalid_argument("dimension must be >= 1");
    if (!(alpha_ > 0.0 && alpha_ < 2.0)) throw std::invalid_argument("alpha must lie in the open interval (0,2)");
    if (c_flag_ != 0 && c_flag_ != 1) throw std::invalid_argument("c_flag must be 0 or 1");
    if (c_flag_ != default_c_flag(alpha_)) {
        throw std::invalid_argument(alpha_ >= 1.0 ? "c_flag must be 1 when alpha >= 1 (first moment of the symmetric part diverges)"
                                                  : "c_flag must be 0 when alpha < 1 (first moment is finite)");
    }
    if (!(scale_ > 0.0)) throw std::invalid_argument("measure scale must be positive");
    if (!g_.eval) throw std::invalid_argument("density numerator is empty");
}

LevyMeasureSpec LevyMeasureSpec::stable(double alpha, double g_value, int dimension) {
    return LevyMeasureSpec(dimension, alpha, constant_numerator(g_value), default_c_flag(alpha));
}

LevyMeasureSpec LevyMeasureSpec::with_alpha(double alpha) const {
    return LevyMeasureSpec(dimension_, alpha, g_, default_c_flag(alpha), scale_);
}

LevyMeasureSpec LevyMeasureSpec::scaled(double factor) const {
    return LevyMeasureSpec(dimension_, alpha_, g_, c_flag_, scale_ * factor);
}

int default_c_flag(double alpha) { return alpha >= 1.0 ? 1 : 0; }

double kernel_density(const LevyMeasureSpec& measure, std::span<const double> z) {
    if (static_cast<int>(z.size()) != measure.dimension()) {
        throw std::invalid_argument("kernel_density: point dimension mismatch");
    }
    const double r = norm(z);
    if (r == 0.0) throw std::domain_error("kernel density is singular at z = 0");
    return measure.g(z) / std::pow(r, measure.dimension() + measure.alpha());
}

double kernel_density(const LevyMeasureSpec& measure, double z) {
    return kernel_density(measure, std::span<const double>(&z, 1));
}

std::vector<std::vector<double>> sphere_directions(int dimension, int count) {
    std::vector<std::vector<double>> dirs;
    if (dimension < 2 || count < 1) return dirs;
    dirs.reserve(count);
    if (dimension == 2) {
        for (int k = 0; k < count; ++k) {
            const double th = 2.0 * std::numbers::pi * (k + 0.5) / count;
            dirs.push_back({std::cos(th), std::sin(th)});
        }
        return dirs;
    }
    std::mt19937_64 rng(0x5eed5eedULL);
    std::normal_distribution<double> normal(0.0, 1.0);
    while (static_cast<int>(dirs.size()) < count) {
        std::vector<double> v(dimension);
        for (double& c : v) c = normal(rng);
        const double n = norm(v);
        if (n < 1e-12) continue;
        for (double& c : v) c /= n;
        dirs.push_back(std::move(v));
    }
    return dirs;
}

MeasureSplit split_measure(const LevyMeasureSpec& measure, int sphere_samples) {
    if (sphere_samples < 1) throw std::invalid_argument("sphere_samples must be >= 1");
    const int n = measure.dimension();
    auto dirs = std::make_shared<std::vector<std::vector<double>>>(sphere_directions(n, sphere_samples));
    const auto m = std::make_shared<LevyMeasureSpec>(measure);

    MeasureSplit split;
    split.sphere_samples = n == 1 ? 2 : sphere_samples;
    split.h = [m, dirs](std::span<const double> z) {
        const double r = norm(z);
        std::vector<double> y(z.begin(), z.end());
        double h = m->g(y);
        for (double& c : y) c = -c;
        h = std::min(h, m->g(y));
        for (const auto& d : *dirs) {
            for (std::size_t i = 0; i < y.size(); ++i) y[i] = r * d[i];
            h = std::min(h, m->g(y));
        }
        return h;
    };
    const double power = n + measure.alpha();
    split.mu_star_density = [h = split.h, power](std::span<const double> z) {
        const double r = norm(z);
        if (r == 0.0) throw std::domain_error("density is singular at z = 0");
        return h(z) / std::pow(r, power);
    };
    split.mu_sharp_density = [m, h = split.h, power](std::span<const double> z) {
        const double r = norm(z);
        if (r == 0.0) throw std::domain_error("density is singular at z = 0");
        return (m->g(z) - h(z)) / std::pow(r, power);
    };
    return split;
}

double symmetric_numerator(const LevyMeasureSpec& measure, double r) {
    return std::min(measure.g1(r), measure.g1(-r));
}

double sharp_numerator(const LevyMeasureSpec& measure, double r, int side) {
    const double g = measure.g1(side * r);
    return g - std::min(g, measure.g1(-side * r));
}

double power_moment(double alpha, double a, double b, int p) {
    if (!(b > a)) return 0.0;
    const double e = p - alpha;
    if (std::isinf(b)) {
        if (e >= 0.0 || a == 0.0) return kInf;
        return -std::pow(a, e) / e;
    }
    if (a == 0.0) {
        if (e <= 0.0) return kInf;
        return std::pow(b, e) / e;
    }
    const double log_ratio = std::log(b / a);
    if (e == 0.0) return log_ratio;
    return std::pow(a, e) * std::expm1(e * log_ratio) / e;
}

double radial_moment(const RadialNumerator& num, double alpha, double a, double b, int p, double max_cell) {
    if (!(b > a)) return 0.0;
    if (a < 0.0) throw std::invalid_argument("radial_moment: negative radius");
    double total = 0.0;
    if (std::isinf(b)) {
        double start = a;
        if (start == 0.0) {
            total += radial_moment(num, alpha, 0.0, 1.0, p, max_cell);
            start = 1.0;
        }
        return total + geometric_tail(num, alpha, start, p);
    }
    int cells = 1;
    if (max_cell > 0.0 && !num.constant) cells = std::max(1, static_cast<int>(std::ceil((b - a) / max_cell)));
    const double w = (b - a) / cells;
    for (int c = 0; c < cells; ++c) {
        const double lo = a + c * w;
        const double hi = c + 1 == cells ? b : a + (c + 1) * w;
        total += lo == 0.0 ? graded_from_zero(num, alpha, hi, p) : single_cell(num, alpha, lo, hi, p);
    }
    return total;
}

double cell_moments(const LevyMeasureSpec& measure, double lo, double hi, int order) {
    if (measure.dimension() != 1) throw std::invalid_argument("cell_moments is 1-d only");
    if (order < 0 || order > 2) throw std::invalid_argument("cell_moments: order must be 0, 1 or 2");
    if (!(hi > lo)) throw std::invalid_argument("cell_moments: need lo < hi");
    if (lo < 0.0 && hi > 0.0) {
        if (order < 2) throw std::domain_error("cell_moments: interval straddles the singularity at 0");
        return cell_moments(measure, lo, 0.0, order) + cell_moments(measure, 0.0, hi, order);
    }
    const int side = hi <= 0.0 ? -1 : 1;
    const double a = side > 0 ? lo : -hi;
    const double b = side > 0 ? hi : -lo;
    if ((a == 0.0 && order - measure.alpha() <= 0.0) || (std::isinf(b) && order - measure.alpha() >= 0.0)) {
        throw std::domain_error("cell_moments: divergent moment");
    }
    // Single midpoint cell; an unbounded end is subdivided geometrically.
    RadialNumerator num{[&measure, side](double r) { return measure.g1(side * r); },
                        measure.numerator().is_constant};
    double value;
    if (std::isinf(b)) {
        value = radial_moment(num, measure.alpha(), a, b, order);
    } else {
        value = num.f(0.5 * (a + b)) * power_moment(measure.alpha(), a, b, order);
    }
    return (side < 0 && order % 2 == 1) ? -value : value;
}

TruncatedMeasure::TruncatedMeasure(LevyMeasureSpec base, int k) : base_(std::move(base)), k_(k) {
    if (k_ < 1) throw std::invalid_argument("truncation index k must be >= 1");
}

TruncatedMeasure truncate(const LevyMeasureSpec& measure, int k) { return TruncatedMeasure(measure, k); }

double TruncatedMeasure::total_mass() const {
    const double cut = cutoff();
    const double alpha = base_.alpha();
    const int n = base_.dimension();
    if (base_.numerator().is_constant) {
        const double g0 = base_.g1(0.0);
        const double area = n == 1 ? 2.0 : unit_sphere_area(n);
        return area * g0 * power_moment(alpha, cut, kInf, 0);
    }
    if (n == 1) {
        double mass = 0.0;
        for (int side : {1, -1}) {
            RadialNumerator num{[this, side](double r) { return base_.g1(side * r); }, false};
            mass += radial_moment(num, alpha, cut, kInf, 0);
        }
        return mass;
    }
    const auto dirs = sphere_directions(n, 512);
    double avg = 0.0;
    for (const auto& d : dirs) {
        RadialNumerator num{[this, &d](double r) {
                                std::vector<double> y(d);
                                for (double& c : y) c *= r;
                                return base_.g(y);
                            },
                            false};
        avg += radial_moment(num, alpha, cut, kInf, 0);
    }
    return unit_sphere_area(n) * avg / static_cast<double>(dirs.size());
}

double unit_sphere_area(int dimension) {
    if (dimension < 1) throw std::invalid_argument("dimension must be >= 1");
    const double half = 0.5 * dimension;
    return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

}  // namespace nlneumann
