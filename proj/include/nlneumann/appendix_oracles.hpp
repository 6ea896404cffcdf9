#pragma once

#include <string>
#include <vector>

#include "nlneumann/measures.hpp"
#include "nlneumann/nonlocal_op.hpp"
#include "nlneumann/reflect.hpp"

namespace nlneumann {

/// One certified claim: value, a-posteriori error and verdict.
struct AppendixReport {
    std::string claim;
    double value = 0.0;
    double error = 0.0;
    bool pass = false;
    std::string note;
};

/// J = int_{z >= -1} ln(1+z) |z|^{-1-alpha} dz in the form
/// int_0^inf F(y) 2 sinh(y(1-alpha)/2) dy, F(y) = y/|2 sinh(y/2)|^{1+alpha};
/// for N > 1 times pi^{(N-1)/2} Gamma((1+alpha)/2)/Gamma((N+alpha)/2).
AppendixReport integral_J(double alpha, int dimension = 1);

/// int_{-Y}^{Y} F(y) cosh(y(1-alpha)/2) dy, zero by oddness.
AppendixReport integral_J_odd_part(double alpha, double Y = 40.0);

/// -ln(s) + (3/2) ln R on (0, R], a quintic C^2 bridge to 0 on [R, 2R], 0 beyond.
AnalyticFunction blowup_function(double R);

struct BlowupReport {
    double R = 0.0;
    double J = 0.0;
    double J_error = 0.0;
    std::vector<double> x;
    /// -I[U_R](x) and its quadrature error.
    std::vector<double> minus_I;
    std::vector<double> errors;
    /// min of -x^alpha I[U_R](x) over x <= small_x_threshold.
    double min_scaled = 0.0;
    double min_scaled_error = 0.0;
    double small_x_threshold = 1.0;
    /// -I[U_R] >= -K_R on the grid.
    double K_R = 0.0;
    bool pass = false;
};

/// Censored operator applied to U_R at each x in x_grid (0 < x <= R).
BlowupReport blowup_check(const LevyMeasureSpec& measure, double R, const std::vector<double>& x_grid,
                          double small_x_threshold = 1.0);

/// Smallest R in {R_start * 2^j} for which blowup_check passes.
BlowupReport find_blowup_radius(const LevyMeasureSpec& measure, const std::vector<double>& x_grid,
                                double R_start = 2.0, int max_doublings = 8);

/// Dyadic points 2^{-j}, j = 0..levels.
std::vector<double> dyadic_points(int levels);

/// S(alpha, beta) = P.V. int_{z >= -1} (|1+z|^beta - 1)|z|^{-1-alpha} dz via
/// the substitution 1+z = e^x. pass = sign matches the trichotomy.
AppendixReport sign_exponent(double alpha, double beta);

/// Raw-coordinate value of S via the censored operator applied to s^beta at x = 1.
AppendixReport sign_exponent_raw(double alpha, double beta);

/// G = int_{-1}^{1} |1+z|^beta + |1-z|^beta - 2 dmu (hyperbolic form).
AppendixReport integral_G(double alpha, double beta);
/// B(a) = int_{-a-1}^{-a} |1+z|^beta - 1 dmu (cosh form).
AppendixReport integral_B(double alpha, double beta, double a);
/// Raw-coordinate cross-checks of G and B(a).
AppendixReport integral_G_raw(double alpha, double beta);
AppendixReport integral_B_raw(double alpha, double beta, double a);

struct BGReport {
    double alpha = 0.0;
    double beta = 0.0;
    AppendixReport G;
    AppendixReport B2;
    double sup_B = 0.0;
    double a_at_sup = 0.0;
    /// Slack covering the gaps of the a-grid (|B'| <= 2) and the a > a_max tail.
    double grid_slack = 0.0;
    double tail_bound = 0.0;
    /// Certified upper bound of sup_a B(a) + G, and kappa = -bound.
    double sup_B_plus_G = 0.0;
    double kappa = 0.0;
    double quad_error = 0.0;
    /// B(a_max) against ((a_max - 1/2)^beta - 1) * mass(a_max, a_max + 1).
    double B_large = 0.0;
    double B_large_estimate = 0.0;
    bool pass_kappa = false;
    bool pass_B2 = false;
    bool pass_large_a = false;
    bool pass() const { return pass_kappa && pass_B2 && pass_large_a; }
};

/// Default a-grid on (1, 10]: quadratic clustering near 1, includes a = 2.
std::vector<double> default_a_grid(int points = 2000);

BGReport bg_bound(double alpha, double beta, const std::vector<double>& a_grid);

struct BetaSearchReport {
    double alpha = 0.0;
    double kappa0 = 0.0;
    double beta = 0.0;
    /// sup B + G at the found beta (certified bound).
    double sup_B_plus_G = 0.0;
    double margin = 0.0;
    bool pass = false;
};

/// Largest tested beta > alpha - 1 with sup_a B(a) + G <= -kappa0/2.
BetaSearchReport beta_search(double alpha, const std::vector<double>& a_grid, int bisections = 30);

struct GammaRow {
    double x = 0.0;
    double gamma = 0.0;
    double closed_form = 0.0;
    double rel_error = 0.0;
};

struct GammaProfile {
    std::vector<GammaRow> rows;
    bool positive = true;
    bool increasing = true;
    /// Only meaningful for the censored model with constant g.
    bool closed_form_available = false;
    double max_rel_error = 0.0;
    bool pass = false;
};

GammaProfile gamma_profile(const LevyMeasureSpec& measure, ReflectionKind kind, double delta,
                           const std::vector<double>& x_list);

/// Full battery: one report per claim.
std::vector<AppendixReport> appendix_battery();

}  // namespace nlneumann
