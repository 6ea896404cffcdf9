#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace nlneumann {

enum class ReflectionKind { Censored, Fleas, Projection, Mirror };

struct ReflectionModel {
    ReflectionKind kind = ReflectionKind::Censored;
};

std::string to_string(ReflectionKind kind);
/// Parses "censored", "fleas", "projection" or "mirror".
ReflectionKind parse_reflection(const std::string& name);

/// Landing point P(x, z) = x + eta(x, z) in the closed half-space {x_N >= 0}.
std::vector<double> reflect(const ReflectionModel& model, std::span<const double> x, std::span<const double> z);

/// Jump eta(x, z) = P(x, z) - x.
std::vector<double> jump(const ReflectionModel& model, std::span<const double> x, std::span<const double> z);

/// 1-d landing point for x >= 0.
double reflect1(ReflectionKind kind, double x, double z);

struct HypothesisResult {
    std::string name;
    bool expected = true;
    bool observed = true;
    /// Smallest slack seen (negative when violated).
    double worst_margin = 0.0;
    /// Sample achieving the worst margin: x, y, z concatenated.
    std::vector<double> witness;
    bool consistent() const { return expected == observed; }
};

struct HypothesisReport {
    ReflectionKind kind{};
    int dimension = 2;
    long samples = 0;
    /// Smallest c with |eta| <= c|z| over all samples.
    double observed_c_eta = 0.0;
    /// Known admissible bound (3 for mirror, 1 otherwise).
    double c_eta_bound = 1.0;
    std::vector<HypothesisResult> results;
    bool all_consistent() const;
};

/// Randomized check of the structural jump hypotheses: range (H0), growth
/// |eta| <= c|z| (H1), tangential antisymmetry (H2), normal 1-Lipschitz
/// contraction (H5) and the censored identity (H6).
HypothesisReport check_hypotheses(const ReflectionModel& model, long sample_count, std::uint64_t rng_seed,
                                  int dimension = 2);

}  // namespace nlneumann
