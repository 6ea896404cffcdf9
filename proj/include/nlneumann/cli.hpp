#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nlneumann/grid.hpp"
#include "nlneumann/measures.hpp"
#include "nlneumann/reflect.hpp"
#include "nlneumann/solver.hpp"

namespace nlneumann {

inline constexpr const char* kToolVersion = "0.1.0";

/// Invalid configuration; key names the offending entry.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string& what);
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

/// Flat key=value configuration with block prefixes (measure., grid., ...).
/// Lines starting with '#' and blank lines are ignored.
struct RunConfig {
    /// Verbatim input, echoed into every output header.
    std::string text;
    std::vector<std::pair<std::string, std::string>> entries;

    std::string subcommand;

    // measure.*
    double alpha = 1.5;
    std::string g_kind = "const";
    double g0 = 1.0;
    double g_slope = 0.0;
    double g_cap = 2.0;
    double g_rate = 1.0;
    std::optional<int> c_flag;
    int dimension = 1;
    bool normalized = false;

    ReflectionKind reflection = ReflectionKind::Censored;

    // grid.*
    double L = 8.0;
    int n = 81;
    double delta = 0.0;
    double tail_tol = 1e-6;
    Extension extension;

    // solver.*
    std::string method = "direct";
    double tol = 1e-10;
    int max_iter = 200000;
    int k = 0;
    std::vector<int> k_schedule{8, 16, 32, 64};
    double epsilon = 1e-3;
    double r_trunc = 1e6;

    // source.*
    std::string source_kind = "const";
    double source_value = 1.0;
    double source_amp = 1.0;
    double source_center = 1.0;
    double source_width = 1.0;
    double source_freq = 1.0;

    // sweep.*
    std::vector<double> sweep_alphas{1.5, 1.7, 1.9, 1.95};
    std::vector<ReflectionKind> sweep_models{ReflectionKind::Censored, ReflectionKind::Fleas,
                                             ReflectionKind::Projection, ReflectionKind::Mirror};
    double sweep_window = 0.8;

    // holder.*
    double holder_beta = 0.6;
    double holder_window = 0.5;
    std::vector<int> holder_n{200, 400, 800};

    // gamma.*
    double gamma_delta = 1.0;
    std::vector<double> gamma_x{0.1, 0.01, 0.001};

    // reflections.*
    long reflection_samples = 10000;

    std::uint64_t rng_seed = 0;

    LevyMeasureSpec measure() const;
    std::function<double(double)> source() const;
    ProblemSpec problem() const;
};

/// Parses and validates; throws ConfigError.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

const std::vector<std::string>& subcommands();

struct RunResult {
    /// 0 all verdicts pass, 1 some verdict fails, 2 usage or config error.
    int exit_code = 0;
    std::filesystem::path file;
    std::string csv;
    std::string message;
};

/// Dispatches a subcommand and writes <out_dir>/<subcommand>.csv.
/// An empty subcommand falls back to the config's `subcommand` key.
RunResult run(const RunConfig& config, const std::string& subcommand, const std::filesystem::path& out_dir);

/// Round-trip decimal ("%.17g").
std::string format_double(double v);

}  // namespace nlneumann
