#include "nlneumann/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "nlneumann/appendix_oracles.hpp"
#include "nlneumann/local_limit.hpp"

namespace nlneumann {

ConfigError::ConfigError(std::string key, const std::string& what)
    : std::runtime_error(key + ": " + what), key_(std::move(key)) {}

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double to_double(const std::string& key, const std::string& v) {
    double out = 0.0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(out))
        throw ConfigError(key, "expected a finite number, got '" + v + "'");
    return out;
}

long to_long(const std::string& key, const std::string& v) {
    long out = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size()) throw ConfigError(key, "expected an integer, got '" + v + "'");
    return out;
}

int to_int(const std::string& key, const std::string& v) {
    const long l = to_long(key, v);
    if (l < std::numeric_limits<int>::min() || l > std::numeric_limits<int>::max())
        throw ConfigError(key, "integer out of range");
    return static_cast<int>(l);
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(key, "expected true or false, got '" + v + "'");
}

ReflectionKind to_kind(const std::string& key, const std::string& v) {
    try {
        return parse_reflection(v);
    } catch (const std::exception&) {
        throw ConfigError(key, "unknown reflection model '" + v + "'");
    }
}

template <class T, class F>
std::vector<T> to_list(const std::string& key, const std::string& v, F conv) {
    std::vector<T> out;
    for (const auto& item : split_list(v)) out.push_back(conv(key, item));
    if (out.empty()) throw ConfigError(key, "empty list");
    return out;
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"subcommand", [](RunConfig& c, const std::string&, const std::string& v) { c.subcommand = v; }},
        {"measure.alpha", [](RunConfig& c, const std::string& k, const std::string& v) { c.alpha = to_double(k, v); }},
        {"measure.g", [](RunConfig& c, const std::string&, const std::string& v) { c.g_kind = v; }},
        {"measure.g0", [](RunConfig& c, const std::string& k, const std::string& v) { c.g0 = to_double(k, v); }},
        {"measure.slope", [](RunConfig& c, const std::string& k, const std::string& v) { c.g_slope = to_double(k, v); }},
        {"measure.cap", [](RunConfig& c, const std::string& k, const std::string& v) { c.g_cap = to_double(k, v); }},
        {"measure.rate", [](RunConfig& c, const std::string& k, const std::string& v) { c.g_rate = to_double(k, v); }},
        {"measure.c_flag", [](RunConfig& c, const std::string& k, const std::string& v) { c.c_flag = to_int(k, v); }},
        {"measure.dimension",
         [](RunConfig& c, const std::string& k, const std::string& v) { c.dimension = to_int(k, v); }},
        {"measure.normalized",
         [](RunConfig& c, const std::string& k, const std::string& v) { c.normalized = to_bool(k, v); }},
        {"reflection", [](RunConfig& c, const std::string& k, const std::string& v) { c.reflection = to_kind(k, v); }},
        {"grid.L", [](RunConfig& c, const std::string& k, const std::string& v) { c.L = to_double(k, v); }},
        {"grid.n", [](RunConfig& c, const std::string& k, const std::string& v) { c.n = to_int(k, v); }},
        {"grid.delta", [](RunConfig& c, const std::string& k, const std::string& v) { c.delta = to_double(k, v); }},
        {"grid.tail_tol", [](RunConfig& c, const std::string& k, const std::string& v) { c.tail_tol = to_double(k, v); }},
        {"grid.extension",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             if (v == "constant") {
                 c.extension = Extension::constant_at_end();
             } else if (v.rfind("prescribed:", 0) == 0) {
                 c.extension = Extension::prescribed(to_double(k, v.substr(11)));
             } else {
                 throw ConfigError(k, "expected 'constant' or 'prescribed:<value>', got '" + v + "'");
             }
         }},
        {"solver.method", [](RunConfig& c, const std::string&, const std::string& v) { c.method = v; }},
        {"solver.tol", [](RunConfig& c, const std::string& k, const std::string& v) { c.tol = to_double(k, v); }},
        {"solver.max_iter", [](RunConfig& c, const std::string& k, const std::string& v) { c.max_iter = to_int(k, v); }},
        {"solver.k", [](RunConfig& c, const std::string& k, const std::string& v) { c.k = to_int(k, v); }},
        {"solver.k_schedule",
         [](RunConfig& c, const std::string& k, const std::string& v) { c.k_schedule = to_list<int>(k, v, to_int); }},
        {"solver.epsilon", [](RunConfig& c, const std::string& k, const std::string& v) { c.epsilon = to_double(k, v); }},
        {"solver.R_trunc", [](RunConfig& c, const std::string& k, const std::string& v) { c.r_trunc = to_double(k, v); }},
        {"source.kind", [](RunConfig& c, const std::string&, const std::string& v) { c.source_kind = v; }},
        {"source.value",
         [](RunConfig& c, const std::string& k, const std::string& v) { c.source_value = to_double(k, v); }},
        {"source.amp", [](RunConfig& c, const std::string& k, const std::string& v) { c.source_amp = to_double(k, v); }},
        {"source.center",
         [](RunConfig& c, const std::string& k, const std::string& v) { c.source_center = to_double(k, v); }},
        {"source.width",
         [](RunConfig& c, const std::string& k, const std::string& v) { c.source_width = to_double(k, v); }},
        {"source.freq", [](RunConfig& c, const std::string& k, const std::string& v) { c.source_freq = to_double(k, v); }},
        {"sweep.alphas",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.sweep_alphas = to_list<double>(k, v, to_double);
         }},
        {"sweep.models",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.sweep_models = to_list<ReflectionKind>(k, v, to_kind);
         }},
        {"sweep.window",
         [](RunConfig& c, const std::string& k, const std::string& v) { c.sweep_window = to_double(k, v); }},
        {"holder.beta", [](RunConfig& c, const std::string& k, const std::string& v) { c.holder_beta = to_double(k, v); }},
        {"holder.window",
         [](RunConfig& c, const std::string& k, const std::string& v) { c.holder_window = to_double(k, v); }},
        {"holder.n",
         [](RunConfig& c, const std::string& k, const std::string& v) { c.holder_n = to_list<int>(k, v, to_int); }},
        {"gamma.delta", [](RunConfig& c, const std::string& k, const std::string& v) { c.gamma_delta = to_double(k, v); }},
        {"gamma.x",
         [](RunConfig& c, const std::string& k, const std::string& v) { c.gamma_x = to_list<double>(k, v, to_double); }},
        {"reflections.samples",
         [](RunConfig& c, const std::string& k, const std::string& v) { c.reflection_samples = to_long(k, v); }},
        {"rng_seed",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             const long s = to_long(k, v);
             if (s < 0) throw ConfigError(k, "must be >= 0");
             c.rng_seed = static_cast<std::uint64_t>(s);
         }},
    };
    return table;
}

void require(bool ok, const std::string& key, const std::string& what) {
    if (!ok) throw ConfigError(key, what);
}

void validate(const RunConfig& c) {
    require(c.alpha > 0.0 && c.alpha < 2.0, "measure.alpha", "alpha must lie in (0, 2), got " + format_double(c.alpha));
    require(c.g_kind == "const" || c.g_kind == "affine" || c.g_kind == "exp", "measure.g",
            "expected const, affine or exp, got '" + c.g_kind + "'");
    require(c.g0 > 0.0, "measure.g0", "must be > 0");
    require(c.g_cap >= c.g0, "measure.cap", "must be >= measure.g0");
    require(c.g_rate >= 0.0, "measure.rate", "must be >= 0");
    if (c.c_flag) {
        require(*c.c_flag == default_c_flag(c.alpha), "measure.c_flag",
                "must be " + std::to_string(default_c_flag(c.alpha)) + " for alpha = " + format_double(c.alpha));
    }
    require(c.dimension >= 1 && c.dimension <= 8, "measure.dimension", "must lie in [1, 8]");
    require(c.L > 0.0, "grid.L", "must be > 0");
    require(c.n >= 3 && c.n <= 4001, "grid.n", "must lie in [3, 4001]");
    require(c.delta >= 0.0 && c.delta <= c.L / 4.0, "grid.delta", "must lie in [0, L/4] (0 selects the default)");
    require(c.tail_tol > 0.0, "grid.tail_tol", "must be > 0");
    require(c.method == "truncated" || c.method == "limit" || c.method == "direct" || c.method == "viscous",
            "solver.method", "expected truncated, limit, direct or viscous, got '" + c.method + "'");
    require(c.tol > 0.0, "solver.tol", "must be > 0");
    require(c.max_iter > 0, "solver.max_iter", "must be > 0");
    require(c.k >= 0, "solver.k", "must be >= 0");
    require(c.method != "truncated" || c.k >= 1, "solver.k", "truncated solves need k >= 1");
    require(std::all_of(c.k_schedule.begin(), c.k_schedule.end(), [](int k) { return k >= 1; }) &&
                std::is_sorted(c.k_schedule.begin(), c.k_schedule.end()) &&
                std::adjacent_find(c.k_schedule.begin(), c.k_schedule.end()) == c.k_schedule.end(),
            "solver.k_schedule", "must be strictly increasing positive integers");
    require(c.method != "limit" || c.k_schedule.size() >= 3, "solver.k_schedule", "limit solves need >= 3 entries");
    require(c.epsilon > 0.0, "solver.epsilon", "must be > 0");
    require(c.r_trunc > 0.0, "solver.R_trunc", "must be > 0");
    require(c.source_kind == "const" || c.source_kind == "cos" || c.source_kind == "gauss", "source.kind",
            "expected const, cos or gauss, got '" + c.source_kind + "'");
    require(c.source_width > 0.0, "source.width", "must be > 0");
    require(std::all_of(c.sweep_alphas.begin(), c.sweep_alphas.end(), [](double a) { return a > 0.0 && a < 2.0; }),
            "sweep.alphas", "every alpha must lie in (0, 2)");
    require(c.sweep_window > 0.0 && c.sweep_window <= 1.0, "sweep.window", "must lie in (0, 1]");
    require(c.holder_beta > 0.0 && c.holder_beta <= 1.0, "holder.beta", "must lie in (0, 1]");
    require(c.holder_window > 0.0, "holder.window", "must be > 0");
    require(std::all_of(c.holder_n.begin(), c.holder_n.end(), [](int n) { return n >= 3 && n <= 4001; }), "holder.n",
            "every n must lie in [3, 4001]");
    require(c.gamma_delta > 0.0, "gamma.delta", "must be > 0");
    require(std::all_of(c.gamma_x.begin(), c.gamma_x.end(), [](double x) { return x > 0.0; }), "gamma.x",
            "every x must be > 0");
    require(c.reflection_samples > 0, "reflections.samples", "must be > 0");
    if (!c.subcommand.empty()) {
        const auto& s = subcommands();
        require(std::find(s.begin(), s.end(), c.subcommand) != s.end(), "subcommand",
                "unknown subcommand '" + c.subcommand + "'");
    }
}

std::string b2s(bool b) { return b ? "true" : "false"; }

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

std::string join_doubles(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ";" : "") + format_double(v[i]);
    return out;
}

/// CSV writer: '#' header (version, config echo, scalars), then the table.
class CsvOut {
public:
    CsvOut(const RunConfig& config, const std::string& subcommand) {
        head_ << "# nlneumann " << kToolVersion << "\n";
        head_ << "# subcommand: " << subcommand << "\n";
        head_ << "# config begin\n";
        std::stringstream ss(config.text);
        std::string line;
        while (std::getline(ss, line)) head_ << "# " << line << "\n";
        head_ << "# config end\n";
    }
    void scalar(const std::string& key, const std::string& value) { head_ << "# " << key << ": " << value << "\n"; }
    void scalar(const std::string& key, double value) { scalar(key, format_double(value)); }
    void columns(const std::vector<std::string>& names) { row(names); }
    void row(const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) body_ << (i ? "," : "") << csv_field(fields[i]);
        body_ << "\n";
    }
    std::string str() const { return head_.str() + body_.str(); }

private:
    std::ostringstream head_;
    std::ostringstream body_;
};

bool run_solve(const RunConfig& c, CsvOut& out) {
    require(c.dimension == 1, "measure.dimension", "solve is 1-d only");
    const ProblemSpec p = c.problem();
    SolveReport r;
    if (c.method == "truncated") {
        r = solve_truncated(p, c.k, c.tol, c.max_iter);
    } else if (c.method == "limit") {
        r = solve_limit(p, c.k_schedule, c.tol, c.max_iter);
    } else if (c.method == "viscous") {
        r = solve_viscous(p, c.epsilon, c.r_trunc, c.tol, c.max_iter);
    } else {
        r = solve_direct(p, c.k);
    }
    out.scalar("method", r.method);
    out.scalar("converged", b2s(r.converged));
    out.scalar("iterations", std::to_string(r.iterations));
    out.scalar("residual", r.residual);
    out.scalar("boundary_residual", r.boundary_residual);
    out.scalar("neumann_boundary", b2s(r.neumann_boundary));
    out.scalar("epsilon", r.epsilon);
    out.scalar("contraction_factor", r.contraction_factor);
    out.scalar("dominance_margin", r.dominance_margin);
    out.scalar("tail_mass", r.tail_mass);
    out.scalar("tail_within_tol", b2s(r.tail_within_tol));
    if (!r.cauchy_increments.empty()) {
        out.scalar("cauchy_increments", join_doubles(r.cauchy_increments));
        out.scalar("cauchy_monotone", b2s(r.cauchy_monotone));
    }
    if (c.method == "viscous") {
        out.scalar("damping", r.damping);
        out.scalar("active_clamps", std::to_string(r.active_clamps));
        out.scalar("max_abs_operator", r.max_abs_operator);
    }
    if (!r.message.empty()) out.scalar("message", r.message);
    out.columns({"x", "u", "residual"});
    for (int i = 0; i < p.grid.n; ++i) {
        out.row({format_double(p.grid.x(i)), format_double(r.u.values[i]), format_double(r.nodal_residual[i])});
    }
    return r.converged && std::isfinite(r.residual);
}

bool run_sweep(const RunConfig& c, CsvOut& out) {
    require(c.dimension == 1, "measure.dimension", "sweep-alpha is 1-d only");
    const SweepTable t = alpha_sweep(c.problem(), c.sweep_alphas, c.sweep_models, c.sweep_window);
    out.scalar("a", t.coefficients.a);
    out.scalar("b", t.coefficients.b1());
    out.scalar("local_diffusion", t.coefficients.diffusion());
    out.scalar("window", t.window);
    out.scalar("cross_model_gap", join_doubles(t.cross_model_gap));
    out.scalar("e_decreasing", b2s(t.e_decreasing));
    out.scalar("gap_shrinks", b2s(t.gap_shrinks));
    bool ok = t.e_decreasing && t.gap_shrinks;
    out.columns({"alpha", "model", "e_alpha", "iterations", "residual"});
    for (const auto& row : t.rows) {
        ok = ok && row.ok;
        out.row({format_double(row.alpha), to_string(row.kind), format_double(row.e_alpha),
                 std::to_string(row.iterations), format_double(row.residual)});
    }
    return ok;
}

bool run_appendix(const RunConfig&, CsvOut& out) {
    const auto battery = appendix_battery();
    int failures = 0;
    double max_error = 0.0;
    for (const auto& r : battery) {
        if (!r.pass) ++failures;
        max_error = std::max(max_error, r.error);
    }
    out.scalar("claims", std::to_string(battery.size()));
    out.scalar("failures", std::to_string(failures));
    out.scalar("max_quadrature_error", max_error);
    out.columns({"claim", "value", "error", "verdict", "note"});
    for (const auto& r : battery) {
        out.row({r.claim, format_double(r.value), format_double(r.error), r.pass ? "pass" : "fail", r.note});
    }
    return failures == 0;
}

bool run_reflections(const RunConfig& c, CsvOut& out) {
    bool ok = true;
    std::vector<HypothesisReport> reports;
    for (ReflectionKind kind : {ReflectionKind::Censored, ReflectionKind::Fleas, ReflectionKind::Projection,
                                ReflectionKind::Mirror}) {
        reports.push_back(check_hypotheses(ReflectionModel{kind}, c.reflection_samples, c.rng_seed, c.dimension));
        const auto& r = reports.back();
        const bool c_ok = r.observed_c_eta <= r.c_eta_bound + 1e-12;
        out.scalar("c_eta[" + to_string(kind) + "]",
                   "observed=" + format_double(r.observed_c_eta) + " bound=" + format_double(r.c_eta_bound));
        ok = ok && c_ok && r.all_consistent();
    }
    out.scalar("samples", std::to_string(c.reflection_samples));
    out.scalar("dimension", std::to_string(c.dimension));
    out.columns({"model", "hypothesis", "expected", "observed", "worst_margin", "verdict"});
    for (const auto& r : reports) {
        for (const auto& h : r.results) {
            out.row({to_string(r.kind), h.name, b2s(h.expected), b2s(h.observed), format_double(h.worst_margin),
                     h.consistent() ? "pass" : "fail"});
        }
    }
    return ok;
}

bool run_gamma(const RunConfig& c, CsvOut& out) {
    require(c.dimension == 1, "measure.dimension", "gamma-profile is 1-d only");
    require(c.alpha >= 1.0, "measure.alpha", "gamma-profile needs alpha in [1, 2)");
    std::vector<double> xs = c.gamma_x;
    const GammaProfile g = gamma_profile(c.measure(), c.reflection, c.gamma_delta, xs);
    out.scalar("delta", c.gamma_delta);
    out.scalar("positive", b2s(g.positive));
    out.scalar("increasing", b2s(g.increasing));
    out.scalar("closed_form_available", b2s(g.closed_form_available));
    out.scalar("max_rel_error", g.max_rel_error);
    out.columns({"x", "gamma", "closed_form", "rel_error"});
    for (const auto& r : g.rows) {
        out.row({format_double(r.x), format_double(r.gamma),
                 g.closed_form_available ? format_double(r.closed_form) : std::string("nan"),
                 g.closed_form_available ? format_double(r.rel_error) : std::string("nan")});
    }
    return g.pass;
}

bool run_holder(const RunConfig& c, CsvOut& out) {
    require(c.dimension == 1, "measure.dimension", "holder is 1-d only");
    std::vector<double> q;
    std::vector<double> res;
    for (int n : c.holder_n) {
        ProblemSpec p = c.problem();
        p.grid = Grid::half_line(c.L, n);
        const SolveReport r = solve_direct(p, c.k);
        q.push_back(holder_quotient(r.u, c.holder_beta, c.holder_window));
        res.push_back(r.residual);
    }
    const auto [lo, hi] = std::minmax_element(q.begin(), q.end());
    const double ratio = *hi / *lo;
    out.scalar("beta", c.holder_beta);
    out.scalar("window", c.holder_window);
    out.scalar("max_over_min", ratio);
    out.columns({"n", "quotient", "residual"});
    for (std::size_t i = 0; i < q.size(); ++i) {
        out.row({std::to_string(c.holder_n[i]), format_double(q[i]), format_double(res[i])});
    }
    return std::isfinite(ratio) && ratio < 2.0;
}

}  // namespace

LevyMeasureSpec RunConfig::measure() const {
    DensityNumerator g;
    if (g_kind == "affine") {
        g = affine_numerator(g0, g_slope, g_cap);
    } else if (g_kind == "exp") {
        g = exp_numerator(g0, g_rate);
    } else {
        g = constant_numerator(g0);
    }
    return LevyMeasureSpec(dimension, alpha, g, c_flag.value_or(default_c_flag(alpha)));
}

std::function<double(double)> RunConfig::source() const {
    if (source_kind == "cos") {
        return [a = source_amp, w = source_freq](double x) { return a * std::cos(w * x); };
    }
    if (source_kind == "gauss") {
        return [a = source_amp, m = source_center, s = source_width](double x) {
            const double t = (x - m) / s;
            return a * std::exp(-t * t);
        };
    }
    return [v = source_value](double) { return v; };
}

ProblemSpec RunConfig::problem() const {
    ProblemSpec p{measure(), reflection, source(), Grid::half_line(L, n), normalized, {}, extension};
    p.params.delta = delta;
    p.params.tail_tol = tail_tol;
    return p;
}

RunConfig parse_config(const std::string& text) {
    RunConfig c;
    c.text = text;
    std::set<std::string> seen;
    std::stringstream ss(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(ss, raw)) {
        ++line_no;
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no), "expected key=value, got '" + line + "'");
        }
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        const auto it = setters().find(key);
        if (it == setters().end()) throw ConfigError(key, "unknown key");
        if (!seen.insert(key).second) throw ConfigError(key, "duplicate key");
        it->second(c, key, value);
        c.entries.emplace_back(key, value);
    }
    validate(c);
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config", "cannot read '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

const std::vector<std::string>& subcommands() {
    static const std::vector<std::string> names = {"solve",     "sweep-alpha",   "verify-appendix",
                                                   "check-reflections", "gamma-profile", "holder"};
    return names;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

RunResult run(const RunConfig& config, const std::string& subcommand, const std::filesystem::path& out_dir) {
    RunResult result;
    const std::string sub = subcommand.empty() ? config.subcommand : subcommand;
    const auto& names = subcommands();
    if (std::find(names.begin(), names.end(), sub) == names.end()) {
        result.exit_code = 2;
        result.message = sub.empty() ? "subcommand: none given" : "subcommand: unknown subcommand '" + sub + "'";
        return result;
    }
    CsvOut out(config, sub);
    bool pass = false;
    try {
        if (sub == "solve") {
            pass = run_solve(config, out);
        } else if (sub == "sweep-alpha") {
            pass = run_sweep(config, out);
        } else if (sub == "verify-appendix") {
            pass = run_appendix(config, out);
        } else if (sub == "check-reflections") {
            pass = run_reflections(config, out);
        } else if (sub == "gamma-profile") {
            pass = run_gamma(config, out);
        } else {
            pass = run_holder(config, out);
        }
    } catch (const ConfigError& e) {
        result.exit_code = 2;
        result.message = e.what();
        return result;
    } catch (const std::invalid_argument& e) {
        result.exit_code = 2;
        result.message = e.what();
        return result;
    } catch (const std::domain_error& e) {
        result.exit_code = 2;
        result.message = e.what();
        return result;
    }
    result.csv = out.str();
    std::filesystem::create_directories(out_dir);
    result.file = out_dir / (sub + ".csv");
    std::ofstream f(result.file, std::ios::binary);
    f << result.csv;
    if (!f) throw std::runtime_error("cannot write " + result.file.string());
    result.exit_code = pass ? 0 : 1;
    result.message = pass ? "all verdicts pass" : "some verdicts fail";
    return result;
}

}  // namespace nlneumann
