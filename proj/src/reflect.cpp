#include "nlneumann/reflect.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace nlneumann {

std::string to_string(ReflectionKind kind) {
    switch (kind) {
        case ReflectionKind::Censored: return "censored";
        case ReflectionKind::Fleas: return "fleas";
        case ReflectionKind::Projection: return "projection";
        case ReflectionKind::Mirror: return "mirror";
    }
    return "unknown";
}

ReflectionKind parse_reflection(const std::string& name) {
    if (name == "censored") return ReflectionKind::Censored;
    if (name == "fleas") return ReflectionKind::Fleas;
    if (name == "projection") return ReflectionKind::Projection;
    if (name == "mirror") return ReflectionKind::Mirror;
    throw std::invalid_argument("unknown reflection model '" + name + "'");
}

std::vector<double> reflect(const ReflectionModel& model, std::span<const double> x, std::span<const double> z) {
    if (x.empty() || x.size() != z.size()) throw std::invalid_argument("reflect: dimension mismatch");
    const std::size_t n = x.size();
    const double xn = x[n - 1];
    const double zn = z[n - 1];
    if (xn < 0.0) throw std::domain_error("reflect: x lies outside the closed half-space");
    bool nonzero = false;
    for (double c : z) nonzero = nonzero || c != 0.0;
    if (!nonzero) throw std::domain_error("reflect: z must be nonzero");

    std::vector<double> p(n);
    if (xn + zn >= 0.0) {
        for (std::size_t i = 0; i < n; ++i) p[i] = x[i] + z[i];
        return p;
    }
    switch (model.kind) {
        case ReflectionKind::Censored:
            p.assign(x.begin(), x.end());
            break;
        case ReflectionKind::Fleas: {
            const double t = xn / std::abs(zn);
            for (std::size_t i = 0; i + 1 < n; ++i) p[i] = x[i] + t * z[i];
            p[n - 1] = 0.0;
            break;
        }
        case ReflectionKind::Projection:
            for (std::size_t i = 0; i + 1 < n; ++i) p[i] = x[i] + z[i];
            p[n - 1] = 0.0;
            break;
        case ReflectionKind::Mirror:
            for (std::size_t i = 0; i + 1 < n; ++i) p[i] = x[i] + z[i];
            p[n - 1] = -(xn + zn);
            break;
    }
    return p;
}

std::vector<double> jump(const ReflectionModel& model, std::span<const double> x, std::span<const double> z) {
    auto p = reflect(model, x, z);
    for (std::size_t i = 0; i < p.size(); ++i) p[i] -= x[i];
    return p;
}

double reflect1(ReflectionKind kind, double x, double z) {
    if (x < 0.0) throw std::domain_error("reflect: x lies outside the closed half-line");
    const double t = x + z;
    if (t >= 0.0) return t;
    switch (kind) {
        case ReflectionKind::Censored: return x;
        case ReflectionKind::Fleas:
        case ReflectionKind::Projection: return 0.0;
        case ReflectionKind::Mirror: return -t;
    }
    return x;
}

bool HypothesisReport::all_consistent() const {
    return std::all_of(results.begin(), results.end(), [](const HypothesisResult& r) { return r.consistent(); });
}

namespace {

struct Tracker {
    HypothesisResult r;
    explicit Tracker(std::string name, bool expected) {
        r.name = std::move(name);
        r.expected = expected;
        r.worst_margin = std::numeric_limits<double>::infinity();
    }
    void record(double margin, const std::vector<double>& x, const std::vector<double>& y,
                const std::vector<double>& z) {
        if (margin < r.worst_margin) {
            r.worst_margin = margin;
            r.witness.clear();
            r.witness.insert(r.witness.end(), x.begin(), x.end());
            r.witness.insert(r.witness.end(), y.begin(), y.end());
            r.witness.insert(r.witness.end(), z.begin(), z.end());
        }
    }
    HypothesisResult finish(double tol) {
        r.observed = r.worst_margin >= -tol;
        return r;
    }
};

double norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double c : v) s += c * c;
    return std::sqrt(s);
}

}  // namespace

HypothesisReport check_hypotheses(const ReflectionModel& model, long sample_count, std::uint64_t rng_seed,
                                  int dimension) {
    if (sample_count < 1) throw std::invalid_argument("check_hypotheses: sample_count must be >= 1");
    if (dimension < 1) throw std::invalid_argument("check_hypotheses: dimension must be >= 1");
    const int n = dimension;
    const bool censored = model.kind == ReflectionKind::Censored;

    HypothesisReport rep;
    rep.kind = model.kind;
    rep.dimension = n;
    rep.samples = sample_count;
    rep.c_eta_bound = model.kind == ReflectionKind::Mirror ? 3.0 : 1.0;

    Tracker h0("H0 range", true);
    Tracker h1("H1 linear growth", true);
    Tracker h2("H2 tangential antisymmetry", true);
    Tracker h5("H5 normal contraction", !censored);
    Tracker h6("H6 censored identity", censored);

    std::mt19937_64 rng(rng_seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);

    std::vector<double> x(n), y(n), z(n), zs(n);
    double c_obs = 0.0;
    for (long s = 0; s < sample_count; ++s) {
        for (int i = 0; i + 1 < n; ++i) x[i] = normal(rng);
        x[n - 1] = unit(rng) < 0.1 ? 0.0 : 2.0 * unit(rng);
        y = x;
        y[n - 1] = std::max(0.0, x[n - 1] + 0.5 * normal(rng) * std::pow(10.0, -2.0 * unit(rng)));
        const double scale = std::pow(10.0, -3.0 + 4.0 * unit(rng));
        for (int i = 0; i < n; ++i) z[i] = scale * normal(rng);
        if (norm(z) == 0.0) continue;

        const auto px = reflect(model, x, z);
        const auto py = reflect(model, y, z);
        const auto eta = jump(model, x, z);
        const double zn = norm(z);

        h0.record(px[n - 1], x, y, z);
        // eta = P - x carries a rounding error of at most eps (|P| + |x|).
        const double rounding = std::numeric_limits<double>::epsilon() * (norm(px) + norm(x));
        const double ratio = std::max(0.0, norm(eta) - rounding) / zn;
        c_obs = std::max(c_obs, ratio);
        h1.record(rep.c_eta_bound - ratio, x, y, z);

        for (int i = 0; i + 1 < n; ++i) {
            zs = z;
            zs[i] = -zs[i];
            const auto es = jump(model, x, zs);
            h2.record(-std::abs(es[i] + eta[i]), x, y, z);
        }

        h5.record(std::abs(x[n - 1] - y[n - 1]) - std::abs(px[n - 1] - py[n - 1]), x, y, z);

        const bool inside = x[n - 1] + z[n - 1] >= 0.0;
        double dev = 0.0;
        for (int i = 0; i < n; ++i) dev = std::max(dev, std::abs(eta[i] - (inside ? z[i] : 0.0)));
        h6.record(-dev, x, y, z);
    }
    if (n == 1) h2.r.worst_margin = 0.0;

    rep.observed_c_eta = c_obs;
    constexpr double tol = 1e-12;
    rep.results = {h0.finish(tol), h1.finish(tol), h2.finish(tol), h5.finish(tol), h6.finish(tol)};
    return rep;
}

}  // namespace nlneumann
