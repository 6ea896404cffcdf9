#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "nlneumann/reflect.hpp"

using namespace nlneumann;

namespace {

std::vector<double> land(ReflectionKind kind, std::array<double, 2> x, std::array<double, 2> z) {
    return reflect(ReflectionModel{kind}, x, z);
}

}  // namespace

TEST_CASE("landing points of the four models") {
    CHECK(land(ReflectionKind::Mirror, {0, 1}, {4, -3}) == std::vector<double>{4, 2});
    CHECK(land(ReflectionKind::Projection, {0, 1}, {4, -3}) == std::vector<double>{4, 0});
    CHECK(land(ReflectionKind::Fleas, {0, 1}, {4, -2}) == std::vector<double>{2, 0});
    CHECK(land(ReflectionKind::Censored, {0, 1}, {4, -3}) == std::vector<double>{0, 1});
    for (auto kind : {ReflectionKind::Censored, ReflectionKind::Fleas, ReflectionKind::Projection,
                      ReflectionKind::Mirror}) {
        CHECK(land(kind, {0, 1}, {4, 1}) == std::vector<double>{4, 2});
    }
}

TEST_CASE("boundary points") {
    CHECK(reflect1(ReflectionKind::Fleas, 0.0, -0.5) == 0.0);
    CHECK(reflect1(ReflectionKind::Projection, 0.0, -0.5) == 0.0);
    CHECK(reflect1(ReflectionKind::Mirror, 0.0, -0.5) == 0.5);
    CHECK(reflect1(ReflectionKind::Censored, 0.0, -0.5) == 0.0);
    CHECK_THROWS(reflect1(ReflectionKind::Mirror, -0.1, 0.5));
}

TEST_CASE("parse and print model names") {
    for (auto kind : {ReflectionKind::Censored, ReflectionKind::Fleas, ReflectionKind::Projection,
                      ReflectionKind::Mirror}) {
        CHECK(parse_reflection(to_string(kind)) == kind);
    }
    CHECK_THROWS(parse_reflection("bounce"));
}

TEST_CASE("sampled geometric invariants") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> nd(0.0, 1.0);
    std::uniform_real_distribution<double> ud(0.0, 2.0);
    for (int s = 0; s < 20000; ++s) {
        const std::array<double, 3> x{nd(rng), nd(rng), ud(rng)};
        const std::array<double, 3> z{nd(rng), nd(rng), nd(rng)};
        for (auto kind : {ReflectionKind::Censored, ReflectionKind::Fleas, ReflectionKind::Projection,
                          ReflectionKind::Mirror}) {
            const auto p = reflect(ReflectionModel{kind}, x, z);
            CHECK(p[2] >= 0.0);
            if (kind == ReflectionKind::Mirror) CHECK(p[2] == std::abs(x[2] + z[2]));
            if (kind == ReflectionKind::Projection && x[2] + z[2] >= 0.0) {
                const auto eta = jump(ReflectionModel{kind}, x, z);
                for (int i = 0; i < 3; ++i) CHECK(std::abs(eta[i] - z[i]) <= 1e-15 * (std::abs(x[i]) + std::abs(z[i])));
            }
        }
        const double x1 = ud(rng);
        const double z1 = nd(rng);
        CHECK(reflect1(ReflectionKind::Fleas, x1, z1) == reflect1(ReflectionKind::Projection, x1, z1));
    }
}

TEST_CASE("hypothesis sampling") {
    const auto mirror = check_hypotheses(ReflectionModel{ReflectionKind::Mirror}, 100000, 3);
    CHECK(mirror.all_consistent());
    for (const auto& r : mirror.results) {
        if (r.name.rfind("H5", 0) == 0) {
            CHECK(r.observed);
            CHECK(r.worst_margin >= -1e-12);
        }
    }
    CHECK(mirror.observed_c_eta <= mirror.c_eta_bound);

    const auto censored = check_hypotheses(ReflectionModel{ReflectionKind::Censored}, 100000, 3);
    CHECK(censored.all_consistent());
    for (const auto& r : censored.results) {
        if (r.name.rfind("H5", 0) == 0) {
            CHECK_FALSE(r.observed);
            CHECK(r.witness.size() == 6);
        }
    }
    for (auto kind : {ReflectionKind::Fleas, ReflectionKind::Projection}) {
        const auto rep = check_hypotheses(ReflectionModel{kind}, 20000, 5, 1);
        CHECK(rep.all_consistent());
        CHECK(rep.observed_c_eta <= 1.0);
    }
}

TEST_CASE("hypothesis sampling is reproducible") {
    const auto a = check_hypotheses(ReflectionModel{ReflectionKind::Fleas}, 5000, 42);
    const auto b = check_hypotheses(ReflectionModel{ReflectionKind::Fleas}, 5000, 42);
    REQUIRE(a.results.size() == b.results.size());
    for (std::size_t i = 0; i < a.results.size(); ++i) CHECK(a.results[i].worst_margin == b.results[i].worst_margin);
}
