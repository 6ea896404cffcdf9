#pragma once

#include <string>
#include <vector>

namespace nlneumann {

/// Far-field policy for evaluating a grid function beyond its window.
struct Extension {
    enum class Kind { ConstantAtEnd, Prescribed };
    Kind kind = Kind::ConstantAtEnd;
    double value = 0.0;

    static Extension constant_at_end() { return {}; }
    static Extension prescribed(double v) { return {Kind::Prescribed, v}; }
    std::string describe() const;
};

/// Uniform grid on [x_min, x_max]. Half-line windows have x_min = 0; the
/// free-space (whole-line) variant is symmetric, x_min = -x_max.
struct Grid {
    double x_min = 0.0;
    double x_max = 1.0;
    int n = 2;

    static Grid half_line(double L, int n);
    /// Symmetric grid on [-L, L] with 2 n_half - 1 nodes, sharing the nodes of half_line(L, n_half).
    static Grid whole_line(double L, int n_half);

    double dx() const { return (x_max - x_min) / (n - 1); }
    double x(int i) const { return x_min + i * dx(); }
    double length() const { return x_max; }
    bool is_half_line() const { return x_min == 0.0; }
    std::vector<double> nodes() const;
};

/// Piecewise-linear function on a grid with a far-field extension.
struct GridFunction {
    Grid grid;
    std::vector<double> values;
    Extension extension;

    GridFunction() = default;
    GridFunction(Grid g, std::vector<double> v, Extension e = {});

    double operator()(double x) const;
    double left_extension() const;
    double right_extension() const;
};

}  // namespace nlneumann
