#include "nlneumann/grid.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace nlneumann {

std::string Extension::describe() const {
    if (kind == Kind::ConstantAtEnd) return "constant-at-end";
    std::ostringstream os;
    os.precision(17);
    os << "prescribed(" << value << ")";
    return os.str();
}

Grid Grid::half_line(double L, int n) {
    if (!(L > 0.0)) throw std::invalid_argument("grid length L must be positive");
    if (n < 2) throw std::invalid_argument("grid needs n >= 2 nodes");
    return Grid{0.0, L, n};
}

Grid Grid::whole_line(double L, int n_half) {
    if (!(L > 0.0)) throw std::invalid_argument("grid length L must be positive");
    if (n_half < 2) throw std::invalid_argument("grid needs n >= 2 nodes");
    return Grid{-L, L, 2 * n_half - 1};
}

std::vector<double> Grid::nodes() const {
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i) xs[i] = x(i);
    return xs;
}

GridFunction::GridFunction(Grid g, std::vector<double> v, Extension e)
    : grid(g), values(std::move(v)), extension(e) {
    if (static_cast<int>(values.size()) != grid.n) throw std::invalid_argument("grid function size mismatch");
}

double GridFunction::left_extension() const {
    return extension.kind == Extension::Kind::Prescribed ? extension.value : values.front();
}

double GridFunction::right_extension() const {
    return extension.kind == Extension::Kind::Prescribed ? extension.value : values.back();
}

double GridFunction::operator()(double x) const {
    if (x > grid.x_max) return right_extension();
    if (x < grid.x_min) {
        if (grid.is_half_line()) throw std::domain_error("grid function evaluated outside the closed half-line");
        return left_extension();
    }
    const double s = (x - grid.x_min) / grid.dx();
    int j = static_cast<int>(std::floor(s));
    if (j >= grid.n - 1) return values.back();
    if (j < 0) j = 0;
    const double t = s - j;
    return (1.0 - t) * values[j] + t * values[j + 1];
}

}  // namespace nlneumann
