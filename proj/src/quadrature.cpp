#include "nlneumann/quadrature.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <limits>

namespace nlneumann {

namespace bq = boost::math::quadrature;

QuadResult integrate(const std::function<double(double)>& f, double a, double b, double rel_tol) {
    if (!(b > a)) return {};
    static thread_local bq::tanh_sinh<double> ts(12);
    double err = 0.0;
    double l1 = 0.0;
    const double v = ts.integrate(f, a, b, rel_tol, &err, &l1);
    // The library error estimate is relative to the L1 norm.
    return {v, std::abs(err) * std::max(l1, std::abs(v))};
}

QuadResult integrate_to_inf(const std::function<double(double)>& f, double a, double rel_tol) {
    static thread_local bq::exp_sinh<double> es(12);
    double err = 0.0;
    double l1 = 0.0;
    const double v = es.integrate([&](double t) { return f(a + t); }, 0.0, std::numeric_limits<double>::infinity(),
                                  rel_tol, &err, &l1);
    return {v, std::abs(err) * std::max(l1, std::abs(v))};
}

QuadResult integrate_smooth(const std::function<double(double)>& f, double a, double b, double rel_tol) {
    if (!(b > a)) return {};
    double err = 0.0;
    const double v = bq::gauss_kronrod<double, 15>::integrate(f, a, b, 20, rel_tol, &err);
    return {v, std::abs(err)};
}

}  // namespace nlneumann
