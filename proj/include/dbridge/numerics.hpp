#pragma once

#include <functional>
#include <stdexcept>

namespace dbridge::numerics {

// Value/error pair from adaptive quadrature.
struct QuadResult {
    double value;
    double error_estimate;
};

// Adaptive Gauss-Legendre quadrature of a smooth integrand on [a, b].
// Panel error is estimated by comparing 15-point and 31-point rules; the
// worst panel is bisected until the total estimate drops below
// rel_tol * |integral| + abs_floor. Relative control keeps full accuracy
// for integrals that are legitimately tiny.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double rel_tol = 1e-13, double abs_floor = 1e-300);

// Solve f(x) = target on [lo, hi] where f is continuous and strictly
// monotone (either direction). Secant steps with a bisection safeguard;
// the bracket is maintained throughout. Converges to a relative x-width
// of xtol_rel (absolute xtol_rel for brackets straddling 0).
double invert_monotone(const std::function<double(double)>& f, double lo, double hi,
                       double target, double xtol_rel = 1e-15, int max_iter = 200);

// Unevaluated double-double value: represents hi + lo with |lo| <= ulp(hi).
// Only the operations the certified fractional-part pipeline needs.
struct DoubleDouble {
    double hi = 0.0;
    double lo = 0.0;

    double to_double() const { return hi + lo; }
};

DoubleDouble dd_from_sum(double a, double b);          // exact two-sum
DoubleDouble dd_add(DoubleDouble x, double y);
DoubleDouble dd_sub(DoubleDouble x, double y);
DoubleDouble dd_mul_int(DoubleDouble x, long long n);  // n exactly representable

} // namespace dbridge::numerics
