#include "doctest.h"

#include <cmath>

#include "dbridge/numerics.hpp"

using namespace dbridge::numerics;

TEST_CASE("quadrature reproduces closed forms") {
    QuadResult r = integrate([](double x) { return std::exp(x); }, 0.0, 1.0);
    CHECK(std::fabs(r.value - (M_E - 1.0)) < 1e-14);
    CHECK(r.error_estimate < 1e-13);

    r = integrate([](double x) { return 1.0 / (1.0 + x * x); }, 0.0, 1.0);
    CHECK(std::fabs(r.value - M_PI / 4.0) < 1e-14);
}

TEST_CASE("quadrature keeps relative accuracy for tiny integrals") {
    // Integral of a narrow Gaussian tail: absolute-only control would
    // accept a useless answer here.
    double a = 20.0, b = 30.0;
    QuadResult r = integrate([](double x) { return std::exp(-x); }, a, b);
    double exact = std::exp(-a) - std::exp(-b);
    CHECK(std::fabs(r.value - exact) < 1e-12 * exact);
}

TEST_CASE("quadrature handles mildly singular endpoint derivatives") {
    QuadResult r = integrate([](double x) { return std::sqrt(x); }, 0.0, 1.0);
    CHECK(std::fabs(r.value - 2.0 / 3.0) < 1e-12);
}

TEST_CASE("invert_monotone solves increasing and decreasing problems") {
    double x = invert_monotone([](double t) { return t * t * t; }, 0.0, 4.0, 2.0);
    CHECK(std::fabs(x - std::cbrt(2.0)) < 1e-14);

    x = invert_monotone([](double t) { return std::exp(-t); }, 0.0, 10.0, 0.2);
    CHECK(std::fabs(x + std::log(0.2)) < 1e-13);
}

TEST_CASE("invert_monotone reaches relative tolerance on wide brackets") {
    // Root at 1e-6 inside [1e-300, 1]: absolute-width bisection would stop
    // far from it.
    double x = invert_monotone([](double t) { return std::log(t); }, 1e-300, 1.0,
                               std::log(1e-6));
    CHECK(std::fabs(x - 1e-6) < 1e-12 * 1e-6);
}

TEST_CASE("double-double arithmetic is exact where doubles are not") {
    DoubleDouble s = dd_from_sum(1.0, 1e-20);
    CHECK(s.hi == 1.0);
    CHECK(s.lo == 1e-20);

    // (1 + 1e-20) - 1 recovers the small part exactly.
    DoubleDouble d = dd_sub(s, 1.0);
    CHECK(d.to_double() == 1e-20);

    // Multiplication by an exactly representable integer.
    DoubleDouble m = dd_mul_int(dd_from_sum(0.1, 0.0), 10);
    // 0.1 is not exactly 1/10; the double-double product keeps the defect.
    double defect = 10.0 * 0.1 - 1.0 + (m.to_double() - 10.0 * 0.1);
    CHECK(std::fabs(m.hi + m.lo - 10.0 * 0.1) < 1e-16);
    CHECK(std::fabs(defect) < 1e-15);

    DoubleDouble a = dd_add(dd_from_sum(1e16, 0.0), 0.4);
    CHECK(a.hi == 1e16);
    CHECK(a.lo == 0.4);
}
