#pragma once

#include <gmpxx.h>

#include "dbridge/alpha.hpp"

namespace dbridge::alpha::detail {

// Sequential certified evaluator of the fractional data of n*alpha
// (optionally of n*alpha - beta) over consecutive indices. Everything is
// scaled-integer arithmetic: with D the denominator scale, the exact value
// of n*alpha*D lies in [A_n, A_n + span_n], where A_n advances by a fixed
// integer step per index. The double views carry certified radii; the
// predicates fall back to exact integer comparisons when the certified
// interval straddles the decision boundary or an integer (wrap).
class FracKernel {
  public:
    FracKernel(const AlphaRatio& a, long long n_start, double beta = 0.0);

    void advance();
    long long n() const { return n_; }

    // xi_tilde_n = n*(frac(n alpha) - 1/2); beta must be 0
    double xi_mid() const { return xi_mid_; }
    double xi_radius() const { return xi_rad_; }
    bool xi_abs_less(double threshold) const;  // |xi_tilde_n| < threshold
    bool hurwitz_minus() const;                // n*xi_n < 2/sqrt5
    DichotomySequences record() const;

    // Exact rational midpoint of the certified xi_tilde interval plus an
    // upper bound on its halfwidth. Resolves wraps exactly where possible.
    void exact_interval(mpq_class& mid, double& rad) const;

    // n * dist(n alpha - beta, Z), certified midpoint
    double dist_scaled_mid() const;

  private:
    const AlphaRatio alpha_;  // keeps the underlying state alive
    long long n_;
    bool has_beta_;
    bool wrap_ = false;  // certified interval touches the next integer
    mpz_class D_;        // denominator scale (includes the beta shift)
    mpz_class step_;     // A_{n+1} - A_n
    mpz_class spanc_;    // span_n = spanc * n
    mpz_class offset_;   // A_n = step*n - offset
    mpz_class An_, F_, U_, Y_, span_, t1_;
    double Dd_;          // double of D (for midpoint views)
    double spancd_;
    double xi_mid_, xi_rad_;

    void refresh();
    mpz_class quad_exact_floor() const;
    void quad_linear_parts(mpz_class& A, mpz_class& B) const;  // xi*2c = A + B*sqrt(m)
    int exact_xi_sign() const;
    bool exact_xi_abs_less(double threshold) const;
    bool exact_hurwitz() const;
};

} // namespace dbridge::alpha::detail
