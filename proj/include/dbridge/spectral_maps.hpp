#pragma once

namespace dbridge::maps {

// Elliptic modulus of a focusing cnoidal state, k in (1/sqrt2, 1).
// Three redundant coordinates are carried so that both domain endpoints
// stay fully resolved in double precision:
//   k       the modulus itself,
//   kprime  sqrt(1 - k^2)   (resolves k -> 1),
//   delta   k - 1/sqrt2     (resolves k -> 1/sqrt2).
// Derived quantities use whichever coordinate is exact there:
//   2k^2 - 1 = 2*sqrt2*delta + 2*delta^2 = 1 - 2*kprime^2.
struct ModulusFocusing {
    double k;
    double kprime;
    double delta;

    static ModulusFocusing from_k(double k);
    static ModulusFocusing from_kprime(double kprime);
    static ModulusFocusing from_delta(double delta);

    double two_k2_minus_1() const;
    double K() const; // complete elliptic integral at this modulus
};

// S(k) = 4 sqrt(2k^2-1) K(k): scaled period of the cnoidal state.
// Strictly increasing from (1/sqrt2, 1) onto (0, inf).
double S_of_k(const ModulusFocusing& m);

// Inverse of S. Requires 0 < s <= 2500 (beyond that the complementary
// modulus underflows double precision).
ModulusFocusing S_inverse(double s);

// phi(k) = arccn(sqrt(2k^2-1)/k; k) / K(k): fraction of the quarter period
// spent above the inflection value. Strictly decreasing from (1/sqrt2, 1)
// onto (0, 1). Evaluated so that BOTH phi and 1-phi keep full relative
// accuracy near their respective zeros.
double phi_of_k(const ModulusFocusing& m);

// 1 - phi(k), computed directly (no cancellation as k -> 1/sqrt2).
double one_minus_phi(const ModulusFocusing& m);

// Inverse of phi on (0, 1).
ModulusFocusing phi_inverse(double t);

// Modulus with 1 - phi(k) = one_minus_t. Callers that know 1-t to full
// relative accuracy (it is tiny for near-resonant states) must use this
// form; phi_inverse(1 - one_minus_t) would round the information away.
ModulusFocusing phi_inverse_from_one_minus(double one_minus_t);

// G = S o phi^{-1}: strictly decreasing from (0, 1) onto (0, inf).
double G_of_t(double t);

// G evaluated from 1-t. Callers that know 1-t to full relative accuracy
// (it is tiny for near-resonant states) must use this form.
double G_from_one_minus_t(double one_minus_t);

// Half-width gamma_{n,omega} of the plateau of the n-lobe cnoidal state at
// frequency omega < 0 on a ring of circumference L:
// gamma = (L/4n) * phi(k) with k = S^{-1}(L sqrt|omega| / n).
double gamma_shift(long long n, double omega, double L);

// Fundamental period of the periodic profile at frequency omega:
//   omega > 0 (dnoidal): T = 2 K(k) sqrt((2-k^2)/omega),   k in (0, 1)
//   omega < 0 (cnoidal): T = 4 K(k) sqrt((2k^2-1)/|omega|), k in (1/sqrt2, 1)
double period_T(double omega, double k);

// W(k) = sqrt(1-2k^2) K(k) on (0, 1/sqrt2): scaled quarter period of the
// zero-crossing cnoidal state at positive frequency. Strictly decreasing
// from pi/2 (k=0) to 0 (k=1/sqrt2).
double W_of_k(double k);

// Inverse of W on (0, pi/2).
double W_inverse(double t);

} // namespace dbridge::maps
