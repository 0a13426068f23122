#pragma once

namespace dbridge::elliptic {

// Complete elliptic integral of the first kind, K(k), modulus convention
// K(k) = int_0^{pi/2} dtheta / sqrt(1 - k^2 sin^2 theta), computed by the
// arithmetic-geometric mean. Requires 0 <= k < 1.
double complete_K(double k);

// K expressed through the complementary modulus k' = sqrt(1-k^2).
// This is the form to use when k is so close to 1 that it cannot be
// represented in double precision (K ~ log(4/k') there).
double complete_K_from_kprime(double kprime);

struct JacobiTriple {
    double cn;
    double sn;
    double dn;
};

// Jacobi elliptic functions cn, sn, dn of argument u and modulus k in [0, 1),
// by descending Landen transformation of the amplitude. The argument is first
// folded into one period; dn is recovered from the identity
// dn^2 = 1 - k^2 sn^2, which it satisfies exactly by construction.
JacobiTriple jacobi_cn_sn_dn(double u, double k);

// Inverse of cn on the first quarter period:
// arccn(c; k) = int_c^1 dt / sqrt((1-t^2)(k'^2 + k^2 t^2)),  c in [0, 1].
// The integrable endpoint singularity at t=1 is removed by the substitution
// t = 1 - s^2 before adaptive quadrature.
double arccn(double c, double k);

struct ValueRange {
    double lo;
    double hi;
};

// Range of the dnoidal profile sqrt(2|omega|/(2-k^2)) * dn(. ; k) used by
// positive-frequency states: [sqrt(1-k^2), 1] scaled by the amplitude.
// Requires omega != 0 and k in [0, 1).
ValueRange dnoidal_range(double omega, double k);

} // namespace dbridge::elliptic
