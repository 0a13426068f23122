#pragma once

#include <optional>
#include <vector>

#include "dbridge/alpha.hpp"
#include "dbridge/spectral_maps.hpp"

namespace dbridge::spectrum {

// Double-bridge geometry: two bounded edges of lengths L1 <= L2 joining the
// same pair of vertices (total ring length L = L1 + L2), plus one half-line
// attached at each vertex. alpha = L1/L in (0, 1/2].
struct GraphGeometry {
    double L1;
    double L2;
    double L;

    static GraphGeometry from_alpha(const alpha::AlphaRatio& a, double L);
};

// P_plus: states even across both vertices (tails with equal sign);
// P_minus: states odd across the second vertex (tails with opposite sign).
enum class Family { Pplus, Pminus };

enum class BranchKind { Isolated, ContinuousBranch };

// One standing wave of the focusing cubic equation on the graph.
// The bounded-edge profile is A*cn(beta*(x + shift); k) traversed around
// the ring; shift is the cnoidal offset ("a" of the profile), equal to
// -s_n for isolated states and +/-gamma_{n,omega} along branch families.
// |shift| = gamma_{n,omega} in all cases.
struct StandingWave {
    Family family;
    long long n;              // lobe count on the ring
    double omega;             // frequency, < 0
    maps::ModulusFocusing k_n;  // elliptic modulus with both endpoints resolved
    double shift;
    BranchKind branch;
};

// Index n supporting a continuous branch family (omega ranges over an
// interval instead of being pinned); one marker per (family, n, sign).
struct BranchMarker {
    Family family;
    long long n;
    int sign;  // sign of the shift +/-gamma
};

// Frequency of the isolated P_plus state with n lobes:
//   omega_n^+ = -(n/L)^2 * G(xi_n)^2, defined iff alpha*n is not an
// integer and alpha*n + 1/2 is not an integer. nullopt otherwise.
std::optional<StandingWave> omega_plus(const GraphGeometry& g,
                                       const alpha::AlphaRatio& a, long long n);

// Frequency of the isolated P_minus state with n lobes:
//   omega_n^- = -(n/L)^2 * G(1 - xi_n)^2, same existence condition.
std::optional<StandingWave> omega_minus(const GraphGeometry& g,
                                        const alpha::AlphaRatio& a, long long n);

// All isolated states with n <= n_max plus the branch markers in the same
// range. For rational alpha = p/q the isolated states exist exactly at
// n not divisible by q0 (see reduce_half_integer); P_plus branches sit at
// multiples of q, P_minus branches at odd multiples of q/2 for even q.
// Irrational alpha has no degenerate indices and no branches.
struct Enumeration {
    std::vector<StandingWave> isolated;
    std::vector<BranchMarker> branches;
};
Enumeration enumerate_solutions(const GraphGeometry& g, const alpha::AlphaRatio& a,
                                long long n_max);

// Member of a continuous branch family at a chosen frequency omega < 0.
// n must be a branch index for this alpha (rational); the family follows
// from n (multiples of q are P_plus, odd multiples of q/2 are P_minus);
// sign picks the +gamma or -gamma representative.
StandingWave branch_solution(const GraphGeometry& g, const alpha::AlphaRatio& a,
                             long long n, double omega, int sign = +1);

// Eigenvalues of the linearized operator on the graph. Irrational alpha
// has none (empty list); rational alpha = p/q gives
//   lambda_n = (2 pi q0 n / L)^2, n = 1, 2, ...
// with eigenfunctions sin(2 pi q0 n x / L) on the ring, zero on the tails.
struct LinearEigenvalue {
    long long n;
    double lambda;
    long long q0;  // reduced half-integer denominator of alpha
};
std::vector<LinearEigenvalue> linear_eigenvalues(const GraphGeometry& g,
                                                 const alpha::AlphaRatio& a,
                                                 long long n_max);

// Local bifurcation check below the n-th linear eigenvalue: at
// omega_eps = lambda_n - eps (0 < eps < lambda_n) the zero-crossing
// cnoidal state has modulus k_eps = W^{-1}((pi/2) sqrt(omega_eps / lambda_n))
// and amplitude A_eps = sqrt(2 k_eps^2 omega_eps / (1 - 2 k_eps^2)); the
// leading-order predictions are A ~ sqrt(4 eps / 3) and
// k ~ sqrt(2 eps / (3 lambda_n)), approached as eps -> 0.
struct BifurcationCheck {
    double lambda_n;
    double omega_eps;
    double k_eps;
    double amplitude;
    double amplitude_predicted;
    double k_predicted;
};
BifurcationCheck bifurcation_check(const GraphGeometry& g, const alpha::AlphaRatio& a,
                                   long long n, double eps);

} // namespace dbridge::spectrum
