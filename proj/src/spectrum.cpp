#include "dbridge/spectrum.hpp"

#include <cmath>
#include <stdexcept>

#include "dbridge/spectral_maps.hpp"

namespace dbridge::spectrum {

namespace {

// 1 - xi_n = 2|xi_tilde|/n, from the double-double pair so nothing is lost
// when xi_tilde is tiny (near-resonant index).
double one_minus_xi(const alpha::DichotomySequences& d) {
    double hi = d.xi_tilde;
    double lo = d.xi_tilde_lo;
    if (hi < 0.0) {
        hi = -hi;
        lo = -lo;
    }
    double n = static_cast<double>(d.n);
    return 2.0 * hi / n + 2.0 * lo / n;
}

// The frequency of an isolated state solves sqrt|omega| = (n/L) G(t) with
// t = xi_n for P+ and t = 1 - xi_n for P-. Both are found through the
// complement 1 - t, which is the quantity known to full relative accuracy
// on the side where the frequency degenerates.
StandingWave isolated_wave(const GraphGeometry& g, const alpha::DichotomySequences& d,
                           Family fam) {
    double omt = fam == Family::Pplus ? one_minus_xi(d) : d.xi_n;
    if (!(omt > 0.0) || !(omt < 1.0))
        throw alpha::PrecisionExhausted(
            "isolated state at n=" + std::to_string(d.n) +
            ": distance to the degenerate index underflows double precision");
    maps::ModulusFocusing m = maps::phi_inverse_from_one_minus(omt);
    double root = maps::S_of_k(m) * static_cast<double>(d.n) / g.L;
    double half_spacing = 0.5 * g.L / static_cast<double>(d.n);
    double s = fam == Family::Pplus
                   ? half_spacing * d.r_n
                   : half_spacing * (std::fabs(d.r_n) - 0.5) * (d.r_n < 0.0 ? -1.0 : 1.0);
    StandingWave w;
    w.family = fam;
    w.n = d.n;
    w.omega = -root * root;
    w.k_n = m;
    w.shift = -s;
    w.branch = BranchKind::Isolated;
    return w;
}

} // namespace

GraphGeometry GraphGeometry::from_alpha(const alpha::AlphaRatio& a, double L) {
    if (!(L > 0.0) || !std::isfinite(L))
        throw std::domain_error("GraphGeometry: L must be positive and finite");
    double v = a.value();
    if (v > 0.5)
        throw std::domain_error(
            "GraphGeometry: edge ratio must lie in (0, 1/2] (shorter edge over total)");
    GraphGeometry g;
    g.L1 = v * L;
    g.L2 = (1.0 - v) * L;
    g.L = L;
    return g;
}

std::optional<StandingWave> omega_plus(const GraphGeometry& g,
                                       const alpha::AlphaRatio& a, long long n) {
    if (n < 1) throw std::domain_error("omega_plus: n must be >= 1");
    alpha::DichotomySequences d = a.dichotomy(n);
    if (d.n_alpha_integer || d.n_alpha_half_integer) return std::nullopt;
    return isolated_wave(g, d, Family::Pplus);
}

std::optional<StandingWave> omega_minus(const GraphGeometry& g,
                                        const alpha::AlphaRatio& a, long long n) {
    if (n < 1) throw std::domain_error("omega_minus: n must be >= 1");
    alpha::DichotomySequences d = a.dichotomy(n);
    if (d.n_alpha_integer || d.n_alpha_half_integer) return std::nullopt;
    return isolated_wave(g, d, Family::Pminus);
}

Enumeration enumerate_solutions(const GraphGeometry& g, const alpha::AlphaRatio& a,
                                long long n_max) {
    if (n_max < 1) throw std::domain_error("enumerate_solutions: n_max must be >= 1");
    Enumeration out;
    for (long long n = 1; n <= n_max; ++n) {
        alpha::DichotomySequences d = a.dichotomy(n);
        if (d.n_alpha_integer || d.n_alpha_half_integer) continue;
        out.isolated.push_back(isolated_wave(g, d, Family::Pplus));
        out.isolated.push_back(isolated_wave(g, d, Family::Pminus));
    }
    if (a.kind() == alpha::AlphaRatio::Kind::Rational) {
        long long q = a.q();
        for (long long n = q; n <= n_max; n += q) {
            out.branches.push_back({Family::Pplus, n, +1});
            out.branches.push_back({Family::Pplus, n, -1});
        }
        // odd multiples of q/2 carry the opposite-tail branches when q is even
        if (q % 2 == 0) {
            for (long long n = q / 2; n <= n_max; n += q) {
                out.branches.push_back({Family::Pminus, n, +1});
                out.branches.push_back({Family::Pminus, n, -1});
            }
        }
    }
    return out;
}

StandingWave branch_solution(const GraphGeometry& g, const alpha::AlphaRatio& a,
                             long long n, double omega, int sign) {
    if (n < 1) throw std::domain_error("branch_solution: n must be >= 1");
    if (!(omega < 0.0))
        throw std::domain_error("branch_solution: omega must be negative");
    if (sign != 1 && sign != -1)
        throw std::domain_error("branch_solution: sign must be +1 or -1");
    if (a.kind() != alpha::AlphaRatio::Kind::Rational)
        throw std::domain_error(
            "branch_solution: continuous branches exist only for rational ratios");
    long long q = a.q();
    Family fam;
    if (n % q == 0) {
        fam = Family::Pplus;
    } else if (q % 2 == 0 && n % (q / 2) == 0) {
        fam = Family::Pminus;
    } else {
        throw std::domain_error("branch_solution: n is not a branch index for this ratio");
    }
    maps::ModulusFocusing m =
        maps::S_inverse(g.L * std::sqrt(-omega) / static_cast<double>(n));
    double gamma = g.L / (4.0 * static_cast<double>(n)) * maps::phi_of_k(m);
    StandingWave w;
    w.family = fam;
    w.n = n;
    w.omega = omega;
    w.k_n = m;
    w.shift = sign > 0 ? gamma : -gamma;
    w.branch = BranchKind::ContinuousBranch;
    return w;
}

std::vector<LinearEigenvalue> linear_eigenvalues(const GraphGeometry& g,
                                                 const alpha::AlphaRatio& a,
                                                 long long n_max) {
    std::vector<LinearEigenvalue> out;
    if (a.kind() != alpha::AlphaRatio::Kind::Rational) return out;
    long long q0 = alpha::reduce_half_integer(a).second;
    for (long long n = 1; n <= n_max; ++n) {
        double base =
            2.0 * M_PI * static_cast<double>(q0) * static_cast<double>(n) / g.L;
        out.push_back({n, base * base, q0});
    }
    return out;
}

BifurcationCheck bifurcation_check(const GraphGeometry& g, const alpha::AlphaRatio& a,
                                   long long n, double eps) {
    if (n < 1) throw std::domain_error("bifurcation_check: n must be >= 1");
    if (a.kind() != alpha::AlphaRatio::Kind::Rational)
        throw std::domain_error(
            "bifurcation_check: linear eigenvalues exist only for rational ratios");
    long long q0 = alpha::reduce_half_integer(a).second;
    double base = 2.0 * M_PI * static_cast<double>(q0) * static_cast<double>(n) / g.L;
    double lambda = base * base;
    if (!(eps > 0.0 && eps < lambda))
        throw std::domain_error("bifurcation_check: need 0 < eps < lambda_n");
    double omega_eps = lambda - eps;
    double k = maps::W_inverse(0.5 * M_PI * std::sqrt(omega_eps / lambda));
    double one_minus_2k2 = (1.0 - M_SQRT2 * k) * (1.0 + M_SQRT2 * k);
    BifurcationCheck b;
    b.lambda_n = lambda;
    b.omega_eps = omega_eps;
    b.k_eps = k;
    b.amplitude = std::sqrt(2.0 * k * k * omega_eps / one_minus_2k2);
    b.amplitude_predicted = std::sqrt(4.0 * eps / 3.0);
    b.k_predicted = std::sqrt(2.0 * eps / (3.0 * lambda));
    return b;
}

} // namespace dbridge::spectrum
