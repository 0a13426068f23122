#include "dbridge/spectral_maps.hpp"

#include <cmath>
#include <stdexcept>

#include "dbridge/elliptic.hpp"
#include "dbridge/numerics.hpp"

namespace dbridge::maps {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kDeltaMax = 1.0 - kInvSqrt2;

// phi evaluation switches representation at k'^2 = 1/4 (k = sqrt3/2):
// below it 1-phi is the well-conditioned quantity, above it phi itself is.
constexpr double kKprime2Cut = 0.25;

double tail_integral(const ModulusFocusing& m) {
    // K - arccn-part: int_0^{psi*} dpsi / sqrt(k'^2 + k^2 sin^2 psi),
    // psi* = asin(sqrt(2k^2-1)/k); computed from delta so the upper limit
    // keeps full relative accuracy as k -> 1/sqrt2.
    double t2 = m.two_k2_minus_1();
    double arg = std::sqrt(t2) / m.k;
    double psi_star = std::asin(std::min(1.0, arg));
    double kp2 = m.kprime * m.kprime;
    double k2 = m.k * m.k;
    auto f = [&](double psi) {
        double s = std::sin(psi);
        return 1.0 / std::sqrt(kp2 + k2 * s * s);
    };
    return numerics::integrate(f, 0.0, psi_star, 1e-14).value;
}

double head_integral(const ModulusFocusing& m) {
    // arccn(sqrt(2k^2-1)/k; k) = int_0^{theta*} dtheta / sqrt(1 - k^2 sin^2 theta)
    // with theta* = asin(k'/k); the well-conditioned form when k' is small.
    double theta_star = std::asin(std::min(1.0, m.kprime / m.k));
    double k2 = m.k * m.k;
    auto f = [&](double theta) {
        double s = std::sin(theta);
        return 1.0 / std::sqrt(1.0 - k2 * s * s);
    };
    return numerics::integrate(f, 0.0, theta_star, 1e-14).value;
}

// 1 - phi as a function of delta, full relative accuracy for small delta.
double one_minus_phi_from_delta(double delta) {
    ModulusFocusing m = ModulusFocusing::from_delta(delta);
    return tail_integral(m) / m.K();
}

} // namespace

ModulusFocusing ModulusFocusing::from_k(double k) {
    if (!(k > kInvSqrt2 && k < 1.0))
        throw std::domain_error("ModulusFocusing: k must lie in (1/sqrt2, 1)");
    ModulusFocusing m;
    m.k = k;
    m.kprime = std::sqrt((1.0 - k) * (1.0 + k));
    m.delta = k - kInvSqrt2;
    return m;
}

ModulusFocusing ModulusFocusing::from_kprime(double kprime) {
    if (!(kprime > 0.0 && kprime < kInvSqrt2))
        throw std::domain_error("ModulusFocusing: k' must lie in (0, 1/sqrt2)");
    ModulusFocusing m;
    m.kprime = kprime;
    double kp2 = kprime * kprime;
    m.k = std::sqrt(1.0 - kp2);
    // (k - 1/sqrt2)(k + 1/sqrt2) = 1/2 - k'^2: no cancellation when k' is
    // small, and k + 1/sqrt2 is always ~sqrt2
    m.delta = (0.5 - kp2) / (m.k + kInvSqrt2);
    return m;
}

ModulusFocusing ModulusFocusing::from_delta(double delta) {
    if (!(delta > 0.0 && delta < kDeltaMax))
        throw std::domain_error("ModulusFocusing: delta must lie in (0, 1 - 1/sqrt2)");
    ModulusFocusing m;
    m.delta = delta;
    m.k = kInvSqrt2 + delta;
    double kp2 = 0.5 - delta * (2.0 * kInvSqrt2 + delta);
    m.kprime = std::sqrt(std::max(0.0, kp2));
    return m;
}

double ModulusFocusing::two_k2_minus_1() const {
    if (delta < 0.2) return 2.0 * delta * (M_SQRT2 + delta);
    return 1.0 - 2.0 * kprime * kprime;
}

double ModulusFocusing::K() const { return elliptic::complete_K_from_kprime(kprime); }

double S_of_k(const ModulusFocusing& m) {
    return 4.0 * std::sqrt(m.two_k2_minus_1()) * m.K();
}

ModulusFocusing S_inverse(double s) {
    if (!(s > 0.0)) throw std::domain_error("S_inverse: argument must be positive");
    if (s > 2500.0)
        throw std::domain_error(
            "S_inverse: argument too large, complementary modulus underflows");
    // S at delta = 0.15 (k ~ 0.857) splits the two well-conditioned regimes
    const double s_cut = S_of_k(ModulusFocusing::from_delta(0.15));
    if (s <= s_cut) {
        auto f = [&](double x) {
            return S_of_k(ModulusFocusing::from_delta(std::exp(x)));
        };
        double x = numerics::invert_monotone(f, std::log(1e-300), std::log(0.15), s,
                                             3e-16);
        return ModulusFocusing::from_delta(std::exp(x));
    }
    auto f = [&](double y) {
        return S_of_k(ModulusFocusing::from_kprime(std::exp(y)));
    };
    double y = numerics::invert_monotone(f, std::log(1e-280), std::log(0.52), s,
                                         3e-16);
    return ModulusFocusing::from_kprime(std::exp(y));
}

double phi_of_k(const ModulusFocusing& m) {
    if (m.kprime * m.kprime < kKprime2Cut) return head_integral(m) / m.K();
    return 1.0 - tail_integral(m) / m.K();
}

double one_minus_phi(const ModulusFocusing& m) {
    if (m.kprime * m.kprime < kKprime2Cut) return 1.0 - head_integral(m) / m.K();
    return tail_integral(m) / m.K();
}

ModulusFocusing phi_inverse(double t) {
    if (!(t > 0.0 && t < 1.0))
        throw std::domain_error("phi_inverse: value must lie in (0, 1)");
    if (t >= 0.5) return phi_inverse_from_one_minus(1.0 - t); // exact subtraction
    auto f = [&](double y) {
        return phi_of_k(ModulusFocusing::from_kprime(std::exp(y)));
    };
    double y = numerics::invert_monotone(f, std::log(1e-272), std::log(0.69), t, 3e-16);
    return ModulusFocusing::from_kprime(std::exp(y));
}

ModulusFocusing phi_inverse_from_one_minus(double omt) {
    if (!(omt > 0.0 && omt < 1.0))
        throw std::domain_error("phi_inverse: value must lie in (0, 1)");
    if (omt >= 0.5) {
        // solve in log k' down at the k -> 1 end
        auto f = [&](double y) {
            ModulusFocusing m = ModulusFocusing::from_kprime(std::exp(y));
            return phi_of_k(m);
        };
        double y = numerics::invert_monotone(f, std::log(1e-272), std::log(0.69),
                                             1.0 - omt, 3e-16);
        return ModulusFocusing::from_kprime(std::exp(y));
    }
    auto f = [&](double x) { return one_minus_phi_from_delta(std::exp(x)); };
    double x = numerics::invert_monotone(f, std::log(1e-300), std::log(0.12),
                                         omt, 3e-16);
    return ModulusFocusing::from_delta(std::exp(x));
}

double G_of_t(double t) {
    return S_of_k(phi_inverse(t));
}

double G_from_one_minus_t(double one_minus_t) {
    return S_of_k(phi_inverse_from_one_minus(one_minus_t));
}

double gamma_shift(long long n, double omega, double L) {
    if (n < 1) throw std::domain_error("gamma_shift: n must be >= 1");
    if (!(omega < 0.0)) throw std::domain_error("gamma_shift: omega must be negative");
    if (!(L > 0.0)) throw std::domain_error("gamma_shift: L must be positive");
    ModulusFocusing m = S_inverse(L * std::sqrt(-omega) / static_cast<double>(n));
    return L / (4.0 * static_cast<double>(n)) * phi_of_k(m);
}

double period_T(double omega, double k) {
    if (omega > 0.0) {
        if (!(k >= 0.0 && k < 1.0))
            throw std::domain_error("period_T: modulus must lie in [0, 1) for omega > 0");
        return 2.0 * elliptic::complete_K(k) * std::sqrt((2.0 - k * k) / omega);
    }
    if (omega < 0.0) {
        ModulusFocusing m = ModulusFocusing::from_k(k); // validates k range
        return S_of_k(m) / std::sqrt(-omega);
    }
    throw std::domain_error("period_T: omega must be nonzero");
}

double W_of_k(double k) {
    if (!(k >= 0.0 && k < kInvSqrt2 * (1.0 + 1e-15)))
        throw std::domain_error("W_of_k: modulus must lie in [0, 1/sqrt2)");
    double one_minus_2k2 = (1.0 - M_SQRT2 * k) * (1.0 + M_SQRT2 * k);
    return std::sqrt(std::max(0.0, one_minus_2k2)) * elliptic::complete_K(k);
}

double W_inverse(double t) {
    if (!(t > 0.0 && t < M_PI / 2.0))
        throw std::domain_error("W_inverse: value must lie in (0, pi/2)");
    return numerics::invert_monotone([](double k) { return W_of_k(k); }, 0.0,
                                     kInvSqrt2, t, 3e-16);
}

} // namespace dbridge::maps
