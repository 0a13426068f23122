#include "dbridge/elliptic.hpp"

#include <cmath>
#include <stdexcept>

#include "dbridge/numerics.hpp"

namespace dbridge::elliptic {

namespace {

double agm(double a, double b) {
    for (int i = 0; i < 60 && std::abs(a - b) > 2e-16 * a; ++i) {
        double an = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = an;
    }
    return 0.5 * (a + b);
}

} // namespace

double complete_K(double k) {
    if (!(k >= 0.0 && k < 1.0))
        throw std::domain_error("complete_K: modulus must lie in [0, 1)");
    double kp = std::sqrt((1.0 - k) * (1.0 + k));
    return M_PI / (2.0 * agm(1.0, kp));
}

double complete_K_from_kprime(double kprime) {
    if (!(kprime > 0.0 && kprime <= 1.0))
        throw std::domain_error("complete_K_from_kprime: k' must lie in (0, 1]");
    return M_PI / (2.0 * agm(1.0, kprime));
}

JacobiTriple jacobi_cn_sn_dn(double u, double k) {
    if (!(k >= 0.0 && k < 1.0))
        throw std::domain_error("jacobi_cn_sn_dn: modulus must lie in [0, 1)");
    if (!std::isfinite(u)) throw std::domain_error("jacobi_cn_sn_dn: argument not finite");

    // fold into [-2K, 2K]; the Landen phase recursion then never sees a
    // large argument, which would cost absolute precision in sin/cos
    double K = complete_K(k);
    double period = 4.0 * K;
    double uf = u - period * std::nearbyint(u / period);

    // descending Landen scales: a_{i+1} = (a_i+b_i)/2, c_{i+1} = (a_i-b_i)/2
    double a[64], c[64];
    double av = 1.0, bv = std::sqrt((1.0 - k) * (1.0 + k)), cv = k;
    int nlev = 0;
    a[0] = av;
    c[0] = cv;
    while (std::abs(cv) > 1e-15 * av && nlev < 62) {
        double an = 0.5 * (av + bv);
        cv = 0.5 * (av - bv);
        bv = std::sqrt(av * bv);
        av = an;
        ++nlev;
        a[nlev] = av;
        c[nlev] = cv;
    }
    double phi = std::ldexp(av * uf, nlev);
    for (int i = nlev; i >= 1; --i) {
        double s = c[i] / a[i] * std::sin(phi);
        s = std::min(1.0, std::max(-1.0, s));
        phi = 0.5 * (phi + std::asin(s));
    }
    double sn = std::sin(phi);
    double cn = std::cos(phi);
    double dn = std::sqrt(std::max(0.0, 1.0 - k * k * sn * sn));
    return {cn, sn, dn};
}

double arccn(double c, double k) {
    if (!(c >= 0.0 && c <= 1.0))
        throw std::domain_error("arccn: value must lie in [0, 1]");
    if (!(k >= 0.0 && k < 1.0))
        throw std::domain_error("arccn: modulus must lie in [0, 1)");
    if (c == 1.0) return 0.0;
    // t = 1 - s^2 removes the 1/sqrt(1-t) endpoint singularity:
    // integrand becomes 2 / sqrt((2 - s^2)(k'^2 + k^2 (1-s^2)^2))
    double kp2 = (1.0 - k) * (1.0 + k);
    double k2 = k * k;
    double smax = std::sqrt(1.0 - c);
    auto f = [&](double s) {
        double t = 1.0 - s * s;
        return 2.0 / std::sqrt((2.0 - s * s) * (kp2 + k2 * t * t));
    };
    return numerics::integrate(f, 0.0, smax, 1e-14).value;
}

ValueRange dnoidal_range(double omega, double k) {
    if (omega == 0.0) throw std::domain_error("dnoidal_range: omega must be nonzero");
    if (!(k >= 0.0 && k < 1.0))
        throw std::domain_error("dnoidal_range: modulus must lie in [0, 1)");
    double amp = std::sqrt(2.0 * std::abs(omega) / (2.0 - k * k));
    double kp = std::sqrt((1.0 - k) * (1.0 + k));
    return {amp * kp, amp};
}

} // namespace dbridge::elliptic
