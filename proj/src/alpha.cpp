#include "dbridge/alpha.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cassert>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>
#include <numeric>
#include <sstream>

#include "alpha_internal.hpp"

namespace dbridge::alpha {

namespace {

mpz_class mpz_of(long long v) {
    return mpz_class(static_cast<long>(v));
}

// x = num * 2^(-e) exactly, e >= 0, trailing zero bits stripped.
void split_dyadic(double x, mpz_class& num, long long& e) {
    int ex = 0;
    const double f = std::frexp(x, &ex);
    auto sm = static_cast<long long>(std::ldexp(f, 53));  // |f| in [1/2,1): exact
    long long se = 53 - ex;
    while (sm != 0 && (sm & 1) == 0 && se > 0) {
        sm >>= 1;
        --se;
    }
    if (se < 0) {
        num = mpz_of(sm) << static_cast<unsigned long>(-se);
        e = 0;
    } else {
        num = mpz_of(sm);
        e = se;
    }
}

// Sign of A + B*sqrt(m) for m >= 2 not a perfect square (the value is
// irrational, hence nonzero, whenever B != 0).
int sign_lin(const mpz_class& A, const mpz_class& B, const mpz_class& m) {
    const int sb = sgn(B);
    if (sb == 0) return sgn(A);
    if (sb > 0) {
        if (sgn(A) >= 0) return 1;
        mpz_class l = B * B * m, r = A * A;
        return cmp(l, r) > 0 ? 1 : -1;
    }
    if (sgn(A) <= 0) return -1;
    mpz_class l = A * A, r = B * B * m;
    return cmp(l, r) > 0 ? 1 : -1;
}

// |A + B*sqrt(m)| < C with C > 0.
bool abs_lin_less(const mpz_class& A, const mpz_class& B, const mpz_class& m,
                  const mpz_class& C) {
    return sign_lin(A - C, B, m) < 0 && sign_lin(A + C, B, m) > 0;
}

mpz_class pow10_z(long long k) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), 10, static_cast<unsigned long>(k));
    return r;
}

long long parse_ll(const std::string& s) {
    long long v = 0;
    const char* b = s.data();
    const char* e = s.data() + s.size();
    auto res = std::from_chars(b, e, v);
    if (res.ec != std::errc{} || res.ptr != e)
        throw std::domain_error("not an integer: '" + s + "'");
    return v;
}

} // namespace

int Precision::effective_bits() const {
    int b = bits;
    if (b <= 0) {
        const long long nm = std::max<long long>(2, n_max);
        int lg = 0;
        while ((1LL << lg) < nm && lg < 62) ++lg;
        b = std::max(128, 2 * lg + 80);
    }
    if (high_digits) b += 64;
    return b;
}

// ---------------------------------------------------------------------------
// Shared state

struct AlphaRatio::Impl {
    Kind kind = Kind::Rational;

    // Rational p/q, lowest terms
    long long rp = 0, rq = 1;

    // Quadratic (a + b*sqrt(m))/c, c > 0
    long long qa = 0, qb = 0, qc = 1, qm = 0;

    // Constructed: ctotal materialized bits; the exact value times 2^ctotal
    // lies in [cprefix, cprefix + 1).
    mpz_class cprefix;
    long long ctotal = 0;
    std::vector<long long> cpos;
    double cell = 0.0;
    int cdepth = 0;

    // Prepared integer tables: n*alpha*D in [step*n, step*n + spanc*n].
    mutable std::mutex mu;
    mutable bool prepared = false;
    mutable int ebits = 0;
    mutable long long qQ = 0;  // quadratic scale exponent
    mutable mpz_class R;       // floor(2^qQ * sqrt(m))
    mutable mpz_class D, step, spanc;

    void prepare_locked(int bits) const {
        if (prepared && bits == ebits) return;
        switch (kind) {
        case Kind::Rational:
            D = mpz_of(rq);
            step = mpz_of(rp);
            spanc = 0;
            break;
        case Kind::Quadratic: {
            qQ = bits;
            mpz_class scaled = mpz_of(qm) << static_cast<unsigned long>(2 * qQ);
            R = sqrt(scaled);  // floor
            D = mpz_of(qc) << static_cast<unsigned long>(qQ);
            if (qb > 0)
                step = (mpz_of(qa) << static_cast<unsigned long>(qQ)) + mpz_of(qb) * R;
            else
                step = (mpz_of(qa) << static_cast<unsigned long>(qQ)) + mpz_of(qb) * (R + 1);
            spanc = mpz_of(qb > 0 ? qb : -qb);
            break;
        }
        case Kind::Constructed: {
            const long long qc_bits = std::min<long long>(ctotal, bits + 64);
            D = mpz_class(1) << static_cast<unsigned long>(qc_bits);
            step = cprefix >> static_cast<unsigned long>(ctotal - qc_bits);
            spanc = 2;  // truncated low bits plus the unmaterialized tail
            break;
        }
        }
        ebits = bits;
        prepared = true;
    }
};

// Internal bridge: hands the shared state to the kernel and wraps freshly
// built state into the public value type.
struct ConstructionAccess {
    static const AlphaRatio::Impl* impl(const AlphaRatio& a) { return a.impl_.get(); }
    static AlphaRatio make_constructed(mpz_class prefix, long long total,
                                       std::vector<long long> pos, double ell, int depth) {
        auto im = std::make_shared<AlphaRatio::Impl>();
        im->kind = AlphaRatio::Kind::Constructed;
        im->cprefix = std::move(prefix);
        im->ctotal = total;
        im->cpos = std::move(pos);
        im->cell = ell;
        im->cdepth = depth;
        return AlphaRatio(std::move(im));
    }
};

// ---------------------------------------------------------------------------
// AlphaRatio

AlphaRatio::AlphaRatio(std::shared_ptr<Impl> impl) : impl_(std::move(impl)) {}

AlphaRatio AlphaRatio::rational(long long p, long long q) {
    if (q == 0) throw std::domain_error("alpha: zero denominator");
    if (p <= 0 || q <= 0) throw std::domain_error("alpha must be positive");
    const long long g = std::gcd(p, q);
    p /= g;
    q /= g;
    if (p >= q) throw std::domain_error("alpha must lie in (0, 1)");
    auto im = std::make_shared<Impl>();
    im->kind = Kind::Rational;
    im->rp = p;
    im->rq = q;
    return AlphaRatio(std::move(im));
}

AlphaRatio AlphaRatio::quadratic(long long a, long long b, long long c, long long m) {
    if (c == 0) throw std::domain_error("alpha: zero denominator");
    if (c < 0) {
        a = -a;
        b = -b;
        c = -c;
    }
    if (b == 0) throw std::domain_error("quadratic alpha needs b != 0 (use p/q instead)");
    if (m < 2) throw std::domain_error("quadratic alpha needs m >= 2");
    mpz_class mz = mpz_of(m);
    if (mpz_perfect_square_p(mz.get_mpz_t()))
        throw std::domain_error("quadratic alpha needs m not a perfect square");
    mpz_class A = mpz_of(a), B = mpz_of(b), C = mpz_of(c);
    if (sign_lin(A, B, mz) <= 0) throw std::domain_error("alpha must be positive");
    if (sign_lin(A - C, B, mz) >= 0) throw std::domain_error("alpha must lie in (0, 1)");
    auto im = std::make_shared<Impl>();
    im->kind = Kind::Quadratic;
    im->qa = a;
    im->qb = b;
    im->qc = c;
    im->qm = m;
    return AlphaRatio(std::move(im));
}

AlphaRatio::Kind AlphaRatio::kind() const { return impl_->kind; }

double AlphaRatio::value() const {
    switch (impl_->kind) {
    case Kind::Rational:
        return static_cast<double>(impl_->rp) / static_cast<double>(impl_->rq);
    case Kind::Quadratic:
        return (impl_->qa + impl_->qb * std::sqrt(static_cast<double>(impl_->qm))) /
               static_cast<double>(impl_->qc);
    case Kind::Constructed: {
        long exp2 = 0;
        const double d = mpz_get_d_2exp(&exp2, impl_->cprefix.get_mpz_t());
        return std::ldexp(d, static_cast<int>(exp2 - impl_->ctotal));
    }
    }
    return 0.0;
}

std::string AlphaRatio::describe() const {
    char buf[128];
    switch (impl_->kind) {
    case Kind::Rational:
        std::snprintf(buf, sizeof buf, "%lld/%lld", impl_->rp, impl_->rq);
        break;
    case Kind::Quadratic:
        std::snprintf(buf, sizeof buf, "(%lld %c %lld*sqrt(%lld))/%lld", impl_->qa,
                      impl_->qb < 0 ? '-' : '+', impl_->qb < 0 ? -impl_->qb : impl_->qb,
                      impl_->qm, impl_->qc);
        break;
    case Kind::Constructed:
        std::snprintf(buf, sizeof buf, "constructed(ell=%.17g, depth=%d)", impl_->cell,
                      impl_->cdepth);
        break;
    }
    return buf;
}

long long AlphaRatio::p() const {
    if (impl_->kind != Kind::Rational) throw std::logic_error("p(): alpha is not rational");
    return impl_->rp;
}

long long AlphaRatio::q() const {
    if (impl_->kind != Kind::Rational) throw std::logic_error("q(): alpha is not rational");
    return impl_->rq;
}

void AlphaRatio::prepare(const Precision& prec) const {
    std::lock_guard<std::mutex> lk(impl_->mu);
    impl_->prepare_locked(prec.effective_bits());
}

DichotomySequences AlphaRatio::dichotomy(long long n) const {
    if (n < 1) throw std::domain_error("dichotomy: n must be >= 1");
    detail::FracKernel k(*this, n);
    return k.record();
}

AlphaRatio::FracPart AlphaRatio::frac_part(long long n) const {
    if (n < 1) throw std::domain_error("frac_part: n must be >= 1");
    detail::FracKernel k(*this, n);
    mpq_class mid;
    double rad = 0.0;
    k.exact_interval(mid, rad);
    mpq_class f = mpq_class(1, 2) + mid / mpq_class(mpz_of(n));
    FracPart out;
    out.value = f.get_d();
    out.error_radius = rad / static_cast<double>(n) + std::fabs(out.value) * 2.3e-16 + 1e-300;
    if (!(out.error_radius < 1e-10))
        throw PrecisionExhausted("frac_part: certified radius exceeds 1e-10; raise Precision.bits");
    return out;
}

std::string AlphaRatio::xi_tilde_decimal(long long n, int digits) const {
    if (n < 1) throw std::domain_error("xi_tilde_decimal: n must be >= 1");
    if (digits < 1 || digits > 50) throw std::domain_error("digits must lie in [1, 50]");
    detail::FracKernel k(*this, n);
    mpq_class mid;
    double rad = 0.0;
    k.exact_interval(mid, rad);

    const int sign = sgn(mid);
    if (sign == 0) return "0";
    mpq_class a = abs(mid);

    // decimal exponent: 10^e10 <= a < 10^(e10+1)
    const double ad = a.get_d();
    long long e10;
    if (ad > 0 && std::isfinite(ad))
        e10 = static_cast<long long>(std::floor(std::log10(ad)));
    else
        e10 = static_cast<long long>(
            std::floor((static_cast<double>(mpz_sizeinbase(a.get_num().get_mpz_t(), 2)) -
                        static_cast<double>(mpz_sizeinbase(a.get_den().get_mpz_t(), 2))) *
                       0.30103));
    auto at_least = [&a](long long k10) {  // a >= 10^k10
        if (k10 >= 0) return cmp(a.get_num(), a.get_den() * pow10_z(k10)) >= 0;
        return cmp(a.get_num() * pow10_z(-k10), a.get_den()) >= 0;
    };
    while (!at_least(e10)) --e10;
    while (at_least(e10 + 1)) ++e10;

    // the certified interval must pin all requested digits
    if (rad != 0.0 && !(rad < 0.3 * std::pow(10.0, static_cast<double>(e10 + 1 - digits))))
        throw PrecisionExhausted(
            "xi_tilde_decimal: radius too large for the requested digits; raise Precision.bits");

    // round half away from zero at `digits` significant digits
    const long long sh = e10 + 1 - digits;
    mpz_class N = a.get_num(), Dn = a.get_den();
    if (sh <= 0)
        N *= pow10_z(-sh);
    else
        Dn *= pow10_z(sh);
    mpz_class r = (2 * N + Dn) / (2 * Dn);
    if (r == pow10_z(digits)) {
        r = pow10_z(digits - 1);
        ++e10;
    }
    std::string ds = r.get_str();

    std::string mant;
    if (e10 >= digits - 1) {
        mant = ds + std::string(static_cast<size_t>(e10 - digits + 1), '0');
    } else if (e10 >= 0) {
        mant = ds.substr(0, static_cast<size_t>(e10 + 1)) + "." +
               ds.substr(static_cast<size_t>(e10 + 1));
    } else if (e10 >= -6) {
        mant = "0." + std::string(static_cast<size_t>(-e10 - 1), '0') + ds;
    } else {
        mant = ds.substr(0, 1);
        if (ds.size() > 1) mant += "." + ds.substr(1);
        mant += "e" + std::to_string(e10);
    }
    return sign < 0 ? "-" + mant : mant;
}

// ---------------------------------------------------------------------------
// FracKernel

namespace detail {

FracKernel::FracKernel(const AlphaRatio& a, long long n_start, double beta)
    : alpha_(a), n_(n_start), has_beta_(beta != 0.0) {
    if (n_start < 1) throw std::domain_error("FracKernel: n_start must be >= 1");
    const auto* im = ConstructionAccess::impl(alpha_);
    {
        std::lock_guard<std::mutex> lk(im->mu);
        if (!im->prepared) im->prepare_locked(Precision{}.effective_bits());
        D_ = im->D;
        step_ = im->step;
        spanc_ = im->spanc;
    }
    offset_ = 0;
    if (has_beta_) {
        if (!std::isfinite(beta)) throw std::domain_error("beta must be finite");
        mpz_class bn;
        long long be = 0;
        split_dyadic(beta, bn, be);
        mpz_class dold = D_;
        D_ <<= static_cast<unsigned long>(be);
        step_ <<= static_cast<unsigned long>(be);
        spanc_ <<= static_cast<unsigned long>(be);
        offset_ = bn * dold;
    }
    Dd_ = mpz_get_d(D_.get_mpz_t());
    spancd_ = mpz_get_d(spanc_.get_mpz_t());
    An_ = step_ * mpz_of(n_) - offset_;
    refresh();
}

void FracKernel::advance() {
    An_ += step_;
    ++n_;
    refresh();
}

void FracKernel::refresh() {
    mpz_mul_si(span_.get_mpz_t(), spanc_.get_mpz_t(), static_cast<long>(n_));
    mpz_fdiv_qr(F_.get_mpz_t(), U_.get_mpz_t(), An_.get_mpz_t(), D_.get_mpz_t());
    mpz_add(t1_.get_mpz_t(), U_.get_mpz_t(), span_.get_mpz_t());
    wrap_ = mpz_cmp(t1_.get_mpz_t(), D_.get_mpz_t()) >= 0;
    // Y = 2U + span - D: xi_tilde*2D lies in n*Y -/+ n*span
    mpz_mul_2exp(Y_.get_mpz_t(), U_.get_mpz_t(), 1);
    mpz_add(Y_.get_mpz_t(), Y_.get_mpz_t(), span_.get_mpz_t());
    mpz_sub(Y_.get_mpz_t(), Y_.get_mpz_t(), D_.get_mpz_t());
    if (!has_beta_) {
        const double nd = static_cast<double>(n_);
        const double half_inv = 0.5 / Dd_;
        xi_mid_ = nd * mpz_get_d(Y_.get_mpz_t()) * half_inv;
        const double hw = nd * nd * spancd_ * half_inv;
        xi_rad_ = hw * 1.0000001 + std::fabs(xi_mid_) * 1e-15 + 1e-290;
    } else {
        xi_mid_ = 0.0;
        xi_rad_ = 0.0;
    }
}

mpz_class FracKernel::quad_exact_floor() const {
    const auto* im = ConstructionAccess::impl(alpha_);
    mpz_class nz = mpz_of(n_);
    mpz_class nb = mpz_of(im->qb) * nz;
    mpz_class s = sqrt(mpz_class(nb * nb * mpz_of(im->qm)));
    // n*b*sqrt(m) lies strictly between s and s+1 (irrational), so the
    // floor of (n*a + n*b*sqrt(m))/c is exact in both branches.
    mpz_class V = im->qb > 0 ? mpz_class(mpz_of(im->qa) * nz + s)
                             : mpz_class(mpz_of(im->qa) * nz - s - 1);
    mpz_class cz = mpz_of(im->qc), qout, rem;
    mpz_fdiv_qr(qout.get_mpz_t(), rem.get_mpz_t(), V.get_mpz_t(), cz.get_mpz_t());
    return qout;
}

void FracKernel::quad_linear_parts(mpz_class& A, mpz_class& B) const {
    const auto* im = ConstructionAccess::impl(alpha_);
    mpz_class Fl = quad_exact_floor();
    mpz_class nz = mpz_of(n_);
    A = nz * (2 * nz * mpz_of(im->qa) - mpz_of(im->qc) * (2 * Fl + 1));
    B = 2 * nz * nz * mpz_of(im->qb);
}

namespace {

// Scaled exact interval for constructed ratios from the full materialized
// prefix: xi_tilde * 2^(ctotal+1) lies in [lo, lo + 2n].
void constructed_scaled_interval(const mpz_class& prefix, long long ctotal, long long n,
                                 mpz_class& lo, mpz_class& hi) {
    mpz_class t = mpz_of(n) * prefix;
    mpz_class up;
    mpz_tdiv_r_2exp(up.get_mpz_t(), t.get_mpz_t(), static_cast<mp_bitcnt_t>(ctotal));
    lo = mpz_of(n) * (2 * up - (mpz_class(1) << static_cast<unsigned long>(ctotal)));
    hi = lo + 2 * mpz_of(n);
}

} // namespace

void FracKernel::exact_interval(mpq_class& mid, double& rad) const {
    if (has_beta_) throw std::logic_error("exact_interval needs beta == 0");
    const auto* im = ConstructionAccess::impl(alpha_);
    mpz_class nz = mpz_of(n_);
    if (!wrap_) {
        mpq_class v(Y_ * nz, 2 * D_);
        v.canonicalize();
        mid = v;
        if (sgn(spanc_) == 0) {
            rad = 0.0;
        } else {
            mpq_class h(spanc_ * nz * nz, 2 * D_);
            h.canonicalize();
            rad = h.get_d() * 1.0000001 + 1e-300;
        }
        return;
    }
    if (im->kind == AlphaRatio::Kind::Quadratic) {
        // rebuild around the true floor at a fixed local scale
        const unsigned long Qw = 160;
        mpz_class Rw = sqrt(mpz_class(mpz_of(im->qm) << (2 * Qw)));
        mpz_class A, B;
        quad_linear_parts(A, B);
        mpz_class num = 2 * (A << Qw) + B * (2 * Rw + 1);
        mpz_class den = mpz_of(im->qc) * 4;
        den <<= Qw;
        mpq_class v(num, den);
        v.canonicalize();
        mid = v;
        mpq_class h(abs(B), den);
        h.canonicalize();
        rad = h.get_d() * 1.0000001 + 1e-300;
        return;
    }
    throw PrecisionExhausted(
        "fractional part straddles an integer at the materialized precision");
}

int FracKernel::exact_xi_sign() const {
    const auto* im = ConstructionAccess::impl(alpha_);
    switch (im->kind) {
    case AlphaRatio::Kind::Rational:
        return sgn(mpz_class(2 * U_ - D_));
    case AlphaRatio::Kind::Quadratic: {
        mpz_class A, B;
        quad_linear_parts(A, B);
        return sign_lin(A, B, mpz_of(im->qm));
    }
    case AlphaRatio::Kind::Constructed: {
        mpz_class lo, hi;
        constructed_scaled_interval(im->cprefix, im->ctotal, n_, lo, hi);
        if (sgn(lo) > 0) return 1;
        if (sgn(hi) < 0) return -1;
        throw PrecisionExhausted(
            "constructed ratio: xi_tilde sign undecidable at materialized precision");
    }
    }
    return 0;
}

bool FracKernel::xi_abs_less(double threshold) const {
    if (has_beta_) throw std::logic_error("xi_abs_less needs beta == 0");
    if (!(threshold > 0)) return false;
    if (wrap_) return exact_xi_abs_less(threshold);
    const double a = std::fabs(xi_mid_);
    const double pad = threshold * 1e-14 + 1e-290;
    if (a + xi_rad_ < threshold - pad) return true;
    if (a - xi_rad_ > threshold + pad) return false;
    return exact_xi_abs_less(threshold);
}

bool FracKernel::exact_xi_abs_less(double threshold) const {
    const auto* im = ConstructionAccess::impl(alpha_);
    mpz_class tm;
    long long te = 0;
    split_dyadic(threshold, tm, te);
    if (sgn(tm) <= 0) return false;
    switch (im->kind) {
    case AlphaRatio::Kind::Rational: {
        // |xi_tilde| * 2q = |n(2U - q)| exactly
        mpz_class lhs = abs(mpz_class(mpz_of(n_) * (2 * U_ - D_)));
        lhs <<= static_cast<unsigned long>(te);
        return cmp(lhs, 2 * tm * D_) < 0;
    }
    case AlphaRatio::Kind::Quadratic: {
        mpz_class A, B;
        quad_linear_parts(A, B);
        mpz_class A2 = A << static_cast<unsigned long>(te);
        mpz_class B2 = B << static_cast<unsigned long>(te);
        mpz_class C = 2 * tm * mpz_of(im->qc);
        return abs_lin_less(A2, B2, mpz_of(im->qm), C);
    }
    case AlphaRatio::Kind::Constructed: {
        mpz_class lo, hi;
        constructed_scaled_interval(im->cprefix, im->ctotal, n_, lo, hi);
        lo <<= static_cast<unsigned long>(te);
        hi <<= static_cast<unsigned long>(te);
        mpz_class rhs = tm << static_cast<unsigned long>(im->ctotal + 1);
        mpz_class alo = abs(lo), ahi = abs(hi);
        mpz_class maxabs = std::max(alo, ahi);
        mpz_class minabs = (sgn(lo) < 0 && sgn(hi) > 0) ? mpz_class(0) : std::min(alo, ahi);
        if (cmp(maxabs, rhs) < 0) return true;
        if (cmp(minabs, rhs) >= 0) return false;
        throw PrecisionExhausted(
            "constructed ratio: threshold undecidable at materialized precision");
    }
    }
    return false;
}

bool FracKernel::hurwitz_minus() const {
    if (has_beta_) throw std::logic_error("hurwitz_minus needs beta == 0");
    static constexpr double kTwoOverSqrt5 = 0.8944271909999158786;
    if (wrap_) return exact_hurwitz();
    const double a = std::fabs(xi_mid_);
    const double v = static_cast<double>(n_) - 2.0 * a;
    const double band = 2.0 * xi_rad_ + (std::fabs(v) + 1.0) * 1e-14;
    if (v + band < kTwoOverSqrt5) return true;
    if (v - band > kTwoOverSqrt5) return false;
    return exact_hurwitz();
}

bool FracKernel::exact_hurwitz() const {
    const auto* im = ConstructionAccess::impl(alpha_);
    switch (im->kind) {
    case AlphaRatio::Kind::Rational: {
        // n*xi_n*q = nq - |n(2U - q)| >= 0; test 5 V^2 < 4 q^2
        mpz_class V = mpz_of(n_) * D_ - abs(mpz_class(mpz_of(n_) * (2 * U_ - D_)));
        if (sgn(V) < 0) V = 0;
        return cmp(5 * V * V, 4 * D_ * D_) < 0;
    }
    case AlphaRatio::Kind::Quadratic: {
        mpz_class A, B, mz = mpz_of(im->qm);
        quad_linear_parts(A, B);
        int s = sign_lin(A, B, mz);
        if (s == 0) s = 1;
        // n*xi_n*2c = E + Fc*sqrt(m) >= 0
        mpz_class E = 2 * mpz_of(im->qc) * mpz_of(n_) - 2 * s * A;
        mpz_class Fc = -2 * s * B;
        // 5(E + Fc sqrt(m))^2 < 16 c^2
        mpz_class lin = 5 * (E * E + Fc * Fc * mz) - 16 * mpz_of(im->qc) * mpz_of(im->qc);
        return sign_lin(lin, 10 * E * Fc, mz) < 0;
    }
    case AlphaRatio::Kind::Constructed: {
        mpz_class lo, hi;
        constructed_scaled_interval(im->cprefix, im->ctotal, n_, lo, hi);
        mpz_class alo = abs(lo), ahi = abs(hi);
        mpz_class maxabs = std::max(alo, ahi);
        mpz_class minabs = (sgn(lo) < 0 && sgn(hi) > 0) ? mpz_class(0) : std::min(alo, ahi);
        mpz_class scale = mpz_of(n_) << static_cast<unsigned long>(im->ctotal + 1);
        mpz_class E1 = scale - 2 * maxabs;  // lower end of n*xi_n (scaled)
        mpz_class E2 = scale - 2 * minabs;
        if (sgn(E1) < 0) E1 = 0;
        if (sgn(E2) < 0) E2 = 0;
        mpz_class bound = mpz_class(1) << static_cast<unsigned long>(im->ctotal + 1);
        mpz_class rhs = 4 * bound * bound;
        const bool b1 = cmp(5 * E1 * E1, rhs) < 0;
        const bool b2 = cmp(5 * E2 * E2, rhs) < 0;
        if (b1 == b2) return b1;
        throw PrecisionExhausted(
            "constructed ratio: Hurwitz test undecidable at materialized precision");
    }
    }
    return false;
}

DichotomySequences FracKernel::record() const {
    if (has_beta_) throw std::logic_error("record needs beta == 0");
    const auto* im = ConstructionAccess::impl(alpha_);
    mpq_class mid;
    double rad = 0.0;
    exact_interval(mid, rad);

    DichotomySequences out;
    out.n = n_;
    const double hi = mid.get_d();
    mpq_class rem(mid - mpq_class(hi));
    const double lo = rem.get_d();
    out.xi_tilde = hi;
    out.xi_tilde_lo = lo;
    out.error_radius = rad + std::fabs(hi) * 3e-31 + 1e-300;
    if (!(out.error_radius < 1e-10))
        throw PrecisionExhausted("dichotomy: certified radius exceeds 1e-10; raise Precision.bits");

    int s;
    if (std::fabs(hi) > 4 * rad + 1e-250)
        s = sgn(mid);
    else
        s = exact_xi_sign();

    mpq_class nq(mpz_of(n_));
    mpq_class absmid = s >= 0 ? mid : mpq_class(-mid);
    mpq_class xin = 1 - 2 * absmid / nq;
    out.xi_n = std::clamp(xin.get_d(), 0.0, 1.0);
    mpq_class r = mid / nq + (s >= 0 ? mpq_class(-1, 2) : mpq_class(1, 2));
    out.r_n = r.get_d();
    if (im->kind == AlphaRatio::Kind::Rational) {
        out.n_alpha_integer = sgn(U_) == 0;
        out.n_alpha_half_integer = cmp(2 * U_, D_) == 0;
    }
    return out;
}

double FracKernel::dist_scaled_mid() const {
    // dist * 2D = min(2U + span, 2(D - U) - span); exact integer min, then
    // one rounding
    mpz_class lo_side = 2 * U_ + span_;
    mpz_class hi_side = 2 * (D_ - U_) - span_;
    const mpz_class& m = lo_side < hi_side ? lo_side : hi_side;
    double d = mpz_get_d(m.get_mpz_t());
    if (d < 0) d = 0;
    return static_cast<double>(n_) * (d / (2.0 * Dd_));
}

} // namespace detail

// ---------------------------------------------------------------------------
// Free operations

std::pair<long long, long long> reduce_half_integer(const AlphaRatio& alpha) {
    if (alpha.kind() != AlphaRatio::Kind::Rational)
        throw std::logic_error("reduce_half_integer needs a rational ratio");
    const long long p = alpha.p(), q = alpha.q();
    if (q % 2 == 1) return {2 * p, q};
    return {p, q / 2};
}

double estimate_approx_constant(const AlphaRatio& alpha, double beta, long long N) {
    if (N < 1) throw std::domain_error("estimate_approx_constant: N must be >= 1");
    if (!std::isfinite(beta)) throw std::domain_error("beta must be finite");
    detail::FracKernel k(alpha, 1, beta);
    double best = std::numeric_limits<double>::infinity();
    for (long long n = 1;;) {
        best = std::min(best, k.dist_scaled_mid());
        if (++n > N) break;
        k.advance();
    }
    return best;
}

ConstructionReport construct_alpha(double ell, int depth) {
    if (!std::isfinite(ell) || ell < 0)
        throw std::domain_error("construct_alpha: ell must be finite and >= 0");
    if (depth < 1 || depth > 64) throw std::domain_error("construct_alpha: depth must lie in [1, 64]");

    double ip = 0.0;
    const double fp = std::modf(ell, &ip);
    mpz_class I(ip);  // exact: ip is integral
    mpz_class ffrac;
    long long F = 0;
    split_dyadic(fp, ffrac, F);
    if (sgn(ffrac) == 0) F = 0;
    const long long B = sgn(I) > 0 ? static_cast<long long>(mpz_sizeinbase(I.get_mpz_t(), 2)) : 0;

    // stage positions: n_1 = B + 1, n_{j+1} = 3 n_j + F
    std::vector<long long> npos(static_cast<size_t>(depth) + 2, 0);
    npos[1] = B + 1;
    for (int j = 1; j <= depth; ++j) {
        if (npos[j] > (1LL << 29))
            throw PrecisionExhausted("construct_alpha: materialization would exceed the bit cap");
        npos[j + 1] = 3 * npos[j] + F;
    }
    const long long T = 2 * npos[depth + 1] + F;
    if (T > (1LL << 31))
        throw PrecisionExhausted("construct_alpha: materialization would exceed the bit cap");

    // assemble bits 1..T of the expansion; stage j writes its payload at
    // positions n_j+1 .. 2 n_j, then the F fraction bits, and the gap of
    // n_j zeros before stage j+1 is implicit in the next shift
    mpz_class P = 0;
    long long end = 0;
    for (int j = 1; j <= depth + 1; ++j) {
        const long long nj = npos[j];
        const long long gap = nj - end;
        assert(gap >= 0);
        mpz_class payload = (mpz_class(1) << static_cast<unsigned long>(nj - 1)) + I;
        P <<= static_cast<unsigned long>(gap + nj);
        P += payload;
        end = 2 * nj;
        if (F > 0) {
            P <<= static_cast<unsigned long>(F);
            P += ffrac;
            end += F;
        }
    }
    assert(end == T);

    // exact per-stage values: with T' = T - n_j, the shifted fractional
    // part satisfies frac(2^{n_j} alpha) * 2^{T'} in [low, low + 1), so
    // e_j = xi_tilde - ell lies in [E, E + 2^{n_j}) * 2^{-T'}
    mpz_class ellN = I * (mpz_class(1) << static_cast<unsigned long>(F)) + ffrac;
    ConstructionReport rep{AlphaRatio::rational(1, 2), {}, {}, {}};
    rep.positions.assign(npos.begin() + 1, npos.begin() + 1 + depth);
    rep.xi_values.resize(static_cast<size_t>(depth));
    rep.xi_errors.resize(static_cast<size_t>(depth));
    for (int j = 1; j <= depth; ++j) {
        const long long nj = npos[j];
        const long long Tp = T - nj;
        mpz_class low;
        mpz_tdiv_r_2exp(low.get_mpz_t(), P.get_mpz_t(), static_cast<mp_bitcnt_t>(Tp));
        mpz_class E = (low << static_cast<unsigned long>(nj)) -
                      (mpz_class(1) << static_cast<unsigned long>(T - 1)) -
                      (ellN << static_cast<unsigned long>(T - nj - F));
        assert(sgn(E) >= 0);
        long exp2 = 0;
        const double d = mpz_get_d_2exp(&exp2, E.get_mpz_t());
        double e = 0.0;
        if (d != 0.0 && exp2 - Tp > -1100) e = std::ldexp(d, static_cast<int>(exp2 - Tp));
        rep.xi_values[static_cast<size_t>(j - 1)] = ell + e;
        rep.xi_errors[static_cast<size_t>(j - 1)] =
            std::fabs(rep.xi_values[static_cast<size_t>(j - 1)] - ell);
    }

    rep.alpha = ConstructionAccess::make_constructed(std::move(P), T, rep.positions, ell, depth);
    return rep;
}

// ---------------------------------------------------------------------------
// Catalog and parsing

std::vector<CatalogEntry> builtin_catalog() {
    // Fresh instances on every call: copies of one AlphaRatio share its
    // prepared tables, so a single static catalog would let any caller that
    // forces low precision degrade every later user of the same name.
    std::vector<CatalogEntry> v;
    v.push_back({"inv_sqrt5", AlphaRatio::quadratic(0, 1, 5, 5)});
    v.push_back({"inv_sqrt3", AlphaRatio::quadratic(0, 1, 3, 3)});
    v.push_back({"inv_one_plus_sqrt5", AlphaRatio::quadratic(-1, 1, 4, 5)});
    return v;
}

AlphaRatio parse_alpha(const std::string& text) { return parse_alpha(text, builtin_catalog()); }

AlphaRatio parse_alpha(const std::string& text, const std::vector<CatalogEntry>& catalog) {
    std::string s = text;
    s.erase(0, s.find_first_not_of(" \t"));
    s.erase(s.find_last_not_of(" \t") + 1);
    if (s.empty()) throw std::domain_error("empty alpha specification");

    // later entries shadow earlier ones
    for (auto it = catalog.rbegin(); it != catalog.rend(); ++it)
        if (it->name == s) return it->alpha;

    if (s.rfind("quad:", 0) == 0) {
        std::vector<long long> vals;
        std::string rest = s.substr(5);
        std::stringstream ss(rest);
        std::string item;
        while (std::getline(ss, item, ',')) vals.push_back(parse_ll(item));
        if (vals.size() != 4)
            throw std::domain_error("quad alpha needs four parameters a,b,c,m");
        return AlphaRatio::quadratic(vals[0], vals[1], vals[2], vals[3]);
    }

    const auto slash = s.find('/');
    if (slash != std::string::npos) {
        const long long p = parse_ll(s.substr(0, slash));
        const long long q = parse_ll(s.substr(slash + 1));
        return AlphaRatio::rational(p, q);
    }

    const auto dot = s.find('.');
    if (dot != std::string::npos) {
        // decimal string, treated as an exact rational
        const std::string ipart = s.substr(0, dot), fpart = s.substr(dot + 1);
        if (fpart.empty() || fpart.size() > 18)
            throw std::domain_error("decimal alpha supports 1 to 18 fractional digits");
        const std::string digits = (ipart.empty() ? "0" : ipart) + fpart;
        const long long num = parse_ll(digits);
        long long den = 1;
        for (size_t i = 0; i < fpart.size(); ++i) den *= 10;
        return AlphaRatio::rational(num, den);
    }

    throw std::domain_error("cannot parse alpha specification '" + text + "'");
}

std::vector<CatalogEntry> load_catalog_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open catalog file: " + path);
    std::vector<CatalogEntry> out = builtin_catalog();
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ss(line);
        std::string name, kind;
        ss >> name >> kind;
        auto where = [&] { return path + ":" + std::to_string(lineno); };
        if (kind == "rat") {
            long long p = 0, q = 0;
            if (!(ss >> p >> q)) throw std::domain_error("bad rational entry at " + where());
            out.push_back({name, AlphaRatio::rational(p, q)});
        } else if (kind == "quad") {
            long long a = 0, b = 0, c = 0, m = 0;
            if (!(ss >> a >> b >> c >> m))
                throw std::domain_error("bad quadratic entry at " + where());
            out.push_back({name, AlphaRatio::quadratic(a, b, c, m)});
        } else {
            throw std::domain_error("unknown catalog kind '" + kind + "' at " + where());
        }
    }
    return out;
}

} // namespace dbridge::alpha
