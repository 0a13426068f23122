#include "dbridge/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

namespace dbridge::numerics {

namespace {

// Gauss-Legendre nodes/weights on [-1, 1], generated once by Newton
// iteration on the Legendre polynomial (deterministic to the last bit).
struct GaussRule {
    std::vector<double> x;
    std::vector<double> w;
};

GaussRule make_gauss_rule(int n) {
    GaussRule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) {
                // one more sweep to settle the last bit, then stop
                if (it > 1) break;
            }
        }
        r.x[i] = x;
        r.w[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
}

const GaussRule& rule15() {
    static const GaussRule r = make_gauss_rule(15);
    return r;
}
const GaussRule& rule31() {
    static const GaussRule r = make_gauss_rule(31);
    return r;
}

double apply_rule(const GaussRule& r, const std::function<double(double)>& f,
                  double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double s = 0.0;
    for (size_t i = 0; i < r.x.size(); ++i) s += r.w[i] * f(c + h * r.x[i]);
    return s * h;
}

struct Panel {
    double a, b, value, err;
};

Panel eval_panel(const std::function<double(double)>& f, double a, double b) {
    double v15 = apply_rule(rule15(), f, a, b);
    double v31 = apply_rule(rule31(), f, a, b);
    return {a, b, v31, std::abs(v31 - v15)};
}

} // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double rel_tol, double abs_floor) {
    if (a == b) return {0.0, 0.0};
    std::vector<Panel> panels{eval_panel(f, a, b)};
    for (int round = 0; round < 60; ++round) {
        double total = 0.0, err = 0.0;
        for (const auto& p : panels) {
            total += p.value;
            err += p.err;
        }
        double tol = rel_tol * std::abs(total) + abs_floor;
        if (err <= tol || panels.size() > 4000) return {total, err};
        // split the worst panel
        size_t worst = 0;
        for (size_t i = 1; i < panels.size(); ++i)
            if (panels[i].err > panels[worst].err) worst = i;
        Panel p = panels[worst];
        double mid = 0.5 * (p.a + p.b);
        panels[worst] = eval_panel(f, p.a, mid);
        panels.push_back(eval_panel(f, mid, p.b));
    }
    double total = 0.0, err = 0.0;
    for (const auto& p : panels) {
        total += p.value;
        err += p.err;
    }
    return {total, err};
}

double invert_monotone(const std::function<double(double)>& f, double lo, double hi,
                       double target, double xtol_rel, int max_iter) {
    if (!(lo < hi)) throw std::invalid_argument("invert_monotone: empty bracket");
    double flo = f(lo) - target;
    double fhi = f(hi) - target;
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0) == (fhi > 0))
        throw std::invalid_argument("invert_monotone: target not bracketed");
    int side = 0;  // endpoint the previous iteration replaced: -1 lo, +1 hi
    for (int it = 0; it < max_iter; ++it) {
        double scale = std::max({std::abs(lo), std::abs(hi), 1e-300});
        double width = hi - lo;
        if (width <= xtol_rel * scale) break;
        // secant proposal, clamped away from the endpoints
        double x = lo - flo * (hi - lo) / (fhi - flo);
        double margin = 0.01 * width;
        if (!(x > lo + margin && x < hi - margin)) x = 0.5 * (lo + hi);
        double fx = f(x) - target;
        if (fx == 0.0) return x;
        // Illinois: when the same endpoint survives twice running, halve its
        // residual so a one-sided crawl cannot eat the iteration budget.
        if ((fx > 0) == (flo > 0)) {
            lo = x;
            flo = fx;
            if (side < 0) fhi *= 0.5;
            side = -1;
        } else {
            hi = x;
            fhi = fx;
            if (side > 0) flo *= 0.5;
            side = 1;
        }
    }
    return 0.5 * (lo + hi);
}

DoubleDouble dd_from_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

DoubleDouble dd_add(DoubleDouble x, double y) {
    DoubleDouble s = dd_from_sum(x.hi, y);
    double lo = s.lo + x.lo;
    DoubleDouble r = dd_from_sum(s.hi, lo);
    return r;
}

DoubleDouble dd_sub(DoubleDouble x, double y) { return dd_add(x, -y); }

DoubleDouble dd_mul_int(DoubleDouble x, long long n) {
    // n and x.hi*n are assumed exactly representable products of the
    // certified pipeline (|n| <= 2^53, hi near [-1/2, 1/2]).
    double p = x.hi * static_cast<double>(n);
    double perr = std::fma(x.hi, static_cast<double>(n), -p);
    double lo = x.lo * static_cast<double>(n) + perr;
    return dd_from_sum(p, lo);
}

} // namespace dbridge::numerics
