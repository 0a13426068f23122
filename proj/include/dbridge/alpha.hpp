#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dbridge::alpha {

// Thrown when a certified computation cannot reach the required interval
// width at the configured precision (or when a materialization cap is hit).
struct PrecisionExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Certification precision for fractional parts of n*alpha.
//   bits == 0 derives the working precision from n_max:
//   max(128, 2*ceil(log2 n_max) + 80), plus 64 when high_digits is set
//   (20-significant-digit decimal output needs the wider certificate).
struct Precision {
    long long n_max = 10'000'000;
    int bits = 0;
    bool high_digits = false;

    int effective_bits() const;
};

// The three dichotomy sequences of the edge-length ratio at index n:
//   r_n        = alpha*n - floor(alpha*n + 1/2)   in [-1/2, 1/2)
//   xi_n       = 2*|r_n|                          in [0, 1]
//   xi_tilde_n = n*(frac(alpha*n) - 1/2)
// xi_tilde is carried as an unevaluated double-double (hi + lo) together
// with a certified radius: the exact value lies within error_radius of
// hi + lo. For rational alpha only the double-double truncation remains
// (radius around 1e-31 relative).
struct DichotomySequences {
    long long n = 0;
    double r_n = 0.0;
    double xi_n = 0.0;
    double xi_tilde = 0.0;     // hi part
    double xi_tilde_lo = 0.0;  // lo part
    double error_radius = 0.0;
    bool n_alpha_integer = false;       // alpha*n in Z (rational alpha only)
    bool n_alpha_half_integer = false;  // alpha*n + 1/2 in Z (rational alpha only)
};

// Edge-length ratio in (0, 1), one of three kinds:
//   Rational     p/q in lowest terms
//   Quadratic    (a + b*sqrt(m))/c with m >= 2 not a perfect square, b != 0
//   Constructed  binary expansion produced by construct_alpha
// The geometric restriction alpha <= 1/2 (short edge over total ring
// length) is enforced by GraphGeometry, not here: the fractional-part
// scans are meaningful on all of (0, 1).
// Immutable value type; copies share the underlying state. prepare() fixes
// the certification precision and precomputes the scaled integer square
// root; dichotomy() lazily prepares at defaults on first use.
class AlphaRatio {
  public:
    enum class Kind { Rational, Quadratic, Constructed };

    static AlphaRatio rational(long long p, long long q);
    static AlphaRatio quadratic(long long a, long long b, long long c, long long m);

    Kind kind() const;
    double value() const;
    std::string describe() const;

    // Rational accessors (throw std::logic_error for other kinds).
    long long p() const;
    long long q() const;

    // Fix the working precision. Idempotent for equal settings; not safe
    // to call concurrently with dichotomy() from other threads.
    void prepare(const Precision& prec) const;

    DichotomySequences dichotomy(long long n) const;

    // Certified fractional part {n*alpha}: the exact value lies within
    // error_radius of value. Rational alpha costs one rounding.
    struct FracPart {
        double value = 0.0;
        double error_radius = 0.0;
    };
    FracPart frac_part(long long n) const;

    // Exact decimal rendering of xi_tilde_n to `digits` significant digits
    // (round half away from zero on the certified midpoint).
    std::string xi_tilde_decimal(long long n, int digits) const;

  private:
    struct Impl;
    std::shared_ptr<Impl> impl_;
    explicit AlphaRatio(std::shared_ptr<Impl> impl);
    friend struct ConstructionAccess;
};

// Unique coprime pair (p0, q0) with p/q = p0/(2*q0): (2p, q) for odd q,
// (p, q/2) for even q. The indices n at which alpha*n or alpha*n + 1/2
// is an integer (the degenerate indices) are exactly the multiples of q0.
// Throws std::logic_error unless alpha is rational.
std::pair<long long, long long> reduce_half_integer(const AlphaRatio& alpha);

// Running minimum over 1 <= n <= N of n * ||alpha*n - beta||, where ||.||
// is the distance to the nearest integer. beta is taken as the exact dyadic
// value of the given double.
double estimate_approx_constant(const AlphaRatio& alpha, double beta, long long N);

// Block construction of a Liouville-type ratio targeting
// xi_tilde_{2^{n_j}} -> ell. The input ell (>= 0, dyadic as a double, with
// integer part I of B bits and F fractional bits) is encoded once per
// stage: stage j writes at position n_j the payload I + 2^(n_j - 1) in n_j
// bits, then all F fractional bits of ell, then n_j zeros, with
// n_1 = B + 1 and n_{j+1} = 3 n_j + F. The resulting error sequence
//   e_j = |xi_tilde_{2^{n_j}} - ell| = 2^{-(F + n_j)} * v_j, v_j in [1/2, 1)
// is strictly decreasing until it underflows to exactly 0 in double.
struct ConstructionReport {
    AlphaRatio alpha;
    std::vector<long long> positions;  // n_j, j = 1..depth
    std::vector<double> xi_values;     // xi_tilde_{2^{n_j}}
    std::vector<double> xi_errors;     // |xi_values[j] - ell|
};
ConstructionReport construct_alpha(double ell, int depth);

// Named ratios available to the CLI and the scanners.
struct CatalogEntry {
    std::string name;
    AlphaRatio alpha;
};
// Returns fresh instances: prepared precision travels with the shared
// handle, so callers get entries no previous user could have degraded.
std::vector<CatalogEntry> builtin_catalog();

// Parse an alpha specification: "p/q", "quad:a,b,c,m", or a catalog name.
AlphaRatio parse_alpha(const std::string& text);
AlphaRatio parse_alpha(const std::string& text, const std::vector<CatalogEntry>& catalog);

// Catalog file: one entry per line, "name rat p q" or "name quad a b c m";
// blank lines and lines starting with '#' are skipped. Returned entries
// extend (and may shadow) the builtin catalog.
std::vector<CatalogEntry> load_catalog_file(const std::string& path);

} // namespace dbridge::alpha
