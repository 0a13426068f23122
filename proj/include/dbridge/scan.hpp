#pragma once

#include <optional>
#include <vector>

#include "dbridge/alpha.hpp"
#include "dbridge/spectrum.hpp"

namespace dbridge::scan {

// An index picked up by a Diophantine scan.
struct DiophantineHit {
    long long n;
    double xi_tilde;     // hi part of certified double-double
    double xi_tilde_lo;  // lo part
    double xi_n;
};

// XiTildeThreshold: |xi_tilde_n| < threshold (near half-integer multiples;
//   these feed the P_plus frequency limit).
// HurwitzMinus: n * xi_n < 2/sqrt5 (near integer multiples; these control
//   the P_minus frequencies that fall in the bounded window).
enum class HitCriterion { XiTildeThreshold, HurwitzMinus };

// Scan n = 1..n_max for hits. Work is split into blocks of 2^16 indices;
// with threads > 1 blocks are processed by a pool and merged in block
// order, so the result is identical to the serial scan. Hits whose
// certified interval straddles the threshold are resolved exactly.
// precision_bits = 0 derives the certification precision from n_max;
// a positive value forces it (PrecisionExhausted if too low).
std::vector<DiophantineHit> scan_hits(const alpha::AlphaRatio& a, long long n_max,
                                      double threshold = 0.25,
                                      HitCriterion criterion = HitCriterion::XiTildeThreshold,
                                      int threads = 1, int precision_bits = 0);

// Accumulation-point analysis of a hit sequence: hits from the 4th onward,
// sorted by xi_tilde, are grouped by gaps <= radius; groups with at least
// two members are clusters (singletons are outliers). A cluster has
// converged when its last two members by index differ by < 1e-9.
struct Cluster {
    double center;                  // mean of member xi_tilde values
    double spread;                  // max - min
    std::vector<long long> members; // indices n, ascending
    bool converged;
};
struct ClusterReport {
    std::vector<Cluster> clusters;    // ascending by center
    std::vector<long long> outliers;  // singleton indices
    bool converged;                   // all clusters converged
};
ClusterReport cluster_hits(const std::vector<DiophantineHit>& hits,
                           double radius = 1e-6);

// Frequencies along a hit sequence: omega_n^+ for each hit, the asymptotic
// prediction -[(4/L) K(1/sqrt2)^2 |xi_tilde_n|]^2, and containment in the
// bounded windows
//   I_plus  = [-(1/L^2) K^4, 0],  I_minus = [-(16/(5L^2)) K^4, 0],
// with K = K(1/sqrt2).
struct OmegaRow {
    long long n;
    double xi_tilde;
    double omega_plus;
    double omega_minus;
    double prediction;  // asymptotic law for omega_plus
    bool in_I_plus;
    bool in_I_minus;
};
std::vector<OmegaRow> omega_limit_report(const spectrum::GraphGeometry& g,
                                         const alpha::AlphaRatio& a,
                                         const std::vector<DiophantineHit>& hits);

// Try to fit the tail of a hit-index sequence with a two-term linear
// recurrence n_{i+1} = c1 n_i + c2 n_{i-1} (integer coefficients, checked
// against all available terms). nullopt when no such recurrence fits.
std::optional<std::pair<long long, long long>> fit_recurrence(
    const std::vector<long long>& indices);

} // namespace dbridge::scan
