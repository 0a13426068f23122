#include "dbridge/scan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "dbridge/spectral_maps.hpp"
#include "alpha_internal.hpp"

namespace dbridge::scan {

namespace {

// Block size for the scan. Blocks are independent (each starts its own
// kernel at the block's first index), so results do not depend on how
// blocks are distributed over threads.
constexpr long long kBlock = 1 << 16;

// K(1/sqrt(2)), the lemniscatic value driving the small-frequency limits.
constexpr double kK0 = 1.8540746773013719;

std::vector<DiophantineHit> scan_block(const alpha::AlphaRatio& a, long long lo,
                                       long long hi, double threshold,
                                       HitCriterion criterion) {
    std::vector<DiophantineHit> out;
    alpha::detail::FracKernel kern(a, lo);
    for (long long n = lo; n <= hi; ++n) {
        bool hit = criterion == HitCriterion::XiTildeThreshold
                       ? kern.xi_abs_less(threshold)
                       : kern.hurwitz_minus();
        if (hit) {
            alpha::DichotomySequences d = kern.record();
            out.push_back({n, d.xi_tilde, d.xi_tilde_lo, d.xi_n});
        }
        kern.advance();
    }
    return out;
}

}  // namespace

std::vector<DiophantineHit> scan_hits(const alpha::AlphaRatio& a, long long n_max,
                                      double threshold, HitCriterion criterion,
                                      int threads, int precision_bits) {
    if (n_max < 1)
        throw std::domain_error("scan_hits: n_max must be at least 1");
    if (criterion == HitCriterion::XiTildeThreshold &&
        !(threshold > 0.0 && threshold <= 0.5))
        throw std::domain_error("scan_hits: threshold must lie in (0, 1/2]");

    alpha::Precision prec;
    prec.n_max = n_max;
    prec.bits = precision_bits;
    a.prepare(prec);

    long long nblocks = (n_max + kBlock - 1) / kBlock;
    if (threads < 1) threads = 1;
    if (static_cast<long long>(threads) > nblocks)
        threads = static_cast<int>(nblocks);

    if (threads == 1) {
        std::vector<DiophantineHit> out;
        for (long long b = 0; b < nblocks; ++b) {
            long long lo = 1 + b * kBlock;
            long long hi = std::min(n_max, (b + 1) * kBlock);
            std::vector<DiophantineHit> part =
                scan_block(a, lo, hi, threshold, criterion);
            out.insert(out.end(), part.begin(), part.end());
        }
        return out;
    }

    std::vector<std::vector<DiophantineHit>> slots(
        static_cast<size_t>(nblocks));
    std::atomic<long long> next{0};
    std::mutex err_mu;
    std::exception_ptr err;

    auto worker = [&]() {
        for (;;) {
            long long b = next.fetch_add(1);
            if (b >= nblocks) return;
            long long lo = 1 + b * kBlock;
            long long hi = std::min(n_max, (b + 1) * kBlock);
            try {
                slots[static_cast<size_t>(b)] =
                    scan_block(a, lo, hi, threshold, criterion);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mu);
                if (!err) err = std::current_exception();
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
    if (err) std::rethrow_exception(err);

    std::vector<DiophantineHit> out;
    for (const std::vector<DiophantineHit>& part : slots)
        out.insert(out.end(), part.begin(), part.end());
    return out;
}

ClusterReport cluster_hits(const std::vector<DiophantineHit>& hits,
                           double radius) {
    if (hits.empty())
        throw std::domain_error("cluster_hits: empty hit list");
    if (!(radius > 0.0))
        throw std::domain_error("cluster_hits: radius must be positive");

    ClusterReport rep;
    rep.converged = false;
    if (hits.size() < 4) return rep;  // tail empty, nothing to classify

    // Work on the tail (4th hit onward): the leading hits sit in the
    // pre-asymptotic range and would contaminate the cluster centers.
    struct Item {
        double xt;
        long long n;
    };
    std::vector<Item> tail;
    tail.reserve(hits.size() - 3);
    for (size_t i = 3; i < hits.size(); ++i)
        tail.push_back({hits[i].xi_tilde, hits[i].n});
    std::sort(tail.begin(), tail.end(), [](const Item& a, const Item& b) {
        if (a.xt != b.xt) return a.xt < b.xt;
        return a.n < b.n;
    });

    size_t start = 0;
    bool all_converged = true;
    while (start < tail.size()) {
        size_t stop = start + 1;
        while (stop < tail.size() && tail[stop].xt - tail[stop - 1].xt <= radius)
            ++stop;
        if (stop - start == 1) {
            rep.outliers.push_back(tail[start].n);
        } else {
            Cluster c;
            double sum = 0.0;
            for (size_t i = start; i < stop; ++i) {
                sum += tail[i].xt;
                c.members.push_back(tail[i].n);
            }
            c.center = sum / static_cast<double>(stop - start);
            c.spread = tail[stop - 1].xt - tail[start].xt;
            std::sort(c.members.begin(), c.members.end());
            // Converged when the two members of largest index agree to 1e-9,
            // i.e. the sequence inside the cluster has settled.
            long long n1 = c.members[c.members.size() - 2];
            long long n2 = c.members[c.members.size() - 1];
            double x1 = 0.0, x2 = 0.0;
            for (size_t i = start; i < stop; ++i) {
                if (tail[i].n == n1) x1 = tail[i].xt;
                if (tail[i].n == n2) x2 = tail[i].xt;
            }
            c.converged = std::fabs(x2 - x1) < 1e-9;
            all_converged = all_converged && c.converged;
            rep.clusters.push_back(c);
        }
        start = stop;
    }
    std::sort(rep.outliers.begin(), rep.outliers.end());
    // Clusters are already ascending by center: the tail was sorted by value.
    rep.converged = !rep.clusters.empty() && all_converged;
    return rep;
}

std::vector<OmegaRow> omega_limit_report(const spectrum::GraphGeometry& g,
                                         const alpha::AlphaRatio&,
                                         const std::vector<DiophantineHit>& hits) {
    double k2 = kK0 * kK0;
    double k4 = k2 * k2;
    double iplus_lo = -k4 / (g.L * g.L);
    double iminus_lo = -(16.0 / 5.0) * k4 / (g.L * g.L);

    std::vector<OmegaRow> rows;
    rows.reserve(hits.size());
    for (const DiophantineHit& h : hits) {
        OmegaRow row;
        row.n = h.n;
        row.xi_tilde = h.xi_tilde;

        double hi = h.xi_tilde;
        double lo = h.xi_tilde_lo;
        if (hi < 0.0) {
            hi = -hi;
            lo = -lo;
        }
        bool degenerate = (hi == 0.0 && lo == 0.0) || h.xi_n == 0.0;
        if (degenerate) {
            // Exact resonance: no isolated state, both frequencies collapse
            // to the branch endpoint omega -> 0.
            row.omega_plus = 0.0;
            row.omega_minus = 0.0;
            row.prediction = 0.0;
            row.in_I_plus = true;
            row.in_I_minus = true;
            rows.push_back(row);
            continue;
        }

        double n = static_cast<double>(h.n);
        // 1 - xi_n = 2|xi_tilde|/n, fed in extended precision so that the
        // near-resonant case keeps its full relative accuracy.
        double omt_plus = 2.0 * hi / n + 2.0 * lo / n;
        double rp = maps::G_from_one_minus_t(omt_plus) * n / g.L;
        row.omega_plus = -(rp * rp);
        double rm = maps::G_from_one_minus_t(h.xi_n) * n / g.L;
        row.omega_minus = -(rm * rm);

        // Small-frequency asymptote: sqrt|omega| ~ (4/L) K0^2 |xi_tilde|.
        double pr = (4.0 / g.L) * k2 * (hi + lo);
        row.prediction = -(pr * pr);

        row.in_I_plus = row.omega_plus >= iplus_lo && row.omega_plus <= 0.0;
        row.in_I_minus = row.omega_minus >= iminus_lo && row.omega_minus <= 0.0;
        rows.push_back(row);
    }
    return rows;
}

std::optional<std::pair<long long, long long>> fit_recurrence(
    const std::vector<long long>& indices) {
    size_t m = indices.size();
    if (m < 4) return std::nullopt;
    const std::vector<long long>& v = indices;

    // Solve for (c1, c2) from the last four terms:
    //   v[m-1] = c1 v[m-2] + c2 v[m-3]
    //   v[m-2] = c1 v[m-3] + c2 v[m-4]
    __int128 det = static_cast<__int128>(v[m - 2]) * v[m - 4] -
                   static_cast<__int128>(v[m - 3]) * v[m - 3];
    long long c1 = 0;
    long long c2 = 0;
    if (det != 0) {
        __int128 num1 = static_cast<__int128>(v[m - 1]) * v[m - 4] -
                        static_cast<__int128>(v[m - 2]) * v[m - 3];
        __int128 num2 = static_cast<__int128>(v[m - 2]) * v[m - 2] -
                        static_cast<__int128>(v[m - 1]) * v[m - 3];
        if (num1 % det != 0 || num2 % det != 0) return std::nullopt;
        c1 = static_cast<long long>(num1 / det);
        c2 = static_cast<long long>(num2 / det);
    } else {
        // Degenerate system: consistent only with a geometric tail.
        if (v[m - 2] == 0 || v[m - 1] % v[m - 2] != 0) return std::nullopt;
        c1 = v[m - 1] / v[m - 2];
        c2 = 0;
    }

    for (size_t i = 2; i < m; ++i) {
        __int128 want = static_cast<__int128>(c1) * v[i - 1] +
                        static_cast<__int128>(c2) * v[i - 2];
        if (static_cast<__int128>(v[i]) != want) return std::nullopt;
    }
    return std::make_pair(c1, c2);
}

}  // namespace dbridge::scan
