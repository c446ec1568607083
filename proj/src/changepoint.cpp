#include "icebreaker/changepoint.hpp"

#include "icebreaker/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace icebreaker {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_complete(const AnnualSeries& s, const char* who) {
    if (s.has_missing())
        throw std::invalid_argument(std::string(who) + ": series has missing values");
}

// Prefix sums over data centered at its mean; centering keeps the segment
// cost sums well conditioned without changing any SSR.
struct PrefixStats {
    std::vector<double> sum;   // sum[i] = centered y_0..y_{i-1}
    std::vector<double> sumsq;

    explicit PrefixStats(const std::vector<double>& y) {
        double mean = 0.0;
        for (double v : y) mean += v;
        mean /= static_cast<double>(y.size());
        sum.resize(y.size() + 1, 0.0);
        sumsq.resize(y.size() + 1, 0.0);
        for (std::size_t i = 0; i < y.size(); ++i) {
            const double c = y[i] - mean;
            sum[i + 1] = sum[i] + c;
            sumsq[i + 1] = sumsq[i] + c * c;
        }
    }

    // SSR of the single-mean fit on [i, j] inclusive
    double cost(std::size_t i, std::size_t j) const {
        const double s = sum[j + 1] - sum[i];
        const double q = sumsq[j + 1] - sumsq[i];
        const double len = static_cast<double>(j - i + 1);
        const double c = q - s * s / len;
        return c > 0.0 ? c : 0.0;
    }
};

} // namespace

BreakModel bai_perron(const std::vector<double>& y, double min_seg_frac, std::size_t k_max,
                      int first_year) {
    const std::size_t n = y.size();
    if (n == 0) throw std::invalid_argument("bai_perron: empty series");
    if (min_seg_frac <= 0.0 || min_seg_frac > 1.0)
        throw std::invalid_argument("bai_perron: min_seg_frac must be in (0,1]");
    const double hreal = min_seg_frac * static_cast<double>(n);
    if (hreal < 2.0)
        throw std::invalid_argument("bai_perron: series too short for the minimum segment length");
    const std::size_t h = static_cast<std::size_t>(std::ceil(hreal));
    if (h > n) throw std::invalid_argument("bai_perron: series too short for the minimum segment length");

    const std::size_t k_feasible = n / h - 1;
    const std::size_t kmax = std::min(k_max, k_feasible);
    const PrefixStats ps(y);

    // g[k][i] = minimal SSR splitting the suffix [i, n) into k+1 admissible segments
    std::vector<std::vector<double>> g(kmax + 1, std::vector<double>(n + 1, kInf));
    for (std::size_t i = 0; i + h <= n; ++i) g[0][i] = ps.cost(i, n - 1);
    for (std::size_t k = 1; k <= kmax; ++k) {
        for (std::size_t i = 0; i + (k + 1) * h <= n; ++i) {
            double best = kInf;
            const std::size_t b_lo = i + h - 1;          // last index of the first segment
            const std::size_t b_hi = n - 1 - k * h;       // leave room for k segments
            for (std::size_t b = b_lo; b <= b_hi; ++b) {
                const double v = ps.cost(i, b) + g[k - 1][b + 1];
                if (v < best) best = v;
            }
            g[k][i] = best;
        }
    }

    BreakModel out;
    out.min_segment = h;
    out.ssr_by_k.resize(kmax + 1);
    out.bic_by_k.resize(kmax + 1);
    const double tn = static_cast<double>(n);
    std::size_t chosen = 0;
    double best_bic = kInf;
    for (std::size_t k = 0; k <= kmax; ++k) {
        const double ssr = g[k][0];
        out.ssr_by_k[k] = ssr;
        const double bic = tn * std::log(ssr / tn) + (2.0 * static_cast<double>(k) + 1.0) * std::log(tn);
        out.bic_by_k[k] = bic;
        if (bic < best_bic) {
            best_bic = bic;
            chosen = k;
        }
    }
    out.chosen_k = chosen;

    // reconstruct left to right; on ties the earliest break wins
    std::size_t pos = 0;
    for (std::size_t remaining = chosen; remaining > 0; --remaining) {
        const std::size_t b_lo = pos + h - 1;
        const std::size_t b_hi = n - 1 - remaining * h;
        double best = kInf;
        std::size_t best_b = b_lo;
        for (std::size_t b = b_lo; b <= b_hi; ++b) {
            const double v = ps.cost(pos, b) + g[remaining - 1][b + 1];
            if (v < best) {
                best = v;
                best_b = b;
            }
        }
        out.break_indices.push_back(best_b);
        out.break_years.push_back(first_year + static_cast<int>(best_b));
        pos = best_b + 1;
    }

    std::size_t start = 0;
    for (std::size_t seg = 0; seg <= chosen; ++seg) {
        const std::size_t end = seg < chosen ? out.break_indices[seg] : n - 1;
        double sum = 0.0;
        for (std::size_t t = start; t <= end; ++t) sum += y[t];
        out.segment_means.push_back(sum / static_cast<double>(end - start + 1));
        start = end + 1;
    }
    return out;
}

BreakModel bai_perron(const AnnualSeries& s, double min_seg_frac, std::size_t k_max) {
    require_complete(s, "bai_perron");
    return bai_perron(s.values, min_seg_frac, k_max, s.first_year);
}

namespace {

struct ArcMax {
    double score = -1.0; // d^2 * n / (l (n-l)), scale-free up to the segment variance
    std::size_t i = 0;   // arc start (cut position)
    std::size_t j = 0;   // arc end (cut position)
};

// Maximal squared arc statistic over all arcs of the circularized segment.
// Wrapped arcs are covered by complement symmetry, so scanning contiguous
// arcs of every length suffices.
ArcMax max_arc(const std::vector<double>& prefix, std::size_t n) {
    const double tot = prefix[n];
    ArcMax best;
    for (std::size_t len = 1; len < n; ++len) {
        const double lf = static_cast<double>(len);
        const double frac = lf * tot / static_cast<double>(n);
        const double w = static_cast<double>(n) / (lf * static_cast<double>(n - len));
        for (std::size_t i = 0; i + len <= n; ++i) {
            const double d = prefix[i + len] - prefix[i] - frac;
            const double score = d * d * w;
            if (score > best.score) {
                best.score = score;
                best.i = i;
                best.j = i + len;
            }
        }
    }
    return best;
}

std::vector<double> prefix_of(const std::vector<double>& v) {
    std::vector<double> p(v.size() + 1, 0.0);
    for (std::size_t i = 0; i < v.size(); ++i) p[i + 1] = p[i] + v[i];
    return p;
}

} // namespace

double cbs_max_statistic(const std::vector<double>& segment) {
    const std::size_t n = segment.size();
    if (n < 2) throw std::invalid_argument("cbs_max_statistic: segment too short");
    const auto prefix = prefix_of(segment);
    const double mean = prefix[n] / static_cast<double>(n);
    double var = 0.0;
    for (double v : segment) var += (v - mean) * (v - mean);
    var /= static_cast<double>(n);
    if (var <= 0.0) return 0.0;
    const ArcMax best = max_arc(prefix, n);
    return std::sqrt(best.score / var);
}

CbsResult cbs(const std::vector<double>& y, const CbsOptions& opt, int first_year) {
    if (y.empty()) throw std::invalid_argument("cbs: empty series");
    if (opt.alpha <= 0.0 || opt.alpha >= 1.0) throw std::invalid_argument("cbs: alpha in (0,1)");
    if (opt.n_perm == 0) throw std::invalid_argument("cbs: need at least one permutation");

    CbsResult out;
    out.alpha = opt.alpha;
    out.n_perm = opt.n_perm;

    // count above which p > alpha is already guaranteed
    const double cmax_real = opt.alpha * static_cast<double>(opt.n_perm + 1) - 1.0;
    const long cmax = static_cast<long>(std::floor(cmax_real + 1e-12));

    struct Piece {
        std::size_t a, b; // [a, b)
    };
    std::vector<Piece> stack{{0, y.size()}};
    uint64_t segment_counter = 0;

    while (!stack.empty()) {
        const Piece piece = stack.back();
        stack.pop_back();
        const std::size_t n = piece.b - piece.a;
        if (n < 4) continue;

        std::vector<double> seg(y.begin() + piece.a, y.begin() + piece.b);
        const auto prefix = prefix_of(seg);
        const ArcMax obs = max_arc(prefix, n);
        Rng rng = rng_stream(opt.seed, segment_counter++);

        long exceed = 0;
        std::size_t done = 0;
        std::vector<double> perm = seg;
        for (std::size_t r = 0; r < opt.n_perm; ++r) {
            rng.shuffle(perm);
            const auto pp = prefix_of(perm);
            const ArcMax pm = max_arc(pp, n);
            ++done;
            if (pm.score >= obs.score) ++exceed;
            if (opt.early_stop && exceed > cmax) break;
        }
        const double p = (1.0 + static_cast<double>(exceed)) / (1.0 + static_cast<double>(done));
        if (cmax < 0 || exceed > cmax) continue; // not significant

        if (obs.i > 0) {
            out.changepoint_indices.push_back(piece.a + obs.i - 1);
            out.p_values.push_back(p);
        }
        if (obs.j < n) {
            out.changepoint_indices.push_back(piece.a + obs.j - 1);
            out.p_values.push_back(p);
        }
        // recurse on the resulting pieces, left pieces tested first
        if (obs.j < n) stack.push_back({piece.a + obs.j, piece.b});
        if (obs.i < obs.j) stack.push_back({piece.a + obs.i, piece.a + obs.j});
        if (obs.i > 0) stack.push_back({piece.a, piece.a + obs.i});
    }

    std::vector<std::size_t> order(out.changepoint_indices.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return out.changepoint_indices[a] < out.changepoint_indices[b];
    });
    CbsResult sorted = out;
    for (std::size_t i = 0; i < order.size(); ++i) {
        sorted.changepoint_indices[i] = out.changepoint_indices[order[i]];
        sorted.p_values[i] = out.p_values[order[i]];
    }
    sorted.changepoints.clear();
    for (std::size_t idx : sorted.changepoint_indices)
        sorted.changepoints.push_back(first_year + static_cast<int>(idx));
    return sorted;
}

CbsResult cbs(const AnnualSeries& s, const CbsOptions& opt) {
    require_complete(s, "cbs");
    return cbs(s.values, opt, s.first_year);
}

} // namespace icebreaker
