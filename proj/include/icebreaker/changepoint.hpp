#ifndef ICEBREAKER_CHANGEPOINT_HPP
#define ICEBREAKER_CHANGEPOINT_HPP

#include <cstdint>
#include <vector>

#include "icebreaker/annual_series.hpp"

namespace icebreaker {

/// Mean-shift break model selected by BIC over 0..k_max breaks.
struct BreakModel {
    std::vector<std::size_t> break_indices; // last index of each segment but the final one
    std::vector<int> break_years;
    std::vector<double> segment_means;
    std::vector<double> ssr_by_k; // ssr_by_k[k] = SSR of the optimal k-break model
    std::vector<double> bic_by_k;
    std::size_t chosen_k = 0;
    std::size_t min_segment = 0;
};

struct CbsOptions {
    double alpha = 0.01;
    std::size_t n_perm = 1000;
    uint64_t seed = 1;
    /// Stop permuting once the exceedance count already guarantees p > alpha.
    /// Changes reported p-values (they become the count at stopping time) but
    /// never the accept/reject decision for a split.
    bool early_stop = false;
};

struct CbsResult {
    std::vector<std::size_t> changepoint_indices; // last index of the left piece
    std::vector<int> changepoints;                // same, as calendar years
    std::vector<double> p_values;                 // one per accepted split
    double alpha = 0.01;
    std::size_t n_perm = 0;
};

/// Optimal mean-shift breakpoints by dynamic programming over segment costs.
/// Every segment must span at least ceil(min_seg_frac * T) observations; the
/// number of breaks is chosen by BIC = T log(SSR/T) + (2k+1) log T. Ties in
/// SSR resolve to the earliest break positions.
BreakModel bai_perron(const AnnualSeries& s, double min_seg_frac = 0.15, std::size_t k_max = 5);
BreakModel bai_perron(const std::vector<double>& y, double min_seg_frac = 0.15,
                      std::size_t k_max = 5, int first_year = 1);

/// Circular binary segmentation: the segment is treated as a circle, the
/// maximal standardized arc-vs-complement mean difference is referred to a
/// permutation distribution, and accepted splits recurse. Segments shorter
/// than 4 observations are never tested.
CbsResult cbs(const AnnualSeries& s, const CbsOptions& opt = {});
CbsResult cbs(const std::vector<double>& y, const CbsOptions& opt = {}, int first_year = 1);

/// Largest standardized arc statistic of one segment (exposed for tests).
double cbs_max_statistic(const std::vector<double>& segment);

} // namespace icebreaker

#endif
