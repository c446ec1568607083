#ifndef ICEBREAKER_BAYES_HPP
#define ICEBREAKER_BAYES_HPP

#include <cstdint>
#include <vector>

#include "icebreaker/annual_series.hpp"

namespace icebreaker {

/// Posterior summary of the product-partition change-point model.
struct BcpResult {
    std::vector<double> posterior_mean; // per-position posterior level
    std::vector<double> change_prob;    // change_prob[t] = P(level changes between t-1 and t)
    std::size_t iterations = 0;         // total sweeps, burnin included
    std::size_t burnin = 0;
    double p0 = 0.2;
    double w0 = 0.2;
};

struct BcpOptions {
    std::size_t iterations = 550;
    std::size_t burnin = 50;
    double p0 = 0.2; // cap of the uniform prior on the change probability
    double w0 = 0.2; // cap of the uniform prior on the noise-to-signal ratio
    uint64_t seed = 1;
};

/// Gibbs sampler over the change indicators of the normal product-partition
/// model: each sweep resamples every boundary from its conditional odds, with
/// uniform priors U(0, p0] on the change probability and U(0, w0] on the
/// within-to-total variance ratio. A constant series short-circuits to
/// posterior_mean = data, change_prob = 0.
BcpResult barry_hartigan(const AnnualSeries& s, const BcpOptions& opt = {});
BcpResult barry_hartigan(const std::vector<double>& y, const BcpOptions& opt = {});

/// Posterior draws of the one-way hierarchical model
///   y_ij ~ N(alpha_j, sigma_w^2),  alpha_j ~ N(mu, sigma_b^2),
///   mu ~ N(0, 10000),  sigma_w, sigma_b ~ U[0, 20].
/// Stored draws are recentred so the block means sum to zero, with the shift
/// absorbed into mu.
struct AnovaPosterior {
    std::vector<std::vector<double>> alpha_draws; // draw-major, one entry per block
    std::vector<double> mu_draws;
    std::vector<double> sigma_w_draws;
    std::vector<double> sigma_b_draws;
    std::vector<double> icc_draws;
    std::size_t block_len = 0;
    std::size_t n_blocks = 0;
};

struct AnovaOptions {
    std::size_t block_len = 50;
    std::size_t iterations = 10000;
    std::size_t burnin = 2500;
    uint64_t seed = 1;
};

AnovaPosterior hierarchical_anova(const AnnualSeries& s, const AnovaOptions& opt = {});
AnovaPosterior hierarchical_anova(const std::vector<double>& y, const AnovaOptions& opt = {});

struct ParamSummary {
    double med = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
};

struct AnovaSummary {
    ParamSummary icc, sigma_w, sigma_b, mu;
    std::vector<ParamSummary> alpha;
};

/// Equal-tailed 95% intervals and medians of the posterior draws. Validates
/// the ICC draws against [0,1].
AnovaSummary icc_summary(const AnovaPosterior& a);

/// Potential scale reduction factor over >= 2 chains of equal length.
double gelman_rubin(const std::vector<std::vector<double>>& chains);

} // namespace icebreaker

#endif
