#include <doctest.h>

#include "icebreaker/bayes.hpp"
#include "icebreaker/distributions.hpp"
#include "icebreaker/rng.hpp"

#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

using namespace icebreaker;

namespace {

AnnualSeries wrap(std::vector<double> values, int first_year = 1900) {
    AnnualSeries s;
    s.first_year = first_year;
    s.missing.assign(values.size(), 0);
    s.values = std::move(values);
    return s;
}

} // namespace

TEST_CASE("constant series takes the degenerate fast path") {
    const BcpResult res = barry_hartigan(std::vector<double>(50, 2.5));
    for (double p : res.change_prob) CHECK(p == 0.0);
    for (double m : res.posterior_mean) CHECK(m == doctest::Approx(2.5));
}

TEST_CASE("posterior matches exhaustive enumeration at n = 20") {
    Rng rng = rng_stream(314, 0);
    std::vector<double> y(20);
    for (std::size_t t = 0; t < y.size(); ++t) y[t] = rng.normal() + (t >= 10 ? 2.0 : 0.0);

    const auto oracle = oracles::bh_enumerate(y, 0.2, 0.2);

    BcpOptions opt;
    opt.iterations = 42000;
    opt.burnin = 2000;
    opt.seed = 7;
    const BcpResult mcmc = barry_hartigan(y, opt);

    double max_prob_err = 0.0, max_mean_err = 0.0;
    for (std::size_t t = 0; t < y.size(); ++t) {
        if (t >= 1)
            max_prob_err = std::max(max_prob_err,
                                    std::fabs(mcmc.change_prob[t] - oracle.change_prob[t]));
        max_mean_err =
            std::max(max_mean_err, std::fabs(mcmc.posterior_mean[t] - oracle.posterior_mean[t]));
    }
    CHECK(max_prob_err < 0.025);
    CHECK(max_mean_err < 0.05);
}

TEST_CASE("a large step concentrates the change probability at the break") {
    Rng rng = rng_stream(999, 0);
    std::vector<double> y(200);
    for (std::size_t t = 0; t < y.size(); ++t) y[t] = rng.normal() + (t >= 100 ? 3.0 : 0.0);

    BcpOptions opt;
    opt.seed = 55;
    const BcpResult res = barry_hartigan(y, opt);

    double peak = 0.0;
    for (std::size_t t = 95; t <= 105; ++t) peak = std::max(peak, res.change_prob[t]);
    CHECK(peak > 0.8);

    for (std::size_t t = 20; t < 80; ++t)
        CHECK(std::fabs(res.posterior_mean[t] - 0.0) < 0.35);
    for (std::size_t t = 120; t < 180; ++t)
        CHECK(std::fabs(res.posterior_mean[t] - 3.0) < 0.35);
}

TEST_CASE("posterior mean stays inside the data hull and runs are reproducible") {
    for (uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        Rng rng = rng_stream(seed, 9);
        const std::vector<double> y = rng.normals(80);
        const double lo = *std::min_element(y.begin(), y.end());
        const double hi = *std::max_element(y.begin(), y.end());
        BcpOptions opt;
        opt.seed = seed;
        const BcpResult a = barry_hartigan(y, opt);
        for (double m : a.posterior_mean) {
            CHECK(m >= lo - 1e-12);
            CHECK(m <= hi + 1e-12);
        }
        for (double p : a.change_prob) {
            CHECK(p >= 0.0);
            CHECK(p <= 1.0);
        }
        const BcpResult b = barry_hartigan(y, opt);
        CHECK(a.posterior_mean == b.posterior_mean);
        CHECK(a.change_prob == b.change_prob);
    }
}

TEST_CASE("barry_hartigan validates its inputs") {
    CHECK_THROWS(barry_hartigan(std::vector<double>{1.0, 2.0}));
    BcpOptions bad;
    bad.iterations = 10;
    bad.burnin = 10;
    CHECK_THROWS(barry_hartigan(std::vector<double>(20, 0.0), bad));
}

// ---------------------------------------------------------------------------

namespace {

std::vector<double> synthetic_blocks(std::size_t n_blocks, std::size_t block_len, double sigma_w,
                                     double sigma_b, uint64_t seed) {
    Rng rng = rng_stream(seed, 0);
    std::vector<double> y;
    y.reserve(n_blocks * block_len);
    for (std::size_t j = 0; j < n_blocks; ++j) {
        const double mu_j = sigma_b * rng.normal();
        for (std::size_t t = 0; t < block_len; ++t) y.push_back(mu_j + sigma_w * rng.normal());
    }
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(y.size());
    for (double& v : y) v -= mean;
    return y;
}

} // namespace

TEST_CASE("hierarchical anova recovers the generating scales") {
    const std::vector<double> y = synthetic_blocks(20, 10, 1.0, 0.5, 5);
    AnovaOptions opt;
    opt.block_len = 10;
    opt.seed = 5;
    const AnovaPosterior post = hierarchical_anova(y, opt);
    const AnovaSummary sum = icc_summary(post);
    CHECK(sum.sigma_w.med >= 0.9);
    CHECK(sum.sigma_w.med <= 1.1);
    CHECK(sum.sigma_b.med >= 0.3);
    CHECK(sum.sigma_b.med <= 0.7);
}

TEST_CASE("draws satisfy the sum-to-zero constraint and prior supports") {
    const std::vector<double> y = synthetic_blocks(8, 10, 1.0, 0.3, 7);
    AnovaOptions opt;
    opt.block_len = 10;
    opt.iterations = 3000;
    opt.burnin = 500;
    opt.seed = 3;
    const AnovaPosterior post = hierarchical_anova(y, opt);
    for (const auto& draw : post.alpha_draws) {
        double s = 0.0;
        for (double a : draw) s += a;
        CHECK(std::fabs(s) < 1e-8);
    }
    for (double v : post.sigma_w_draws) {
        CHECK(v >= 0.0);
        CHECK(v <= 20.0);
    }
    for (double v : post.sigma_b_draws) {
        CHECK(v >= 0.0);
        CHECK(v <= 20.0);
    }
    for (double v : post.icc_draws) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("exchangeable blocks keep zero inside every credible interval") {
    Rng rng = rng_stream(31, 0);
    std::vector<double> y = rng.normals(40); // two blocks of pure within-noise
    double mean = 0.0;
    for (double v : y) mean += v;
    for (double& v : y) v -= mean / 40.0;
    AnovaOptions opt;
    opt.block_len = 20;
    opt.seed = 11;
    const AnovaPosterior post = hierarchical_anova(y, opt);
    const AnovaSummary sum = icc_summary(post);
    for (const auto& a : sum.alpha) {
        CHECK(a.ci_low <= 0.0);
        CHECK(a.ci_high >= 0.0);
    }
}

TEST_CASE("partial trailing blocks are kept") {
    const std::vector<double> y = synthetic_blocks(5, 10, 1.0, 0.2, 77); // 50 points
    AnovaOptions opt;
    opt.block_len = 15; // blocks of 15,15,15,5
    opt.iterations = 1500;
    opt.burnin = 300;
    const AnovaPosterior post = hierarchical_anova(y, opt);
    CHECK(post.n_blocks == 4);
}

TEST_CASE("anova requires at least two blocks") {
    AnovaOptions opt;
    opt.block_len = 100;
    CHECK_THROWS(hierarchical_anova(std::vector<double>(50, 0.0), opt));
}

TEST_CASE("low between-variance data shrinks the ICC") {
    std::size_t small = 0;
    const std::size_t runs = 50;
    for (std::size_t r = 0; r < runs; ++r) {
        const std::vector<double> y = synthetic_blocks(12, 10, 1.0, 0.0, 1000 + r);
        AnovaOptions opt;
        opt.block_len = 10;
        opt.iterations = 2000;
        opt.burnin = 500;
        opt.seed = r;
        const AnovaPosterior post = hierarchical_anova(y, opt);
        if (median(post.icc_draws) < 0.1) ++small;
    }
    CHECK(static_cast<double>(small) / runs >= 0.9);
}

// ---------------------------------------------------------------------------

TEST_CASE("icc summary quantiles follow the stated definition") {
    AnovaPosterior post;
    post.n_blocks = 1;
    post.block_len = 10;
    for (std::size_t k = 1; k <= 1000; ++k) {
        const double v = static_cast<double>(k) / 1000.0;
        post.icc_draws.push_back(v);
        post.sigma_w_draws.push_back(1.0);
        post.sigma_b_draws.push_back(1.0);
        post.mu_draws.push_back(0.0);
        post.alpha_draws.push_back({0.0});
    }
    const AnovaSummary sum = icc_summary(post);
    CHECK(sum.icc.med == doctest::Approx(0.5005).epsilon(1e-12));
    CHECK(sum.icc.ci_low == doctest::Approx(0.025975).epsilon(1e-9));
    CHECK(sum.icc.ci_high == doctest::Approx(0.975025).epsilon(1e-9));
    CHECK(sum.sigma_w.med == doctest::Approx(1.0));
    CHECK(sum.sigma_w.ci_low == doctest::Approx(1.0));
    CHECK(sum.sigma_w.ci_high == doctest::Approx(1.0));
}

TEST_CASE("icc summary guards its invariants") {
    AnovaPosterior post;
    post.n_blocks = 1;
    post.block_len = 10;
    for (int i = 0; i < 200; ++i) {
        post.icc_draws.push_back(i == 50 ? 1.5 : 0.5); // out-of-range draw
        post.sigma_w_draws.push_back(1.0);
        post.sigma_b_draws.push_back(1.0);
        post.mu_draws.push_back(0.0);
        post.alpha_draws.push_back({0.0});
    }
    CHECK_THROWS(icc_summary(post));
    post.icc_draws.assign(50, 0.5); // too few draws
    CHECK_THROWS(icc_summary(post));
}

TEST_CASE("gelman-rubin agrees with hand computations") {
    Rng r1 = rng_stream(1, 0), r2 = rng_stream(1, 1);
    const std::vector<std::vector<double>> good = {r1.normals(5000), r2.normals(5000)};
    CHECK(gelman_rubin(good) < 1.05);

    Rng r3 = rng_stream(2, 0), r4 = rng_stream(2, 1);
    std::vector<double> c1 = r3.normals(2000), c2 = r4.normals(2000);
    for (double& v : c2) v += 10.0;
    CHECK(gelman_rubin({c1, c2}) > 2.0);

    // duplicated chain: B = 0 exactly, so PSRF = sqrt((n-1)/n)
    const double n = static_cast<double>(c1.size());
    CHECK(gelman_rubin({c1, c1}) == doctest::Approx(std::sqrt((n - 1.0) / n)).epsilon(1e-6));
}

TEST_CASE("gelman-rubin rejects degenerate input") {
    CHECK_THROWS(gelman_rubin({std::vector<double>(100, 1.0), std::vector<double>(100, 1.0)}));
    CHECK_THROWS(gelman_rubin({std::vector<double>(100, 1.0)}));
    CHECK_THROWS(gelman_rubin({{1.0, 2.0}, {1.0, 2.0}}));
}

TEST_CASE("series wrapper rejects missing values") {
    AnnualSeries s = wrap({1.0, 2.0, 3.0, 4.0, 5.0});
    s.missing[2] = 1;
    CHECK_THROWS(barry_hartigan(s));
    CHECK_THROWS(hierarchical_anova(s));
}
