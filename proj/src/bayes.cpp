#include "icebreaker/bayes.hpp"

#include "icebreaker/distributions.hpp"
#include "icebreaker/rng.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace icebreaker {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_complete(const AnnualSeries& s, const char* who) {
    if (s.has_missing())
        throw std::invalid_argument(std::string(who) + ": series has missing values");
}

// 64-point Gauss-Legendre nodes on [-1, 1], computed once by Newton iteration.
struct GaussLegendre {
    std::array<double, 64> node{}, weight{};
    GaussLegendre() {
        const int n = 64;
        for (int i = 0; i < n / 2; ++i) {
            double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
            double pp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = 0.0;
                for (int j = 0; j < n; ++j) {
                    const double p2 = p1;
                    p1 = p0;
                    p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
                }
                pp = n * (x * p0 - p1) / (x * x - 1.0);
                const double dx = p0 / pp;
                x -= dx;
                if (std::fabs(dx) < 1e-15) break;
            }
            node[i] = -x;
            node[n - 1 - i] = x;
            weight[i] = weight[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
        }
    }
};

const GaussLegendre& gl64() {
    static const GaussLegendre g;
    return g;
}

// log of I(a) = integral_0^w0 w^a (W + B w)^(-c) dw for a >= 0, c > 0,
// W > 0, B >= 0. Closed form through the incomplete beta when the
// substitution u = Bw/(W+Bw) leaves a positive second parameter; numeric
// quadrature otherwise.
double log_w_integral(double a, double c, double W, double B, double w0) {
    if (B <= 0.0) return -c * std::log(W) + (a + 1.0) * std::log(w0) - std::log(a + 1.0);
    const double q = c - a - 1.0;
    if (q > 1e-9) {
        const double x = B * w0 / (W + B * w0);
        return (a + 1.0 - c) * std::log(W) - (a + 1.0) * std::log(B) +
               log_inc_beta(a + 1.0, q, x);
    }
    // rare regime (nearly every point its own block): stabilized quadrature
    const auto& g = gl64();
    const double half = 0.5 * w0;
    double emax = -kInf;
    std::array<double, 64> expo{};
    for (int i = 0; i < 64; ++i) {
        const double w = half * (g.node[i] + 1.0);
        expo[i] = a * std::log(w) - c * std::log(W + B * w);
        emax = std::max(emax, expo[i]);
    }
    double sum = 0.0;
    for (int i = 0; i < 64; ++i) sum += g.weight[i] * std::exp(expo[i] - emax);
    return emax + std::log(half * sum);
}

} // namespace

BcpResult barry_hartigan(const std::vector<double>& y, const BcpOptions& opt) {
    const std::size_t n = y.size();
    if (n < 4) throw std::invalid_argument("barry_hartigan: need at least 4 observations");
    if (opt.iterations <= opt.burnin)
        throw std::invalid_argument("barry_hartigan: iterations must exceed burnin");
    if (opt.p0 <= 0.0 || opt.p0 > 1.0 || opt.w0 <= 0.0 || opt.w0 > 1.0)
        throw std::invalid_argument("barry_hartigan: p0 and w0 must lie in (0,1]");

    BcpResult out;
    out.iterations = opt.iterations;
    out.burnin = opt.burnin;
    out.p0 = opt.p0;
    out.w0 = opt.w0;

    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(n);

    std::vector<double> prefix(n + 1, 0.0);
    double ss_tot = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double c = y[i] - mean;
        prefix[i + 1] = prefix[i] + c;
        ss_tot += c * c;
    }
    if (ss_tot <= 0.0) { // degenerate fast path
        out.posterior_mean = y;
        out.change_prob.assign(n, 0.0);
        return out;
    }
    const double w_floor = 1e-12 * ss_tot;
    const double c_exp = (static_cast<double>(n) - 1.0) / 2.0;
    const double nd = static_cast<double>(n);

    auto seg_sum = [&](std::size_t a, std::size_t b) { return prefix[b] - prefix[a]; };
    auto seg_contrib = [&](std::size_t a, std::size_t b) {
        const double s = seg_sum(a, b);
        return s * s / static_cast<double>(b - a);
    };

    // log of the prior odds term, integral over the change probability; by b0
    std::vector<double> lp_ratio(n, std::numeric_limits<double>::quiet_NaN());
    auto log_p_ratio = [&](std::size_t b0) {
        double& slot = lp_ratio[b0];
        if (std::isnan(slot)) {
            const double bd = static_cast<double>(b0);
            slot = log_inc_beta(bd + 1.0, nd - bd, opt.p0) -
                   log_inc_beta(bd, nd - bd + 1.0, opt.p0);
        }
        return slot;
    };

    std::vector<uint8_t> active(n + 1, 0);
    active[0] = active[n] = 1;
    std::size_t blocks = 1;
    double r_between = seg_contrib(0, n); // sum over blocks of S_j^2 / n_j

    Rng rng(opt.seed, 0x62637000u);

    out.posterior_mean.assign(n, 0.0);
    out.change_prob.assign(n, 0.0);
    const std::size_t retained = opt.iterations - opt.burnin;

    for (std::size_t sweep = 0; sweep < opt.iterations; ++sweep) {
        std::size_t left = 0;
        std::size_t right = 1;
        while (right < n && !active[right]) ++right;
        for (std::size_t i = 1; i < n; ++i) {
            while (right <= i) {
                ++right;
                while (right < n && !active[right]) ++right;
            }
            const bool is_active = active[i] != 0;
            const double merged = seg_contrib(left, right);
            const double split = seg_contrib(left, i) + seg_contrib(i, right);
            double r0, r1; // between terms without / with the change at i
            if (is_active) {
                r1 = r_between;
                r0 = r_between - split + merged;
            } else {
                r0 = r_between;
                r1 = r_between - merged + split;
            }
            const std::size_t b0 = blocks - (is_active ? 1 : 0);
            const double w0v = std::max(ss_tot - r0, w_floor);
            const double w1v = std::max(ss_tot - r1, w_floor);
            const double b0d = static_cast<double>(b0);
            const double log_odds =
                log_p_ratio(b0) +
                log_w_integral(b0d / 2.0, c_exp, w1v, r1, opt.w0) -
                log_w_integral((b0d - 1.0) / 2.0, c_exp, w0v, r0, opt.w0);

            bool make_active;
            if (log_odds > 35.0) make_active = true;
            else if (log_odds < -35.0) make_active = false;
            else make_active = rng.uniform() < 1.0 / (1.0 + std::exp(-log_odds));

            if (make_active != is_active) {
                if (make_active) {
                    active[i] = 1;
                    ++blocks;
                    r_between += split - merged;
                } else {
                    active[i] = 0;
                    --blocks;
                    r_between += merged - split;
                }
            }
            if (active[i]) left = i;
        }

        if (sweep < opt.burnin) continue;

        // conditional posterior of the level given the partition: block means
        // shrunk toward the grand mean by E[w | partition]
        const double wv = std::max(ss_tot - r_between, w_floor);
        const double a0 = (static_cast<double>(blocks) - 1.0) / 2.0;
        const double what = std::exp(log_w_integral(a0 + 1.0, c_exp, wv, r_between, opt.w0) -
                                     log_w_integral(a0, c_exp, wv, r_between, opt.w0));
        std::size_t start = 0;
        for (std::size_t e = 1; e <= n; ++e) {
            if (!active[e]) continue;
            const double block_mean = seg_sum(start, e) / static_cast<double>(e - start);
            const double level = (1.0 - what) * block_mean; // grand mean of centered data is 0
            for (std::size_t t = start; t < e; ++t) out.posterior_mean[t] += level;
            start = e;
        }
        for (std::size_t i = 1; i < n; ++i)
            if (active[i]) out.change_prob[i] += 1.0;
    }

    const double inv = 1.0 / static_cast<double>(retained);
    for (std::size_t t = 0; t < n; ++t) out.posterior_mean[t] = out.posterior_mean[t] * inv + mean;
    for (std::size_t t = 0; t < n; ++t) out.change_prob[t] *= inv;
    return out;
}

BcpResult barry_hartigan(const AnnualSeries& s, const BcpOptions& opt) {
    require_complete(s, "barry_hartigan");
    return barry_hartigan(s.values, opt);
}

namespace {

// Slice sampler with shrinkage on a bounded support.
double slice_sample(const std::function<double(double)>& logf, double cur, double lo, double hi,
                    Rng& rng) {
    const double logy = logf(cur) + std::log(rng.uniform());
    double a = lo, b = hi;
    for (int iter = 0; iter < 200; ++iter) {
        const double x = rng.uniform(a, b);
        if (logf(x) >= logy) return x;
        if (x < cur) a = x;
        else b = x;
    }
    return cur;
}

} // namespace

AnovaPosterior hierarchical_anova(const std::vector<double>& y, const AnovaOptions& opt) {
    const std::size_t n = y.size();
    if (opt.block_len == 0) throw std::invalid_argument("hierarchical_anova: block_len must be positive");
    if (opt.iterations <= opt.burnin)
        throw std::invalid_argument("hierarchical_anova: iterations must exceed burnin");
    const std::size_t J = (n + opt.block_len - 1) / opt.block_len;
    if (J < 2) throw std::invalid_argument("hierarchical_anova: need at least 2 blocks");

    std::vector<std::size_t> block_size(J);
    std::vector<double> block_sum(J, 0.0);
    for (std::size_t t = 0; t < n; ++t) {
        const std::size_t j = t / opt.block_len;
        block_size[j] += 1;
        block_sum[j] += y[t];
    }

    constexpr double kMuPriorVar = 10000.0;
    constexpr double kSigmaCap = 20.0;

    Rng rng(opt.seed, 0x616e6f76u);
    std::vector<double> alpha(J);
    for (std::size_t j = 0; j < J; ++j) alpha[j] = block_sum[j] / static_cast<double>(block_size[j]);
    double mu = 0.0;
    double sigma_w = 1.0, sigma_b = 0.5;

    AnovaPosterior out;
    out.block_len = opt.block_len;
    out.n_blocks = J;
    const std::size_t retained = opt.iterations - opt.burnin;
    out.alpha_draws.reserve(retained);
    out.mu_draws.reserve(retained);

    for (std::size_t sweep = 0; sweep < opt.iterations; ++sweep) {
        const double prec_w = 1.0 / (sigma_w * sigma_w);
        const double prec_b = 1.0 / (sigma_b * sigma_b);
        for (std::size_t j = 0; j < J; ++j) {
            const double prec = static_cast<double>(block_size[j]) * prec_w + prec_b;
            const double m = (block_sum[j] * prec_w + mu * prec_b) / prec;
            alpha[j] = rng.normal(m, std::sqrt(1.0 / prec));
        }
        {
            double asum = 0.0;
            for (double a : alpha) asum += a;
            const double prec = static_cast<double>(J) * prec_b + 1.0 / kMuPriorVar;
            mu = rng.normal(asum * prec_b / prec, std::sqrt(1.0 / prec));
        }
        {
            double sse = 0.0;
            for (std::size_t t = 0; t < n; ++t) {
                const double d = y[t] - alpha[t / opt.block_len];
                sse += d * d;
            }
            const double nn = static_cast<double>(n);
            sigma_w = slice_sample(
                [&](double s) { return s <= 0.0 ? -kInf : -nn * std::log(s) - sse / (2.0 * s * s); },
                sigma_w, 0.0, kSigmaCap, rng);
        }
        {
            double ssb = 0.0;
            for (double a : alpha) ssb += (a - mu) * (a - mu);
            const double jj = static_cast<double>(J);
            sigma_b = slice_sample(
                [&](double s) { return s <= 0.0 ? -kInf : -jj * std::log(s) - ssb / (2.0 * s * s); },
                sigma_b, 0.0, kSigmaCap, rng);
        }

        if (sweep < opt.burnin) continue;
        // report the sum-to-zero parameterization: shift block means, absorb into mu
        double abar = 0.0;
        for (double a : alpha) abar += a;
        abar /= static_cast<double>(J);
        std::vector<double> a_centered(J);
        for (std::size_t j = 0; j < J; ++j) a_centered[j] = alpha[j] - abar;
        out.alpha_draws.push_back(std::move(a_centered));
        out.mu_draws.push_back(mu + abar);
        out.sigma_w_draws.push_back(sigma_w);
        out.sigma_b_draws.push_back(sigma_b);
        out.icc_draws.push_back(sigma_b * sigma_b / (sigma_b * sigma_b + sigma_w * sigma_w));
    }
    return out;
}

AnovaPosterior hierarchical_anova(const AnnualSeries& s, const AnovaOptions& opt) {
    require_complete(s, "hierarchical_anova");
    return hierarchical_anova(s.values, opt);
}

namespace {

ParamSummary summarize(const std::vector<double>& draws) {
    ParamSummary p;
    p.med = quantile_type7(draws, 0.5);
    p.ci_low = quantile_type7(draws, 0.025);
    p.ci_high = quantile_type7(draws, 0.975);
    return p;
}

} // namespace

AnovaSummary icc_summary(const AnovaPosterior& a) {
    if (a.icc_draws.size() < 100)
        throw std::invalid_argument("icc_summary: need at least 100 retained draws");
    for (double v : a.icc_draws)
        if (!(v >= 0.0 && v <= 1.0))
            throw std::invalid_argument("icc_summary: ICC draw outside [0,1]");
    AnovaSummary s;
    s.icc = summarize(a.icc_draws);
    s.sigma_w = summarize(a.sigma_w_draws);
    s.sigma_b = summarize(a.sigma_b_draws);
    s.mu = summarize(a.mu_draws);
    s.alpha.resize(a.n_blocks);
    std::vector<double> col(a.alpha_draws.size());
    for (std::size_t j = 0; j < a.n_blocks; ++j) {
        for (std::size_t d = 0; d < a.alpha_draws.size(); ++d) col[d] = a.alpha_draws[d][j];
        s.alpha[j] = summarize(col);
    }
    return s;
}

double gelman_rubin(const std::vector<std::vector<double>>& chains) {
    const std::size_t m = chains.size();
    if (m < 2) throw std::invalid_argument("gelman_rubin: need at least 2 chains");
    const std::size_t n = chains[0].size();
    if (n < 10) throw std::invalid_argument("gelman_rubin: chains must have length >= 10");
    for (const auto& c : chains)
        if (c.size() != n) throw std::invalid_argument("gelman_rubin: chains must have equal length");

    std::vector<double> means(m);
    double w = 0.0;
    for (std::size_t c = 0; c < m; ++c) {
        double mean = 0.0;
        for (double v : chains[c]) mean += v;
        mean /= static_cast<double>(n);
        means[c] = mean;
        double var = 0.0;
        for (double v : chains[c]) var += (v - mean) * (v - mean);
        w += var / (static_cast<double>(n) - 1.0);
    }
    w /= static_cast<double>(m);
    if (w <= 0.0) throw std::invalid_argument("gelman_rubin: degenerate chains (zero within-chain variance)");

    double grand = 0.0;
    for (double v : means) grand += v;
    grand /= static_cast<double>(m);
    double var_means = 0.0;
    for (double v : means) var_means += (v - grand) * (v - grand);
    var_means /= (static_cast<double>(m) - 1.0);
    const double b = static_cast<double>(n) * var_means;

    const double nn = static_cast<double>(n);
    return std::sqrt(((nn - 1.0) / nn * w + b / nn) / w);
}

} // namespace icebreaker
