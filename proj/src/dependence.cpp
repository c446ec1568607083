#include "icebreaker/dependence.hpp"

#include "icebreaker/distributions.hpp"
#include "icebreaker/parallel.hpp"
#include "icebreaker/rng.hpp"
#include "icebreaker/series.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace icebreaker {

namespace {

void require_complete(const AnnualSeries& s, const char* who) {
    if (s.has_missing())
        throw std::invalid_argument(std::string(who) + ": series has missing values");
}

std::vector<double> centered(const std::vector<double>& y) {
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(y.size());
    std::vector<double> e(y.size());
    for (std::size_t t = 0; t < y.size(); ++t) e[t] = y[t] - mean;
    return e;
}

double sum_sq(const std::vector<double>& e) {
    double s = 0.0;
    for (double v : e) s += v * v;
    return s;
}

double draw_multiplier(Rng& rng, Multiplier m) {
    if (m == Multiplier::Normal) return rng.normal();
    // Mammen two-point multiplier
    static const double golden = (std::sqrt(5.0) + 1.0) / 2.0;
    static const double p_low = golden / std::sqrt(5.0);
    return rng.uniform() < p_low ? 1.0 - golden : golden;
}

} // namespace

std::string mds_test_name(MdsTest t) {
    switch (t) {
        case MdsTest::Q: return "Q";
        case MdsTest::AVR: return "AVR";
        case MdsTest::SPEC: return "SPEC";
        case MdsTest::NONLIN: return "NONLIN";
    }
    return "Q";
}

MdsTest mds_test_from_name(const std::string& name) {
    if (name == "Q") return MdsTest::Q;
    if (name == "AVR" || name == "VR") return MdsTest::AVR;
    if (name == "SPEC") return MdsTest::SPEC;
    if (name == "NONLIN") return MdsTest::NONLIN;
    throw std::invalid_argument("unknown dependence test '" + name + "'");
}

DependenceReport el_portmanteau(const std::vector<double>& y, std::size_t max_lag_bound) {
    const std::size_t n = y.size();
    if (n < 30) throw std::invalid_argument("el_portmanteau: need at least 30 observations");
    const std::size_t d =
        max_lag_bound > 0 ? max_lag_bound : static_cast<std::size_t>(std::floor(std::sqrt(n)));
    if (d >= n) throw std::invalid_argument("el_portmanteau: lag bound too large");

    const auto e = centered(y);
    if (sum_sq(e) <= 0.0) throw std::invalid_argument("el_portmanteau: constant series");

    // squared correlations self-normalized by the autocovariance of the
    // squared series; each term is asymptotically chi-squared(1)
    std::vector<double> term(d + 1, 0.0);
    for (std::size_t j = 1; j <= d; ++j) {
        double gamma = 0.0, tau = 0.0;
        for (std::size_t t = j; t < n; ++t) {
            gamma += e[t] * e[t - j];
            tau += e[t] * e[t] * e[t - j] * e[t - j];
        }
        term[j] = tau > 0.0 ? gamma * gamma / tau : 0.0;
    }

    const double tn = static_cast<double>(n);
    double max_term = 0.0;
    for (std::size_t j = 1; j <= d; ++j) max_term = std::max(max_term, term[j]);
    constexpr double kSwitch = 2.4;
    const bool bic_regime = max_term <= kSwitch * std::log(tn);

    std::size_t p_star = 1;
    double best = -1e300;
    double qsum = 0.0;
    double q_at_star = 0.0;
    for (std::size_t p = 1; p <= d; ++p) {
        qsum += term[p];
        const double penalty =
            bic_regime ? static_cast<double>(p) * std::log(tn) : 2.0 * static_cast<double>(p);
        const double value = qsum - penalty;
        if (value > best) {
            best = value;
            p_star = p;
            q_at_star = qsum;
        }
    }

    DependenceReport rep;
    rep.test = MdsTest::Q;
    rep.statistic = q_at_star;
    rep.chosen_lag = static_cast<int>(p_star);
    rep.dof = 1;
    rep.p_value = chi2_sf(q_at_star, 1.0);
    return rep;
}

DependenceReport el_portmanteau(const AnnualSeries& s, std::size_t max_lag_bound) {
    require_complete(s, "el_portmanteau");
    DependenceReport rep = el_portmanteau(s.values, max_lag_bound);
    rep.window_from = s.first_year;
    rep.window_to = s.last_year();
    return rep;
}

namespace {

// Standardized |AVR - 1| with the plug-in bandwidth; recomputed wholesale for
// every bootstrap resample.
struct AvrStat {
    double stat = 0.0;
    int bandwidth = 2;
};

AvrStat avr_statistic(const std::vector<double>& v) {
    const std::size_t n = v.size();
    const auto e = centered(v);
    const double denom = sum_sq(e);
    AvrStat out;
    if (denom <= 0.0) return out;

    double num1 = 0.0;
    for (std::size_t t = 1; t < n; ++t) num1 += e[t] * e[t - 1];
    const double rho1 = num1 / denom;
    const double alpha2 = 4.0 * rho1 * rho1 / std::pow(1.0 - rho1, 4.0);
    double praw = 1.3221 * std::pow(alpha2 * static_cast<double>(n), 0.2);
    if (!std::isfinite(praw)) praw = 2.0;
    const std::size_t p = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::lround(praw)), 2, n - 1);

    double avr = 1.0;
    for (std::size_t i = 1; i < p; ++i) {
        double num = 0.0;
        for (std::size_t t = i; t < n; ++t) num += e[t] * e[t - i];
        avr += 2.0 * (1.0 - static_cast<double>(i) / static_cast<double>(p)) * num / denom;
    }
    const double pd = static_cast<double>(p);
    const double var = 2.0 * (2.0 * pd - 1.0) * (pd - 1.0) / (3.0 * pd);
    out.stat = std::fabs(std::sqrt(static_cast<double>(n)) * (avr - 1.0) / std::sqrt(var));
    out.bandwidth = static_cast<int>(p);
    return out;
}

} // namespace

DependenceReport avr_test(const std::vector<double>& y, const BootstrapOptions& opt) {
    const std::size_t n = y.size();
    if (n < 30) throw std::invalid_argument("avr_test: need at least 30 observations");
    if (opt.reps == 0) throw std::invalid_argument("avr_test: need at least one bootstrap replicate");
    const auto e = centered(y);
    if (sum_sq(e) <= 0.0) throw std::invalid_argument("avr_test: constant series");

    const AvrStat obs = avr_statistic(y);

    std::vector<uint8_t> exceed(opt.reps, 0);
    parallel_for(opt.reps, [&](std::size_t r) {
        Rng rng = rng_stream(opt.seed, r);
        std::vector<double> star(n);
        for (std::size_t t = 0; t < n; ++t) star[t] = e[t] * draw_multiplier(rng, opt.multiplier);
        exceed[r] = avr_statistic(star).stat > obs.stat ? 1 : 0;
    });
    std::size_t count = 0;
    for (uint8_t b : exceed) count += b;

    DependenceReport rep;
    rep.test = MdsTest::AVR;
    rep.statistic = obs.stat;
    rep.chosen_lag = obs.bandwidth;
    rep.bootstrap_reps = static_cast<int>(opt.reps);
    rep.p_value = static_cast<double>(count) / static_cast<double>(opt.reps);
    return rep;
}

DependenceReport avr_test(const AnnualSeries& s, const BootstrapOptions& opt) {
    require_complete(s, "avr_test");
    DependenceReport rep = avr_test(s.values, opt);
    rep.window_from = s.first_year;
    rep.window_to = s.last_year();
    return rep;
}

DependenceReport gen_spectral(const std::vector<double>& y, const BootstrapOptions& opt) {
    const std::size_t n = y.size();
    if (n < 30) throw std::invalid_argument("gen_spectral: need at least 30 observations");
    if (opt.reps == 0) throw std::invalid_argument("gen_spectral: need at least one bootstrap replicate");

    auto e = centered(y);
    const double ss = sum_sq(e);
    if (ss <= 0.0) throw std::invalid_argument("gen_spectral: constant series");
    const double sd = std::sqrt(ss / static_cast<double>(n));
    for (double& v : e) v /= sd;

    // kernel of the normal integrating measure over conditioning values
    std::vector<double> kmat(n * n);
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = u; v < n; ++v) {
            const double d = e[u] - e[v];
            const double k = std::exp(-0.5 * d * d);
            kmat[u * n + v] = k;
            kmat[v * n + u] = k;
        }

    std::vector<double> cj(n, 0.0);
    for (std::size_t j = 1; j < n; ++j) {
        const double jd = static_cast<double>(j);
        cj[j] = 1.0 / (jd * jd * M_PI * M_PI * static_cast<double>(n - j));
    }

    // m[t][s] = sum_j c_j K[t-j][s-j]: the statistic is the quadratic form
    // e' M e, and every bootstrap replicate is the same form in the
    // recentred multiplied terms, so M is computed once
    std::vector<double> mmat(n * n, 0.0);
    parallel_for(n - 1, [&](std::size_t idx) {
        const std::size_t t = idx + 1;
        for (std::size_t s = t; s < n; ++s) {
            double acc = 0.0;
            for (std::size_t j = 1; j <= t; ++j) acc += cj[j] * kmat[(t - j) * n + (s - j)];
            mmat[t * n + s] = acc;
            mmat[s * n + t] = acc;
        }
    });
    std::vector<double> rowsum(n, 0.0);
    double total_m = 0.0;
    for (std::size_t t = 1; t < n; ++t) {
        double rs = 0.0;
        const double* row = mmat.data() + t * n;
        for (std::size_t s = 1; s < n; ++s) rs += row[s];
        rowsum[t] = rs;
        total_m += rs;
    }

    auto quad_form = [&](const std::vector<double>& z) {
        // recentre exactly as the observed terms were demeaned
        double zbar = 0.0;
        for (double v : z) zbar += v;
        zbar /= static_cast<double>(n);
        double d2 = 0.0, cross = 0.0;
        for (std::size_t t = 1; t < n; ++t) {
            double inner = 0.0;
            const double* row = mmat.data() + t * n;
            for (std::size_t s = 1; s < n; ++s) inner += z[s] * row[s];
            d2 += z[t] * inner;
            cross += z[t] * rowsum[t];
        }
        return d2 - 2.0 * zbar * cross + zbar * zbar * total_m;
    };

    const double d2_obs = quad_form(e); // e already has mean zero

    std::vector<uint8_t> exceed(opt.reps, 0);
    parallel_for(opt.reps, [&](std::size_t r) {
        Rng rng = rng_stream(opt.seed, r);
        std::vector<double> z(n);
        for (std::size_t t = 0; t < n; ++t) z[t] = e[t] * draw_multiplier(rng, opt.multiplier);
        exceed[r] = quad_form(z) > d2_obs ? 1 : 0;
    });
    std::size_t count = 0;
    for (uint8_t b : exceed) count += b;

    DependenceReport rep;
    rep.test = MdsTest::SPEC;
    rep.statistic = d2_obs;
    rep.bootstrap_reps = static_cast<int>(opt.reps);
    rep.p_value = static_cast<double>(count) / static_cast<double>(opt.reps);
    return rep;
}

DependenceReport gen_spectral(const AnnualSeries& s, const BootstrapOptions& opt) {
    require_complete(s, "gen_spectral");
    DependenceReport rep = gen_spectral(s.values, opt);
    rep.window_from = s.first_year;
    rep.window_to = s.last_year();
    return rep;
}

DependenceReport run_mds_test(const std::vector<double>& y, MdsTest test,
                              const BootstrapOptions& opt) {
    switch (test) {
        case MdsTest::Q: return el_portmanteau(y);
        case MdsTest::AVR: return avr_test(y, opt);
        case MdsTest::SPEC: return gen_spectral(y, opt);
        case MdsTest::NONLIN: return terasvirta_nonlinearity(y, 1);
    }
    throw std::invalid_argument("run_mds_test: unknown test");
}

DependenceReport residual_recheck(const std::vector<double>& y, MdsTest test,
                                  const BootstrapOptions& opt) {
    if (y.size() < 30) throw std::invalid_argument("residual_recheck: need at least 30 observations");
    std::vector<double> resid;
    ar1_fit(y, &resid);
    return run_mds_test(resid, test, opt);
}

DependenceReport residual_recheck(const AnnualSeries& s, MdsTest test,
                                  const BootstrapOptions& opt) {
    require_complete(s, "residual_recheck");
    DependenceReport rep = residual_recheck(s.values, test, opt);
    rep.window_from = s.first_year;
    rep.window_to = s.last_year();
    return rep;
}

} // namespace icebreaker
