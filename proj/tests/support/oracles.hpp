// Independent reference implementations used by the unit and acceptance
// suites. Everything here deliberately avoids the library's own numerical
// paths: integrals are brute-force quadrature, optima are exhaustive
// enumeration, fits are solved by Cramer's rule.
#ifndef ICEBREAKER_TESTS_ORACLES_HPP
#define ICEBREAKER_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace oracles {

// ---------------------------------------------------------------------------
// exhaustive mean-shift partition search (admissible segment length >= h)

struct BpOracleResult {
    double ssr = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> breaks; // last index of each non-final segment
};

inline double segment_ssr(const std::vector<double>& y, std::size_t a, std::size_t b) {
    double mean = 0.0;
    for (std::size_t t = a; t <= b; ++t) mean += y[t];
    mean /= static_cast<double>(b - a + 1);
    double ssr = 0.0;
    for (std::size_t t = a; t <= b; ++t) ssr += (y[t] - mean) * (y[t] - mean);
    return ssr;
}

// all partitions with exactly k breaks, k <= 2; lexicographically earliest
// break vector wins ties
inline BpOracleResult bp_enumerate(const std::vector<double>& y, std::size_t h, std::size_t k) {
    const std::size_t n = y.size();
    BpOracleResult best;
    if (k == 0) {
        best.ssr = segment_ssr(y, 0, n - 1);
        return best;
    }
    if (k == 1) {
        for (std::size_t b = h - 1; b + h <= n - 1; ++b) {
            const double ssr = segment_ssr(y, 0, b) + segment_ssr(y, b + 1, n - 1);
            if (ssr < best.ssr) {
                best.ssr = ssr;
                best.breaks = {b};
            }
        }
        return best;
    }
    if (k == 2) {
        for (std::size_t b1 = h - 1; b1 + 2 * h <= n - 1; ++b1)
            for (std::size_t b2 = b1 + h; b2 + h <= n - 1; ++b2) {
                const double ssr = segment_ssr(y, 0, b1) + segment_ssr(y, b1 + 1, b2) +
                                   segment_ssr(y, b2 + 1, n - 1);
                if (ssr < best.ssr) {
                    best.ssr = ssr;
                    best.breaks = {b1, b2};
                }
            }
        return best;
    }
    throw std::invalid_argument("bp_enumerate supports k <= 2");
}

// ---------------------------------------------------------------------------
// direct tri-cube weighted quadratic fit at one position (Cramer's rule)

inline double loess_oracle_at(const std::vector<double>& y, double span, std::size_t i) {
    const std::size_t n = y.size();
    const std::size_t k = static_cast<std::size_t>(std::ceil(span * static_cast<double>(n)));
    std::size_t lo = i, hi = i;
    while (hi - lo + 1 < k) {
        const bool can_left = lo > 0;
        const bool can_right = hi + 1 < n;
        if (can_left && (!can_right || i - (lo - 1) <= (hi + 1) - i)) --lo;
        else ++hi;
    }
    const double dmax = static_cast<double>(std::max(i - lo, hi - i));
    double s00 = 0, s01 = 0, s02 = 0, s03 = 0, s04 = 0;
    double b0 = 0, b1 = 0, b2 = 0;
    for (std::size_t t = lo; t <= hi; ++t) {
        const double x = static_cast<double>(t) - static_cast<double>(i);
        const double d = std::fabs(x) / dmax;
        if (d >= 1.0) continue;
        const double u = 1.0 - d * d * d;
        const double w = u * u * u;
        const double x2 = x * x;
        s00 += w;
        s01 += w * x;
        s02 += w * x2;
        s03 += w * x2 * x;
        s04 += w * x2 * x2;
        b0 += w * y[t];
        b1 += w * x * y[t];
        b2 += w * x2 * y[t];
    }
    // solve [s00 s01 s02; s01 s02 s03; s02 s03 s04] beta = [b0 b1 b2]
    const double det = s00 * (s02 * s04 - s03 * s03) - s01 * (s01 * s04 - s03 * s02) +
                       s02 * (s01 * s03 - s02 * s02);
    const double det0 = b0 * (s02 * s04 - s03 * s03) - s01 * (b1 * s04 - s03 * b2) +
                        s02 * (b1 * s03 - s02 * b2);
    return det0 / det;
}

// ---------------------------------------------------------------------------
// exact posterior of the product-partition model by enumeration (n <= 20)

struct BhOracleResult {
    std::vector<double> posterior_mean;
    std::vector<double> change_prob;
};

namespace detail {

inline double simpson(const std::vector<double>& f, double h) {
    // composite Simpson over an even number of intervals
    double s = f.front() + f.back();
    for (std::size_t i = 1; i + 1 < f.size(); ++i) s += f[i] * (i % 2 == 1 ? 4.0 : 2.0);
    return s * h / 3.0;
}

// integral_0^cap w^a (W + B w)^(-c) dw by brute quadrature in log space
inline double w_integral(double a, double c, double W, double B, double cap, int points = 400) {
    std::vector<double> f(points + 1);
    const double h = cap / points;
    double emax = -std::numeric_limits<double>::infinity();
    std::vector<double> expo(points + 1);
    for (int i = 0; i <= points; ++i) {
        const double w = h * i;
        expo[i] = (w <= 0.0 && a > 0.0) ? -std::numeric_limits<double>::infinity()
                                        : a * std::log(std::max(w, 1e-300)) - c * std::log(W + B * w);
        emax = std::max(emax, expo[i]);
    }
    for (int i = 0; i <= points; ++i) f[i] = std::exp(expo[i] - emax);
    return simpson(f, h) * std::exp(emax);
}

inline double p_integral(double b, double n, double cap, int points = 400) {
    std::vector<double> f(points + 1);
    const double h = cap / points;
    for (int i = 0; i <= points; ++i) {
        const double p = std::max(h * i, 1e-300);
        f[i] = std::pow(p, b - 1.0) * std::pow(1.0 - p, n - b);
    }
    return simpson(f, h);
}

} // namespace detail

inline BhOracleResult bh_enumerate(const std::vector<double>& y, double p0, double w0) {
    const std::size_t n = y.size();
    if (n > 22) throw std::invalid_argument("bh_enumerate: series too long to enumerate");
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(n);
    std::vector<double> e(n);
    double ss_tot = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        e[t] = y[t] - mean;
        ss_tot += e[t] * e[t];
    }
    const double c = (static_cast<double>(n) - 1.0) / 2.0;

    std::vector<double> p_int(n + 1);
    for (std::size_t b = 1; b <= n; ++b)
        p_int[b] = detail::p_integral(static_cast<double>(b), static_cast<double>(n), p0);

    BhOracleResult out;
    out.posterior_mean.assign(n, 0.0);
    out.change_prob.assign(n, 0.0);
    double total = 0.0;

    const uint32_t masks = 1u << (n - 1);
    std::vector<double> block_mean(n);
    for (uint32_t mask = 0; mask < masks; ++mask) {
        std::size_t b = 0;
        double W = 0.0, B = 0.0;
        std::size_t start = 0;
        for (std::size_t cut = 1; cut <= n; ++cut) {
            const bool boundary = cut == n || (mask >> (cut - 1)) & 1u;
            if (!boundary) continue;
            ++b;
            double s = 0.0;
            for (std::size_t t = start; t < cut; ++t) s += e[t];
            const double bm = s / static_cast<double>(cut - start);
            for (std::size_t t = start; t < cut; ++t) {
                block_mean[t] = bm;
                W += (e[t] - bm) * (e[t] - bm);
            }
            B += s * s / static_cast<double>(cut - start);
            start = cut;
        }
        W = std::max(W, 1e-12 * ss_tot);
        const double bd = static_cast<double>(b);
        const double weight =
            p_int[b] * detail::w_integral((bd - 1.0) / 2.0, c, W, B, w0);
        const double what = detail::w_integral((bd + 1.0) / 2.0, c, W, B, w0) /
                            detail::w_integral((bd - 1.0) / 2.0, c, W, B, w0);
        total += weight;
        for (std::size_t t = 0; t < n; ++t)
            out.posterior_mean[t] += weight * (1.0 - what) * block_mean[t];
        for (std::size_t cut = 1; cut < n; ++cut)
            if ((mask >> (cut - 1)) & 1u) out.change_prob[cut] += weight;
    }
    for (std::size_t t = 0; t < n; ++t) out.posterior_mean[t] = out.posterior_mean[t] / total + mean;
    for (std::size_t t = 0; t < n; ++t) out.change_prob[t] /= total;
    return out;
}

// ---------------------------------------------------------------------------
// Kolmogorov-Smirnov uniformity check

inline double ks_uniform_pvalue(std::vector<double> pvals) {
    std::sort(pvals.begin(), pvals.end());
    const double n = static_cast<double>(pvals.size());
    double d = 0.0;
    for (std::size_t i = 0; i < pvals.size(); ++i) {
        const double f = static_cast<double>(i + 1) / n;
        const double f0 = static_cast<double>(i) / n;
        d = std::max(d, std::max(std::fabs(f - pvals[i]), std::fabs(pvals[i] - f0)));
    }
    const double lambda = d * (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n));
    double q = 0.0;
    for (int k = 1; k <= 100; ++k)
        q += 2.0 * (k % 2 == 1 ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
    return std::clamp(q, 0.0, 1.0);
}

} // namespace oracles

#endif
