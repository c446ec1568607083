#include "icebreaker/smoothing.hpp"

#include "icebreaker/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace icebreaker {

namespace {

void require_complete(const AnnualSeries& s, const char* who) {
    if (s.has_missing())
        throw std::invalid_argument(std::string(who) + ": series has missing values");
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Weighted polynomial fit evaluated at x = 0; x holds offsets from the
// evaluation point. Gaussian elimination with partial pivoting on the
// normal equations (degree + 1 <= 4, conditioning is benign after centering).
double wls_fit_at_zero(const std::vector<double>& x, const std::vector<double>& y,
                       const std::vector<double>& w, int degree) {
    const int k = degree + 1;
    double xtx[4][4] = {};
    double xty[4] = {};
    for (std::size_t t = 0; t < x.size(); ++t) {
        if (w[t] <= 0.0) continue;
        double pows[7];
        pows[0] = 1.0;
        for (int p = 1; p <= 2 * degree; ++p) pows[p] = pows[p - 1] * x[t];
        for (int i = 0; i < k; ++i) {
            for (int j = 0; j < k; ++j) xtx[i][j] += w[t] * pows[i + j];
            xty[i] += w[t] * pows[i] * y[t];
        }
    }
    int perm[4] = {0, 1, 2, 3};
    for (int col = 0; col < k; ++col) {
        int piv = col;
        for (int r = col + 1; r < k; ++r)
            if (std::fabs(xtx[r][col]) > std::fabs(xtx[piv][col])) piv = r;
        if (std::fabs(xtx[piv][col]) < 1e-300)
            throw std::runtime_error("loess_smooth: singular local fit");
        if (piv != col) {
            for (int j = 0; j < k; ++j) std::swap(xtx[col][j], xtx[piv][j]);
            std::swap(xty[col], xty[piv]);
            std::swap(perm[col], perm[piv]);
        }
        for (int r = col + 1; r < k; ++r) {
            const double f = xtx[r][col] / xtx[col][col];
            for (int j = col; j < k; ++j) xtx[r][j] -= f * xtx[col][j];
            xty[r] -= f * xty[col];
        }
    }
    double beta[4] = {};
    for (int r = k - 1; r >= 0; --r) {
        double s = xty[r];
        for (int j = r + 1; j < k; ++j) s -= xtx[r][j] * beta[j];
        beta[r] = s / xtx[r][r];
    }
    return beta[0]; // value at x = 0 is the intercept
}

} // namespace

SmoothedSeries moving_average(const AnnualSeries& s, std::size_t m) {
    require_complete(s, "moving_average");
    const std::size_t n = s.size();
    if (m < 2) throw std::invalid_argument("moving_average: window must be at least 2");
    if (m > n) throw std::invalid_argument("moving_average: window longer than the series");

    const std::size_t left = m / 2;
    const std::size_t right = m - 1 - left;

    SmoothedSeries out;
    out.source_name = s.name;
    out.method = "ma(" + std::to_string(m) + ")";
    out.first_year = s.first_year;
    out.values.assign(n, kNaN);
    out.valid.assign(n, 0);
    double window_sum = 0.0;
    for (std::size_t t = 0; t < m; ++t) window_sum += s.values[t];
    for (std::size_t i = left; i + right < n; ++i) {
        out.values[i] = window_sum / static_cast<double>(m);
        out.valid[i] = 1;
        if (i + right + 1 < n) window_sum += s.values[i + right + 1] - s.values[i - left];
    }
    return out;
}

SmoothedSeries loess_smooth(const AnnualSeries& s, double span, int degree) {
    require_complete(s, "loess_smooth");
    const std::size_t n = s.size();
    if (span <= 0.0 || span > 1.0) throw std::invalid_argument("loess_smooth: span must be in (0,1]");
    if (degree < 1 || degree > 3) throw std::invalid_argument("loess_smooth: degree must be 1..3");
    const std::size_t k = static_cast<std::size_t>(std::ceil(span * static_cast<double>(n)));
    if (k < static_cast<std::size_t>(degree) + 2)
        throw std::invalid_argument("loess_smooth: window smaller than degree + 2");

    SmoothedSeries out;
    out.source_name = s.name;
    out.method = "loess(" + std::to_string(span) + ")";
    out.first_year = s.first_year;
    out.values.resize(n);
    out.valid.assign(n, 1);

    std::vector<double> xs, ys, ws;
    for (std::size_t i = 0; i < n; ++i) {
        // k nearest neighbors; the window grows toward the nearer side,
        // truncating at the edges
        std::size_t lo = i, hi = i;
        while (hi - lo + 1 < k) {
            const bool can_left = lo > 0;
            const bool can_right = hi + 1 < n;
            if (can_left && (!can_right || i - (lo - 1) <= (hi + 1) - i)) --lo;
            else ++hi;
        }
        const double dmax = static_cast<double>(std::max(i - lo, hi - i));
        xs.clear();
        ys.clear();
        ws.clear();
        for (std::size_t t = lo; t <= hi; ++t) {
            const double d = std::fabs(static_cast<double>(t) - static_cast<double>(i)) / dmax;
            const double u = 1.0 - d * d * d;
            const double w = u > 0.0 ? u * u * u : 0.0;
            if (w <= 0.0) continue;
            xs.push_back(static_cast<double>(t) - static_cast<double>(i));
            ys.push_back(s.values[t]);
            ws.push_back(w);
        }
        out.values[i] = wls_fit_at_zero(xs, ys, ws, degree);
    }
    return out;
}

double ma_transfer(std::size_t m, double omega) {
    if (m < 2) throw std::invalid_argument("ma_transfer: window must be at least 2");
    if (omega < 0.0 || omega > M_PI) throw std::invalid_argument("ma_transfer: omega outside [0, pi]");
    const double md = static_cast<double>(m);
    if (omega < 1e-9) return 1.0; // analytic limit
    const double num = std::sin(md * omega / 2.0);
    const double den = md * std::sin(omega / 2.0);
    const double r = num / den;
    return r * r;
}

TransferPeak ma_transfer_peak(std::size_t m) {
    const double first_null = 2.0 * M_PI / static_cast<double>(m);
    const double lo = first_null;
    const double hi = M_PI;
    const int grid = 20000;
    double best_x = lo, best_f = -1.0;
    for (int i = 1; i < grid; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / grid;
        const double f = ma_transfer(m, x);
        if (f > best_f) {
            best_f = f;
            best_x = x;
        }
    }
    // golden-section refinement around the grid maximum
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = std::max(lo, best_x - (hi - lo) / grid * 2.0);
    double b = std::min(hi, best_x + (hi - lo) / grid * 2.0);
    double c = b - gr * (b - a);
    double d = a + gr * (b - a);
    for (int it = 0; it < 200 && b - a > 1e-12; ++it) {
        if (ma_transfer(m, c) > ma_transfer(m, d)) {
            b = d;
        } else {
            a = c;
        }
        c = b - gr * (b - a);
        d = a + gr * (b - a);
    }
    TransferPeak peak;
    peak.omega = 0.5 * (a + b);
    peak.period = 2.0 * M_PI / peak.omega;
    peak.gain = ma_transfer(m, peak.omega);
    return peak;
}

SlutskyBundle slutsky_demo(const SlutskyOptions& opt) {
    if (opt.n < 100) throw std::invalid_argument("slutsky_demo: need n >= 100");
    SlutskyBundle out;
    out.raw.name = "white-noise";
    out.raw.season = Season::Raw;
    out.raw.first_year = 1;
    out.raw.unit = "sd";
    Rng rng = rng_stream(opt.seed, 0);
    out.raw.values = rng.normals(opt.n);
    out.raw.missing.assign(opt.n, 0);

    for (std::size_t m : opt.ma_windows) out.ma.push_back(moving_average(out.raw, m));
    out.loess = loess_smooth(out.raw, opt.loess_span, 2);

    BcpOptions bcp = opt.bcp;
    bcp.seed = opt.seed;
    const BcpResult posterior = barry_hartigan(out.raw.values, bcp);
    out.bh_posterior_mean = posterior.posterior_mean;
    out.bh_change_prob = posterior.change_prob;
    return out;
}

} // namespace icebreaker
