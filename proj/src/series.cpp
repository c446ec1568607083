#include "icebreaker/series.hpp"

#include "icebreaker/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace icebreaker {

namespace {

void require_complete(const AnnualSeries& s, const char* who) {
    if (s.has_missing())
        throw std::invalid_argument(std::string(who) + ": series has missing values");
}

double mean_of(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m += x;
    return m / static_cast<double>(v.size());
}

// Householder QR with column pivoting. Columns whose pivot falls below
// tol * (largest pivot) are treated as dependent: either an error (allow_drop
// = false) or dropped from the fit with zero coefficient.
struct LstsqResult {
    std::vector<double> beta;
    std::vector<double> se;
    std::vector<uint8_t> kept;
    double ssr = 0.0;
    std::size_t rank = 0;
};

LstsqResult lstsq(const std::vector<double>& y, const std::vector<std::vector<double>>& columns,
                  bool allow_drop, double tol = 1e-10) {
    const std::size_t n = y.size();
    const std::size_t k = columns.size();
    if (k == 0) throw std::invalid_argument("ols: empty design");
    for (const auto& c : columns)
        if (c.size() != n) throw std::invalid_argument("ols: column length mismatch");
    if (n <= k) throw std::invalid_argument("ols: need more observations than regressors");

    std::vector<std::vector<double>> a = columns; // working copy, column-major
    std::vector<double> qty = y;
    std::vector<std::size_t> perm(k);
    for (std::size_t j = 0; j < k; ++j) perm[j] = j;

    std::vector<double> colnorm2(k);
    for (std::size_t j = 0; j < k; ++j) {
        double s = 0.0;
        for (double v : a[j]) s += v * v;
        colnorm2[j] = s;
    }

    std::vector<std::vector<double>> r(k, std::vector<double>(k, 0.0));
    double pivot0 = 0.0;
    std::size_t rank = k;
    for (std::size_t j = 0; j < k; ++j) {
        // pivot: remaining column with the largest residual norm
        std::size_t best = j;
        for (std::size_t m = j + 1; m < k; ++m)
            if (colnorm2[m] > colnorm2[best]) best = m;
        if (best != j) {
            std::swap(a[j], a[best]);
            std::swap(colnorm2[j], colnorm2[best]);
            std::swap(perm[j], perm[best]);
            for (std::size_t i = 0; i < j; ++i) std::swap(r[i][j], r[i][best]);
        }

        double norm = 0.0;
        for (std::size_t i = j; i < n; ++i) norm += a[j][i] * a[j][i];
        norm = std::sqrt(norm);
        if (j == 0) pivot0 = norm;
        if (norm <= tol * pivot0 || norm == 0.0) {
            rank = j;
            break;
        }
        if (a[j][j] > 0.0) norm = -norm;
        for (std::size_t i = j; i < n; ++i) a[j][i] /= norm;
        a[j][j] -= 1.0;
        // apply reflector to the remaining columns and to y
        for (std::size_t m = j + 1; m < k; ++m) {
            double dot = 0.0;
            for (std::size_t i = j; i < n; ++i) dot += a[j][i] * a[m][i];
            dot /= a[j][j];
            for (std::size_t i = j; i < n; ++i) a[m][i] += dot * a[j][i];
        }
        double dot = 0.0;
        for (std::size_t i = j; i < n; ++i) dot += a[j][i] * qty[i];
        dot /= a[j][j];
        for (std::size_t i = j; i < n; ++i) qty[i] += dot * a[j][i];

        r[j][j] = norm;
        for (std::size_t m = j + 1; m < k; ++m) {
            r[j][m] = a[m][j];
            colnorm2[m] -= a[m][j] * a[m][j];
            if (colnorm2[m] < 0.0) colnorm2[m] = 0.0;
        }
    }

    if (rank < k && !allow_drop) throw std::invalid_argument("ols: design matrix is rank deficient");

    const std::size_t kr = rank;
    std::vector<double> beta_p(kr, 0.0);
    for (std::size_t j = kr; j-- > 0;) {
        double s = qty[j];
        for (std::size_t m = j + 1; m < kr; ++m) s -= r[j][m] * beta_p[m];
        beta_p[j] = s / r[j][j];
    }

    double ssr = 0.0;
    for (std::size_t i = kr; i < n; ++i) ssr += qty[i] * qty[i];

    // invert the leading kr x kr block of R for the covariance diagonal
    std::vector<std::vector<double>> rinv(kr, std::vector<double>(kr, 0.0));
    for (std::size_t j = 0; j < kr; ++j) {
        rinv[j][j] = 1.0 / r[j][j];
        for (std::size_t i = j; i-- > 0;) {
            double s = 0.0;
            for (std::size_t m = i + 1; m <= j; ++m) s += r[i][m] * rinv[m][j];
            rinv[i][j] = -s / r[i][i];
        }
    }
    const double dof = static_cast<double>(n - kr);
    const double s2 = ssr / dof;

    LstsqResult out;
    out.beta.assign(k, 0.0);
    out.se.assign(k, 0.0);
    out.kept.assign(k, 0);
    out.ssr = ssr;
    out.rank = kr;
    for (std::size_t j = 0; j < kr; ++j) {
        double rowsq = 0.0;
        for (std::size_t m = j; m < kr; ++m) rowsq += rinv[j][m] * rinv[j][m];
        out.beta[perm[j]] = beta_p[j];
        out.se[perm[j]] = std::sqrt(s2 * rowsq);
        out.kept[perm[j]] = 1;
    }
    return out;
}

RegressionFit fit_from(const LstsqResult& ls, const std::vector<double>& y) {
    RegressionFit fit;
    fit.coefficients = ls.beta;
    fit.std_errors = ls.se;
    fit.n = y.size();
    const double dof = static_cast<double>(y.size() - ls.rank);
    fit.rmse = std::sqrt(ls.ssr / dof);
    const double ybar = mean_of(y);
    double sst = 0.0;
    for (double v : y) sst += (v - ybar) * (v - ybar);
    fit.r2 = sst > 0.0 ? 1.0 - ls.ssr / sst : 0.0;
    fit.r2 = std::clamp(fit.r2, 0.0, 1.0);
    return fit;
}

} // namespace

AcfResult acf(const std::vector<double>& y, std::size_t max_lag) {
    const std::size_t n = y.size();
    if (max_lag == 0) throw std::invalid_argument("acf: max_lag must be positive");
    if (max_lag >= n) throw std::invalid_argument("acf: max_lag must be smaller than the series");
    const double ybar = mean_of(y);
    double denom = 0.0;
    for (double v : y) denom += (v - ybar) * (v - ybar);
    if (denom <= 0.0) throw std::invalid_argument("acf: constant series");
    AcfResult out;
    out.n = n;
    out.rho.resize(max_lag);
    for (std::size_t i = 1; i <= max_lag; ++i) {
        double num = 0.0;
        for (std::size_t t = i; t < n; ++t) num += (y[t] - ybar) * (y[t - i] - ybar);
        out.rho[i - 1] = num / denom;
    }
    return out;
}

AcfResult acf(const AnnualSeries& s, std::size_t max_lag) {
    require_complete(s, "acf");
    return acf(s.values, max_lag);
}

RegressionFit ols(const std::vector<double>& y, const std::vector<std::vector<double>>& columns) {
    return fit_from(lstsq(y, columns, /*allow_drop=*/false), y);
}

RegressionFit ar1_trend_fit(const std::vector<double>& y) {
    const std::size_t n = y.size();
    if (n < 10) throw std::invalid_argument("ar1_trend_fit: need at least 10 observations");
    std::vector<double> resp(y.begin() + 1, y.end());
    std::vector<double> ones(n - 1, 1.0);
    std::vector<double> lag(y.begin(), y.end() - 1);
    std::vector<double> trend(n - 1);
    for (std::size_t t = 0; t < n - 1; ++t) trend[t] = static_cast<double>(t + 1);

    const double lbar = mean_of(lag);
    double lvar = 0.0;
    for (double v : lag) lvar += (v - lbar) * (v - lbar);
    if (lvar <= 1e-24)
        throw std::invalid_argument("ar1_trend_fit: lag column collinear with intercept");

    // A perfectly linear series makes the lag a combination of intercept and
    // trend; the fit then degenerates to trend-only with beta = 0.
    const LstsqResult ls = lstsq(resp, {ones, lag, trend}, /*allow_drop=*/true);
    return fit_from(ls, resp);
}

RegressionFit ar1_trend_fit(const AnnualSeries& s) {
    require_complete(s, "ar1_trend_fit");
    return ar1_trend_fit(s.values);
}

RegressionFit ar1_fit(const std::vector<double>& y, std::vector<double>* residuals) {
    const std::size_t n = y.size();
    if (n < 3) throw std::invalid_argument("ar1_fit: series too short");
    std::vector<double> resp(y.begin() + 1, y.end());
    std::vector<double> ones(n - 1, 1.0);
    std::vector<double> lag(y.begin(), y.end() - 1);
    const LstsqResult ls = lstsq(resp, {ones, lag}, /*allow_drop=*/false);
    RegressionFit fit = fit_from(ls, resp);
    if (residuals) {
        residuals->resize(n - 1);
        for (std::size_t t = 0; t < n - 1; ++t)
            (*residuals)[t] = resp[t] - ls.beta[0] - ls.beta[1] * lag[t];
    }
    return fit;
}

DependenceReport terasvirta_nonlinearity(const std::vector<double>& y, std::size_t p) {
    const std::size_t n = y.size();
    if (n < 30) throw std::invalid_argument("terasvirta_nonlinearity: need at least 30 observations");
    if (p < 1) throw std::invalid_argument("terasvirta_nonlinearity: lag order must be >= 1");

    const std::size_t rows = n - p;
    std::vector<double> resp(rows);
    std::vector<std::vector<double>> lags(p, std::vector<double>(rows));
    for (std::size_t t = 0; t < rows; ++t) {
        resp[t] = y[t + p];
        for (std::size_t j = 0; j < p; ++j) lags[j][t] = y[t + p - 1 - j];
    }
    std::vector<std::vector<double>> base;
    base.push_back(std::vector<double>(rows, 1.0));
    for (auto& l : lags) base.push_back(l);

    const LstsqResult ar = lstsq(resp, base, /*allow_drop=*/false);
    std::vector<double> resid(rows);
    for (std::size_t t = 0; t < rows; ++t) {
        double fit = 0.0;
        for (std::size_t j = 0; j < base.size(); ++j) fit += ar.beta[j] * base[j][t];
        resid[t] = resp[t] - fit;
    }

    // auxiliary design: AR regressors plus quadratic and cubic lag products
    std::vector<std::vector<double>> aux = base;
    std::size_t added = 0;
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = i; j < p; ++j) {
            std::vector<double> c(rows);
            for (std::size_t t = 0; t < rows; ++t) c[t] = lags[i][t] * lags[j][t];
            aux.push_back(std::move(c));
            ++added;
        }
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = i; j < p; ++j)
            for (std::size_t m = j; m < p; ++m) {
                std::vector<double> c(rows);
                for (std::size_t t = 0; t < rows; ++t) c[t] = lags[i][t] * lags[j][t] * lags[m][t];
                aux.push_back(std::move(c));
                ++added;
            }

    const LstsqResult af = lstsq(resid, aux, /*allow_drop=*/true);
    std::size_t kept_added = 0;
    for (std::size_t j = base.size(); j < aux.size(); ++j)
        if (af.kept[j]) ++kept_added;
    if (kept_added == 0)
        throw std::invalid_argument("terasvirta_nonlinearity: auxiliary design fully collinear");

    const double ubar = mean_of(resid);
    double sst = 0.0;
    for (double u : resid) sst += (u - ubar) * (u - ubar);
    if (sst <= 0.0) throw std::invalid_argument("terasvirta_nonlinearity: degenerate residuals");
    const double r2 = std::clamp(1.0 - af.ssr / sst, 0.0, 1.0);

    DependenceReport rep;
    rep.test = MdsTest::NONLIN;
    rep.statistic = static_cast<double>(rows) * r2;
    rep.dof = static_cast<int>(kept_added);
    rep.p_value = chi2_sf(rep.statistic, static_cast<double>(rep.dof));
    rep.chosen_lag = static_cast<int>(p);
    return rep;
}

DependenceReport terasvirta_nonlinearity(const AnnualSeries& s, std::size_t p) {
    require_complete(s, "terasvirta_nonlinearity");
    DependenceReport rep = terasvirta_nonlinearity(s.values, p);
    rep.window_from = s.first_year;
    rep.window_to = s.last_year();
    return rep;
}

} // namespace icebreaker
