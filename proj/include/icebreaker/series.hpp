#ifndef ICEBREAKER_SERIES_HPP
#define ICEBREAKER_SERIES_HPP

#include <vector>

#include "icebreaker/annual_series.hpp"
#include "icebreaker/dependence_report.hpp"

namespace icebreaker {

struct AcfResult {
    std::vector<double> rho; // rho[i-1] is the lag-i autocorrelation
    std::size_t n = 0;
};

struct RegressionFit {
    std::vector<double> coefficients;
    std::vector<double> std_errors;
    double rmse = 0.0;
    double r2 = 0.0;
    std::size_t n = 0;
};

/// Sample autocorrelations up to max_lag; lag-0 variance in the denominator.
AcfResult acf(const AnnualSeries& s, std::size_t max_lag);
AcfResult acf(const std::vector<double>& y, std::size_t max_lag);

/// Least squares of y on the given columns. Classical standard errors with
/// n-k denominator; r2 against the intercept-only model. Rank-deficient
/// designs throw.
RegressionFit ols(const std::vector<double>& y, const std::vector<std::vector<double>>& columns);

/// Fit y_t = alpha + beta * y_{t-1} + gamma * t, trend counted from 1 at the
/// second observation. Coefficients ordered (alpha, beta, gamma).
RegressionFit ar1_trend_fit(const AnnualSeries& s);
RegressionFit ar1_trend_fit(const std::vector<double>& y);

/// AR(1) without trend; coefficients (alpha, beta). Residuals returned when
/// requested (aligned to observations 2..T).
RegressionFit ar1_fit(const std::vector<double>& y, std::vector<double>* residuals = nullptr);

/// Nonlinearity-in-mean test: fit a linear AR(p), regress its residuals on
/// the AR regressors plus all quadratic and cubic products of the lags, and
/// refer T*R^2 of that auxiliary regression to chi-squared. Collinear
/// auxiliary columns are dropped with the dof reduced to match.
DependenceReport terasvirta_nonlinearity(const AnnualSeries& s, std::size_t p = 1);
DependenceReport terasvirta_nonlinearity(const std::vector<double>& y, std::size_t p = 1);

} // namespace icebreaker

#endif
