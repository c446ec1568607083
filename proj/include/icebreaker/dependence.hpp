#ifndef ICEBREAKER_DEPENDENCE_HPP
#define ICEBREAKER_DEPENDENCE_HPP

#include <cstdint>
#include <vector>

#include "icebreaker/annual_series.hpp"
#include "icebreaker/dependence_report.hpp"

namespace icebreaker {

enum class Multiplier { Normal, Mammen };

struct BootstrapOptions {
    std::size_t reps = 500;
    uint64_t seed = 1;
    Multiplier multiplier = Multiplier::Normal;
};

/// Heteroskedasticity-robust portmanteau with automatic lag selection: the
/// squared correlations are normalized by autocovariances of the squared
/// series, the lag maximizes the penalized statistic (the penalty switches
/// between log T and 2 per lag, switch constant q = 2.4), and the statistic
/// refers to chi-squared with one degree of freedom.
DependenceReport el_portmanteau(const AnnualSeries& s, std::size_t max_lag_bound = 0);
DependenceReport el_portmanteau(const std::vector<double>& y, std::size_t max_lag_bound = 0);

/// Automatic variance ratio test: Bartlett-weighted variance ratio at a
/// plug-in bandwidth, |standardized AVR - 1| referred to a wild bootstrap.
DependenceReport avr_test(const AnnualSeries& s, const BootstrapOptions& opt = {});
DependenceReport avr_test(const std::vector<double>& y, const BootstrapOptions& opt = {});

/// Generalized spectral test: Cramer-von Mises distance of the exponentially
/// weighted generalized spectral distribution from its martingale-difference
/// null, evaluated in closed form and referred to a wild bootstrap. Inputs
/// are standardized so the statistic is unit-free.
DependenceReport gen_spectral(const AnnualSeries& s, const BootstrapOptions& opt = {});
DependenceReport gen_spectral(const std::vector<double>& y, const BootstrapOptions& opt = {});

/// Fits an AR(1), then runs the named test on its residuals.
DependenceReport residual_recheck(const AnnualSeries& s, MdsTest test,
                                  const BootstrapOptions& opt = {});
DependenceReport residual_recheck(const std::vector<double>& y, MdsTest test,
                                  const BootstrapOptions& opt = {});

/// Dispatch by test id (NONLIN runs the nonlinearity test at lag 1).
DependenceReport run_mds_test(const std::vector<double>& y, MdsTest test,
                              const BootstrapOptions& opt = {});

} // namespace icebreaker

#endif
