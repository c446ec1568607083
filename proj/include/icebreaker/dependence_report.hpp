#ifndef ICEBREAKER_DEPENDENCE_REPORT_HPP
#define ICEBREAKER_DEPENDENCE_REPORT_HPP

#include <string>

namespace icebreaker {

enum class MdsTest { Q, AVR, SPEC, NONLIN };

std::string mds_test_name(MdsTest t);
MdsTest mds_test_from_name(const std::string& name);

/// One row of the conditional-mean-independence report.
struct DependenceReport {
    MdsTest test = MdsTest::Q;
    double statistic = 0.0;
    double p_value = 1.0;
    int chosen_lag = 0;      // selected lag / bandwidth; 0 when not applicable
    int bootstrap_reps = 0;  // 0 when the p-value is analytic
    int window_from = 0;
    int window_to = 0;
    int dof = 0;             // chi-squared dof for analytic p-values
};

} // namespace icebreaker

#endif
