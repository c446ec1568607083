#ifndef ICEBREAKER_SIM_HPP
#define ICEBREAKER_SIM_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "icebreaker/dependence.hpp"

namespace icebreaker {

enum class Detector { BP, CBS, BCP };

std::string detector_name(Detector d);
Detector detector_from_name(const std::string& name);

/// One mean-shift segment of a simulated series; the noise is always unit
/// normal around the segment mean.
struct SimSegment {
    std::size_t length = 0;
    double mean = 0.0;
};

struct PowerScenario {
    std::size_t n = 0;
    std::vector<SimSegment> segments; // lengths must sum to n
    Detector detector = Detector::BP;
    std::size_t replicates = 1000;
    uint64_t seed = 1;

    // detector settings
    double bp_min_seg_frac = 0.15;
    std::size_t bp_k_max = 5;
    double cbs_alpha = 0.01;
    std::size_t cbs_n_perm = 1000;
    // detection rule for the Bayesian detector: posterior change probability
    // of at least bcp_threshold within +/- bcp_locality of a true break
    double bcp_threshold = 0.15;
    std::size_t bcp_locality = 10;
};

struct PowerResult {
    PowerScenario scenario;
    double detection_rate = 0.0;
    double mc_stderr = 0.0;
};

/// Runs the scenario: per replicate, simulate unit-noise data around the
/// segment means, run the detector, and record a detection. Null scenarios
/// (no shift between segments) count any reported break as a false positive.
PowerResult run_power(const PowerScenario& sc);

/// Rejection frequency of a dependence test on iid standard normal data.
PowerResult run_size(MdsTest test, std::size_t n, std::size_t replicates, double level,
                     uint64_t seed);

/// Parses the declarative scenario format: one `key = value` pair per line,
/// with keys n, segments (length:mean pairs separated by commas), detector,
/// replicates, seed. Lines starting with # are comments.
PowerScenario parse_scenario(const std::string& text);

std::string serialize_scenario(const PowerScenario& sc);

} // namespace icebreaker

#endif
