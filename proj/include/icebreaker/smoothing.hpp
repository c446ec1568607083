#ifndef ICEBREAKER_SMOOTHING_HPP
#define ICEBREAKER_SMOOTHING_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "icebreaker/annual_series.hpp"
#include "icebreaker/bayes.hpp"

namespace icebreaker {

/// Smoother output aligned to the source years; valid is false wherever a
/// full moving-average window is unavailable.
struct SmoothedSeries {
    std::string source_name;
    std::string method;
    int first_year = 1;
    std::vector<double> values;
    std::vector<uint8_t> valid;
};

/// Centered moving average of m consecutive values: floor(m/2) neighbors on
/// the left, m-1-floor(m/2) on the right; no padding or window shrinking.
SmoothedSeries moving_average(const AnnualSeries& s, std::size_t m);

/// Local polynomial smoother: at each position, a weighted least-squares fit
/// of the given degree over the ceil(span*T) nearest neighbors with tri-cube
/// weights; windows truncate at the edges.
SmoothedSeries loess_smooth(const AnnualSeries& s, double span = 1.0 / 3.0, int degree = 2);

/// Power gain of an m-term moving average at angular frequency omega,
/// (1 - cos m*omega) / (m^2 (1 - cos omega)); the omega -> 0 limit is 1.
double ma_transfer(std::size_t m, double omega);

struct TransferPeak {
    double omega = 0.0;
    double period = 0.0; // 2*pi / omega
    double gain = 0.0;
};

/// Largest local maximum of the transfer function past the first null.
TransferPeak ma_transfer_peak(std::size_t m);

struct SlutskyOptions {
    std::size_t n = 500;
    uint64_t seed = 123;
    std::vector<std::size_t> ma_windows = {10, 25};
    double loess_span = 1.0 / 3.0;
    BcpOptions bcp;
};

/// White-noise smoothing demonstration: seeded standard normals together
/// with their moving-average smooths, a loess smooth, and the change-point
/// posterior mean, all aligned for plotting.
struct SlutskyBundle {
    AnnualSeries raw;
    std::vector<SmoothedSeries> ma;
    SmoothedSeries loess;
    std::vector<double> bh_posterior_mean;
    std::vector<double> bh_change_prob;
};

SlutskyBundle slutsky_demo(const SlutskyOptions& opt = {});

} // namespace icebreaker

#endif
