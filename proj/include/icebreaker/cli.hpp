#ifndef ICEBREAKER_CLI_HPP
#define ICEBREAKER_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "icebreaker/annual_series.hpp"
#include "icebreaker/bayes.hpp"
#include "icebreaker/sim.hpp"

namespace icebreaker::cli {

/// Shared input pipeline: read, parse by format, aggregate the season for
/// monthly inputs, window, and impute. Relative paths that do not exist are
/// retried under $ICEBREAKER_DATA_DIR.
struct InputSpec {
    std::string path;
    std::string format = "csv"; // csv | fixedwidth
    std::string season = "raw"; // raw | summer | winter
    int from_year = 0;          // 0 = unset
    int to_year = 0;
    bool impute = true;
    std::string name;
};

AnnualSeries load_input(const InputSpec& in);

struct IngestArgs {
    InputSpec input;
    std::string out_file = "series.csv";
};
int cmd_ingest(const IngestArgs& args, std::ostream& err);

struct DescribeArgs {
    InputSpec input;
};
int cmd_describe(const DescribeArgs& args, std::ostream& out, std::ostream& err);

struct AnovaArgs {
    InputSpec input;
    std::size_t block_len = 10;
    std::size_t iterations = 10000;
    std::size_t burnin = 2500;
    uint64_t seed = 1;
    bool write_draws = false;
    std::string out_dir = ".";
};
int cmd_anova(const AnovaArgs& args, std::ostream& err);

struct BreaksArgs {
    InputSpec input;
    double min_seg_frac = 0.15;
    std::size_t k_max = 5;
    double alpha = 0.01;
    std::size_t n_perm = 1000;
    uint64_t seed = 1;
    BcpOptions bcp;
    std::string out_dir = ".";
};
int cmd_breaks(const BreaksArgs& args, std::ostream& err);

struct MdsArgs {
    InputSpec input;
    bool nonlin = false;
    std::size_t bootstrap_reps = 500;
    uint64_t seed = 1;
    std::string out_dir = ".";
};
int cmd_mds(const MdsArgs& args, std::ostream& err);

struct Ar1Args {
    InputSpec input;
    std::string out_dir = ".";
};
int cmd_ar1(const Ar1Args& args, std::ostream& err);

struct SmoothArgs {
    InputSpec input;
    std::vector<std::size_t> ma_windows;
    double loess_span = 0.0; // 0 = no loess column
    std::string out_dir = ".";
};
int cmd_smooth(const SmoothArgs& args, std::ostream& err);

struct SlutskyArgs {
    std::size_t n = 500;
    uint64_t seed = 123;
    std::vector<std::size_t> ma_windows = {10, 25};
    double loess_span = 1.0 / 3.0;
    std::string out_dir = ".";
};
int cmd_slutsky(const SlutskyArgs& args, std::ostream& err);

struct PowerArgs {
    std::string scenario_file;      // key = value format
    std::string inline_scenario;    // same format, inline
    std::string out_dir = ".";
};
int cmd_power(const PowerArgs& args, std::ostream& out, std::ostream& err);

struct ReportArgs {
    std::string config_path;
    std::string out_dir_override;
};
int cmd_report(const ReportArgs& args, std::ostream& err);

} // namespace icebreaker::cli

#endif
