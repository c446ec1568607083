#include "icebreaker/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

void add_input_flags(CLI::App* app, icebreaker::cli::InputSpec& in) {
    app->add_option("--input", in.path, "input series file")->required();
    app->add_option("--format", in.format, "input format: csv | fixedwidth")
        ->check(CLI::IsMember({"csv", "fixedwidth"}));
    app->add_option("--season", in.season, "season for monthly inputs: raw | summer | winter")
        ->check(CLI::IsMember({"raw", "summer", "winter"}));
    app->add_option("--from", in.from_year, "window start year");
    app->add_option("--to", in.to_year, "window end year");
    app->add_flag("!--no-impute", in.impute, "keep missing values instead of median-imputing");
    app->add_option("--name", in.name, "series label (defaults to the file stem)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"change-point and temporal-dependence analysis for annual series"};
    app.require_subcommand(1);

    using namespace icebreaker::cli;

    IngestArgs ingest_args;
    auto* ingest = app.add_subcommand("ingest", "parse a series and write canonical annual CSV");
    add_input_flags(ingest, ingest_args.input);
    ingest->add_option("--out", ingest_args.out_file, "output CSV path");

    DescribeArgs describe_args;
    auto* describe = app.add_subcommand("describe", "summary statistics of a series");
    add_input_flags(describe, describe_args.input);

    AnovaArgs anova_args;
    auto* anova = app.add_subcommand("anova", "hierarchical block-mean posterior and ICC");
    add_input_flags(anova, anova_args.input);
    anova->add_option("--block-len", anova_args.block_len, "years per block");
    anova->add_option("--iters", anova_args.iterations, "MCMC iterations");
    anova->add_option("--burnin", anova_args.burnin, "discarded iterations");
    anova->add_option("--seed", anova_args.seed, "RNG seed");
    anova->add_flag("--draws", anova_args.write_draws, "also write per-draw CSV");
    anova->add_option("--out", anova_args.out_dir, "output directory");

    BreaksArgs breaks_args;
    auto* breaks = app.add_subcommand("breaks", "classical and Bayesian change-point detection");
    add_input_flags(breaks, breaks_args.input);
    breaks->add_option("--min-seg", breaks_args.min_seg_frac, "minimum segment fraction");
    breaks->add_option("--kmax", breaks_args.k_max, "maximum number of breaks");
    breaks->add_option("--alpha", breaks_args.alpha, "segmentation significance level");
    breaks->add_option("--nperm", breaks_args.n_perm, "permutations per segment test");
    breaks->add_option("--seed", breaks_args.seed, "RNG seed");
    breaks->add_option("--bcp-iters", breaks_args.bcp.iterations, "posterior sweeps");
    breaks->add_option("--bcp-burnin", breaks_args.bcp.burnin, "discarded sweeps");
    breaks->add_option("--p0", breaks_args.bcp.p0, "prior change-probability cap");
    breaks->add_option("--w0", breaks_args.bcp.w0, "prior signal-ratio cap");
    breaks->add_option("--out", breaks_args.out_dir, "output directory");

    MdsArgs mds_args;
    auto* mds = app.add_subcommand("mds", "conditional mean independence tests");
    add_input_flags(mds, mds_args.input);
    mds->add_flag("--nonlin", mds_args.nonlin, "also run the nonlinearity test");
    mds->add_option("--reps", mds_args.bootstrap_reps, "bootstrap replicates");
    mds->add_option("--seed", mds_args.seed, "RNG seed");
    mds->add_option("--out", mds_args.out_dir, "output directory");

    Ar1Args ar1_args;
    auto* ar1 = app.add_subcommand("ar1", "first-order autoregression with trend");
    add_input_flags(ar1, ar1_args.input);
    ar1->add_option("--out", ar1_args.out_dir, "output directory");

    SmoothArgs smooth_args;
    auto* smooth = app.add_subcommand("smooth", "moving-average and local polynomial smooths");
    add_input_flags(smooth, smooth_args.input);
    smooth->add_option("--ma", smooth_args.ma_windows, "moving-average window (repeatable)");
    smooth->add_option("--loess", smooth_args.loess_span, "loess span fraction");
    smooth->add_option("--out", smooth_args.out_dir, "output directory");

    SlutskyArgs slutsky_args;
    auto* slutsky = app.add_subcommand("slutsky", "white-noise smoothing demonstration");
    slutsky->add_option("--n", slutsky_args.n, "series length");
    slutsky->add_option("--seed", slutsky_args.seed, "RNG seed");
    slutsky->add_option("--ma", slutsky_args.ma_windows, "moving-average windows");
    slutsky->add_option("--span", slutsky_args.loess_span, "loess span");
    slutsky->add_option("--out", slutsky_args.out_dir, "output directory");

    PowerArgs power_args;
    auto* power = app.add_subcommand("power", "Monte Carlo detection-rate study");
    power->add_option("--scenario", power_args.scenario_file, "scenario file (key = value lines)");
    power->add_option("--inline", power_args.inline_scenario,
                      "scenario text inline, ';' separates lines");
    power->add_option("--out", power_args.out_dir, "output directory");

    ReportArgs report_args;
    auto* report = app.add_subcommand("report", "run a configured analysis pipeline");
    report->add_option("--config", report_args.config_path, "JSON report configuration")->required();
    report->add_option("--out", report_args.out_dir_override, "output directory override");

    CLI11_PARSE(app, argc, argv);

    if (ingest->parsed()) return cmd_ingest(ingest_args, std::cerr);
    if (describe->parsed()) return cmd_describe(describe_args, std::cout, std::cerr);
    if (anova->parsed()) return cmd_anova(anova_args, std::cerr);
    if (breaks->parsed()) return cmd_breaks(breaks_args, std::cerr);
    if (mds->parsed()) return cmd_mds(mds_args, std::cerr);
    if (ar1->parsed()) return cmd_ar1(ar1_args, std::cerr);
    if (smooth->parsed()) return cmd_smooth(smooth_args, std::cerr);
    if (slutsky->parsed()) return cmd_slutsky(slutsky_args, std::cerr);
    if (power->parsed()) {
        for (char& c : power_args.inline_scenario)
            if (c == ';') c = '\n';
        return cmd_power(power_args, std::cout, std::cerr);
    }
    if (report->parsed()) return cmd_report(report_args, std::cerr);
    return 1;
}
