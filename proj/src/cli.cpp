#include "icebreaker/cli.hpp"

#include "icebreaker/changepoint.hpp"
#include "icebreaker/dependence.hpp"
#include "icebreaker/ingest.hpp"
#include "icebreaker/report.hpp"
#include "icebreaker/series.hpp"
#include "icebreaker/smoothing.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <ostream>

namespace icebreaker::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string resolve_path(const std::string& path) {
    if (fs::exists(path)) return path;
    if (!fs::path(path).is_absolute()) {
        if (const char* root = std::getenv("ICEBREAKER_DATA_DIR")) {
            const fs::path candidate = fs::path(root) / path;
            if (fs::exists(candidate)) return candidate.string();
        }
    }
    return path;
}

uint64_t mix_seed(uint64_t a, uint64_t b) {
    uint64_t x = a + 0x9E3779B97F4A7C15ULL * (b + 1);
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    return x ^ (x >> 31);
}

void ensure_dir(const std::string& dir) {
    if (!dir.empty() && dir != ".") fs::create_directories(dir);
}

std::string join(const std::string& dir, const std::string& file) {
    return (fs::path(dir) / file).string();
}

} // namespace

AnnualSeries load_input(const InputSpec& in) {
    const std::string path = resolve_path(in.path);
    const std::string text = read_text_file(path);
    const std::string name = !in.name.empty() ? in.name : fs::path(path).stem().string();

    AnnualSeries series;
    if (in.format == "fixedwidth") {
        const MonthlySeries monthly = parse_monthly_fixedwidth(text, name);
        if (in.season != "summer" && in.season != "winter")
            throw std::invalid_argument("fixedwidth input requires --season summer or winter");
        series = seasonal_aggregate(monthly, season_from_name(in.season));
    } else if (in.format == "csv") {
        if (in.season != "raw")
            throw std::invalid_argument("csv input is already annual; use --season raw");
        series = parse_annual_csv(text, name);
    } else {
        throw std::invalid_argument("unknown format '" + in.format + "'");
    }

    if (in.from_year != 0 || in.to_year != 0) {
        const int from = in.from_year != 0 ? in.from_year : series.first_year;
        const int to = in.to_year != 0 ? in.to_year : series.last_year();
        series = window(series, from, to);
    }
    if (in.impute && series.has_missing()) series = impute_median(series);
    return series;
}

int cmd_ingest(const IngestArgs& args, std::ostream& err) {
    try {
        const AnnualSeries s = load_input(args.input);
        write_text_file(args.out_file, serialize_annual_csv(s));
        return 0;
    } catch (const std::exception& e) {
        err << "ingest: " << e.what() << "\n";
        return 1;
    }
}

int cmd_describe(const DescribeArgs& args, std::ostream& out, std::ostream& err) {
    try {
        const AnnualSeries s = load_input(args.input);
        std::size_t missing = 0;
        double mean = 0.0;
        std::size_t n = 0;
        for (std::size_t t = 0; t < s.size(); ++t) {
            if (s.missing[t]) {
                ++missing;
                continue;
            }
            mean += s.values[t];
            ++n;
        }
        mean /= static_cast<double>(n);
        double var = 0.0, lo = 0.0, hi = 0.0;
        bool first = true;
        for (std::size_t t = 0; t < s.size(); ++t) {
            if (s.missing[t]) continue;
            var += (s.values[t] - mean) * (s.values[t] - mean);
            if (first) {
                lo = hi = s.values[t];
                first = false;
            } else {
                lo = std::min(lo, s.values[t]);
                hi = std::max(hi, s.values[t]);
            }
        }
        var /= static_cast<double>(n > 1 ? n - 1 : 1);
        out << "name: " << s.name << "\n";
        out << "season: " << season_name(s.season) << "\n";
        out << "years: " << s.first_year << "-" << s.last_year() << " (" << s.size() << ")\n";
        out << "missing: " << missing << "\n";
        out << "mean: " << format_double(mean) << "\n";
        out << "sd: " << format_double(std::sqrt(var)) << "\n";
        out << "min: " << format_double(lo) << "\n";
        out << "max: " << format_double(hi) << "\n";
        if (!s.has_missing() && s.size() >= 3 && var > 0.0)
            out << "rho1: " << format_double(acf(s, 1).rho[0]) << "\n";
        return 0;
    } catch (const std::exception& e) {
        err << "describe: " << e.what() << "\n";
        return 1;
    }
}

namespace {

Csv anova_summary_csv(const AnovaSummary& sum, const AnovaPosterior& post, int first_year) {
    Csv csv;
    csv.header = {"parameter", "median", "ci95_low", "ci95_high"};
    auto row = [&](const std::string& name, const ParamSummary& p) {
        csv.add_row({name, format_double(p.med), format_double(p.ci_low),
                     format_double(p.ci_high)});
    };
    row("icc", sum.icc);
    row("sigma_w", sum.sigma_w);
    row("sigma_b", sum.sigma_b);
    row("mu", sum.mu);
    for (std::size_t j = 0; j < sum.alpha.size(); ++j) {
        const int start = first_year + static_cast<int>(j * post.block_len);
        row("alpha_" + std::to_string(start), sum.alpha[j]);
    }
    return csv;
}

} // namespace

int cmd_anova(const AnovaArgs& args, std::ostream& err) {
    try {
        AnnualSeries s = load_input(args.input);
        s = demean(s);
        AnovaOptions opt;
        opt.block_len = args.block_len;
        opt.iterations = args.iterations;
        opt.burnin = args.burnin;
        opt.seed = args.seed;
        const AnovaPosterior post = hierarchical_anova(s, opt);
        const AnovaSummary sum = icc_summary(post);
        ensure_dir(args.out_dir);
        write_text_file(join(args.out_dir, "anova.csv"),
                        anova_summary_csv(sum, post, s.first_year).str());
        if (args.write_draws) {
            Csv draws;
            draws.header = {"draw", "mu", "sigma_w", "sigma_b", "icc"};
            for (std::size_t j = 0; j < post.n_blocks; ++j)
                draws.header.push_back("alpha_" + std::to_string(j));
            for (std::size_t d = 0; d < post.mu_draws.size(); ++d) {
                std::vector<std::string> row = {
                    std::to_string(d), format_double(post.mu_draws[d]),
                    format_double(post.sigma_w_draws[d]), format_double(post.sigma_b_draws[d]),
                    format_double(post.icc_draws[d])};
                for (double a : post.alpha_draws[d]) row.push_back(format_double(a));
                draws.add_row(std::move(row));
            }
            write_text_file(join(args.out_dir, "anova_draws.csv"), draws.str());
        }
        return 0;
    } catch (const std::exception& e) {
        err << "anova: " << e.what() << "\n";
        return 1;
    }
}

namespace {

void write_breaks_outputs(const AnnualSeries& s, const BreakModel& bp, const CbsResult& vo,
                          const BcpResult& bcp, const std::string& out_dir) {
    Csv csv;
    csv.header = {"method", "break_year", "p_value", "criterion"};
    for (std::size_t i = 0; i < bp.break_years.size(); ++i)
        csv.add_row({"BP", std::to_string(bp.break_years[i]), "",
                     format_double(bp.bic_by_k[bp.chosen_k])});
    for (std::size_t i = 0; i < vo.changepoints.size(); ++i)
        csv.add_row({"CBS", std::to_string(vo.changepoints[i]), format_double(vo.p_values[i]), ""});
    for (std::size_t t = 0; t < s.size(); ++t) {
        if (bcp.change_prob[t] >= 0.5)
            csv.add_row({"BCP", std::to_string(s.first_year + static_cast<int>(t)),
                         format_double(bcp.change_prob[t]), ""});
    }
    write_text_file(join(out_dir, "breaks.csv"), csv.str());

    std::vector<double> years(s.size());
    for (std::size_t t = 0; t < s.size(); ++t)
        years[t] = static_cast<double>(s.first_year + static_cast<int>(t));
    double lo = s.values[0], hi = s.values[0];
    for (double v : s.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (hi <= lo) hi = lo + 1.0;

    SvgFigure fig(860, 520);
    SvgFigure::Viewport top{50, 20, 780, 300, years.front(), years.back(), lo, hi};
    SvgFigure::Viewport bottom{50, 350, 780, 140, years.front(), years.back(), 0.0, 1.0};
    fig.frame(top);
    fig.frame(bottom);
    fig.polyline(top, years, s.values, "#bbbbbb", 1.0);
    fig.polyline(top, years, bcp.posterior_mean, "#000000", 1.5);
    for (int y : bp.break_years) fig.vline(top, y, "#cc0000");
    for (int y : vo.changepoints) fig.vline(top, y, "#0044cc", "2,2");
    fig.vbars(bottom, years, bcp.change_prob, "#333333");
    fig.label(50, 14, s.name + " (" + season_name(s.season) + "): level and posterior mean");
    fig.label(50, 344, "posterior change probability");
    write_text_file(join(out_dir, "breaks.svg"), fig.render());
}

} // namespace

int cmd_breaks(const BreaksArgs& args, std::ostream& err) {
    try {
        const AnnualSeries s = load_input(args.input);
        const BreakModel bp = bai_perron(s, args.min_seg_frac, args.k_max);
        CbsOptions copt;
        copt.alpha = args.alpha;
        copt.n_perm = args.n_perm;
        copt.seed = args.seed;
        const CbsResult vo = cbs(s, copt);
        BcpOptions bopt = args.bcp;
        bopt.seed = mix_seed(args.seed, 0x62637072u);
        const BcpResult posterior = barry_hartigan(s, bopt);
        ensure_dir(args.out_dir);
        write_breaks_outputs(s, bp, vo, posterior, args.out_dir);
        return 0;
    } catch (const std::exception& e) {
        err << "breaks: " << e.what() << "\n";
        return 1;
    }
}

int cmd_mds(const MdsArgs& args, std::ostream& err) {
    try {
        const AnnualSeries s = load_input(args.input);
        BootstrapOptions opt;
        opt.reps = args.bootstrap_reps;
        opt.seed = args.seed;
        std::vector<DependenceReport> reports;
        reports.push_back(el_portmanteau(s));
        reports.push_back(avr_test(s, opt));
        BootstrapOptions opt2 = opt;
        opt2.seed = mix_seed(args.seed, 2);
        reports.push_back(gen_spectral(s, opt2));
        if (args.nonlin) reports.push_back(terasvirta_nonlinearity(s));
        ensure_dir(args.out_dir);
        write_text_file(join(args.out_dir, "mds.csv"), mds_report_csv(reports).str());
        return 0;
    } catch (const std::exception& e) {
        err << "mds: " << e.what() << "\n";
        return 1;
    }
}

int cmd_ar1(const Ar1Args& args, std::ostream& err) {
    try {
        const AnnualSeries s = load_input(args.input);
        const RegressionFit fit = ar1_trend_fit(s);
        Csv csv;
        csv.header = {"series", "intercept", "se_intercept", "lag", "se_lag",
                      "trend", "se_trend", "rmse", "r2", "n"};
        csv.add_row({s.name, format_double(fit.coefficients[0]), format_double(fit.std_errors[0]),
                     format_double(fit.coefficients[1]), format_double(fit.std_errors[1]),
                     format_double(fit.coefficients[2]), format_double(fit.std_errors[2]),
                     format_double(fit.rmse), format_double(fit.r2), std::to_string(fit.n)});
        ensure_dir(args.out_dir);
        write_text_file(join(args.out_dir, "ar1.csv"), csv.str());
        return 0;
    } catch (const std::exception& e) {
        err << "ar1: " << e.what() << "\n";
        return 1;
    }
}

namespace {

Csv smooth_csv(const AnnualSeries& s, const std::vector<SmoothedSeries>& smooths) {
    Csv csv;
    csv.header = {"year", "value"};
    for (const auto& sm : smooths) csv.header.push_back(sm.method);
    for (std::size_t t = 0; t < s.size(); ++t) {
        std::vector<std::string> row = {std::to_string(s.first_year + static_cast<int>(t)),
                                        s.missing[t] ? "" : format_double(s.values[t])};
        for (const auto& sm : smooths)
            row.push_back(sm.valid[t] ? format_double(sm.values[t]) : "");
        csv.add_row(std::move(row));
    }
    return csv;
}

} // namespace

int cmd_smooth(const SmoothArgs& args, std::ostream& err) {
    try {
        const AnnualSeries s = load_input(args.input);
        std::vector<SmoothedSeries> smooths;
        for (std::size_t m : args.ma_windows) smooths.push_back(moving_average(s, m));
        if (args.loess_span > 0.0) smooths.push_back(loess_smooth(s, args.loess_span));
        ensure_dir(args.out_dir);
        write_text_file(join(args.out_dir, "smooth.csv"), smooth_csv(s, smooths).str());
        return 0;
    } catch (const std::exception& e) {
        err << "smooth: " << e.what() << "\n";
        return 1;
    }
}

namespace {

void write_slutsky_outputs(const SlutskyBundle& bundle, const std::string& out_dir) {
    Csv csv;
    csv.header = {"year", "raw"};
    for (const auto& sm : bundle.ma) csv.header.push_back(sm.method);
    csv.header.push_back("loess");
    csv.header.push_back("bh_mean");
    const std::size_t n = bundle.raw.size();
    for (std::size_t t = 0; t < n; ++t) {
        std::vector<std::string> row = {std::to_string(t + 1), format_double(bundle.raw.values[t])};
        for (const auto& sm : bundle.ma)
            row.push_back(sm.valid[t] ? format_double(sm.values[t]) : "");
        row.push_back(bundle.loess.valid[t] ? format_double(bundle.loess.values[t]) : "");
        row.push_back(format_double(bundle.bh_posterior_mean[t]));
        csv.add_row(std::move(row));
    }
    write_text_file(join(out_dir, "slutsky.csv"), csv.str());

    std::vector<double> xs(n);
    for (std::size_t t = 0; t < n; ++t) xs[t] = static_cast<double>(t + 1);
    double lo = bundle.raw.values[0], hi = bundle.raw.values[0];
    for (double v : bundle.raw.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    SvgFigure fig(860, 420);
    SvgFigure::Viewport vp{50, 20, 780, 370, 1.0, static_cast<double>(n), lo, hi};
    fig.frame(vp);
    fig.polyline(vp, xs, bundle.raw.values, "#dddddd", 0.8);
    const char* colors[] = {"#cc0000", "#0044cc", "#00aa44"};
    for (std::size_t i = 0; i < bundle.ma.size(); ++i)
        fig.polyline(vp, xs, bundle.ma[i].values, colors[i % 3], 1.4);
    fig.polyline(vp, xs, bundle.loess.values, "#aa00aa", 1.4, "5,3");
    fig.polyline(vp, xs, bundle.bh_posterior_mean, "#000000", 1.6, "2,2");
    fig.label(50, 14, "white noise under smoothing filters vs change-point posterior mean");
    write_text_file(join(out_dir, "slutsky.svg"), fig.render());
}

} // namespace

int cmd_slutsky(const SlutskyArgs& args, std::ostream& err) {
    try {
        SlutskyOptions opt;
        opt.n = args.n;
        opt.seed = args.seed;
        opt.ma_windows = args.ma_windows;
        opt.loess_span = args.loess_span;
        const SlutskyBundle bundle = slutsky_demo(opt);
        ensure_dir(args.out_dir);
        write_slutsky_outputs(bundle, args.out_dir);
        return 0;
    } catch (const std::exception& e) {
        err << "slutsky: " << e.what() << "\n";
        return 1;
    }
}

namespace {

Csv power_csv(const std::vector<PowerResult>& results) {
    Csv csv;
    csv.header = {"n", "segments", "detector", "replicates", "seed",
                  "detection_rate", "mc_stderr"};
    for (const auto& res : results) {
        std::string segs;
        for (std::size_t i = 0; i < res.scenario.segments.size(); ++i) {
            if (i) segs += ';';
            segs += std::to_string(res.scenario.segments[i].length) + ":" +
                    format_double(res.scenario.segments[i].mean);
        }
        csv.add_row({std::to_string(res.scenario.n), segs, detector_name(res.scenario.detector),
                     std::to_string(res.scenario.replicates), std::to_string(res.scenario.seed),
                     format_double(res.detection_rate), format_double(res.mc_stderr)});
    }
    return csv;
}

} // namespace

int cmd_power(const PowerArgs& args, std::ostream& out, std::ostream& err) {
    try {
        std::string text;
        if (!args.scenario_file.empty()) text = read_text_file(resolve_path(args.scenario_file));
        else if (!args.inline_scenario.empty()) text = args.inline_scenario;
        else throw std::invalid_argument("power: provide a scenario file or inline scenario");
        const PowerScenario sc = parse_scenario(text);
        const PowerResult res = run_power(sc);
        ensure_dir(args.out_dir);
        write_text_file(join(args.out_dir, "power.csv"), power_csv({res}).str());
        out << detector_name(sc.detector) << " detection_rate=" << format_double(res.detection_rate)
            << " mc_stderr=" << format_double(res.mc_stderr) << "\n";
        return 0;
    } catch (const std::exception& e) {
        err << "power: " << e.what() << "\n";
        return 1;
    }
}

// ---------------------------------------------------------------------------
// report pipeline

namespace {

struct ReportContext {
    json config;
    std::string out_dir;
    uint64_t seed = 0;
    json manifest_outputs = json::array();
    json manifest_failures = json::array();

    void record(const std::string& analysis, const std::string& file,
                const std::string& content) {
        write_text_file(file, content);
        manifest_outputs.push_back({{"analysis", analysis},
                                    {"file", fs::path(file).filename().string()},
                                    {"bytes", content.size()},
                                    {"fnv64", fnv1a64_hex(content)}});
    }
};

InputSpec dataset_spec(const json& ds) {
    InputSpec in;
    in.path = ds.at("path").get<std::string>();
    in.format = ds.value("format", "csv");
    in.season = ds.value("season", "raw");
    in.name = ds.value("name", "");
    return in;
}

const json* find_dataset(const json& config, const std::string& name) {
    if (!config.contains("datasets")) return nullptr;
    for (const auto& ds : config.at("datasets"))
        if (ds.value("name", "") == name) return &ds;
    return nullptr;
}

void run_report_analysis(ReportContext& ctx, const json& analysis, std::size_t index) {
    const std::string id = analysis.at("id").get<std::string>();
    const json params = analysis.value("params", json::object());
    const std::string ds_name = analysis.value("dataset", "");
    const std::string tag = ds_name.empty() ? id : id + "_" + ds_name;
    const uint64_t seed = mix_seed(ctx.seed, index);

    AnnualSeries series;
    if (!ds_name.empty()) {
        const json* ds = find_dataset(ctx.config, ds_name);
        InputSpec in = dataset_spec(*ds);
        in.from_year = params.value("from", 0);
        in.to_year = params.value("to", 0);
        series = load_input(in);
    }

    if (id == "anova" || id == "icc") {
        AnovaOptions opt;
        opt.block_len = params.value("block_len", id == "icc" ? 10 : 50);
        opt.iterations = params.value("iterations", 10000);
        opt.burnin = params.value("burnin", 2500);
        opt.seed = seed;
        const AnnualSeries demeaned = demean(series);
        const AnovaPosterior post = hierarchical_anova(demeaned, opt);
        const AnovaSummary sum = icc_summary(post);
        ctx.record(id, join(ctx.out_dir, tag + ".csv"),
                   anova_summary_csv(sum, post, demeaned.first_year).str());
        if (id == "anova") {
            // block means with credible intervals
            std::vector<double> xs, med, lo, hi;
            for (std::size_t j = 0; j < sum.alpha.size(); ++j) {
                xs.push_back(static_cast<double>(demeaned.first_year) +
                             static_cast<double>(j * post.block_len) +
                             static_cast<double>(post.block_len) / 2.0);
                med.push_back(sum.alpha[j].med);
                lo.push_back(sum.alpha[j].ci_low);
                hi.push_back(sum.alpha[j].ci_high);
            }
            double ymin = *std::min_element(lo.begin(), lo.end());
            double ymax = *std::max_element(hi.begin(), hi.end());
            if (ymax <= ymin) ymax = ymin + 1.0;
            SvgFigure fig(860, 420);
            SvgFigure::Viewport vp{50, 20, 780, 370, xs.front() - post.block_len,
                                   xs.back() + post.block_len, ymin, ymax};
            fig.frame(vp);
            fig.polyline(vp, xs, med, "#000000", 1.5);
            fig.polyline(vp, xs, lo, "#888888", 1.0, "4,3");
            fig.polyline(vp, xs, hi, "#888888", 1.0, "4,3");
            fig.label(50, 14, series.name + ": block means with 95% intervals");
            ctx.record(id, join(ctx.out_dir, tag + ".svg"), fig.render());
        }
    } else if (id == "breaks") {
        const BreakModel bp =
            bai_perron(series, params.value("min_seg_frac", 0.15), params.value("k_max", 5));
        CbsOptions copt;
        copt.alpha = params.value("alpha", 0.01);
        copt.n_perm = params.value("n_perm", 1000);
        copt.seed = seed;
        const CbsResult vo = cbs(series, copt);
        BcpOptions bopt;
        bopt.seed = mix_seed(seed, 1);
        const BcpResult posterior = barry_hartigan(series, bopt);
        const std::string tmpdir = ctx.out_dir;
        // reuse the standalone writer, then fold its outputs into the manifest
        write_breaks_outputs(series, bp, vo, posterior, tmpdir);
        for (const char* f : {"breaks.csv", "breaks.svg"}) {
            const std::string src = join(tmpdir, f);
            const std::string content = read_text_file(src);
            fs::remove(src);
            const std::string renamed = join(ctx.out_dir, tag + (std::string(f).find(".svg") !=
                                                                 std::string::npos
                                                                     ? ".svg"
                                                                     : ".csv"));
            ctx.record(id, renamed, content);
        }
    } else if (id == "ar1") {
        const RegressionFit fit = ar1_trend_fit(series);
        Csv csv;
        csv.header = {"series", "intercept", "se_intercept", "lag", "se_lag",
                      "trend", "se_trend", "rmse", "r2", "n"};
        csv.add_row({series.name, format_double(fit.coefficients[0]),
                     format_double(fit.std_errors[0]), format_double(fit.coefficients[1]),
                     format_double(fit.std_errors[1]), format_double(fit.coefficients[2]),
                     format_double(fit.std_errors[2]), format_double(fit.rmse),
                     format_double(fit.r2), std::to_string(fit.n)});
        ctx.record(id, join(ctx.out_dir, tag + ".csv"), csv.str());
    } else if (id == "mds") {
        BootstrapOptions opt;
        opt.reps = params.value("bootstrap_reps", 500);
        std::vector<std::pair<int, int>> windows;
        if (params.contains("windows")) {
            for (const auto& w : params.at("windows"))
                windows.emplace_back(w.at(0).get<int>(), w.at(1).get<int>());
        } else {
            windows.emplace_back(series.first_year, series.last_year());
        }
        std::vector<DependenceReport> reports;
        std::size_t widx = 0;
        for (const auto& [from, to] : windows) {
            const AnnualSeries piece = window(series, from, to);
            opt.seed = mix_seed(seed, widx++);
            reports.push_back(el_portmanteau(piece));
            reports.push_back(avr_test(piece, opt));
            reports.push_back(gen_spectral(piece, opt));
            if (params.value("nonlin", false)) reports.push_back(terasvirta_nonlinearity(piece));
        }
        ctx.record(id, join(ctx.out_dir, tag + ".csv"), mds_report_csv(reports).str());
    } else if (id == "transfer") {
        const std::size_t m = params.value("m", 25);
        Csv csv;
        csv.header = {"omega", "gain"};
        const int grid = params.value("grid", 1000);
        std::vector<double> xs, ys;
        for (int i = 1; i <= grid; ++i) {
            const double w = M_PI * static_cast<double>(i) / grid;
            xs.push_back(w);
            ys.push_back(ma_transfer(m, w));
            csv.add_row({format_double(w), format_double(ys.back())});
        }
        const TransferPeak peak = ma_transfer_peak(m);
        Csv peak_csv;
        peak_csv.header = {"m", "peak_omega", "peak_period", "peak_gain"};
        peak_csv.add_row({std::to_string(m), format_double(peak.omega),
                          format_double(peak.period), format_double(peak.gain)});
        ctx.record(id, join(ctx.out_dir, tag + ".csv"), csv.str());
        ctx.record(id, join(ctx.out_dir, tag + "_peak.csv"), peak_csv.str());
        SvgFigure fig(860, 420);
        SvgFigure::Viewport vp{50, 20, 780, 370, 0.0, M_PI, 0.0, 1.0};
        fig.frame(vp);
        fig.polyline(vp, xs, ys, "#000000", 1.2);
        fig.vline(vp, peak.omega, "#cc0000");
        fig.label(50, 14, "moving-average transfer function, m=" + std::to_string(m));
        ctx.record(id, join(ctx.out_dir, tag + ".svg"), fig.render());
    } else if (id == "slutsky") {
        SlutskyOptions opt;
        opt.n = params.value("n", 500);
        opt.seed = seed;
        if (params.contains("windows")) {
            opt.ma_windows.clear();
            for (const auto& w : params.at("windows")) opt.ma_windows.push_back(w.get<std::size_t>());
        }
        opt.loess_span = params.value("span", 1.0 / 3.0);
        const SlutskyBundle bundle = slutsky_demo(opt);
        write_slutsky_outputs(bundle, ctx.out_dir);
        for (const char* f : {"slutsky.csv", "slutsky.svg"}) {
            const std::string src = join(ctx.out_dir, f);
            const std::string content = read_text_file(src);
            fs::remove(src);
            const std::string ext = std::string(f).find(".svg") != std::string::npos ? ".svg" : ".csv";
            ctx.record(id, join(ctx.out_dir, tag + ext), content);
        }
    } else {
        throw std::invalid_argument("unknown analysis id '" + id + "'");
    }
}

} // namespace

int cmd_report(const ReportArgs& args, std::ostream& err) {
    ReportContext ctx;
    try {
        ctx.config = json::parse(read_text_file(resolve_path(args.config_path)));
        ctx.out_dir = !args.out_dir_override.empty()
                          ? args.out_dir_override
                          : ctx.config.value("output_dir", std::string("report_out"));
        ctx.seed = ctx.config.value("seed", 1);
        ensure_dir(ctx.out_dir);

        static const std::vector<std::string> known = {"anova", "icc",      "breaks", "ar1",
                                                       "mds",   "transfer", "slutsky"};
        const json analyses = ctx.config.value("analyses", json::array());
        // validate before running anything
        for (const auto& a : analyses) {
            const std::string id = a.at("id").get<std::string>();
            if (std::find(known.begin(), known.end(), id) == known.end())
                throw std::invalid_argument("unknown analysis id '" + id + "'");
            const std::string ds_name = a.value("dataset", "");
            if (id != "transfer" && id != "slutsky") {
                if (ds_name.empty())
                    throw std::invalid_argument("analysis '" + id + "' requires a dataset");
                const json* ds = find_dataset(ctx.config, ds_name);
                if (!ds) throw std::invalid_argument("unknown dataset '" + ds_name + "'");
                const std::string path = resolve_path(ds->at("path").get<std::string>());
                if (!fs::exists(path))
                    throw std::invalid_argument("dataset file does not exist: " + path);
            }
        }

        std::size_t index = 0;
        for (const auto& a : analyses) {
            try {
                run_report_analysis(ctx, a, index);
            } catch (const std::exception& e) {
                ctx.manifest_failures.push_back(
                    {{"analysis", a.at("id").get<std::string>()}, {"error", e.what()}});
            }
            ++index;
        }

        json manifest;
        manifest["schema_version"] = 1;
        manifest["seed"] = ctx.seed;
        manifest["parameters"] = ctx.config;
        manifest["outputs"] = ctx.manifest_outputs;
        manifest["failures"] = ctx.manifest_failures;
        write_text_file(join(ctx.out_dir, "manifest.json"), manifest.dump(2) + "\n");

        if (!ctx.manifest_failures.empty()) {
            for (const auto& f : ctx.manifest_failures)
                err << "report: " << f.at("analysis").get<std::string>() << ": "
                    << f.at("error").get<std::string>() << "\n";
            return 1;
        }
        return 0;
    } catch (const std::exception& e) {
        err << "report: " << e.what() << "\n";
        return 1;
    }
}

} // namespace icebreaker::cli
