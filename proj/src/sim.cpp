#include "icebreaker/sim.hpp"

#include "icebreaker/bayes.hpp"
#include "icebreaker/changepoint.hpp"
#include "icebreaker/parallel.hpp"
#include "icebreaker/rng.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace icebreaker {

namespace {

uint64_t mix64(uint64_t a, uint64_t b) {
    uint64_t x = a + 0x9E3779B97F4A7C15ULL * (b + 1);
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

void validate(const PowerScenario& sc) {
    if (sc.n == 0) throw std::invalid_argument("scenario: n must be positive");
    if (sc.replicates == 0) throw std::invalid_argument("scenario: replicates must be positive");
    if (sc.segments.empty()) throw std::invalid_argument("scenario: no segments");
    std::size_t total = 0;
    for (const auto& seg : sc.segments) {
        if (seg.length == 0) throw std::invalid_argument("scenario: zero-length segment");
        total += seg.length;
    }
    if (total != sc.n) throw std::invalid_argument("scenario: segment lengths must sum to n");
}

// cut positions (index of the first observation of a new level)
std::vector<std::size_t> true_breaks(const PowerScenario& sc) {
    std::vector<std::size_t> cuts;
    std::size_t pos = 0;
    for (std::size_t i = 0; i + 1 < sc.segments.size(); ++i) {
        pos += sc.segments[i].length;
        if (sc.segments[i].mean != sc.segments[i + 1].mean) cuts.push_back(pos);
    }
    return cuts;
}

} // namespace

std::string detector_name(Detector d) {
    switch (d) {
        case Detector::BP: return "BP";
        case Detector::CBS: return "CBS";
        case Detector::BCP: return "BCP";
    }
    return "BP";
}

Detector detector_from_name(const std::string& name) {
    if (name == "BP") return Detector::BP;
    if (name == "CBS" || name == "VO") return Detector::CBS;
    if (name == "BCP" || name == "BH") return Detector::BCP;
    throw std::invalid_argument("unknown detector '" + name + "'");
}

PowerResult run_power(const PowerScenario& sc) {
    validate(sc);
    const auto breaks = true_breaks(sc);
    const bool null_scenario = breaks.empty();

    std::vector<uint8_t> detected(sc.replicates, 0);
    parallel_for(sc.replicates, [&](std::size_t r) {
        Rng rng = rng_stream(sc.seed, r);
        std::vector<double> y;
        y.reserve(sc.n);
        for (const auto& seg : sc.segments)
            for (std::size_t t = 0; t < seg.length; ++t) y.push_back(seg.mean + rng.normal());

        bool hit = false;
        switch (sc.detector) {
            case Detector::BP: {
                const BreakModel model = bai_perron(y, sc.bp_min_seg_frac, sc.bp_k_max);
                hit = model.chosen_k >= 1;
                break;
            }
            case Detector::CBS: {
                CbsOptions opt;
                opt.alpha = sc.cbs_alpha;
                opt.n_perm = sc.cbs_n_perm;
                opt.seed = mix64(sc.seed, r);
                opt.early_stop = true; // decision-identical to the full permutation count
                hit = !cbs(y, opt).changepoint_indices.empty();
                break;
            }
            case Detector::BCP: {
                BcpOptions opt;
                opt.seed = mix64(sc.seed, r);
                const BcpResult res = barry_hartigan(y, opt);
                if (null_scenario) {
                    for (std::size_t t = 1; t < sc.n; ++t)
                        if (res.change_prob[t] >= sc.bcp_threshold) hit = true;
                } else {
                    for (std::size_t cut : breaks) {
                        const std::size_t lo =
                            cut > sc.bcp_locality ? cut - sc.bcp_locality : 1;
                        const std::size_t hi = std::min(sc.n - 1, cut + sc.bcp_locality);
                        for (std::size_t t = lo; t <= hi; ++t)
                            if (res.change_prob[t] >= sc.bcp_threshold) hit = true;
                    }
                }
                break;
            }
        }
        detected[r] = hit ? 1 : 0;
    });

    std::size_t hits = 0;
    for (uint8_t b : detected) hits += b;
    PowerResult out;
    out.scenario = sc;
    out.detection_rate = static_cast<double>(hits) / static_cast<double>(sc.replicates);
    out.mc_stderr = std::sqrt(out.detection_rate * (1.0 - out.detection_rate) /
                              static_cast<double>(sc.replicates));
    return out;
}

PowerResult run_size(MdsTest test, std::size_t n, std::size_t replicates, double level,
                     uint64_t seed) {
    if (n < 30) throw std::invalid_argument("run_size: need n >= 30");
    if (replicates == 0) throw std::invalid_argument("run_size: replicates must be positive");

    std::vector<uint8_t> rejected(replicates, 0);
    parallel_for(replicates, [&](std::size_t r) {
        Rng rng = rng_stream(seed, r);
        const std::vector<double> y = rng.normals(n);
        BootstrapOptions opt;
        opt.seed = mix64(seed, r);
        const DependenceReport rep = run_mds_test(y, test, opt);
        rejected[r] = rep.p_value < level ? 1 : 0;
    });

    std::size_t hits = 0;
    for (uint8_t b : rejected) hits += b;
    PowerResult out;
    out.scenario.n = n;
    out.scenario.segments = {{n, 0.0}};
    out.scenario.replicates = replicates;
    out.scenario.seed = seed;
    out.detection_rate = static_cast<double>(hits) / static_cast<double>(replicates);
    out.mc_stderr = std::sqrt(out.detection_rate * (1.0 - out.detection_rate) /
                              static_cast<double>(replicates));
    return out;
}

PowerScenario parse_scenario(const std::string& text) {
    PowerScenario sc;
    bool have_n = false, have_segments = false;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("scenario line " + std::to_string(lineno) +
                                     ": expected key = value");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key == "n") {
            sc.n = std::stoul(value);
            have_n = true;
        } else if (key == "segments") {
            sc.segments.clear();
            std::istringstream segs(value);
            std::string item;
            while (std::getline(segs, item, ',')) {
                const std::string si = trim(item);
                const auto colon = si.find(':');
                if (colon == std::string::npos)
                    throw std::runtime_error("scenario: segment '" + si + "' needs length:mean");
                SimSegment seg;
                seg.length = std::stoul(trim(si.substr(0, colon)));
                seg.mean = std::stod(trim(si.substr(colon + 1)));
                sc.segments.push_back(seg);
            }
            have_segments = true;
        } else if (key == "detector") {
            sc.detector = detector_from_name(value);
        } else if (key == "replicates") {
            sc.replicates = std::stoul(value);
        } else if (key == "seed") {
            sc.seed = std::stoull(value);
        } else if (key == "bp_min_seg_frac") {
            sc.bp_min_seg_frac = std::stod(value);
        } else if (key == "bp_k_max") {
            sc.bp_k_max = std::stoul(value);
        } else if (key == "cbs_alpha") {
            sc.cbs_alpha = std::stod(value);
        } else if (key == "cbs_n_perm") {
            sc.cbs_n_perm = std::stoul(value);
        } else if (key == "bcp_threshold") {
            sc.bcp_threshold = std::stod(value);
        } else if (key == "bcp_locality") {
            sc.bcp_locality = std::stoul(value);
        } else {
            throw std::runtime_error("scenario: unknown key '" + key + "'");
        }
    }
    if (!have_n) throw std::runtime_error("scenario: missing n");
    if (!have_segments) throw std::runtime_error("scenario: missing segments");
    validate(sc);
    return sc;
}

std::string serialize_scenario(const PowerScenario& sc) {
    std::ostringstream out;
    out << "n = " << sc.n << "\n";
    out << "segments = ";
    for (std::size_t i = 0; i < sc.segments.size(); ++i) {
        if (i) out << ", ";
        out << sc.segments[i].length << ":" << sc.segments[i].mean;
    }
    out << "\n";
    out << "detector = " << detector_name(sc.detector) << "\n";
    out << "replicates = " << sc.replicates << "\n";
    out << "seed = " << sc.seed << "\n";
    return out.str();
}

} // namespace icebreaker
