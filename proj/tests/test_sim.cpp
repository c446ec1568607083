#include <doctest.h>

#include "icebreaker/rng.hpp"
#include "icebreaker/sim.hpp"

#include <cmath>
#include <vector>

using namespace icebreaker;

TEST_CASE("rng streams: identical draws for identical indices") {
    Rng a = rng_stream(97, 12);
    Rng b = rng_stream(97, 12);
    for (int i = 0; i < 1000; ++i) CHECK(a.uniform() == b.uniform());
}

TEST_CASE("rng streams: distinct indices decorrelate") {
    Rng a = rng_stream(123, 0);
    Rng b = rng_stream(123, 1);
    const std::size_t n = 10000;
    double sxy = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = a.normal(), y = b.normal();
        sx += x;
        sy += y;
        sxx += x * x;
        syy += y * y;
        sxy += x * y;
    }
    const double corr = (n * sxy - sx * sy) /
                        std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
    CHECK(std::fabs(corr) < 0.03);
}

TEST_CASE("rng normal moments over a million draws") {
    Rng r = rng_stream(7, 0);
    const std::size_t n = 1000000;
    double sum = 0.0, sumsq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = r.normal();
        sum += v;
        sumsq += v * v;
    }
    const double mean = sum / n;
    const double sd = std::sqrt(sumsq / n - mean * mean);
    CHECK(std::fabs(mean) < 0.004);
    CHECK(std::fabs(sd - 1.0) < 0.002);
}

TEST_CASE("scenario files parse and round trip") {
    const std::string text =
        "# comment line\n"
        "n = 300\n"
        "segments = 150:0, 150:0.5\n"
        "detector = CBS\n"
        "replicates = 10\n"
        "seed = 5\n";
    const PowerScenario sc = parse_scenario(text);
    CHECK(sc.n == 300);
    REQUIRE(sc.segments.size() == 2);
    CHECK(sc.segments[1].mean == doctest::Approx(0.5));
    CHECK(sc.detector == Detector::CBS);
    CHECK(sc.replicates == 10);
    CHECK(sc.seed == 5);
    const PowerScenario again = parse_scenario(serialize_scenario(sc));
    CHECK(again.n == sc.n);
    CHECK(again.segments.size() == sc.segments.size());
}

TEST_CASE("scenario validation") {
    CHECK_THROWS(parse_scenario("n = 100\nsegments = 50:0\n"));           // lengths != n
    CHECK_THROWS(parse_scenario("segments = 50:0\n"));                    // missing n
    CHECK_THROWS(parse_scenario("n = 50\nsegments = 50:0\nfoo = 1\n"));   // unknown key
    PowerScenario bad;
    bad.n = 10;
    bad.segments = {{5, 0.0}};
    CHECK_THROWS(run_power(bad));
}

TEST_CASE("run_power is reproducible and reports the binomial error") {
    PowerScenario sc;
    sc.n = 60;
    sc.segments = {{30, 0.0}, {30, 2.0}};
    sc.detector = Detector::BP;
    sc.replicates = 50;
    sc.seed = 11;
    const PowerResult a = run_power(sc);
    const PowerResult b = run_power(sc);
    CHECK(a.detection_rate == b.detection_rate);
    CHECK(a.mc_stderr ==
          doctest::Approx(std::sqrt(a.detection_rate * (1.0 - a.detection_rate) / 50.0))
              .epsilon(1e-12));
    CHECK(a.detection_rate > 0.9); // a two-sigma step is essentially always found
}

TEST_CASE("detection rate grows with the shift size") {
    double prev = -1.0;
    for (double shift : {0.25, 0.5, 0.75, 1.0}) {
        PowerScenario sc;
        sc.n = 100;
        sc.segments = {{50, 0.0}, {50, shift}};
        sc.detector = Detector::BP;
        sc.replicates = 200;
        sc.seed = 21;
        const double rate = run_power(sc).detection_rate;
        CHECK(rate >= prev - 0.05);
        prev = rate;
    }
}

TEST_CASE("cbs scenarios detect strong breaks and respect the seed") {
    PowerScenario sc;
    sc.n = 80;
    sc.segments = {{40, 0.0}, {40, 1.5}};
    sc.detector = Detector::CBS;
    sc.replicates = 40;
    sc.cbs_n_perm = 200;
    sc.seed = 31;
    const PowerResult a = run_power(sc);
    CHECK(a.detection_rate > 0.8);
    CHECK(run_power(sc).detection_rate == a.detection_rate);
}

TEST_CASE("bcp locality rule detects a large midpoint step") {
    PowerScenario sc;
    sc.n = 100;
    sc.segments = {{50, 0.0}, {50, 3.0}};
    sc.detector = Detector::BCP;
    sc.replicates = 20;
    sc.seed = 41;
    const PowerResult res = run_power(sc);
    CHECK(res.detection_rate > 0.9);
}

TEST_CASE("size harness hits the nominal level for the analytic test") {
    const PowerResult res = run_size(MdsTest::Q, 300, 2000, 0.05, 51);
    CHECK(res.detection_rate >= 0.02);
    CHECK(res.detection_rate <= 0.09);
}

TEST_CASE("size at level zero is zero") {
    const PowerResult res = run_size(MdsTest::Q, 100, 50, 0.0, 61);
    CHECK(res.detection_rate == 0.0);
}

TEST_CASE("nonlinearity test runs through the size harness") {
    const PowerResult res = run_size(MdsTest::NONLIN, 100, 200, 0.05, 71);
    CHECK(res.detection_rate >= 0.01);
    CHECK(res.detection_rate <= 0.11);
}
