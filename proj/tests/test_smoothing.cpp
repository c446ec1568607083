#include <doctest.h>

#include "icebreaker/rng.hpp"
#include "icebreaker/smoothing.hpp"

#include "support/oracles.hpp"

#include <cmath>
#include <vector>

using namespace icebreaker;

namespace {

AnnualSeries wrap(std::vector<double> values) {
    AnnualSeries s;
    s.first_year = 1;
    s.missing.assign(values.size(), 0);
    s.values = std::move(values);
    return s;
}

} // namespace

TEST_CASE("moving average of a constant is the constant") {
    const SmoothedSeries sm = moving_average(wrap(std::vector<double>(30, 3.0)), 7);
    for (std::size_t t = 0; t < sm.values.size(); ++t)
        if (sm.valid[t]) CHECK(sm.values[t] == doctest::Approx(3.0));
}

TEST_CASE("odd centered windows preserve a linear ramp") {
    std::vector<double> y(40);
    for (std::size_t t = 0; t < y.size(); ++t) y[t] = static_cast<double>(t);
    const SmoothedSeries sm = moving_average(wrap(y), 9);
    for (std::size_t t = 0; t < y.size(); ++t)
        if (sm.valid[t]) CHECK(sm.values[t] == doctest::Approx(y[t]).epsilon(1e-12));
}

TEST_CASE("window of three on a short ramp") {
    const SmoothedSeries sm = moving_average(wrap({1.0, 2.0, 3.0, 4.0, 5.0}), 3);
    CHECK(sm.valid[0] == 0);
    CHECK(sm.valid[4] == 0);
    CHECK(sm.values[1] == doctest::Approx(2.0));
    CHECK(sm.values[2] == doctest::Approx(3.0));
    CHECK(sm.values[3] == doctest::Approx(4.0));
}

TEST_CASE("validity mask matches the window geometry") {
    for (std::size_t m : {2UL, 5UL, 10UL, 25UL}) {
        const std::size_t n = 60;
        Rng rng = rng_stream(1, m);
        const SmoothedSeries sm = moving_average(wrap(rng.normals(n)), m);
        const std::size_t left = m / 2;
        const std::size_t right = m - 1 - left;
        for (std::size_t t = 0; t < n; ++t)
            CHECK(static_cast<bool>(sm.valid[t]) == (t >= left && t + right < n));
    }
    CHECK_THROWS(moving_average(wrap({1.0, 2.0}), 3));
}

TEST_CASE("smoothers commute with affine maps") {
    Rng rng = rng_stream(2, 0);
    const std::vector<double> y = rng.normals(90);
    std::vector<double> z(y.size());
    for (std::size_t t = 0; t < y.size(); ++t) z[t] = -2.0 * y[t] + 7.0;

    const SmoothedSeries my = moving_average(wrap(y), 10);
    const SmoothedSeries mz = moving_average(wrap(z), 10);
    for (std::size_t t = 0; t < y.size(); ++t)
        if (my.valid[t])
            CHECK(mz.values[t] == doctest::Approx(-2.0 * my.values[t] + 7.0).epsilon(1e-10));

    const SmoothedSeries ly = loess_smooth(wrap(y), 1.0 / 3.0);
    const SmoothedSeries lz = loess_smooth(wrap(z), 1.0 / 3.0);
    for (std::size_t t = 0; t < y.size(); ++t)
        CHECK(lz.values[t] == doctest::Approx(-2.0 * ly.values[t] + 7.0).epsilon(1e-9));
}

TEST_CASE("loess reproduces a global quadratic exactly") {
    std::vector<double> y(80);
    for (std::size_t t = 0; t < y.size(); ++t) {
        const double x = static_cast<double>(t);
        y[t] = 2.0 + 0.3 * x + 0.01 * x * x;
    }
    const SmoothedSeries sm = loess_smooth(wrap(y), 1.0 / 3.0);
    for (std::size_t t = 0; t < y.size(); ++t)
        CHECK(sm.values[t] == doctest::Approx(y[t]).epsilon(1e-6));
}

TEST_CASE("loess of a constant is constant and every position is valid") {
    const SmoothedSeries sm = loess_smooth(wrap(std::vector<double>(50, 1.25)), 0.4);
    for (std::size_t t = 0; t < sm.values.size(); ++t) {
        CHECK(sm.valid[t] == 1);
        CHECK(sm.values[t] == doctest::Approx(1.25).epsilon(1e-10));
    }
}

TEST_CASE("loess matches the direct weighted-least-squares oracle") {
    Rng rng = rng_stream(3, 0);
    const std::vector<double> y = rng.normals(500);
    const SmoothedSeries sm = loess_smooth(wrap(y), 1.0 / 3.0);
    Rng pick = rng_stream(4, 0);
    for (int k = 0; k < 10; ++k) {
        const std::size_t pos = pick.next_below(500);
        CHECK(sm.values[pos] ==
              doctest::Approx(oracles::loess_oracle_at(y, 1.0 / 3.0, pos)).epsilon(1e-8));
    }
}

TEST_CASE("loess validates the window size") {
    CHECK_THROWS(loess_smooth(wrap(std::vector<double>(10, 1.0)), 0.2)); // window 2 < degree+2
    CHECK_THROWS(loess_smooth(wrap(std::vector<double>(10, 1.0)), 1.5));
}

// ---------------------------------------------------------------------------

TEST_CASE("transfer function limits and nulls") {
    CHECK(ma_transfer(25, 1e-12) == doctest::Approx(1.0));
    CHECK(ma_transfer(10, 1e-12) == doctest::Approx(1.0));
    CHECK(std::fabs(ma_transfer(25, 2.0 * M_PI / 25.0)) < 1e-10);
    CHECK(std::fabs(ma_transfer(10, 2.0 * M_PI / 10.0)) < 1e-10);
}

TEST_CASE("transfer gain stays within the unit band") {
    for (std::size_t m : {2UL, 5UL, 10UL, 25UL, 50UL}) {
        for (int i = 1; i <= 2000; ++i) {
            const double w = M_PI * static_cast<double>(i) / 2000.0;
            const double f = ma_transfer(m, w);
            CHECK(f >= 0.0);
            CHECK(f <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("the 25-term window peaks near a 17.5-year period") {
    const TransferPeak peak = ma_transfer_peak(25);
    CHECK(peak.period >= 16.5);
    CHECK(peak.period <= 18.5);
    CHECK(peak.gain > 0.0);
    CHECK(peak.gain < 0.1);
}

// ---------------------------------------------------------------------------

TEST_CASE("slutsky bundle is aligned and averaging contracts the range") {
    SlutskyOptions opt;
    opt.n = 200;
    opt.seed = 42;
    const SlutskyBundle bundle = slutsky_demo(opt);
    CHECK(bundle.raw.size() == 200);
    REQUIRE(bundle.ma.size() == 2);
    CHECK(bundle.ma[0].values.size() == 200);
    CHECK(bundle.loess.values.size() == 200);
    CHECK(bundle.bh_posterior_mean.size() == 200);

    auto range_of = [](const std::vector<double>& v, const std::vector<uint8_t>* valid) {
        double lo = 1e300, hi = -1e300;
        for (std::size_t t = 0; t < v.size(); ++t) {
            if (valid && !(*valid)[t]) continue;
            lo = std::min(lo, v[t]);
            hi = std::max(hi, v[t]);
        }
        return hi - lo;
    };
    const double raw_range = range_of(bundle.raw.values, nullptr);
    const double ma25_range = range_of(bundle.ma[1].values, &bundle.ma[1].valid);
    CHECK(ma25_range < raw_range);
    CHECK_THROWS(slutsky_demo({50, 1, {10}, 0.3, {}}));
}
