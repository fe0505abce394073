#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "modsample/adc.hpp"
#include "modsample/signal.hpp"

using namespace modsample;

namespace {

SampleSeq sine(double f, double a, double fs, std::size_t n, int fine = 1) {
    SignalSpec s;
    s.family = WaveFamily::sine;
    s.f1_hz = f;
    s.amplitude_v = a;
    return gen_signal(s, fs, n, fine);
}

double max_tick_increment(const SampleSeq& g) {
    double m = 0.0;
    for (std::size_t j = 0; j + 1 < g.size(); ++j)
        m = std::max(m, std::abs(g.values[j + 1] - g.values[j]));
    return m;
}

}  // namespace

TEST_CASE("quantizer endpoints and clipping") {
    AdcConfig cfg;
    CHECK(quantize(1.3, cfg).code == 4095);
    CHECK(quantize(-2.0, cfg).code == 0);
    const auto clipped = quantize(2.0, cfg);
    CHECK(clipped.code == 4095);
    CHECK_THAT(clipped.dequantized, Catch::Matchers::WithinAbs(1.3, 1e-12));
    // one step is span / (2^bits - 1)
    const auto mid = quantize(0.0, cfg);
    CHECK(std::abs(mid.dequantized) <= 3.3 / 4095.0);
}

TEST_CASE("quantizer is monotone") {
    AdcConfig cfg;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> xs(-3.0, 3.0);
    for (int i = 0; i < 2000; ++i) {
        double a = xs(rng), b = xs(rng);
        if (a > b) std::swap(a, b);
        CHECK(quantize(a, cfg).code <= quantize(b, cfg).code);
    }
}

TEST_CASE("fold_ideal decomposes with the negated count convention") {
    const auto cap = fold_ideal(SampleSeq{{2.5}, 1000}, 1.0);
    CHECK(cap.y.values[0] == 0.5);
    CHECK(cap.k[0] == -1);
    CHECK(cap.gate[0] == 1);

    const auto passthrough = fold_ideal(SampleSeq{{0.1, -0.9, 0.99}, 1000}, 1.0);
    CHECK(passthrough.y.values == std::vector<double>{0.1, -0.9, 0.99});
    CHECK(passthrough.k == SimpleFn{0, 0, 0});

    const auto g = sine(1500, 6.5, 102400, 500);
    const auto cap2 = fold_ideal(g, 1.0);
    const auto back = hw_reconstruct(cap2, 1.0);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(back.values[i] == g.values[i]);
}

TEST_CASE("slow ramp folds exactly once at zero delay") {
    SampleSeq ramp;
    ramp.sample_rate_hz = 1000;
    for (int i = 0; i <= 173; ++i) ramp.values.push_back(2.5 * i / 173.0);
    AdcConfig cfg;
    cfg.delay_ticks = 0;
    cfg.fine_grid_factor = 1;
    cfg.quantize_enabled = false;
    const auto cap = fold_hardware(ramp, cfg, 1000);
    int folds = 0;
    for (std::size_t i = 1; i < cap.k.size(); ++i)
        if (cap.k[i] != cap.k[i - 1]) ++folds;
    CHECK(folds == 1);
    CHECK(cap.k.back() == -1);
    for (std::size_t i = 0; i < cap.y.size(); ++i) {
        CHECK(cap.y.values[i] >= -1.0);
        CHECK(cap.y.values[i] < 1.0);
    }
    CHECK_THAT(cap.y.values.back(), Catch::Matchers::WithinAbs(0.5, 1e-12));
}

TEST_CASE("all-zero input stays quiet") {
    SampleSeq zeros;
    zeros.sample_rate_hz = 102400;
    zeros.values.assign(100 * 16, 0.0);
    AdcConfig cfg;
    const auto cap = fold_hardware(zeros, cfg, 102400);
    for (std::size_t i = 0; i < cap.y.size(); ++i) {
        CHECK(std::abs(cap.y.values[i]) <= 3.3 / 4095.0);  // one quantizer step
        CHECK(cap.k[i] == 0);
        CHECK(cap.gate[i] == 1);
    }
}

TEST_CASE("feedback delay produces overshoot and three folds on the reference sine") {
    const auto g_fine = sine(1500, 6.5, 102400, 500, 16);
    AdcConfig cfg;  // delay_ticks = 2 by default
    const auto cap = fold_hardware(g_fine, cfg, 102400);
    double max_y = 0.0;
    int max_k = 0;
    std::size_t gated_off = 0;
    for (std::size_t i = 0; i < cap.y.size(); ++i) {
        max_y = std::max(max_y, std::abs(cap.y.values[i]));
        max_k = std::max(max_k, std::abs(cap.k[i]));
        if (!cap.gate[i]) ++gated_off;
    }
    CHECK(max_y > 1.0);
    CHECK(max_k == 3);
    CHECK(gated_off > 0);
}

TEST_CASE("zero delay with the quantizer off matches the ideal path exactly") {
    const auto g_fine = sine(1500, 6.5, 102400, 500, 16);
    AdcConfig cfg;
    cfg.delay_ticks = 0;
    cfg.quantize_enabled = false;
    const auto hw = fold_hardware(g_fine, cfg, 102400);

    SampleSeq g_coarse;
    g_coarse.sample_rate_hz = 102400;
    for (std::size_t j = 0; j < g_fine.size(); j += 16) g_coarse.values.push_back(g_fine.values[j]);
    const auto ideal = fold_ideal(g_coarse, cfg.lambda_volts);

    REQUIRE(hw.y.size() == ideal.y.size());
    for (std::size_t i = 0; i < hw.y.size(); ++i) {
        CHECK(hw.y.values[i] == ideal.y.values[i]);
        CHECK(hw.k[i] == ideal.k[i]);
        CHECK(hw.gate[i] == 1);
    }
}

TEST_CASE("gated samples stay within the overshoot bound") {
    const auto g_fine = sine(2500, 10.0, 102400, 500, 16);
    AdcConfig cfg;
    cfg.quantize_enabled = false;  // compare the pre-quantization value
    const auto cap = fold_hardware(g_fine, cfg, 102400);
    const double bound =
        cfg.lambda_volts + max_tick_increment(g_fine) * cfg.delay_ticks + 1e-12;
    for (std::size_t i = 0; i < cap.y.size(); ++i)
        if (cap.gate[i]) CHECK(std::abs(cap.y.values[i]) <= bound);
}

TEST_CASE("fold counter saturates at the configured limit") {
    const auto g_fine = sine(1500, 20.0, 102400, 500, 16);  // needs 10 folds at the peak
    AdcConfig cfg;
    const auto cap = fold_hardware(g_fine, cfg, 102400);
    int max_k = 0;
    for (int k : cap.k) max_k = std::max(max_k, std::abs(k));
    CHECK(max_k == cfg.max_fold_count);
}

TEST_CASE("zero-delay single-grid hardware equals ideal on smooth inputs") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> freqs(100.0, 3000.0);
    std::uniform_real_distribution<double> amps(0.5, 4.0);
    for (int trial = 0; trial < 20; ++trial) {
        SampleSeq g;
        g.sample_rate_hz = 102400;
        const double f1 = freqs(rng), f2 = freqs(rng);
        const double a1 = amps(rng), a2 = amps(rng);
        for (int n = 0; n < 400; ++n) {
            const double t = n / g.sample_rate_hz;
            g.values.push_back(a1 * std::sin(2 * std::numbers::pi * f1 * t) +
                               a2 * std::sin(2 * std::numbers::pi * f2 * t));
        }
        REQUIRE(max_tick_increment(g) < 2.0);
        AdcConfig cfg;
        cfg.delay_ticks = 0;
        cfg.fine_grid_factor = 1;
        cfg.quantize_enabled = false;
        cfg.max_fold_count = 1 << 20;
        const auto hw = fold_hardware(g, cfg, g.sample_rate_hz);
        const auto ideal = fold_ideal(g, cfg.lambda_volts);
        for (std::size_t i = 0; i < g.size(); ++i) {
            CHECK(hw.y.values[i] == ideal.y.values[i]);
            CHECK(hw.k[i] == ideal.k[i]);
        }
    }
}

TEST_CASE("hw_reconstruct with lagged counts spikes by one fold at transitions") {
    const auto g = sine(1500, 3.5, 102400, 300);
    AdcConfig cfg;
    cfg.delay_ticks = 0;
    cfg.fine_grid_factor = 1;
    cfg.quantize_enabled = false;
    cfg.k_lag_samples = 1;
    const auto cap = fold_hardware(g, cfg, 102400);
    const auto recon = hw_reconstruct(cap, cfg.lambda_volts);
    bool spiked = false;
    for (std::size_t i = 1; i < recon.size(); ++i) {
        const double err = std::abs(recon.values[i] - g.values[i]);
        if (err > 1e-9) {
            spiked = true;
            CHECK_THAT(err, Catch::Matchers::WithinAbs(2.0, 1e-9));  // exactly one 2*lambda step
        }
    }
    CHECK(spiked);
}

TEST_CASE("hw_reconstruct leaves unfolded captures alone") {
    Capture cap;
    cap.fs_hz = 1000;
    cap.y.sample_rate_hz = 1000;
    cap.y.values = {0.1, -0.5, 0.7};
    cap.k = {0, 0, 0};
    cap.gate = {1, 1, 1};
    const auto recon = hw_reconstruct(cap, 1.0);
    CHECK(recon.values == cap.y.values);
}

TEST_CASE("fold_hardware validates the fine-grid length") {
    SampleSeq g;
    g.sample_rate_hz = 1000;
    g.values.assign(33, 0.0);
    AdcConfig cfg;  // fine_grid_factor 16 does not divide 33
    CHECK_THROWS_AS(fold_hardware(g, cfg, 1000), std::invalid_argument);
}
