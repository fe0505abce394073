#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "modsample/signal.hpp"

using namespace modsample;

namespace {

SignalSpec sine_spec(double f, double a) {
    SignalSpec s;
    s.family = WaveFamily::sine;
    s.f1_hz = f;
    s.amplitude_v = a;
    return s;
}

}  // namespace

TEST_CASE("sine reaches its amplitude within one period") {
    const auto g = gen_signal(sine_spec(1500, 6.5), 102400, 500);
    const std::size_t period = static_cast<std::size_t>(102400.0 / 1500.0) + 1;
    double peak = 0.0;
    for (std::size_t i = 0; i < period; ++i) peak = std::max(peak, std::abs(g.values[i]));
    CHECK(peak > 6.49);
    CHECK(peak <= 6.5 + 1e-12);
}

TEST_CASE("two-sine starts at zero and splits the amplitude") {
    SignalSpec s;
    s.family = WaveFamily::two_sine;
    s.f1_hz = 500;
    s.f2_hz = 2500;
    s.amplitude_v = 6.5;
    const auto g = gen_signal(s, 102400, 500);
    CHECK(g.values[0] == 0.0);
    for (double v : g.values) CHECK(std::abs(v) <= 6.5 + 1e-12);
}

TEST_CASE("fsk switches carrier frequency per bit") {
    SignalSpec s;
    s.family = WaveFamily::fsk;
    s.f1_hz = 500;
    s.f2_hz = 1500;
    s.amplitude_v = 4.5;
    s.bits = {1, 0};
    const double fs = 102400;
    const auto g = gen_signal(s, fs, 500);
    const std::size_t bit_len = static_cast<std::size_t>(std::llround(fs / s.baud_hz));
    REQUIRE(bit_len == 205);
    const double two_pi = 2.0 * std::numbers::pi;
    double peak1 = 0.0, peak2 = 0.0;
    for (std::size_t n = 0; n < bit_len; ++n) {
        const double t = n / fs;
        CHECK_THAT(g.values[n], Catch::Matchers::WithinAbs(4.5 * std::sin(two_pi * 500 * t), 1e-12));
        peak1 = std::max(peak1, std::abs(g.values[n]));
    }
    for (std::size_t n = bit_len; n < 2 * bit_len; ++n) {
        const double t = n / fs;
        CHECK_THAT(g.values[n], Catch::Matchers::WithinAbs(4.5 * std::sin(two_pi * 1500 * t), 1e-12));
        peak2 = std::max(peak2, std::abs(g.values[n]));
    }
    CHECK(peak1 > 4.4);
    CHECK(peak2 > 4.4);
}

TEST_CASE("ask keys the amplitude per bit") {
    SignalSpec s;
    s.family = WaveFamily::ask;
    s.f1_hz = 1500;
    s.amplitude_v = 4.5;
    s.amplitude2_v = 2.5;
    s.bits = {1, 0};
    const double fs = 102400;
    const auto g = gen_signal(s, fs, 500);
    const std::size_t bit_len = 205;
    const double two_pi = 2.0 * std::numbers::pi;
    for (std::size_t n = 0; n < 2 * bit_len; ++n) {
        const double a = n < bit_len ? 4.5 : 2.5;
        const double t = n / fs;
        CHECK_THAT(g.values[n],
                   Catch::Matchers::WithinAbs(a * std::sin(two_pi * 1500 * t), 1e-12));
    }
    CHECK(nominal_peak(s) == 4.5);
}

TEST_CASE("generator rejects aliasing frequencies") {
    CHECK_THROWS_AS(gen_signal(sine_spec(51200, 1.0), 102400, 16), std::invalid_argument);
    CHECK_THROWS_AS(gen_signal(sine_spec(60000, 1.0), 102400, 16), std::invalid_argument);
}

TEST_CASE("noiseless output never exceeds the nominal peak") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> freqs(100.0, 4000.0);
    std::uniform_real_distribution<double> amps(0.5, 12.0);
    std::uniform_real_distribution<double> phases(0.0, 6.28);
    for (int trial = 0; trial < 40; ++trial) {
        SignalSpec s;
        s.family = static_cast<WaveFamily>(trial % 4);
        s.f1_hz = freqs(rng);
        s.f2_hz = freqs(rng);
        s.amplitude_v = amps(rng);
        s.amplitude2_v = amps(rng);
        s.phase_rad = phases(rng);
        const auto g = gen_signal(s, 102400, 300);
        const double bound = nominal_peak(s);
        for (double v : g.values) CHECK(std::abs(v) <= bound + 1e-12);
    }
}

TEST_CASE("fine-grid generation decimates to the coarse grid") {
    for (int fam = 0; fam < 4; ++fam) {
        SignalSpec s;
        s.family = static_cast<WaveFamily>(fam);
        s.f1_hz = 1500;
        s.f2_hz = 2500;
        s.amplitude_v = 6.5;
        s.amplitude2_v = 2.5;
        const auto coarse = gen_signal(s, 102400, 400);
        const auto fine = gen_signal(s, 102400, 400, 16);
        REQUIRE(fine.size() == 400 * 16);
        CHECK(fine.sample_rate_hz == 102400.0 * 16);
        for (std::size_t n = 0; n < coarse.size(); ++n)
            CHECK_THAT(fine.values[n * 16],
                       Catch::Matchers::WithinAbs(coarse.values[n], 1e-11));
    }
}

TEST_CASE("keyed bit boundaries land on whole samples") {
    SignalSpec s;
    s.family = WaveFamily::ask;
    s.f1_hz = 900;
    s.amplitude_v = 2.0;
    s.amplitude2_v = 0.0;  // bit 0 silences the carrier entirely
    s.bits = {1, 0};
    s.baud_hz = 700;
    const double fs = 102400;
    const std::size_t bit_len = static_cast<std::size_t>(std::llround(fs / 700.0));
    const auto g = gen_signal(s, fs, 3 * bit_len);
    for (std::size_t n = bit_len; n < 2 * bit_len; ++n) CHECK(g.values[n] == 0.0);
    CHECK(g.values[2 * bit_len + bit_len / 2] != 0.0);
}

TEST_CASE("add_noise contract") {
    SampleSeq g;
    g.values.assign(100000, 1.0);
    g.sample_rate_hz = 1000;

    const auto same = add_noise(g, 0.0, 6.5, 42);
    CHECK(same.values == g.values);

    const auto noisy = add_noise(g, 0.05, 6.5, 42);
    double mean = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) mean += noisy.values[i] - g.values[i];
    mean /= static_cast<double>(g.size());
    double var = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double d = noisy.values[i] - g.values[i] - mean;
        var += d * d;
    }
    const double sd = std::sqrt(var / static_cast<double>(g.size() - 1));
    CHECK(sd > 0.325 * 0.9);
    CHECK(sd < 0.325 * 1.1);

    const auto again = add_noise(g, 0.05, 6.5, 42);
    CHECK(again.values == noisy.values);
    const auto other = add_noise(g, 0.05, 6.5, 43);
    CHECK(other.values != noisy.values);

    CHECK_THROWS_AS(add_noise(g, -0.1, 6.5, 1), std::invalid_argument);
}
