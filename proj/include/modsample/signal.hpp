#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "modsample/core.hpp"

namespace modsample {

enum class WaveFamily { sine, two_sine, fsk, ask };

inline const char* to_string(WaveFamily f) {
    switch (f) {
        case WaveFamily::sine: return "sine";
        case WaveFamily::two_sine: return "two_sine";
        case WaveFamily::fsk: return "fsk";
        case WaveFamily::ask: return "ask";
    }
    return "?";
}

inline WaveFamily wave_family_from_string(const std::string& s) {
    if (s == "sine") return WaveFamily::sine;
    if (s == "two_sine") return WaveFamily::two_sine;
    if (s == "fsk") return WaveFamily::fsk;
    if (s == "ask") return WaveFamily::ask;
    throw std::invalid_argument("unknown wave family: " + s);
}

/// Parametric description of a test waveform.
///
/// sine:     amplitude_v * sin(2*pi*f1_hz*t + phase_rad)
/// two_sine: (amplitude_v/2) * [sin(2*pi*f1_hz*t + phase) + sin(2*pi*f2_hz*t + phase)]
/// fsk:      amplitude_v * sin(2*pi*f_bit*t + phase), f_bit = f1_hz for bit 1, f2_hz for bit 0
/// ask:      a_bit * sin(2*pi*f1_hz*t + phase), a_bit = amplitude_v for bit 1, amplitude2_v for bit 0
struct SignalSpec {
    WaveFamily family = WaveFamily::sine;
    double f1_hz = 1000.0;
    double f2_hz = 0.0;
    double amplitude_v = 1.0;     // A (A1 for ask)
    double amplitude2_v = 0.0;    // A2 (ask only)
    double phase_rad = 0.0;
    std::vector<int> bits;        // fsk/ask message; empty -> alternating 1,0,1,...
    double baud_hz = 500.0;       // fsk/ask bit rate
    bool phase_continuous = false;  // fsk: carry phase across bit boundaries
    double noise_pct = 0.0;
    std::uint64_t seed = 0;
};

/// Largest amplitude the noiseless waveform can reach.
inline double nominal_peak(const SignalSpec& spec) {
    if (spec.family == WaveFamily::ask) return std::max(spec.amplitude_v, spec.amplitude2_v);
    return spec.amplitude_v;
}

inline double max_signal_freq(const SignalSpec& spec) {
    switch (spec.family) {
        case WaveFamily::sine: return spec.f1_hz;
        case WaveFamily::two_sine:
        case WaveFamily::fsk: return std::max(spec.f1_hz, spec.f2_hz);
        case WaveFamily::ask: return spec.f1_hz;
    }
    return spec.f1_hz;
}

namespace detail {

inline int bit_at(const std::vector<int>& bits, std::size_t k) {
    if (bits.empty()) return (k % 2 == 0) ? 1 : 0;  // default alternating pattern
    return bits[k % bits.size()] ? 1 : 0;
}

}  // namespace detail

/// Deterministic waveform samples at rate fine_grid_factor*fs_hz, n*fine_grid_factor
/// samples total. Bit boundaries land on whole coarse samples (round(fs/baud)),
/// so generating on the fine grid and decimating matches direct generation.
inline SampleSeq gen_signal(const SignalSpec& spec, double fs_hz, std::size_t n,
                            int fine_grid_factor = 1) {
    if (n < 1) throw std::invalid_argument("gen_signal: need at least one sample");
    if (!(fs_hz > 0.0)) throw std::invalid_argument("gen_signal: fs must be > 0");
    if (fine_grid_factor < 1) throw std::invalid_argument("gen_signal: fine_grid_factor must be >= 1");
    const double fmax = max_signal_freq(spec);
    if (fmax >= fs_hz / 2.0)
        throw std::invalid_argument("gen_signal: frequency " + std::to_string(fmax) +
                                    " Hz aliases at fs=" + std::to_string(fs_hz));

    const std::size_t m = static_cast<std::size_t>(fine_grid_factor);
    const double fs_gen = fs_hz * static_cast<double>(m);
    const double two_pi = 2.0 * std::numbers::pi;

    SampleSeq out;
    out.sample_rate_hz = fs_gen;
    out.values.resize(n * m);

    const bool keyed = spec.family == WaveFamily::fsk || spec.family == WaveFamily::ask;
    std::size_t bit_len_fine = 0;
    if (keyed) {
        if (!(spec.baud_hz > 0.0)) throw std::invalid_argument("gen_signal: baud must be > 0");
        const std::size_t bit_len_coarse =
            static_cast<std::size_t>(std::llround(fs_hz / spec.baud_hz));
        if (bit_len_coarse < 1) throw std::invalid_argument("gen_signal: baud exceeds sample rate");
        bit_len_fine = bit_len_coarse * m;
    }

    double phase_acc = 0.0;  // fsk phase-continuous mode
    for (std::size_t j = 0; j < out.values.size(); ++j) {
        const double t = static_cast<double>(j) / fs_gen;
        double v = 0.0;
        switch (spec.family) {
            case WaveFamily::sine:
                v = spec.amplitude_v * std::sin(two_pi * spec.f1_hz * t + spec.phase_rad);
                break;
            case WaveFamily::two_sine:
                v = 0.5 * spec.amplitude_v *
                    (std::sin(two_pi * spec.f1_hz * t + spec.phase_rad) +
                     std::sin(two_pi * spec.f2_hz * t + spec.phase_rad));
                break;
            case WaveFamily::fsk: {
                const int b = detail::bit_at(spec.bits, j / bit_len_fine);
                const double f = b ? spec.f1_hz : spec.f2_hz;
                if (spec.phase_continuous) {
                    v = spec.amplitude_v * std::sin(phase_acc + spec.phase_rad);
                    phase_acc += two_pi * f / fs_gen;
                } else {
                    v = spec.amplitude_v * std::sin(two_pi * f * t + spec.phase_rad);
                }
                break;
            }
            case WaveFamily::ask: {
                const int b = detail::bit_at(spec.bits, j / bit_len_fine);
                const double a = b ? spec.amplitude_v : spec.amplitude2_v;
                v = a * std::sin(two_pi * spec.f1_hz * t + spec.phase_rad);
                break;
            }
        }
        out.values[j] = v;
    }
    return out;
}

/// Zero-mean Gaussian draws with the given standard deviation, reproducible per seed.
inline std::vector<double> gaussian_draws(std::size_t n, double sigma, std::uint64_t seed) {
    std::vector<double> w(n, 0.0);
    if (sigma == 0.0) return w;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, sigma);
    for (auto& v : w) v = dist(rng);
    return w;
}

/// g plus white Gaussian noise of standard deviation noise_pct * peak_v.
inline SampleSeq add_noise(const SampleSeq& g, double noise_pct, double peak_v,
                           std::uint64_t seed) {
    if (noise_pct < 0.0) throw std::invalid_argument("add_noise: noise_pct must be >= 0");
    if (peak_v < 0.0) throw std::invalid_argument("add_noise: peak_v must be >= 0");
    SampleSeq out = g;
    if (noise_pct == 0.0 || peak_v == 0.0) return out;
    const auto w = gaussian_draws(g.size(), noise_pct * peak_v, seed);
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] += w[i];
    return out;
}

}  // namespace modsample
