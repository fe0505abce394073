#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "modsample/core.hpp"

namespace modsample {

/// Behavioral parameters of the folding ADC front end.
struct AdcConfig {
    double lambda_volts = 1.0;    // comparator threshold; fold step is 2*lambda
    int max_fold_count = 7;       // 3-bit fold counter limit (sign handled separately)
    int delay_ticks = 2;          // feedback-loop latency, in fine-grid ticks
    int fine_grid_factor = 16;    // fine ticks per output sample
    double bias_volts = 2.0;      // level shift ahead of the unipolar converter
    double adc_low_volts = 0.0;   // converter collection range
    double adc_high_volts = 3.3;
    int adc_bits = 12;
    int k_lag_samples = 0;        // emitted fold counts lag the samples by this many rows
    bool quantize_enabled = true;

    void validate() const {
        if (!(lambda_volts > 0.0)) throw std::invalid_argument("adc: lambda must be > 0");
        if (max_fold_count < 1) throw std::invalid_argument("adc: max_fold_count must be >= 1");
        if (delay_ticks < 0) throw std::invalid_argument("adc: delay_ticks must be >= 0");
        if (fine_grid_factor < 1) throw std::invalid_argument("adc: fine_grid_factor must be >= 1");
        if (!(adc_low_volts < adc_high_volts)) throw std::invalid_argument("adc: bad range");
        if (adc_bits < 1 || adc_bits > 24) throw std::invalid_argument("adc: bits must be in [1,24]");
        if (k_lag_samples < 0) throw std::invalid_argument("adc: k_lag_samples must be >= 0");
    }
};

/// Comparator/counter state at one instant of the folding loop.
struct FoldState {
    int k_signed = 0;   // current fold offset in units of 2*lambda (= -eps once settled)
    bool d1 = false;    // upper comparator: x > lambda
    bool d2 = false;    // lower comparator: x < -lambda
    bool gate = true;   // S = NOR(d1, d2)
};

/// What the host computer logs per capture: folded samples, signed fold
/// counts (Q = 2*lambda*k convention, so k = -eps), and the gate bit.
struct Capture {
    SampleSeq y;
    SimpleFn k;
    std::vector<std::uint8_t> gate;
    AdcConfig cfg;
    double fs_hz = 0.0;
};

struct QuantResult {
    int code = 0;
    double dequantized = 0.0;
};

/// Bias, scale to the converter range, round to a code, and map back to volts.
/// Out-of-range inputs clamp to the end codes (saturation).
inline QuantResult quantize(double x, const AdcConfig& cfg) {
    const double span = cfg.adc_high_volts - cfg.adc_low_volts;
    const double full = static_cast<double>((1 << cfg.adc_bits) - 1);
    double q = std::round((x + cfg.bias_volts - cfg.adc_low_volts) / span * full);
    q = std::min(std::max(q, 0.0), full);
    QuantResult r;
    r.code = static_cast<int>(q);
    r.dequantized = q * span / full + cfg.adc_low_volts - cfg.bias_volts;
    return r;
}

/// Reference path: exact centered modulo per sample, no delay, no quantizer.
inline Capture fold_ideal(const SampleSeq& g, double lambda) {
    Capture cap;
    cap.cfg.lambda_volts = lambda;
    cap.cfg.delay_ticks = 0;
    cap.cfg.fine_grid_factor = 1;
    cap.cfg.quantize_enabled = false;
    cap.fs_hz = g.sample_rate_hz;
    cap.y.sample_rate_hz = g.sample_rate_hz;
    cap.y.values.reserve(g.size());
    cap.k.reserve(g.size());
    cap.gate.assign(g.size(), 1);
    for (double v : g.values) {
        const long long m = fold_count_of(v, lambda);
        const int k = static_cast<int>(-m);
        cap.y.values.push_back(v + 2.0 * lambda * static_cast<double>(k));
        cap.k.push_back(k);
    }
    return cap;
}

/// Tick-by-tick simulation of the feedback folding loop on the fine grid.
///
/// Per tick: x = g + 2*lambda*k with the currently landed fold count; the
/// comparators read x instantaneously; the controller reacts to the comparator
/// state from delay_ticks earlier, changing k by at most one step per landing
/// and ignoring readings that predate the last landing. The sampler's gate bit
/// is the comparator state from delay_ticks ago, so samples taken just after a
/// threshold crossing can sit outside [-lambda, lambda) (overshoot), and a
/// gate-0 row emits the track-and-hold value (last in-range x) instead.
inline Capture fold_hardware(const SampleSeq& g_fine, const AdcConfig& cfg, double fs_hz) {
    cfg.validate();
    const std::size_t m = static_cast<std::size_t>(cfg.fine_grid_factor);
    if (g_fine.size() == 0 || g_fine.size() % m != 0)
        throw std::invalid_argument("fold_hardware: fine-grid length must be a positive multiple of fine_grid_factor");
    const std::size_t n = g_fine.size() / m;
    const double lam = cfg.lambda_volts;
    const int d = cfg.delay_ticks;

    Capture cap;
    cap.cfg = cfg;
    cap.fs_hz = fs_hz;
    cap.y.sample_rate_hz = fs_hz;
    cap.y.values.resize(n);
    cap.k.resize(n);
    cap.gate.resize(n);

    // comparator trip history over the last delay_ticks+1 ticks:
    // -1 fold down (x > lambda), +1 fold up (x < -lambda), 0 in range
    std::vector<signed char> trip_hist(static_cast<std::size_t>(d) + 1, 0);
    FoldState st;
    long long oldest_actionable_view = 0;  // comparator readings before this tick are pre-fold
    double held_x = 0.0;
    SimpleFn k_raw(n, 0);

    auto comparator = [lam](double x) -> int { return x > lam ? -1 : (x < -lam ? +1 : 0); };

    for (std::size_t j = 0; j < g_fine.size(); ++j) {
        const std::size_t slot = j % trip_hist.size();
        const std::size_t view_slot = (j + 1) % trip_hist.size();  // entry from tick j-d

        // land the fold commanded by the comparator reading from d ticks ago
        if (d > 0 && static_cast<long long>(j) - d >= oldest_actionable_view) {
            const int cmd = trip_hist[view_slot];
            if (cmd != 0) {
                const int k_next = st.k_signed + cmd;
                if (std::abs(k_next) <= cfg.max_fold_count) {
                    st.k_signed = k_next;
                    oldest_actionable_view = static_cast<long long>(j);
                }
            }
        }

        double x = g_fine.values[j] + 2.0 * lam * static_cast<double>(st.k_signed);
        int trip = comparator(x);
        if (d == 0 && trip != 0) {
            // zero-delay loop settles within the tick (one fold per tick)
            const int k_next = st.k_signed + trip;
            if (std::abs(k_next) <= cfg.max_fold_count) {
                st.k_signed = k_next;
                x = g_fine.values[j] + 2.0 * lam * static_cast<double>(st.k_signed);
                trip = comparator(x);
            }
        }
        trip_hist[slot] = static_cast<signed char>(trip);
        st.d1 = trip < 0;
        st.d2 = trip > 0;
        if (trip == 0) held_x = x;

        if (j % m == 0) {
            const std::size_t s = j / m;
            bool gate;
            if (d == 0) {
                gate = trip == 0;
            } else if (static_cast<long long>(j) - d < 0) {
                gate = true;  // loop assumed settled before the capture starts
            } else {
                gate = trip_hist[view_slot] == 0;
            }
            const double emit = gate ? x : held_x;
            cap.y.values[s] = cfg.quantize_enabled ? quantize(emit, cfg).dequantized : emit;
            cap.gate[s] = gate ? 1 : 0;
            k_raw[s] = st.k_signed;
        }
    }

    for (std::size_t s = 0; s < n; ++s) {
        const long long src = static_cast<long long>(s) - cfg.k_lag_samples;
        cap.k[s] = src >= 0 ? k_raw[static_cast<std::size_t>(src)] : 0;
    }
    return cap;
}

/// Device-side unfold using the logged fold counts: g_hat = y - 2*lambda*k.
/// With lagged or gated captures this reproduces the isolated outliers seen
/// at fold instants; recovery algorithms work from y alone instead.
inline SampleSeq hw_reconstruct(const Capture& cap, double lambda) {
    if (cap.y.size() != cap.k.size())
        throw std::invalid_argument("hw_reconstruct: capture lengths differ");
    SampleSeq g;
    g.sample_rate_hz = cap.y.sample_rate_hz;
    g.values.reserve(cap.y.size());
    for (std::size_t i = 0; i < cap.y.size(); ++i)
        g.values.push_back(cap.y.values[i] - 2.0 * lambda * static_cast<double>(cap.k[i]));
    return g;
}

}  // namespace modsample
