#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "modsample/core.hpp"
#include "modsample/metrics.hpp"
#include "modsample/signal.hpp"

namespace modsample::lp {

struct Params {
    int taps = 12;                      // P
    std::vector<double> autocov;        // r[0..P] at least
    std::vector<double> init_samples;   // P known unfolded samples
    double lambda = 1.0;
    double ridge = -1.0;                // < 0 -> default 1e-8 * r[0]
};

/// One-step prediction coefficients from the autocovariance: solve the order-P
/// Yule-Walker normal equations, with ridge*I added to keep near-singular
/// sinusoidal covariances solvable.
inline std::vector<double> lp_coeffs(const std::vector<double>& autocov, int taps,
                                     double ridge = -1.0) {
    if (taps < 1) throw std::invalid_argument("lp_coeffs: taps must be >= 1");
    if (autocov.size() < static_cast<std::size_t>(taps) + 1)
        throw std::invalid_argument("lp_coeffs: need at least taps+1 autocovariance lags");
    if (!(autocov[0] > 0.0)) throw std::invalid_argument("lp_coeffs: autocov[0] must be > 0");
    if (ridge < 0.0) ridge = 1e-8 * autocov[0];

    Eigen::MatrixXd R(taps, taps);
    Eigen::VectorXd r(taps);
    for (int i = 0; i < taps; ++i) {
        r(i) = autocov[static_cast<std::size_t>(i) + 1];
        for (int j = 0; j < taps; ++j)
            R(i, j) = autocov[static_cast<std::size_t>(std::abs(i - j))];
        R(i, i) += ridge;
    }
    Eigen::LDLT<Eigen::MatrixXd> ldlt(R);
    if (ldlt.info() != Eigen::Success)
        throw std::runtime_error("lp_coeffs: normal equations not solvable");
    const Eigen::VectorXd h = ldlt.solve(r);
    if (!h.allFinite()) throw std::runtime_error("lp_coeffs: normal equations not solvable");
    return std::vector<double>(h.data(), h.data() + taps);
}

/// Autocovariance of a spec's waveform. Sine families have the closed form
/// (uniform-phase stationarization); keyed waveforms fall back to the sample
/// autocovariance of a long noiseless realization. noise_var adds to lag 0;
/// pass a negative value to use the spec's own (noise_pct * nominal peak)^2.
inline std::vector<double> autocov_from_spec(const SignalSpec& spec, double fs_hz, int lags,
                                             double noise_var = -1.0) {
    if (lags < 1) throw std::invalid_argument("autocov_from_spec: lags must be >= 1");
    if (noise_var < 0.0) {
        const double sigma = spec.noise_pct * nominal_peak(spec);
        noise_var = sigma * sigma;
    }
    std::vector<double> r(static_cast<std::size_t>(lags) + 1, 0.0);
    const double two_pi = 2.0 * std::numbers::pi;
    switch (spec.family) {
        case WaveFamily::sine: {
            const double p = spec.amplitude_v * spec.amplitude_v / 2.0;
            for (int k = 0; k <= lags; ++k)
                r[k] = p * std::cos(two_pi * spec.f1_hz * k / fs_hz);
            break;
        }
        case WaveFamily::two_sine: {
            const double p = spec.amplitude_v * spec.amplitude_v / 8.0;
            for (int k = 0; k <= lags; ++k)
                r[k] = p * (std::cos(two_pi * spec.f1_hz * k / fs_hz) +
                            std::cos(two_pi * spec.f2_hz * k / fs_hz));
            break;
        }
        case WaveFamily::fsk:
        case WaveFamily::ask: {
            SignalSpec clean = spec;
            clean.noise_pct = 0.0;
            const std::size_t n = 1u << 16;
            const SampleSeq x = gen_signal(clean, fs_hz, n);
            for (int k = 0; k <= lags; ++k) {
                double acc = 0.0;
                for (std::size_t i = 0; i + k < n; ++i)
                    acc += x.values[i] * x.values[i + static_cast<std::size_t>(k)];
                r[k] = acc / static_cast<double>(n);
            }
            break;
        }
    }
    r[0] += noise_var;
    return r;
}

/// Recursive unfold: seed with the known prefix, predict each next sample from
/// the recovered past, then snap the prediction to the observed modulo sample.
/// After the refinement the estimate always folds back onto y[n]; the method
/// derails only when a prediction misses the true sample by lambda or more,
/// after which the output rides 2*lambda off until the next miss.
inline ReconResult lp_unfold(const SampleSeq& y, const Params& params) {
    const int taps = params.taps;
    const double lam = params.lambda;
    if (taps < 1) throw std::invalid_argument("lp_unfold: taps must be >= 1");
    if (y.size() <= static_cast<std::size_t>(taps))
        throw std::invalid_argument("lp_unfold: sequence not longer than taps");
    if (params.init_samples.size() != static_cast<std::size_t>(taps))
        throw std::invalid_argument("lp_unfold: need exactly taps initial samples");

    const std::vector<double> h = lp_coeffs(params.autocov, taps, params.ridge);

    ReconResult res;
    res.g_hat.sample_rate_hz = y.sample_rate_hz;
    res.g_hat.values = params.init_samples;
    res.g_hat.values.resize(y.size());
    for (std::size_t n = static_cast<std::size_t>(taps); n < y.size(); ++n) {
        double pred = 0.0;
        for (int i = 1; i <= taps; ++i)
            pred += h[static_cast<std::size_t>(i) - 1] * res.g_hat.values[n - static_cast<std::size_t>(i)];
        res.g_hat.values[n] = pred + centered_modulo(y.values[n] - pred, lam);
    }
    res.eps_hat.reserve(y.size());
    for (std::size_t n = 0; n < y.size(); ++n) {
        const double m = (res.g_hat.values[n] - y.values[n]) / (2.0 * lam);
        res.eps_hat.push_back(static_cast<int>(std::llround(m)));
    }
    return res;
}

}  // namespace modsample::lp
