#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "modsample/core.hpp"

namespace modsample {

/// Output of a recovery algorithm plus its evaluation against ground truth.
/// Algorithms fill g_hat/eps_hat (and possibly noise_warning); the harness
/// completes the metric fields once the true sequence is known.
struct ReconResult {
    SampleSeq g_hat;
    SimpleFn eps_hat;
    double constant_ambiguity = 0.0;  // multiple of 2*lambda removed before scoring
    double residual_offset = 0.0;     // leftover real constant, diagnostic only
    double nmse_db = 0.0;
    double max_abs_err_v = 0.0;
    bool success = false;
    bool noise_warning = false;       // fold increments rounded from far off an integer
};

inline constexpr double kNmseFloorDb = -300.0;

/// Normalized mean squared error in dB. With align_constant the best multiple
/// of 2*lambda is removed first (the legitimate fold ambiguity); any leftover
/// real offset is a diagnostic and stays in the error.
inline double nmse_db(const SampleSeq& g_hat, const SampleSeq& g, bool align_constant,
                      double lambda) {
    if (g_hat.size() != g.size()) throw std::invalid_argument("nmse_db: length mismatch");
    if (g.size() == 0) throw std::invalid_argument("nmse_db: empty input");
    double shift = 0.0;
    if (align_constant) {
        double mean = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) mean += g_hat.values[i] - g.values[i];
        mean /= static_cast<double>(g.size());
        shift = 2.0 * lambda * std::round(mean / (2.0 * lambda));
    }
    double err2 = 0.0, sig2 = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double e = g_hat.values[i] - shift - g.values[i];
        err2 += e * e;
        sig2 += g.values[i] * g.values[i];
    }
    if (sig2 == 0.0) throw std::invalid_argument("nmse_db: zero-energy reference");
    if (err2 == 0.0) return kNmseFloorDb;
    const double db = 10.0 * std::log10(err2 / sig2);
    return db < kNmseFloorDb ? kNmseFloorDb : db;
}

/// Fill the metric fields of a result from ground truth. success means the
/// aligned error never reaches threshold_v anywhere (default lambda/2: well
/// under a single 2*lambda fold error).
inline void evaluate(ReconResult& res, const SampleSeq& g, double lambda,
                     double threshold_v = -1.0) {
    if (res.g_hat.size() != g.size()) throw std::invalid_argument("evaluate: length mismatch");
    if (threshold_v < 0.0) threshold_v = lambda / 2.0;
    double mean = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) mean += res.g_hat.values[i] - g.values[i];
    mean /= static_cast<double>(g.size());
    res.constant_ambiguity = 2.0 * lambda * std::round(mean / (2.0 * lambda));
    res.residual_offset = mean - res.constant_ambiguity;
    res.max_abs_err_v = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double e = std::abs(res.g_hat.values[i] - res.constant_ambiguity - g.values[i]);
        if (e > res.max_abs_err_v) res.max_abs_err_v = e;
    }
    res.nmse_db = nmse_db(res.g_hat, g, true, lambda);
    res.success = res.max_abs_err_v < threshold_v;
}

/// success test on an already-evaluated result at a non-default threshold
inline bool success(const ReconResult& res, double threshold_v) {
    return res.max_abs_err_v < threshold_v;
}

}  // namespace modsample
