#pragma once

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "modsample/core.hpp"
#include "modsample/metrics.hpp"

namespace modsample::usalg {

struct Params {
    int order = 0;          // difference order; 0 = caller must fill via min_order
    double beta_g = 0.0;    // amplitude bound, a member of 2*lambda*Z (0 = unknown)
    double lambda = 1.0;
};

/// Smallest difference order that pins the differenced signal inside
/// [-lambda, lambda], given an amplitude bound and the oversampling factor.
/// Only meaningful for gamma > pi*e; clamped below at 1.
inline int min_order(double lambda, double beta_g, double gamma) {
    if (!(lambda > 0.0) || !(beta_g > 0.0))
        throw std::invalid_argument("min_order: lambda and beta_g must be > 0");
    const double pie = std::numbers::pi * std::numbers::e;
    if (!(gamma > pie))
        throw std::invalid_argument("min_order: no valid order for oversampling factor <= pi*e");
    const double d = (std::log(lambda) - std::log(beta_g)) / std::log(pie / gamma);
    const int order = static_cast<int>(std::ceil(d));
    return order < 1 ? 1 : order;
}

/// Recover the unfolded samples by differencing order times, reading the fold
/// increments off the modulo identity, and anti-differencing back. Each
/// intermediate level is re-centered by the integer mean (the true differenced
/// fold sequence telescopes, so its mean is under one half); the final level is
/// anchored at eps[0] = 0, leaving the usual additive 2*lambda*Z ambiguity.
inline ReconResult usalg_recover(const SampleSeq& y, const Params& params) {
    const int order = params.order;
    const double lam = params.lambda;
    if (order < 1) throw std::invalid_argument("usalg_recover: order must be >= 1");
    if (y.size() <= static_cast<std::size_t>(order))
        throw std::invalid_argument("usalg_recover: sequence shorter than difference order");
    if (params.beta_g != 0.0) {
        const double ratio = params.beta_g / (2.0 * lam);
        if (params.beta_g < 0.0 || std::abs(ratio - std::round(ratio)) > 1e-9)
            throw std::invalid_argument("usalg_recover: beta_g must be a member of 2*lambda*Z");
    }

    const std::vector<double> yd = diff(y.values, order);

    ReconResult res;
    std::vector<double> e(yd.size());
    for (std::size_t i = 0; i < yd.size(); ++i) {
        const double r = (centered_modulo(yd[i], lam) - yd[i]) / (2.0 * lam);
        const double rounded = std::round(r);
        if (std::abs(r - rounded) > 0.25) res.noise_warning = true;
        e[i] = rounded;
    }

    for (int level = 1; level <= order; ++level) {
        e = antidiff(e, 1);
        if (level < order) {
            const double mean = std::accumulate(e.begin(), e.end(), 0.0) /
                                static_cast<double>(e.size());
            const double c = std::round(mean);
            for (auto& v : e) v -= c;
        }
    }
    const double anchor = e.front();  // assume the first sample is unfolded
    res.eps_hat.reserve(e.size());
    res.g_hat.sample_rate_hz = y.sample_rate_hz;
    res.g_hat.values.reserve(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) {
        const int eps = static_cast<int>(std::llround(e[i] - anchor));
        res.eps_hat.push_back(eps);
        res.g_hat.values.push_back(y.values[i] + 2.0 * lam * static_cast<double>(eps));
    }
    return res;
}

}  // namespace modsample::usalg
