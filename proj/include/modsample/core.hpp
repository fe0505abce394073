#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace modsample {

/// Uniformly sampled real-valued sequence, in volts.
struct SampleSeq {
    std::vector<double> values;
    double sample_rate_hz = 0.0;

    std::size_t size() const { return values.size(); }
};

/// Integer fold count per sample (one entry per sample of the paired sequence).
using SimpleFn = std::vector<int>;

/// Centered modulo: maps x into [-lambda, lambda). One fold shifts by 2*lambda.
inline double centered_modulo(double x, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("centered_modulo: lambda must be > 0");
    if (!std::isfinite(x)) throw std::invalid_argument("centered_modulo: x must be finite");
    return x - 2.0 * lambda * std::floor(x / (2.0 * lambda) + 0.5);
}

/// Number of 2*lambda folds needed to bring x into [-lambda, lambda).
inline long long fold_count_of(double x, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("fold_count_of: lambda must be > 0");
    if (!std::isfinite(x)) throw std::invalid_argument("fold_count_of: x must be finite");
    return static_cast<long long>(std::floor(x / (2.0 * lambda) + 0.5));
}

struct Decomposition {
    SampleSeq y;     // folded samples, each in [-lambda, lambda)
    SimpleFn eps;    // integer fold counts: g = y + 2*lambda*eps
};

/// Split g into its folded part and the integer fold-count sequence.
inline Decomposition decompose(const SampleSeq& g, double lambda) {
    Decomposition out;
    out.y.sample_rate_hz = g.sample_rate_hz;
    out.y.values.reserve(g.size());
    out.eps.reserve(g.size());
    for (double v : g.values) {
        const long long m = fold_count_of(v, lambda);
        out.y.values.push_back(v - 2.0 * lambda * static_cast<double>(m));
        out.eps.push_back(static_cast<int>(m));
    }
    return out;
}

/// Inverse of decompose: g = y + 2*lambda*eps.
inline SampleSeq recompose(const SampleSeq& y, const SimpleFn& eps, double lambda) {
    if (y.size() != eps.size())
        throw std::invalid_argument("recompose: length mismatch between samples and fold counts");
    if (!(lambda > 0.0)) throw std::invalid_argument("recompose: lambda must be > 0");
    SampleSeq g;
    g.sample_rate_hz = y.sample_rate_hz;
    g.values.reserve(y.size());
    for (std::size_t n = 0; n < y.size(); ++n)
        g.values.push_back(y.values[n] + 2.0 * lambda * static_cast<double>(eps[n]));
    return g;
}

/// Sampling rate over the Nyquist rate of a signal with the given one-sided bandwidth.
inline double oversampling_factor(double fs_hz, double bandwidth_hz) {
    if (!(fs_hz > 0.0) || !(bandwidth_hz > 0.0))
        throw std::invalid_argument("oversampling_factor: rates must be > 0");
    return fs_hz / (2.0 * bandwidth_hz);
}

/// Repeated first difference; output shrinks by one element per order.
template <typename T>
std::vector<T> diff(const std::vector<T>& x, int order = 1) {
    if (order < 0) throw std::invalid_argument("diff: order must be >= 0");
    if (static_cast<std::size_t>(order) >= x.size())
        throw std::invalid_argument("diff: order must be < sequence length");
    std::vector<T> cur = x;
    for (int k = 0; k < order; ++k) {
        std::vector<T> next(cur.size() - 1);
        for (std::size_t i = 0; i + 1 < cur.size(); ++i) next[i] = cur[i + 1] - cur[i];
        cur = std::move(next);
    }
    return cur;
}

/// Cumulative-sum inverse of diff. inits[k] seeds the leading value at level k
/// (zero when omitted); output grows by one element per order.
template <typename T>
std::vector<T> antidiff(const std::vector<T>& d, int order = 1, const std::vector<T>& inits = {}) {
    if (order < 1) throw std::invalid_argument("antidiff: order must be >= 1");
    std::vector<T> cur = d;
    for (int k = 0; k < order; ++k) {
        const T init = static_cast<std::size_t>(k) < inits.size() ? inits[k] : T(0);
        std::vector<T> next(cur.size() + 1);
        next[0] = init;
        for (std::size_t i = 0; i < cur.size(); ++i) next[i + 1] = next[i] + cur[i];
        cur = std::move(next);
    }
    return cur;
}

}  // namespace modsample
