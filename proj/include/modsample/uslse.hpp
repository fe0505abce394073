#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "modsample/core.hpp"
#include "modsample/metrics.hpp"

namespace modsample::uslse {

struct Params {
    double lambda = 1.0;
    double guard = 0.5;                     // band rule: keep bins above band*(1+guard)
    std::vector<std::size_t> explicit_band; // overrides the guard rule when nonempty
    double signal_band_hz = 0.0;            // required with the guard rule
    int lattice_bound = 3;                  // V: fold-increment values live in [-V, V]
    int markov_order = 2;                   // p: band half-width of the surrogate
    int dp_omp_rounds = 3;
    int omp_max_iter = 0;                   // 0 -> 2*N
    long long dp_state_budget = 4'000'000;  // cap on DP state-space size
};

/// Difference + DFT view of a capture, restricted to the guard band.
/// A is Hermitian Toeplitz: A(i,j) = band[i-j] for 0 <= i-j <= markov_order,
/// conjugate for i < j, zero beyond the band. retau carries Re tau(d) over all
/// lags for the exact-objective refinement, tau(d) = sum_{k in S} e^{+i2pi k d/L}.
struct DiffDftSystem {
    double lambda = 1.0;
    std::size_t len = 0;                       // L = N-1, number of unknowns
    std::vector<std::size_t> band_bins;        // S, 0-based DFT bin indices
    std::vector<std::complex<double>> y_tilde_S;
    std::vector<std::complex<double>> band;    // A diagonals: 4*lambda^2 * tau(d), d = 0..p
    int markov_order = 1;
    std::vector<std::complex<double>> b;       // 2*lambda * F_S^H y_tilde_S, length L
    std::vector<double> retau;                 // Re tau(d), d = 0..L-1
};

/// DFT bins of the differenced sequence whose frequencies clear the signal
/// band by the guard fraction (both half-axes; DC excluded).
inline std::vector<std::size_t> select_band(std::size_t n, double fs_hz,
                                            double signal_band_hz, double guard) {
    if (n < 3) throw std::invalid_argument("select_band: need at least 3 samples");
    if (!(fs_hz > 0.0)) throw std::invalid_argument("select_band: fs must be > 0");
    if (!(signal_band_hz < fs_hz / 2.0))
        throw std::invalid_argument("select_band: signal band must be below fs/2");
    if (!(guard > 0.0) || !(guard < 1.0))
        throw std::invalid_argument("select_band: guard must be in (0,1)");
    const std::size_t len = n - 1;
    const double cutoff = signal_band_hz * (1.0 + guard);
    std::vector<std::size_t> bins;
    for (std::size_t k = 1; k < len; ++k) {
        const double f = k <= len / 2 ? static_cast<double>(k) * fs_hz / static_cast<double>(len)
                                      : (static_cast<double>(k) - static_cast<double>(len)) *
                                            fs_hz / static_cast<double>(len);
        if (std::abs(f) > cutoff) bins.push_back(k);
    }
    if (bins.empty())
        throw std::invalid_argument("select_band: guard leaves no bins; lower the guard or band");
    return bins;
}

namespace detail {

inline std::vector<std::complex<double>> unit_roots(std::size_t len) {
    std::vector<std::complex<double>> w(len);
    for (std::size_t t = 0; t < len; ++t) {
        const double a = 2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(len);
        w[t] = {std::cos(a), std::sin(a)};
    }
    return w;
}

/// Minimize sum_n [a0 v_n^2 + 2 v_n (rb_n + sum_d ad[d] v_{n-d})] over integer
/// sequences with per-position bounds, by forward DP with state = last p values.
/// Ties resolve to the smallest encoded state, scanning values in ascending order.
struct LatticeDp {
    int vmin = 0, vmax = 0;          // global value range
    std::vector<int> lo, hi;         // per-position bounds (within [vmin, vmax])
    std::vector<double> ad;          // ad[0..p]: quadratic diagonals
    std::vector<double> rb;          // linear term per position

    std::vector<int> solve(long long state_budget) const {
        const std::size_t len = lo.size();
        const int width = vmax - vmin + 1;
        int p = static_cast<int>(ad.size()) - 1;
        if (p > static_cast<int>(len) - 1) p = static_cast<int>(len) - 1;
        if (p < 0) p = 0;

        double states_f = 1.0;
        for (int i = 0; i < p; ++i) states_f *= width;
        if (states_f > static_cast<double>(state_budget))
            throw std::runtime_error(
                "lattice DP state space exceeds budget; lower the Markov order or lattice bound");

        if (p == 0) {  // no coupling: positions independent
            std::vector<int> out(len);
            for (std::size_t n = 0; n < len; ++n) {
                double best = std::numeric_limits<double>::infinity();
                for (int v = lo[n]; v <= hi[n]; ++v) {
                    const double c = ad[0] * v * v + 2.0 * rb[n] * v;
                    if (c < best) { best = c; out[n] = v; }
                }
            }
            return out;
        }

        const std::size_t states = static_cast<std::size_t>(states_f);
        const std::size_t shift = states / static_cast<std::size_t>(width);  // width^(p-1)
        const double inf = std::numeric_limits<double>::infinity();

        auto digit = [&](std::size_t s, int i) {
            std::size_t q = s;
            for (int t = 0; t < i; ++t) q /= static_cast<std::size_t>(width);
            return static_cast<int>(q % static_cast<std::size_t>(width)) + vmin;
        };
        auto place_cost = [&](std::size_t n, int v, auto prev_of) {
            double cross = 0.0;
            const int dmax = std::min<int>(p, static_cast<int>(n));
            for (int d = 1; d <= dmax; ++d) cross += ad[d] * prev_of(d);
            return ad[0] * v * v + 2.0 * v * (rb[n] + cross);
        };

        std::vector<double> cost(states, inf), next(states, inf);
        // seed: enumerate the first p positions
        std::vector<int> tuple(static_cast<std::size_t>(p), 0);
        for (int i = 0; i < p; ++i) tuple[i] = lo[i];
        while (true) {
            double c = 0.0;
            for (int i = 0; i < p; ++i) {
                const std::size_t n = static_cast<std::size_t>(i);
                c += place_cost(n, tuple[i], [&](int d) { return tuple[i - d]; });
            }
            std::size_t s = 0;
            for (int i = p - 1; i >= 0; --i)
                s = s * static_cast<std::size_t>(width) +
                    static_cast<std::size_t>(tuple[p - 1 - i] - vmin);
            if (c < cost[s]) cost[s] = c;
            int i = p - 1;
            while (i >= 0 && tuple[i] == hi[i]) { tuple[i] = lo[i]; --i; }
            if (i < 0) break;
            ++tuple[i];
        }

        std::vector<std::int8_t> drop(len * states, -1);
        for (std::size_t n = static_cast<std::size_t>(p); n < len; ++n) {
            std::fill(next.begin(), next.end(), inf);
            for (std::size_t s = 0; s < states; ++s) {
                if (cost[s] == inf) continue;
                double cross = 0.0;
                for (int d = 1; d <= p; ++d) cross += ad[d] * digit(s, d - 1);
                const std::int8_t oldest =
                    static_cast<std::int8_t>(s / shift);  // digit p-1, dropped on shift
                for (int v = lo[n]; v <= hi[n]; ++v) {
                    const double c = cost[s] + ad[0] * v * v + 2.0 * v * (rb[n] + cross);
                    const std::size_t s2 = static_cast<std::size_t>(v - vmin) +
                                           (s % shift) * static_cast<std::size_t>(width);
                    if (c < next[s2]) {
                        next[s2] = c;
                        drop[n * states + s2] = oldest;
                    }
                }
            }
            cost.swap(next);
        }

        std::size_t s_best = 0;
        double c_best = inf;
        for (std::size_t s = 0; s < states; ++s)
            if (cost[s] < c_best) { c_best = cost[s]; s_best = s; }
        if (c_best == inf) throw std::runtime_error("lattice DP: infeasible bounds");

        std::vector<int> out(len);
        std::size_t s = s_best;
        for (std::size_t n = len; n-- > static_cast<std::size_t>(p);) {
            out[n] = digit(s, 0);
            const std::size_t prev =
                s / static_cast<std::size_t>(width) +
                static_cast<std::size_t>(drop[n * states + s]) * shift;
            s = prev;
        }
        for (int i = 0; i < p; ++i) out[static_cast<std::size_t>(p - 1 - i)] = digit(s, i);
        return out;
    }
};

}  // namespace detail

/// Difference y, DFT it, keep the guard-band rows, and assemble the banded
/// quadratic surrogate plus the exact-objective tables.
inline DiffDftSystem build_system(const SampleSeq& y, const Params& params) {
    if (y.size() < 3) throw std::invalid_argument("build_system: need at least 3 samples");
    if (params.markov_order < 1) throw std::invalid_argument("build_system: markov_order >= 1");
    const std::size_t len = y.size() - 1;

    DiffDftSystem sys;
    sys.lambda = params.lambda;
    sys.len = len;
    sys.markov_order = std::min<int>(params.markov_order, static_cast<int>(len) - 1);
    if (!params.explicit_band.empty()) {
        sys.band_bins = params.explicit_band;
        std::sort(sys.band_bins.begin(), sys.band_bins.end());
        if (sys.band_bins.back() >= len)
            throw std::invalid_argument("build_system: band bin out of range");
    } else {
        sys.band_bins = select_band(y.size(), y.sample_rate_hz, params.signal_band_hz, params.guard);
    }
    if (sys.band_bins.empty()) throw std::invalid_argument("build_system: empty band set");

    const std::vector<double> dy = diff(y.values, 1);
    const auto roots = detail::unit_roots(len);
    auto root_pos = [&](std::size_t k, std::size_t t) { return roots[(k * t) % len]; };

    std::vector<std::complex<double>> yt(len);
    for (std::size_t k = 0; k < len; ++k) {
        std::complex<double> acc = 0.0;
        for (std::size_t t = 0; t < len; ++t) acc += dy[t] * std::conj(root_pos(k, t));
        yt[k] = acc;
    }

    sys.y_tilde_S.reserve(sys.band_bins.size());
    for (std::size_t k : sys.band_bins) sys.y_tilde_S.push_back(yt[k]);

    const double fourl2 = 4.0 * params.lambda * params.lambda;
    sys.retau.resize(len);
    std::vector<std::complex<double>> tau(len);
    for (std::size_t d = 0; d < len; ++d) {
        std::complex<double> acc = 0.0;
        for (std::size_t k : sys.band_bins) acc += root_pos(k, d);
        tau[d] = acc;
        sys.retau[d] = acc.real();
    }
    sys.band.resize(static_cast<std::size_t>(sys.markov_order) + 1);
    for (int d = 0; d <= sys.markov_order; ++d)
        sys.band[static_cast<std::size_t>(d)] = fourl2 * tau[static_cast<std::size_t>(d)];

    sys.b.assign(len, 0.0);
    for (std::size_t m = 0; m < len; ++m) {
        std::complex<double> acc = 0.0;
        for (std::size_t i = 0; i < sys.band_bins.size(); ++i)
            acc += root_pos(sys.band_bins[i], m) * sys.y_tilde_S[i];
        sys.b[m] = 2.0 * params.lambda * acc;
    }
    return sys;
}

/// Exact residual objective || y_tilde_S + 2*lambda*F_S*eps ||^2.
inline double exact_objective(const DiffDftSystem& sys, const std::vector<int>& eps) {
    if (eps.size() != sys.len) throw std::invalid_argument("exact_objective: length mismatch");
    const auto roots = detail::unit_roots(sys.len);
    double f = 0.0;
    for (std::size_t i = 0; i < sys.band_bins.size(); ++i) {
        const std::size_t k = sys.band_bins[i];
        std::complex<double> acc = sys.y_tilde_S[i];
        for (std::size_t n = 0; n < sys.len; ++n)
            if (eps[n] != 0)
                acc += 2.0 * sys.lambda * static_cast<double>(eps[n]) *
                       std::conj(roots[(k * n) % sys.len]);
        f += std::norm(acc);
    }
    return f;
}

/// Global minimizer of the banded surrogate over the bounded lattice [-V, V]^L.
inline std::vector<int> dp_solve(const DiffDftSystem& sys, int lattice_bound, int markov_order,
                                 long long state_budget = 4'000'000) {
    if (lattice_bound < 1) throw std::invalid_argument("dp_solve: lattice bound must be >= 1");
    if (markov_order < 1) throw std::invalid_argument("dp_solve: markov order must be >= 1");
    const int p = std::min<int>({markov_order, sys.markov_order, static_cast<int>(sys.len) - 1});
    detail::LatticeDp dp;
    dp.vmin = -lattice_bound;
    dp.vmax = lattice_bound;
    dp.lo.assign(sys.len, -lattice_bound);
    dp.hi.assign(sys.len, lattice_bound);
    dp.ad.resize(static_cast<std::size_t>(std::max(p, 0)) + 1);
    for (int d = 0; d <= p; ++d) dp.ad[static_cast<std::size_t>(d)] = sys.band[static_cast<std::size_t>(d)].real();
    dp.rb.resize(sys.len);
    for (std::size_t n = 0; n < sys.len; ++n) dp.rb[n] = sys.b[n].real();
    return dp.solve(state_budget);
}

struct OmpResult {
    std::vector<int> eps;
    std::vector<double> objective_history;  // objective after init and each accepted move
    int iterations = 0;
};

/// Greedy integer refinement of the exact objective, OMP style: pick the
/// improvable coordinate with the largest residual correlation, re-optimize its
/// integer value, then sweep the previously selected coordinates until stable.
/// The objective never increases.
inline OmpResult omp_refine(const std::vector<int>& eps_init, const DiffDftSystem& sys,
                            int lattice_bound, int max_iter = 0) {
    if (eps_init.size() != sys.len) throw std::invalid_argument("omp_refine: length mismatch");
    for (int v : eps_init)
        if (std::abs(v) > lattice_bound)
            throw std::invalid_argument("omp_refine: initial point outside the lattice");
    if (max_iter <= 0) max_iter = 2 * static_cast<int>(sys.len + 1);

    const double lam = sys.lambda;
    const std::size_t len = sys.len;
    const double tau0 = sys.retau[0];  // column energy |S|

    OmpResult out;
    out.eps = eps_init;

    // corr[m] = Re((F_S^H r)_m) with r = y_tilde_S + 2*lambda*F_S*eps
    std::vector<double> corr(len);
    for (std::size_t m = 0; m < len; ++m) {
        double acc = sys.b[m].real() / (2.0 * lam);
        for (std::size_t n = 0; n < len; ++n) {
            if (out.eps[n] == 0) continue;
            const std::size_t d = m >= n ? m - n : n - m;
            acc += 2.0 * lam * static_cast<double>(out.eps[n]) * sys.retau[d];
        }
        corr[m] = acc;
    }
    double f = exact_objective(sys, out.eps);
    out.objective_history.push_back(f);

    auto best_move = [&](std::size_t n, int& delta) {
        // unconstrained minimizer along coordinate n, snapped to the lattice
        const double t = static_cast<double>(out.eps[n]) - corr[n] / (2.0 * lam * tau0);
        int v = static_cast<int>(std::llround(t));
        v = std::clamp(v, -lattice_bound, lattice_bound);
        delta = v - out.eps[n];
        if (delta == 0) return 0.0;
        return 4.0 * lam * delta * corr[n] + 4.0 * lam * lam * delta * delta * tau0;
    };
    auto apply = [&](std::size_t n, int delta) {
        const double gain = 4.0 * lam * delta * corr[n] +
                            4.0 * lam * lam * delta * delta * tau0;
        out.eps[n] += delta;
        for (std::size_t m = 0; m < len; ++m) {
            const std::size_t d = m >= n ? m - n : n - m;
            corr[m] += 2.0 * lam * static_cast<double>(delta) * sys.retau[d];
        }
        f += gain;
    };

    std::vector<std::size_t> selected;
    for (out.iterations = 0; out.iterations < max_iter;) {
        // pick the improvable coordinate with the largest residual correlation
        std::size_t pick = len;
        int pick_delta = 0;
        double pick_corr = 0.0;
        for (std::size_t n = 0; n < len; ++n) {
            int delta;
            const double gain = best_move(n, delta);
            if (gain < -1e-9 && std::abs(corr[n]) > pick_corr) {
                pick = n;
                pick_delta = delta;
                pick_corr = std::abs(corr[n]);
            }
        }
        if (pick == len) break;
        apply(pick, pick_delta);
        if (std::find(selected.begin(), selected.end(), pick) == selected.end())
            selected.push_back(pick);
        // re-fit the already-selected support
        bool moved = true;
        while (moved) {
            moved = false;
            for (std::size_t n : selected) {
                int delta;
                if (best_move(n, delta) < -1e-9) {
                    apply(n, delta);
                    moved = true;
                }
            }
        }
        ++out.iterations;
        out.objective_history.push_back(f);
    }
    return out;
}

/// Stage-1 unfold: DP on the surrogate, OMP on the exact objective, a few
/// alternations (later DP passes re-solve for a bounded correction around the
/// current estimate), then anti-difference with eps[0] = 0.
inline ReconResult uslse_unfold(const SampleSeq& y, const Params& params) {
    const DiffDftSystem sys = build_system(y, params);
    const int bound = params.lattice_bound;
    if (bound < 1) throw std::invalid_argument("uslse_unfold: lattice bound must be >= 1");

    std::vector<int> eps = dp_solve(sys, bound, params.markov_order, params.dp_state_budget);
    std::vector<int> best = eps;
    double f_best = exact_objective(sys, eps);

    for (int round = 0; round < std::max(1, params.dp_omp_rounds); ++round) {
        OmpResult r = omp_refine(eps, sys, bound, params.omp_max_iter);
        eps = r.eps;
        if (r.objective_history.back() < f_best) {
            f_best = r.objective_history.back();
            best = eps;
        }
        if (round + 1 >= std::max(1, params.dp_omp_rounds)) break;

        // re-solve the surrogate for a bounded correction around the estimate
        detail::LatticeDp dp;
        const int p = std::min<int>(sys.markov_order, static_cast<int>(sys.len) - 1);
        dp.vmin = -2 * bound;
        dp.vmax = 2 * bound;
        dp.lo.resize(sys.len);
        dp.hi.resize(sys.len);
        for (std::size_t n = 0; n < sys.len; ++n) {
            dp.lo[n] = -bound - eps[n];
            dp.hi[n] = bound - eps[n];
        }
        dp.ad.resize(static_cast<std::size_t>(p) + 1);
        for (int d = 0; d <= p; ++d) dp.ad[static_cast<std::size_t>(d)] = sys.band[static_cast<std::size_t>(d)].real();
        dp.rb.resize(sys.len);
        for (std::size_t n = 0; n < sys.len; ++n) {
            double acc = sys.b[n].real();
            const int dmax = p;
            for (int d = -dmax; d <= dmax; ++d) {
                const long long m = static_cast<long long>(n) + d;
                if (m < 0 || m >= static_cast<long long>(sys.len)) continue;
                acc += sys.band[static_cast<std::size_t>(std::abs(d))].real() *
                       static_cast<double>(eps[static_cast<std::size_t>(m)]);
            }
            dp.rb[n] = acc;
        }
        const std::vector<int> delta = dp.solve(params.dp_state_budget);
        bool any = false;
        for (std::size_t n = 0; n < sys.len; ++n) {
            if (delta[n] != 0) any = true;
            eps[n] += delta[n];
        }
        if (!any) break;  // converged: the surrogate has no correction to offer
    }

    ReconResult res;
    const std::vector<int> eps_hat = antidiff(best, 1);
    res.eps_hat = eps_hat;
    res.g_hat.sample_rate_hz = y.sample_rate_hz;
    res.g_hat.values.reserve(y.size());
    for (std::size_t n = 0; n < y.size(); ++n)
        res.g_hat.values.push_back(y.values[n] +
                                   2.0 * params.lambda * static_cast<double>(eps_hat[n]));
    return res;
}

}  // namespace modsample::uslse
