#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "modsample/adc.hpp"
#include "modsample/capture_io.hpp"
#include "modsample/config.hpp"
#include "modsample/core.hpp"
#include "modsample/lp.hpp"
#include "modsample/metrics.hpp"
#include "modsample/signal.hpp"
#include "modsample/usalg.hpp"
#include "modsample/uslse.hpp"

namespace modsample {

struct ExperimentResult {
    SampleSeq truth;                         // g = signal + noise at the output rate
    Capture capture;
    std::map<std::string, ReconResult> results;
    std::map<std::string, std::string> errors;  // per-algorithm failures, run continues
    double noise_sigma_v = 0.0;
    UsalgOpts usalg_used;                    // order/beta actually applied
};

namespace detail {

inline SampleSeq decimate(const SampleSeq& fine, std::size_t factor) {
    SampleSeq out;
    out.sample_rate_hz = fine.sample_rate_hz / static_cast<double>(factor);
    out.values.reserve(fine.size() / factor);
    for (std::size_t j = 0; j < fine.size(); j += factor) out.values.push_back(fine.values[j]);
    return out;
}

inline double snap_amplitude_bound(double peak, double lambda) {
    const double step = 2.0 * lambda;
    double b = std::ceil(peak / step - 1e-12) * step;
    if (b < step) b = step;
    return b;
}

}  // namespace detail

inline void write_signal_csv(const std::string& path, const SampleSeq& g) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path);
    os << "# fs_hz=" << fmt_double(g.sample_rate_hz) << "\n";
    os << "index,t_seconds,g_volts\n";
    for (std::size_t n = 0; n < g.size(); ++n) {
        const double t = g.sample_rate_hz > 0.0 ? static_cast<double>(n) / g.sample_rate_hz : 0.0;
        os << n << ',' << fmt_double(t) << ',' << fmt_double(g.values[n]) << "\n";
    }
}

inline SampleSeq read_signal_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path);
    SampleSeq g;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto eq = line.find('=');
            if (eq != std::string::npos && line.find("fs_hz") != std::string::npos)
                g.sample_rate_hz = std::stod(line.substr(eq + 1));
            continue;
        }
        if (line.rfind("index,", 0) == 0) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() < 3)
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected 3 columns");
        g.values.push_back(std::stod(cells[2]));
    }
    if (g.values.empty()) throw std::runtime_error(path + ": no data rows");
    return g;
}

/// Run every requested recovery on one folded capture of the configured
/// waveform. Deterministic per config (including the seed); per-algorithm
/// failures are recorded without aborting the rest; artifacts land in
/// output_dir when one is set.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    ExperimentResult out;
    const double lam = cfg.adc.lambda_volts;
    const std::size_t n = cfg.n_samples;

    // noise referenced to the converter's fold span, held per output sample
    out.noise_sigma_v = cfg.signal.noise_pct * 2.0 * lam;
    const auto w = gaussian_draws(n, out.noise_sigma_v, cfg.seed + cfg.signal.seed);

    if (cfg.adc_path == AdcPath::hardware) {
        const std::size_t m = static_cast<std::size_t>(cfg.adc.fine_grid_factor);
        SampleSeq g_fine = gen_signal(cfg.signal, cfg.fs_hz, n, cfg.adc.fine_grid_factor);
        for (std::size_t j = 0; j < g_fine.size(); ++j) g_fine.values[j] += w[j / m];
        out.truth = detail::decimate(g_fine, m);
        out.capture = fold_hardware(g_fine, cfg.adc, cfg.fs_hz);
    } else {
        out.truth = gen_signal(cfg.signal, cfg.fs_hz, n);
        for (std::size_t i = 0; i < n; ++i) out.truth.values[i] += w[i];
        out.capture = fold_ideal(out.truth, lam);
    }

    const double band_hz = max_signal_freq(cfg.signal);
    for (const auto& alg : cfg.algorithms) {
        try {
            ReconResult res;
            if (alg == "usalg") {
                usalg::Params p;
                p.lambda = lam;
                double peak = 0.0;
                for (double v : out.truth.values) peak = std::max(peak, std::abs(v));
                p.beta_g = cfg.usalg.beta_g > 0.0 ? cfg.usalg.beta_g
                                                  : detail::snap_amplitude_bound(peak, lam);
                p.order = cfg.usalg.order > 0
                              ? cfg.usalg.order
                              : usalg::min_order(lam, p.beta_g,
                                                 oversampling_factor(cfg.fs_hz, band_hz));
                out.usalg_used.order = p.order;
                out.usalg_used.beta_g = p.beta_g;
                res = usalg::usalg_recover(out.capture.y, p);
            } else if (alg == "lp") {
                lp::Params p;
                p.lambda = lam;
                p.ridge = cfg.lp.ridge;
                p.taps = std::min<int>(cfg.lp.taps, static_cast<int>(n) / 2);
                if (p.taps < 1) p.taps = 1;
                p.autocov = lp::autocov_from_spec(cfg.signal, cfg.fs_hz, p.taps,
                                                  out.noise_sigma_v * out.noise_sigma_v);
                p.init_samples.assign(out.truth.values.begin(),
                                      out.truth.values.begin() + p.taps);
                res = lp::lp_unfold(out.capture.y, p);
            } else {
                uslse::Params p;
                p.lambda = lam;
                p.guard = cfg.uslse.guard;
                p.signal_band_hz = band_hz;
                p.lattice_bound = cfg.uslse.lattice_bound;
                p.markov_order = cfg.uslse.markov_order;
                p.dp_omp_rounds = cfg.uslse.rounds;
                p.omp_max_iter = cfg.uslse.omp_max_iter;
                res = uslse::uslse_unfold(out.capture.y, p);
            }
            evaluate(res, out.truth, lam);
            out.results[alg] = std::move(res);
        } catch (const std::exception& e) {
            out.errors[alg] = e.what();
        }
    }

    if (!cfg.output_dir.empty()) {
        namespace fs = std::filesystem;
        fs::create_directories(cfg.output_dir);
        const std::string dir = cfg.output_dir + "/";
        write_signal_csv(dir + "signal.csv", out.truth);
        write_capture(dir + "capture.csv", out.capture);
        for (const auto& [alg, res] : out.results) {
            std::ofstream os(dir + "recon_" + alg + ".csv");
            os << "# fs_hz=" << fmt_double(cfg.fs_hz) << "\n";
            os << "index,t_seconds,g_hat_volts,eps_hat\n";
            for (std::size_t i = 0; i < res.g_hat.size(); ++i) {
                const double t = static_cast<double>(i) / cfg.fs_hz;
                os << i << ',' << fmt_double(t) << ',' << fmt_double(res.g_hat.values[i]) << ','
                   << res.eps_hat[i] << "\n";
            }
        }
        std::ofstream os(dir + "metrics.txt");
        os << "experiment.adc_path=" << (cfg.adc_path == AdcPath::ideal ? "ideal" : "hardware")
           << "\n";
        os << "experiment.fs_hz=" << fmt_double(cfg.fs_hz) << "\n";
        os << "experiment.n_samples=" << n << "\n";
        os << "experiment.noise_sigma_v=" << fmt_double(out.noise_sigma_v) << "\n";
        os << "experiment.seed=" << cfg.seed << "\n";
        os << "experiment.signal.family=" << to_string(cfg.signal.family) << "\n";
        for (const auto& [alg, res] : out.results) {
            const std::string pre = "alg." + alg + ".";
            os << pre << "success=" << (res.success ? 1 : 0) << "\n";
            os << pre << "nmse_db=" << fmt_double(res.nmse_db) << "\n";
            os << pre << "max_abs_err_v=" << fmt_double(res.max_abs_err_v) << "\n";
            os << pre << "constant_ambiguity_v=" << fmt_double(res.constant_ambiguity) << "\n";
            os << pre << "residual_offset_v=" << fmt_double(res.residual_offset) << "\n";
            os << pre << "noise_warning=" << (res.noise_warning ? 1 : 0) << "\n";
        }
        for (const auto& [alg, err] : out.errors) os << "alg." << alg << ".error=" << err << "\n";
    }
    return out;
}

}  // namespace modsample
