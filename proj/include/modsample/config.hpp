#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "modsample/adc.hpp"
#include "modsample/signal.hpp"

namespace modsample {

using KvMap = std::map<std::string, std::string>;

inline KvMap parse_kv(std::istream& is, const std::string& name = "<stream>") {
    KvMap kv;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto trim = [](std::string s) {
            s.erase(0, s.find_first_not_of(" \t\r"));
            s.erase(s.find_last_not_of(" \t\r") + 1);
            return s;
        };
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(name + ":" + std::to_string(lineno) +
                                     ": expected key=value, got '" + line + "'");
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

inline KvMap parse_kv_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config file " + path);
    return parse_kv(is, path);
}

enum class AdcPath { ideal, hardware };

struct UsalgOpts {
    int order = 0;       // 0 = derive from the amplitude bound and oversampling factor
    double beta_g = 0.0; // 0 = derive from the true peak
};
struct LpOpts {
    int taps = 12;
    double ridge = -1.0;
};
struct UslseOpts {
    int lattice_bound = 3;
    int markov_order = 2;
    int rounds = 3;
    double guard = 0.5;
    int omp_max_iter = 0;
};

/// Everything one reproducible run needs. Noise in experiments is referenced
/// to the converter's full fold span: sigma = noise_pct * 2 * lambda.
struct ExperimentConfig {
    SignalSpec signal;
    double fs_hz = 102400.0;
    std::size_t n_samples = 500;
    AdcConfig adc;
    AdcPath adc_path = AdcPath::hardware;
    std::vector<std::string> algorithms = {"usalg", "lp", "uslse"};
    UsalgOpts usalg;
    LpOpts lp;
    UslseOpts uslse;
    std::string output_dir;
    std::uint64_t seed = 1;

    void validate() const {
        if (n_samples < 8) throw std::invalid_argument("config: n_samples must be >= 8");
        adc.validate();
        if (!(fs_hz > 2.0 * max_signal_freq(signal)))
            throw std::invalid_argument("config: fs must exceed twice the signal band");
        for (const auto& a : algorithms)
            if (a != "usalg" && a != "lp" && a != "uslse")
                throw std::invalid_argument("config: unknown algorithm '" + a + "'");
    }
};

namespace detail {

inline std::vector<int> parse_bits(const std::string& s) {
    std::vector<int> bits;
    for (char c : s) {
        if (c == '0') bits.push_back(0);
        else if (c == '1') bits.push_back(1);
        else throw std::invalid_argument("bits must be a string of 0s and 1s");
    }
    return bits;
}

inline bool parse_bool(const std::string& s) {
    if (s == "1" || s == "true") return true;
    if (s == "0" || s == "false") return false;
    throw std::invalid_argument("expected boolean 0/1/true/false, got '" + s + "'");
}

inline std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

}  // namespace detail

inline ExperimentConfig config_from_kv(const KvMap& kv) {
    ExperimentConfig cfg;
    for (const auto& [key, val] : kv) {
        try {
            if (key == "signal.family") cfg.signal.family = wave_family_from_string(val);
            else if (key == "signal.f1_hz") cfg.signal.f1_hz = std::stod(val);
            else if (key == "signal.f2_hz") cfg.signal.f2_hz = std::stod(val);
            else if (key == "signal.amplitude_v") cfg.signal.amplitude_v = std::stod(val);
            else if (key == "signal.amplitude2_v") cfg.signal.amplitude2_v = std::stod(val);
            else if (key == "signal.phase_rad") cfg.signal.phase_rad = std::stod(val);
            else if (key == "signal.bits") cfg.signal.bits = detail::parse_bits(val);
            else if (key == "signal.baud_hz") cfg.signal.baud_hz = std::stod(val);
            else if (key == "signal.phase_continuous") cfg.signal.phase_continuous = detail::parse_bool(val);
            else if (key == "signal.noise_pct") cfg.signal.noise_pct = std::stod(val);
            else if (key == "signal.seed") cfg.signal.seed = std::stoull(val);
            else if (key == "fs_hz") cfg.fs_hz = std::stod(val);
            else if (key == "n_samples") cfg.n_samples = std::stoul(val);
            else if (key == "seed") cfg.seed = std::stoull(val);
            else if (key == "adc.lambda_volts") cfg.adc.lambda_volts = std::stod(val);
            else if (key == "adc.max_fold_count") cfg.adc.max_fold_count = std::stoi(val);
            else if (key == "adc.delay_ticks") cfg.adc.delay_ticks = std::stoi(val);
            else if (key == "adc.fine_grid_factor") cfg.adc.fine_grid_factor = std::stoi(val);
            else if (key == "adc.bias_volts") cfg.adc.bias_volts = std::stod(val);
            else if (key == "adc.range_low_volts") cfg.adc.adc_low_volts = std::stod(val);
            else if (key == "adc.range_high_volts") cfg.adc.adc_high_volts = std::stod(val);
            else if (key == "adc.bits") cfg.adc.adc_bits = std::stoi(val);
            else if (key == "adc.k_lag_samples") cfg.adc.k_lag_samples = std::stoi(val);
            else if (key == "adc.quantize") cfg.adc.quantize_enabled = detail::parse_bool(val);
            else if (key == "adc_path") {
                if (val == "ideal") cfg.adc_path = AdcPath::ideal;
                else if (val == "hardware") cfg.adc_path = AdcPath::hardware;
                else throw std::invalid_argument("adc_path must be ideal or hardware");
            }
            else if (key == "algorithms") cfg.algorithms = detail::split_csv(val);
            else if (key == "usalg.order") cfg.usalg.order = std::stoi(val);
            else if (key == "usalg.beta_g") cfg.usalg.beta_g = std::stod(val);
            else if (key == "lp.taps") cfg.lp.taps = std::stoi(val);
            else if (key == "lp.ridge") cfg.lp.ridge = std::stod(val);
            else if (key == "uslse.lattice_bound") cfg.uslse.lattice_bound = std::stoi(val);
            else if (key == "uslse.markov_order") cfg.uslse.markov_order = std::stoi(val);
            else if (key == "uslse.rounds") cfg.uslse.rounds = std::stoi(val);
            else if (key == "uslse.guard") cfg.uslse.guard = std::stod(val);
            else if (key == "uslse.omp_max_iter") cfg.uslse.omp_max_iter = std::stoi(val);
            else if (key == "output_dir") cfg.output_dir = val;
            else throw std::invalid_argument("unknown config key");
        } catch (const std::invalid_argument& e) {
            throw std::runtime_error("config key '" + key + "': " + e.what());
        } catch (const std::exception&) {
            throw std::runtime_error("config key '" + key + "': bad value '" + val + "'");
        }
    }
    return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
    return config_from_kv(parse_kv_file(path));
}

}  // namespace modsample
