#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "modsample/adc.hpp"

namespace modsample {

inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct CaptureReadResult {
    Capture capture;
    std::vector<std::string> warnings;
};

/// Capture CSV: `# key=value` header lines carrying fs and the ADC settings,
/// one column-name line, then index,t_seconds,y_volts,k_signed,gate rows.
inline void write_capture(std::ostream& os, const Capture& cap) {
    const AdcConfig& c = cap.cfg;
    os << "# fs_hz=" << fmt_double(cap.fs_hz) << "\n";
    os << "# lambda_volts=" << fmt_double(c.lambda_volts) << "\n";
    os << "# max_fold_count=" << c.max_fold_count << "\n";
    os << "# delay_ticks=" << c.delay_ticks << "\n";
    os << "# fine_grid_factor=" << c.fine_grid_factor << "\n";
    os << "# bias_volts=" << fmt_double(c.bias_volts) << "\n";
    os << "# adc_low_volts=" << fmt_double(c.adc_low_volts) << "\n";
    os << "# adc_high_volts=" << fmt_double(c.adc_high_volts) << "\n";
    os << "# adc_bits=" << c.adc_bits << "\n";
    os << "# k_lag_samples=" << c.k_lag_samples << "\n";
    os << "# quantize=" << (c.quantize_enabled ? 1 : 0) << "\n";
    os << "index,t_seconds,y_volts,k_signed,gate\n";
    for (std::size_t n = 0; n < cap.y.size(); ++n) {
        const double t = cap.fs_hz > 0.0 ? static_cast<double>(n) / cap.fs_hz : 0.0;
        os << n << ',' << fmt_double(t) << ',' << fmt_double(cap.y.values[n]) << ','
           << cap.k[n] << ',' << static_cast<int>(cap.gate[n]) << "\n";
    }
}

inline void write_capture(const std::string& path, const Capture& cap) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_capture: cannot open " + path);
    write_capture(os, cap);
}

inline CaptureReadResult read_capture(std::istream& is, const std::string& name = "<stream>") {
    CaptureReadResult out;
    Capture& cap = out.capture;
    std::string line;
    std::size_t lineno = 0;
    bool header_done = false;
    auto fail = [&](const std::string& what) {
        throw std::runtime_error(name + ":" + std::to_string(lineno) + ": " + what);
    };
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto eq = line.find('=');
            if (eq == std::string::npos) continue;  // free-form comment
            std::string key = line.substr(1, eq - 1);
            key.erase(0, key.find_first_not_of(" \t"));
            key.erase(key.find_last_not_of(" \t") + 1);
            const std::string val = line.substr(eq + 1);
            try {
                if (key == "fs_hz") cap.fs_hz = std::stod(val);
                else if (key == "lambda_volts") cap.cfg.lambda_volts = std::stod(val);
                else if (key == "max_fold_count") cap.cfg.max_fold_count = std::stoi(val);
                else if (key == "delay_ticks") cap.cfg.delay_ticks = std::stoi(val);
                else if (key == "fine_grid_factor") cap.cfg.fine_grid_factor = std::stoi(val);
                else if (key == "bias_volts") cap.cfg.bias_volts = std::stod(val);
                else if (key == "adc_low_volts") cap.cfg.adc_low_volts = std::stod(val);
                else if (key == "adc_high_volts") cap.cfg.adc_high_volts = std::stod(val);
                else if (key == "adc_bits") cap.cfg.adc_bits = std::stoi(val);
                else if (key == "k_lag_samples") cap.cfg.k_lag_samples = std::stoi(val);
                else if (key == "quantize") cap.cfg.quantize_enabled = std::stoi(val) != 0;
                else out.warnings.push_back(name + ":" + std::to_string(lineno) +
                                            ": unknown header key '" + key + "'");
            } catch (const std::exception&) {
                fail("bad value for header key '" + key + "'");
            }
            continue;
        }
        if (!header_done && line.rfind("index,", 0) == 0) {
            if (line != "index,t_seconds,y_volts,k_signed,gate")
                fail("unexpected column layout '" + line + "'");
            header_done = true;
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() != 5) fail("expected 5 columns, got " + std::to_string(cells.size()));
        try {
            const std::size_t idx = std::stoul(cells[0]);
            if (idx != cap.y.size()) fail("non-monotone index " + cells[0]);
            const double t = std::stod(cells[1]);
            cap.y.values.push_back(std::stod(cells[2]));
            cap.k.push_back(std::stoi(cells[3]));
            const int gate = std::stoi(cells[4]);
            if (gate != 0 && gate != 1) fail("gate must be 0 or 1");
            cap.gate.push_back(static_cast<std::uint8_t>(gate));
            if (cap.fs_hz > 0.0) {
                const double expect = static_cast<double>(idx) / cap.fs_hz;
                if (std::abs(t - expect) > 0.5 / cap.fs_hz)
                    out.warnings.push_back(name + ":" + std::to_string(lineno) +
                                           ": t_seconds disagrees with header fs_hz");
            }
        } catch (const std::runtime_error&) {
            throw;
        } catch (const std::exception&) {
            fail("unparseable row");
        }
    }
    if (cap.y.size() == 0) throw std::runtime_error(name + ": no data rows");
    cap.y.sample_rate_hz = cap.fs_hz;
    return out;
}

inline CaptureReadResult read_capture(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("read_capture: cannot open " + path);
    return read_capture(is, path);
}

}  // namespace modsample
