#pragma once

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "qsec/experiments.hpp"

namespace qsec {

inline std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

namespace io {

using nlohmann::json;

inline std::string format_double(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

// ---- plain-text matrix format: "rows cols" header, then row-major "re,im" entries

inline std::string matrix_to_text(const Mat4& m) {
    std::ostringstream os;
    os << "4 4\n";
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            if (j) os << ' ';
            os << format_double(m(i, j).real()) << ',' << format_double(m(i, j).imag());
        }
        os << '\n';
    }
    return os.str();
}

inline Mat4 matrix_from_text(const std::string& text) {
    std::istringstream is(text);
    int rows = 0, cols = 0;
    is >> rows >> cols;
    if (rows != 4 || cols != 4) throw std::runtime_error("matrix_from_text: expected a 4x4 matrix");
    Mat4 m;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            std::string tok;
            is >> tok;
            auto comma = tok.find(',');
            if (comma == std::string::npos) throw std::runtime_error("matrix_from_text: bad entry '" + tok + "'");
            m(i, j) = Complex(std::stod(tok.substr(0, comma)), std::stod(tok.substr(comma + 1)));
        }
    return m;
}

// ---- curve tables: tab-separated with a commented header

inline std::string curve_to_text(const CurveData& c) {
    std::ostringstream os;
    os << "# qsec-curve v1\n";
    os << "# protocol=" << c.meta.protocol << " label=" << (c.meta.label.empty() ? "-" : c.meta.label)
       << " n_ec=" << c.meta.n_ec << " seed=" << c.meta.seed << " config_hash=" << std::hex
       << c.meta.config_hash << std::dec << "\n";
    os << "# columns: x y_exact y_sampled y_err\n";
    for (std::size_t i = 0; i < c.x.size(); ++i) {
        os << format_double(c.x[i]) << '\t' << format_double(c.y_exact[i]) << '\t'
           << format_double(i < c.y_sampled.size() ? c.y_sampled[i] : 0.0) << '\t'
           << format_double(i < c.y_err.size() ? c.y_err[i] : 0.0) << '\n';
    }
    return os.str();
}

inline CurveData curve_from_text(const std::string& text) {
    CurveData c;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            auto grab = [&](const std::string& key) -> std::string {
                auto pos = line.find(key + "=");
                if (pos == std::string::npos) return {};
                auto start = pos + key.size() + 1;
                auto end = line.find(' ', start);
                return line.substr(start, end == std::string::npos ? std::string::npos : end - start);
            };
            if (auto v = grab("protocol"); !v.empty()) c.meta.protocol = v;
            if (auto v = grab("label"); !v.empty() && v != "-") c.meta.label = v;
            if (auto v = grab("n_ec"); !v.empty()) c.meta.n_ec = std::stoi(v);
            if (auto v = grab("seed"); !v.empty()) c.meta.seed = std::stoull(v);
            if (auto v = grab("config_hash"); !v.empty()) c.meta.config_hash = std::stoull(v, nullptr, 16);
            continue;
        }
        std::istringstream row(line);
        double x, ye, ys, yr;
        if (row >> x >> ye >> ys >> yr) {
            c.x.push_back(x);
            c.y_exact.push_back(ye);
            c.y_sampled.push_back(ys);
            c.y_err.push_back(yr);
        }
    }
    if (c.x.empty()) throw std::runtime_error("curve_from_text: no data rows");
    return c;
}

// ---- fit / posterior / histogram exports

inline std::string fit_to_text(const FitResult& f) {
    std::ostringstream os;
    os << "model=" << (f.model == FitModelKind::single ? "single" : "double") << '\n';
    os << "converged=" << (f.converged ? 1 : 0) << '\n';
    os << "gamma_identified=" << (f.gamma_identified ? 1 : 0) << '\n';
    os << "residual_norm=" << format_double(f.residual_norm) << '\n';
    static const char* names1[] = {"A", "gamma", "omega", "phi", "c"};
    static const char* names2[] = {"A1", "gamma1", "omega1", "phi1", "A2", "gamma2", "omega2", "phi2", "c"};
    const char** names = f.model == FitModelKind::single ? names1 : names2;
    for (std::size_t i = 0; i < f.params.size(); ++i)
        os << names[i] << '=' << format_double(f.params[i]) << '\n';
    return os.str();
}

inline FitResult fit_from_text(const std::string& text) {
    FitResult f;
    std::istringstream is(text);
    std::string line;
    std::map<std::string, std::string> kv;
    while (std::getline(is, line)) {
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    f.model = kv.at("model") == "single" ? FitModelKind::single : FitModelKind::two_component;
    f.converged = kv.at("converged") == "1";
    f.gamma_identified = kv.at("gamma_identified") == "1";
    f.residual_norm = std::stod(kv.at("residual_norm"));
    if (f.model == FitModelKind::single) {
        for (const char* n : {"A", "gamma", "omega", "phi", "c"}) f.params.push_back(std::stod(kv.at(n)));
    } else {
        for (const char* n : {"A1", "gamma1", "omega1", "phi1", "A2", "gamma2", "omega2", "phi2", "c"})
            f.params.push_back(std::stod(kv.at(n)));
    }
    return f;
}

inline std::string posterior_to_text(const Posterior& p) {
    std::ostringstream os;
    os << "# qsec-posterior v1\n";
    os << "# mode=" << format_double(p.mode) << " mean=" << format_double(p.mean)
       << " ci_low=" << format_double(p.ci_low) << " ci_high=" << format_double(p.ci_high) << "\n";
    os << "# acceptance_rate=" << format_double(p.acceptance_rate)
       << " gelman_rubin=" << format_double(p.gelman_rubin) << "\n";
    os << "# columns: gamma pdf\n";
    for (std::size_t i = 0; i < p.grid_gamma.size(); ++i)
        os << format_double(p.grid_gamma[i]) << '\t' << format_double(p.grid_pdf[i]) << '\n';
    return os.str();
}

inline std::string histogram_to_text(const Histogram& h) {
    std::ostringstream os;
    for (std::size_t i = 0; i < h.bin_center.size(); ++i)
        os << h.bin_center[i] << '\t' << h.count[i] << '\n';
    return os.str();
}

inline std::string sensitivity_to_text(const SensitivityCurve& s) {
    std::ostringstream os;
    os << "# qsec-sensitivity v1\n";
    os << "# tau_star=" << format_double(s.tau_star) << " s_star=" << format_double(s.s_star) << "\n";
    os << "# columns: tau s\n";
    for (std::size_t i = 0; i < s.times.size(); ++i)
        os << format_double(s.times[i]) << '\t' << format_double(s.s[i]) << '\n';
    return os.str();
}

// ---- config <-> JSON

inline json config_to_json(const ExperimentConfig& c) {
    json j;
    j["hamiltonian"] = {{"hyperfine_hz", c.hamiltonian.hyperfine_hz},
                        {"mw_detuning_hz", c.hamiltonian.mw_detuning_hz},
                        {"rf_detuning_hz", c.hamiltonian.rf_detuning_hz}};
    j["dephasing"] = {{"t_dephase_s", c.dephasing.t_dephase_s},
                      {"clock_mode", c.dephasing.clock_mode == ClockMode::global_time ? "global" : "per_reset"},
                      {"enabled", c.dephasing.enabled}};
    j["reset"] = {{"eta", c.reset.eta}};
    j["readout"] = {{"fidelity_read", c.readout.fidelity_read},
                    {"fidelity_init", c.readout.fidelity_init}};
    if (c.readout.photon) {
        j["readout"]["photon"] = {{"rate_up", c.readout.photon->rate_up},
                                  {"rate_down", c.readout.photon->rate_down},
                                  {"threshold", c.readout.photon->threshold},
                                  {"repetitions", c.readout.photon->repetitions}};
    }
    j["protocol"] = protocol_name(c.protocol);
    j["n_ec"] = c.n_ec;
    j["shots"] = c.shots;
    j["seed"] = c.seed;
    j["sensing"] = {{"rabi_hz", c.sensing.rabi_hz},
                    {"selective", c.sensing.selective},
                    {"times", {{"start_s", c.sensing.times.start_s},
                               {"stop_s", c.sensing.times.stop_s},
                               {"count", c.sensing.times.count}}}};
    j["cpmg"] = {{"signal", {{"amplitude_hz", c.cpmg.signal.amplitude_hz},
                             {"frequency_hz", c.cpmg.signal.frequency_hz},
                             {"phase_rad", c.cpmg.signal.phase_rad}}},
                 {"max_pulses_per_block", c.cpmg.max_pulses_per_block},
                 {"error_angles_rad", c.cpmg.error_angles_rad},
                 {"delays_s", c.cpmg.delays_s}};
    j["error_angle_rad"] = c.error_angle_rad;
    j["resets"] = c.resets;
    j["gate_penalty"] = c.gate_penalty;
    j["workers"] = c.workers;
    return j;
}

inline Protocol protocol_from_name(const std::string& s) {
    if (s == "qsec_rabi") return Protocol::qsec_rabi;
    if (s == "single_phase_error") return Protocol::single_phase_error;
    if (s == "bitflip_cpmg") return Protocol::bitflip_cpmg;
    if (s == "reset_coherence") return Protocol::reset_coherence;
    if (s == "no_noise_sim") return Protocol::no_noise_sim;
    throw std::runtime_error("unknown protocol '" + s + "'");
}

inline ExperimentConfig config_from_json(const json& j) {
    ExperimentConfig c;
    if (j.contains("hamiltonian")) {
        const auto& h = j["hamiltonian"];
        c.hamiltonian.hyperfine_hz = h.value("hyperfine_hz", c.hamiltonian.hyperfine_hz);
        c.hamiltonian.mw_detuning_hz = h.value("mw_detuning_hz", c.hamiltonian.mw_detuning_hz);
        c.hamiltonian.rf_detuning_hz = h.value("rf_detuning_hz", c.hamiltonian.rf_detuning_hz);
    }
    if (j.contains("dephasing")) {
        const auto& d = j["dephasing"];
        c.dephasing.t_dephase_s = d.value("t_dephase_s", c.dephasing.t_dephase_s);
        c.dephasing.enabled = d.value("enabled", c.dephasing.enabled);
        std::string cm = d.value("clock_mode", std::string("global"));
        if (cm == "global") c.dephasing.clock_mode = ClockMode::global_time;
        else if (cm == "per_reset") c.dephasing.clock_mode = ClockMode::per_reset;
        else throw std::runtime_error("dephasing.clock_mode: expected 'global' or 'per_reset'");
    }
    if (j.contains("reset")) c.reset.eta = j["reset"].value("eta", c.reset.eta);
    if (j.contains("readout")) {
        const auto& r = j["readout"];
        c.readout.fidelity_read = r.value("fidelity_read", c.readout.fidelity_read);
        c.readout.fidelity_init = r.value("fidelity_init", c.readout.fidelity_init);
        if (r.contains("photon")) {
            PhotonModel ph;
            ph.rate_up = r["photon"].value("rate_up", ph.rate_up);
            ph.rate_down = r["photon"].value("rate_down", ph.rate_down);
            ph.threshold = r["photon"].value("threshold", ph.threshold);
            ph.repetitions = r["photon"].value("repetitions", ph.repetitions);
            c.readout.photon = ph;
        }
    }
    if (j.contains("protocol")) c.protocol = protocol_from_name(j["protocol"].get<std::string>());
    c.n_ec = j.value("n_ec", c.n_ec);
    c.shots = j.value("shots", c.shots);
    c.seed = j.value("seed", c.seed);
    if (j.contains("sensing")) {
        const auto& s = j["sensing"];
        c.sensing.rabi_hz = s.value("rabi_hz", c.sensing.rabi_hz);
        c.sensing.selective = s.value("selective", c.sensing.selective);
        if (s.contains("times")) {
            const auto& t = s["times"];
            c.sensing.times.start_s = t.value("start_s", c.sensing.times.start_s);
            c.sensing.times.stop_s = t.value("stop_s", c.sensing.times.stop_s);
            c.sensing.times.count = t.value("count", c.sensing.times.count);
        }
    }
    if (j.contains("cpmg")) {
        const auto& g = j["cpmg"];
        if (g.contains("signal")) {
            c.cpmg.signal.amplitude_hz = g["signal"].value("amplitude_hz", c.cpmg.signal.amplitude_hz);
            c.cpmg.signal.frequency_hz = g["signal"].value("frequency_hz", c.cpmg.signal.frequency_hz);
            c.cpmg.signal.phase_rad = g["signal"].value("phase_rad", c.cpmg.signal.phase_rad);
        }
        c.cpmg.max_pulses_per_block = g.value("max_pulses_per_block", c.cpmg.max_pulses_per_block);
        if (g.contains("error_angles_rad"))
            c.cpmg.error_angles_rad = g["error_angles_rad"].get<std::vector<double>>();
        if (g.contains("delays_s")) c.cpmg.delays_s = g["delays_s"].get<std::vector<double>>();
    }
    c.error_angle_rad = j.value("error_angle_rad", c.error_angle_rad);
    c.resets = j.value("resets", c.resets);
    c.gate_penalty = j.value("gate_penalty", c.gate_penalty);
    c.workers = j.value("workers", c.workers);
    return c;
}

/// Stable hash of the resolved config; identical configs + seed reproduce runs bit-identically.
inline std::uint64_t config_hash(const ExperimentConfig& c) {
    return fnv1a64(config_to_json(c).dump());
}

struct RunManifest {
    json config_echo;
    std::uint64_t config_hash = 0;
    std::uint64_t seed = 0;
    std::string version;
    std::vector<std::string> outputs;
    double wall_seconds = 0.0;

    json to_json() const {
        json j;
        j["config"] = config_echo;
        std::ostringstream h;
        h << std::hex << config_hash;
        j["config_hash"] = h.str();
        j["seed"] = seed;
        j["version"] = version;
        j["outputs"] = outputs;
        j["wall_seconds"] = wall_seconds;
        return j;
    }
};

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + path + "'");
    f << content;
}

inline std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot read '" + path + "'");
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

}  // namespace io
}  // namespace qsec
