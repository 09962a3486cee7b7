#pragma once

// Named coupling-strength presets and initial-condition sets, plus loaders
// for plain key=value parameter files.

#include <array>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "gaitlab/common.hpp"
#include "gaitlab/network.hpp"
#include "gaitlab/neuron.hpp"

namespace gaitlab {

struct CouplingPreset {
    std::string name;
    CouplingStrengths c;
    double omega_hat_hz = 0;  // fitted coupled frequency, where published
    std::string source;
};

inline CouplingPreset coupling_preset(const std::string& name) {
    auto mk = [&](std::array<double, 7> c, double w, const char* src) {
        return CouplingPreset{name, CouplingStrengths{c}, w, src};
    };
    if (name == "fig5") return mk({1, 1, 1, 1, 3, 3, 2}, 0, "gait-transition demo couplings");
    if (name == "sec34")
        return mk({1, 2.5, 1.5, 5, 7.5, 7, 1}, 0, "balanced example couplings");
    if (name == "table2-slow")
        return mk({0.3614, 0.1478, 0.1780, 0.1837, 0.2509, 0.3409, 0.1495}, 9.92,
                  "fitted, slow walking");
    if (name == "table2-medium")
        return mk({0.2225, 0.6255, 0.4715, 0.1436, 0.3895, 0.7921, 0.2964}, 12.48,
                  "fitted, medium walking");
    if (name == "table2-fast")
        return mk({0.0580, 0.8608, 0.6726, 0.0470, 0.4294, 1.1498, 0.8500}, 15.52,
                  "fitted, fast walking");
    if (name == "table3-medium")
        return mk({0.2635, 1.2860, 2.9480, 1.3185, 1.3885, 2.5025, 1.2265}, 12.23,
                  "fitted, medium free walking");
    if (name == "table3-fast")
        return mk({2.9145, 2.5610, 2.6160, 2.9135, 5.1800, 5.4770, 2.6165}, 15.65,
                  "fitted, fast free walking");
    throw UnknownPresetError("unknown coupling preset: " + name);
}

// Named voltage initial-condition sets for the 6-cell network; gates and
// synapses start at their steady states.
inline std::array<double, 6> network_ics_preset(const std::string& name) {
    if (name == "fig5-iext") return {-31.93, -38.55, -23.83, -24.12, -31.93, -38.55};
    if (name == "fig5-delta") return {-10, -40, -30, -40, 5, 20};
    if (name == "backward") return {-40, -40, -30, 10, 5, -20};
    if (name == "table2") return {-40, 10, -10, 30, 15, -30};
    throw UnknownPresetError("unknown initial-condition preset: " + name);
}

// ---------------------------------------------------------------------------
// Plain-text key = value files. '#' starts a comment; keys must match the
// field names exactly; all fields are required.

namespace detail {

inline std::map<std::string, double> parse_kv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    std::map<std::string, double> kv;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto notspace = line.find_first_not_of(" \t\r\n");
        if (notspace == std::string::npos) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("expected key = value", line_no);
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t\r\n");
            auto e = s.find_last_not_of(" \t\r\n");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty()) throw ParseError("empty key", line_no);
        try {
            std::size_t used = 0;
            double x = std::stod(val, &used);
            if (used != val.size()) throw std::invalid_argument("trailing junk");
            kv[key] = x;
        } catch (const std::exception&) {
            throw ParseError("bad numeric value for '" + key + "'", line_no);
        }
    }
    return kv;
}

}  // namespace detail

inline NeuronParams load_neuron_params(const std::string& path) {
    auto kv = detail::parse_kv_file(path);
    NeuronParams p;
    struct Field {
        const char* key;
        double NeuronParams::*ptr;
    };
    static const Field fields[] = {
        {"C", &NeuronParams::C}, {"delta", &NeuronParams::delta},
        {"epsilon", &NeuronParams::epsilon}, {"I_ext", &NeuronParams::I_ext},
        {"g_Ca", &NeuronParams::g_Ca}, {"g_K", &NeuronParams::g_K},
        {"g_KS", &NeuronParams::g_KS}, {"g_L", &NeuronParams::g_L},
        {"g_syn", &NeuronParams::g_syn}, {"E_Ca", &NeuronParams::E_Ca},
        {"E_K", &NeuronParams::E_K}, {"E_KS", &NeuronParams::E_KS},
        {"E_L", &NeuronParams::E_L}, {"E_s_post", &NeuronParams::E_s_post},
        {"E_s_pre", &NeuronParams::E_s_pre}, {"k_Ca", &NeuronParams::k_Ca},
        {"k_K", &NeuronParams::k_K}, {"k_KS", &NeuronParams::k_KS},
        {"k_s", &NeuronParams::k_s}, {"v_Ca", &NeuronParams::v_Ca},
        {"v_K", &NeuronParams::v_K}, {"v_KS", &NeuronParams::v_KS},
        {"a", &NeuronParams::a}, {"tau_s", &NeuronParams::tau_s},
    };
    for (const auto& f : fields) {
        auto it = kv.find(f.key);
        if (it == kv.end()) throw Error("missing field '" + std::string(f.key) + "' in " + path);
        p.*(f.ptr) = it->second;
    }
    return p;
}

inline CouplingStrengths load_couplings(const std::string& path) {
    auto kv = detail::parse_kv_file(path);
    CouplingStrengths c;
    for (int i = 0; i < 7; ++i) {
        std::string key = "c" + std::to_string(i + 1);
        auto it = kv.find(key);
        if (it == kv.end()) throw Error("missing field '" + key + "' in " + path);
        c.c[i] = it->second;
    }
    if (!c.valid()) throw Error("couplings in " + path + " must be nonnegative");
    return c;
}

// Couplings by preset name or from a file path.
inline CouplingStrengths resolve_couplings(const std::string& spec) {
    try {
        return coupling_preset(spec).c;
    } catch (const UnknownPresetError&) {
        if (spec.find('.') != std::string::npos || spec.find('/') != std::string::npos)
            return load_couplings(spec);
        throw;
    }
}

// Voltage ICs by preset name or from a file with v1..v6 keys.
inline std::array<double, 6> resolve_network_ics(const std::string& spec) {
    try {
        return network_ics_preset(spec);
    } catch (const UnknownPresetError&) {
        if (spec.find('.') == std::string::npos && spec.find('/') == std::string::npos)
            throw;
    }
    auto kv = detail::parse_kv_file(spec);
    std::array<double, 6> v{};
    for (int i = 0; i < 6; ++i) {
        std::string key = "v" + std::to_string(i + 1);
        auto it = kv.find(key);
        if (it == kv.end()) throw Error("missing field '" + key + "' in " + spec);
        v[i] = it->second;
    }
    return v;
}

}  // namespace gaitlab
