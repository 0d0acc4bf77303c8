#pragma once

// Experiment configuration: an INI-style text file with one section per
// concern, strict schema validation (unknown sections/keys are errors), and
// flag overrides applied on top (flag > file > default). The canonical
// serialized form is hashed (FNV-1a 64) for provenance in every output.

#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "holq/drive.hpp"
#include "holq/fidelity.hpp"
#include "holq/montecarlo.hpp"
#include "holq/noise.hpp"
#include "holq/sweep.hpp"

namespace holq {

// Configuration problems carry the offending field; the CLI maps them to
// exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

namespace cfgdetail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline const std::map<std::string, std::vector<std::string>>& schema() {
    static const std::map<std::string, std::vector<std::string>> s = {
        {"gate", {"kind", "theta", "phi"}},
        {"envelope", {"kind", "duration", "scale", "samples"}},
        {"input", {"alpha", "beta", "eta", "angle"}},
        {"input2q", {"c00", "c01", "c10", "c11"}},
        {"noise", {"target", "process", "intensity", "memory"}},
        {"mc", {"trajectories", "seed", "mode", "steps", "inputs"}},
        {"sweep", {"preset", "formula", "axis1", "min1", "max1", "steps1", "axis2", "min2",
                   "max2", "steps2"}},
        {"output", {"path", "format"}},
    };
    return s;
}

}  // namespace cfgdetail

class ExperimentConfig {
public:
    static ExperimentConfig from_text(const std::string& text) {
        ExperimentConfig cfg;
        std::istringstream is(text);
        std::string line;
        std::string section;
        int lineno = 0;
        while (std::getline(is, line)) {
            ++lineno;
            const std::string t = cfgdetail::trim(line);
            if (t.empty() || t[0] == '#' || t[0] == ';') continue;
            if (t.front() == '[') {
                if (t.back() != ']')
                    throw ConfigError("config line " + std::to_string(lineno) +
                                      ": malformed section header '" + t + "'");
                section = cfgdetail::trim(t.substr(1, t.size() - 2));
                if (!cfgdetail::schema().count(section))
                    throw ConfigError("unknown config section [" + section + "]");
                continue;
            }
            const auto eq = t.find('=');
            if (eq == std::string::npos)
                throw ConfigError("config line " + std::to_string(lineno) +
                                  ": expected key = value, got '" + t + "'");
            if (section.empty())
                throw ConfigError("config line " + std::to_string(lineno) +
                                  ": key outside any section");
            const std::string key = cfgdetail::trim(t.substr(0, eq));
            const std::string value = cfgdetail::trim(t.substr(eq + 1));
            cfg.set(section, key, value);
        }
        return cfg;
    }

    static ExperimentConfig from_file(const std::string& path) {
        return from_text(read_text_file(path));
    }

    // "section.key=value" override, validated against the same schema.
    void apply_override(const std::string& assignment) {
        const auto eq = assignment.find('=');
        const auto dot = assignment.find('.');
        if (eq == std::string::npos || dot == std::string::npos || dot > eq)
            throw ConfigError("override must look like section.key=value, got '" + assignment +
                              "'");
        set(cfgdetail::trim(assignment.substr(0, dot)),
            cfgdetail::trim(assignment.substr(dot + 1, eq - dot - 1)),
            cfgdetail::trim(assignment.substr(eq + 1)));
    }

    void set(const std::string& section, const std::string& key, const std::string& value) {
        const auto it = cfgdetail::schema().find(section);
        if (it == cfgdetail::schema().end())
            throw ConfigError("unknown config section [" + section + "]");
        bool known = false;
        for (const auto& k : it->second) known = known || (k == key);
        if (!known)
            throw ConfigError("unknown key '" + key + "' in section [" + section + "]");
        values_[section][key] = value;
    }

    bool has(const std::string& section, const std::string& key) const {
        const auto s = values_.find(section);
        return s != values_.end() && s->second.count(key) > 0;
    }

    bool has_section(const std::string& section) const { return values_.count(section) > 0; }

    std::string get_string(const std::string& section, const std::string& key,
                           std::optional<std::string> fallback = std::nullopt) const {
        const auto s = values_.find(section);
        if (s != values_.end()) {
            const auto k = s->second.find(key);
            if (k != s->second.end()) return k->second;
        }
        if (fallback) return *fallback;
        throw ConfigError("missing required key '" + key + "' in section [" + section + "]");
    }

    double get_double(const std::string& section, const std::string& key,
                      std::optional<double> fallback = std::nullopt) const {
        if (!has(section, key)) {
            if (fallback) return *fallback;
            throw ConfigError("missing required key '" + key + "' in section [" + section + "]");
        }
        const std::string raw = get_string(section, key);
        try {
            std::size_t used = 0;
            const double v = std::stod(raw, &used);
            if (used != raw.size()) throw std::invalid_argument(raw);
            return v;
        } catch (const std::exception&) {
            throw ConfigError("key '" + key + "' in section [" + section +
                              "] is not a number: '" + raw + "'");
        }
    }

    std::int64_t get_int(const std::string& section, const std::string& key,
                         std::optional<std::int64_t> fallback = std::nullopt) const {
        if (!has(section, key)) {
            if (fallback) return *fallback;
            throw ConfigError("missing required key '" + key + "' in section [" + section + "]");
        }
        const std::string raw = get_string(section, key);
        try {
            std::size_t used = 0;
            const std::int64_t v = std::stoll(raw, &used);
            if (used != raw.size()) throw std::invalid_argument(raw);
            return v;
        } catch (const std::exception&) {
            throw ConfigError("key '" + key + "' in section [" + section +
                              "] is not an integer: '" + raw + "'");
        }
    }

    // Sorted canonical text; equal configurations hash equally.
    std::string canonical_text() const {
        std::string out;
        for (const auto& [sec, kv] : values_) {
            out += "[" + sec + "]\n";
            for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
        }
        return out;
    }

    std::string hash_hex() const {
        std::uint64_t h = 0xcbf29ce484222325ull;
        for (unsigned char c : canonical_text()) {
            h ^= c;
            h *= 0x100000001b3ull;
        }
        char buf[17];
        std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
        return buf;
    }

    // ---- typed views over the sections ------------------------------------

    GateAngles gate() const {
        const std::string kind = get_string("gate", "kind", std::string("custom"));
        const double th = get_double("gate", "theta", 0.0);
        const double ph = get_double("gate", "phi", 0.0);
        if (kind == "hadamard") return gate_angles(GateKind::Hadamard);
        if (kind == "pauli_x") return gate_angles(GateKind::PauliX);
        if (kind == "pauli_z") return gate_angles(GateKind::PauliZ);
        if (kind == "phase_shift") return gate_angles(GateKind::PhaseShift, 0.0, ph);
        if (kind == "custom") {
            if (!has("gate", "theta"))
                throw ConfigError("gate kind 'custom' requires key 'theta' in section [gate]");
            return gate_angles(GateKind::Custom, th, ph);
        }
        throw ConfigError("unknown gate kind '" + kind + "'");
    }

    Envelope envelope() const {
        const std::string kind = get_string("envelope", "kind", std::string("constant"));
        const double duration = get_double("envelope", "duration", 1.0);
        const double scale = get_double("envelope", "scale", 1.0);
        if (kind == "constant") return Envelope::constant(duration, scale).normalized_to_pi();
        if (kind == "sine_squared")
            return Envelope::sine_squared(duration, scale).normalized_to_pi();
        if (kind == "sampled") {
            const std::string raw = get_string("envelope", "samples");
            std::istringstream ss(raw);
            std::vector<double> vals;
            double v = 0.0;
            while (ss >> v) vals.push_back(v);
            if (vals.size() < 2)
                throw ConfigError("key 'samples' in section [envelope] needs >= 2 numbers");
            return Envelope::sampled(duration, std::move(vals)).normalized_to_pi();
        }
        throw ConfigError("unknown envelope kind '" + kind + "'");
    }

    InputState input() const {
        if (has("input", "angle"))
            return InputState::from_angle(get_double("input", "angle"),
                                          get_double("input", "eta", 0.0));
        try {
            return InputState(get_double("input", "alpha", 1.0), get_double("input", "beta", 0.0),
                              get_double("input", "eta", 0.0));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("section [input]: ") + e.what());
        }
    }

    TwoQubitInput input2q() const {
        try {
            return TwoQubitInput(get_double("input2q", "c00", 1.0),
                                 get_double("input2q", "c01", 0.0),
                                 get_double("input2q", "c10", 0.0),
                                 get_double("input2q", "c11", 0.0));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("section [input2q]: ") + e.what());
        }
    }

    NoiseSpec noise() const {
        const std::string target = get_string("noise", "target");
        const std::string process = get_string("noise", "process", std::string("ou"));
        const double intensity = get_double("noise", "intensity", 1.0);
        NoiseTarget t;
        if (target == "omega")
            t = NoiseTarget::OmegaParam;
        else if (target == "theta")
            t = NoiseTarget::ThetaParam;
        else if (target == "phi")
            t = NoiseTarget::PhiParam;
        else
            throw ConfigError("unknown noise target '" + target + "' (omega|theta|phi)");
        try {
            if (process == "ou")
                return {t, NoiseProcess::ou(intensity, get_double("noise", "memory", 1.0))};
            if (process == "white") return {t, NoiseProcess::white(intensity)};
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("section [noise]: ") + e.what());
        }
        throw ConfigError("unknown noise process '" + process + "' (ou|white)");
    }

    McConfig mc() const {
        McConfig m;
        m.n_traj = get_int("mc", "trajectories", 100000);
        m.seed = static_cast<std::uint64_t>(get_int("mc", "seed", 20240917));
        m.path_steps = static_cast<int>(get_int("mc", "steps", 2000));
        const std::string mode = get_string("mc", "mode", std::string("direct"));
        if (mode == "direct")
            m.mode = McMode::DirectGaussian;
        else if (mode == "path")
            m.mode = McMode::PathIntegral;
        else
            throw ConfigError("unknown mc mode '" + mode + "' (direct|path)");
        try {
            m.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("section [mc]: ") + e.what());
        }
        return m;
    }

    SweepSpec sweep() const {
        if (has("sweep", "preset")) {
            try {
                return sweep_preset(get_string("sweep", "preset"));
            } catch (const std::invalid_argument& e) {
                throw ConfigError(std::string("section [sweep]: ") + e.what());
            }
        }
        try {
            SweepSpec spec{formula_from_name(get_string("sweep", "formula")),
                           {axis_from_name(get_string("sweep", "axis1")),
                            get_double("sweep", "min1"), get_double("sweep", "max1"),
                            static_cast<int>(get_int("sweep", "steps1"))},
                           {axis_from_name(get_string("sweep", "axis2")),
                            get_double("sweep", "min2"), get_double("sweep", "max2"),
                            static_cast<int>(get_int("sweep", "steps2"))}};
            validate_sweep_axes(spec);
            return spec;
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("section [sweep]: ") + e.what());
        }
    }

private:
    std::map<std::string, std::map<std::string, std::string>> values_;
};

}  // namespace holq
