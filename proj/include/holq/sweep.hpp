#pragma once

// 2-D fidelity landscapes over drive/noise parameters, emitted as CSV or
// JSON. Presets fig1/fig2/fig3 reproduce the standard landscapes:
//   fig1: envelope-noise fidelity over decay value x and dark-state weight f
//   fig2: input-averaged envelope-noise fidelity over (Gamma T, gamma/Gamma)
//         for Ornstein-Uhlenbeck noise
//   fig3: input-averaged phi-noise fidelity over x and sin^2(theta)
//
// Output is deterministic: row-major over axis1 then axis2, 17 significant
// digits, LF line endings.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "holq/fidelity.hpp"
#include "holq/montecarlo.hpp"
#include "holq/version.hpp"

namespace holq {

enum class AxisKind { DecayX, DarkWeightF, GammaT, GammaRatio, Sin2Theta };

inline const char* axis_name(AxisKind k) {
    switch (k) {
        case AxisKind::DecayX: return "x";
        case AxisKind::DarkWeightF: return "f";
        case AxisKind::GammaT: return "gamma_T";
        case AxisKind::GammaRatio: return "gamma_ratio";
        case AxisKind::Sin2Theta: return "sin2_theta";
    }
    return "?";
}

inline AxisKind axis_from_name(const std::string& s) {
    if (s == "x") return AxisKind::DecayX;
    if (s == "f") return AxisKind::DarkWeightF;
    if (s == "gamma_T") return AxisKind::GammaT;
    if (s == "gamma_ratio") return AxisKind::GammaRatio;
    if (s == "sin2_theta") return AxisKind::Sin2Theta;
    throw std::invalid_argument("unknown sweep axis '" + s + "'");
}

enum class SweepFormula { FidelityOmega, AvgOmega, AvgTheta, AvgPhi, AvgPhiTwoQubit };

inline const char* formula_name(SweepFormula f) {
    switch (f) {
        case SweepFormula::FidelityOmega: return "fidelity_omega";
        case SweepFormula::AvgOmega: return "avg_fidelity_omega";
        case SweepFormula::AvgTheta: return "avg_fidelity_theta";
        case SweepFormula::AvgPhi: return "avg_fidelity_phi";
        case SweepFormula::AvgPhiTwoQubit: return "avg_fidelity_phi_twoqubit";
    }
    return "?";
}

inline SweepFormula formula_from_name(const std::string& s) {
    if (s == "fidelity_omega") return SweepFormula::FidelityOmega;
    if (s == "avg_fidelity_omega") return SweepFormula::AvgOmega;
    if (s == "avg_fidelity_theta") return SweepFormula::AvgTheta;
    if (s == "avg_fidelity_phi") return SweepFormula::AvgPhi;
    if (s == "avg_fidelity_phi_twoqubit") return SweepFormula::AvgPhiTwoQubit;
    throw std::invalid_argument("unknown sweep formula '" + s + "'");
}

struct SweepAxis {
    AxisKind kind;
    double min;
    double max;
    int steps;

    std::vector<double> grid() const {
        if (steps < 2) throw std::invalid_argument("sweep axis needs at least 2 steps");
        if (!(min < max)) throw std::invalid_argument("sweep axis needs min < max");
        return linspace(min, max, steps);
    }
};

struct SweepSpec {
    SweepFormula formula;
    SweepAxis axis1;
    SweepAxis axis2;
};

struct SweepResult {
    SweepSpec spec;
    std::vector<double> axis1_grid;
    std::vector<double> axis2_grid;
    std::vector<double> values;  // row-major: axis1 index outer, axis2 inner
    std::string version = std::string(kVersion);
    std::string config_hash;

    double at(int i, int j) const {
        return values[static_cast<std::size_t>(i) * axis2_grid.size() +
                      static_cast<std::size_t>(j)];
    }
};

// Decay value of OU noise in the dimensionless coordinates u = Gamma T,
// r = gamma / Gamma:  x = exp[-(e^{-r u} + r u - 1) / (2 r)].
inline double ou_decay_dimensionless(double gamma_T, double gamma_ratio) {
    const double z = gamma_ratio * gamma_T;
    return std::exp(-(std::exp(-z) + z - 1.0) / (2.0 * gamma_ratio));
}

namespace detail {

inline bool axes_are(const SweepSpec& s, AxisKind a, AxisKind b) {
    return (s.axis1.kind == a && s.axis2.kind == b) ||
           (s.axis1.kind == b && s.axis2.kind == a);
}

inline double eval_cell(const SweepSpec& spec, double v1, double v2) {
    auto pick = [&](AxisKind want) {
        if (spec.axis1.kind == want) return v1;
        if (spec.axis2.kind == want) return v2;
        throw std::logic_error("sweep axis lookup");
    };
    switch (spec.formula) {
        case SweepFormula::FidelityOmega:
            return fidelity_omega_from_weight(pick(AxisKind::DarkWeightF), pick(AxisKind::DecayX));
        case SweepFormula::AvgOmega:
            return avg_fidelity_omega(
                ou_decay_dimensionless(pick(AxisKind::GammaT), pick(AxisKind::GammaRatio)));
        case SweepFormula::AvgTheta: {
            const double x =
                ou_decay_dimensionless(pick(AxisKind::GammaT), pick(AxisKind::GammaRatio));
            return avg_fidelity_theta(x * x * x * x);
        }
        case SweepFormula::AvgPhi: {
            const double s2 = pick(AxisKind::Sin2Theta);
            if (s2 < 0.0 || s2 > 1.0)
                throw std::invalid_argument("sin2_theta axis must lie in [0, 1]");
            return avg_fidelity_phi(std::asin(std::sqrt(s2)), pick(AxisKind::DecayX));
        }
        case SweepFormula::AvgPhiTwoQubit:
            return avg_fidelity_phi_twoqubit(
                ou_decay_dimensionless(pick(AxisKind::GammaT), pick(AxisKind::GammaRatio)));
    }
    throw std::logic_error("eval_cell: unknown formula");
}

}  // namespace detail

// Rejects axis pairs the formula does not consume.
inline void validate_sweep_axes(const SweepSpec& spec) {
    using detail::axes_are;
    bool ok = false;
    switch (spec.formula) {
        case SweepFormula::FidelityOmega:
            ok = axes_are(spec, AxisKind::DecayX, AxisKind::DarkWeightF);
            break;
        case SweepFormula::AvgOmega:
        case SweepFormula::AvgTheta:
        case SweepFormula::AvgPhiTwoQubit:
            ok = axes_are(spec, AxisKind::GammaT, AxisKind::GammaRatio);
            break;
        case SweepFormula::AvgPhi:
            ok = axes_are(spec, AxisKind::DecayX, AxisKind::Sin2Theta);
            break;
    }
    if (!ok)
        throw std::invalid_argument(std::string("formula '") + formula_name(spec.formula) +
                                    "' is incompatible with axes (" +
                                    axis_name(spec.axis1.kind) + ", " +
                                    axis_name(spec.axis2.kind) + ")");
}

inline SweepResult run_sweep(const SweepSpec& spec, int threads = default_thread_count()) {
    validate_sweep_axes(spec);
    SweepResult res;
    res.spec = spec;
    res.axis1_grid = spec.axis1.grid();
    res.axis2_grid = spec.axis2.grid();
    const std::size_t n1 = res.axis1_grid.size();
    const std::size_t n2 = res.axis2_grid.size();
    res.values.resize(n1 * n2);
    parallel_for_index(
        static_cast<std::int64_t>(n1),
        [&](std::int64_t i) {
            const double v1 = res.axis1_grid[static_cast<std::size_t>(i)];
            for (std::size_t j = 0; j < n2; ++j)
                res.values[static_cast<std::size_t>(i) * n2 + j] =
                    detail::eval_cell(spec, v1, res.axis2_grid[j]);
        },
        threads);
    for (double v : res.values)
        if (!(v >= 0.0 && v <= 1.0 + 1e-12))
            throw std::logic_error("run_sweep: fidelity value outside [0, 1]");
    return res;
}

// Named presets; axis1 is the first CSV column.
inline SweepSpec sweep_preset(const std::string& name) {
    if (name == "fig1")
        return {SweepFormula::FidelityOmega,
                {AxisKind::DecayX, 1.0 / 101.0, 1.0, 101},
                {AxisKind::DarkWeightF, 0.0, 1.0, 101}};
    if (name == "fig2")
        return {SweepFormula::AvgOmega,
                {AxisKind::GammaT, 10.0 / 101.0, 10.0, 101},
                {AxisKind::GammaRatio, 0.1, 4.0, 101}};
    if (name == "fig3")
        return {SweepFormula::AvgPhi,
                {AxisKind::DecayX, 1e-3, 1.0, 101},
                {AxisKind::Sin2Theta, 0.0, 1.0, 101}};
    throw std::invalid_argument("unknown sweep preset '" + name + "'");
}

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string sweep_to_csv(const SweepResult& res) {
    std::string out;
    out += axis_name(res.spec.axis1.kind);
    out += ',';
    out += axis_name(res.spec.axis2.kind);
    out += ',';
    out += formula_name(res.spec.formula);
    out += '\n';
    const std::size_t n2 = res.axis2_grid.size();
    for (std::size_t i = 0; i < res.axis1_grid.size(); ++i)
        for (std::size_t j = 0; j < n2; ++j) {
            out += format_double(res.axis1_grid[i]);
            out += ',';
            out += format_double(res.axis2_grid[j]);
            out += ',';
            out += format_double(res.values[i * n2 + j]);
            out += '\n';
        }
    return out;
}

struct ParsedSweepCsv {
    std::vector<std::string> header;
    std::vector<std::array<double, 3>> rows;
};

// Reads a sweep CSV back; %.17g output makes the round trip lossless.
inline ParsedSweepCsv parse_sweep_csv(const std::string& text) {
    ParsedSweepCsv out;
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line)) throw std::invalid_argument("empty CSV");
    std::istringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) out.header.push_back(cell);
    if (out.header.size() != 3) throw std::invalid_argument("CSV header must have 3 columns");
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::array<double, 3> row{};
        std::size_t pos = 0;
        for (int k = 0; k < 3; ++k) {
            const std::size_t next = k < 2 ? line.find(',', pos) : line.size();
            if (next == std::string::npos) throw std::invalid_argument("short CSV row");
            const std::string tok = line.substr(pos, next - pos);
            char* end = nullptr;
            row[static_cast<std::size_t>(k)] = std::strtod(tok.c_str(), &end);
            if (end == tok.c_str()) throw std::invalid_argument("bad CSV number '" + tok + "'");
            pos = next + 1;
        }
        out.rows.push_back(row);
    }
    return out;
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
    os << text;
    if (!os) throw std::runtime_error("failed writing '" + path + "'");
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

}  // namespace holq
