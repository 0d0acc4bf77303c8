#pragma once

// Trajectory-ensemble oracle. Each trajectory draws one realization of the
// accumulated noise integral Delta(T), builds the perturbed transformation by
// substituting the noisy parameter into the closed-form gate, and records the
// squared overlap with the ideal output. Ensemble statistics are compared
// against the closed forms in fidelity.hpp.
//
// Determinism contract: trajectory i consumes RngStream(seed, i) only.
// Results are filled into an index-addressed buffer and reduced pairwise, so
// the ensemble mean is bit-identical for any thread count.

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "holq/drive.hpp"
#include "holq/fidelity.hpp"
#include "holq/noise.hpp"
#include "holq/numerics.hpp"
#include "holq/rng.hpp"

namespace holq {

inline int default_thread_count() {
    if (const char* env = std::getenv("HOLQ_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1 && n <= 256) return n;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(std::min(hc, 8u));
}

// Evaluates fn(i) for i in [0, n) with results written to disjoint slots.
template <class Fn>
void parallel_for_index(std::int64_t n, Fn&& fn, int threads = default_thread_count()) {
    if (threads <= 1 || n < 256) {
        for (std::int64_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    const std::int64_t chunk = (n + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        const std::int64_t lo = t * chunk;
        const std::int64_t hi = std::min<std::int64_t>(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (std::int64_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

enum class McMode { DirectGaussian, PathIntegral };

struct McConfig {
    std::int64_t n_traj = 100000;
    std::uint64_t seed = 0x1234;
    McMode mode = McMode::DirectGaussian;
    int path_steps = 2000;  // PathIntegral: dt = T / path_steps

    void validate() const {
        if (n_traj < 1) throw std::invalid_argument("McConfig: n_traj must be >= 1");
        if (mode == McMode::PathIntegral && path_steps < 1)
            throw std::invalid_argument("McConfig: path_steps must be >= 1");
    }
};

struct FidelityReport {
    double analytic = 0.0;  // closed-form ensemble average of the simulated overlap
    double mc_mean = 0.0;
    double mc_stderr = 0.0;
    std::int64_t n_traj = 0;
    std::uint64_t seed = 0;
    McMode mode = McMode::DirectGaussian;
    NoiseTarget target = NoiseTarget::OmegaParam;

    // |analytic - mc_mean| within k combined standard errors (plus an absolute
    // floor so zero-variance sweet spots compare exactly).
    bool within(double k, double floor = 1e-12) const {
        return std::abs(analytic - mc_mean) <= k * mc_stderr + floor;
    }
    double sigma_distance() const {
        const double d = std::abs(analytic - mc_mean);
        return mc_stderr > 0.0 ? d / mc_stderr : (d > 0.0 ? 1e30 : 0.0);
    }
};

namespace detail {

// Accumulated noise integral for one trajectory, by the configured route.
inline double draw_delta(const NoiseProcess& process, double duration, const McConfig& mc,
                         RngStream& stream) {
    if (mc.mode == McMode::DirectGaussian) return sample_integral(process, duration, stream);
    const double dt = duration / mc.path_steps;
    return sample_path(process, duration, dt, stream).integral();
}

template <class PerTrajectory>
FidelityReport run_ensemble(const NoiseSpec& spec, double duration, const McConfig& mc,
                            double analytic, PerTrajectory&& per_traj) {
    mc.validate();
    std::vector<double> overlaps(static_cast<std::size_t>(mc.n_traj));
    parallel_for_index(mc.n_traj, [&](std::int64_t i) {
        RngStream stream(mc.seed, static_cast<std::uint64_t>(i));
        const double delta = draw_delta(spec.process, duration, mc, stream);
        overlaps[static_cast<std::size_t>(i)] = per_traj(delta);
    });
    const MeanStderr ms = mean_stderr(overlaps);
    FidelityReport rep;
    rep.analytic = analytic;
    rep.mc_mean = ms.mean;
    rep.mc_stderr = ms.stderr_of_mean;
    rep.n_traj = mc.n_traj;
    rep.seed = mc.seed;
    rep.mode = mc.mode;
    rep.target = spec.target;
    return rep;
}

}  // namespace detail

// Envelope noise: the pulse area picks up Delta(T), so the perturbed state is
// the closed-form propagator evaluated at area pi + Delta applied to the
// embedded input. Leakage onto |e> is part of the overlap loss.
inline FidelityReport mc_fidelity_omega(const DriveConfig& cfg, const InputState& in,
                                        const NoiseSpec& spec, const McConfig& mc) {
    if (spec.target != NoiseTarget::OmegaParam)
        throw std::invalid_argument("mc_fidelity_omega: noise spec does not target the envelope");
    const double T = cfg.envelope.duration();
    if (std::abs(cfg.envelope.total_area() - M_PI) > 1e-9)
        throw std::invalid_argument("mc_fidelity_omega: envelope must be normalized to area pi");
    const double x = decay_function(spec.process, T);
    const double analytic = fidelity_omega(cfg.theta, cfg.phi, in, x);
    const PureState<3> ideal3 = embed_qubit(ideal_output(cfg.theta, cfg.phi, in));
    const PureState<3> input3 = embed_qubit(in.state());
    return detail::run_ensemble(spec, T, mc, analytic, [&](double delta) {
        const Matrix<3> u = propagator_at_area(cfg.theta, cfg.phi, M_PI + delta);
        return overlap_probability(ideal3, apply(u, input3));
    });
}

// Theta noise: endpoint substitution theta -> theta + Delta(T) in the gate.
// The system stays in the qubit subspace by construction of this model.
inline FidelityReport mc_fidelity_theta(const DriveConfig& cfg, const InputState& in,
                                        const NoiseSpec& spec, const McConfig& mc) {
    if (spec.target != NoiseTarget::ThetaParam)
        throw std::invalid_argument("mc_fidelity_theta: noise spec does not target theta");
    const double T = cfg.envelope.duration();
    const double x4 = std::exp(-4.0 * correlation_integral(spec.process, T));
    const double analytic =
        fidelity_theta_from_overlap(cfg.phi + in.eta, in.alpha, in.beta, x4);
    const PureState<2> ideal = ideal_output(cfg.theta, cfg.phi, in);
    return detail::run_ensemble(spec, T, mc, analytic, [&](double delta) {
        return overlap_probability(ideal, ideal_output(cfg.theta + delta, cfg.phi, in));
    });
}

// Phi noise: endpoint substitution phi -> phi + Delta(T) in the gate.
inline FidelityReport mc_fidelity_phi(const DriveConfig& cfg, const InputState& in,
                                      const NoiseSpec& spec, const McConfig& mc) {
    if (spec.target != NoiseTarget::PhiParam)
        throw std::invalid_argument("mc_fidelity_phi: noise spec does not target phi");
    const double T = cfg.envelope.duration();
    const double x = decay_function(spec.process, T);
    const double analytic = fidelity_phi(cfg.theta, cfg.phi, in, x);
    const PureState<2> ideal = ideal_output(cfg.theta, cfg.phi, in);
    return detail::run_ensemble(spec, T, mc, analytic, [&](double delta) {
        return overlap_probability(ideal, ideal_output(cfg.theta, cfg.phi + delta, in));
    });
}

// Two-qubit phi noise: perturbed 4x4 gate against the ideal one.
inline FidelityReport mc_fidelity_phi_twoqubit(double theta, double phi, const TwoQubitInput& in,
                                               const NoiseSpec& spec, double duration,
                                               const McConfig& mc) {
    if (spec.target != NoiseTarget::PhiParam)
        throw std::invalid_argument("mc_fidelity_phi_twoqubit: noise spec does not target phi");
    const double x = decay_function(spec.process, duration);
    const double analytic = fidelity_phi_twoqubit_from_overlap(theta, phi, in, x);
    const PureState<4> psi0 = in.state();
    const PureState<4> ideal = apply(two_qubit_gate(theta, phi), psi0);
    return detail::run_ensemble(spec, duration, mc, analytic, [&](double delta) {
        return overlap_probability(ideal, apply(two_qubit_gate(theta, phi + delta), psi0));
    });
}

// Ordered product of per-step exact exponentials for a (possibly noisy)
// envelope sampled on a uniform grid. All steps share the spectral projectors
// of the drive, so the product telescopes to the closed-form propagator at
// the trapezoid pulse area; building the product anyway cross-checks both.
inline Matrix<3> piecewise_propagator(double theta, double phi, const Trajectory& rate_samples) {
    if (rate_samples.values.size() < 2)
        throw std::invalid_argument("piecewise_propagator: need at least two samples");
    const Cx a = std::polar(std::sin(theta / 2.0), phi);
    const Cx b = std::cos(theta / 2.0);
    // Bright-pair and dark projectors; K is the coupling direction (H = Omega K).
    Matrix<3> q;  // P_+ + P_-
    q(0, 0) = std::norm(a);
    q(0, 1) = std::conj(a) * b;
    q(1, 0) = a * std::conj(b);
    q(1, 1) = std::norm(b);
    q(2, 2) = 1.0;
    Matrix<3> k;  // P_+ - P_-
    k(0, 2) = std::conj(a);
    k(1, 2) = std::conj(b);
    k(2, 0) = a;
    k(2, 1) = b;
    Matrix<3> pd;  // dark state (b, -a, 0)
    pd(0, 0) = std::norm(b);
    pd(0, 1) = -b * std::conj(a);
    pd(1, 0) = -std::conj(b) * a;
    pd(1, 1) = std::norm(a);
    const Cx i(0.0, 1.0);
    Matrix<3> u = Matrix<3>::identity();
    for (std::size_t n = 0; n + 1 < rate_samples.values.size(); ++n) {
        const double s =
            0.5 * rate_samples.dt * (rate_samples.values[n] + rate_samples.values[n + 1]);
        Matrix<3> step;
        const double cs = std::cos(s);
        const double sn = std::sin(s);
        for (std::size_t j = 0; j < step.entries.size(); ++j)
            step.entries[j] = pd.entries[j] + cs * q.entries[j] + i * sn * k.entries[j];
        u = matmul(step, u);
    }
    return u;
}

struct InputAverageReport {
    double mc_mean = 0.0;       // outer Monte Carlo over inputs, inner closed form
    double mc_stderr = 0.0;
    double reference_avg = 0.0; // published averaged formula for this target
    double exact_avg = 0.0;     // quadrature average of the per-input form
    std::int64_t n_inputs = 0;
    std::uint64_t seed = 0;
    NoiseTarget target = NoiseTarget::OmegaParam;
};

// Outer Monte Carlo over the uniform input measure with the per-input closed
// form inside. For theta and phi noise the published averages are exact; for
// envelope noise the published average differs from the exact one (it
// squares the mean weight), which this report makes visible.
inline InputAverageReport mc_input_average(double theta, double phi, NoiseTarget target,
                                           const NoiseProcess& process, double duration,
                                           std::int64_t n_inputs, std::uint64_t seed) {
    if (n_inputs < 1) throw std::invalid_argument("mc_input_average: n_inputs must be >= 1");
    const double x = decay_function(process, duration);
    const double x4 = std::exp(-4.0 * correlation_integral(process, duration));
    std::vector<double> vals(static_cast<std::size_t>(n_inputs));
    parallel_for_index(n_inputs, [&](std::int64_t idx) {
        RngStream stream(seed, static_cast<std::uint64_t>(idx));
        const double phi1 = M_PI * stream.uniform();
        const double eta = 2.0 * M_PI * stream.uniform();
        double v = 0.0;
        switch (target) {
            case NoiseTarget::OmegaParam:
                v = fidelity_omega(theta, phi, InputState::from_angle(phi1, eta), x);
                break;
            case NoiseTarget::ThetaParam:
                v = fidelity_theta_from_overlap(phi + eta, std::cos(phi1 / 2.0),
                                                std::sin(phi1 / 2.0), x4);
                break;
            case NoiseTarget::PhiParam:
                v = fidelity_phi(theta, phi, InputState::from_angle(phi1, eta), x);
                break;
        }
        vals[static_cast<std::size_t>(idx)] = v;
    });
    const MeanStderr ms = mean_stderr(vals);
    InputAverageReport rep;
    rep.mc_mean = ms.mean;
    rep.mc_stderr = ms.stderr_of_mean;
    rep.n_inputs = n_inputs;
    rep.seed = seed;
    rep.target = target;
    switch (target) {
        case NoiseTarget::OmegaParam:
            rep.reference_avg = avg_fidelity_omega(x);
            rep.exact_avg = avg_fidelity_omega_exact(theta, x);
            break;
        case NoiseTarget::ThetaParam:
            rep.reference_avg = avg_fidelity_theta(x4);
            rep.exact_avg = rep.reference_avg;
            break;
        case NoiseTarget::PhiParam:
            rep.reference_avg = avg_fidelity_phi(theta, x);
            rep.exact_avg = rep.reference_avg;
            break;
    }
    return rep;
}

// Two-qubit flavor: inputs drawn as theta ~ U[0, pi], c00/c11 on the circle.
inline InputAverageReport mc_input_average_twoqubit(double phi, const NoiseProcess& process,
                                                    double duration, std::int64_t n_inputs,
                                                    std::uint64_t seed) {
    if (n_inputs < 1) throw std::invalid_argument("mc_input_average: n_inputs must be >= 1");
    const double x = decay_function(process, duration);
    std::vector<double> vals(static_cast<std::size_t>(n_inputs));
    parallel_for_index(n_inputs, [&](std::int64_t idx) {
        RngStream stream(seed, static_cast<std::uint64_t>(idx));
        const double theta = M_PI * stream.uniform();
        const double phi1 = M_PI * stream.uniform();
        const TwoQubitInput in(std::cos(phi1 / 2.0), 0.0, 0.0, std::sin(phi1 / 2.0));
        vals[static_cast<std::size_t>(idx)] =
            fidelity_phi_twoqubit_from_overlap(theta, phi, in, x);
    });
    const MeanStderr ms = mean_stderr(vals);
    InputAverageReport rep;
    rep.mc_mean = ms.mean;
    rep.mc_stderr = ms.stderr_of_mean;
    rep.n_inputs = n_inputs;
    rep.seed = seed;
    rep.target = NoiseTarget::PhiParam;
    rep.reference_avg = avg_fidelity_phi_twoqubit(x);
    rep.exact_avg = input_average_phi_twoqubit(phi, x).from_overlap;
    return rep;
}

}  // namespace holq
