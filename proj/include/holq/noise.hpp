#pragma once

// Classical Gaussian noise processes acting on one drive parameter at a time.
//
// Ornstein-Uhlenbeck noise has the stationary covariance
//     C(t, s) = Gamma * gamma / 2 * exp(-gamma |t - s|),
// white noise the distributional limit Gamma * delta(t - s). Everything the
// fidelity formulas consume enters through the ordered double integral
//     Cbar(T) = int_0^T dt1 int_0^t1 dt2 C(t1, t2)
// and the decay function x(T) = exp(-Cbar(T)). For white noise the endpoint
// delta carries half mass, so Cbar = Gamma T / 2 and x = exp(-Gamma T / 2).

#include <cmath>
#include <stdexcept>
#include <vector>

#include "holq/numerics.hpp"
#include "holq/rng.hpp"

namespace holq {

enum class NoiseKind { OrnsteinUhlenbeck, White };

struct NoiseProcess {
    NoiseKind kind;
    double intensity;    // Gamma > 0
    double memory_rate;  // gamma > 0 (OU only); larger means shorter memory

    // intensity = 0 is admitted as the noise-free limit (decay value 1).
    static NoiseProcess ou(double intensity, double memory_rate) {
        if (!(intensity >= 0.0) || !std::isfinite(intensity))
            throw std::invalid_argument("NoiseProcess: intensity must be nonnegative");
        if (!(memory_rate > 0.0) || !std::isfinite(memory_rate))
            throw std::invalid_argument("NoiseProcess: memory rate must be positive");
        return {NoiseKind::OrnsteinUhlenbeck, intensity, memory_rate};
    }

    static NoiseProcess white(double intensity) {
        if (!(intensity >= 0.0) || !std::isfinite(intensity))
            throw std::invalid_argument("NoiseProcess: intensity must be nonnegative");
        return {NoiseKind::White, intensity, 0.0};
    }
};

enum class NoiseTarget { OmegaParam, ThetaParam, PhiParam };

struct NoiseSpec {
    NoiseTarget target;
    NoiseProcess process;
};

// Pointwise autocorrelation <delta(t) delta(s)>. Only defined for OU; the
// white-noise correlation is a delta distribution, use correlation_integral.
inline double correlation(const NoiseProcess& p, double t, double s) {
    if (t < 0.0 || s < 0.0) throw std::invalid_argument("correlation: negative time");
    if (p.kind == NoiseKind::White)
        throw std::domain_error("correlation: white noise has no pointwise correlation");
    return 0.5 * p.intensity * p.memory_rate * std::exp(-p.memory_rate * std::abs(t - s));
}

// Cbar(T): ordered double integral of the autocorrelation. expm1 keeps the
// small-gamma-T cancellation in e^{-z} + z - 1 at full precision.
inline double correlation_integral(const NoiseProcess& p, double duration) {
    if (duration < 0.0) throw std::invalid_argument("correlation_integral: negative duration");
    if (p.kind == NoiseKind::White) return 0.5 * p.intensity * duration;
    const double z = p.memory_rate * duration;
    return p.intensity * (std::expm1(-z) + z) / (2.0 * p.memory_rate);
}

// x(T) = exp(-Cbar(T)), in (0, 1], nonincreasing in T.
inline double decay_function(const NoiseProcess& p, double duration) {
    return std::exp(-correlation_integral(p, duration));
}

// One noise realization sampled on a uniform grid covering [0, T].
struct Trajectory {
    double dt = 0.0;
    std::vector<double> values;

    double integral() const {  // trapezoid
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < values.size(); ++i)
            acc += 0.5 * dt * (values[i] + values[i + 1]);
        return acc;
    }
};

// Exact OU discretization: stationary start delta_0 ~ N(0, Gamma gamma / 2),
//    delta_{n+1} = delta_n e^{-gamma dt} + sqrt(Gamma gamma/2 (1 - e^{-2 gamma dt})) xi_n.
// White noise has no pointwise samples; its integral statistics come from
// sample_integral.
inline Trajectory sample_path(const NoiseProcess& p, double duration, double dt,
                              RngStream& stream) {
    if (p.kind == NoiseKind::White)
        throw std::domain_error("sample_path: white noise has no pointwise samples");
    if (!(dt > 0.0) || dt > duration)
        throw std::invalid_argument("sample_path: need 0 < dt <= duration");
    const auto steps = static_cast<std::size_t>(std::llround(duration / dt));
    if (std::abs(static_cast<double>(steps) * dt - duration) > 1e-9 * std::max(1.0, duration))
        throw std::invalid_argument("sample_path: dt must divide the duration");
    const double var = 0.5 * p.intensity * p.memory_rate;
    const double decay = std::exp(-p.memory_rate * dt);
    const double step_sd = std::sqrt(var * (1.0 - decay * decay));
    Trajectory out;
    out.dt = dt;
    out.values.resize(steps + 1);
    out.values[0] = std::sqrt(var) * stream.normal();
    for (std::size_t n = 0; n < steps; ++n)
        out.values[n + 1] = out.values[n] * decay + step_sd * stream.normal();
    return out;
}

// Draws Delta(T) = int_0^T delta(s) ds directly. The integral of a zero-mean
// Gaussian process is Gaussian with variance equal to the full (unordered)
// double integral of C, which is 2 Cbar(T).
inline double sample_integral(const NoiseProcess& p, double duration, RngStream& stream) {
    if (duration < 0.0) throw std::invalid_argument("sample_integral: negative duration");
    if (duration == 0.0) return 0.0;
    return std::sqrt(2.0 * correlation_integral(p, duration)) * stream.normal();
}

struct FunctionalAverage {
    double analytic;        // exp(-m^2 Cbar)
    double empirical;       // ensemble mean of Re e^{i m Delta(T)}
    double empirical_imag;  // ensemble mean of Im e^{i m Delta(T)}; should vanish
    double stderr_of_mean;
};

// Empirical test of the Gaussian characteristic functional
//     M[e^{i m int_0^T delta}] = e^{-m^2 Cbar(T)}.
inline FunctionalAverage functional_average_oracle(const NoiseProcess& p, double duration,
                                                   double m, int n_samples = 100000,
                                                   std::uint64_t seed = 0x5eed) {
    if (n_samples < 2) throw std::invalid_argument("functional_average_oracle: need >= 2 samples");
    std::vector<double> re(static_cast<std::size_t>(n_samples));
    std::vector<double> im(static_cast<std::size_t>(n_samples));
    for (int i = 0; i < n_samples; ++i) {
        RngStream stream(seed, static_cast<std::uint64_t>(i));
        const double d = sample_integral(p, duration, stream);
        re[static_cast<std::size_t>(i)] = std::cos(m * d);
        im[static_cast<std::size_t>(i)] = std::sin(m * d);
    }
    const MeanStderr mre = mean_stderr(re);
    const double analytic = std::exp(-m * m * correlation_integral(p, duration));
    return {analytic, mre.mean, pairwise_sum(im) / n_samples, mre.stderr_of_mean};
}

}  // namespace holq
