#pragma once

// Drive parametrization for the resonantly driven Lambda system. The two
// lasers couple |0> and |1> to the shared excited level |e> with coefficients
// a = sin(theta/2) e^{i phi}, b = cos(theta/2) and a common envelope Omega(t).
// When the pulse area reaches pi the qubit subspace returns to itself and the
// net effect on it is the holonomic gate holonomic_gate(theta, phi).
//
// Basis ordering is fixed throughout: (|0>, |1>, |e>) for the single system
// and (|00>, |01>, |10>, |11>) for the two-qubit gate.

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "holq/linalg.hpp"

namespace holq {

inline void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + ": non-finite value");
}

enum class EnvelopeKind { Constant, SineSquared, Sampled };

// Nonnegative pulse envelope Omega(t) on [0, T]. Sampled envelopes are
// piecewise linear on a uniform grid; their area is the trapezoid integral.
class Envelope {
public:
    static Envelope constant(double duration, double scale = 1.0) {
        return Envelope(EnvelopeKind::Constant, duration, scale, {}, 0.0);
    }

    static Envelope sine_squared(double duration, double scale = 1.0) {
        return Envelope(EnvelopeKind::SineSquared, duration, scale, {}, 0.0);
    }

    static Envelope sampled(double duration, std::vector<double> values) {
        if (values.size() < 2)
            throw std::invalid_argument("Envelope: sampled envelope needs at least 2 values");
        for (double v : values) {
            require_finite(v, "Envelope sample");
            if (v < 0.0) throw std::invalid_argument("Envelope: negative sample");
        }
        const double dt = duration / static_cast<double>(values.size() - 1);
        return Envelope(EnvelopeKind::Sampled, duration, 1.0, std::move(values), dt);
    }

    EnvelopeKind kind() const { return kind_; }
    double duration() const { return duration_; }
    double scale() const { return scale_; }
    const std::vector<double>& samples() const { return samples_; }
    double sample_dt() const { return dt_; }

    double value(double t) const {
        check_time(t);
        switch (kind_) {
            case EnvelopeKind::Constant:
                return scale_;
            case EnvelopeKind::SineSquared: {
                const double s = std::sin(M_PI * t / duration_);
                return scale_ * s * s;
            }
            case EnvelopeKind::Sampled: {
                const auto n = samples_.size() - 1;
                double idx = t / dt_;
                auto k = static_cast<std::size_t>(idx);
                if (k >= n) return scale_ * samples_.back();
                const double u = idx - static_cast<double>(k);
                return scale_ * ((1.0 - u) * samples_[k] + u * samples_[k + 1]);
            }
        }
        return 0.0;
    }

    // Accumulated pulse area \int_0^t Omega(s) ds. Closed form for Constant
    // and SineSquared; the exact integral of the linear interpolant otherwise.
    double area(double t) const {
        check_time(t);
        switch (kind_) {
            case EnvelopeKind::Constant:
                return scale_ * t;
            case EnvelopeKind::SineSquared:
                return scale_ * (0.5 * t - duration_ / (4.0 * M_PI) *
                                               std::sin(2.0 * M_PI * t / duration_));
            case EnvelopeKind::Sampled: {
                const auto n = samples_.size() - 1;
                double idx = t / dt_;
                auto k = static_cast<std::size_t>(idx);
                if (k > n) k = n;
                double acc = 0.0;
                for (std::size_t j = 0; j < k && j < n; ++j)
                    acc += 0.5 * dt_ * (samples_[j] + samples_[j + 1]);
                if (k < n) {
                    const double u = idx - static_cast<double>(k);
                    const double vt = (1.0 - u) * samples_[k] + u * samples_[k + 1];
                    acc += 0.5 * (u * dt_) * (samples_[k] + vt);
                }
                return scale_ * acc;
            }
        }
        return 0.0;
    }

    double total_area() const { return area(duration_); }

    // Rescaled copy whose total area is exactly pi (the cyclic condition).
    Envelope normalized_to_pi() const {
        const double a = total_area();
        if (a <= 0.0) throw std::invalid_argument("Envelope: cannot normalize zero-area envelope");
        Envelope out = *this;
        out.scale_ = scale_ * (M_PI / a);
        return out;
    }

private:
    Envelope(EnvelopeKind kind, double duration, double scale, std::vector<double> samples,
             double dt)
        : kind_(kind), duration_(duration), scale_(scale), samples_(std::move(samples)), dt_(dt) {
        require_finite(duration_, "Envelope duration");
        require_finite(scale_, "Envelope scale");
        if (duration_ <= 0.0) throw std::invalid_argument("Envelope: duration must be positive");
        if (scale_ < 0.0) throw std::invalid_argument("Envelope: scale must be nonnegative");
    }

    void check_time(double t) const {
        if (!(t >= 0.0 && t <= duration_ * (1.0 + 1e-12)))
            throw std::invalid_argument("Envelope: time outside [0, T]");
    }

    EnvelopeKind kind_;
    double duration_;
    double scale_;
    std::vector<double> samples_;
    double dt_;
};

inline double pulse_area(const Envelope& env, double t) { return env.area(t); }

struct DriveConfig {
    double theta = 0.0;
    double phi = 0.0;
    Envelope envelope = Envelope::constant(1.0).normalized_to_pi();

    DriveConfig(double theta_, double phi_, Envelope env) : theta(theta_), phi(phi_), envelope(std::move(env)) {
        require_finite(theta, "theta");
        require_finite(phi, "phi");
    }
};

// Gate catalog. Each entry fixes (theta, phi) in the holonomic gate; the
// phase-shift entry keeps phi as its free parameter. The Hadamard entry
// equals the textbook Hadamard up to a global phase of -1.
enum class GateKind { Hadamard, PauliX, PauliZ, PhaseShift, Custom };

struct GateAngles {
    double theta;
    double phi;
};

inline GateAngles gate_angles(GateKind kind, double custom_theta = 0.0, double custom_phi = 0.0) {
    switch (kind) {
        case GateKind::Hadamard:
            return {3.0 * M_PI / 4.0, 0.0};
        case GateKind::PauliX:
            return {M_PI / 2.0, M_PI};
        case GateKind::PauliZ:
            return {0.0, 0.0};
        case GateKind::PhaseShift:
            return {3.0 * M_PI / 2.0, custom_phi};
        case GateKind::Custom:
            return {custom_theta, custom_phi};
    }
    throw std::logic_error("gate_angles: unknown kind");
}

// Best-effort catalog name for a (theta, phi) pair, for reporting only.
inline std::string catalog_name(double theta, double phi, double tol = 1e-9) {
    auto wrap = [](double a) {
        a = std::fmod(a, 2.0 * M_PI);
        if (a < 0.0) a += 2.0 * M_PI;
        return a;
    };
    const double th = wrap(theta);
    const double ph = wrap(phi);
    auto near = [tol](double a, double b) { return std::abs(a - b) < tol; };
    if (near(th, 3.0 * M_PI / 4.0) && near(ph, 0.0)) return "hadamard";
    if (near(th, M_PI / 2.0) && near(ph, M_PI)) return "pauli_x";
    if (near(th, 0.0) || near(th, 2.0 * M_PI)) return "pauli_z";
    if (near(th, 3.0 * M_PI / 2.0)) return "phase_shift";
    return "custom";
}

// Rotating-frame drive Hamiltonian at time t: Omega(t) couples the qubit
// levels to |e> only; the 0-1 block vanishes identically.
inline Matrix<3> coupling_hamiltonian(const DriveConfig& cfg, double t) {
    const double om = cfg.envelope.value(t);
    const Cx a = std::polar(std::sin(cfg.theta / 2.0), cfg.phi);
    const Cx b = std::cos(cfg.theta / 2.0);
    Matrix<3> h;
    h(0, 2) = om * std::conj(a);
    h(1, 2) = om * std::conj(b);
    h(2, 0) = om * a;
    h(2, 1) = om * b;
    return h;
}

// Closed-form propagator of the driven Lambda system at accumulated pulse
// area `obar`. At obar = pi the qubit block decouples from |e> and equals
// holonomic_gate(theta, phi).
inline Matrix<3> propagator_at_area(double theta, double phi, double obar) {
    require_finite(obar, "pulse area");
    const double s2 = std::sin(theta / 2.0);
    const double c2 = std::cos(theta / 2.0);
    const double st = std::sin(theta);
    const double co = std::cos(obar);
    const double si = std::sin(obar);
    const Cx eim = std::polar(1.0, -phi);
    const Cx eip = std::polar(1.0, phi);
    const Cx i(0.0, 1.0);
    Matrix<3> u;
    u(0, 0) = s2 * s2 * co + c2 * c2;
    u(0, 1) = 0.5 * st * eim * (co - 1.0);
    u(0, 2) = i * s2 * eim * si;
    u(1, 0) = 0.5 * st * eip * (co - 1.0);
    u(1, 1) = c2 * c2 * co + s2 * s2;
    u(1, 2) = i * c2 * si;
    u(2, 0) = i * s2 * eip * si;
    u(2, 1) = i * c2 * si;
    u(2, 2) = co;
    return u;
}

inline Matrix<3> propagator(const DriveConfig& cfg, double t) {
    return propagator_at_area(cfg.theta, cfg.phi, pulse_area(cfg.envelope, t));
}

// The cyclic-evolution gate on the qubit subspace: Hermitian, unitary,
// determinant -1, squares to the identity.
inline Matrix<2> holonomic_gate(double theta, double phi) {
    require_finite(theta, "theta");
    require_finite(phi, "phi");
    Matrix<2> g;
    g(0, 0) = std::cos(theta);
    g(0, 1) = -std::sin(theta) * std::polar(1.0, -phi);
    g(1, 0) = -std::sin(theta) * std::polar(1.0, phi);
    g(1, 1) = -std::cos(theta);
    return g;
}

// Two-qubit holonomic gate: phases the |00>/|11> block like the single-qubit
// gate and swaps |01> <-> |10|. Hermitian unitary, squares to the identity.
inline Matrix<4> two_qubit_gate(double theta, double phi) {
    require_finite(theta, "theta");
    require_finite(phi, "phi");
    Matrix<4> g;
    g(0, 0) = std::cos(theta);
    g(0, 3) = std::sin(theta) * std::polar(1.0, -phi);
    g(3, 0) = std::sin(theta) * std::polar(1.0, phi);
    g(3, 3) = -std::cos(theta);
    g(1, 2) = 1.0;
    g(2, 1) = 1.0;
    return g;
}

// Input qubit state alpha e^{i eta} |0> + beta |1> with real alpha, beta.
struct InputState {
    double alpha;
    double beta;
    double eta;

    InputState(double alpha_, double beta_, double eta_) : alpha(alpha_), beta(beta_), eta(eta_) {
        require_finite(alpha, "alpha");
        require_finite(beta, "beta");
        require_finite(eta, "eta");
        if (std::abs(alpha * alpha + beta * beta - 1.0) > kNormTol)
            throw std::invalid_argument("InputState: alpha^2 + beta^2 must equal 1");
    }

    static InputState from_angle(double phi1, double eta) {
        return InputState(std::cos(phi1 / 2.0), std::sin(phi1 / 2.0), eta);
    }

    PureState<2> state() const {
        return PureState<2>({std::polar(alpha, eta), Cx(beta)});
    }
};

// Output of the ideal (noise-free) gate on an input state; identical to
// apply(holonomic_gate(theta, phi), input.state()).
inline PureState<2> ideal_output(double theta, double phi, const InputState& in) {
    const Cx a0 = in.alpha * std::cos(theta) * std::polar(1.0, in.eta) -
                  in.beta * std::sin(theta) * std::polar(1.0, -phi);
    const Cx a1 = -(in.alpha * std::sin(theta) * std::polar(1.0, in.eta + phi) +
                    in.beta * std::cos(theta));
    return PureState<2>({a0, a1});
}

// max over grid times and k,l in {0,1} of |<k| U†(s) H(s) U(s) |l>|.
// Vanishing identically is what makes the cyclic evolution purely geometric.
inline double geometric_defect(const DriveConfig& cfg, std::span<const double> grid) {
    if (grid.empty()) throw std::invalid_argument("geometric_defect: empty time grid");
    double worst = 0.0;
    for (double t : grid) {
        const Matrix<3> u = propagator(cfg, t);
        const Matrix<3> h = coupling_hamiltonian(cfg, t);
        const Matrix<3> m = matmul(adjoint(u), matmul(h, u));
        for (int k = 0; k < 2; ++k)
            for (int l = 0; l < 2; ++l) worst = std::max(worst, std::abs(m(k, l)));
    }
    return worst;
}

inline std::vector<double> uniform_time_grid(double duration, int points) {
    if (points < 1) throw std::invalid_argument("time grid needs at least one point");
    std::vector<double> g(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i)
        g[static_cast<std::size_t>(i)] =
            points == 1 ? 0.0 : duration * static_cast<double>(i) / (points - 1);
    return g;
}

}  // namespace holq
