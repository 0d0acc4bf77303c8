#pragma once

// Closed-form transformation fidelities for noise on one drive parameter,
// their input-state averages, minima and sweet spots.
//
// All formulas consume the decay value x = exp(-Cbar(T)) (or x4 = x^4), never
// the noise process itself, so any Gaussian process with the same Cbar gives
// the same fidelity. Compose with noise::decay_function to go from (process,
// T) to x.
//
// Two of the reference closed forms are kept side by side with variants
// derived directly from the perturbed-gate overlap, because they do not
// agree for generic inputs:
//   * fidelity_theta weighs the cross term with cos^2(phi + eta), while the
//     overlap expansion gives sin^2(phi + eta). The cos^2 form corresponds to
//     a per-realization overlap cos(D) + 2 alpha beta cos(phi+eta) sin(D)
//     whose modulus can exceed 1, so it cannot arise from normalized states;
//     the Monte Carlo engine reproduces the sin^2 form.
//   * fidelity_phi_twoqubit omits the cross term between the phased
//     |00>/|11> block and the swap block, which contributes whenever
//     c00*c11*sin(theta)*cos(theta) != 0 (and brings in the gate phi).
// Validation compares both members of each pair against the trajectory
// ensemble; disagreements of the first member are reported as flags.

#include <array>
#include <cmath>
#include <stdexcept>

#include "holq/drive.hpp"
#include "holq/numerics.hpp"

namespace holq {

inline void require_decay_value(double x, const char* what) {
    if (!(x > 0.0) || x > 1.0)
        throw std::invalid_argument(std::string(what) + ": decay value must be in (0, 1]");
}

// Real four-amplitude two-qubit input c00|00> + c01|01> + c10|10> + c11|11>.
struct TwoQubitInput {
    double c00, c01, c10, c11;

    TwoQubitInput(double a, double b, double c, double d) : c00(a), c01(b), c10(c), c11(d) {
        for (double v : {a, b, c, d}) require_finite(v, "TwoQubitInput coefficient");
        if (std::abs(a * a + b * b + c * c + d * d - 1.0) > kNormTol)
            throw std::invalid_argument("TwoQubitInput: coefficients must be normalized");
    }

    PureState<4> state() const { return PureState<4>({Cx(c00), Cx(c01), Cx(c10), Cx(c11)}); }
};

// Weight of the input state on the dark state of the drive,
//   f = alpha^2 cos^2(theta/2) + beta^2 sin^2(theta/2)
//       - alpha beta sin(theta) cos(phi + eta),   0 <= f <= 1.
// The dark state does not evolve at all, so f = 1 inputs are immune to
// envelope noise trajectory by trajectory.
inline double dark_state_weight(double theta, double phi, const InputState& in) {
    const double c2 = std::cos(theta / 2.0);
    const double s2 = std::sin(theta / 2.0);
    const double f = in.alpha * in.alpha * c2 * c2 + in.beta * in.beta * s2 * s2 -
                     in.alpha * in.beta * std::sin(theta) * std::cos(phi + in.eta);
    return std::min(1.0, std::max(0.0, f));
}

// Envelope-noise fidelity as a function of the dark-state weight f:
//   F = (1 + x^4)/2 + (2x - x^4 - 1) f + (3 - 4x + x^4)/2 f^2
//     = f^2 + 2 f (1 - f) x + (1 - f)^2 (1 + x^4)/2.
// Convex in f; F = 1 identically at f = 1 or x = 1.
inline double fidelity_omega_from_weight(double f, double x) {
    require_decay_value(x, "fidelity_omega");
    if (f < -1e-12 || f > 1.0 + 1e-12)
        throw std::invalid_argument("fidelity_omega: weight must be in [0, 1]");
    if (x == 1.0) return 1.0;  // noise-free column is identically 1
    const double g = 1.0 - f;
    const double x4 = x * x * x * x;
    return f * f + 2.0 * f * g * x + g * g * 0.5 * (1.0 + x4);
}

inline double fidelity_omega(double theta, double phi, const InputState& in, double x) {
    return fidelity_omega_from_weight(dark_state_weight(theta, phi, in), x);
}

// Input-averaged envelope-noise fidelity, (3 + 4x + x^4)/8. This substitutes
// the mean weight E[f] = 1/2 for both f and f^2; see
// avg_fidelity_omega_exact for the average that carries E[f^2] exactly.
inline double avg_fidelity_omega(double x) {
    require_decay_value(x, "avg_fidelity_omega");
    const double x4 = x * x * x * x;
    return (3.0 + 4.0 * x + x4) / 8.0;
}

// Exact mean of fidelity_omega over the uniform input measure
// alpha = cos(phi1/2), phi1 ~ U[0, pi], eta ~ U[0, 2pi]:
// E[f] = 1/2, E[f^2] = 3/8 - sin^2(theta)/16, hence
//   E[F] = x + (3 - 4x + x^4) (3/16 - sin^2(theta)/32).
// Unlike avg_fidelity_omega this depends on the gate angle theta.
inline double avg_fidelity_omega_exact(double theta, double x) {
    require_decay_value(x, "avg_fidelity_omega_exact");
    const double x4 = x * x * x * x;
    const double st = std::sin(theta);
    return x + (3.0 - 4.0 * x + x4) * (3.0 / 16.0 - st * st / 32.0);
}

// Only root of x^4 - 2x + 1 in [0, 1); found by bisection, not hard-coded.
inline double critical_decay() {
    static const double xc = bisect([](double x) { return x * x * x * x - 2.0 * x + 1.0; },
                                    0.1, 0.9, 1e-13);
    return xc;
}

struct OmegaMinimum {
    double f_star;  // minimizing dark-state weight
    double value;   // minimum fidelity
};

// Minimum of fidelity_omega over f in [0, 1]. The quadratic's stationary
// point lies inside the interval only for x <= critical_decay(); beyond it
// the minimum sits at f = 0 with value (1 + x^4)/2.
inline OmegaMinimum min_fidelity_omega(double x) {
    require_decay_value(x, "min_fidelity_omega");
    const double x4 = x * x * x * x;
    if (x <= critical_decay()) {
        const double f_star = (x4 - 2.0 * x + 1.0) / (3.0 - 4.0 * x + x4);
        return {f_star, fidelity_omega_from_weight(f_star, x)};
    }
    return {0.0, 0.5 * (1.0 + x4)};
}

// Theta-noise fidelity, reference closed form (cos^2 weighting):
//   F = (1 + x4)/2 + 4 alpha^2 beta^2 cos^2(phi + eta) (1 - x4)/2,
// with x4 = exp(-4 Cbar).
inline double fidelity_theta(double phi_plus_eta, double alpha, double beta, double x4) {
    require_decay_value(x4, "fidelity_theta");
    if (std::abs(alpha * alpha + beta * beta - 1.0) > kNormTol)
        throw std::invalid_argument("fidelity_theta: alpha^2 + beta^2 must equal 1");
    const double c = std::cos(phi_plus_eta);
    return 0.5 * (1.0 + x4) + 2.0 * alpha * alpha * beta * beta * c * c * (1.0 - x4);
}

// Theta-noise fidelity derived from the perturbed-gate overlap
//   <ideal|noisy> = cos(D) + 2 i alpha beta sin(phi + eta) sin(D),
// whose ensemble average of the squared modulus is
//   F = (1 + x4)/2 + 4 alpha^2 beta^2 sin^2(phi + eta) (1 - x4)/2.
// This is the value the trajectory ensemble converges to.
inline double fidelity_theta_from_overlap(double phi_plus_eta, double alpha, double beta,
                                          double x4) {
    require_decay_value(x4, "fidelity_theta_from_overlap");
    if (std::abs(alpha * alpha + beta * beta - 1.0) > kNormTol)
        throw std::invalid_argument("fidelity_theta_from_overlap: alpha^2 + beta^2 must equal 1");
    const double s = std::sin(phi_plus_eta);
    return 0.5 * (1.0 + x4) + 2.0 * alpha * alpha * beta * beta * s * s * (1.0 - x4);
}

// Input-averaged theta-noise fidelity, (5 + 3 x4)/8. Exact for both per-input
// forms above (the cross term averages to 1/4 either way).
inline double avg_fidelity_theta(double x4) {
    require_decay_value(x4, "avg_fidelity_theta");
    return (5.0 + 3.0 * x4) / 8.0;
}

// Phi-noise fidelity for a single qubit (x = exp(-Cbar), x^4 = exp(-4 Cbar)):
// five-term closed form in theta, phi + eta, alpha, beta.
inline double fidelity_phi(double theta, double phi, const InputState& in, double x) {
    require_decay_value(x, "fidelity_phi");
    const double x4 = x * x * x * x;
    const double pt = phi + in.eta;
    const double a = in.alpha;
    const double b = in.beta;
    const double st = std::sin(theta);
    const double ct = std::cos(theta);
    const double s2t = std::sin(2.0 * theta);
    const double spt = std::sin(pt);
    return ct * ct * ct * ct +
           st * st * st * st * (1.0 - 2.0 * a * a * b * b * (1.0 - x4)) +
           0.5 * s2t * s2t * x +
           a * a * b * b * s2t * s2t *
               (spt * spt * (1.0 - 2.0 * x) + 0.5 * (1.0 - std::cos(2.0 * pt) * x4)) +
           a * b * (a * a - b * b) * st * st * s2t * std::cos(pt) * (1.0 - x4);
}

// Input-averaged phi-noise fidelity,
//   F = 1 - 3 sin^2(2 theta)/8 (1 - x) - sin^4(theta)/4 (1 - x^4).
// Exact average of fidelity_phi over the uniform input measure; minimum
// 11/20 at sin^2(theta) = 3/5 as x -> 0.
inline double avg_fidelity_phi(double theta, double x) {
    require_decay_value(x, "avg_fidelity_phi");
    const double x4 = x * x * x * x;
    const double s2t = std::sin(2.0 * theta);
    const double st = std::sin(theta);
    return 1.0 - 3.0 * s2t * s2t / 8.0 * (1.0 - x) - st * st * st * st / 4.0 * (1.0 - x4);
}

// Two-qubit phi-noise fidelity, reference closed form (phi-independent):
//   F = 1 - 2 sin^2(theta) (c00^2 + c11^2)(1 - x)
//       + 2 sin^4(theta) [(c00^4 + c11^4)(1 - x) + c00^2 c11^2 (1 + x^4 - 2x)].
inline double fidelity_phi_twoqubit(double theta, const TwoQubitInput& in, double x) {
    require_decay_value(x, "fidelity_phi_twoqubit");
    const double x4 = x * x * x * x;
    const double s = std::sin(theta);
    const double S = s * s;
    const double a2 = in.c00 * in.c00;
    const double b2 = in.c11 * in.c11;
    return 1.0 - 2.0 * S * (a2 + b2) * (1.0 - x) +
           2.0 * S * S * ((a2 * a2 + b2 * b2) * (1.0 - x) + a2 * b2 * (1.0 + x4 - 2.0 * x));
}

// Two-qubit phi-noise fidelity from the full gate overlap. Adds the cross
// term between the |00>/|11> block and the swap block, which is active for
// c00 c11 sin(theta) cos(theta) != 0 and depends on the gate phase phi:
//   F = fidelity_phi_twoqubit
//       + 2 cos^2 sin^2 c00^2 c11^2 [sin^2(phi)(3 - 4x + x^4) + cos^2(phi)(1 - x^4)]
//       - 2 cos sin sin^2 c00 c11 (c00^2 - c11^2) cos(phi) (1 - x^4).
// This is the value the trajectory ensemble converges to.
inline double fidelity_phi_twoqubit_from_overlap(double theta, double phi,
                                                 const TwoQubitInput& in, double x) {
    const double base = fidelity_phi_twoqubit(theta, in, x);
    const double x4 = x * x * x * x;
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double sp = std::sin(phi);
    const double cp = std::cos(phi);
    const double extra =
        2.0 * c * c * s * s * in.c00 * in.c00 * in.c11 * in.c11 *
            (sp * sp * (3.0 - 4.0 * x + x4) + cp * cp * (1.0 - x4)) -
        2.0 * c * s * s * s * in.c00 * in.c11 * (in.c00 * in.c00 - in.c11 * in.c11) * cp *
            (1.0 - x4);
    return base + extra;
}

// Input-and-gate-averaged two-qubit phi-noise fidelity,
//   F = 1 - 93/256 (1 - x) + 3/64 (1 + x^4 - 2x),
// monotone increasing in x with infimum 175/256 as x -> 0.
inline double avg_fidelity_phi_twoqubit(double x) {
    require_decay_value(x, "avg_fidelity_phi_twoqubit");
    const double x4 = x * x * x * x;
    return 1.0 - 93.0 / 256.0 * (1.0 - x) + 3.0 / 64.0 * (1.0 + x4 - 2.0 * x);
}

// True iff the input is dark-state aligned (f = 1 within 1e-9), i.e. the
// envelope-noise fidelity equals 1 for every noise strength.
inline bool sweet_spot_omega(double theta, double phi, const InputState& in) {
    return std::abs(dark_state_weight(theta, phi, in) - 1.0) < 1e-9;
}

// The dark-state-aligned input for gate (theta, phi):
// (alpha, beta, eta) = (cos(theta/2), sin(theta/2), pi - phi).
inline InputState dark_state_input(double theta, double phi) {
    return InputState(std::cos(theta / 2.0), std::sin(theta / 2.0), M_PI - phi);
}

// x -> 0 limits of the three averaged fidelities: (3/8, 11/20, 5/8),
// strictly increasing (envelope noise hurts most, theta noise least).
inline std::array<double, 3> min_ordering_check() {
    const double tiny = 1e-16;
    const double omega_min = avg_fidelity_omega(tiny);
    const double theta_at_min = std::asin(std::sqrt(3.0 / 5.0));
    const double phi_min = avg_fidelity_phi(theta_at_min, tiny);
    const double theta_min = avg_fidelity_theta(tiny);
    if (!(omega_min < phi_min && phi_min < theta_min))
        throw std::logic_error("min_ordering_check: ordering violated");
    return {omega_min, phi_min, theta_min};
}

// ---- numeric input-state averages (quadrature oracles) --------------------
// Uniform measure: alpha = cos(phi1/2), beta = sin(phi1/2), phi1 ~ U[0, pi],
// eta ~ U[0, 2 pi]. Tensor Gauss-Legendre; integrands are trigonometric
// polynomials, so 64 nodes per axis reach machine accuracy.

template <class PerInput>
double input_average_single_qubit(PerInput&& per_input, int nodes = 64) {
    const QuadRule rule = gauss_legendre(nodes);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double phi1 = 0.5 * M_PI * (rule.nodes[i] + 1.0);
        double inner = 0.0;
        for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
            const double eta = M_PI * (rule.nodes[j] + 1.0);
            inner += rule.weights[j] * per_input(phi1, eta);
        }
        acc += rule.weights[i] * inner;
    }
    return acc / 4.0;  // both weight sets sum to 2
}

inline double input_average_omega(double theta, double phi_gate, double x, int nodes = 64) {
    return input_average_single_qubit(
        [&](double phi1, double eta) {
            return fidelity_omega(theta, phi_gate, InputState::from_angle(phi1, eta), x);
        },
        nodes);
}

inline double input_average_theta(double phi_gate, double x4, int nodes = 64) {
    return input_average_single_qubit(
        [&](double phi1, double eta) {
            return fidelity_theta(phi_gate + eta, std::cos(phi1 / 2.0), std::sin(phi1 / 2.0), x4);
        },
        nodes);
}

inline double input_average_phi(double theta, double phi_gate, double x, int nodes = 64) {
    return input_average_single_qubit(
        [&](double phi1, double eta) {
            return fidelity_phi(theta, phi_gate, InputState::from_angle(phi1, eta), x);
        },
        nodes);
}

struct TwoQubitAverage {
    double from_overlap;  // average of the overlap-derived per-input form
    double reference;     // average of fidelity_phi_twoqubit
};

// Assumed measure for the two-qubit average (the gate-and-input average has
// no canonical choice here): theta ~ U[0, pi] and c00 = cos(phi1/2),
// c11 = sin(phi1/2) with phi1 ~ U[0, pi], c01 = c10 = 0.
inline TwoQubitAverage input_average_phi_twoqubit(double phi_gate, double x, int nodes = 64) {
    const QuadRule rule = gauss_legendre(nodes);
    double acc_overlap = 0.0;
    double acc_ref = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double theta = 0.5 * M_PI * (rule.nodes[i] + 1.0);
        for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
            const double phi1 = 0.5 * M_PI * (rule.nodes[j] + 1.0);
            const TwoQubitInput in(std::cos(phi1 / 2.0), 0.0, 0.0, std::sin(phi1 / 2.0));
            const double w = rule.weights[i] * rule.weights[j];
            acc_overlap += w * fidelity_phi_twoqubit_from_overlap(theta, phi_gate, in, x);
            acc_ref += w * fidelity_phi_twoqubit(theta, in, x);
        }
    }
    return {acc_overlap / 4.0, acc_ref / 4.0};
}

}  // namespace holq
