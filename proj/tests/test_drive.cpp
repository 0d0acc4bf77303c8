#include "holq/drive.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "holq/rng.hpp"

using namespace holq;

TEST(Envelope, PulseAreaClosedForms) {
    const double T = 2.0;
    const Envelope c = Envelope::constant(T, M_PI / T);
    EXPECT_NEAR(pulse_area(c, 0.0), 0.0, 0.0);
    EXPECT_NEAR(pulse_area(c, T / 2.0), M_PI / 2.0, 1e-15);
    EXPECT_NEAR(pulse_area(c, T), M_PI, 1e-15);

    const Envelope s = Envelope::sine_squared(T).normalized_to_pi();
    EXPECT_NEAR(pulse_area(s, 0.0), 0.0, 0.0);
    EXPECT_NEAR(pulse_area(s, T), M_PI, 1e-10);
    // sin^2 envelope lags a constant one in the first half-cycle
    EXPECT_LT(pulse_area(s, T / 4.0), M_PI / 4.0);

    EXPECT_THROW(pulse_area(c, -0.1), std::invalid_argument);
    EXPECT_THROW(pulse_area(c, T + 0.1), std::invalid_argument);
}

TEST(Envelope, SampledNormalizationIsExactForTrapezoid) {
    std::vector<double> vals{0.0, 1.0, 3.0, 2.0, 0.5};
    const Envelope e = Envelope::sampled(1.0, vals).normalized_to_pi();
    EXPECT_NEAR(e.total_area(), M_PI, 1e-10);
    // midpoints interpolate linearly
    EXPECT_NEAR(e.value(0.125), 0.5 * (e.value(0.0) + e.value(0.25)), 1e-12);
}

TEST(Envelope, RejectsBadInputs) {
    EXPECT_THROW(Envelope::constant(-1.0), std::invalid_argument);
    EXPECT_THROW(Envelope::constant(1.0, -0.5), std::invalid_argument);
    EXPECT_THROW(Envelope::sampled(1.0, {1.0}), std::invalid_argument);
    EXPECT_THROW(Envelope::sampled(1.0, {1.0, -0.2, 1.0}), std::invalid_argument);
}

TEST(CouplingHamiltonian, StructureAndExamples) {
    // theta = pi: a = 1, b = 0; unit envelope puts 1 on the (e,0) coupling
    const DriveConfig cfg(M_PI, 0.0, Envelope::constant(1.0, 1.0));
    const Matrix<3> h = coupling_hamiltonian(cfg, 0.5);
    EXPECT_NEAR(std::abs(h(2, 0) - Cx(1.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(h(0, 2) - Cx(1.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(h(2, 1)), 0.0, 1e-15);

    RngStream s(11, 0);
    for (int trial = 0; trial < 20; ++trial) {
        const DriveConfig c(2.0 * M_PI * s.uniform(), 2.0 * M_PI * s.uniform(),
                            Envelope::sine_squared(1.0).normalized_to_pi());
        const Matrix<3> m = coupling_hamiltonian(c, s.uniform());
        // Hermitian, zero diagonal, zero 0-1 coupling
        EXPECT_LT(max_abs_diff(m, adjoint(m)), 1e-15);
        for (int k = 0; k < 3; ++k) EXPECT_EQ(std::abs(m(k, k)), 0.0);
        EXPECT_EQ(std::abs(m(0, 1)), 0.0);
        EXPECT_EQ(std::abs(m(1, 0)), 0.0);
    }
}

TEST(Propagator, ZeroAreaGivesIdentity) {
    const DriveConfig cfg(1.3, 0.7, Envelope::constant(1.0).normalized_to_pi());
    EXPECT_LT(max_abs_diff(propagator(cfg, 0.0), Matrix<3>::identity()), 1e-15);
}

TEST(Propagator, FullCycleDecouplesQubitBlock) {
    RngStream s(12, 0);
    for (int trial = 0; trial < 20; ++trial) {
        const double theta = 2.0 * M_PI * s.uniform();
        const double phi = 2.0 * M_PI * s.uniform();
        const DriveConfig cfg(theta, phi, Envelope::constant(1.0).normalized_to_pi());
        const Matrix<3> u = propagator(cfg, 1.0);
        const Matrix<2> g = holonomic_gate(theta, phi);
        for (int k = 0; k < 2; ++k) {
            EXPECT_LT(std::abs(u(k, 2)), 1e-12);
            EXPECT_LT(std::abs(u(2, k)), 1e-12);
            for (int l = 0; l < 2; ++l) EXPECT_LT(std::abs(u(k, l) - g(k, l)), 1e-12);
        }
        EXPECT_NEAR(std::abs(u(2, 2) - Cx(-1.0)), 0.0, 1e-12);
    }
}

TEST(Propagator, HalfPiAreaAtThetaPi) {
    // area pi/2, theta = pi, phi = 0: (0,0) entry vanishes, (e,0) entry is +i
    const Matrix<3> u = propagator_at_area(M_PI, 0.0, M_PI / 2.0);
    EXPECT_NEAR(std::abs(u(0, 0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(u(2, 0) - Cx(0.0, 1.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(u(0, 2) - Cx(0.0, 1.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(u(1, 1) - Cx(1.0)), 0.0, 1e-15);
    EXPECT_LT(unitarity_defect(u), 1e-14);
}

TEST(Propagator, UnitaryForRandomParameters) {
    RngStream s(13, 0);
    for (int trial = 0; trial < 100; ++trial) {
        const Matrix<3> u = propagator_at_area(2.0 * M_PI * s.uniform(),
                                               2.0 * M_PI * s.uniform(), 4.0 * s.uniform());
        EXPECT_LT(unitarity_defect(u), 1e-10);
    }
}

TEST(Propagator, CompositionInPulseArea) {
    RngStream s(14, 0);
    for (int trial = 0; trial < 20; ++trial) {
        const double theta = 2.0 * M_PI * s.uniform();
        const double phi = 2.0 * M_PI * s.uniform();
        const double x1 = 2.0 * s.uniform();
        const double x2 = 2.0 * s.uniform();
        const Matrix<3> lhs = propagator_at_area(theta, phi, x1 + x2);
        const Matrix<3> rhs =
            matmul(propagator_at_area(theta, phi, x2), propagator_at_area(theta, phi, x1));
        EXPECT_LT(max_abs_diff(lhs, rhs), 1e-10);
    }
}

TEST(HolonomicGate, CatalogEntries) {
    // Pauli-X at (pi/2, pi), exact
    const Matrix<2> x = holonomic_gate(M_PI / 2.0, M_PI);
    EXPECT_NEAR(std::abs(x(0, 1) - Cx(1.0)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(x(1, 0) - Cx(1.0)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(x(0, 0)), 0.0, 1e-12);
    // Pauli-Z at theta = 0, exact
    const Matrix<2> z = holonomic_gate(0.0, 0.0);
    EXPECT_NEAR(std::abs(z(0, 0) - Cx(1.0)), 0.0, 0.0);
    EXPECT_NEAR(std::abs(z(1, 1) + Cx(1.0)), 0.0, 0.0);
    // Hadamard at (3pi/4, 0) equals the textbook gate times -1
    const Matrix<2> h = holonomic_gate(3.0 * M_PI / 4.0, 0.0);
    const double inv = 1.0 / std::sqrt(2.0);
    EXPECT_NEAR(std::abs(h(0, 0) + Cx(inv)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(h(0, 1) + Cx(inv)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(h(1, 0) + Cx(inv)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(h(1, 1) - Cx(inv)), 0.0, 1e-12);
    // phase-shift entry keeps phi free
    const GateAngles ps = gate_angles(GateKind::PhaseShift, 0.0, 1.2);
    EXPECT_DOUBLE_EQ(ps.theta, 3.0 * M_PI / 2.0);
    EXPECT_DOUBLE_EQ(ps.phi, 1.2);
}

TEST(HolonomicGate, HermitianUnitarySquaringToIdentity) {
    RngStream s(15, 0);
    for (int trial = 0; trial < 50; ++trial) {
        const Matrix<2> g = holonomic_gate(2.0 * M_PI * s.uniform(), 2.0 * M_PI * s.uniform());
        EXPECT_LT(max_abs_diff(g, adjoint(g)), 1e-15);
        EXPECT_LT(max_abs_diff(matmul(g, g), Matrix<2>::identity()), 1e-15);
        const Cx det = g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0);
        EXPECT_NEAR(std::abs(det - Cx(-1.0)), 0.0, 1e-14);
    }
}

TEST(IdealOutput, MatchesGateApplication) {
    RngStream s(16, 0);
    for (int trial = 0; trial < 50; ++trial) {
        const double theta = 2.0 * M_PI * s.uniform();
        const double phi = 2.0 * M_PI * s.uniform();
        const InputState in = InputState::from_angle(M_PI * s.uniform(), 2.0 * M_PI * s.uniform());
        const PureState<2> direct = ideal_output(theta, phi, in);
        const PureState<2> via_gate = apply(holonomic_gate(theta, phi), in.state());
        for (int i = 0; i < 2; ++i)
            EXPECT_NEAR(std::abs(direct[i] - via_gate[i]), 0.0, 1e-12);
    }
}

TEST(IdealOutput, PauliZAction) {
    const InputState in(0.6, 0.8, 0.3);
    const PureState<2> out = ideal_output(0.0, 0.0, in);
    EXPECT_NEAR(std::abs(out[0] - std::polar(0.6, 0.3)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(out[1] - Cx(-0.8)), 0.0, 1e-15);
}

TEST(IdealOutput, PauliXSendsZeroToOne) {
    const PureState<2> out = ideal_output(M_PI / 2.0, M_PI, InputState(1.0, 0.0, 0.0));
    EXPECT_NEAR(overlap_probability(out, PureState<2>::basis(1)), 1.0, 1e-14);
}

TEST(IdealOutput, DarkStateInputIsFixedByHadamard) {
    // (cos 3pi/8, sin 3pi/8, eta = pi) is the +1 eigenstate of the gate; the
    // eta = 0 companion is not (it maps to an orthogonal-ish state).
    const double theta = 3.0 * M_PI / 4.0;
    const InputState sweet(std::cos(3.0 * M_PI / 8.0), std::sin(3.0 * M_PI / 8.0), M_PI);
    const PureState<2> out = ideal_output(theta, 0.0, sweet);
    EXPECT_NEAR(overlap_probability(out, sweet.state()), 1.0, 1e-14);

    const InputState plus(std::cos(3.0 * M_PI / 8.0), std::sin(3.0 * M_PI / 8.0), 0.0);
    const PureState<2> out_plus = ideal_output(theta, 0.0, plus);
    EXPECT_LT(overlap_probability(out_plus, plus.state()), 0.01);
}

TEST(TwoQubitGate, ThetaZeroIsSwapWithSignedCorners) {
    const Matrix<4> g = two_qubit_gate(0.0, 0.0);
    EXPECT_NEAR(std::abs(g(0, 0) - Cx(1.0)), 0.0, 0.0);
    EXPECT_NEAR(std::abs(g(3, 3) + Cx(1.0)), 0.0, 0.0);
    EXPECT_NEAR(std::abs(g(1, 2) - Cx(1.0)), 0.0, 0.0);
    EXPECT_NEAR(std::abs(g(2, 1) - Cx(1.0)), 0.0, 0.0);
    EXPECT_NEAR(std::abs(g(0, 3)), 0.0, 0.0);
}

TEST(TwoQubitGate, SwapsMiddleStatesForAnyAngles) {
    RngStream s(17, 0);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix<4> g = two_qubit_gate(2.0 * M_PI * s.uniform(), 2.0 * M_PI * s.uniform());
        const PureState<4> out = apply(g, PureState<4>::basis(1));
        EXPECT_NEAR(overlap_probability(out, PureState<4>::basis(2)), 1.0, 1e-14);
        EXPECT_LT(unitarity_defect(g), 1e-12);
        EXPECT_LT(max_abs_diff(matmul(g, g), Matrix<4>::identity()), 1e-12);
    }
}

TEST(GeometricDefect, VanishesOnGrids) {
    RngStream s(18, 0);
    const DriveConfig cfg(M_PI / 3.0, 1.2, Envelope::sine_squared(1.0).normalized_to_pi());
    EXPECT_LT(geometric_defect(cfg, uniform_time_grid(1.0, 1000)), 1e-10);

    const DriveConfig czero(1.0, 0.5, Envelope::constant(1.0, 0.0));
    // zero envelope: defect is exactly zero
    EXPECT_EQ(geometric_defect(czero, uniform_time_grid(1.0, 10)), 0.0);

    EXPECT_THROW(geometric_defect(cfg, std::span<const double>{}), std::invalid_argument);
}

TEST(RotatingFrame, LabFrameCoefficientsCancelTimeDependence) {
    // Lab frame: bare energies on |1>, |e> plus a drive whose coefficients
    // carry e^{-i w_e t} / e^{-i (w_e - w_1) t}. The frame rotation
    // U0 = diag(1, e^{i w_1 t}, e^{i w_e t}) must cancel both the bare terms
    // and the coefficient oscillation, leaving coupling_hamiltonian exactly.
    const double we = 7.3, w1 = 2.1;
    const double theta = 1.9, phi = 0.8;
    const Cx a = std::polar(std::sin(theta / 2.0), phi);
    const Cx b = std::cos(theta / 2.0);
    const DriveConfig cfg(theta, phi, Envelope::sine_squared(1.0).normalized_to_pi());
    for (double t : {0.0, 0.17, 0.5, 0.93}) {
        const double om = cfg.envelope.value(t);
        const Cx a0 = a * std::polar(1.0, -we * t);
        const Cx b0 = b * std::polar(1.0, -(we - w1) * t);
        Matrix<3> h0;
        h0(1, 1) = w1;
        h0(2, 2) = we;
        h0(2, 0) = om * a0;
        h0(2, 1) = om * b0;
        h0(0, 2) = om * std::conj(a0);
        h0(1, 2) = om * std::conj(b0);
        Matrix<3> u0;
        u0(0, 0) = 1.0;
        u0(1, 1) = std::polar(1.0, w1 * t);
        u0(2, 2) = std::polar(1.0, we * t);
        Matrix<3> frame_term;  // i dU0/dt U0^dag = -diag(0, w1, we)
        frame_term(1, 1) = -w1;
        frame_term(2, 2) = -we;
        Matrix<3> h1 = matmul(u0, matmul(h0, adjoint(u0)));
        for (std::size_t k = 0; k < h1.entries.size(); ++k)
            h1.entries[k] += frame_term.entries[k];
        EXPECT_LT(max_abs_diff(h1, coupling_hamiltonian(cfg, t)), 1e-12) << "t = " << t;
    }
}

TEST(CatalogName, IdentifiesKnownPairs) {
    EXPECT_EQ(catalog_name(3.0 * M_PI / 4.0, 0.0), "hadamard");
    EXPECT_EQ(catalog_name(M_PI / 2.0, M_PI), "pauli_x");
    EXPECT_EQ(catalog_name(0.0, 0.4), "pauli_z");
    EXPECT_EQ(catalog_name(3.0 * M_PI / 2.0, 0.9), "phase_shift");
    EXPECT_EQ(catalog_name(1.0, 1.0), "custom");
}
