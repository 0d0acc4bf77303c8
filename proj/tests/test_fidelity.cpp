#include "holq/fidelity.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "holq/rng.hpp"

using namespace holq;

namespace {
// OU(1,1) at T = 1
constexpr double kX = 0.8319859539411386;
constexpr double kX4 = 0.4791417087880153;
}  // namespace

TEST(DarkStateWeight, HadamardSweetSpotNeedsTheRelativeMinus) {
    const double theta = 3.0 * M_PI / 4.0;
    const double a = std::cos(3.0 * M_PI / 8.0);
    const double b = std::sin(3.0 * M_PI / 8.0);
    // eta = pi (equivalently beta < 0) aligns with the dark state
    EXPECT_NEAR(dark_state_weight(theta, 0.0, InputState(a, b, M_PI)), 1.0, 1e-14);
    // eta = 0 lands halfway
    EXPECT_NEAR(dark_state_weight(theta, 0.0, InputState(a, b, 0.0)), 0.5, 1e-14);
}

TEST(DarkStateWeight, ClosedFormCases) {
    // theta = 0: weight is alpha^2
    EXPECT_NEAR(dark_state_weight(0.0, 0.7, InputState(0.6, 0.8, 0.2)), 0.36, 1e-14);
    // alpha/beta = tan(theta/2) with phi + eta = 0 kills the weight
    const double theta = 1.3;
    const double a = std::sin(theta / 2.0);
    const double b = std::cos(theta / 2.0);
    EXPECT_NEAR(dark_state_weight(theta, 0.0, InputState(a, b, 0.0)), 0.0, 1e-14);
    // bounded in [0, 1] for random draws
    RngStream s(31, 0);
    for (int i = 0; i < 200; ++i) {
        const double f = dark_state_weight(2.0 * M_PI * s.uniform(), 2.0 * M_PI * s.uniform(),
                                           InputState::from_angle(M_PI * s.uniform(),
                                                                  2.0 * M_PI * s.uniform()));
        EXPECT_GE(f, 0.0);
        EXPECT_LE(f, 1.0);
    }
}

TEST(FidelityOmega, SweetSpotAndNoNoiseLimits) {
    RngStream s(32, 0);
    for (int i = 0; i < 50; ++i) {
        const double x = 0.01 + 0.99 * s.uniform();
        EXPECT_NEAR(fidelity_omega_from_weight(1.0, x), 1.0, 1e-14);
        EXPECT_NEAR(fidelity_omega_from_weight(s.uniform(), 1.0), 1.0, 1e-14);
    }
    EXPECT_NEAR(fidelity_omega_from_weight(0.0, 0.5), 0.53125, 1e-14);
    EXPECT_THROW(fidelity_omega_from_weight(0.5, 0.0), std::invalid_argument);
    EXPECT_THROW(fidelity_omega_from_weight(0.5, 1.5), std::invalid_argument);
    EXPECT_THROW(fidelity_omega_from_weight(1.5, 0.5), std::invalid_argument);
}

TEST(FidelityOmega, TwoAlgebraicFormsAgree) {
    RngStream s(33, 0);
    for (int i = 0; i < 200; ++i) {
        const double f = s.uniform();
        const double x = 0.01 + 0.99 * s.uniform();
        const double x4 = x * x * x * x;
        const double alt =
            0.5 * (1.0 + x4) + (2.0 * x - x4 - 1.0) * f + 0.5 * (3.0 - 4.0 * x + x4) * f * f;
        EXPECT_NEAR(fidelity_omega_from_weight(f, x), alt, 1e-14);
    }
}

TEST(FidelityOmega, FrozenHadamardCase) {
    const InputState zero(1.0, 0.0, 0.0);
    const double f = dark_state_weight(3.0 * M_PI / 4.0, 0.0, zero);
    EXPECT_NEAR(f, 0.1464466094067263, 1e-15);
    EXPECT_NEAR(fidelity_omega(3.0 * M_PI / 4.0, 0.0, zero, kX), 0.7682599514447297, 1e-14);
}

TEST(FidelityOmega, ConvexInWeight) {
    RngStream s(34, 0);
    for (int i = 0; i < 50; ++i) {
        const double x = 0.01 + 0.99 * s.uniform();
        for (int k = 0; k < 20; ++k) {
            const double f1 = s.uniform();
            const double f2 = s.uniform();
            const double mid = 0.5 * (f1 + f2);
            EXPECT_LE(fidelity_omega_from_weight(mid, x),
                      0.5 * (fidelity_omega_from_weight(f1, x) + fidelity_omega_from_weight(f2, x)) +
                          1e-12);
        }
    }
}

TEST(AvgFidelityOmega, ValuesAndLimit) {
    EXPECT_NEAR(avg_fidelity_omega(1.0), 1.0, 1e-15);
    EXPECT_NEAR(avg_fidelity_omega(1e-16), 3.0 / 8.0, 1e-12);
    EXPECT_NEAR(avg_fidelity_omega(kX), 0.8508856905690712, 1e-14);
}

TEST(AvgFidelityOmegaExact, MatchesQuadratureAndDiffersFromReference) {
    for (double theta : {0.0, 1.1, M_PI / 2.0}) {
        for (double x : {0.85, 0.45}) {
            EXPECT_NEAR(input_average_omega(theta, 0.3, x), avg_fidelity_omega_exact(theta, x),
                        1e-12);
        }
    }
    // the reference average squares the mean weight; exact one is larger
    EXPECT_GT(avg_fidelity_omega_exact(0.0, 0.4), avg_fidelity_omega(0.4));
    // at x = 1 both are 1
    EXPECT_NEAR(avg_fidelity_omega_exact(1.2, 1.0), 1.0, 1e-15);
}

TEST(CriticalDecay, RootOfQuartic) {
    const double xc = critical_decay();
    EXPECT_NEAR(xc, 0.5436890126920764, 1e-11);
    EXPECT_NEAR(xc, 0.5437, 1e-4);
    EXPECT_LT(std::abs(xc * xc * xc * xc - 2.0 * xc + 1.0), 1e-12);
}

TEST(MinFidelityOmega, BranchesAndBruteForce) {
    // x = 1: minimum is 1 at f = 0
    const OmegaMinimum at_one = min_fidelity_omega(1.0);
    EXPECT_DOUBLE_EQ(at_one.f_star, 0.0);
    EXPECT_NEAR(at_one.value, 1.0, 1e-15);
    // frozen interior-branch case
    const OmegaMinimum at_03 = min_fidelity_omega(0.3);
    EXPECT_NEAR(at_03.f_star, 0.22570654277971353, 1e-12);
    EXPECT_NEAR(at_03.value, 0.45799457994579945, 1e-12);
    // brute force across both branches
    for (int k = 0; k < 50; ++k) {
        const double x = 0.02 + 0.97 * k / 49.0;
        const OmegaMinimum m = min_fidelity_omega(x);
        double brute = 2.0;
        for (int i = 0; i <= 10000; ++i)
            brute = std::min(brute, fidelity_omega_from_weight(i / 10000.0, x));
        EXPECT_NEAR(m.value, brute, 1e-6) << "x = " << x;
        if (x > critical_decay()) {
            EXPECT_DOUBLE_EQ(m.f_star, 0.0);
        }
    }
}

TEST(FidelityTheta, ReferenceFormCases) {
    // balanced input with phi+eta = k pi gives 1 in the cos^2 form
    EXPECT_NEAR(fidelity_theta(0.0, std::sqrt(0.5), std::sqrt(0.5), 0.3), 1.0, 1e-14);
    EXPECT_NEAR(fidelity_theta(M_PI, std::sqrt(0.5), -std::sqrt(0.5), 0.3), 1.0, 1e-14);
    // phi+eta = (k+1/2) pi leaves only the correlation part
    EXPECT_NEAR(fidelity_theta(M_PI / 2.0, 0.6, 0.8, 0.4), 0.7, 1e-14);
    EXPECT_NEAR(fidelity_theta(M_PI / 2.0, 1.0, 0.0, 0.4), 0.7, 1e-14);
    // no noise
    EXPECT_NEAR(fidelity_theta(1.0, 0.6, 0.8, 1.0), 1.0, 1e-15);
    EXPECT_THROW(fidelity_theta(0.0, 0.6, 0.7, 0.5), std::invalid_argument);
}

TEST(FidelityTheta, OverlapFormSwapsTheWeighting) {
    // the overlap-derived form puts the immunity at phi+eta = (k+1/2) pi
    EXPECT_NEAR(fidelity_theta_from_overlap(M_PI / 2.0, std::sqrt(0.5), std::sqrt(0.5), 0.3), 1.0,
                1e-14);
    EXPECT_NEAR(fidelity_theta_from_overlap(0.0, 0.6, 0.8, 0.4), 0.7, 1e-14);
    // both forms agree when alpha beta = 0 or cos(2(phi+eta)) = 0
    RngStream s(35, 0);
    for (int i = 0; i < 50; ++i) {
        const double x4 = 0.01 + 0.99 * s.uniform();
        const double pe = 2.0 * M_PI * s.uniform();
        EXPECT_NEAR(fidelity_theta(pe, 1.0, 0.0, x4), fidelity_theta_from_overlap(pe, 1.0, 0.0, x4),
                    1e-14);
        EXPECT_NEAR(fidelity_theta(M_PI / 4.0, 0.6, 0.8, x4),
                    fidelity_theta_from_overlap(M_PI / 4.0, 0.6, 0.8, x4), 1e-14);
    }
}

TEST(AvgFidelityTheta, ValuesAndExactQuadrature) {
    EXPECT_NEAR(avg_fidelity_theta(1.0), 1.0, 1e-15);
    EXPECT_NEAR(avg_fidelity_theta(1e-16), 5.0 / 8.0, 1e-12);
    EXPECT_NEAR(avg_fidelity_theta(0.5), 0.8125, 1e-15);
    for (double x4 : {0.9, 0.5, 0.1})
        EXPECT_NEAR(input_average_theta(0.7, x4), avg_fidelity_theta(x4), 1e-10);
}

TEST(FidelityPhi, SpecialCases) {
    RngStream s(36, 0);
    for (int i = 0; i < 50; ++i) {
        const InputState in = InputState::from_angle(M_PI * s.uniform(), 2.0 * M_PI * s.uniform());
        const double theta = 2.0 * M_PI * s.uniform();
        // no noise: every input comes back perfectly
        EXPECT_NEAR(fidelity_phi(theta, 0.9, in, 1.0), 1.0, 1e-13);
        // theta = 0 gate ignores phi entirely
        EXPECT_NEAR(fidelity_phi(0.0, 0.9, in, 0.01 + 0.99 * s.uniform()), 1.0, 1e-13);
    }
    // population entirely in |0>: the gate output picks up only a phase
    EXPECT_NEAR(fidelity_phi(M_PI / 2.0, 0.0, InputState(1.0, 0.0, 0.0), 0.6), 1.0, 1e-14);
}

TEST(AvgFidelityPhi, MinimumAndExactQuadrature) {
    EXPECT_NEAR(avg_fidelity_phi(1.1, 1.0), 1.0, 1e-15);
    EXPECT_NEAR(avg_fidelity_phi(0.0, 0.2), 1.0, 1e-15);
    const double theta_star = std::asin(std::sqrt(3.0 / 5.0));
    EXPECT_NEAR(avg_fidelity_phi(theta_star, 1e-16), 11.0 / 20.0, 1e-12);
    for (double x : {0.9, 0.5, 0.15})
        for (double theta : {0.4, 1.1, 2.4})
            EXPECT_NEAR(input_average_phi(theta, 0.7, x), avg_fidelity_phi(theta, x), 1e-10);
}

TEST(FidelityPhiTwoQubit, ReferenceFormCases) {
    EXPECT_NEAR(fidelity_phi_twoqubit(1.2, TwoQubitInput(0.5, 0.5, 0.5, 0.5), 1.0), 1.0, 1e-14);
    // swap-block states are untouched by phi noise
    const TwoQubitInput swap_only(0.0, 0.6, 0.8, 0.0);
    for (double x : {0.9, 0.4, 0.05})
        EXPECT_NEAR(fidelity_phi_twoqubit(1.2, swap_only, x), 1.0, 1e-14);
    // theta = pi/2, all population on |00>: pure phase, fidelity 1
    EXPECT_NEAR(fidelity_phi_twoqubit(M_PI / 2.0, TwoQubitInput(1.0, 0.0, 0.0, 0.0), 0.5), 1.0,
                1e-14);
}

TEST(FidelityPhiTwoQubit, OverlapFormReducesWhenCrossTermVanishes) {
    RngStream s(37, 0);
    for (int i = 0; i < 50; ++i) {
        const double x = 0.01 + 0.99 * s.uniform();
        const double phi = 2.0 * M_PI * s.uniform();
        // cos(theta) = 0 kills the cross term
        const TwoQubitInput in(0.6, 0.0, 0.0, 0.8);
        EXPECT_NEAR(fidelity_phi_twoqubit_from_overlap(M_PI / 2.0, phi, in, x),
                    fidelity_phi_twoqubit(M_PI / 2.0, in, x), 1e-13);
        // c00 c11 = 0 kills it too
        const TwoQubitInput corner(1.0, 0.0, 0.0, 0.0);
        EXPECT_NEAR(fidelity_phi_twoqubit_from_overlap(1.1, phi, corner, x),
                    fidelity_phi_twoqubit(1.1, corner, x), 1e-13);
    }
    // generic case differs: frozen example at theta=pi/4, c00=c11=1/sqrt(2), phi=0
    const TwoQubitInput bell(std::sqrt(0.5), 0.0, 0.0, std::sqrt(0.5));
    const double x = kX;
    const double diff = fidelity_phi_twoqubit_from_overlap(M_PI / 4.0, 0.0, bell, x) -
                        fidelity_phi_twoqubit(M_PI / 4.0, bell, x);
    EXPECT_NEAR(diff, (1.0 - kX4) / 8.0, 1e-12);
}

TEST(AvgFidelityPhiTwoQubit, BoundsAndMonotonicity) {
    EXPECT_NEAR(avg_fidelity_phi_twoqubit(1.0), 1.0, 1e-15);
    EXPECT_NEAR(avg_fidelity_phi_twoqubit(1e-16), 175.0 / 256.0, 1e-12);
    EXPECT_NEAR(avg_fidelity_phi_twoqubit(0.5), 0.8212890625, 1e-15);
    double prev = 0.0;
    for (double x = 1e-6; x <= 1.0; x += 0.02) {
        const double v = avg_fidelity_phi_twoqubit(std::min(x, 1.0));
        EXPECT_GT(v, prev);
        prev = v;
    }
}

TEST(SweetSpots, PredicateAndConstructor) {
    const InputState sweet = dark_state_input(3.0 * M_PI / 4.0, 0.0);
    EXPECT_NEAR(sweet.alpha, std::cos(3.0 * M_PI / 8.0), 1e-15);
    EXPECT_NEAR(sweet.beta, std::sin(3.0 * M_PI / 8.0), 1e-15);
    EXPECT_NEAR(sweet.eta, M_PI, 1e-15);
    EXPECT_TRUE(sweet_spot_omega(3.0 * M_PI / 4.0, 0.0, sweet));
    // Pauli-X on |0>: weight 1/2, not sweet
    EXPECT_FALSE(sweet_spot_omega(M_PI / 2.0, M_PI, InputState(1.0, 0.0, 0.0)));
    // Pauli-Z on |0>: weight 1, sweet
    EXPECT_TRUE(sweet_spot_omega(0.0, 0.0, InputState(1.0, 0.0, 0.0)));
    // construction works for any gate angles
    RngStream s(38, 0);
    for (int i = 0; i < 50; ++i) {
        const double th = 2.0 * M_PI * s.uniform();
        const double ph = 2.0 * M_PI * s.uniform();
        EXPECT_TRUE(sweet_spot_omega(th, ph, dark_state_input(th, ph)));
    }
}

TEST(MinOrdering, ChainOfBounds) {
    const auto mins = min_ordering_check();
    EXPECT_NEAR(mins[0], 0.375, 1e-12);
    EXPECT_NEAR(mins[1], 0.55, 1e-12);
    EXPECT_NEAR(mins[2], 0.625, 1e-12);
    EXPECT_LT(mins[0], mins[1]);
    EXPECT_LT(mins[1], mins[2]);
}

TEST(AllFidelities, StayInUnitIntervalForRandomInputs) {
    RngStream s(39, 0);
    for (int i = 0; i < 500; ++i) {
        const double x = 0.005 + 0.995 * s.uniform();
        const double theta = 2.0 * M_PI * s.uniform();
        const double phi = 2.0 * M_PI * s.uniform();
        const InputState in = InputState::from_angle(M_PI * s.uniform(), 2.0 * M_PI * s.uniform());
        for (double v :
             {fidelity_omega(theta, phi, in, x),
              fidelity_theta(phi + in.eta, in.alpha, in.beta, x),
              fidelity_theta_from_overlap(phi + in.eta, in.alpha, in.beta, x),
              fidelity_phi(theta, phi, in, x), avg_fidelity_omega(x),
              avg_fidelity_omega_exact(theta, x), avg_fidelity_theta(x),
              avg_fidelity_phi(theta, x), avg_fidelity_phi_twoqubit(x)}) {
            EXPECT_GE(v, -1e-12);
            EXPECT_LE(v, 1.0 + 1e-12);
        }
        RngStream t(40, static_cast<std::uint64_t>(i));
        double c[4];
        double n2 = 0.0;
        for (double& vv : c) {
            vv = 2.0 * t.uniform() - 1.0;
            n2 += vv * vv;
        }
        const double inv = 1.0 / std::sqrt(n2);
        const TwoQubitInput in2(c[0] * inv, c[1] * inv, c[2] * inv, c[3] * inv);
        const double v1 = fidelity_phi_twoqubit(theta, in2, x);
        const double v2 = fidelity_phi_twoqubit_from_overlap(theta, phi, in2, x);
        EXPECT_GE(v2, -1e-12);
        EXPECT_LE(v2, 1.0 + 1e-12);
        EXPECT_GE(v1, -1e-12);
        EXPECT_LE(v1, 1.0 + 1e-9);
    }
}

TEST(InputState, Validation) {
    EXPECT_THROW(InputState(0.8, 0.8, 0.0), std::invalid_argument);
    EXPECT_THROW(TwoQubitInput(1.0, 1.0, 0.0, 0.0), std::invalid_argument);
    const InputState ok = InputState::from_angle(1.234, 0.5);
    EXPECT_NEAR(ok.alpha * ok.alpha + ok.beta * ok.beta, 1.0, 1e-15);
}
