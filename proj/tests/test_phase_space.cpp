// Copyright 2026 The gaussmetro Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gaussmetro/errors.hpp"
#include "gaussmetro/io.hpp"
#include "gaussmetro/phase_space.hpp"
#include "oracles.hpp"

using namespace gaussmetro;

TEST(PhaseSpace, CoherentStatePhotonNumbers) {
    const GaussianState s = coherent_state(1.7, 4);
    ASSERT_EQ(s.modes, 4);
    EXPECT_TRUE(s.cov.isApprox(Mat::Identity(8, 8)));
    EXPECT_DOUBLE_EQ(s.mean(0), std::sqrt(2 * 1.7));
    EXPECT_DOUBLE_EQ(s.mean(1), std::sqrt(2 * 1.7));
    for (int k = 0; k < 4; ++k) EXPECT_NEAR(photon_number(s, k), 1.7, 1e-14);
    EXPECT_NEAR(total_photon_number(s), 4 * 1.7, 1e-13);
    EXPECT_NO_THROW(validate(s));
}

TEST(PhaseSpace, SqueezedVacuumPhotonNumberIsSinhSquared) {
    for (double r : {0.1, 0.5, 1.3}) {
        const double f = squeeze_factor(r);
        const GaussianState s = squeezed_array_state(f, f, 3, Vec::Zero(6));
        for (int k = 0; k < 3; ++k) EXPECT_NEAR(photon_number(s, k), std::pow(std::sinh(r), 2), 1e-12);
        EXPECT_NEAR(s.cov(0, 0), std::exp(-2 * r), 1e-15);
        EXPECT_NEAR(s.cov(1, 1), std::exp(2 * r), 1e-12);
    }
}

TEST(PhaseSpace, SqueezedArrayMixesFactors) {
    const GaussianState s = squeezed_array_state(0.5, 3.0, 3, Vec::Zero(6));
    EXPECT_DOUBLE_EQ(s.cov(0, 0), 0.5);
    EXPECT_DOUBLE_EQ(s.cov(1, 1), 2.0);
    EXPECT_DOUBLE_EQ(s.cov(2, 2), 3.0);
    EXPECT_NEAR(s.cov(5, 5), 1.0 / 3.0, 1e-15);
}

TEST(PhaseSpace, TwoModeSqueezedStateIsPureAndCorrelated) {
    const double r = 0.8;
    const GaussianState s = two_mode_squeezed_state(r, Vec::Zero(4));
    const Vec nu = symplectic_eigenvalues(s.cov);
    for (int k = 0; k < 2; ++k) EXPECT_NEAR(nu(k), 1.0, 1e-10);
    // Reduced single-mode state is thermal with n = sinh^2 r.
    EXPECT_NEAR(photon_number(s, 0), std::pow(std::sinh(r), 2), 1e-12);
    EXPECT_NEAR(s.cov(0, 0), std::cosh(2 * r), 1e-12);
    EXPECT_NEAR(std::abs(s.cov(0, 2)), std::sinh(2 * r), 1e-12);
    EXPECT_NEAR(s.cov(0, 2), -s.cov(1, 3), 1e-12);
}

TEST(PhaseSpace, IsothermalStateHasUniformSymplecticSpectrum) {
    std::mt19937_64 rng(11);
    const Mat sym = oracle::random_symplectic(3, rng);
    const GaussianState s = isothermal_state(sym, 0.4, 3);
    const Vec nu = symplectic_eigenvalues(s.cov);
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(nu(k), 1.8, 1e-9);
    ASSERT_TRUE(s.thermal_occupation.has_value());
    EXPECT_NEAR(isothermal_residual(s.probe_cov(), 0.4), 0.0, 1e-10);
    EXPECT_NO_THROW(validate(s));
}

TEST(PhaseSpace, UnphysicalCovarianceIsRejected) {
    GaussianState s = coherent_state(1.0, 2);
    s.cov *= 0.5;  // violates V + iJ >= 0
    EXPECT_THROW(validate(s), ValidationError);
    GaussianState t = coherent_state(1.0, 2);
    t.cov(0, 1) = 0.3;  // not symmetric
    EXPECT_THROW(validate(t), ValidationError);
}

TEST(PhaseSpace, WrongIsothermalTagIsRejected) {
    GaussianState s = coherent_state(0.0, 1);
    s.thermal_occupation = 0.5;
    EXPECT_THROW(validate(s), ValidationError);
}

TEST(PhaseSpace, CombineKeepsBlocksAndProbeSplit) {
    const GaussianState p = squeezed_array_state(0.3, 0.3, 1, Vec::Constant(2, 0.2));
    const GaussianState a = coherent_state(2.0, 2);
    const GaussianState c = combine(p, a);
    EXPECT_EQ(c.modes, 3);
    EXPECT_EQ(c.probe_modes, 1);
    EXPECT_TRUE(c.probe_cov().isApprox(p.cov));
    EXPECT_TRUE(c.ancilla_cov().isApprox(a.cov));
    EXPECT_TRUE(c.ancilla_mean().isApprox(a.mean));
    EXPECT_NEAR(max_abs(c.cov.topRightCorner(2, 4)), 0.0, 0.0);
    const GaussianState w = with_probe_modes(c, 2);
    EXPECT_EQ(w.probe_modes, 2);
    EXPECT_FALSE(w.thermal_occupation.has_value());
}

TEST(PhaseSpace, JsonRoundTrip) {
    std::mt19937_64 rng(5);
    GaussianState s = isothermal_state(oracle::random_symplectic(2, rng), 0.1, 2);
    s.mean << 0.1, -0.2, 0.3, 0.4;
    const Json j = to_json(s);
    EXPECT_EQ(j["n"], 2);
    EXPECT_EQ(j["m"], 2);
    const GaussianState back = state_from_json(j);
    EXPECT_EQ(back.modes, 2);
    EXPECT_TRUE(back.cov.isApprox(s.cov, 1e-15));
    EXPECT_TRUE(back.mean.isApprox(s.mean, 1e-15));
    ASSERT_TRUE(back.thermal_occupation.has_value());
    EXPECT_DOUBLE_EQ(*back.thermal_occupation, 0.1);
}

TEST(PhaseSpace, NegativePhotonNumberIsADomainError) {
    EXPECT_THROW(coherent_state(-0.1, 2), DomainError);
}
