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

#include "gaussmetro/closed_form.hpp"
#include "gaussmetro/commands.hpp"
#include "gaussmetro/errors.hpp"
#include "gaussmetro/optimal.hpp"

using namespace gaussmetro;

namespace {

constexpr double kPi = 3.14159265358979323846;

double sinh2(double x) { return std::sinh(x) * std::sinh(x); }

Scheme homogeneous_scheme(double sp, int n, Quadrature q) {
    const double s = squeeze_factor(sp);
    return Scheme{squeezed_array_state(s, s, n, Vec::Zero(2 * n)), qumi(n), PhaseGenerator::mono(),
                  GeneraldyneMeasurement::homodyne(n, q), std::nullopt};
}

}  // namespace

TEST(Optimal, GridFindsSmoothMaximum) {
    const WorkingPointReport r = grid_optimize([](double x) { return 3 - (x - 0.123) * (x - 0.123); }, -1, 1, 21);
    ASSERT_NE(r.best(), nullptr);
    EXPECT_NEAR(r.best()->phi, 0.123, 1e-7);
    EXPECT_NEAR(r.best()->fisher, 3.0, 1e-12);
    EXPECT_FALSE(r.flat);
}

TEST(Optimal, GridNeverReturnsLessThanBestSample) {
    // Narrow spike between grid points: refinement may miss it but must not lose the grid best.
    auto f = [](double x) { return std::abs(x - 0.5) < 1e-3 ? 10.0 : std::cos(x); };
    const WorkingPointReport r = grid_optimize(f, -1, 1, 11);
    EXPECT_GE(r.best()->fisher, 1.0);
}

TEST(Optimal, FlatFunctionIsFlagged) {
    const WorkingPointReport r = grid_optimize([](double) { return 0.0; }, 0, 1, 11);
    EXPECT_TRUE(r.flat);
}

TEST(Optimal, GridRejectsBadRanges) {
    EXPECT_THROW(grid_optimize([](double x) { return x; }, 1, 0, 11), DomainError);
    EXPECT_THROW(grid_optimize([](double x) { return x; }, 0, 1, 2), DomainError);
}

TEST(Optimal, CoherentArgmaxIsMinusQuarterPi) {
    const Scheme s{coherent_state(1.0, 3), qumi(3), PhaseGenerator::mono(),
                   GeneraldyneMeasurement::homodyne(3, Quadrature::X), std::nullopt};
    const WorkingPointReport r = grid_optimize(s, -kPi / 2, 0, 181);
    EXPECT_NEAR(r.best()->phi, -kPi / 4, 1e-6);
    EXPECT_TRUE(r.saturated);
}

TEST(Optimal, VacuumIsFlat) {
    const Scheme s{coherent_state(0.0, 2), qumi(2), PhaseGenerator::mono(),
                   GeneraldyneMeasurement::homodyne(2, Quadrature::X), std::nullopt};
    EXPECT_TRUE(grid_optimize(s, -1, 1, 21).flat);
}

TEST(Optimal, HomogeneousPhases) {
    const HomogeneousOptimum h = optimal_homogeneous(0.5);
    EXPECT_NEAR(h.phi_x, 0.5 * std::acos(std::tanh(1.0)), 1e-15);
    EXPECT_NEAR(h.phi_x, 0.352513, 1e-6);
    EXPECT_NEAR(h.fisher, 2.7622, 1e-4);
    EXPECT_NEAR(optimal_homogeneous(0.0).phi_x, kPi / 4, 1e-15);
    EXPECT_LT(optimal_homogeneous(10.0).phi_x, 1e-8);
}

TEST(Optimal, HomogeneousPhaseSaturatesAndMatchesGrid) {
    const double sp = 0.5;
    const HomogeneousOptimum h = optimal_homogeneous(sp);
    for (Quadrature q : {Quadrature::X, Quadrature::P}) {
        const Scheme s = homogeneous_scheme(sp, 3, q);
        const double phi = q == Quadrature::X ? h.phi_x : h.phi_p;
        EXPECT_NEAR(fisher_information(s, phi), 8 * sinh2(sp) * (sinh2(sp) + 1), 1e-9);
        const WorkingPointReport g = grid_optimize(s, phi - 0.3, phi + 0.3, 61);
        EXPECT_NEAR(g.best()->phi, phi, 1e-6);
    }
}

TEST(Optimal, MixedSqueezedCoherentArrayNeverSaturates) {
    for (int n : {2, 3, 10, 50})
        for (double s : {std::exp(-1.0), std::exp(-2.0)}) {
            const WorkingPointReport r = optimal_qumi_squeezed(n, s, 1.0, Quadrature::X);
            EXPECT_FALSE(r.feasible) << n;
            EXPECT_FALSE(r.saturated) << n;
            ASSERT_EQ(r.roots.size(), 2u);
            ASSERT_TRUE(r.max_relative_gap.has_value());
            EXPECT_LT(*r.max_relative_gap, 0.0);
        }
}

TEST(Optimal, SaturatingCandidatesReallySaturate) {
    for (double sp : {0.2, 0.8}) {
        const double s = squeeze_factor(sp);
        const WorkingPointReport r = optimal_qumi_squeezed(4, s, s, Quadrature::X);
        EXPECT_TRUE(r.feasible);
        EXPECT_TRUE(r.saturated);
        for (const Candidate& c : r.candidates)
            if (c.saturating) EXPECT_LE(std::abs(c.fisher - c.qfi), 1e-8 * std::max(1.0, c.qfi));
    }
}

TEST(Optimal, PolychromaticFullModulationSaturates) {
    for (double sp : {0.1, 0.5, 1.0})
        for (double eps : {1.0, -1.0})
            for (Quadrature q : {Quadrature::X, Quadrature::P}) {
                const WorkingPointReport r = optimal_polychromatic(sp, eps, q);
                EXPECT_EQ(r.kind, ConditionKind::ClosedForm);
                EXPECT_TRUE(r.saturated);
                const Candidate* c = r.best();
                const double c4 = std::cos(4 * c->phi);
                const double sg = eps > 0 ? 1 : -1;
                const double expected = (q == Quadrature::X ? -sg : sg) * std::tanh(2 * sp);
                EXPECT_NEAR(c4, expected, 1e-6);
            }
}

TEST(Optimal, PolychromaticZeroModulationIsInfeasible) {
    for (double sp : {0.1, 0.5}) {
        const WorkingPointReport r = optimal_polychromatic(sp, 0.0, Quadrature::X);
        EXPECT_FALSE(r.feasible);
        EXPECT_FALSE(r.saturated);
    }
}

TEST(Optimal, PolychromaticHalfModulationNearFiveSinhSquared) {
    for (double sp : {0.1, 0.15}) {
        const WorkingPointReport r = optimal_polychromatic(sp, 0.5, Quadrature::X);
        const double target = 5 * sinh2(2 * sp);
        EXPECT_NEAR(r.best()->fisher / target, 1.0, 0.02);
        EXPECT_NEAR(std::remainder(r.best()->phi - kPi / 2, kPi), 0.0, 0.15);
    }
}

TEST(Optimal, DecoherentCoherentReportsPrintedAndDirect) {
    const WorkingPointReport ideal = optimal_decoherent_coherent(1.0, 0.0, Quadrature::X);
    EXPECT_NEAR(std::remainder(ideal.best()->phi + kPi / 4, kPi), 0.0, 1e-6);
    EXPECT_TRUE(ideal.saturated);
    const WorkingPointReport lossy = optimal_decoherent_coherent(0.5, 0.0, Quadrature::X);
    EXPECT_EQ(lossy.kind, ConditionKind::GridSearch);
    EXPECT_FALSE(lossy.discrepancies.empty());
    EXPECT_NEAR(lossy.best()->fisher, 8.0 / 3.0, 1e-6);
    EXPECT_NEAR(lossy.best()->qfi, 4.0, 1e-8);
}

TEST(Optimal, LabelsOfConditionKinds) {
    EXPECT_EQ(to_string(ConditionKind::ClosedForm), "closed-form");
    EXPECT_EQ(to_string(ConditionKind::PolynomialRoot), "polynomial-root");
    EXPECT_EQ(to_string(ConditionKind::GridSearch), "grid-search");
}
