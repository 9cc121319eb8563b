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
#include <sstream>

#include "gaussmetro/commands.hpp"
#include "gaussmetro/errors.hpp"

using namespace gaussmetro;

TEST(Commands, SlopeOfExactPowerLaws) {
    const std::vector<double> x = {1, 2, 4, 8, 16};
    for (double k : {0.0, 1.0, 2.0, 1.37}) {
        std::vector<double> y;
        for (double v : x) y.push_back(3.5 * std::pow(v, k));
        EXPECT_NEAR(loglog_slope(x, y), k, 1e-12);
    }
    EXPECT_THROW(loglog_slope({1.0}, {1.0}), DomainError);
    EXPECT_THROW(loglog_slope({1.0, 2.0}, {1.0, -1.0}), DomainError);
}

TEST(Commands, SlopeClassificationBands) {
    EXPECT_EQ(classify_slope(0.1), "constant");
    EXPECT_EQ(classify_slope(0.9), "SNL");
    EXPECT_EQ(classify_slope(1.14), "SNL");
    EXPECT_EQ(classify_slope(1.9), "HL");
    EXPECT_EQ(classify_slope(1.5), "other");
}

TEST(Commands, FamiliesRoundTripAndValidate) {
    for (Family f : {Family::Coherent, Family::SqueezedCoherent, Family::Squeezed, Family::SqueezedVacuum, Family::Tmsv})
        EXPECT_EQ(parse_family(to_string(f)), f);
    EXPECT_THROW(parse_family("cat"), DomainError);
    FamilySpec sp;
    sp.family = Family::Squeezed;
    sp.nbar = 0.1;
    sp.sq = 1.0;  // sinh^2(1) = 1.38 photons already exceed nbar
    EXPECT_THROW(build_scheme(sp), DomainError);
    sp.interferometer = "mystery";
    sp.nbar = 5;
    EXPECT_THROW(build_scheme(sp), DomainError);
}

TEST(Commands, FamilyPhotonBudget) {
    FamilySpec sp;
    sp.family = Family::SqueezedCoherent;
    sp.modes = 4;
    sp.nbar = 1.38;
    sp.interferometer = "identity";
    const Scheme s = build_scheme(sp);
    for (int k = 0; k < 4; ++k) EXPECT_NEAR(photon_number(s.state, k), 1.38, 1e-12);
}

TEST(Commands, SuiteIsDeterministicAndValid) {
    const auto a = scheme_suite(3), b = scheme_suite(3);
    ASSERT_EQ(a.size(), b.size());
    EXPECT_GE(a.size(), 8u);
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(fingerprint(a[i].scheme), fingerprint(b[i].scheme));
        EXPECT_NO_THROW(validate(a[i].scheme));
    }
}

TEST(Commands, Fig2LeftRootsAndProvenance) {
    Fig2Options o;
    o.n_max = 12;
    const CommandResult r = cmd_fig2(o);
    EXPECT_TRUE(r.passed());
    const std::string csv = r.render("csv");
    std::istringstream in(csv);
    std::string first, header;
    std::getline(in, first);
    std::getline(in, header);
    EXPECT_EQ(first.rfind("# gaussmetro ", 0), 0u);
    EXPECT_NE(first.find("config=" + r.config_hash()), std::string::npos);
    EXPECT_EQ(header.rfind("N,s1_root1,s1_root2", 0), 0u);
    EXPECT_EQ(csv.find('\r'), std::string::npos);
    EXPECT_EQ(r.table.rows.size(), 11u);
    EXPECT_EQ(cmd_fig2(o).render("csv"), csv);
}

TEST(Commands, Fig2RightSingleModeOverride) {
    Fig2Options o;
    o.panel = "right";
    o.modes = 1;
    o.nbar_values = {0.5, 2.0};
    const CommandResult r = cmd_fig2(o);
    EXPECT_TRUE(r.passed());
    const auto& cols = r.table.columns;
    const auto f = std::find(cols.begin(), cols.end(), "F_squeezed_vacuum_opt") - cols.begin();
    for (std::size_t i = 0; i < 2; ++i) {
        const double nb = o.nbar_values[i];
        EXPECT_NEAR(std::stod(r.table.rows[i][f]), 8 * nb * (nb + 1), 1e-9 * 8 * nb * (nb + 1));
    }
}

TEST(Commands, UnknownPanelIsRejected) {
    Fig2Options o;
    o.panel = "bogus";
    EXPECT_THROW(cmd_fig2(o), DomainError);
    Fig3Options p;
    p.panel = "top";
    EXPECT_THROW(cmd_fig3(p), DomainError);
}

TEST(Commands, Fig3CenterSurfaceIsNonPositive) {
    Fig3Options o;
    o.panel = "center";
    o.eps_steps = 5;
    o.s_steps = 6;
    const CommandResult r = cmd_fig3(o);
    EXPECT_TRUE(r.passed());
    EXPECT_EQ(r.table.rows.size(), 30u);
}

TEST(Commands, SweepReportsPerPointErrors) {
    const Json cfg = Json::parse(R"({
        "scheme": {"family": "squeezed", "modes": 2, "nbar": 0.5, "s": 0.5},
        "sweep": {"variable": "s", "start": 0.2, "stop": 1.0, "steps": 3},
        "phi": 0.3
    })");
    const CommandResult r = cmd_sweep(cfg, 2);
    ASSERT_EQ(r.table.rows.size(), 3u);
    EXPECT_EQ(r.table.rows[0].back(), "ok");
    EXPECT_NE(r.table.rows[2].back(), "ok");  // sinh^2(1) > 0.5 photons
    EXPECT_EQ(r.table.rows[2][2], "nan");
    EXPECT_TRUE(r.passed());
}

TEST(Commands, SweepValidatesConfig) {
    EXPECT_THROW(cmd_sweep(Json::parse(R"({"scheme": {}, "sweep": {"variable": "T", "start": 0, "stop": 1, "steps": 2}})"), 1),
                 std::invalid_argument);
    EXPECT_THROW(cmd_sweep(Json::parse(R"({"scheme": {}})"), 1), std::invalid_argument);
    EXPECT_THROW(cmd_sweep(Json::parse(R"({"scheme": {}, "sweep": {"variable": "phi", "start": 0, "stop": 1, "steps": 0}})"), 1),
                 std::invalid_argument);
}

TEST(Commands, SweepOverModesWithEmpiricalColumn) {
    const Json cfg = Json::parse(R"({
        "scheme": {"family": "coherent", "nbar": 1.0},
        "sweep": {"variable": "N", "values": [2, 3]},
        "phi": -0.7853981633974483, "outputs": ["F", "QFI", "F_empirical"], "samples": 20000, "seed": 9
    })");
    const CommandResult a = cmd_sweep(cfg, 1), b = cmd_sweep(cfg, 2);
    EXPECT_EQ(a.render("csv"), b.render("csv"));
    EXPECT_NEAR(std::stod(a.table.rows[1][2]), 12.0, 1e-10);
    EXPECT_EQ(a.seed, 9u);
}

TEST(Commands, RotationSignMutationIsDetected) {
    std::mt19937_64 rng(61);
    const GaussianState p = isothermal_state(random_passive(2, rng).L, 0.2, 2);
    GaussianState s = combine(p, coherent_state(0.5, 1));
    s.mean(0) = 0.7;
    s.mean(3) = -0.4;
    const PassiveTransform t = with_probe_modes(random_passive(3, rng), 2);
    const GeneraldyneMeasurement m = GeneraldyneMeasurement::diagonal({0.5, 2.0});
    EXPECT_GT(rotation_sign_mutation_gap(s, t, 0.7, m), 1e-6);
    // The unmutated consistency check is tight.
    const FisherBreakdown b = fisher_decomposed(s, t, 0.7, m);
    EXPECT_NEAR(b.decomposed, b.total, 1e-10 * std::max(1.0, b.total));
}

TEST(Commands, JsonReportCarriesChecksAndHash) {
    Fig2Options o;
    o.n_max = 4;
    const CommandResult r = cmd_fig2(o);
    const Json j = Json::parse(r.render("json"));
    EXPECT_EQ(j["command"], "fig2-left");
    EXPECT_EQ(j["config_hash"], r.config_hash());
    EXPECT_TRUE(j["passed"].get<bool>());
    EXPECT_EQ(j["rows"].size(), 3u);
    EXPECT_THROW(r.render("xml"), DomainError);
}
