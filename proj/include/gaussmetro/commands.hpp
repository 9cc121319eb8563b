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

#ifndef GAUSSMETRO_COMMANDS_HPP
#define GAUSSMETRO_COMMANDS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gaussmetro/io.hpp"

namespace gaussmetro {

struct Check {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct CommandResult {
    std::string command;
    Json config;
    CsvTable table;
    Json summary = Json::object();
    std::vector<Check> checks;
    std::uint64_t seed = 0;

    bool passed() const;
    std::string config_hash() const;
    Json to_json() const;
    std::string render(const std::string& format) const;
};

// ---- Input families ---------------------------------------------------------

enum class Family { Coherent, SqueezedCoherent, Squeezed, SqueezedVacuum, Tmsv };
std::string to_string(Family f);
Family parse_family(const std::string& s);

/// Parametrised input plus interferometer and homodyne readout. nbar is the
/// mean photon number per mode; displaced squeezed modes get the remainder
/// nbar - sinh^2(s') as coherent amplitude. Squeeze factors are
/// exp(sign * 2 s').
struct FamilySpec {
    Family family = Family::Coherent;
    int modes = 2;
    double nbar = 1.0;
    double sq = 0.5;
    double sign = -1.0;
    std::string interferometer = "qumi";  // qumi | qumi_sequential | identity | beam_splitter
    double tau = 0.5;
    PhaseGenerator generator;
    GeneraldyneMeasurement measurement = GeneraldyneMeasurement::homodyne(2, Quadrature::X);
    bool measurement_set = false;  // otherwise ideal x-homodyne on every mode
    std::optional<NoiseModel> noise;
};

Scheme build_scheme(const FamilySpec& spec);

/// Named schemes covering every input family, finite and ideal measurements,
/// ancillas, polychromatic phases and noise. Fixed for a given seed.
struct NamedScheme {
    std::string name;
    Scheme scheme;
};
std::vector<NamedScheme> scheme_suite(std::uint64_t seed);

// ---- Commands ---------------------------------------------------------------

struct Fig2Options {
    std::string panel = "left";
    std::vector<double> s_values;   // left: squeeze factors (default e^-1, e^-2)
    int n_min = 2, n_max = 50;      // left and center
    int n_step = 1;
    double nbar = 1.38;             // center and right: photons per mode
    double phi = 1.0471975511965976;  // pi/3
    double sq = 0.5;
    double sign = 1.0;              // s1 = exp(sign * 2 s')
    int modes = 100;                // right
    std::vector<double> nbar_values;  // right (default log grid)
    int threads = 1;
};
CommandResult cmd_fig2(const Fig2Options& o);

struct Fig3Options {
    std::string panel = "left";
    std::vector<double> eps_values;  // left (default 0, +-1/2, +-1)
    double s_min = 0.05, s_max = 3.0;
    int s_steps = 60;
    int eps_steps = 21;              // center
    double phi = 0.7853981633974483; // center: pi/4
    double eps = 0.5;                // right
    std::vector<double> s_values;    // right (default 0.1, 0.15)
    int phi_steps = 721;             // right, over [0, pi]
    int threads = 1;
};
CommandResult cmd_fig3(const Fig3Options& o);

struct Table1Options {
    int threads = 1;
};
CommandResult cmd_table1(const Table1Options& o);

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);
/// constant | SNL | HL | other, with bands of +-0.15 around 0, 1, 2.
std::string classify_slope(double slope);

/// JSON sweep description; see README for the schema.
CommandResult cmd_sweep(const Json& config, int threads);

struct VerifyOptions {
    std::string suite = "fast";
    std::uint64_t seed = 0;
    int threads = 1;
};
CommandResult cmd_verify(const VerifyOptions& o);

/// Relative mismatch between the direct and decomposed Fisher information
/// when the phase rotation matrix has its sign flipped while its derivative
/// keeps the correct form. Nonzero means the consistency check catches it.
double rotation_sign_mutation_gap(const GaussianState& state, const PassiveTransform& t, double phi,
                                  const GeneraldyneMeasurement& meas);

}  // namespace gaussmetro

#endif
