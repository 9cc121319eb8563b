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

#ifndef GAUSSMETRO_OPTIMAL_HPP
#define GAUSSMETRO_OPTIMAL_HPP

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gaussmetro/closed_form.hpp"

namespace gaussmetro {

constexpr double kSaturationTol = 1e-8;
constexpr int kGoldenIterations = 60;

enum class ConditionKind { ClosedForm, PolynomialRoot, GridSearch };
std::string to_string(ConditionKind k);

struct Candidate {
    double phi = 0;
    double fisher = 0;
    double qfi = 0;
    bool saturating = false;
    std::string label;
};

struct RootInfo {
    std::complex<double> value;
    bool real = false;
    bool feasible = false;  // real and inside the admissible interval
};

/// Closed form that disagrees with the direct evaluation beyond tolerance.
struct Discrepancy {
    std::string quantity;
    double printed = 0;
    double computed = 0;
    std::string note;
};

struct WorkingPointReport {
    ConditionKind kind = ConditionKind::GridSearch;
    std::vector<Candidate> candidates;
    std::vector<RootInfo> roots;
    std::vector<Discrepancy> discrepancies;
    bool saturated = false;
    bool flat = false;
    bool feasible = false;
    /// Largest (F - QFI)/max(1, QFI) seen on the diagnostic phase grid.
    std::optional<double> max_relative_gap;
    std::vector<std::string> notes;

    /// Candidate with the largest Fisher information.
    const Candidate* best() const;
};

bool saturates(double fisher, double qfi);

/// Grid over [lo, hi] with `resolution` points, then golden-section
/// refinement on the bracket around the best sample. Never returns less than
/// the best grid value.
WorkingPointReport grid_optimize(const std::function<double(double)>& f, double lo, double hi, int resolution,
                                 std::optional<double> qfi = std::nullopt);
WorkingPointReport grid_optimize(const Scheme& scheme, double lo, double hi, int resolution);

/// Saturation roots in y = sin^2(phi) for the squeezed-array uniform
/// interferometer at zero displacement. The momentum case maps s -> 1/s.
WorkingPointReport optimal_qumi_squeezed(int n, double s1, double s2, Quadrature q);

struct HomogeneousOptimum {
    double phi_x = 0;  // cos(2 phi) = +tanh(2 s')
    double phi_p = 0;  // cos(2 phi) = -tanh(2 s')
    double fisher = 0; // 8 n (n + 1) with n = sinh^2 s'
};

HomogeneousOptimum optimal_homogeneous(double sq);

/// Two-mode squeezed vacuum through a beam splitter (tau), polychromatic phase.
WorkingPointReport optimal_polychromatic(double sq, double eps, Quadrature q, double tau = 0.5);

/// Coherent input, uniform interferometer, ideal homodyne, equal loss and
/// detector efficiency eta. Reports the printed phase and the direct argmax.
WorkingPointReport optimal_decoherent_coherent(double eta, double n_th, Quadrature q, int modes = 2,
                                              double nbar = 1.0);

}  // namespace gaussmetro

#endif
