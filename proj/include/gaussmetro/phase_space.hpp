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

#ifndef GAUSSMETRO_PHASE_SPACE_HPP
#define GAUSSMETRO_PHASE_SPACE_HPP

#include <optional>

#include "gaussmetro/linalg.hpp"

namespace gaussmetro {

// Conventions: quadratures ordered (q1, p1, ..., qN, pN); the vacuum has
// identity covariance; photon number of a mode is
// (<q>^2 + <p>^2)/4 + (V_qq + V_pp - 2)/4.

/// Gaussian state of `modes` bosonic modes. The first `probe_modes` modes are
/// the probe; the rest are ancillas.
struct GaussianState {
    int modes = 0;
    int probe_modes = 0;
    Vec mean;
    Mat cov;
    /// Thermal occupation of the probe when it is declared isothermal.
    std::optional<double> thermal_occupation;

    Vec probe_mean() const { return mean.head(2 * probe_modes); }
    Vec ancilla_mean() const { return mean.tail(2 * (modes - probe_modes)); }
    Mat probe_cov() const { return cov.topLeftCorner(2 * probe_modes, 2 * probe_modes); }
    Mat ancilla_cov() const {
        const int a = 2 * (modes - probe_modes);
        return cov.bottomRightCorner(a, a);
    }
    int ancilla_modes() const { return modes - probe_modes; }
};

constexpr double kSymmetryTol = 1e-12;
constexpr double kPhysicalityTol = 1e-10;
constexpr double kIsothermalTol = 1e-9;

/// Throws ValidationError unless the covariance is symmetric and
/// V + iJ >= -1e-10, and, when declared isothermal, V_S J V_S = nu^2 J on the
/// probe block.
void validate(const GaussianState& state);

/// Relative Frobenius residual of V_S J V_S - (2 n_t + 1)^2 J.
double isothermal_residual(const Mat& probe_cov, double thermal_occupation);

double photon_number(const GaussianState& state, int mode);
double total_photon_number(const GaussianState& state);

/// Every mode displaced to (sqrt(2 nbar), sqrt(2 nbar)) with vacuum noise.
GaussianState coherent_state(double nbar, int modes);

/// diag(s1, 1/s1) on mode 1 and diag(s2, 1/s2) on the others.
GaussianState squeezed_array_state(double s1, double s2, int modes, const Vec& mean);

/// Two-mode squeezed state with squeezing parameter s.
GaussianState two_mode_squeezed_state(double s, const Vec& mean);

/// (2 n_t + 1) S S^T for a symplectic S of size 2m, zero mean.
GaussianState isothermal_state(const Mat& symplectic, double thermal_occupation, int probe_modes);

/// Probe followed by ancilla modes; the probe keeps its isothermal tag.
GaussianState combine(const GaussianState& probe, const GaussianState& ancilla);

/// Same data with a new probe/ancilla split; drops the isothermal tag unless
/// the split is unchanged.
GaussianState with_probe_modes(const GaussianState& state, int probe_modes);

/// Squeezing factor of a single-mode squeezed vacuum with parameter s:
/// covariance diag(e^{-2s}, e^{2s}).
inline double squeeze_factor(double s) { return std::exp(-2.0 * s); }

}  // namespace gaussmetro

#endif
