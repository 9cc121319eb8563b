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

#ifndef GAUSSMETRO_FISHER_HPP
#define GAUSSMETRO_FISHER_HPP

#include <optional>

#include "gaussmetro/measurement.hpp"

namespace gaussmetro {

/// Raw values in [-tol, 0) are clamped to zero and flagged; tol scales with
/// the magnitude of the two contributions.
constexpr double kClampTol = 1e-10;

struct FisherValue {
    double value = 0.0;
    double raw = 0.0;
    bool clamped = false;
};

/// F = dmu^T sigma^-1 dmu + 1/2 Tr(sigma^-1 dsigma sigma^-1 dsigma), using the
/// homodyne pseudoinverse when the measurement is ideal.
FisherValue fisher_general(const ConditionalGaussian& cond);
double fisher_information(const Scheme& scheme, double phi);

/// Closed-form QFI of an isothermal probe propagated through the probe block
/// of L (monochromatic generator). Independent of phi.
double qfi_isothermal(const GaussianState& state, const PassiveTransform& t);

/// QFI of a Gaussian state under d/dphi: mean -> G mean, V -> G V + V G^T.
/// Uses the pure-state formula when every symplectic eigenvalue is 1, the
/// vectorised mixed-state formula otherwise.
double qfi_gaussian(const Vec& mean, const Mat& cov, const Mat& generator);

/// QFI of the full (probe and ancilla) state after L for the scheme's phase
/// generator, including the loss channel when present. This bounds every
/// measurement on the probe modes.
double qfi_scheme(const Scheme& scheme);

struct FisherBreakdown {
    double total = 0.0;          // direct evaluation
    double decomposed = 0.0;     // sum of the terms below
    double probe_qfi = 0.0;      // F_S
    double probe_fisher = 0.0;   // FI of the probe bracket alone
    double ancilla = 0.0;        // F_Anc
    double interference = 0.0;   // F_Int
    double measurement = 0.0;    // F_Meas
    double residual = 0.0;       // trace corrections
    Mat sigma_tilde;             // Sigma~_S
    Mat ancilla_tilde;           // V~_A
    Mat delta;                   // Delta S_S
    Mat schur;                   // S/S_S
};

/// Probe/ancilla/interference/measurement decomposition. Needs an isothermal
/// probe uncorrelated with the ancilla, a finite measurement and the
/// monochromatic generator.
FisherBreakdown fisher_decomposed(const GaussianState& state, const PassiveTransform& t, double phi,
                                  const GeneraldyneMeasurement& meas);

/// Simplified evaluation for a coherent ancilla (V_A = I): the ancilla is
/// absorbed into white noise Sigma + I and a shifted probe covariance V_S - I.
double fisher_coherent_ancilla(const GaussianState& state, const PassiveTransform& t, double phi,
                               const GeneraldyneMeasurement& meas);

struct NoAncillaFisher {
    double value = 0.0;
    double qfi = 0.0;
    double measurement = 0.0;
    double trace_term = 0.0;  // 1/2 (Tr V1'^2 - 2)
};

/// Pure probe, no ancilla. Works for finite and ideal homodyne measurements.
NoAncillaFisher fisher_no_ancilla(const GaussianState& state, const PassiveTransform& t, double phi,
                                  const GeneraldyneMeasurement& meas);

/// Measurement term for a pure no-ancilla scheme with projector P (either
/// P_phi or its polychromatic analogue).
double measurement_term(const GaussianState& state, const PassiveTransform& t, const PhaseGenerator& gen,
                        double phi, const GeneraldyneMeasurement& meas);

struct DecoherentFisher {
    double value = 0.0;              // brute force through the noisy outcome statistics
    double ideal = 0.0;              // same scheme without noise
    double decomposed = 0.0;         // noiseless-substituted FI plus noise corrections
    double substituted = 0.0;        // FI with S -> sqrt(eta_loss) S, Sigma -> eta_eff Sigma
    std::optional<double> printed_equal_eta;  // equal-efficiency expression as printed
    bool printed_matches = false;
    double qfi = 0.0;                // QFI of the lossy state
    Mat sigma_deco;
    Mat Sigma_deco;
};

DecoherentFisher fisher_decoherent(const GaussianState& state, const PassiveTransform& t, double phi,
                                   const GeneraldyneMeasurement& meas, const NoiseModel& noise);

/// Mode-1 moments right before the phase shift: P_0 L_S <R_S> and
/// P_0 L_S V_S L_S^T P_0^T (2-vectors / 2x2).
Vec pre_rotation_mean(const GaussianState& state, const PassiveTransform& t);
Mat pre_rotation_cov(const GaussianState& state, const PassiveTransform& t);

}  // namespace gaussmetro

#endif
