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

#ifndef GAUSSMETRO_MEASUREMENT_HPP
#define GAUSSMETRO_MEASUREMENT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gaussmetro/linalg.hpp"
#include "gaussmetro/phase_space.hpp"
#include "gaussmetro/transforms.hpp"

namespace gaussmetro {

enum class Quadrature { X, P };

std::string to_string(Quadrature q);
Quadrature parse_quadrature(const std::string& s);

/// Gaussian measurement on the m probe modes. Either a finite general-dyne
/// measurement with covariance K diag(r_j, 1/r_j) K^T, or ideal homodyne of
/// one quadrature on every probe mode (stored as a projector).
struct GeneraldyneMeasurement {
    int probe_modes = 1;
    Mat K;
    std::vector<double> r;
    std::optional<Quadrature> ideal;
    double eta_eff = 1.0;

    static GeneraldyneMeasurement general(const Mat& K, const std::vector<double>& r);
    static GeneraldyneMeasurement diagonal(const std::vector<double>& r);
    static GeneraldyneMeasurement homodyne(int probe_modes, Quadrature q);

    bool is_ideal() const { return ideal.has_value(); }
    /// Sigma_S for finite measurements; undefined (throws) for ideal ones.
    Mat covariance() const;
    /// pi^(x) or pi^(p) for ideal measurements.
    Mat projector() const;
    void validate() const;
};

/// Outcome distribution p(lambda|phi) on the probe modes.
struct ConditionalGaussian {
    Vec mean, dmean;
    Mat cov, dcov;
    /// Probe-only bracket: S_S <R_S> and Sigma_S + S_S V_S S_S^T.
    Vec probe_mean, dprobe_mean;
    Mat probe_cov, dprobe_cov;
    /// Set for ideal homodyne. cov then holds the signal part only and the
    /// inverse is the pseudoinverse of the projection.
    std::optional<Quadrature> ideal;

    int dim() const { return static_cast<int>(mean.size()); }
    Mat projector() const;
};

/// Loss, detector inefficiency and thermal noise. The Fokker-Planck rates are
/// kept for reference only; the solved channel depends on eta_loss and n_th.
struct NoiseModel {
    double eta_loss = 1.0;
    double eta_eff = 1.0;
    double n_th = 0.0;
    double gamma = 0.0;

    void validate() const;
    bool is_ideal() const { return eta_loss == 1.0 && eta_eff == 1.0 && n_th == 0.0; }
    /// Added white noise 1 - eta_eff + (1 - eta_loss)(1 + n_th).
    double added_noise() const { return 1.0 - eta_eff + (1.0 - eta_loss) * (1.0 + n_th); }
};

ConditionalGaussian outcome_statistics(const GaussianState& state, const PassiveTransform& t,
                                       const PhaseGenerator& gen, double phi,
                                       const GeneraldyneMeasurement& meas);

/// Noisy outcome statistics. The measurement's own efficiency multiplies
/// noise.eta_eff.
ConditionalGaussian apply_noise(const GaussianState& state, const PassiveTransform& t,
                                const PhaseGenerator& gen, double phi,
                                const GeneraldyneMeasurement& meas, const NoiseModel& noise);

/// (pi sigma pi)^+ for ideal homodyne.
Mat homodyne_effective_inverse(const ConditionalGaussian& cond);

/// sigma^{-1}, or the homodyne pseudoinverse when the measurement is ideal.
Mat effective_inverse(const ConditionalGaussian& cond);

/// Draws count outcomes (rows). Ideal homodyne samples live on the measured
/// quadratures; other coordinates are zero.
Mat sample_outcome(const ConditionalGaussian& cond, int count, std::uint64_t seed);

/// Complete estimation setup.
struct Scheme {
    GaussianState state;
    PassiveTransform transform;
    PhaseGenerator generator;
    GeneraldyneMeasurement measurement;
    std::optional<NoiseModel> noise;
};

ConditionalGaussian conditional(const Scheme& scheme, double phi);
void validate(const Scheme& scheme);

}  // namespace gaussmetro

#endif
