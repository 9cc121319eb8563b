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

#ifndef GAUSSMETRO_MONTECARLO_HPP
#define GAUSSMETRO_MONTECARLO_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "gaussmetro/fisher.hpp"

namespace gaussmetro {

/// Deterministic child seed: the k-th stream drawn from the master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

struct EmpiricalFisher {
    double value = 0;       // mean squared score
    double stderr_ = 0;
    double score_mean = 0;
    double score_stderr = 0;
    double analytic = 0;
    long samples = 0;
    std::uint64_t seed = 0;

    /// |value - analytic| in units of the standard error.
    double z() const;
};

/// Sample average of the squared analytic score. Singular outcome
/// covariances are handled on their support.
EmpiricalFisher empirical_fisher(const Scheme& scheme, double phi, long samples, std::uint64_t seed,
                                 int threads = 1);

/// Per-sample score d/dphi ln p(lambda|phi) for outcome rows.
Vec score(const ConditionalGaussian& cond, const Mat& outcomes);

struct EstimationExperiment {
    Scheme scheme;
    double phi0 = 0;
    int samples = 1000;     // n per trial
    int trials = 1000;      // T
    std::uint64_t seed = 0;
    double bracket = 0.39269908169872414;  // pi/8
    std::string fingerprint;
};

struct MleResult {
    double variance = 0;     // var of the estimates over accepted trials
    double mean_estimate = 0;
    double fisher = 0;       // F(phi0)
    double crb = 0;          // 1 / (n F)
    double efficiency = 0;   // n var F, 1 for an efficient estimator
    int accepted = 0;
    int flagged = 0;         // maximum on the bracket edge
    std::uint64_t seed = 0;
    std::vector<double> estimates;

    /// var >= (1 - tol) / (n F).
    bool respects_crb(double tol) const { return variance >= (1 - tol) * crb; }
};

/// Maximum-likelihood phase estimates over independent trials, using the
/// exact Gaussian likelihood evaluated from sufficient statistics.
MleResult mle_variance(const EstimationExperiment& exp, int threads = 1);

struct AuditRow {
    double phi = 0;
    double fisher = 0;
    double qfi = 0;
    double empirical = 0;
    double stderr_ = 0;
    bool violation = false;
    bool saturating = false;
};

struct CrbAudit {
    std::vector<AuditRow> rows;
    int violations = 0;
    int saturating = 0;
};

/// F(phi) against the QFI on a grid. Empirical columns are filled when
/// samples > 0.
CrbAudit crb_audit(const Scheme& scheme, const std::vector<double>& phis, long samples = 0,
                   std::uint64_t seed = 0, int threads = 1);

}  // namespace gaussmetro

#endif
