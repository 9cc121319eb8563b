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

#include "gaussmetro/montecarlo.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <random>

#include "gaussmetro/errors.hpp"
#include "gaussmetro/optimal.hpp"
#include "gaussmetro/parallel.hpp"

namespace gaussmetro {

int default_threads() {
    if (const char* env = std::getenv("GAUSSMETRO_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    std::uint32_t out[2];
    seq.generate(out, out + 2);
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

double EmpiricalFisher::z() const {
    if (stderr_ == 0) return value == analytic ? 0.0 : std::numeric_limits<double>::infinity();
    return std::abs(value - analytic) / stderr_;
}

namespace {

/// Orthonormal basis of the support of the sampled covariance.
Mat support_basis(const ConditionalGaussian& c) {
    Mat cov = c.cov;
    if (c.ideal) {
        const Mat p = c.projector();
        cov = p * cov * p;
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (cov + cov.transpose()));
    if (es.info() != Eigen::Success) throw NumericalError("eigendecomposition of sigma failed");
    const Vec ev = es.eigenvalues();
    const double top = std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
    const double cutoff = top * c.dim() * std::numeric_limits<double>::epsilon();
    std::vector<int> keep;
    for (int k = 0; k < ev.size(); ++k)
        if (ev(k) > cutoff) keep.push_back(k);
    Mat q(c.dim(), static_cast<int>(keep.size()));
    for (std::size_t j = 0; j < keep.size(); ++j) q.col(j) = es.eigenvectors().col(keep[j]);
    return q;
}

/// The outcome family restricted to a fixed support.
struct Reduced {
    Vec mean, dmean;
    Mat cov, dcov;
};

Reduced reduce(const ConditionalGaussian& c, const Mat& q) {
    Reduced r;
    r.mean = q.transpose() * c.mean;
    r.dmean = q.transpose() * c.dmean;
    r.cov = q.transpose() * c.cov * q;
    r.dcov = q.transpose() * c.dcov * q;
    return r;
}

Vec reduced_score(const Reduced& r, const Mat& q, const Mat& outcomes) {
    Eigen::LDLT<Mat> ldlt(r.cov);
    if (ldlt.info() != Eigen::Success) throw NumericalError("reduced covariance factorization failed");
    const Mat ainv = ldlt.solve(Mat::Identity(r.cov.rows(), r.cov.cols()));
    const Vec a = ainv * r.dmean;
    const Mat b = ainv * r.dcov * ainv;
    const double tr = (ainv * r.dcov).trace();
    const Mat y = (outcomes * q).rowwise() - r.mean.transpose();
    Vec s(outcomes.rows());
    for (Eigen::Index i = 0; i < y.rows(); ++i) {
        const Vec yi = y.row(i).transpose();
        s(i) = a.dot(yi) + 0.5 * yi.dot(b * yi) - 0.5 * tr;
    }
    return s;
}

constexpr long kChunk = 1 << 16;

}  // namespace

Vec score(const ConditionalGaussian& cond, const Mat& outcomes) {
    if (outcomes.cols() != cond.dim()) throw DimensionError("outcome rows have the wrong length");
    const Mat q = support_basis(cond);
    return reduced_score(reduce(cond, q), q, outcomes);
}

EmpiricalFisher empirical_fisher(const Scheme& scheme, double phi, long samples, std::uint64_t seed, int threads) {
    if (samples < 2) throw DomainError("need at least two samples");
    validate(scheme);
    const ConditionalGaussian cond = conditional(scheme, phi);
    const Mat q = support_basis(cond);
    const Reduced red = reduce(cond, q);
    const int chunks = static_cast<int>((samples + kChunk - 1) / kChunk);
    std::vector<double> s1(chunks), s2(chunks), s4(chunks);
    parallel_for(chunks, threads, [&](int k) {
        const long count = std::min(kChunk, samples - k * kChunk);
        const Mat draws = sample_outcome(cond, static_cast<int>(count), derive_seed(seed, k));
        const Vec s = reduced_score(red, q, draws);
        s1[k] = s.sum();
        s2[k] = s.squaredNorm();
        s4[k] = s.array().square().square().sum();
    });
    double t1 = 0, t2 = 0, t4 = 0;
    for (int k = 0; k < chunks; ++k) {
        t1 += s1[k];
        t2 += s2[k];
        t4 += s4[k];
    }
    const double n = static_cast<double>(samples);
    EmpiricalFisher e;
    e.samples = samples;
    e.seed = seed;
    e.value = t2 / n;
    e.score_mean = t1 / n;
    e.stderr_ = std::sqrt(std::max(0.0, t4 / n - e.value * e.value) / (n - 1));
    e.score_stderr = std::sqrt(std::max(0.0, e.value - e.score_mean * e.score_mean) / (n - 1));
    e.analytic = fisher_general(cond).value;
    return e;
}

MleResult mle_variance(const EstimationExperiment& exp, int threads) {
    if (exp.samples < 1) throw DomainError("samples per trial must be positive");
    if (exp.trials < 1) throw DomainError("trial count must be positive");
    if (!(exp.bracket > 0)) throw DomainError("bracket must be positive");
    validate(exp.scheme);
    const ConditionalGaussian c0 = conditional(exp.scheme, exp.phi0);
    const Mat q = support_basis(c0);

    std::vector<double> est(exp.trials);
    std::vector<char> edge(exp.trials, 0);
    parallel_for(exp.trials, threads, [&](int t) {
        const Mat draws = sample_outcome(c0, exp.samples, derive_seed(exp.seed, t)) * q;
        const Vec mbar = draws.colwise().mean().transpose();
        const Mat centered = draws.rowwise() - mbar.transpose();
        const Mat scatter = centered.transpose() * centered / exp.samples;
        // Per-sample log-likelihood up to constants.
        auto loglik = [&](double phi) {
            const Reduced r = reduce(conditional(exp.scheme, phi), q);
            Eigen::LDLT<Mat> ldlt(r.cov);
            if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) return -std::numeric_limits<double>::infinity();
            const Vec dm = mbar - r.mean;
            const double logdet = ldlt.vectorD().array().log().sum();
            const Mat ainv_s = ldlt.solve(scatter);
            return -0.5 * (logdet + ainv_s.trace() + dm.dot(ldlt.solve(dm)));
        };
        const double lo = exp.phi0 - exp.bracket, hi = exp.phi0 + exp.bracket;
        const WorkingPointReport w = grid_optimize(loglik, lo, hi, 33);
        const double phi_hat = w.candidates.front().phi;
        est[t] = phi_hat;
        const double slack = 1e-6 * exp.bracket;
        edge[t] = (phi_hat - lo < slack || hi - phi_hat < slack) ? 1 : 0;
    });

    MleResult r;
    r.seed = exp.seed;
    double sum = 0;
    for (int t = 0; t < exp.trials; ++t) {
        if (edge[t]) {
            ++r.flagged;
            continue;
        }
        r.estimates.push_back(est[t]);
        sum += est[t];
    }
    r.accepted = static_cast<int>(r.estimates.size());
    if (r.accepted < 2) throw NumericalError("fewer than two trials converged inside the bracket");
    r.mean_estimate = sum / r.accepted;
    double ss = 0;
    for (double e : r.estimates) ss += (e - r.mean_estimate) * (e - r.mean_estimate);
    r.variance = ss / (r.accepted - 1);
    r.fisher = fisher_general(c0).value;
    r.crb = r.fisher > 0 ? 1.0 / (exp.samples * r.fisher) : std::numeric_limits<double>::infinity();
    r.efficiency = exp.samples * r.variance * r.fisher;
    return r;
}

CrbAudit crb_audit(const Scheme& scheme, const std::vector<double>& phis, long samples, std::uint64_t seed,
                   int threads) {
    validate(scheme);
    const double qfi = qfi_scheme(scheme);
    CrbAudit a;
    a.rows.resize(phis.size());
    for (std::size_t i = 0; i < phis.size(); ++i) {
        AuditRow& row = a.rows[i];
        row.phi = phis[i];
        row.fisher = fisher_information(scheme, phis[i]);
        row.qfi = qfi;
        row.violation = row.fisher > qfi + 1e-9 * std::max(1.0, qfi);
        row.saturating = saturates(row.fisher, qfi);
        if (samples > 0) {
            const EmpiricalFisher e = empirical_fisher(scheme, phis[i], samples, derive_seed(seed, i), threads);
            row.empirical = e.value;
            row.stderr_ = e.stderr_;
        }
        a.violations += row.violation;
        a.saturating += row.saturating;
    }
    return a;
}

}  // namespace gaussmetro
