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

#include "gaussmetro/measurement.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "gaussmetro/errors.hpp"

namespace gaussmetro {

std::string to_string(Quadrature q) { return q == Quadrature::X ? "x" : "p"; }

Quadrature parse_quadrature(const std::string& s) {
    if (s == "x" || s == "X" || s == "q") return Quadrature::X;
    if (s == "p" || s == "P") return Quadrature::P;
    throw DomainError("unknown quadrature '" + s + "'");
}

namespace {

Mat quadrature_projector(int m, Quadrature q) {
    Mat p = Mat::Zero(2 * m, 2 * m);
    const int off = q == Quadrature::X ? 0 : 1;
    for (int k = 0; k < m; ++k) p(2 * k + off, 2 * k + off) = 1.0;
    return p;
}

Mat symmetrize(const Mat& a) { return 0.5 * (a + a.transpose()); }

}  // namespace

GeneraldyneMeasurement GeneraldyneMeasurement::general(const Mat& K, const std::vector<double>& r) {
    GeneraldyneMeasurement g;
    g.probe_modes = static_cast<int>(r.size());
    g.K = K;
    g.r = r;
    g.validate();
    return g;
}

GeneraldyneMeasurement GeneraldyneMeasurement::diagonal(const std::vector<double>& r) {
    const int m = static_cast<int>(r.size());
    return general(Mat::Identity(2 * m, 2 * m), r);
}

GeneraldyneMeasurement GeneraldyneMeasurement::homodyne(int m, Quadrature q) {
    if (m < 1) throw DimensionError("measurement needs at least one mode");
    GeneraldyneMeasurement g;
    g.probe_modes = m;
    g.K = Mat::Identity(2 * m, 2 * m);
    g.ideal = q;
    return g;
}

void GeneraldyneMeasurement::validate() const {
    if (probe_modes < 1) throw DimensionError("measurement needs at least one mode");
    if (!(eta_eff >= 0.0 && eta_eff <= 1.0)) throw DomainError("detector efficiency must lie in [0, 1]");
    if (K.rows() != 2 * probe_modes || K.cols() != 2 * probe_modes) throw DimensionError("measurement K must be 2m x 2m");
    if (!is_orthogonal(K, kPassiveTol) || !is_symplectic(K, kPassiveTol)) {
        throw ValidationError("measurement K must be orthogonal symplectic");
    }
    if (!ideal) {
        if (static_cast<int>(r.size()) != probe_modes) throw DimensionError("need one squeezing value per probe mode");
        for (double x : r)
            if (!(x > 0) || !std::isfinite(x)) throw DomainError("measurement squeezing must be positive");
    }
}

Mat GeneraldyneMeasurement::covariance() const {
    if (ideal) throw DomainError("ideal homodyne has no finite covariance");
    Mat d = Mat::Zero(2 * probe_modes, 2 * probe_modes);
    for (int k = 0; k < probe_modes; ++k) {
        d(2 * k, 2 * k) = r[k];
        d(2 * k + 1, 2 * k + 1) = 1.0 / r[k];
    }
    return symmetrize(K * d * K.transpose());
}

Mat GeneraldyneMeasurement::projector() const {
    if (!ideal) throw DomainError("finite measurement has no projector");
    return quadrature_projector(probe_modes, *ideal);
}

Mat ConditionalGaussian::projector() const {
    if (!ideal) throw DomainError("finite measurement has no projector");
    return quadrature_projector(dim() / 2, *ideal);
}

void NoiseModel::validate() const {
    if (!(eta_loss >= 0.0 && eta_loss <= 1.0)) throw DomainError("eta_loss must lie in [0, 1]");
    if (!(eta_eff >= 0.0 && eta_eff <= 1.0)) throw DomainError("eta_eff must lie in [0, 1]");
    if (!(n_th >= 0.0)) throw DomainError("thermal occupation must be nonnegative");
}

namespace {

void check_compatible(const GaussianState& state, const PassiveTransform& t, const GeneraldyneMeasurement& meas) {
    if (t.modes() != state.modes) throw DimensionError("transform and state mode counts differ");
    if (t.probe_modes != state.probe_modes) throw DimensionError("transform and state partitions differ");
    if (meas.probe_modes != state.probe_modes) throw DimensionError("measurement must act on the probe modes");
}

// Shared assembly: signal moments with loss factor applied, and the
// measurement/noise covariance added on top.
ConditionalGaussian assemble(const GaussianState& state, const PassiveTransform& t, const PhaseGenerator& gen,
                             double phi, const GeneraldyneMeasurement& meas, double eta_loss, double eta_eff,
                             double white) {
    check_compatible(state, t, meas);
    const int m = state.probe_modes, a = state.modes - m;
    const Mat S = full_propagation(t, phi, gen);
    const Mat dS = propagation_derivative(t, phi, gen);
    const Mat ss = S.topLeftCorner(2 * m, 2 * m), dss = dS.topLeftCorner(2 * m, 2 * m);
    const Vec rs = state.probe_mean();
    const Mat vs = state.probe_cov();
    const double amp = std::sqrt(eta_loss);

    ConditionalGaussian c;
    c.ideal = meas.ideal;
    c.probe_mean = amp * ss * rs;
    c.dprobe_mean = amp * dss * rs;
    Mat y = eta_loss * ss * vs * ss.transpose();
    Mat dy = eta_loss * (dss * vs * ss.transpose() + ss * vs * dss.transpose());
    Mat base = white * Mat::Identity(2 * m, 2 * m);
    if (!meas.ideal) base += eta_eff * meas.covariance();
    c.probe_cov = symmetrize(base + y);
    c.dprobe_cov = symmetrize(dy);
    c.mean = c.probe_mean;
    c.dmean = c.dprobe_mean;
    c.cov = c.probe_cov;
    c.dcov = c.dprobe_cov;
    if (a > 0) {
        const Mat ssa = S.topRightCorner(2 * m, 2 * a), dssa = dS.topRightCorner(2 * m, 2 * a);
        const Vec ra = state.ancilla_mean();
        const Mat va = state.ancilla_cov();
        const Mat vsa = state.cov.topRightCorner(2 * m, 2 * a);
        c.mean += amp * ssa * ra;
        c.dmean += amp * dssa * ra;
        // Full signal covariance including any probe/ancilla correlations.
        Mat cross = ss * vsa * ssa.transpose();
        Mat dcross = dss * vsa * ssa.transpose() + ss * vsa * dssa.transpose();
        c.cov += eta_loss * symmetrize(ssa * va * ssa.transpose() + cross + cross.transpose());
        c.dcov += eta_loss * symmetrize(dssa * va * ssa.transpose() + ssa * va * dssa.transpose() + dcross +
                                        dcross.transpose());
    }
    return c;
}

}  // namespace

ConditionalGaussian outcome_statistics(const GaussianState& state, const PassiveTransform& t,
                                       const PhaseGenerator& gen, double phi,
                                       const GeneraldyneMeasurement& meas) {
    const double e = meas.eta_eff;
    return assemble(state, t, gen, phi, meas, 1.0, e, 1.0 - e);
}

ConditionalGaussian apply_noise(const GaussianState& state, const PassiveTransform& t, const PhaseGenerator& gen,
                                double phi, const GeneraldyneMeasurement& meas, const NoiseModel& noise) {
    noise.validate();
    NoiseModel n = noise;
    n.eta_eff *= meas.eta_eff;
    return assemble(state, t, gen, phi, meas, n.eta_loss, n.eta_eff, n.added_noise());
}

Mat homodyne_effective_inverse(const ConditionalGaussian& cond) {
    if (!cond.ideal) throw DomainError("pseudoinverse path is reserved for ideal homodyne; invert sigma directly");
    // pi sigma pi is the measured block padded with zeros, and the
    // pseudoinverse of a padded block is the padded pseudoinverse.
    const int n = cond.dim(), m = n / 2;
    const int off = *cond.ideal == Quadrature::X ? 0 : 1;
    Mat block(m, m);
    for (int i = 0; i < m; ++i)
        for (int k = 0; k < m; ++k) block(i, k) = cond.cov(2 * i + off, 2 * k + off);
    const Mat binv = pseudo_inverse(block, n * std::numeric_limits<double>::epsilon());
    Mat out = Mat::Zero(n, n);
    for (int i = 0; i < m; ++i)
        for (int k = 0; k < m; ++k) out(2 * i + off, 2 * k + off) = binv(i, k);
    return symmetrize(out);
}

Mat effective_inverse(const ConditionalGaussian& cond) {
    if (cond.ideal) return homodyne_effective_inverse(cond);
    const int n = cond.dim();
    return symmetrize(spd_solve(cond.cov, Mat::Identity(n, n), "outcome covariance sigma"));
}

Mat sample_outcome(const ConditionalGaussian& cond, int count, std::uint64_t seed) {
    if (count < 0) throw DomainError("sample count must be nonnegative");
    const int n = cond.dim();
    Mat cov = cond.cov;
    Vec mean = cond.mean;
    if (cond.ideal) {
        const Mat p = cond.projector();
        cov = p * cov * p;
        mean = p * mean;
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(symmetrize(cov));
    if (es.info() != Eigen::Success) throw NumericalError("eigendecomposition of sigma failed");
    const Vec ev = es.eigenvalues();
    const double top = std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
    const double cutoff = top * n * std::numeric_limits<double>::epsilon();
    if (ev.minCoeff() < -std::max(1e-10, 1e3 * cutoff)) throw NumericalError("sigma is indefinite; cannot sample");
    Mat factor = Mat::Zero(n, n);
    for (int k = 0; k < n; ++k)
        if (ev(k) > cutoff) factor.col(k) = es.eigenvectors().col(k) * std::sqrt(ev(k));
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    Mat out(count, n);
    Vec z(n);
    for (int i = 0; i < count; ++i) {
        for (int k = 0; k < n; ++k) z(k) = g(rng);
        out.row(i) = (mean + factor * z).transpose();
    }
    return out;
}

void validate(const Scheme& s) {
    validate(s.state);
    s.measurement.validate();
    check_compatible(s.state, s.transform, s.measurement);
    if (s.noise) s.noise->validate();
}

ConditionalGaussian conditional(const Scheme& s, double phi) {
    if (s.noise) return apply_noise(s.state, s.transform, s.generator, phi, s.measurement, *s.noise);
    return outcome_statistics(s.state, s.transform, s.generator, phi, s.measurement);
}

}  // namespace gaussmetro
