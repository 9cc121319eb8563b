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

#include "gaussmetro/fisher.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "gaussmetro/errors.hpp"

namespace gaussmetro {

namespace {

Mat sym(const Mat& a) { return 0.5 * (a + a.transpose()); }

Mat inverse_of(const Mat& a, const std::string& what) {
    return sym(spd_solve(a, Mat::Identity(a.rows(), a.cols()), what));
}

double trace_prod(const Mat& a, const Mat& b) { return (a.array() * b.transpose().array()).sum(); }

// Coordinates that survive an ideal homodyne projection (all of them otherwise).
std::vector<int> measured_coordinates(int m, const std::optional<Quadrature>& ideal) {
    std::vector<int> idx;
    for (int k = 0; k < 2 * m; ++k)
        if (!ideal || (k % 2 == (*ideal == Quadrature::X ? 0 : 1))) idx.push_back(k);
    return idx;
}

Mat take(const Mat& a, const std::vector<int>& idx) {
    Mat out(idx.size(), idx.size());
    for (size_t i = 0; i < idx.size(); ++i)
        for (size_t j = 0; j < idx.size(); ++j) out(i, j) = a(idx[i], idx[j]);
    return out;
}

Vec take(const Vec& v, const std::vector<int>& idx) {
    Vec out(idx.size());
    for (size_t i = 0; i < idx.size(); ++i) out(i) = v(idx[i]);
    return out;
}

Mat effective_measurement_cov(const GeneraldyneMeasurement& meas) {
    const int m = meas.probe_modes;
    Mat base = (1.0 - meas.eta_eff) * Mat::Identity(2 * m, 2 * m);
    if (!meas.is_ideal()) base += meas.eta_eff * meas.covariance();
    return base;
}

FisherValue finish(double t1, double t2) {
    FisherValue f;
    f.raw = t1 + t2;
    f.value = f.raw;
    if (f.raw < 0.0) {
        const double tol = kClampTol * std::max(1.0, std::abs(t1) + std::abs(t2));
        if (f.raw < -tol) {
            throw NumericalError("Fisher information evaluated to " + std::to_string(f.raw) +
                                 " (mean term " + std::to_string(t1) + ", covariance term " + std::to_string(t2) + ")");
        }
        f.value = 0.0;
        f.clamped = true;
    }
    return f;
}

}  // namespace

FisherValue fisher_general(const ConditionalGaussian& c) {
    const Mat M = effective_inverse(c);
    if (!M.allFinite()) throw NumericalError("outcome covariance is not (pseudo)invertible");
    const double t1 = c.dmean.dot(M * c.dmean);
    const Mat a = M * c.dcov;
    const double t2 = 0.5 * trace_prod(a, a);
    return finish(t1, t2);
}

double fisher_information(const Scheme& s, double phi) { return fisher_general(conditional(s, phi)).value; }

Vec pre_rotation_mean(const GaussianState& state, const PassiveTransform& t) {
    return (t.ls() * state.probe_mean()).head(2);
}

Mat pre_rotation_cov(const GaussianState& state, const PassiveTransform& t) {
    const Mat ls = t.ls();
    return sym(ls * state.probe_cov() * ls.transpose()).topLeftCorner(2, 2);
}

double qfi_isothermal(const GaussianState& state, const PassiveTransform& t) {
    if (!state.thermal_occupation) throw DomainError("closed-form QFI needs an isothermal probe");
    if (t.modes() != state.modes || t.probe_modes != state.probe_modes) throw DimensionError("transform does not match state");
    const double nu = 2.0 * *state.thermal_occupation + 1.0, nu2 = nu * nu;
    const Vec r1 = pre_rotation_mean(state, t);
    const Mat v1 = pre_rotation_cov(state, t);
    return (r1.dot(v1 * r1) + (trace_prod(v1, v1) - 2.0 * nu2) / (1.0 + 1.0 / nu2)) / nu2;
}

double qfi_gaussian(const Vec& d, const Mat& V, const Mat& G) {
    const int n = static_cast<int>(V.rows());
    const Mat dV = sym(G * V + V * G.transpose());
    const Vec dd = G * d;
    const Vec nus = symplectic_eigenvalues(V);
    const double disp = dd.dot(Vec(spd_solve(V, dd, "state covariance")));
    if ((nus.array() - 1.0).abs().maxCoeff() < 1e-8) {
        const Mat a = spd_solve(V, dV, "state covariance");
        return 0.25 * trace_prod(a, a) + disp;
    }
    const Mat J = symplectic_form(n / 2);
    Mat K(n * n, n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) K(i * n + k, j * n + l) = V(i, j) * V(k, l) - J(i, j) * J(k, l);
    Vec v(n * n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) v(i * n + k) = dV(i, k);
    const Mat Ki = pseudo_inverse(K, 1e-12);
    return 0.5 * v.dot(Ki * v) + disp;
}

double qfi_scheme(const Scheme& s) {
    const int n = s.state.modes;
    Vec d = s.transform.L * s.state.mean;
    Mat V = sym(s.transform.L * s.state.cov * s.transform.L.transpose());
    if (s.noise) {
        d *= std::sqrt(s.noise->eta_loss);
        V = s.noise->eta_loss * V + (1.0 - s.noise->eta_loss) * (1.0 + s.noise->n_th) * Mat::Identity(2 * n, 2 * n);
    }
    return qfi_gaussian(d, V, phase_rotation_derivative(0.0, s.generator, n));
}

FisherBreakdown fisher_decomposed(const GaussianState& state, const PassiveTransform& t, double phi,
                                  const GeneraldyneMeasurement& meas) {
    if (!state.thermal_occupation) throw DomainError("decomposition needs an isothermal probe");
    if (meas.is_ideal()) throw DomainError("decomposition needs a finite (invertible) measurement covariance");
    if (t.modes() != state.modes || t.probe_modes != state.probe_modes || meas.probe_modes != state.probe_modes) {
        throw DimensionError("scheme partitions do not match");
    }
    const int n = state.modes, m = state.probe_modes, a = n - m;
    if (a > 0 && max_abs(state.cov.topRightCorner(2 * m, 2 * a)) > 0.0) {
        throw DomainError("decomposition needs a probe uncorrelated with the ancilla");
    }
    const PhaseGenerator gen = PhaseGenerator::mono();
    const double nu = 2.0 * *state.thermal_occupation + 1.0, nu2 = nu * nu;
    const Mat S = full_propagation(t, phi, gen), dS = propagation_derivative(t, phi, gen);
    const Mat ss = S.topLeftCorner(2 * m, 2 * m), dss = dS.topLeftCorner(2 * m, 2 * m);
    const Vec rs = state.probe_mean();
    const Mat vs = state.probe_cov();
    const Mat Sigma = effective_measurement_cov(meas);

    const Mat Y = sym(ss * vs * ss.transpose());
    const Mat dY = sym(dss * vs * ss.transpose() + ss * vs * dss.transpose());
    const Mat iS = inverse_of(Sigma + Y, "probe outcome covariance sigma_S");
    const Vec dmuS = dss * rs;

    FisherBreakdown b;
    b.probe_fisher = dmuS.dot(iS * dmuS) + 0.5 * trace_prod(iS * dY, iS * dY);

    // Measurement term through the Woodbury form Sigma~ = Y^-1 - sigma_S^-1.
    const Mat X = inverse_of(Y, "propagated probe covariance S_S V_S S_S^T");
    b.sigma_tilde = sym(X - iS);
    const Mat dSt = -X * dY * X + iS * dY * iS;
    b.measurement = dmuS.dot(b.sigma_tilde * dmuS) - 0.5 * trace_prod(dSt, dY);

    // Probe QFI and trace corrections.
    b.probe_qfi = qfi_isothermal(state, t);
    const Mat v1 = pre_rotation_cov(state, t);
    Mat p0 = Mat::Zero(2 * m, 2 * m);
    p0.topLeftCorner(2, 2).setIdentity();
    const Mat lsm = t.ls();
    b.residual = nu2 / (1.0 + nu2) * (trace_prod(v1, v1) / (nu2 * nu2) + 2.0) - (p0 * lsm * lsm.transpose()).trace();

    Vec dmu = dmuS;
    Mat dsig = dY;
    Mat sig = Sigma + Y;
    if (a > 0) {
        const Mat ssa = S.topRightCorner(2 * m, 2 * a), dssa = dS.topRightCorner(2 * m, 2 * a);
        const Vec ra = state.ancilla_mean();
        const Mat va = state.ancilla_cov();
        const Mat B = sym(ssa * va * ssa.transpose());
        const Mat dB = sym(dssa * va * ssa.transpose() + ssa * va * dssa.transpose());
        sig += B;
        dsig += dB;
        const Vec da = dssa * ra;
        dmu += da;
        const Mat isig = inverse_of(sig, "outcome covariance sigma");
        b.ancilla_tilde = sym(iS - isig);
        const Mat dVt = -iS * dY * iS + isig * dsig * isig;
        const Mat diS = -iS * dY * iS;
        b.ancilla = 2.0 * dmuS.dot(iS * da) + da.dot(iS * da) - dmu.dot(b.ancilla_tilde * dmu) +
                    0.5 * trace_prod(dVt, dsig) - 0.5 * trace_prod(diS, dB);

        // Interference term.
        const Mat ls = t.ls(), lsa = t.lsa(), las = t.las(), la = t.la();
        const Mat lsi = checked_inverse(ls, "probe block L_S");
        b.schur = la - las * lsi * lsa;
        const Mat delta0 = lsi * lsa * checked_inverse(b.schur, "Schur complement S/S_S") * las * lsi;
        const Mat um = phase_rotation(phi, gen, m), dum = phase_rotation_derivative(phi, gen, m);
        b.delta = delta0 * um.transpose();
        const Mat ddelta = delta0 * dum.transpose();
        const Mat ivs = inverse_of(vs, "probe covariance V_S");
        const Mat sas = S.bottomLeftCorner(2 * a, 2 * m);
        const Mat dT = 2.0 * dss * ivs * b.delta + 2.0 * ss * ivs * ddelta - ddelta.transpose() * ivs * b.delta -
                       b.delta.transpose() * ivs * ddelta;
        const Vec w = dss * rs;
        b.interference = (dss.transpose() * dss * ivs * sas.transpose() * sas * vs).trace() -
                         2.0 * w.dot(ss * ivs * b.delta * w) + w.dot(b.delta.transpose() * ivs * b.delta * w) +
                         0.5 * trace_prod(dT, dY);
    } else {
        b.ancilla_tilde = Mat::Zero(2 * m, 2 * m);
        b.delta = Mat::Zero(2 * m, 2 * m);
        b.schur = Mat(0, 0);
    }

    const Mat isig = inverse_of(sig, "outcome covariance sigma");
    b.total = finish(dmu.dot(isig * dmu), 0.5 * trace_prod(isig * dsig, isig * dsig)).value;
    b.decomposed = b.probe_qfi + b.ancilla + b.interference - b.measurement + b.residual;
    return b;
}

double fisher_coherent_ancilla(const GaussianState& state, const PassiveTransform& t, double phi,
                               const GeneraldyneMeasurement& meas) {
    const int n = state.modes, m = state.probe_modes, a = n - m;
    if (t.modes() != n || t.probe_modes != m || meas.probe_modes != m) throw DimensionError("scheme partitions do not match");
    if (a > 0) {
        if (max_abs(state.ancilla_cov() - Mat::Identity(2 * a, 2 * a)) > 1e-12) {
            throw DomainError("simplified path needs a coherent ancilla (V_A = I)");
        }
        if (max_abs(state.cov.topRightCorner(2 * m, 2 * a)) > 0.0) throw DomainError("probe and ancilla must be uncorrelated");
    }
    const PhaseGenerator gen = PhaseGenerator::mono();
    const Mat S = full_propagation(t, phi, gen), dS = propagation_derivative(t, phi, gen);
    const Mat ss = S.topLeftCorner(2 * m, 2 * m), dss = dS.topLeftCorner(2 * m, 2 * m);
    const Mat vt = state.probe_cov() - Mat::Identity(2 * m, 2 * m);

    ConditionalGaussian c;
    c.ideal = meas.ideal;
    c.mean = Vec::Zero(2 * m);
    const Vec dmuS = dss * state.probe_mean();
    c.cov = sym(effective_measurement_cov(meas) + Mat::Identity(2 * m, 2 * m) + ss * vt * ss.transpose());
    c.dcov = sym(dss * vt * ss.transpose() + ss * vt * dss.transpose());
    Vec da = Vec::Zero(2 * m);
    if (a > 0) da = dS.topRightCorner(2 * m, 2 * a) * state.ancilla_mean();
    const Mat M = effective_inverse(c);
    const double tilde = dmuS.dot(M * dmuS) + 0.5 * trace_prod(M * c.dcov, M * c.dcov);
    return tilde + da.dot(M * da) + 2.0 * dmuS.dot(M * da);
}

double measurement_term(const GaussianState& state, const PassiveTransform& t, const PhaseGenerator& gen,
                        double phi, const GeneraldyneMeasurement& meas) {
    const int n = state.modes;
    if (state.probe_modes != n || t.modes() != n || meas.probe_modes != n) throw DimensionError("no-ancilla scheme expected");
    const Mat S = full_propagation(t, phi, gen), dS = propagation_derivative(t, phi, gen);
    const Mat Y = sym(S * state.cov * S.transpose());
    const Mat dY = sym(dS * state.cov * S.transpose() + S * state.cov * dS.transpose());
    ConditionalGaussian c;
    c.ideal = meas.ideal;
    c.mean = Vec::Zero(2 * n);
    c.cov = sym(effective_measurement_cov(meas) + Y);
    const Mat St = effective_inverse(c);
    const Vec v = phase_projector(phi, gen, n) * t.L * state.mean;
    const Mat jdy = symplectic_form(n) * dY;
    const Mat sdy = St * dY;
    return v.dot(Y * St * Y * v) - 0.5 * trace_prod(sdy, sdy) + (St * Y * jdy * jdy).trace();
}

NoAncillaFisher fisher_no_ancilla(const GaussianState& state, const PassiveTransform& t, double phi,
                                  const GeneraldyneMeasurement& meas) {
    if (state.probe_modes != state.modes) throw DomainError("no-ancilla path needs N = m");
    if (!state.thermal_occupation || *state.thermal_occupation != 0.0) {
        if (isothermal_residual(state.cov, 0.0) > kIsothermalTol) throw DomainError("no-ancilla path needs a pure probe");
    }
    GaussianState pure = state;
    pure.thermal_occupation = 0.0;
    NoAncillaFisher r;
    const Mat v1 = pre_rotation_cov(pure, t);
    r.trace_term = 0.5 * (trace_prod(v1, v1) - 2.0);
    r.qfi = qfi_isothermal(pure, t);
    r.measurement = measurement_term(pure, t, PhaseGenerator::mono(), phi, meas);
    r.value = r.qfi - r.measurement + r.trace_term;
    return r;
}

DecoherentFisher fisher_decoherent(const GaussianState& state, const PassiveTransform& t, double phi,
                                   const GeneraldyneMeasurement& meas, const NoiseModel& noise) {
    noise.validate();
    const int n = state.modes;
    if (state.probe_modes != n) throw DomainError("decoherent path needs N = m");
    const PhaseGenerator gen = PhaseGenerator::mono();
    DecoherentFisher r;
    r.value = fisher_general(apply_noise(state, t, gen, phi, meas, noise)).value;
    r.ideal = fisher_general(outcome_statistics(state, t, gen, phi, meas)).value;
    {
        Scheme s{state, t, gen, meas, noise};
        r.qfi = qfi_scheme(s);
    }

    const double el = noise.eta_loss, ee = noise.eta_eff * meas.eta_eff;
    const double c = 1.0 - ee + (1.0 - el) * (1.0 + noise.n_th);
    const Mat S = full_propagation(t, phi, gen), dS = propagation_derivative(t, phi, gen);
    const Mat Y = sym(S * state.cov * S.transpose());
    const Mat dY = sym(dS * state.cov * S.transpose() + S * state.cov * dS.transpose());
    Mat sd = el * Y;
    if (!meas.is_ideal()) sd += ee * meas.covariance();
    const Mat dsd = el * dY;

    if (el == 0.0) {
        // No signal survives; every secondary term vanishes.
        r.decomposed = 0.0;
        r.substituted = 0.0;
        r.sigma_deco = sd;
        r.Sigma_deco = Mat::Zero(0, 0);
        return r;
    }
    // Work on the measured coordinates; for ideal homodyne this is the
    // invertible block that the pseudoinverse acts on.
    const std::vector<int> idx = measured_coordinates(n, meas.ideal);
    const Mat sdr = take(Mat(sym(sd)), idx), dsdr = take(dsd, idx);
    const Vec dmu = std::sqrt(el) * dS * state.mean;
    const Vec dmur = take(dmu, idx);
    const Mat isd = inverse_of(sdr, "lossy covariance sigma_deco");
    const Mat a0 = isd * dsdr;
    r.substituted = dmur.dot(isd * dmur) + 0.5 * trace_prod(a0, a0);

    const int k = static_cast<int>(idx.size());
    r.sigma_deco = sdr;
    if (c > 0.0) {
        const Mat Sd = sym(sdr * sdr / c + sdr);
        r.Sigma_deco = Sd;
        const Mat iSd = inverse_of(Sd, "thermal-noise matrix Sigma_deco");
        const Mat dSd = (dsdr * sdr + sdr * dsdr) / c + dsdr;
        const Mat diSd = -iSd * dSd * iSd;
        const Vec v = take(Vec(propagation_derivative(t, phi, gen) * state.mean), idx);
        r.decomposed = r.substituted - el * v.dot(iSd * v) + 0.5 * trace_prod(diSd, dsdr);

        if (std::abs(noise.eta_loss - ee) < 1e-15) {
            const double eta = el;
            const Vec vp = take(Vec(phase_projector(phi, gen, n) * t.L * state.mean), idx);
            Mat sig0 = Y;
            if (!meas.is_ideal()) sig0 += meas.covariance();
            const Mat St = inverse_of(take(Mat(sym(sig0)), idx), "noiseless outcome covariance");
            const Mat b0 = St * take(dY, idx);
            r.printed_equal_eta = eta * eta * r.ideal - eta * vp.dot(iSd * vp) + 0.5 * trace_prod(diSd, dsdr) -
                                  (1.0 - eta * eta) * (2.0 + 0.5 * trace_prod(b0, b0));
        }
    } else {
        r.Sigma_deco = Mat::Zero(k, k);
        r.decomposed = r.substituted;
        if (std::abs(noise.eta_loss - ee) < 1e-15) r.printed_equal_eta = r.ideal;
    }
    if (r.printed_equal_eta) {
        r.printed_matches = std::abs(*r.printed_equal_eta - r.value) <= 1e-6 * std::max(1.0, std::abs(r.value));
    }
    return r;
}

}  // namespace gaussmetro
