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

#include "gaussmetro/phase_space.hpp"

#include <cmath>
#include <string>

#include "gaussmetro/errors.hpp"

namespace gaussmetro {

double isothermal_residual(const Mat& probe_cov, double thermal_occupation) {
    const int m = static_cast<int>(probe_cov.rows() / 2);
    const Mat j = symplectic_form(m);
    const double nu = 2.0 * thermal_occupation + 1.0;
    return (probe_cov * j * probe_cov - nu * nu * j).norm() / j.norm();
}

void validate(const GaussianState& s) {
    if (s.modes < 1) throw ValidationError("state needs at least one mode");
    if (s.probe_modes < 1 || s.probe_modes > s.modes) throw ValidationError("probe partition out of range");
    if (s.mean.size() != 2 * s.modes || s.cov.rows() != 2 * s.modes || s.cov.cols() != 2 * s.modes) {
        throw DimensionError("state moments do not match the mode count");
    }
    if (!is_symmetric(s.cov, kSymmetryTol * std::max(1.0, max_abs(s.cov)))) {
        throw ValidationError("covariance is not symmetric");
    }
    const double margin = uncertainty_margin(s.cov);
    if (margin < -kPhysicalityTol * std::max(1.0, max_abs(s.cov))) {
        throw ValidationError("covariance violates the uncertainty relation (min eig of V+iJ = " +
                              std::to_string(margin) + ")");
    }
    if (s.thermal_occupation) {
        if (*s.thermal_occupation < 0) throw DomainError("thermal occupation must be nonnegative");
        const double res = isothermal_residual(s.probe_cov(), *s.thermal_occupation);
        const double nu = 2.0 * *s.thermal_occupation + 1.0;
        if (res > kIsothermalTol * nu * nu) {
            throw ValidationError("probe is declared isothermal but V J V != nu^2 J (residual " +
                                  std::to_string(res) + ")");
        }
    }
}

double photon_number(const GaussianState& s, int mode) {
    if (mode < 0 || mode >= s.modes) throw DimensionError("mode index out of range");
    const double q = s.mean(2 * mode), p = s.mean(2 * mode + 1);
    return (q * q + p * p) / 4.0 + (s.cov(2 * mode, 2 * mode) + s.cov(2 * mode + 1, 2 * mode + 1) - 2.0) / 4.0;
}

double total_photon_number(const GaussianState& s) {
    double n = 0.0;
    for (int k = 0; k < s.modes; ++k) n += photon_number(s, k);
    return n;
}

GaussianState coherent_state(double nbar, int modes) {
    if (nbar < 0) throw DomainError("mean photon number must be nonnegative");
    if (modes < 1) throw DomainError("need at least one mode");
    GaussianState s;
    s.modes = modes;
    s.probe_modes = modes;
    s.mean = Vec::Constant(2 * modes, std::sqrt(2.0 * nbar));
    s.cov = Mat::Identity(2 * modes, 2 * modes);
    s.thermal_occupation = 0.0;
    return s;
}

GaussianState squeezed_array_state(double s1, double s2, int modes, const Vec& mean) {
    if (!(s1 > 0) || !(s2 > 0)) throw DomainError("squeezing factors must be positive");
    if (modes < 1) throw DomainError("need at least one mode");
    if (mean.size() != 2 * modes) throw DimensionError("displacement length must be 2N");
    GaussianState s;
    s.modes = modes;
    s.probe_modes = modes;
    s.mean = mean;
    s.cov = Mat::Zero(2 * modes, 2 * modes);
    s.cov(0, 0) = s1;
    s.cov(1, 1) = 1.0 / s1;
    for (int k = 1; k < modes; ++k) {
        s.cov(2 * k, 2 * k) = s2;
        s.cov(2 * k + 1, 2 * k + 1) = 1.0 / s2;
    }
    s.thermal_occupation = 0.0;
    return s;
}

GaussianState two_mode_squeezed_state(double sq, const Vec& mean) {
    if (sq < 0) throw DomainError("squeezing parameter must be nonnegative");
    if (mean.size() != 4) throw DimensionError("two-mode displacement must have length 4");
    const double c = std::cosh(2.0 * sq), h = std::sinh(2.0 * sq);
    GaussianState s;
    s.modes = 2;
    s.probe_modes = 2;
    s.mean = mean;
    s.cov.resize(4, 4);
    s.cov << c, 0, h, 0,
             0, c, 0, -h,
             h, 0, c, 0,
             0, -h, 0, c;
    s.thermal_occupation = 0.0;
    return s;
}

GaussianState isothermal_state(const Mat& sym, double nt, int m) {
    if (nt < 0) throw DomainError("thermal occupation must be nonnegative");
    if (sym.rows() != 2 * m || sym.cols() != 2 * m) throw DimensionError("symplectic matrix must be 2m x 2m");
    if (!is_symplectic(sym, 1e-10 * std::max(1.0, max_abs(sym) * max_abs(sym)))) {
        throw ValidationError("matrix is not symplectic");
    }
    GaussianState s;
    s.modes = m;
    s.probe_modes = m;
    s.mean = Vec::Zero(2 * m);
    s.cov = (2.0 * nt + 1.0) * sym * sym.transpose();
    s.cov = 0.5 * (s.cov + s.cov.transpose());
    s.thermal_occupation = nt;
    return s;
}

GaussianState combine(const GaussianState& probe, const GaussianState& anc) {
    GaussianState s;
    s.modes = probe.modes + anc.modes;
    s.probe_modes = probe.modes;
    s.mean.resize(2 * s.modes);
    s.mean << probe.mean, anc.mean;
    s.cov = direct_sum(probe.cov, anc.cov);
    if (probe.probe_modes == probe.modes) s.thermal_occupation = probe.thermal_occupation;
    return s;
}

GaussianState with_probe_modes(const GaussianState& state, int m) {
    if (m < 1 || m > state.modes) throw DimensionError("probe partition out of range");
    GaussianState s = state;
    if (m != state.probe_modes) s.thermal_occupation.reset();
    s.probe_modes = m;
    return s;
}

}  // namespace gaussmetro
