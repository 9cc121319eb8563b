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

#include "gaussmetro/transforms.hpp"

#include <cmath>
#include <complex>

#include "gaussmetro/errors.hpp"

namespace gaussmetro {

PhaseGenerator PhaseGenerator::poly(double eps) {
    if (!(eps >= -1.0 && eps <= 1.0)) throw DomainError("modulation must lie in [-1, 1]");
    PhaseGenerator g;
    g.kind = Kind::Polychromatic;
    g.eps = eps;
    return g;
}

PassiveTransform make_passive(const Mat& L, int m) {
    if (L.rows() != L.cols() || L.rows() % 2 != 0) throw DimensionError("transform must be 2N x 2N");
    const int n = static_cast<int>(L.rows() / 2);
    if (m < 1 || m > n) throw DimensionError("probe partition out of range");
    if (!is_orthogonal(L, kPassiveTol)) throw ValidationError("transform is not orthogonal");
    if (!is_symplectic(L, kPassiveTol)) throw ValidationError("transform is not symplectic");
    return PassiveTransform{L, m};
}

PassiveTransform with_probe_modes(const PassiveTransform& t, int m) {
    if (m < 1 || m > t.modes()) throw DimensionError("probe partition out of range");
    PassiveTransform out = t;
    out.probe_modes = m;
    return out;
}

PassiveTransform identity_transform(int modes) {
    return PassiveTransform{Mat::Identity(2 * modes, 2 * modes), modes};
}

namespace {

void check_generator_size(const PhaseGenerator& gen, int modes) {
    if (modes < 1) throw DimensionError("need at least one mode");
    if (!gen.is_mono() && modes < 2) throw DimensionError("polychromatic generator needs two modes");
}

}  // namespace

Mat phase_rotation(double phi, const PhaseGenerator& gen, int modes) {
    check_generator_size(gen, modes);
    Mat u = Mat::Identity(2 * modes, 2 * modes);
    if (gen.is_mono()) {
        u.topLeftCorner(2, 2) = rotation2(phi);
    } else {
        u.block(0, 0, 2, 2) = rotation2((1.0 + gen.eps) * phi);
        u.block(2, 2, 2, 2) = rotation2((1.0 - gen.eps) * phi);
    }
    return u;
}

Mat phase_projector(double phi, const PhaseGenerator& gen, int modes) {
    check_generator_size(gen, modes);
    Mat p = Mat::Zero(2 * modes, 2 * modes);
    if (gen.is_mono()) {
        p.topLeftCorner(2, 2) = rotation2(phi);
    } else {
        p.block(0, 0, 2, 2) = (1.0 + gen.eps) * rotation2((1.0 + gen.eps) * phi);
        p.block(2, 2, 2, 2) = (1.0 - gen.eps) * rotation2((1.0 - gen.eps) * phi);
    }
    return p;
}

Mat phase_rotation_derivative(double phi, const PhaseGenerator& gen, int modes) {
    return phase_projector(phi, gen, modes) * symplectic_form(modes);
}

PassiveTransform qumi(int n) {
    if (n < 2) throw DomainError("uniform interferometer needs N >= 2");
    Mat o = Mat::Zero(n, n);
    o.row(0).setConstant(1.0 / std::sqrt(static_cast<double>(n)));
    for (int k = 2; k <= n; ++k) {
        const double a = static_cast<double>(n - k + 1), b = static_cast<double>(n - k + 2);
        o(k - 1, k - 2) = -std::sqrt(a / b);
        for (int c = k - 1; c < n; ++c) o(k - 1, c) = 1.0 / std::sqrt(a * b);
    }
    Mat l = Mat::Zero(2 * n, 2 * n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            l(2 * r, 2 * c) = o(r, c);
            l(2 * r + 1, 2 * c + 1) = o(r, c);
        }
    return make_passive(l, n);
}

PassiveTransform beam_splitter(double tau, int i, int j, int n) {
    if (!(tau >= 0.0 && tau <= 1.0)) throw DomainError("transmissivity must lie in [0, 1]");
    if (i < 0 || j < 0 || i >= n || j >= n || i == j) throw DimensionError("invalid beam splitter mode pair");
    Mat l = Mat::Identity(2 * n, 2 * n);
    const double t = std::sqrt(tau), r = std::sqrt(1.0 - tau);
    for (int k = 0; k < 2; ++k) {
        l(2 * i + k, 2 * i + k) = t;
        l(2 * i + k, 2 * j + k) = r;
        l(2 * j + k, 2 * i + k) = -r;
        l(2 * j + k, 2 * j + k) = t;
    }
    return make_passive(l, n);
}

PassiveTransform qumi_sequential(int n) {
    if (n < 2) throw DomainError("uniform interferometer needs N >= 2");
    Mat l = Mat::Identity(2 * n, 2 * n);
    // Product B_{12}(1/N) B_{23}(1/(N-1)) ... B_{N-1,N}(1/2), rightmost first.
    for (int k = 0; k < n - 1; ++k) {
        const double tau = 1.0 / static_cast<double>(n - k);
        l = l * beam_splitter(tau, k, k + 1, n).L;
    }
    return make_passive(l, n);
}

Mat unitary_to_phase_space(const Eigen::MatrixXcd& u) {
    const int n = static_cast<int>(u.rows());
    Mat l(2 * n, 2 * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double x = u(i, j).real(), y = u(i, j).imag();
            l(2 * i, 2 * j) = x;
            l(2 * i, 2 * j + 1) = -y;
            l(2 * i + 1, 2 * j) = y;
            l(2 * i + 1, 2 * j + 1) = x;
        }
    return l;
}

PassiveTransform random_passive(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::MatrixXcd a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = {g(rng), g(rng)};
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
    Eigen::MatrixXcd q = qr.householderQ();
    const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int k = 0; k < n; ++k) {
        const std::complex<double> d = r(k, k);
        if (std::abs(d) > 0) q.col(k) *= d / std::abs(d);
    }
    return make_passive(unitary_to_phase_space(q), n);
}

PassiveTransform random_real_passive(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Mat a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = g(rng);
    Eigen::HouseholderQR<Mat> qr(a);
    Mat q = qr.householderQ();
    const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int k = 0; k < n; ++k)
        if (r(k, k) < 0) q.col(k) *= -1.0;
    return make_passive(unitary_to_phase_space(q.cast<std::complex<double>>()), n);
}

Mat full_propagation(const PassiveTransform& t, double phi, const PhaseGenerator& gen) {
    return phase_rotation(phi, gen, t.modes()) * t.L;
}

Mat propagation_derivative(const PassiveTransform& t, double phi, const PhaseGenerator& gen) {
    return phase_rotation_derivative(phi, gen, t.modes()) * t.L;
}

}  // namespace gaussmetro
