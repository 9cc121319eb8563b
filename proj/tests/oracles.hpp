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

// Reference computations for the tests. Built directly from the moments of
// the propagated state with Eigen only; none of these call the library's
// Fisher or QFI code.

#ifndef GAUSSMETRO_TESTS_ORACLES_HPP
#define GAUSSMETRO_TESTS_ORACLES_HPP

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <vector>

namespace oracle {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

inline Mat rot(double phi) {
    Mat u(2, 2);
    u << std::cos(phi), std::sin(phi), -std::sin(phi), std::cos(phi);
    return u;
}

/// Phase rotation on mode 1, or the weighted pair on modes 1 and 2.
inline Mat phase(double phi, int modes, bool poly = false, double eps = 0) {
    Mat u = Mat::Identity(2 * modes, 2 * modes);
    if (poly) {
        u.block(0, 0, 2, 2) = rot((1 + eps) * phi);
        u.block(2, 2, 2, 2) = rot((1 - eps) * phi);
    } else {
        u.block(0, 0, 2, 2) = rot(phi);
    }
    return u;
}

struct Moments {
    Vec mean;
    Mat cov;
};

/// Outcome moments on the first m modes for a finite measurement with
/// covariance meas_cov (2m x 2m), or for ideal homodyne of x (quad 0) or p
/// (quad 1) when meas_cov is empty.
inline Moments outcome(const Vec& mean, const Mat& cov, const Mat& L, double phi, int m, const Mat& meas_cov,
                       int quad = 0, bool poly = false, double eps = 0) {
    const int n = static_cast<int>(L.rows() / 2);
    const Mat s = phase(phi, n, poly, eps) * L;
    const Vec d = (s * mean).head(2 * m);
    const Mat v = (s * cov * s.transpose()).topLeftCorner(2 * m, 2 * m);
    if (meas_cov.size() > 0) return {d, v + meas_cov};
    Moments r{Vec(m), Mat(m, m)};
    for (int i = 0; i < m; ++i) {
        r.mean(i) = d(2 * i + quad);
        for (int j = 0; j < m; ++j) r.cov(i, j) = v(2 * i + quad, 2 * j + quad);
    }
    return r;
}

/// Bhattacharyya distance between two Gaussians.
inline double bhattacharyya(const Moments& a, const Moments& b) {
    const Mat avg = 0.5 * (a.cov + b.cov);
    const Vec dm = a.mean - b.mean;
    const double quad = dm.dot(avg.ldlt().solve(dm)) / 8;
    const double logdet = std::log(avg.determinant()) -
                          0.5 * (std::log(a.cov.determinant()) + std::log(b.cov.determinant()));
    return quad + 0.5 * logdet;
}

/// Classical Fisher information from the Bhattacharyya distance between
/// outcome distributions at phi - h and phi + h: D_B ~ F (2h)^2 / 8.
template <class Outcome>
double fisher_from_distance(Outcome&& at, double phi, double h = 1e-4) {
    return 8 * bhattacharyya(at(phi - h), at(phi + h)) / (4 * h * h);
}

/// Overlap Tr(rho1 rho2) of two pure Gaussian states (vacuum covariance I).
inline double overlap(const Vec& d1, const Mat& v1, const Vec& d2, const Mat& v2) {
    const int n = static_cast<int>(v1.rows() / 2);
    const Mat sum = v1 + v2;
    const Vec dd = d1 - d2;
    return std::pow(2.0, n) / std::sqrt(sum.determinant()) * std::exp(-0.5 * dd.dot(sum.ldlt().solve(dd)));
}

/// Pure-state QFI from the overlap of the states at phi - h and phi + h:
/// overlap ~ 1 - QFI h^2.
inline double qfi_from_overlap(const Vec& mean, const Mat& cov, const Mat& L, double phi, bool poly = false,
                               double eps = 0, double h = 1e-3) {
    const int n = static_cast<int>(L.rows() / 2);
    const Mat a = phase(phi - h, n, poly, eps) * L, b = phase(phi + h, n, poly, eps) * L;
    const double ov = overlap(a * mean, a * cov * a.transpose(), b * mean, b * cov * b.transpose());
    return (1 - ov) / (h * h);
}

/// 4 Var(n_1) for a pure Gaussian state with mode-1 moments (d, V).
inline double four_var_n1(const Vec& d, const Mat& v) {
    const double var = (v * v).trace() / 8 + d.dot(v * d) / 4 - 0.25;
    return 4 * var;
}

/// Haar orthogonal n x n matrix.
inline Mat haar_orthogonal(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Mat a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = g(rng);
    Eigen::HouseholderQR<Mat> qr(a);
    Mat q = qr.householderQ();
    for (int k = 0; k < n; ++k)
        if (qr.matrixQR()(k, k) < 0) q.col(k) *= -1;
    return q;
}

/// Passive phase-space matrix of a random unitary X + iY: built directly in
/// the (q1,p1,...) ordering as [[X, Y], [-Y, X]] per mode pair.
inline Mat random_passive(int n, std::mt19937_64& rng) {
    const Mat o = haar_orthogonal(2 * n, rng);
    // Project onto the unitary group through the complex polar factor.
    Eigen::MatrixXcd u(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) u(i, j) = {o(i, j), o(i + n, j)};
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(u, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::MatrixXcd w = svd.matrixU() * svd.matrixV().adjoint();
    Mat l(2 * n, 2 * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double x = w(i, j).real(), y = w(i, j).imag();
            l(2 * i, 2 * j) = x;
            l(2 * i, 2 * j + 1) = -y;
            l(2 * i + 1, 2 * j) = y;
            l(2 * i + 1, 2 * j + 1) = x;
        }
    return l;
}

inline Mat symplectic_form(int n) {
    Mat j = Mat::Zero(2 * n, 2 * n);
    for (int k = 0; k < n; ++k) {
        j(2 * k, 2 * k + 1) = 1;
        j(2 * k + 1, 2 * k) = -1;
    }
    return j;
}

/// Random pure-state symplectic O1 diag(e^r, e^-r) O2 with passive O's.
inline Mat random_symplectic(int n, std::mt19937_64& rng, double r_max = 0.6) {
    std::uniform_real_distribution<double> u(-r_max, r_max);
    Mat d = Mat::Zero(2 * n, 2 * n);
    for (int k = 0; k < n; ++k) {
        const double r = u(rng);
        d(2 * k, 2 * k) = std::exp(r);
        d(2 * k + 1, 2 * k + 1) = std::exp(-r);
    }
    return random_passive(n, rng) * d * random_passive(n, rng);
}

}  // namespace oracle

#endif
