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

#include "gaussmetro/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "gaussmetro/errors.hpp"

namespace gaussmetro {

Mat symplectic_form(int modes) {
    Mat j = Mat::Zero(2 * modes, 2 * modes);
    for (int k = 0; k < modes; ++k) {
        j(2 * k, 2 * k + 1) = 1.0;
        j(2 * k + 1, 2 * k) = -1.0;
    }
    return j;
}

Mat rotation2(double phi) {
    Mat u(2, 2);
    const double c = std::cos(phi), s = std::sin(phi);
    u << c, s, -s, c;
    return u;
}

Mat direct_sum(const Mat& a, const Mat& b) {
    Mat out = Mat::Zero(a.rows() + b.rows(), a.cols() + b.cols());
    out.topLeftCorner(a.rows(), a.cols()) = a;
    out.bottomRightCorner(b.rows(), b.cols()) = b;
    return out;
}

Mat direct_sum(const std::vector<Mat>& blocks) {
    Eigen::Index rows = 0, cols = 0;
    for (const auto& b : blocks) {
        rows += b.rows();
        cols += b.cols();
    }
    Mat out = Mat::Zero(rows, cols);
    Eigen::Index r = 0, c = 0;
    for (const auto& b : blocks) {
        out.block(r, c, b.rows(), b.cols()) = b;
        r += b.rows();
        c += b.cols();
    }
    return out;
}

Mat pseudo_inverse(const Mat& a, double rtol) {
    if (a.size() == 0) return Mat(a.cols(), a.rows());
    Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vec& s = svd.singularValues();
    const double tol = s(0) * rtol;
    Vec inv = Vec::Zero(s.size());
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s(i) > tol) inv(i) = 1.0 / s(i);
    }
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

Mat pseudo_inverse(const Mat& a) {
    return pseudo_inverse(a, static_cast<double>(std::max(a.rows(), a.cols())) *
                                 std::numeric_limits<double>::epsilon());
}

Mat checked_inverse(const Mat& a, const std::string& what) {
    if (a.rows() != a.cols()) throw DimensionError(what + ": matrix is not square");
    if (a.size() == 0) return a;
    Eigen::FullPivLU<Mat> lu(a);
    if (!lu.isInvertible()) throw NumericalError(what + " is singular");
    Mat inv = lu.inverse();
    if (!inv.allFinite()) throw NumericalError(what + " has a non-finite inverse");
    return inv;
}

Mat spd_solve(const Mat& a, const Mat& b, const std::string& what) {
    Eigen::LDLT<Mat> ldlt(a);
    if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
        Mat x = ldlt.solve(b);
        if (x.allFinite()) return x;
    }
    Eigen::FullPivLU<Mat> lu(a);
    if (!lu.isInvertible()) throw NumericalError(what + " is singular");
    return lu.solve(b);
}

double max_abs(const Mat& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

bool is_symmetric(const Mat& a, double tol) {
    return a.rows() == a.cols() && max_abs(a - a.transpose()) <= tol;
}

bool is_orthogonal(const Mat& a, double tol) {
    return a.rows() == a.cols() && max_abs(a * a.transpose() - Mat::Identity(a.rows(), a.rows())) <= tol;
}

bool is_symplectic(const Mat& a, double tol) {
    if (a.rows() != a.cols() || a.rows() % 2 != 0) return false;
    const Mat j = symplectic_form(static_cast<int>(a.rows() / 2));
    return max_abs(a * j * a.transpose() - j) <= tol;
}

Vec symplectic_eigenvalues(const Mat& cov) {
    const int n = static_cast<int>(cov.rows() / 2);
    // Eigenvalues of i J V come in pairs +-nu.
    const Mat jv = symplectic_form(n) * cov;
    Eigen::EigenSolver<Mat> es(jv, false);
    std::vector<double> mags;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) mags.push_back(std::abs(es.eigenvalues()(i)));
    std::sort(mags.begin(), mags.end());
    Vec out(n);
    for (int k = 0; k < n; ++k) out(k) = 0.5 * (mags[2 * k] + mags[2 * k + 1]);
    return out;
}

double uncertainty_margin(const Mat& cov) {
    const int n = static_cast<int>(cov.rows() / 2);
    Eigen::MatrixXcd h = cov.cast<std::complex<double>>();
    h += std::complex<double>(0.0, 1.0) * symplectic_form(n).cast<std::complex<double>>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

double rel_diff(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

double rel_err(double a, double b) { return b == 0.0 ? std::abs(a - b) : std::abs(a - b) / std::abs(b); }

}  // namespace gaussmetro
