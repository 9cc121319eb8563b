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

#ifndef GAUSSMETRO_LINALG_HPP
#define GAUSSMETRO_LINALG_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace gaussmetro {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

/// J_N: direct sum of N copies of [[0,1],[-1,0]].
Mat symplectic_form(int modes);

/// 2x2 rotation [[cos, sin], [-sin, cos]].
Mat rotation2(double phi);

Mat direct_sum(const Mat& a, const Mat& b);
Mat direct_sum(const std::vector<Mat>& blocks);

/// Moore-Penrose inverse. Singular values below s_max * rows * eps count as
/// zero.
Mat pseudo_inverse(const Mat& a);
/// Same with singular values below rtol * s_max discarded.
Mat pseudo_inverse(const Mat& a, double rtol);

/// Inverse through an LU factorization; throws NumericalError naming `what`
/// when the matrix is singular to working precision.
Mat checked_inverse(const Mat& a, const std::string& what);

/// Solve a x = b with a symmetric positive definite a (LDLT, falls back to LU).
Mat spd_solve(const Mat& a, const Mat& b, const std::string& what);

double max_abs(const Mat& a);
bool is_symmetric(const Mat& a, double tol);
bool is_orthogonal(const Mat& a, double tol);
bool is_symplectic(const Mat& a, double tol);

/// Symplectic eigenvalues of a 2N x 2N covariance, ascending.
Vec symplectic_eigenvalues(const Mat& cov);

/// Smallest eigenvalue of the Hermitian matrix V + iJ (physicality test).
double uncertainty_margin(const Mat& cov);

/// |a-b| / max(1, |b|): relative for large values, absolute near zero.
double rel_diff(double a, double b);

/// |a-b| / |b|, or |a-b| when b == 0.
double rel_err(double a, double b);

}  // namespace gaussmetro

#endif
