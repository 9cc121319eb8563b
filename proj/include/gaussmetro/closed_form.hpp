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

#ifndef GAUSSMETRO_CLOSED_FORM_HPP
#define GAUSSMETRO_CLOSED_FORM_HPP

#include <array>
#include <complex>
#include <optional>

#include "gaussmetro/fisher.hpp"

namespace gaussmetro {

// ---- Uniform interferometer fed by a squeezed array -----------------------
// Mode 1 has squeezing s1, modes 2..N share s2; ideal homodyne on all modes.

/// a_N(x, y) = (N - 1) x + y.
inline double qumi_a(int n, double x, double y) { return (n - 1) * x + y; }

struct QumiIntermediates {
    double a12 = 0, a21 = 0;   // a_N(s1, s2), a_N(s2, s1)
    double d[4] = {0, 0, 0, 0};
    double c[3] = {0, 0, 0};
    Mat omega;                 // 4x4 covariance of the first two modes after S(phi)
    Mat A;                     // 4x4 block of the homodyne pseudoinverse
    double y = 0;              // y_x or y_p
    double f = 0;              // f_N^(x/p)
    Mat W;                     // W_N^(x/p)
    Vec R1;                    // mode-1 mean before the phase shift
    Mat V1;                    // mode-1 covariance before the phase shift
    double qfi = 0;
};

struct QumiClosedForm {
    double value = 0;
    QumiIntermediates parts;
};

QumiIntermediates qumi_intermediates(int n, double s1, double s2, double phi, Quadrature q);
QumiClosedForm fisher_qumi_squeezed(int n, double s1, double s2, const Vec& mean, double phi, Quadrature q);
/// Block form of (pi S V S^T pi)^+ assembled from A and the untouched tail.
Mat qumi_homodyne_inverse(int n, double s1, double s2, double phi, Quadrature q);

struct Quadratic {
    double a = 0, b = 0, c = 0;
};

struct QuadraticRoots {
    std::complex<double> root1, root2;  // ordered by magnitude (root1 smaller)
    bool real = false;
    bool linear = false;                // degenerate leading coefficient
};

QuadraticRoots solve_quadratic(const Quadratic& q);

/// Saturation polynomial in y = sin^2(phi) for x-homodyne at zero displacement.
Quadratic qcrb_coefficients(int n, double s1, double s2);
/// Roots of the saturation polynomial, computed in extended precision.
QuadraticRoots qcrb_roots(int n, double s1, double s2);

// ---- Two-mode squeezed vacuum with a polychromatic phase --------------------

struct PolyIntermediates {
    double F1 = 0, F2 = 0;
    Mat V1, V2, V12;
    Vec R1, R2;
    double qfi = 0;        // printed expression
    double qfi_exact = 0;  // pure-state QFI of the same state and generator
    double enhancement = 0;
};

PolyIntermediates qfi_polychromatic(double sq, const Vec& mean, double tau, double eps);

struct PolyFisher {
    double value = 0;        // direct evaluation
    double printed = 0;      // two-mode no-ancilla expression with the printed QFI
    double rearranged = 0;   // exact rearrangement valid for any displacement
    double measurement = 0;  // measurement term with the polychromatic projector
    std::optional<double> compact;
    PolyIntermediates parts;
};

PolyFisher fisher_polychromatic(double sq, const Vec& mean, double tau, double eps, double phi,
                                const GeneraldyneMeasurement& meas);

/// Compact ideal-homodyne forms, tau = 1/2, zero displacement, eps = +-1 only.
double fpol_compact(double sq, double eps, double phi, Quadrature q);
/// Same expression with the coefficient exactly as printed (differs by a
/// factor 2 on the sinh^2 term and does not match the direct evaluation).
double fpol_compact_printed(double sq, double eps, double phi, Quadrature q);

double fpol_f0(double y, double sq);
double fpol_f1(double phi, double sq);
/// First-order-in-eps saturation condition (left-hand side).
double fpol_condition(double phi, double sq, double eps);
/// Roots of the quadratic factor of f0 in y = cos(4 phi).
std::array<std::complex<double>, 2> fpol_roots(double sq);

// ---- Loss and thermal noise ----------------------------------------------------

/// Printed effective efficiency squared (goes negative for moderate loss).
double eta_tilde_sq_printed(double eta, double n_th);
/// Printed coherent-state decoherent FI.
double fisher_decoherent_printed(double nbar, int n, double eta, double n_th, double phi, Quadrature q);
/// Exact loss factor for coherent input with ideal homodyne.
double decoherence_factor(double eta, double n_th);

// ---- Large-N expansions -----------------------------------------------------------

double qfi_asymptotic(int n, double s1, double s2, double nbar);
/// Leading-order homodyne FI. The printed first denominator carries
/// (1 - s2) instead of (1 - s2^2); printed = true reproduces it verbatim.
double fisher_asymptotic(int n, double s1, double s2, double nbar, double phi, Quadrature q, bool printed = false);

}  // namespace gaussmetro

#endif
