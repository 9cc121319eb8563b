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

#include <cmath>
#include <limits>

#include "gaussmetro/closed_form.hpp"
#include "gaussmetro/errors.hpp"

namespace gaussmetro {

namespace {

double sq(double x) { return x * x; }

void check_qumi_args(int n, double s1, double s2) {
    if (n < 2) throw DomainError("uniform interferometer needs N >= 2");
    if (!(s1 > 0) || !(s2 > 0)) throw DomainError("squeezing factors must be positive");
}

void check_denominator(double y, const char* name) {
    if (!(y > std::numeric_limits<double>::min())) {
        throw NumericalError(std::string("closed-form denominator ") + name + " underflows");
    }
}

// Position-quadrature auxiliary function.
double f_x(int n, double phi, double s1, double s2, double yx) {
    const double N = n;
    const double y = sq(std::sin(phi)), c2p = std::cos(2 * phi);
    const double t =
        (N - 1) * s1 * std::pow(s2, 5) * (N * N * s1 * s1 + 1) +
        2 * std::pow(s2, 4) * (s1 * s1 * (N * N * ((N - 1) * N + 1) * s1 * s1 - N * (N + 3) + 2) + 1) -
        2 * sq(N - 1) * s1 * s1 * s2 * s2 * ((2 * N * N + N - 2) * s1 * s1 - 6) + 2 * std::pow(N - 1, 4) * std::pow(s1, 4) +
        (N - 1) * s1 * std::pow(s2, 3) * (s1 * s1 * (N * (N * (s1 * s1 - 7) - 6) + 6) + 8) +
        c2p * (N * s1 * (s2 - 1) + s1 - s2) *
            (2 * s2 * s2 * (((N - 1) * N + 1) * s1 * s1 - 1) + (N - 1) * s1 * (s1 * s1 - 4) * s2 -
             2 * sq(N - 1) * s1 * s1 + (N - 1) * s1 * std::pow(s2, 3)) *
            (s1 * (N * s2 + N - 1) + s2) +
        std::pow(N - 1, 3) * std::pow(s1, 3) * (s1 * s1 + 8) * s2;
    return t * y / (2 * yx * yx);
}

// Momentum-quadrature auxiliary function.
double f_p(int n, double phi, double s1, double s2, double yp) {
    const double N = n;
    const double y = sq(std::sin(phi)), c2p = std::cos(2 * phi);
    const double d = s1 - s2;
    const double t =
        2 * std::pow(N, 4) * s1 * s2 * sq(s2 * s2 - 1) +
        std::pow(N, 3) * d * (8 * s1 * std::pow(s2, 4) - 7 * s1 * s2 * s2 + s1 - std::pow(s2, 3) - s2) +
        c2p * (N * (s2 - 1) + s1 - s2) * ((N - 1) * s2 + N + s1) *
            (2 * s1 * s2 * (-N * N + N + s1 * s1 - 1) + (N - 1) * (4 * s1 * s1 - 1) * s2 * s2 + (1 - N) * s1 * s1 +
             2 * sq(N - 1) * s1 * std::pow(s2, 3)) +
        N * N * d * d * (12 * s1 * std::pow(s2, 3) - 2 * s1 * s2 - 3 * s2 * s2 - 1) +
        N * std::pow(d, 3) * (8 * s1 * s2 * s2 + s1 - 3 * s2) + std::pow(d, 4) * (2 * s1 * s2 - 1);
    return t * y / (2 * s1 * s2 * yp * yp);
}

}  // namespace

QumiIntermediates qumi_intermediates(int n, double s1, double s2, double phi, Quadrature q) {
    check_qumi_args(n, s1, s2);
    const double N = n, p = s1 * s2, c = std::cos(phi), s = std::sin(phi);
    QumiIntermediates r;
    r.a12 = qumi_a(n, s1, s2);
    r.a21 = qumi_a(n, s2, s1);
    const double a12 = r.a12, a21 = r.a21;
    double* d = r.d;
    double* k = r.c;
    d[0] = (p * a21 * c * c + a12 * s * s) / (p * N);
    d[1] = (a12 * c * c + p * a21 * s * s) / (p * N);
    d[2] = a12 / N;
    d[3] = a21 / (p * N);
    k[0] = (a12 - p * a21) / (2 * p * N) * std::sin(2 * phi);
    k[1] = (s2 - s1) * std::sqrt(N - 1) / N * c;
    k[2] = (s1 - s2) * std::sqrt(N - 1) / N * s;
    r.omega.resize(4, 4);
    r.omega << d[0], k[0], k[1], k[2] / p,
               k[0], d[1], k[2], -k[1] / p,
               k[1], k[2], d[2], 0,
               k[2] / p, -k[1] / p, 0, d[3];
    r.A = Mat::Zero(4, 4);
    r.W.resize(2, 2);
    if (q == Quadrature::X) {
        const double D = d[0] * d[2] - k[1] * k[1];
        check_denominator(std::abs(D), "d1 d3 - c2^2");
        r.A(0, 0) = d[2] / D;
        r.A(0, 2) = r.A(2, 0) = -k[1] / D;
        r.A(2, 2) = d[0] / D;
        r.y = sq(N * p * c) + sq(a12 * s);
        check_denominator(r.y, "y_x");
        r.f = f_x(n, phi, s1, s2, r.y);
        const double a = a12;
        r.W(0, 0) = -N * p * a * s * s / r.y + (s1 - s2) / N + s2;
        r.W(1, 1) = std::pow(a, 3) * s * s / (N * p * r.y);
        r.W(0, 1) = r.W(1, 0) = N * p * a * std::sin(2 * phi) / (2 * r.y);
    } else {
        const double D = d[1] * d[3] * p * p - k[1] * k[1];
        check_denominator(std::abs(D), "d2 d4 p^2 - c2^2");
        r.A(1, 1) = d[3] * p * p / D;
        r.A(1, 3) = r.A(3, 1) = k[1] * p / D;
        r.A(3, 3) = d[1] * p * p / D;
        r.y = sq(N * c) + sq(a21 * s);
        check_denominator(r.y, "y_p");
        r.f = f_p(n, phi, s1, s2, r.y);
        const double a = a21;
        r.W(0, 0) = std::pow(a, 3) * s * s / (N * r.y);
        r.W(1, 1) = -N * a * s * s / r.y + (1 / s1 - 1 / s2) / N + 1 / s2;
        r.W(0, 1) = r.W(1, 0) = -N * a * std::sin(2 * phi) / (2 * r.y);
    }
    r.V1 = Mat::Zero(2, 2);
    r.V1(0, 0) = a21 / N;
    r.V1(1, 1) = a12 / (p * N);
    return r;
}

QumiClosedForm fisher_qumi_squeezed(int n, double s1, double s2, const Vec& mean, double phi, Quadrature q) {
    if (mean.size() != 2 * n) throw DimensionError("displacement length must be 2N");
    QumiClosedForm out;
    QumiIntermediates& r = out.parts;
    r = qumi_intermediates(n, s1, s2, phi, q);
    r.R1 = (qumi(n).L * mean).head(2);
    const double N = n, p = s1 * s2;
    const double tr = r.V1.squaredNorm();
    r.qfi = r.R1.dot(r.V1 * r.R1) + 0.5 * (tr - 2);
    out.value = r.qfi - (sq(r.a21) + sq(r.a12 / p) - 2 * N * N) / (2 * N * N) + r.f - r.R1.dot(r.W * r.R1);
    return out;
}

Mat qumi_homodyne_inverse(int n, double s1, double s2, double phi, Quadrature q) {
    const QumiIntermediates r = qumi_intermediates(n, s1, s2, phi, q);
    Mat out = Mat::Zero(2 * n, 2 * n);
    out.topLeftCorner(4, 4) = r.A;
    for (int k = 2; k < n; ++k) {
        if (q == Quadrature::X) out(2 * k, 2 * k) = 1.0 / s2;
        else out(2 * k + 1, 2 * k + 1) = s2;
    }
    return out;
}

namespace {

template <class T>
QuadraticRoots solve_quadratic_t(T a, T b, T c) {
    using std::abs;
    QuadraticRoots r;
    const T scale = std::max({abs(a), abs(b), abs(c)});
    if (scale == 0) throw NumericalError("quadratic has all-zero coefficients");
    if (abs(a) <= T(1e-14) * scale) {
        if (b == 0) throw NumericalError("degenerate quadratic without a root");
        r.linear = true;
        r.real = true;
        r.root1 = r.root2 = static_cast<double>(-c / b);
        return r;
    }
    const T disc = b * b - 4 * a * c;
    const std::complex<T> sd = std::sqrt(std::complex<T>(disc, 0));
    const T sgn = b >= 0 ? 1 : -1;
    const std::complex<T> big = T(-0.5) * (std::complex<T>(b) + sgn * sd);
    std::complex<T> x1 = big / a;
    std::complex<T> x2 = big == std::complex<T>(0) ? x1 : std::complex<T>(c) / big;
    if (abs(x2) < abs(x1)) std::swap(x1, x2);
    r.root1 = std::complex<double>(x1);
    r.root2 = std::complex<double>(x2);
    r.real = disc >= 0;
    return r;
}

template <class T>
void qcrb_coefficients_t(int n, T s1, T s2, T& a, T& b, T& c) {
    using std::pow;
    auto sq = [](T x) { return x * x; };
    const T N = n;
    const T K = 2 * N * N - sq((N - 1) / s2 + 1 / s1) - sq((N - 1) * s2 + s1);
    a = -2 * N * N * s1 * s1 * s2 * s2 * sq((N - 1) * s1 + s2) * K -
        2 * N * N * (N * s1 * (s2 - 1) + s1 - s2) *
            (2 * s2 * s2 * (((N - 1) * N + 1) * s1 * s1 - 1) + (N - 1) * s1 * (s1 * s1 - 4) * s2 -
             2 * sq(N - 1) * s1 * s1 + (N - 1) * s1 * pow(s2, 3)) *
            (s1 * (N * s2 + N - 1) + s2) +
        pow((N - 1) * s1 + s2, 4) * K + pow(N, 4) * pow(s1 * s2, 4) * K;
    b = 2 * N * N *
        (sq(N - 1) * s1 * s1 * pow(s2, 6) * (N * N * s1 * s1 - 1) -
         (N - 1) * s1 * pow(s2, 3) * (2 * N * N * s1 * s1 + sq(N - 2) * pow(s1, 4) - 4) -
         sq(N - 1) * s1 * s1 * s2 * s2 * (N * N * s1 * s1 + pow(s1, 4) - 6) +
         pow(s2, 4) * (N * N * pow(s1, 6) - N * N * s1 * s1 - (N * (N * ((N - 2) * N + 8) - 12) + 6) * pow(s1, 4) + 1) +
         pow(N - 1, 4) * pow(s1, 4) + 4 * pow(N - 1, 3) * pow(s1, 3) * s2 +
         (N - 1) * pow(s1, 3) * pow(s2, 5) * (N * (N * (2 * s1 * s1 - 1) + 4) - 4));
    c = pow(N, 4) * pow(s1 * s2, 4) * K;
}

}  // namespace

QuadraticRoots solve_quadratic(const Quadratic& q) { return solve_quadratic_t<double>(q.a, q.b, q.c); }

Quadratic qcrb_coefficients(int n, double s1, double s2) {
    check_qumi_args(n, s1, s2);
    Quadratic q;
    qcrb_coefficients_t<double>(n, s1, s2, q.a, q.b, q.c);
    return q;
}

QuadraticRoots qcrb_roots(int n, double s1, double s2) {
    check_qumi_args(n, s1, s2);
    // Near the large-squeezing double root the discriminant cancels badly, so
    // both the coefficients and the roots are carried in extended precision.
    long double a, b, c;
    qcrb_coefficients_t<long double>(n, s1, s2, a, b, c);
    return solve_quadratic_t<long double>(a, b, c);
}

PolyIntermediates qfi_polychromatic(double sqz, const Vec& mean, double tau, double eps) {
    if (!(tau >= 0 && tau <= 1)) throw DomainError("transmissivity must lie in [0, 1]");
    if (!(eps >= -1 && eps <= 1)) throw DomainError("modulation must lie in [-1, 1]");
    const GaussianState st = two_mode_squeezed_state(sqz, mean);
    const PassiveTransform L = beam_splitter(tau, 0, 1, 2);
    const Mat V = L.L * st.cov * L.L.transpose();
    const Vec R = L.L * st.mean;
    PolyIntermediates r;
    r.V1 = V.topLeftCorner(2, 2);
    r.V2 = V.bottomRightCorner(2, 2);
    r.V12 = V.topRightCorner(2, 2);
    r.R1 = R.head(2);
    r.R2 = R.tail(2);
    r.F1 = r.F2 = (1 + 4 * tau * (1 - tau)) * sq(std::sinh(2 * sqz));
    r.qfi = sq(1 + eps) * r.F1 + sq(1 - eps) * r.F2 +
            4 * (1 - eps * eps) * ((r.V12 * r.V12).trace() + 2 * r.R1.dot(r.V12 * r.R2));
    r.qfi_exact = qfi_gaussian(R, V, phase_rotation_derivative(0.0, PhaseGenerator::poly(eps), 2));
    r.enhancement = r.F1 > 0 ? r.qfi / r.F1 : std::numeric_limits<double>::quiet_NaN();
    return r;
}

PolyFisher fisher_polychromatic(double sqz, const Vec& mean, double tau, double eps, double phi,
                                const GeneraldyneMeasurement& meas) {
    PolyFisher out;
    out.parts = qfi_polychromatic(sqz, mean, tau, eps);
    const PolyIntermediates& p = out.parts;
    const GaussianState st = two_mode_squeezed_state(sqz, mean);
    const PassiveTransform L = beam_splitter(tau, 0, 1, 2);
    const PhaseGenerator gen = PhaseGenerator::poly(eps);
    out.value = fisher_general(outcome_statistics(st, L, gen, phi, meas)).value;
    out.measurement = measurement_term(st, L, gen, phi, meas);
    const double e2 = eps * eps;
    const double local = -2 * (1 + e2) + 0.5 * (sq(1 + eps) * (p.V1 * p.V1).trace() + sq(1 - eps) * (p.V2 * p.V2).trace());
    const double cross = (p.V12 * p.V12).trace();
    out.printed = p.qfi - out.measurement + local - 2 * (1 - e2) * (cross + 3 * p.R1.dot(p.V12 * p.R2));
    out.rearranged = p.qfi_exact - out.measurement + local + (1 - e2) * cross;
    if (std::abs(eps) == 1.0 && tau == 0.5 && mean.isZero(0.0) && meas.is_ideal() && meas.eta_eff == 1.0) {
        out.compact = fpol_compact(sqz, eps, phi, *meas.ideal);
    }
    return out;
}

namespace {

double compact_impl(double sqz, double eps, double phi, Quadrature q, double coeff) {
    if (std::abs(eps) != 1.0) throw DomainError("compact polychromatic form is defined only for eps = +-1");
    const double sg = eps > 0 ? 1.0 : -1.0;
    const double c4 = std::cos(4 * phi) * (q == Quadrature::X ? 1.0 : -1.0);
    const double qfi = qfi_polychromatic(sqz, Vec::Zero(4), 0.5, eps).qfi;
    const double num = coeff * sg * sq(std::sinh(2 * sqz)) + c4 * std::sinh(4 * sqz);
    const double den = std::cosh(2 * sqz) + sg * c4 * std::sinh(2 * sqz);
    return qfi - 2 * num * num / (den * den);
}

}  // namespace

double fpol_compact(double sqz, double eps, double phi, Quadrature q) { return compact_impl(sqz, eps, phi, q, 2.0); }

double fpol_compact_printed(double sqz, double eps, double phi, Quadrature q) {
    return compact_impl(sqz, eps, phi, q, 1.0);
}

double fpol_f0(double y, double r) {
    const double s2 = sq(std::sinh(2 * r));
    return s2 * (-2 * s2 * y + std::cosh(4 * r) + 3) *
           (2 * sq(std::sinh(4 * r)) * (2 * y * y - 1) - 4 * (std::cosh(8 * r) - 9) * y + 3 * std::cosh(8 * r) + 29);
}

double fpol_f1(double f, double r) {
    return 16 * std::pow(std::sinh(2 * r), 3) *
           (2 * f * std::sinh(2 * r) * std::sinh(4 * r) * std::sin(10 * f) +
            std::cosh(6 * r) * (-14 * f * std::sin(2 * f) + 3 * f * std::sin(6 * f) - 3 * std::cos(6 * f)) +
            std::cosh(2 * r) * (4 * (std::cosh(4 * r) + 3) * std::cos(2 * f) +
                                16 * sq(std::sinh(r)) * sq(std::cosh(r)) * std::cos(10 * f) - 2 * f * std::sin(2 * f) +
                                45 * f * std::sin(6 * f) - 13 * std::cos(6 * f)));
}

double fpol_condition(double phi, double r, double eps) {
    const double y = std::cos(4 * phi);
    return (3 + std::cosh(4 * r) - 2 * y * sq(std::sinh(2 * r))) * fpol_f0(y, r) + eps * fpol_f1(phi, r);
}

std::array<std::complex<double>, 2> fpol_roots(double r) {
    // (c - 1) y^2 - 2 (c - 9) y + (c + 15) = 0 with c = cosh(8 r); the
    // small root is taken from the product of roots to survive r -> 0.
    const double c = std::cosh(8 * r);
    const std::complex<double> big = (c - 9) - 4.0 * std::sqrt(std::complex<double>(6 - 2 * c, 0.0));
    const std::complex<double> small = (c + 15) / big;
    if (c - 1 == 0) return {small, std::complex<double>(-std::numeric_limits<double>::infinity(), 0)};
    return {small, big / (c - 1)};
}

double eta_tilde_sq_printed(double eta, double n_th) {
    return eta * eta + (2 + n_th) * (1 - eta) / (eta + (1 - eta) * n_th - 2);
}

double fisher_decoherent_printed(double nbar, int n, double eta, double n_th, double phi, Quadrature q) {
    const double sg = q == Quadrature::X ? -1.0 : 1.0;
    return 2 * nbar * n * (1 + sg * std::sin(2 * phi)) * eta_tilde_sq_printed(eta, n_th);
}

double decoherence_factor(double eta, double n_th) { return eta / (eta + (1 - eta) * (2 + n_th)); }

double qfi_asymptotic(int n, double s1, double s2, double nbar) {
    return 2 * nbar * n * (1 + s2 * s2) / s2 +
           0.5 * (4 * nbar * (s1 + 1 / s1 - s2 - 1 / s2) + s2 * s2 + 1 / (s2 * s2) - 2);
}

double fisher_asymptotic(int n, double s1, double s2, double nbar, double phi, Quadrature q, bool printed) {
    // Upper signs belong to x, lower to p.
    const double mp = q == Quadrature::X ? -1.0 : 1.0, pm = -mp;
    const double c2 = std::cos(2 * phi), s2p = std::sin(2 * phi);
    const double lead_den = 1 + s2 * s2 + mp * (printed ? (1 - s2) : (1 - s2 * s2)) * c2;
    const double t1 = 4 * nbar * n * s2 * (1 + mp * s2p) / lead_den;
    const double A = s1 * (1 + mp) + s2 * (1 + pm);
    const double den = 1 + s2 * s2 + mp * (1 - s2 * s2) * c2;
    const double t2 = 2 / s1 * A / (den * den) *
                      (s1 * sq(1 - s2 * s2) * s2p * s2p / A +
                       nbar * (s1 - s2) * (1 + mp * s2p) * (1 - s2 * s2 + mp * (1 + s2 * s2) * c2));
    return t1 + t2;
}

}  // namespace gaussmetro
