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

#include "gaussmetro/optimal.hpp"

#include <cmath>
#include <limits>

#include "gaussmetro/errors.hpp"

namespace gaussmetro {

std::string to_string(ConditionKind k) {
    switch (k) {
        case ConditionKind::ClosedForm: return "closed-form";
        case ConditionKind::PolynomialRoot: return "polynomial-root";
        case ConditionKind::GridSearch: return "grid-search";
    }
    return "unknown";
}

const Candidate* WorkingPointReport::best() const {
    const Candidate* b = nullptr;
    for (const auto& c : candidates)
        if (!b || c.fisher > b->fisher) b = &c;
    return b;
}

bool saturates(double fisher, double qfi) { return std::abs(fisher - qfi) <= kSaturationTol * std::max(1.0, qfi); }

WorkingPointReport grid_optimize(const std::function<double(double)>& f, double lo, double hi, int resolution,
                                 std::optional<double> qfi) {
    if (!(hi > lo)) throw DomainError("empty phase range");
    if (resolution < 3) throw DomainError("grid resolution must be at least 3");
    std::vector<double> xs(resolution), fs(resolution);
    for (int i = 0; i < resolution; ++i) {
        xs[i] = lo + (hi - lo) * i / (resolution - 1);
        fs[i] = f(xs[i]);
    }
    int ib = 0;
    double fmin = fs[0];
    for (int i = 1; i < resolution; ++i) {
        if (fs[i] > fs[ib]) ib = i;
        fmin = std::min(fmin, fs[i]);
    }
    WorkingPointReport r;
    r.kind = ConditionKind::GridSearch;
    r.flat = fs[ib] - fmin <= 1e-12 * std::max(1.0, std::abs(fs[ib]));
    double best_x = xs[ib], best_f = fs[ib];
    if (!r.flat) {
        double a = xs[std::max(ib - 1, 0)], b = xs[std::min(ib + 1, resolution - 1)];
        const double g = 0.5 * (std::sqrt(5.0) - 1.0);
        double c = b - g * (b - a), d = a + g * (b - a);
        double fc = f(c), fd = f(d);
        for (int it = 0; it < kGoldenIterations; ++it) {
            if (fc > fd) {
                b = d; d = c; fd = fc;
                c = b - g * (b - a);
                fc = f(c);
            } else {
                a = c; c = d; fc = fd;
                d = a + g * (b - a);
                fd = f(d);
            }
        }
        const double xm = fc > fd ? c : d, fm = std::max(fc, fd);
        if (fm > best_f) {
            best_f = fm;
            best_x = xm;
        }
    }
    Candidate cand;
    cand.phi = best_x;
    cand.fisher = best_f;
    cand.label = "grid argmax";
    if (qfi) {
        cand.qfi = *qfi;
        cand.saturating = saturates(best_f, *qfi);
        r.max_relative_gap = (best_f - *qfi) / std::max(1.0, *qfi);
    }
    r.saturated = cand.saturating;
    r.candidates.push_back(cand);
    return r;
}

WorkingPointReport grid_optimize(const Scheme& s, double lo, double hi, int resolution) {
    validate(s);
    return grid_optimize([&](double phi) { return fisher_information(s, phi); }, lo, hi, resolution, qfi_scheme(s));
}

WorkingPointReport optimal_qumi_squeezed(int n, double s1, double s2, Quadrature q) {
    WorkingPointReport r;
    r.kind = ConditionKind::PolynomialRoot;
    const QuadraticRoots sol = q == Quadrature::X ? qcrb_roots(n, s1, s2) : qcrb_roots(n, 1 / s1, 1 / s2);
    if (sol.linear) r.notes.push_back("leading coefficient vanishes; linear fallback");
    const Vec zero = Vec::Zero(2 * n);
    const double qfi = fisher_qumi_squeezed(n, s1, s2, zero, 0.3, q).parts.qfi;
    auto F = [&](double phi) { return fisher_qumi_squeezed(n, s1, s2, zero, phi, q).value; };
    for (const auto& z : {sol.root1, sol.root2}) {
        RootInfo ri;
        ri.value = z;
        ri.real = std::abs(z.imag()) <= 1e-12 * std::max(1.0, std::abs(z));
        ri.feasible = ri.real && z.real() >= -1e-12 && z.real() <= 1 + 1e-12;
        r.roots.push_back(ri);
        if (ri.feasible) {
            r.feasible = true;
            const double phi0 = std::asin(std::sqrt(std::clamp(z.real(), 0.0, 1.0)));
            for (double phi : {phi0, -phi0}) {
                Candidate c;
                c.phi = phi;
                c.fisher = F(phi);
                c.qfi = qfi;
                c.saturating = saturates(c.fisher, qfi);
                c.label = "root y=" + std::to_string(z.real());
                r.saturated = r.saturated || c.saturating;
                r.candidates.push_back(c);
            }
        }
    }
    // Diagnostic grid: the best attainable F relative to the QFI.
    WorkingPointReport g = grid_optimize(F, 1e-6, M_PI - 1e-6, 721, qfi);
    g.candidates[0].label = "grid argmax";
    r.candidates.push_back(g.candidates[0]);
    r.max_relative_gap = g.max_relative_gap;
    if (!r.feasible) r.notes.push_back("no root in [0, 1]: no saturating phase");
    return r;
}

HomogeneousOptimum optimal_homogeneous(double sq) {
    HomogeneousOptimum h;
    const double t = std::tanh(2 * sq);
    h.phi_x = 0.5 * std::acos(t);
    h.phi_p = 0.5 * std::acos(-t);
    const double n = std::sinh(sq) * std::sinh(sq);
    h.fisher = 8 * n * (n + 1);
    return h;
}

WorkingPointReport optimal_polychromatic(double sq, double eps, Quadrature q, double tau) {
    if (!(sq >= 0)) throw DomainError("squeezing parameter must be nonnegative");
    const Vec zero = Vec::Zero(4);
    const GeneraldyneMeasurement meas = GeneraldyneMeasurement::homodyne(2, q);
    const double qfi = qfi_polychromatic(sq, zero, tau, eps).qfi;
    auto F = [&](double phi) { return fisher_polychromatic(sq, zero, tau, eps, phi, meas).value; };
    WorkingPointReport r;
    auto add = [&](double phi, const std::string& label) {
        Candidate c;
        c.phi = phi;
        c.fisher = F(phi);
        c.qfi = qfi;
        c.saturating = saturates(c.fisher, qfi);
        c.label = label;
        r.saturated = r.saturated || c.saturating;
        r.candidates.push_back(c);
    };
    if (std::abs(eps) == 1.0) {
        r.kind = ConditionKind::ClosedForm;
        const double sg = eps > 0 ? 1.0 : -1.0;
        const double y = (q == Quadrature::X ? -sg : sg) * std::tanh(2 * sq);
        const double a = std::acos(y);
        r.feasible = true;
        add(a / 4, "cos(4 phi)=" + std::to_string(y));
        add(M_PI / 2 - a / 4, "cos(4 phi)=" + std::to_string(y));
    } else if (eps == 0.0) {
        r.kind = ConditionKind::PolynomialRoot;
        for (const auto& z : fpol_roots(sq)) {
            RootInfo ri;
            ri.value = z;
            ri.real = std::abs(z.imag()) <= 1e-12 * std::max(1.0, std::abs(z));
            ri.feasible = ri.real && std::abs(z.real()) <= 1 + 1e-12;
            r.roots.push_back(ri);
            if (ri.feasible) {
                r.feasible = true;
                const double a = std::acos(std::clamp(z.real(), -1.0, 1.0));
                add(a / 4, "root cos(4 phi)=" + std::to_string(z.real()));
            }
        }
        if (!r.feasible) r.notes.push_back("no root with |cos(4 phi)| <= 1: no saturating phase");
    } else {
        r.kind = ConditionKind::PolynomialRoot;
        const int steps = 2000;
        double prev = fpol_condition(0.0, sq, eps);
        for (int i = 1; i <= steps; ++i) {
            const double x1 = M_PI / 2 * i / steps, x0 = M_PI / 2 * (i - 1) / steps;
            const double cur = fpol_condition(x1, sq, eps);
            if (prev == 0.0 || (prev < 0) != (cur < 0)) {
                double a = x0, b = x1, fa = prev;
                for (int it = 0; it < 100; ++it) {
                    const double mid = 0.5 * (a + b), fm = fpol_condition(mid, sq, eps);
                    if ((fm < 0) == (fa < 0)) { a = mid; fa = fm; } else { b = mid; }
                }
                r.feasible = true;
                add(0.5 * (a + b), "first-order condition root");
            }
            prev = cur;
        }
        if (!r.feasible) r.notes.push_back("first-order condition has no root on [0, pi/2]");
    }
    WorkingPointReport g = grid_optimize(F, 0.0, M_PI, 1441, qfi);
    r.candidates.push_back(g.candidates[0]);
    r.max_relative_gap = g.max_relative_gap;
    r.saturated = r.saturated || g.saturated;
    return r;
}

WorkingPointReport optimal_decoherent_coherent(double eta, double n_th, Quadrature q, int modes, double nbar) {
    if (!(eta > 0 && eta <= 1)) throw DomainError("eta must lie in (0, 1]");
    if (!(n_th >= 0)) throw DomainError("thermal occupation must be nonnegative");
    const GaussianState st = coherent_state(nbar, modes);
    const PassiveTransform L = qumi(modes);
    const GeneraldyneMeasurement meas = GeneraldyneMeasurement::homodyne(modes, q);
    NoiseModel noise;
    noise.eta_loss = noise.eta_eff = eta;
    noise.n_th = n_th;
    const Scheme sch{st, L, PhaseGenerator::mono(), meas, noise};
    auto F = [&](double phi) { return fisher_information(sch, phi); };
    const double qfi = qfi_scheme(sch);

    WorkingPointReport r;
    r.kind = ConditionKind::ClosedForm;
    const WorkingPointReport g = grid_optimize(F, -M_PI / 2, M_PI / 2, 721, qfi);
    Candidate grid = g.candidates[0];

    const double et2 = eta_tilde_sq_printed(eta, n_th);
    const double sg = q == Quadrature::X ? -1.0 : 1.0;
    bool ok = et2 > 0;
    double arg = 0;
    if (ok) {
        arg = sg * (2 * eta * eta / et2 - 1);
        ok = std::abs(arg) <= 1;
    }
    if (!ok) {
        r.notes.push_back("printed phase condition has no solution (eta~^2 = " + std::to_string(et2) +
                          (et2 > 0 ? ", |argument| = " + std::to_string(std::abs(arg)) : std::string()) + ")");
        r.kind = ConditionKind::GridSearch;
        r.discrepancies.push_back({"eta_tilde_sq", et2, decoherence_factor(eta, n_th),
                                   "printed effective efficiency vs exact loss factor"});
    } else {
        Candidate c;
        c.phi = 0.5 * std::asin(arg);
        c.fisher = F(c.phi);
        c.qfi = qfi;
        c.saturating = saturates(c.fisher, qfi);
        c.label = "printed condition";
        r.candidates.push_back(c);
        r.feasible = true;
        // The printed phase is compared modulo pi (F has period pi).
        double d = std::remainder(c.phi - grid.phi, M_PI);
        if (std::abs(d) > 1e-3) {
            r.discrepancies.push_back({"phi_opt", c.phi, grid.phi, "printed phase vs direct argmax"});
        }
    }
    r.candidates.push_back(grid);
    r.saturated = grid.saturating;
    r.max_relative_gap = g.max_relative_gap;
    return r;
}

}  // namespace gaussmetro
