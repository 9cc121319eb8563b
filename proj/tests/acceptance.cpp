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

// Acceptance run: one PASS/FAIL line per criterion, tolerances as pinned in
// the project requirements. Exit status is nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <random>
#include <string>

#include "gaussmetro/closed_form.hpp"
#include "gaussmetro/commands.hpp"
#include "gaussmetro/montecarlo.hpp"
#include "gaussmetro/optimal.hpp"
#include "gaussmetro/parallel.hpp"
#include "oracles.hpp"

using namespace gaussmetro;

namespace {

constexpr double kPi = 3.14159265358979323846;

double sinh2(double x) { return std::sinh(x) * std::sinh(x); }

struct Outcome {
    bool pass = true;
    std::string detail;
};

int failures = 0;

void run(int id, const std::string& title, double budget_s, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = budget_s <= 0 || secs < budget_s;
    const bool pass = o.pass && in_time;
    if (!pass) ++failures;
    char tbuf[64];
    if (budget_s > 0)
        std::snprintf(tbuf, sizeof tbuf, "%.2fs (budget %.0fs)", secs, budget_s);
    else
        std::snprintf(tbuf, sizeof tbuf, "%.2fs", secs);
    std::printf("[%s] %2d. %s | %s | %s\n", pass ? "PASS" : "FAIL", id, title.c_str(), o.detail.c_str(), tbuf);
    std::fflush(stdout);
}

std::string num(double v) {
    char b[64];
    std::snprintf(b, sizeof b, "%.3g", v);
    return b;
}

Scheme homodyne_scheme(const GaussianState& s, const PassiveTransform& t, Quadrature q = Quadrature::X) {
    return Scheme{s, t, PhaseGenerator::mono(), GeneraldyneMeasurement::homodyne(t.probe_modes, q), std::nullopt};
}

GaussianState random_pure(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1, 1);
    GaussianState s = isothermal_state(oracle::random_symplectic(n, rng), 0.0, n);
    for (int k = 0; k < 2 * n; ++k) s.mean(k) = u(rng);
    return s;
}

}  // namespace

int main() {
    const int threads = default_threads();
    std::mt19937_64 rng(20260101);

    run(1, "coherent + uniform interferometer: F(-pi/4) = 4 nbar N (rel <= 1e-10)", 1.0, [] {
        double worst = 0;
        for (int n : {2, 5, 20, 100})
            for (double nb : {0.1, 1.0, 5.0}) {
                const double f = fisher_information(homodyne_scheme(coherent_state(nb, n), qumi(n)), -kPi / 4);
                worst = std::max(worst, std::abs(f - 4 * nb * n) / (4 * nb * n));
            }
        return Outcome{worst <= 1e-10, "max rel err " + num(worst)};
    });

    run(2, "homogeneous squeezing: F = 8 n (n+1) at cos 2phi = +-tanh 2s' (rel <= 1e-9)", 1.0, [&] {
        double worst = 0;
        for (double sp : {0.1, 0.5, 1.0, 2.0})
            for (int n : {2, 3, 5}) {
                const double s = squeeze_factor(sp);
                const GaussianState st = squeezed_array_state(s, s, n, Vec::Zero(2 * n));
                const PassiveTransform t = random_real_passive(n, rng);
                const HomogeneousOptimum h = optimal_homogeneous(sp);
                const double target = 8 * sinh2(sp) * (sinh2(sp) + 1);
                for (Quadrature q : {Quadrature::X, Quadrature::P}) {
                    const double phi = q == Quadrature::X ? h.phi_x : h.phi_p;
                    // Confirm the phase condition itself.
                    const double c2 = std::cos(2 * phi), want = (q == Quadrature::X ? 1 : -1) * std::tanh(2 * sp);
                    worst = std::max(worst, std::abs(c2 - want));
                    worst = std::max(worst, std::abs(fisher_information(homodyne_scheme(st, t, q), phi) - target) / target);
                }
            }
        return Outcome{worst <= 1e-9, "max rel err " + num(worst) + " (random real-orthogonal L)"};
    });

    run(3, "isothermal QFI = 4 Var(n1) on 50 random pure schemes (rel <= 1e-9)", 0, [&] {
        double worst = 0;
        for (int i = 0; i < 50; ++i) {
            const int n = 1 + i % 5;
            const GaussianState s = random_pure(n, rng);
            const PassiveTransform t = random_passive(n, rng);
            const Mat v = t.L * s.cov * t.L.transpose();
            const Vec d = t.L * s.mean;
            const double ref = oracle::four_var_n1(d.head(2), v.topLeftCorner(2, 2));
            worst = std::max(worst, std::abs(qfi_isothermal(s, t) - ref) / std::max(1.0, ref));
        }
        return Outcome{worst <= 1e-9, "max rel err " + num(worst)};
    });

    run(4, "decomposition = direct on 100 assisted schemes (rel <= 1e-9); F_Anc = F_Int = 0 without mixing", 10.0, [&] {
        std::uniform_real_distribution<double> u(-1, 1), r(0.3, 3.0), nt(0.0, 0.5);
        double worst = 0, zero = 0;
        for (int i = 0; i < 120; ++i) {
            const int m = 1 + i % 3, n = std::min(6, m + 1 + i % 4);
            GaussianState p = isothermal_state(oracle::random_symplectic(m, rng), nt(rng), m);
            for (int k = 0; k < 2 * m; ++k) p.mean(k) = u(rng);
            GaussianState a = isothermal_state(oracle::random_symplectic(n - m, rng), nt(rng), n - m);
            for (int k = 0; k < 2 * (n - m); ++k) a.mean(k) = u(rng);
            const GaussianState s = combine(p, a);
            std::vector<double> rs(m);
            for (auto& x : rs) x = r(rng);
            const GeneraldyneMeasurement meas = GeneraldyneMeasurement::general(random_passive(m, rng).L, rs);
            const bool unmixed = i >= 100;
            Mat L = random_passive(n, rng).L;
            if (unmixed) L = direct_sum(random_passive(m, rng).L, random_passive(n - m, rng).L);
            const FisherBreakdown b = fisher_decomposed(s, make_passive(L, m), u(rng) * kPi, meas);
            worst = std::max(worst, std::abs(b.decomposed - b.total) / std::max(1.0, std::abs(b.total)));
            if (unmixed) zero = std::max({zero, std::abs(b.ancilla), std::abs(b.interference)});
        }
        return Outcome{worst <= 1e-9 && zero <= 1e-9,
                       "max rel err " + num(worst) + ", max |F_Anc|,|F_Int| unmixed " + num(zero)};
    });

    const std::vector<NamedScheme> suite = scheme_suite(20260101);

    run(5, "F <= QFI (slack 1e-9 max(1,QFI)) over the suite x 50 phases", 0, [&] {
        int violations = 0, points = 0;
        double gap = -std::numeric_limits<double>::infinity();
        for (const auto& ns : suite) {
            const double q = qfi_scheme(ns.scheme);
            for (int k = 0; k < 50; ++k) {
                const double f = fisher_information(ns.scheme, -kPi + 2 * kPi * k / 49);
                ++points;
                gap = std::max(gap, (f - q) / std::max(1.0, q));
                if (f > q + 1e-9 * std::max(1.0, q)) ++violations;
            }
        }
        return Outcome{violations == 0, std::to_string(violations) + " violations in " + std::to_string(points) +
                                            " points over " + std::to_string(suite.size()) + " schemes, max (F-Q)/max(1,Q) " +
                                            num(gap)};
    });

    run(6, "squeezed x coherent: no saturating root, real roots >= 1; s=e^20 limit N^2/(2N-1) within 1e-6", 0, [] {
        int real = 0, below = 0, feasible = 0, complex_pairs = 0;
        double min_real = std::numeric_limits<double>::infinity();
        for (double s : {std::exp(-1.0), std::exp(-2.0)})
            for (int n = 2; n <= 50; ++n) {
                const WorkingPointReport w = optimal_qumi_squeezed(n, s, 1.0, Quadrature::X);
                bool pair_real = true;
                for (const RootInfo& z : w.roots) {
                    if (z.real) {
                        ++real;
                        min_real = std::min(min_real, z.value.real());
                        if (z.value.real() < 1.0) ++below;
                    } else {
                        pair_real = false;
                    }
                    feasible += z.feasible;
                }
                complex_pairs += !pair_real;
            }
        double nearest = 0, other = 0;
        for (int n = 2; n <= 50; ++n) {
            const QuadraticRoots z = qcrb_roots(n, std::exp(20.0), 1.0);
            const double lim = n * n / (2.0 * n - 1);
            const double e1 = std::abs(z.root1 - lim) / lim, e2 = std::abs(z.root2 - lim) / lim;
            nearest = std::max(nearest, std::min(e1, e2));
            other = std::max(other, std::max(e1, e2));
        }
        const QuadraticRoots z3 = qcrb_roots(3, std::exp(20.0), 1.0);
        const double n3 = std::max(std::abs(z3.root1 - 1.8), std::abs(z3.root2 - 1.8)) / 1.8;
        const bool pass = below == 0 && feasible == 0 && nearest <= 1e-6 && n3 <= 1e-6;
        return Outcome{pass, std::to_string(real) + " real roots (min " + num(min_real) + "), " +
                                 std::to_string(complex_pairs) + " complex pairs, 0 in [0,1]: " +
                                 (feasible == 0 ? "yes" : "no") + "; limit: nearest root " + num(nearest) +
                                 ", N=3 both roots " + num(n3) + ", other root up to " + num(other) +
                                 " (finite-s drift ~N^4/s)"};
    });

    run(7, "polychromatic: (a) 10 sinh^2 2s' at eps=0,tau=0 (1e-9); (b) saturation at eps=+-1; (c) 5 sinh^2 2s' within 2%", 5.0,
        [] {
            double a = 0, b = 0, c = 0, cond = 0;
            for (double sp : {0.1, 0.5, 1.0, 2.0}) {
                const double t = 10 * sinh2(2 * sp);
                a = std::max(a, std::abs(qfi_polychromatic(sp, Vec::Zero(4), 0.0, 0.0).qfi - t) / t);
                for (double eps : {1.0, -1.0})
                    for (Quadrature q : {Quadrature::X, Quadrature::P}) {
                        const WorkingPointReport w = optimal_polychromatic(sp, eps, q);
                        for (const Candidate& k : w.candidates) {
                            if (k.label == "grid argmax") continue;
                            const double want = (q == Quadrature::X ? -1 : 1) * (eps > 0 ? 1 : -1) * std::tanh(2 * sp);
                            cond = std::max(cond, std::abs(std::cos(4 * k.phi) - want));
                            b = std::max(b, std::abs(k.fisher - k.qfi) / std::max(1.0, k.qfi));
                        }
                    }
            }
            for (double sp : {0.1, 0.15}) {
                const double t = 5 * sinh2(2 * sp);
                c = std::max(c, std::abs(optimal_polychromatic(sp, 0.5, Quadrature::X).best()->fisher - t) / t);
            }
            return Outcome{a <= 1e-9 && b <= 1e-8 && cond <= 1e-9 && c <= 0.02,
                           "(a) " + num(a) + " (b) gap " + num(b) + ", cos4phi err " + num(cond) + " (c) " + num(c)};
        });

    run(8, "general-dyne r=1e-8 reproduces ideal homodyne (rel <= 1e-4)", 0, [&] {
        double worst = 0;
        int compared = 0;
        for (const auto& ns : suite) {
            if (!ns.scheme.measurement.is_ideal()) continue;
            Scheme fin = ns.scheme;
            const int m = fin.measurement.probe_modes;
            const double r = *fin.measurement.ideal == Quadrature::X ? 1e-8 : 1e8;
            GeneraldyneMeasurement g = GeneraldyneMeasurement::diagonal(std::vector<double>(m, r));
            g.eta_eff = fin.measurement.eta_eff;
            fin.measurement = g;
            for (int k = 0; k < 10; ++k) {
                const double phi = -1.4 + 0.3 * k;
                const double a = fisher_information(fin, phi), b = fisher_information(ns.scheme, phi);
                worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(b)));
                ++compared;
            }
        }
        return Outcome{worst <= 1e-4, std::to_string(compared) + " points, max rel err " + num(worst)};
    });

    run(9, "decoherence: ideal limit exact, monotone in n_th and 1-eta, printed closed form compared", 0, [] {
        bool exact = true, monotone = true;
        for (int n : {2, 4}) {
            const GaussianState s = coherent_state(1.0, n);
            const DecoherentFisher d = fisher_decoherent(s, qumi(n), -kPi / 4,
                                                         GeneraldyneMeasurement::homodyne(n, Quadrature::X), NoiseModel{});
            exact = exact && d.value == d.ideal;
            for (int k = 0; k < 13; ++k) {
                const double phi = -kPi / 2 + kPi * k / 12;
                double prev_eta = std::numeric_limits<double>::infinity();
                for (double eta : {1.0, 0.9, 0.7, 0.5, 0.3, 0.1}) {
                    double prev_n = std::numeric_limits<double>::infinity();
                    for (double nth : {0.0, 0.5, 1.0, 3.0}) {
                        NoiseModel nm;
                        nm.eta_loss = nm.eta_eff = eta;
                        nm.n_th = nth;
                        const double f = fisher_decoherent(s, qumi(n), phi,
                                                           GeneraldyneMeasurement::homodyne(n, Quadrature::X), nm).value;
                        if (f > prev_n * (1 + 1e-12) + 1e-14) monotone = false;
                        if (nth == 0.0) {
                            if (f > prev_eta * (1 + 1e-12) + 1e-14) monotone = false;
                            prev_eta = f;
                        }
                        prev_n = f;
                    }
                }
            }
        }
        const WorkingPointReport w5 = optimal_decoherent_coherent(0.5, 0.0, Quadrature::X);
        const WorkingPointReport w9 = optimal_decoherent_coherent(0.9, 0.0, Quadrature::X);
        const bool records = !w5.discrepancies.empty();
        std::string d = std::string("exact ideal limit ") + (exact ? "yes" : "no") + ", monotone " +
                        (monotone ? "yes" : "no") + ", eta=0.5 eta~^2 printed " + num(eta_tilde_sq_printed(0.5, 0)) +
                        " vs direct factor " + num(decoherence_factor(0.5, 0)) + " (" +
                        std::to_string(w5.discrepancies.size()) + " records), eta=0.9 " +
                        std::to_string(w9.discrepancies.size()) + " records";
        return Outcome{exact && monotone && records, d};
    });

    run(10, "Monte Carlo: 5 schemes within 4 SE at 1e6 samples (< 60 s); MLE n var F in [0.9, 1.3]", 0, [&] {
        const auto t0 = std::chrono::steady_clock::now();
        struct Pick {
            const char* name;
            double phi;
        };
        const Pick picks[] = {{"coherent-qumi-2", -kPi / 4},
                              {"squeezed-coherent-qumi-3", 0.4},
                              {"squeezed-vacuum-random-3", 0.3},
                              {"assisted-generaldyne-4", 0.8},
                              {"displaced-squeezed-generaldyne-3", -0.6}};
        double worst_z = 0, worst_s = 0;
        int k = 0;
        for (const Pick& p : picks) {
            const auto it = std::find_if(suite.begin(), suite.end(), [&](const NamedScheme& s) { return s.name == p.name; });
            if (it == suite.end()) throw std::runtime_error(std::string("missing scheme ") + p.name);
            const EmpiricalFisher e = empirical_fisher(it->scheme, p.phi, 1000000, derive_seed(20260101, k++), threads);
            worst_z = std::max(worst_z, e.z());
            worst_s = std::max(worst_s, std::abs(e.score_mean) / e.score_stderr);
        }
        const double mc_secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        EstimationExperiment ex;
        ex.scheme = suite.front().scheme;
        ex.phi0 = -kPi / 4;
        ex.samples = 1000;
        ex.trials = 1000;
        ex.seed = derive_seed(20260101, 99);
        const MleResult m = mle_variance(ex, threads);
        const bool pass = worst_z <= 4 && worst_s <= 4 && mc_secs < 60 && m.efficiency >= 0.9 && m.efficiency <= 1.3;
        return Outcome{pass, "max z " + num(worst_z) + ", score z " + num(worst_s) + ", MC " + num(mc_secs) +
                                 "s; MLE n var F " + num(m.efficiency) + " (" + std::to_string(m.flagged) +
                                 " edge-flagged trials)"};
    });

    run(11, "figure and table surrogates: fig2/fig3 panels and table1 assertions hold", 120.0, [&] {
        const std::filesystem::path dir = "acceptance_out";
        std::filesystem::create_directories(dir);
        std::string detail;
        bool pass = true;
        auto record = [&](const CommandResult& r, const std::string& file) {
            write_file((dir / file).string(), r.render("csv"));
            int bad = 0;
            for (const auto& c : r.checks) bad += !c.pass;
            pass = pass && r.passed();
            detail += r.command + (bad ? " FAIL " : " ok ");
        };
        for (const char* panel : {"left", "center", "right"}) {
            Fig2Options o;
            o.panel = panel;
            o.threads = threads;
            record(cmd_fig2(o), std::string("fig2_") + panel + ".csv");
            Fig3Options p;
            p.panel = panel;
            p.threads = threads;
            record(cmd_fig3(p), std::string("fig3_") + panel + ".csv");
        }
        const CommandResult t = cmd_table1({threads});
        record(t, "table1.csv");
        write_file((dir / "table1.json").string(), t.to_json().dump(2) + "\n");
        return Outcome{pass, detail + "-> " + dir.string() + "/"};
    });

    std::printf("%s: %d criteria failed\n", failures ? "FAILED" : "ALL PASSED", failures);
    return failures ? 1 : 0;
}
