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

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "gaussmetro/commands.hpp"
#include "gaussmetro/errors.hpp"
#include "gaussmetro/parallel.hpp"

namespace gm = gaussmetro;

namespace {

// Exit codes: 0 success, 1 runtime failure, 2 bad arguments or config,
// 3 command ran but one of its checks failed.
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;
constexpr int kExitCheck = 3;

struct Common {
    std::string out;
    std::string format = "csv";
    int threads = gm::default_threads();
};

CLI::Option* add_common(CLI::App* sub, Common& c) {
    sub->add_option("--out", c.out, "Output file (stdout when omitted)");
    CLI::Option* fmt = sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--threads", c.threads, "Worker threads (default from GAUSSMETRO_THREADS)")
        ->check(CLI::PositiveNumber);
    return fmt;
}

int emit(const gm::CommandResult& r, const Common& c) {
    const std::string text = r.render(c.format);
    if (c.out.empty()) {
        std::cout << text;
    } else {
        gm::write_file(c.out, text);
        // table1 always carries a JSON summary next to its CSV.
        if (r.command == "table1" && c.format == "csv") {
            std::filesystem::path p(c.out);
            p.replace_extension(".json");
            gm::write_file(p.string(), r.to_json().dump(2) + "\n");
        }
    }
    for (const auto& ch : r.checks)
        std::cerr << (ch.pass ? "PASS " : "FAIL ") << ch.name << (ch.detail.empty() ? "" : ": " + ch.detail) << "\n";
    return r.passed() ? 0 : kExitCheck;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Phase sensitivity of passive Gaussian interferometers"};
    app.set_version_flag("--version", std::string(GAUSSMETRO_VERSION));
    app.require_subcommand(1);

    Common common;

    gm::Fig2Options f2;
    auto* fig2 = app.add_subcommand("fig2", "Saturation roots and Fisher information against N or nbar");
    fig2->add_option("--panel", f2.panel)->check(CLI::IsMember({"left", "center", "right"}));
    fig2->add_option("--s-values", f2.s_values, "left: squeeze factors s1");
    fig2->add_option("--n-min", f2.n_min);
    fig2->add_option("--n-max", f2.n_max);
    fig2->add_option("--n-step", f2.n_step);
    fig2->add_option("--nbar", f2.nbar, "center: photons per mode");
    fig2->add_option("--nbar-values", f2.nbar_values, "right: photon numbers per mode");
    fig2->add_option("--phi", f2.phi);
    fig2->add_option("--squeezing", f2.sq, "squeezing parameter s'");
    fig2->add_option("--sign", f2.sign, "s1 = exp(sign * 2 s')");
    fig2->add_option("--modes", f2.modes, "right: N");
    add_common(fig2, common);

    gm::Fig3Options f3;
    auto* fig3 = app.add_subcommand("fig3", "Polychromatic QFI and Fisher deviation");
    fig3->add_option("--panel", f3.panel)->check(CLI::IsMember({"left", "center", "right"}));
    fig3->add_option("--eps-values", f3.eps_values);
    fig3->add_option("--s-min", f3.s_min);
    fig3->add_option("--s-max", f3.s_max);
    fig3->add_option("--s-steps", f3.s_steps);
    fig3->add_option("--eps-steps", f3.eps_steps);
    fig3->add_option("--phi", f3.phi);
    fig3->add_option("--eps", f3.eps);
    fig3->add_option("--s-values", f3.s_values);
    fig3->add_option("--phi-steps", f3.phi_steps);
    add_common(fig3, common);

    auto* table1 = app.add_subcommand("table1", "Scaling classification of the four reference setups");
    add_common(table1, common);

    std::string config_path;
    std::optional<std::uint64_t> sweep_seed;
    std::optional<long> sweep_samples;
    std::optional<double> sweep_phi;
    auto* sweep = app.add_subcommand("sweep", "Parameter sweep from a JSON config");
    sweep->add_option("--config", config_path)->required()->check(CLI::ExistingFile);
    sweep->add_option("--seed", sweep_seed, "overrides the config seed");
    sweep->add_option("--samples", sweep_samples, "overrides the config sample count");
    sweep->add_option("--phi", sweep_phi, "overrides the config phase");
    add_common(sweep, common);

    gm::VerifyOptions vo;
    auto* verify = app.add_subcommand("verify", "Run the invariant suite");
    verify->add_option("--suite", vo.suite)->check(CLI::IsMember({"fast", "full"}));
    verify->add_option("--seed", vo.seed);
    CLI::Option* verify_format = add_common(verify, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (*fig2) {
            f2.threads = common.threads;
            return emit(gm::cmd_fig2(f2), common);
        }
        if (*fig3) {
            f3.threads = common.threads;
            return emit(gm::cmd_fig3(f3), common);
        }
        if (*table1) return emit(gm::cmd_table1({common.threads}), common);
        if (*sweep) {
            gm::Json cfg;
            try {
                cfg = gm::Json::parse(gm::read_file(config_path));
            } catch (const gm::Json::exception& e) {
                throw gm::ValidationError(std::string("cannot parse config: ") + e.what());
            }
            if (sweep_seed) cfg["seed"] = *sweep_seed;
            if (sweep_samples) cfg["samples"] = *sweep_samples;
            if (sweep_phi) cfg["phi"] = *sweep_phi;
            return emit(gm::cmd_sweep(cfg, common.threads), common);
        }
        if (*verify) {
            vo.threads = common.threads;
            const gm::CommandResult r = gm::cmd_verify(vo);
            // The report is JSON unless csv is asked for.
            if (verify_format->count() == 0) common.format = "json";
            return emit(r, common);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitUsage;
}
