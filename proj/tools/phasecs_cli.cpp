// SPDX-License-Identifier: Apache-2.0
//
// phasecs — compressive sampling and sparse recovery of phase-modulated signals
// Copyright (C) 2026 phasecs project contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <CLI11.hpp>
#include <iostream>
#include <optional>
#include <string>

#include "phasecs/phasecs.hpp"

namespace {

int exit_with_scenario_error(const std::string &path, const phasecs::ScenarioError &e) {
    std::cerr << path << ": " << e.what() << "\n";
    return phasecs::kExitValidation;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"phasecs — sub-Nyquist sampling and l1 recovery of phase-sparse modulations"};
    app.require_subcommand(1);

    std::string scenario_path, sweep_path, validate_path;
    phasecs::RunOptions options;
    std::optional<std::uint64_t> seed;

    CLI::App *run = app.add_subcommand("run", "run a scenario end to end and write artifacts");
    run->add_option("scenario", scenario_path, "scenario file")->required();
    run->add_option("--out", options.out_dir, "output directory (default .)");
    run->add_option("--seed", seed, "override the scenario seed");
    run->add_flag("--quiet", options.quiet, "suppress the summary line");

    CLI::App *sweep = app.add_subcommand("sweep", "run a measurement-count sweep");
    sweep->add_option("sweepfile", sweep_path, "sweep file")->required();
    sweep->add_option("--out", options.out_dir, "output directory (default .)");
    sweep->add_option("--seed", seed, "override the base seed");
    sweep->add_flag("--quiet", options.quiet, "suppress the per-point lines");

    CLI::App *validate = app.add_subcommand("validate", "parse and validate a scenario file");
    validate->add_option("scenario", validate_path, "scenario file")->required();
    validate->add_flag("--quiet", options.quiet, "suppress the summary line");

    CLI11_PARSE(app, argc, argv);
    options.seed_override = seed;

    try {
        if (run->parsed()) {
            phasecs::Scenario sc;
            try {
                sc = phasecs::parse_scenario_file(scenario_path);
            } catch (const phasecs::ScenarioError &e) {
                return exit_with_scenario_error(scenario_path, e);
            }
            return phasecs::run_scenario(sc, options);
        }
        if (sweep->parsed()) {
            phasecs::SweepSpec spec;
            try {
                spec = phasecs::parse_sweep_file(sweep_path);
            } catch (const phasecs::ScenarioError &e) {
                return exit_with_scenario_error(sweep_path, e);
            }
            if (seed) spec.base.seed = *seed;
            const auto rows = phasecs::run_sweep(spec);
            return phasecs::write_sweep_table(rows, options);
        }
        if (validate->parsed()) {
            phasecs::Scenario sc;
            try {
                sc = phasecs::parse_scenario_file(validate_path);
            } catch (const phasecs::ScenarioError &e) {
                return exit_with_scenario_error(validate_path, e);
            }
            if (!options.quiet) {
                std::cout << "ok: " << sc.signals.size() << " signal(s), N=" << sc.num_samples
                          << ", K=" << sc.measurements << ", eta="
                          << phasecs::compression_ratio(sc.measurements, sc.num_samples) << "\n";
            }
            return phasecs::kExitOk;
        }
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return phasecs::kExitIo;
    }
    return phasecs::kExitOk;
}
