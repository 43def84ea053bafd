/*
Copyright 2026 ehrelay contributors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ehrelay.h"

namespace fs = std::filesystem;

namespace {

// Exit codes: 0 success, 2 validation error, 3 policy not applicable,
// 4 solver non-convergence.
int exit_code(relay_status st) {
    switch (st) {
    case RELAY_OK: return 0;
    case RELAY_ERR_NOT_APPLICABLE: return 3;
    case RELAY_ERR_NO_CONVERGENCE: return 4;
    default: return 2;
    }
}

int report(relay_status st) {
    if (st != RELAY_OK) std::cerr << "error: " << relay_last_error() << "\n";
    return exit_code(st);
}

std::vector<double> parse_csv_doubles(const std::string &text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

/// Expands every path that is a directory into its *.json entries, sorted.
std::vector<std::string> expand_scenario_paths(const std::vector<std::string> &inputs) {
    std::vector<std::string> out;
    for (const auto &p : inputs) {
        if (fs::is_directory(p)) {
            std::vector<std::string> entries;
            for (const auto &e : fs::directory_iterator(p))
                if (e.path().extension() == ".json") entries.push_back(e.path().string());
            std::sort(entries.begin(), entries.end());
            out.insert(out.end(), entries.begin(), entries.end());
        } else {
            out.push_back(p);
        }
    }
    return out;
}

int cmd_alloc(const std::string &scenario_path, const std::string &policy,
              const std::string &out_path) {
    relay_scenario *sc = nullptr;
    if (relay_status st = relay_scenario_load(scenario_path.c_str(), &sc); st != RELAY_OK)
        return report(st);
    relay_result *res = nullptr;
    relay_status st = relay_alloc(sc, policy.c_str(), &res);
    if (st == RELAY_OK) {
        if (out_path.empty()) {
            char *text = nullptr;
            st = relay_result_to_json(res, &text);
            if (st == RELAY_OK) std::cout << text;
            relay_string_free(text);
        } else {
            st = relay_result_save(res, out_path.c_str());
        }
    }
    relay_result_free(res);
    relay_scenario_free(sc);
    return report(st);
}

int cmd_compare(const std::vector<std::string> &inputs, const std::string &format) {
    const auto paths = expand_scenario_paths(inputs);
    std::vector<relay_scenario *> scenarios;
    auto cleanup = [&] {
        for (auto *sc : scenarios) relay_scenario_free(sc);
    };
    for (const auto &p : paths) {
        relay_scenario *sc = nullptr;
        if (relay_status st = relay_scenario_load(p.c_str(), &sc); st != RELAY_OK) {
            cleanup();
            return report(st);
        }
        scenarios.push_back(sc);
    }
    char *text = nullptr;
    relay_status st = relay_compare(scenarios.data(), scenarios.size(), format.c_str(), &text);
    if (st == RELAY_OK) std::cout << text;
    relay_string_free(text);
    cleanup();
    return report(st);
}

int cmd_gen(std::uint64_t seed, std::size_t count, double mean, const std::string &instants,
            double deadline, const std::string &out_dir) {
    const auto t = parse_csv_doubles(instants);
    relay_scenario **batch = nullptr;
    if (relay_status st =
            relay_generate(seed, count, mean, t.data(), t.size(), deadline, &batch);
        st != RELAY_OK)
        return report(st);
    relay_status st = RELAY_OK;
    for (std::size_t i = 0; i < count && st == RELAY_OK; ++i) {
        const fs::path path =
            fs::path(out_dir) / (std::string(relay_scenario_name(batch[i])) + ".json");
        st = relay_scenario_save(batch[i], path.string().c_str());
        if (st == RELAY_OK) std::cout << path.string() << "\n";
    }
    relay_scenario_array_free(batch, count);
    return report(st);
}

int cmd_staircase(const std::string &scenario_path, const std::string &policy,
                  const std::string &out_path) {
    relay_scenario *sc = nullptr;
    if (relay_status st = relay_scenario_load(scenario_path.c_str(), &sc); st != RELAY_OK)
        return report(st);
    relay_result *res = nullptr;
    relay_status st = relay_alloc(sc, policy.c_str(), &res);
    if (st == RELAY_OK) {
        char *csv = nullptr;
        st = relay_staircase_csv(sc, res, &csv);
        if (st == RELAY_OK) {
            if (std::FILE *f = std::fopen(out_path.c_str(), "wb")) {
                std::fputs(csv, f);
                std::fclose(f);
            } else {
                std::cerr << "error: cannot write " << out_path << "\n";
                st = RELAY_ERR_VALIDATION;
            }
        }
        relay_string_free(csv);
    }
    relay_result_free(res);
    relay_scenario_free(sc);
    return report(st);
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Offline power and energy-transfer scheduling for an "
                 "energy-harvesting full-duplex relay channel"};
    app.require_subcommand(1);

    const std::string policies = "greedy|total-subopt|disjoint|one-way|two-way|"
                                 "solve-no-et|solve-one-way|solve-two-way";

    std::string scenario_path, policy, out_path;
    auto *alloc = app.add_subcommand("alloc", "Run one policy on a scenario");
    alloc->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
    alloc->add_option("--policy", policy, "One of " + policies)->required();
    alloc->add_option("--out", out_path, "Write the result JSON here instead of stdout");

    std::vector<std::string> compare_inputs;
    std::string format = "md";
    auto *compare = app.add_subcommand("compare", "Policy comparison table over scenarios");
    compare->add_option("--scenarios", compare_inputs, "Scenario files or directories")
        ->required();
    compare->add_option("--format", format, "md, csv or json")
        ->check(CLI::IsMember({"md", "csv", "json"}));

    std::uint64_t seed = 0;
    std::size_t count = 1;
    double mean = 10.0, deadline = 7.0;
    std::string instants = "0,2,4,6", out_dir = ".";
    auto *gen = app.add_subcommand("gen", "Generate Poisson scenarios");
    gen->add_option("--seed", seed, "RNG seed")->required();
    gen->add_option("--count", count, "Number of scenarios")->required();
    gen->add_option("--mean", mean, "Mean harvest (mJ)");
    gen->add_option("--instants", instants, "Comma-separated harvest instants (s)");
    gen->add_option("--deadline", deadline, "Deadline T (s)");
    gen->add_option("--out-dir", out_dir, "Output directory");

    std::string stair_scenario, stair_policy, stair_out;
    auto *stair = app.add_subcommand("staircase", "Export cumulative energy curves as CSV");
    stair->add_option("--scenario", stair_scenario, "Scenario JSON file")->required();
    stair->add_option("--policy", stair_policy, "One of " + policies)->required();
    stair->add_option("--out", stair_out, "Output CSV path")->required();

    CLI11_PARSE(app, argc, argv);

    if (alloc->parsed()) return cmd_alloc(scenario_path, policy, out_path);
    if (compare->parsed()) return cmd_compare(compare_inputs, format);
    if (gen->parsed()) return cmd_gen(seed, count, mean, instants, deadline, out_dir);
    if (stair->parsed()) return cmd_staircase(stair_scenario, stair_policy, stair_out);
    return 2;
}
