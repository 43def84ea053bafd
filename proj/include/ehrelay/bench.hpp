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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ehrelay/core.hpp"
#include "ehrelay/policies.hpp"
#include "ehrelay/solver.hpp"

namespace ehrelay {

/// A named problem instance: channel plus harvest profile.
struct Scenario {
    std::string name;
    ChannelModel channel;
    EHProfile profile;
};

/// Parse a scenario from its JSON text. `origin` is prepended to error
/// messages (typically the file path). A `channel.physical` block
/// (n0_w_per_hz, bandwidth_hz, path_loss_db) is converted to the normalized
/// noise level at parse time.
Scenario parse_scenario_text(const std::string &text, const std::string &origin = "");
Scenario load_scenario(const std::string &path);

/// Canonical serialization: sorted keys, two-space indent, trailing newline.
/// save then load then save reproduces the bytes exactly.
std::string scenario_to_text(const Scenario &scenario);
void save_scenario(const Scenario &scenario, const std::string &path);

std::string result_to_text(const AllocationResult &result);
void save_result(const AllocationResult &result, const std::string &path);

/// Deterministic scenarios with integer-mJ Poisson harvests at the given
/// instants. The stream comes from splitmix64 seeded with `seed`; per
/// scenario the draws are e1[0..K] then e2[0..K], and a zero first draw for
/// either node is redrawn until positive.
std::vector<Scenario> generate_poisson(std::uint64_t seed, std::size_t count, double mean_mj,
                                       const std::vector<double> &instants, double deadline);

/// One scenario's throughput per policy column; empty optionals mean the
/// policy was not applicable, `error` is set when the whole row failed.
struct ComparisonRow {
    std::string name;
    std::optional<double> algorithm2;
    std::optional<double> disjoint;
    std::optional<double> no_et_optimal;
    std::optional<double> one_way_optimal;
    std::optional<double> two_way_optimal;
    std::optional<double> greedy;  ///< engaged only when the greedy gate passes
    std::optional<double> one_way; ///< algorithmic one-way, when its gate passes
    std::string error;
};

std::vector<ComparisonRow> run_comparison(const std::vector<Scenario> &scenarios,
                                          const SolverConfig &cfg = {});
std::string render_comparison_markdown(const std::vector<ComparisonRow> &rows);
std::string render_comparison_csv(const std::vector<ComparisonRow> &rows);
std::string render_comparison_json(const std::vector<ComparisonRow> &rows);

/// Cumulative harvested/consumed curves sampled at t = 0, every harvest
/// instant and the deadline. Totals are in the b^2-scaled domain; the
/// modified-pattern columns account for the result's transfers.
std::string staircase_csv(const Scenario &scenario, const AllocationResult &result);
void emit_staircase(const Scenario &scenario, const AllocationResult &result,
                    const std::string &path);

/// Run one policy or solver mode by its CLI name: greedy, total-subopt,
/// disjoint, one-way, two-way, solve-no-et, solve-one-way, solve-two-way.
/// Unknown names throw ValidationError.
PolicyOutcome run_policy(const Scenario &scenario, const std::string &policy,
                         const SolverConfig &cfg = {});

} // namespace ehrelay
