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

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ehrelay/core.hpp"

namespace ehrelay {

/// Result of a gated policy: either an allocation, or the reason the
/// policy's optimality condition failed.
struct NotApplicable {
    std::string reason;
    std::size_t failing_index = 0; ///< k of the first violated constraint (1-based)
};

struct PolicyOutcome {
    std::optional<AllocationResult> result;
    std::optional<NotApplicable> rejection;

    bool ok() const { return result.has_value(); }
    const AllocationResult &value() const;
};

/// Greedy relay policy for no ET: shortest path for S, then the least relay
/// power that keeps the S-R link the bottleneck. Succeeds only if R can
/// afford that power at every instant.
PolicyOutcome greedy_no_et(const EHProfile &profile, const ChannelModel &ch);

/// Total-power policy for no ET: shortest path on the scaled total staircase,
/// then per-node shortest paths inside slots delimited by total-exhaustion
/// instants, with batteries emptied at each slot boundary.
AllocationResult total_suboptimal_no_et(const EHProfile &profile, const ChannelModel &ch);

/// Separate single-user shortest paths for S and R.
AllocationResult disjoint(const EHProfile &profile, const ChannelModel &ch);

/// One-way S->R transfer policy: shortest path on the scaled total staircase,
/// split so both rate branches are equal; succeeds when S can fund its share.
PolicyOutcome one_way_optimal(const EHProfile &profile, const ChannelModel &ch);

/// Transfer vector for a passed one-way gate: suffix-min cumulative-slack
/// rule; the unique maximal-early-transfer schedule with total exhaustion.
/// p1 is the per-epoch source power. Throws ContractError if the gate fails.
std::vector<double> construct_delta_one_way(const EHProfile &profile,
                                            const std::vector<double> &p1);

/// Two-way transfer policy: always applicable, optimal in general.
AllocationResult two_way_optimal(const EHProfile &profile, const ChannelModel &ch);

/// Transfer vector for the two-way schedule: per-epoch scaled-battery deficit
/// or surplus of R, signed into (d1, d2) so R's causality holds with equality
/// at every instant.
TransferSchedule construct_deltas_two_way(const EHProfile &profile,
                                          const PowerSchedule &schedule,
                                          const ChannelModel &ch);

/// Post-transfer effective harvest patterns under which disjoint single-user
/// allocation reproduces the two-way optimum.
struct ModifiedPatterns {
    std::vector<double> e1;
    std::vector<double> e2;
    /// Diagnostic: false when some per-instant amount is negative. This is
    /// legitimate for constructed transfers — a node may forward previously
    /// stored energy, so its outflow at one instant can exceed that instant's
    /// harvest while the cumulative battery level stays nonnegative. Feed such
    /// patterns through effective_amounts() before building a staircase.
    bool nonnegative = true;
};
ModifiedPatterns modified_eh_patterns(const EHProfile &profile, const TransferSchedule &transfers,
                                      const ChannelModel &ch);

/// Redistribute a per-instant energy pattern that may contain negative
/// entries into an equivalent nonnegative one. Because consumption curves are
/// nondecreasing, a dip in the cumulative pattern also caps every earlier
/// instant, so the binding envelope is the suffix-min of the cumulative sums;
/// the result has the same feasible consumption set and nonnegative amounts.
/// Throws ValidationError if some cumulative sum is itself negative.
std::vector<double> effective_amounts(const std::vector<double> &amounts);

} // namespace ehrelay
