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

#include "ehrelay/policies.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ehrelay/string_policy.hpp"

namespace ehrelay {

namespace {

std::vector<double> per_epoch(const StringSolution &sol, const EHProfile &profile) {
    std::vector<double> out(profile.epoch_count());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = sol.power_at(0.5 * (profile.epoch_start(i) + profile.epoch_end(i)));
    return out;
}

// First k (1-based) where the node's cumulative causality fails, or 0.
std::size_t first_causality_violation(const EHProfile &profile, const std::vector<double> &power,
                                      const std::vector<double> &amounts) {
    double used = 0.0, avail = 0.0;
    for (std::size_t k = 0; k < profile.epoch_count(); ++k) {
        avail += amounts[k];
        used += power[k] * profile.epoch_length(k);
        if (used > avail + kFeasibilityTol) return k + 1;
    }
    return 0;
}

} // namespace

const AllocationResult &PolicyOutcome::value() const {
    if (!result) throw ContractError("policy outcome is NotApplicable: " + rejection->reason);
    return *result;
}

PolicyOutcome greedy_no_et(const EHProfile &profile, const ChannelModel &ch) {
    ch.require_relay_usable();
    PowerSchedule schedule;
    schedule.p1 = per_epoch(single_user_alloc(profile.instants, profile.e1, profile.deadline),
                            profile);
    const double relay_factor = (ch.a_dag() - 1.0) / ch.b2();
    schedule.p2.resize(schedule.p1.size());
    for (std::size_t i = 0; i < schedule.p1.size(); ++i)
        schedule.p2[i] = relay_factor * schedule.p1[i];

    PolicyOutcome out;
    if (std::size_t k = first_causality_violation(profile, schedule.p2, profile.e2); k != 0) {
        std::ostringstream msg;
        msg << "R is not in good EH condition: greedy relay power violates R causality at k=" << k;
        out.rejection = NotApplicable{msg.str(), k};
        return out;
    }
    out.result = make_result(std::move(schedule), TransferSchedule::zeros(profile.harvest_count()),
                             profile, ch, EtMode::none, "greedy");
    return out;
}

AllocationResult disjoint(const EHProfile &profile, const ChannelModel &ch) {
    ch.require_relay_usable();
    PowerSchedule schedule;
    schedule.p1 = per_epoch(single_user_alloc(profile.instants, profile.e1, profile.deadline),
                            profile);
    schedule.p2 = per_epoch(single_user_alloc(profile.instants, profile.e2, profile.deadline),
                            profile);
    return make_result(std::move(schedule), TransferSchedule::zeros(profile.harvest_count()),
                       profile, ch, EtMode::none, "disjoint");
}

AllocationResult total_suboptimal_no_et(const EHProfile &profile, const ChannelModel &ch) {
    ch.require_relay_usable();

    const auto scaled = scaled_totals(profile, ch);
    std::vector<double> unscaled(profile.harvest_count());
    for (std::size_t i = 0; i < unscaled.size(); ++i)
        unscaled[i] = profile.e1[i] + profile.e2[i];

    const auto stair_s = Staircase::from_harvests(profile.instants, scaled, profile.deadline);
    const auto stair_u = Staircase::from_harvests(profile.instants, unscaled, profile.deadline);
    const auto string_s = tight_string(stair_s, 0.0, 0.0, profile.deadline,
                                       stair_s.terminal_value());
    const auto string_u = tight_string(stair_u, 0.0, 0.0, profile.deadline,
                                       stair_u.terminal_value());

    // Slot boundaries: instants where the network's total energy is exhausted
    // under both the scaled and the unscaled accounting, plus T. Only there
    // can both nodes empty their batteries.
    std::vector<double> boundaries;
    for (std::size_t k = 1; k < profile.harvest_count(); ++k) {
        const double tau = profile.instants[k];
        const bool tight_scaled =
            string_s.consumed_at(tau) >= stair_s.value_at(tau) - kFeasibilityTol;
        const bool tight_unscaled =
            string_u.consumed_at(tau) >= stair_u.value_at(tau) - kFeasibilityTol;
        if (tight_scaled && tight_unscaled) boundaries.push_back(tau);
    }
    boundaries.push_back(profile.deadline);

    const auto stair1 = Staircase::from_harvests(profile.instants, profile.e1, profile.deadline);
    const auto stair2 = Staircase::from_harvests(profile.instants, profile.e2, profile.deadline);

    PowerSchedule schedule;
    schedule.p1.resize(profile.epoch_count());
    schedule.p2.resize(profile.epoch_count());
    auto fill = [&](const Staircase &stair, std::vector<double> &powers) {
        double t0 = 0.0, en0 = 0.0;
        for (double tau : boundaries) {
            // empty the battery: consume everything harvested before tau
            const double en1 = stair.value_at(tau);
            const auto seg = tight_string(stair, t0, en0, tau, en1);
            for (std::size_t i = 0; i < profile.epoch_count(); ++i) {
                const double mid = 0.5 * (profile.epoch_start(i) + profile.epoch_end(i));
                if (mid > t0 && mid < tau) powers[i] = seg.power_at(mid);
            }
            t0 = tau;
            en0 = en1;
        }
    };
    fill(stair1, schedule.p1);
    fill(stair2, schedule.p2);

    return make_result(std::move(schedule), TransferSchedule::zeros(profile.harvest_count()),
                       profile, ch, EtMode::none, "total-subopt");
}

std::vector<double> construct_delta_one_way(const EHProfile &profile,
                                            const std::vector<double> &p1) {
    const std::size_t n = profile.epoch_count();
    if (p1.size() != n) throw ValidationError("p1 is not defined on the profile's epoch grid");
    std::vector<double> slack(n);
    double used = 0.0, avail = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        avail += profile.e1[k];
        used += p1[k] * profile.epoch_length(k);
        slack[k] = avail - used;
        if (slack[k] < -kFeasibilityTol)
            throw ContractError("construct_delta_one_way called with a failed gate");
    }
    // cumulative transfer through instant m is capped by every later slack
    std::vector<double> cum(n);
    double suffix_min = slack[n - 1];
    for (std::size_t m = n; m-- > 0;) {
        suffix_min = std::min(suffix_min, slack[m]);
        cum[m] = suffix_min;
    }
    std::vector<double> delta(n);
    double prev = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
        delta[m] = std::max(cum[m] - prev, 0.0);
        prev = cum[m];
    }
    return delta;
}

namespace {

// Shared by the one-way and two-way policies: total string on the scaled
// staircase, split so both rate branches are equal in every epoch.
struct TotalSplit {
    std::vector<double> pt;
    PowerSchedule schedule;
};

TotalSplit split_total(const EHProfile &profile, const ChannelModel &ch) {
    const auto scaled = scaled_totals(profile, ch);
    const auto sol = single_user_alloc(profile.instants, scaled, profile.deadline);
    TotalSplit out;
    out.pt = per_epoch(sol, profile);
    const double adag = ch.a_dag();
    out.schedule.p1.resize(out.pt.size());
    out.schedule.p2.resize(out.pt.size());
    for (std::size_t i = 0; i < out.pt.size(); ++i) {
        out.schedule.p1[i] = out.pt[i] / adag;
        out.schedule.p2[i] = (adag - 1.0) * out.pt[i] / (adag * ch.b2());
    }
    return out;
}

} // namespace

PolicyOutcome one_way_optimal(const EHProfile &profile, const ChannelModel &ch) {
    ch.require_relay_usable();
    auto split = split_total(profile, ch);

    PolicyOutcome out;
    if (std::size_t k = first_causality_violation(profile, split.schedule.p1, profile.e1);
        k != 0) {
        std::ostringstream msg;
        msg << "S is not in good EH condition: no delta >= 0 exists, S causality fails at k="
            << k;
        out.rejection = NotApplicable{msg.str(), k};
        return out;
    }
    TransferSchedule transfers = TransferSchedule::zeros(profile.harvest_count());
    transfers.d1 = construct_delta_one_way(profile, split.schedule.p1);
    out.result = make_result(std::move(split.schedule), std::move(transfers), profile, ch,
                             EtMode::one_way, "one-way");
    return out;
}

TransferSchedule construct_deltas_two_way(const EHProfile &profile, const PowerSchedule &schedule,
                                          const ChannelModel &ch) {
    const std::size_t n = profile.epoch_count();
    if (schedule.p2.size() != n)
        throw ValidationError("schedule is not defined on the profile's epoch grid");
    TransferSchedule transfers = TransferSchedule::zeros(n);
    const double b2 = ch.b2();
    for (std::size_t i = 0; i < n; ++i) {
        // R's scaled-battery surplus in epoch i; deficit is funded by S
        const double surplus = b2 * profile.e2[i] - b2 * schedule.p2[i] * profile.epoch_length(i);
        if (surplus >= 0.0)
            transfers.d2[i] = surplus;
        else
            transfers.d1[i] = -surplus;
    }
    return transfers;
}

AllocationResult two_way_optimal(const EHProfile &profile, const ChannelModel &ch) {
    ch.require_relay_usable();
    auto split = split_total(profile, ch);
    auto transfers = construct_deltas_two_way(profile, split.schedule, ch);
    return make_result(std::move(split.schedule), std::move(transfers), profile, ch,
                       EtMode::two_way, "two-way");
}

ModifiedPatterns modified_eh_patterns(const EHProfile &profile, const TransferSchedule &transfers,
                                      const ChannelModel &ch) {
    const std::size_t n = profile.harvest_count();
    if (transfers.d1.size() != n || transfers.d2.size() != n)
        throw ValidationError("transfers are not defined on the profile's instants");
    ModifiedPatterns out;
    out.e1.resize(n);
    out.e2.resize(n);
    const double b2 = ch.b2();
    for (std::size_t i = 0; i < n; ++i) {
        out.e1[i] = profile.e1[i] - transfers.d1[i] + transfers.d2[i];
        out.e2[i] = profile.e2[i] - transfers.d2[i] / b2 + transfers.d1[i] / b2;
        if (out.e1[i] < -kFeasibilityTol || out.e2[i] < -kFeasibilityTol) out.nonnegative = false;
    }
    return out;
}

std::vector<double> effective_amounts(const std::vector<double> &amounts) {
    std::vector<double> cum(amounts.size());
    double c = 0.0;
    for (std::size_t i = 0; i < amounts.size(); ++i) {
        c += amounts[i];
        cum[i] = c;
    }
    for (std::size_t i = amounts.size(); i-- > 1;) cum[i - 1] = std::min(cum[i - 1], cum[i]);
    if (!cum.empty() && cum.front() < -kFeasibilityTol)
        throw ValidationError("energy pattern has a negative cumulative sum");
    std::vector<double> out(amounts.size());
    double prev = 0.0;
    for (std::size_t i = 0; i < amounts.size(); ++i) {
        out[i] = std::max(cum[i] - prev, 0.0);
        prev = cum[i];
    }
    return out;
}

} // namespace ehrelay
