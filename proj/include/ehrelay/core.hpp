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

#include <cstddef>
#include <string>
#include <vector>

#include "ehrelay/errors.hpp"

namespace ehrelay {

/// Feasibility slack below this (in mJ) counts as a violation.
inline constexpr double kFeasibilityTol = 1e-9;

/// Adjacent schedule segments whose powers differ by less than this (mW) are merged.
inline constexpr double kMergeTol = 1e-12;

/// Channel gains and noise normalization. With the default noise of 1.0 and
/// powers in mW the received SNR is numerically equal to the power, which is
/// the normalization induced by N0 = 1e-19 W/Hz, W = 1 MHz, 100 dB path loss.
struct ChannelModel {
    double a = 2.0;     ///< S->R amplitude gain
    double b = 2.0;     ///< R->D amplitude gain
    double noise = 1.0; ///< effective noise level, same unit as powers

    ChannelModel() = default;
    ChannelModel(double a_gain, double b_gain, double noise_level = 1.0);

    /// Build from raw physical parameters (noise density W/Hz, bandwidth Hz,
    /// path loss dB, powers in mW).
    static ChannelModel from_physical(double a_gain, double b_gain, double n0_w_per_hz,
                                      double bandwidth_hz, double path_loss_db);

    double a_dag() const; ///< max(1, a^2)
    double b2() const { return b * b; }

    /// Relay policies require a^2 >= 1; throws DegenerateRelayError otherwise.
    void require_relay_usable() const;
};

/// Harvest instants and amounts for both nodes plus the deadline.
/// Epoch i (0-based, i = 0..K) spans (t^i, t^{i+1}] with t^{K+1} = deadline.
struct EHProfile {
    std::vector<double> instants; ///< t^0..t^K, t^0 = 0, strictly increasing, < deadline
    std::vector<double> e1;       ///< S harvest amounts (mJ), index 0..K
    std::vector<double> e2;       ///< R harvest amounts (mJ), index 0..K
    double deadline = 0.0;        ///< T (s)

    EHProfile(std::vector<double> instants, std::vector<double> e1, std::vector<double> e2,
              double deadline);

    std::size_t harvest_count() const { return instants.size(); } ///< K+1
    std::size_t epoch_count() const { return instants.size(); }   ///< K+1 epochs
    double epoch_start(std::size_t i) const { return instants[i]; }
    double epoch_end(std::size_t i) const;
    double epoch_length(std::size_t i) const { return epoch_end(i) - epoch_start(i); }
    std::vector<double> epoch_lengths() const;

    double total_e1() const;
    double total_e2() const;
};

/// Merge a list of (time, e1, e2) harvest events into a valid profile: events
/// are sorted by time and equal-time amounts are summed.
struct HarvestEvent {
    double time;
    double e1;
    double e2;
};
EHProfile profile_from_events(std::vector<HarvestEvent> events, double deadline);

/// Per-epoch transmit powers for S and R (mW), on a profile's epoch grid.
struct PowerSchedule {
    std::vector<double> p1; ///< S power per epoch
    std::vector<double> p2; ///< R power per epoch

    struct Segment {
        double power;
        double duration;
    };

    /// Canonical merged (power, duration) view of one node's powers.
    static std::vector<Segment> segments(const std::vector<double> &powers,
                                         const std::vector<double> &lengths);
};

/// Energy transfers at each harvest instant, stored in the b^2-scaled domain
/// (the domain in which they enter R's causality constraint unscaled).
struct TransferSchedule {
    std::vector<double> d1; ///< S->R transfer at t^i (scaled mJ)
    std::vector<double> d2; ///< R->S transfer at t^i (scaled mJ)

    static TransferSchedule zeros(std::size_t n);
    bool all_zero() const;
    /// R's physical energy gain from d1 is d1/b^2; accessor for that view.
    std::vector<double> d1_physical(const ChannelModel &ch) const;
    std::vector<double> d2_physical(const ChannelModel &ch) const;
};

enum class EtMode { none, one_way, two_way };

/// Slack values of every cumulative constraint, evaluated at each harvest
/// instant t^1..t^K and at T (index k-1 holds the constraint for k).
struct FeasibilityReport {
    std::vector<double> s_slack;     ///< source causality slacks (mJ)
    std::vector<double> r_slack;     ///< relay causality slacks (scaled mJ)
    std::vector<double> total_slack; ///< combined-constraint slacks (scaled mJ)
    double min_power = 0.0;          ///< most negative power (nonnegativity check)
    bool ok = false;

    struct ActiveConstraint {
        enum class Kind { source, relay, total } kind;
        std::size_t index; ///< k, 1-based as in the constraint system
    };
    std::vector<ActiveConstraint> active(double tol = 1e-9) const;
};

enum class RateBranch { n_mac, s_r };

struct RateValue {
    double rate;          ///< Mbits/s
    RateBranch branch;    ///< which term of the minimum is binding
    bool branches_equal;  ///< both terms equal (within 1e-12 relative)
};

/// Noncoherent DF rate: min{ log2(1+(p1+b^2 p2)/N0), log2(1+[a^2]^dag p1/N0) }.
RateValue rate_nc(double p1, double p2, const ChannelModel &ch);

/// Total transmitted bits of a schedule over the profile's epochs (Mbits).
double throughput(const PowerSchedule &schedule, const EHProfile &profile,
                  const ChannelModel &ch);

/// Evaluate every cumulative causality constraint of the selected mode.
/// Mode one_way forces d2 == 0.
FeasibilityReport check_feasible(const PowerSchedule &schedule, const TransferSchedule &transfers,
                                 const EHProfile &profile, const ChannelModel &ch, EtMode mode);

/// Per-instant scaled totals Etilde^i = e1^i + b^2 e2^i.
std::vector<double> scaled_totals(const EHProfile &profile, const ChannelModel &ch);
/// Cumulative sums of the scaled totals.
std::vector<double> scaled_totals_cumulative(const EHProfile &profile, const ChannelModel &ch);

/// Schedule + transfers + throughput + diagnostics, as returned by every policy.
struct AllocationResult {
    PowerSchedule schedule;
    TransferSchedule transfers;
    double throughput_mbits = 0.0;
    FeasibilityReport feasibility;
    double excess_s = 0.0; ///< unused S energy at T (mJ)
    double excess_r = 0.0; ///< unused R energy at T (mJ)
    std::string policy_tag;
};

/// Assemble a result from a schedule: recomputes throughput, feasibility and
/// per-node excess energy from scratch.
AllocationResult make_result(PowerSchedule schedule, TransferSchedule transfers,
                             const EHProfile &profile, const ChannelModel &ch, EtMode mode,
                             std::string policy_tag);

} // namespace ehrelay
