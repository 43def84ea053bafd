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

#include "ehrelay/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace ehrelay {

namespace {

double log2_1p(double snr) { return std::log2(1.0 + snr); }

std::vector<double> prefix_sums(const std::vector<double> &v) {
    std::vector<double> out(v.size());
    std::partial_sum(v.begin(), v.end(), out.begin());
    return out;
}

} // namespace

ChannelModel::ChannelModel(double a_gain, double b_gain, double noise_level)
    : a(a_gain), b(b_gain), noise(noise_level) {
    if (!(b > 0.0)) throw ValidationError("channel gain b must be positive");
    if (!(noise > 0.0)) throw ValidationError("noise level must be positive");
}

ChannelModel ChannelModel::from_physical(double a_gain, double b_gain, double n0_w_per_hz,
                                         double bandwidth_hz, double path_loss_db) {
    if (!(n0_w_per_hz > 0.0) || !(bandwidth_hz > 0.0))
        throw ValidationError("physical noise density and bandwidth must be positive");
    // Received SNR for power P mW over a link with path loss psi dB:
    //   (P * 1e-3 * 10^(-psi/10)) / (N0 * W)
    // Folded into an effective noise level in the mW power unit.
    const double path_gain = std::pow(10.0, -path_loss_db / 10.0);
    const double eff_noise = n0_w_per_hz * bandwidth_hz / (1e-3 * path_gain);
    return ChannelModel(a_gain, b_gain, eff_noise);
}

double ChannelModel::a_dag() const { return std::max(1.0, a * a); }

void ChannelModel::require_relay_usable() const {
    if (a * a < 1.0)
        throw DegenerateRelayError("a^2 < 1: the relay cannot help on this channel");
}

EHProfile::EHProfile(std::vector<double> instants_, std::vector<double> e1_,
                     std::vector<double> e2_, double deadline_)
    : instants(std::move(instants_)), e1(std::move(e1_)), e2(std::move(e2_)),
      deadline(deadline_) {
    if (instants.empty()) throw ValidationError("profile needs at least one harvest instant");
    if (e1.size() != instants.size() || e2.size() != instants.size())
        throw ValidationError("harvest amount arrays must match the instants array");
    if (instants.front() != 0.0) throw ValidationError("first harvest instant must be t = 0");
    for (std::size_t i = 1; i < instants.size(); ++i)
        if (!(instants[i] > instants[i - 1]))
            throw ValidationError("harvest instants must be strictly increasing");
    if (!(instants.back() < deadline))
        throw ValidationError("last harvest instant must precede the deadline");
    for (double e : e1)
        if (e < 0.0) throw ValidationError("harvest amounts must be nonnegative");
    for (double e : e2)
        if (e < 0.0) throw ValidationError("harvest amounts must be nonnegative");
    if (!(e1[0] > 0.0) || !(e2[0] > 0.0))
        throw ValidationError("both nodes must harvest a positive amount at t = 0");
}

double EHProfile::epoch_end(std::size_t i) const {
    return i + 1 < instants.size() ? instants[i + 1] : deadline;
}

std::vector<double> EHProfile::epoch_lengths() const {
    std::vector<double> out(epoch_count());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = epoch_length(i);
    return out;
}

double EHProfile::total_e1() const { return std::accumulate(e1.begin(), e1.end(), 0.0); }
double EHProfile::total_e2() const { return std::accumulate(e2.begin(), e2.end(), 0.0); }

EHProfile profile_from_events(std::vector<HarvestEvent> events, double deadline) {
    std::stable_sort(events.begin(), events.end(),
                     [](const HarvestEvent &a, const HarvestEvent &b) { return a.time < b.time; });
    std::vector<double> t, e1, e2;
    for (const auto &ev : events) {
        if (!t.empty() && ev.time == t.back()) {
            e1.back() += ev.e1;
            e2.back() += ev.e2;
        } else {
            t.push_back(ev.time);
            e1.push_back(ev.e1);
            e2.push_back(ev.e2);
        }
    }
    return EHProfile(std::move(t), std::move(e1), std::move(e2), deadline);
}

std::vector<PowerSchedule::Segment> PowerSchedule::segments(const std::vector<double> &powers,
                                                            const std::vector<double> &lengths) {
    if (powers.size() != lengths.size())
        throw ValidationError("power and length arrays differ in size");
    std::vector<Segment> out;
    for (std::size_t i = 0; i < powers.size(); ++i) {
        if (!out.empty() && std::abs(out.back().power - powers[i]) <= kMergeTol)
            out.back().duration += lengths[i];
        else
            out.push_back({powers[i], lengths[i]});
    }
    return out;
}

TransferSchedule TransferSchedule::zeros(std::size_t n) {
    TransferSchedule t;
    t.d1.assign(n, 0.0);
    t.d2.assign(n, 0.0);
    return t;
}

bool TransferSchedule::all_zero() const {
    auto nz = [](double x) { return x != 0.0; };
    return std::none_of(d1.begin(), d1.end(), nz) && std::none_of(d2.begin(), d2.end(), nz);
}

std::vector<double> TransferSchedule::d1_physical(const ChannelModel &ch) const {
    std::vector<double> out(d1);
    for (double &x : out) x /= ch.b2();
    return out;
}

std::vector<double> TransferSchedule::d2_physical(const ChannelModel &ch) const {
    std::vector<double> out(d2);
    for (double &x : out) x /= ch.b2();
    return out;
}

std::vector<FeasibilityReport::ActiveConstraint> FeasibilityReport::active(double tol) const {
    std::vector<ActiveConstraint> out;
    for (std::size_t k = 0; k < s_slack.size(); ++k)
        if (std::abs(s_slack[k]) <= tol)
            out.push_back({ActiveConstraint::Kind::source, k + 1});
    for (std::size_t k = 0; k < r_slack.size(); ++k)
        if (std::abs(r_slack[k]) <= tol)
            out.push_back({ActiveConstraint::Kind::relay, k + 1});
    for (std::size_t k = 0; k < total_slack.size(); ++k)
        if (std::abs(total_slack[k]) <= tol)
            out.push_back({ActiveConstraint::Kind::total, k + 1});
    return out;
}

RateValue rate_nc(double p1, double p2, const ChannelModel &ch) {
    if (p1 < 0.0 || p2 < 0.0) throw ValidationError("rate_nc: negative power");
    const double mac = log2_1p((p1 + ch.b2() * p2) / ch.noise);
    const double sr = log2_1p(ch.a_dag() * p1 / ch.noise);
    RateValue v;
    v.branches_equal = std::abs(mac - sr) <= 1e-12 * std::max(1.0, std::max(mac, sr));
    if (mac <= sr) {
        v.rate = mac;
        v.branch = RateBranch::n_mac;
    } else {
        v.rate = sr;
        v.branch = RateBranch::s_r;
    }
    return v;
}

double throughput(const PowerSchedule &schedule, const EHProfile &profile,
                  const ChannelModel &ch) {
    const std::size_t n = profile.epoch_count();
    if (schedule.p1.size() != n || schedule.p2.size() != n)
        throw ValidationError("schedule is not defined on the profile's epoch grid");
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        total += rate_nc(schedule.p1[i], schedule.p2[i], ch).rate * profile.epoch_length(i);
    return total;
}

FeasibilityReport check_feasible(const PowerSchedule &schedule, const TransferSchedule &transfers,
                                 const EHProfile &profile, const ChannelModel &ch, EtMode mode) {
    const std::size_t n = profile.epoch_count();
    if (schedule.p1.size() != n || schedule.p2.size() != n)
        throw ValidationError("schedule is not defined on the profile's epoch grid");
    if (transfers.d1.size() != n || transfers.d2.size() != n)
        throw ValidationError("transfer schedule is not defined on the profile's instants");

    const double b2 = ch.b2();
    std::vector<double> d1 = transfers.d1;
    std::vector<double> d2 = transfers.d2;
    if (mode == EtMode::none) {
        d1.assign(n, 0.0);
        d2.assign(n, 0.0);
    } else if (mode == EtMode::one_way) {
        d2.assign(n, 0.0);
    }

    FeasibilityReport rep;
    rep.s_slack.resize(n);
    rep.r_slack.resize(n);
    rep.total_slack.resize(n);

    double used1 = 0.0, used2s = 0.0;      // consumed energy: S (mJ), R (scaled mJ)
    double avail1 = 0.0, avail2s = 0.0;    // available budget per the mode's constraints
    double avail_t = 0.0, used_t = 0.0;    // combined scaled budget
    rep.min_power = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        // harvest (and transfers) at t^k become usable for epoch k
        avail1 += profile.e1[k] - d1[k] + d2[k];
        avail2s += b2 * profile.e2[k] + d1[k] - d2[k];
        avail_t += profile.e1[k] + b2 * profile.e2[k];
        const double l = profile.epoch_length(k);
        used1 += schedule.p1[k] * l;
        used2s += b2 * schedule.p2[k] * l;
        used_t = used1 + used2s;
        rep.s_slack[k] = avail1 - used1;
        rep.r_slack[k] = avail2s - used2s;
        rep.total_slack[k] = avail_t - used_t;
        rep.min_power = std::min({rep.min_power, schedule.p1[k], schedule.p2[k],
                                  transfers.d1[k], transfers.d2[k]});
    }
    bool ok = rep.min_power >= -kFeasibilityTol;
    for (std::size_t k = 0; k < n; ++k)
        ok = ok && rep.s_slack[k] >= -kFeasibilityTol && rep.r_slack[k] >= -kFeasibilityTol &&
             rep.total_slack[k] >= -kFeasibilityTol;
    if (mode == EtMode::two_way)
        for (std::size_t k = 0; k < n; ++k)
            ok = ok && transfers.d1[k] * transfers.d2[k] <= kFeasibilityTol;
    rep.ok = ok;
    return rep;
}

std::vector<double> scaled_totals(const EHProfile &profile, const ChannelModel &ch) {
    std::vector<double> out(profile.harvest_count());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = profile.e1[i] + ch.b2() * profile.e2[i];
    return out;
}

std::vector<double> scaled_totals_cumulative(const EHProfile &profile, const ChannelModel &ch) {
    return prefix_sums(scaled_totals(profile, ch));
}

AllocationResult make_result(PowerSchedule schedule, TransferSchedule transfers,
                             const EHProfile &profile, const ChannelModel &ch, EtMode mode,
                             std::string policy_tag) {
    AllocationResult res;
    res.throughput_mbits = throughput(schedule, profile, ch);
    res.feasibility = check_feasible(schedule, transfers, profile, ch, mode);
    double used1 = 0.0, used2 = 0.0;
    for (std::size_t i = 0; i < profile.epoch_count(); ++i) {
        used1 += schedule.p1[i] * profile.epoch_length(i);
        used2 += schedule.p2[i] * profile.epoch_length(i);
    }
    double net1 = 0.0, net2 = 0.0; // net transfer effect, physical mJ
    for (std::size_t i = 0; i < transfers.d1.size(); ++i) {
        net1 += transfers.d2[i] - transfers.d1[i];
        net2 += (transfers.d1[i] - transfers.d2[i]) / ch.b2();
    }
    res.excess_s = profile.total_e1() + net1 - used1;
    res.excess_r = profile.total_e2() + net2 - used2;
    res.schedule = std::move(schedule);
    res.transfers = std::move(transfers);
    res.policy_tag = std::move(policy_tag);
    return res;
}

} // namespace ehrelay
