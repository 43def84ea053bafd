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

#include "ehrelay/string_policy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace ehrelay {

namespace {
constexpr double kSlopeTieTol = 1e-12; // relative tie tolerance for argmin slopes
}

Staircase::Staircase(std::vector<double> times_, std::vector<double> values_)
    : times(std::move(times_)), values(std::move(values_)) {
    if (times.empty() || times.size() != values.size())
        throw ValidationError("staircase needs matching, nonempty time/value arrays");
    for (std::size_t j = 1; j < times.size(); ++j) {
        if (!(times[j] > times[j - 1]))
            throw ValidationError("staircase times must be strictly increasing");
        if (values[j] < values[j - 1])
            throw ValidationError("staircase values must be non-decreasing");
    }
}

Staircase Staircase::from_harvests(const std::vector<double> &instants,
                                   const std::vector<double> &amounts, double terminal_time) {
    if (instants.empty() || instants.size() != amounts.size())
        throw ValidationError("staircase needs matching, nonempty harvest arrays");
    if (!(terminal_time > instants.back()))
        throw ValidationError("staircase terminal time must follow the last harvest");
    std::vector<double> times, values;
    double cum = 0.0;
    for (std::size_t j = 0; j < instants.size(); ++j) {
        cum += amounts[j];
        // energy harvested at t^j is consumable on (t^j, t^{j+1}]
        const double until = j + 1 < instants.size() ? instants[j + 1] : terminal_time;
        times.push_back(until);
        values.push_back(cum);
    }
    return Staircase(std::move(times), std::move(values));
}

double Staircase::value_at(double t) const {
    auto it = std::lower_bound(times.begin(), times.end(), t);
    if (it == times.end()) return values.back();
    return values[static_cast<std::size_t>(it - times.begin())];
}

double StringSolution::end_energy() const {
    double e = start_energy;
    double t = start_time;
    for (std::size_t i = 0; i < powers.size(); ++i) {
        e += powers[i] * durations[i];
        t = boundary_times[i];
    }
    (void)t;
    return e;
}

double StringSolution::consumed_at(double t) const {
    double e = start_energy;
    double prev = start_time;
    for (std::size_t i = 0; i < powers.size(); ++i) {
        const double seg_end = boundary_times[i];
        if (t <= seg_end) return e + powers[i] * (t - prev);
        e += powers[i] * (seg_end - prev);
        prev = seg_end;
    }
    return e;
}

double StringSolution::power_at(double t) const {
    double prev = start_time;
    for (std::size_t i = 0; i < powers.size(); ++i) {
        if (t < boundary_times[i] || i + 1 == powers.size()) return powers[i];
        prev = boundary_times[i];
    }
    (void)prev;
    return 0.0;
}

StringSolution tight_string(const Staircase &stair, double start_time, double start_energy,
                            double end_time, double end_energy) {
    if (!(start_time < end_time))
        throw ValidationError("tight_string: start time must precede end time");
    if (end_energy < start_energy)
        throw InfeasibleStringError("tight_string: end energy below start energy");
    if (end_energy > stair.value_at(end_time) + 1e-9)
        throw InfeasibleStringError("tight_string: end energy exceeds the staircase");

    // Candidate vertices strictly inside (start, end), capped at the endpoint
    // energy, plus the endpoint itself.
    std::vector<double> ct, cv;
    for (std::size_t j = 0; j < stair.times.size(); ++j) {
        if (stair.times[j] > start_time && stair.times[j] < end_time) {
            ct.push_back(stair.times[j]);
            cv.push_back(std::min(stair.values[j], end_energy));
        }
    }
    ct.push_back(end_time);
    cv.push_back(end_energy);

    StringSolution sol;
    sol.start_time = start_time;
    sol.start_energy = start_energy;

    double cur_t = start_time;
    double cur_e = start_energy;
    std::size_t first = 0;
    while (cur_t < end_time) {
        std::size_t pick = first;
        double best = (cv[first] - cur_e) / (ct[first] - cur_t);
        for (std::size_t j = first + 1; j < ct.size(); ++j) {
            const double slope = (cv[j] - cur_e) / (ct[j] - cur_t);
            const double tol = kSlopeTieTol * std::max(1.0, std::abs(best));
            if (slope < best - tol) {
                best = slope;
                pick = j;
            } else if (slope <= best + tol) {
                pick = j; // tie: latest vertex, fewest segments
            }
        }
        if (best < -1e-9) {
            std::ostringstream msg;
            msg << "tight_string: staircase forces negative power near t=" << ct[pick];
            throw InfeasibleStringError(msg.str());
        }
        const double power = std::max(best, 0.0);
        if (!sol.powers.empty() &&
            std::abs(sol.powers.back() - power) <= kSlopeTieTol * std::max(1.0, power)) {
            sol.durations.back() += ct[pick] - cur_t;
            sol.boundary_times.back() = ct[pick];
        } else {
            sol.powers.push_back(power);
            sol.durations.push_back(ct[pick] - cur_t);
            sol.boundary_times.push_back(ct[pick]);
        }
        cur_t = ct[pick];
        cur_e = cv[pick];
        first = pick + 1;
    }
    return sol;
}

StringSolution single_user_alloc(const std::vector<double> &instants,
                                 const std::vector<double> &amounts, double deadline) {
    const double total = std::accumulate(amounts.begin(), amounts.end(), 0.0);
    return tight_string(Staircase::from_harvests(instants, amounts, deadline), 0.0, 0.0,
                        deadline, total);
}

} // namespace ehrelay
