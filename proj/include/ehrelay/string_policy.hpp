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
#include <vector>

#include "ehrelay/errors.hpp"

namespace ehrelay {

/// Taut-string allocation failed: the requested endpoint cannot be reached
/// without violating the staircase (or without negative power).
class InfeasibleStringError : public ValidationError {
  public:
    explicit InfeasibleStringError(const std::string &what) : ValidationError(what) {}
};

/// Cumulative-energy ceiling. Vertex j caps consumption at times in
/// (times[j-1], times[j]] by values[j]; the last time is the terminal time.
/// Built from harvests, vertex j sits at instant t^{j+1} (or the terminal
/// time) with value sum of amounts harvested strictly before it.
struct Staircase {
    std::vector<double> times;
    std::vector<double> values;

    Staircase(std::vector<double> times, std::vector<double> values);

    static Staircase from_harvests(const std::vector<double> &instants,
                                   const std::vector<double> &amounts, double terminal_time);

    double terminal_time() const { return times.back(); }
    double terminal_value() const { return values.back(); }
    /// Maximum consumable energy by time t.
    double value_at(double t) const;
};

/// Piecewise-constant powers of a taut string between two points in
/// (time, cumulative energy) space.
struct StringSolution {
    std::vector<double> powers;         ///< segment slopes (non-decreasing)
    std::vector<double> durations;      ///< segment lengths, sum to end - start time
    std::vector<double> boundary_times; ///< segment end times (last == end time)
    double start_time = 0.0;
    double start_energy = 0.0;

    double end_time() const { return boundary_times.back(); }
    double end_energy() const;
    /// Cumulative consumption at time t (start_time <= t <= end_time).
    double consumed_at(double t) const;
    /// Power in effect at time t (right-continuous at segment boundaries).
    double power_at(double t) const;
};

/// The taut string from start to end below min(staircase, end energy): pick
/// the minimum-slope vertex repeatedly; ties resolved toward the latest
/// vertex so the result has the fewest segments.
StringSolution tight_string(const Staircase &stair, double start_time, double start_energy,
                            double end_time, double end_energy);

/// Point-to-point optimum: taut string from (0, 0) to (T, total energy).
StringSolution single_user_alloc(const std::vector<double> &instants,
                                 const std::vector<double> &amounts, double deadline);

} // namespace ehrelay
