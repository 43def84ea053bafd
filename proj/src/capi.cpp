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

#include "ehrelay.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "ehrelay/bench.hpp"

struct relay_scenario {
    ehrelay::Scenario s;
};

struct relay_result {
    ehrelay::AllocationResult r;
};

namespace {

thread_local std::string g_last_error = "no error";

relay_status fail(relay_status code, const std::string &msg) {
    g_last_error = msg;
    return code;
}

/// Runs f, translating exceptions into status codes.
template <typename F> relay_status guarded(F &&f) {
    try {
        return f();
    } catch (const ehrelay::SolverError &e) {
        return fail(RELAY_ERR_NO_CONVERGENCE, e.what());
    } catch (const ehrelay::DegenerateRelayError &e) {
        return fail(RELAY_ERR_VALIDATION, e.what());
    } catch (const ehrelay::ValidationError &e) {
        return fail(RELAY_ERR_VALIDATION, e.what());
    } catch (const std::exception &e) {
        return fail(RELAY_ERR_INTERNAL, e.what());
    }
}

char *dup_string(const std::string &s) {
    char *out = static_cast<char *>(std::malloc(s.size() + 1));
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

} // namespace

extern "C" {

const char *relay_last_error(void) { return g_last_error.c_str(); }

void relay_string_free(char *s) { std::free(s); }

relay_status relay_scenario_load(const char *path, relay_scenario **out) {
    if (!path || !out) return fail(RELAY_ERR_INVALID_ARG, "null argument");
    return guarded([&] {
        *out = new relay_scenario{ehrelay::load_scenario(path)};
        return RELAY_OK;
    });
}

relay_status relay_scenario_parse(const char *json_text, relay_scenario **out) {
    if (!json_text || !out) return fail(RELAY_ERR_INVALID_ARG, "null argument");
    return guarded([&] {
        *out = new relay_scenario{ehrelay::parse_scenario_text(json_text)};
        return RELAY_OK;
    });
}

relay_status relay_scenario_save(const relay_scenario *scenario, const char *path) {
    if (!scenario || !path) return fail(RELAY_ERR_INVALID_ARG, "null argument");
    return guarded([&] {
        ehrelay::save_scenario(scenario->s, path);
        return RELAY_OK;
    });
}

relay_status relay_scenario_to_json(const relay_scenario *scenario, char **out) {
    if (!scenario || !out) return fail(RELAY_ERR_INVALID_ARG, "null argument");
    return guarded([&] {
        *out = dup_string(ehrelay::scenario_to_text(scenario->s));
        return *out ? RELAY_OK : fail(RELAY_ERR_INTERNAL, "allocation failed");
    });
}

const char *relay_scenario_name(const relay_scenario *scenario) {
    return scenario ? scenario->s.name.c_str() : "";
}

void relay_scenario_free(relay_scenario *scenario) { delete scenario; }

relay_status relay_generate(uint64_t seed, size_t count, double mean_mj,
                            const double *instants, size_t instant_count, double deadline,
                            relay_scenario ***out_array) {
    if (!instants || !out_array) return fail(RELAY_ERR_INVALID_ARG, "null argument");
    return guarded([&] {
        std::vector<double> t(instants, instants + instant_count);
        auto scenarios = ehrelay::generate_poisson(seed, count, mean_mj, t, deadline);
        auto **arr = static_cast<relay_scenario **>(
            std::malloc(sizeof(relay_scenario *) * std::max<size_t>(count, 1)));
        if (!arr) return fail(RELAY_ERR_INTERNAL, "allocation failed");
        for (size_t i = 0; i < scenarios.size(); ++i)
            arr[i] = new relay_scenario{std::move(scenarios[i])};
        *out_array = arr;
        return RELAY_OK;
    });
}

void relay_scenario_array_free(relay_scenario **array, size_t count) {
    if (!array) return;
    for (size_t i = 0; i < count; ++i) delete array[i];
    std::free(array);
}

relay_status relay_alloc(const relay_scenario *scenario, const char *policy,
                         relay_result **out) {
    if (!scenario || !policy || !out) return fail(RELAY_ERR_INVALID_ARG, "null argument");
    return guarded([&] {
        auto outcome = ehrelay::run_policy(scenario->s, policy);
        if (!outcome.ok())
            return fail(RELAY_ERR_NOT_APPLICABLE, outcome.rejection->reason);
        *out = new relay_result{std::move(*outcome.result)};
        return RELAY_OK;
    });
}

size_t relay_result_epoch_count(const relay_result *result) {
    return result ? result->r.schedule.p1.size() : 0;
}

double relay_result_throughput(const relay_result *result) {
    return result ? result->r.throughput_mbits : 0.0;
}

relay_status relay_result_powers(const relay_result *result, double *p1, double *p2) {
    if (!result) return fail(RELAY_ERR_INVALID_ARG, "null argument");
    const auto &s = result->r.schedule;
    if (p1) std::memcpy(p1, s.p1.data(), s.p1.size() * sizeof(double));
    if (p2) std::memcpy(p2, s.p2.data(), s.p2.size() * sizeof(double));
    return RELAY_OK;
}

relay_status relay_result_transfers(const relay_result *result, double *d1, double *d2) {
    if (!result) return fail(RELAY_ERR_INVALID_ARG, "null argument");
    const auto &t = result->r.transfers;
    if (d1) std::memcpy(d1, t.d1.data(), t.d1.size() * sizeof(double));
    if (d2) std::memcpy(d2, t.d2.data(), t.d2.size() * sizeof(double));
    return RELAY_OK;
}

relay_status relay_result_to_json(const relay_result *result, char **out) {
    if (!result || !out) return fail(RELAY_ERR_INVALID_ARG, "null argument");
    return guarded([&] {
        *out = dup_string(ehrelay::result_to_text(result->r));
        return *out ? RELAY_OK : fail(RELAY_ERR_INTERNAL, "allocation failed");
    });
}

relay_status relay_result_save(const relay_result *result, const char *path) {
    if (!result || !path) return fail(RELAY_ERR_INVALID_ARG, "null argument");
    return guarded([&] {
        ehrelay::save_result(result->r, path);
        return RELAY_OK;
    });
}

void relay_result_free(relay_result *result) { delete result; }

relay_status relay_staircase_csv(const relay_scenario *scenario, const relay_result *result,
                                 char **out) {
    if (!scenario || !result || !out) return fail(RELAY_ERR_INVALID_ARG, "null argument");
    return guarded([&] {
        *out = dup_string(ehrelay::staircase_csv(scenario->s, result->r));
        return *out ? RELAY_OK : fail(RELAY_ERR_INTERNAL, "allocation failed");
    });
}

relay_status relay_compare(const relay_scenario *const *scenarios, size_t count,
                           const char *format, char **out) {
    if (!scenarios || !format || !out) return fail(RELAY_ERR_INVALID_ARG, "null argument");
    return guarded([&] {
        std::vector<ehrelay::Scenario> list;
        list.reserve(count);
        for (size_t i = 0; i < count; ++i) {
            if (!scenarios[i]) return fail(RELAY_ERR_INVALID_ARG, "null scenario in array");
            list.push_back(scenarios[i]->s);
        }
        const auto rows = ehrelay::run_comparison(list);
        std::string text;
        const std::string fmt = format;
        if (fmt == "md")
            text = ehrelay::render_comparison_markdown(rows);
        else if (fmt == "csv")
            text = ehrelay::render_comparison_csv(rows);
        else if (fmt == "json")
            text = ehrelay::render_comparison_json(rows);
        else
            return fail(RELAY_ERR_INVALID_ARG, "unknown format: " + fmt);
        *out = dup_string(text);
        return *out ? RELAY_OK : fail(RELAY_ERR_INTERNAL, "allocation failed");
    });
}

} // extern "C"
