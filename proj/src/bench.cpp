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

#include "ehrelay/bench.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace ehrelay {

namespace {

using nlohmann::json;

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write file: " + path);
    out << text;
}

std::string fixed4(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

std::string cell(const std::optional<double> &v) { return v ? fixed4(*v) : "n/a"; }

/// splitmix64: the documented generator behind generate_poisson.
struct SplitMix64 {
    std::uint64_t state;
    std::uint64_t next() {
        state += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

/// Poisson draw by CDF inversion, so the stream is reproducible from the
/// uniform stream alone.
unsigned poisson_inverse(double u, double mean) {
    double p = std::exp(-mean);
    double cdf = p;
    unsigned k = 0;
    while (u > cdf && p > 0.0) {
        ++k;
        p *= mean / static_cast<double>(k);
        cdf += p;
    }
    return k;
}

} // namespace

Scenario parse_scenario_text(const std::string &text, const std::string &origin) {
    const std::string where = origin.empty() ? "scenario" : origin;
    try {
        const json j = json::parse(text);
        const json &jc = j.at("channel");
        const double a = jc.at("a").get<double>();
        const double b = jc.at("b").get<double>();
        ChannelModel ch(a, b);
        if (jc.contains("physical")) {
            const json &jp = jc.at("physical");
            ch = ChannelModel::from_physical(a, b, jp.at("n0_w_per_hz").get<double>(),
                                             jp.at("bandwidth_hz").get<double>(),
                                             jp.at("path_loss_db").get<double>());
        } else {
            ch = ChannelModel(a, b, jc.value("noise", 1.0));
        }
        const json &jp = j.at("profile");
        EHProfile profile(jp.at("instants").get<std::vector<double>>(),
                          jp.at("e1").get<std::vector<double>>(),
                          jp.at("e2").get<std::vector<double>>(),
                          jp.at("deadline").get<double>());
        return Scenario{j.value("name", ""), ch, std::move(profile)};
    } catch (const json::exception &e) {
        throw ValidationError(where + ": " + e.what());
    } catch (const ValidationError &e) {
        throw ValidationError(where + ": " + e.what());
    }
}

Scenario load_scenario(const std::string &path) {
    return parse_scenario_text(read_file(path), path);
}

std::string scenario_to_text(const Scenario &scenario) {
    json j;
    j["name"] = scenario.name;
    j["channel"] = {{"a", scenario.channel.a},
                    {"b", scenario.channel.b},
                    {"noise", scenario.channel.noise}};
    j["profile"] = {{"instants", scenario.profile.instants},
                    {"e1", scenario.profile.e1},
                    {"e2", scenario.profile.e2},
                    {"deadline", scenario.profile.deadline}};
    return j.dump(2) + "\n";
}

void save_scenario(const Scenario &scenario, const std::string &path) {
    write_file(path, scenario_to_text(scenario));
}

std::string result_to_text(const AllocationResult &result) {
    json j;
    j["policy"] = result.policy_tag;
    j["throughput_mbits"] = result.throughput_mbits;
    j["p1"] = result.schedule.p1;
    j["p2"] = result.schedule.p2;
    j["d1_scaled"] = result.transfers.d1;
    j["d2_scaled"] = result.transfers.d2;
    j["excess_s"] = result.excess_s;
    j["excess_r"] = result.excess_r;
    j["feasible"] = result.feasibility.ok;
    return j.dump(2) + "\n";
}

void save_result(const AllocationResult &result, const std::string &path) {
    write_file(path, result_to_text(result));
}

std::vector<Scenario> generate_poisson(std::uint64_t seed, std::size_t count, double mean_mj,
                                       const std::vector<double> &instants, double deadline) {
    if (!(mean_mj > 0.0)) throw ValidationError("poisson mean must be positive");
    SplitMix64 rng{seed};
    std::vector<Scenario> out;
    out.reserve(count);
    for (std::size_t s = 0; s < count; ++s) {
        auto draw_node = [&]() {
            std::vector<double> e(instants.size());
            for (std::size_t i = 0; i < e.size(); ++i) {
                double v;
                do {
                    v = static_cast<double>(poisson_inverse(rng.uniform01(), mean_mj));
                } while (i == 0 && v == 0.0);
                e[i] = v;
            }
            return e;
        };
        auto e1 = draw_node();
        auto e2 = draw_node();
        std::ostringstream name;
        name << "poisson-" << seed << "-" << s;
        out.push_back(Scenario{name.str(), ChannelModel(),
                               EHProfile(instants, std::move(e1), std::move(e2), deadline)});
    }
    return out;
}

PolicyOutcome run_policy(const Scenario &scenario, const std::string &policy,
                         const SolverConfig &cfg) {
    const EHProfile &p = scenario.profile;
    const ChannelModel &ch = scenario.channel;
    PolicyOutcome out;
    if (policy == "greedy") return greedy_no_et(p, ch);
    if (policy == "one-way") return one_way_optimal(p, ch);
    if (policy == "total-subopt")
        out.result = total_suboptimal_no_et(p, ch);
    else if (policy == "disjoint")
        out.result = disjoint(p, ch);
    else if (policy == "two-way")
        out.result = two_way_optimal(p, ch);
    else if (policy == "solve-no-et")
        out.result = solve_no_et(p, ch, cfg);
    else if (policy == "solve-one-way")
        out.result = solve_one_way(p, ch, cfg);
    else if (policy == "solve-two-way")
        out.result = solve_two_way(p, ch, cfg);
    else
        throw ValidationError("unknown policy: " + policy);
    return out;
}

std::vector<ComparisonRow> run_comparison(const std::vector<Scenario> &scenarios,
                                          const SolverConfig &cfg) {
    std::vector<ComparisonRow> rows;
    rows.reserve(scenarios.size());
    for (const Scenario &sc : scenarios) {
        ComparisonRow row;
        row.name = sc.name;
        try {
            row.algorithm2 = total_suboptimal_no_et(sc.profile, sc.channel).throughput_mbits;
            row.disjoint = disjoint(sc.profile, sc.channel).throughput_mbits;
            row.no_et_optimal = solve_no_et(sc.profile, sc.channel, cfg).throughput_mbits;
            row.one_way_optimal = solve_one_way(sc.profile, sc.channel, cfg).throughput_mbits;
            row.two_way_optimal = two_way_optimal(sc.profile, sc.channel).throughput_mbits;
            if (auto g = greedy_no_et(sc.profile, sc.channel); g.ok())
                row.greedy = g.value().throughput_mbits;
            if (auto o = one_way_optimal(sc.profile, sc.channel); o.ok())
                row.one_way = o.value().throughput_mbits;
        } catch (const std::exception &e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string render_comparison_markdown(const std::vector<ComparisonRow> &rows) {
    std::ostringstream out;
    out << "| Scenario | Algorithm 2 | Disjoint | No-ET optimal | One-way optimal "
           "| Two-way optimal | Algorithm 1 | Algorithm 3 | Error |\n";
    out << "|---|---|---|---|---|---|---|---|---|\n";
    for (const auto &r : rows)
        out << "| " << r.name << " | " << cell(r.algorithm2) << " | " << cell(r.disjoint)
            << " | " << cell(r.no_et_optimal) << " | " << cell(r.one_way_optimal) << " | "
            << cell(r.two_way_optimal) << " | " << cell(r.greedy) << " | " << cell(r.one_way)
            << " | " << r.error << " |\n";
    return out.str();
}

std::string render_comparison_csv(const std::vector<ComparisonRow> &rows) {
    std::ostringstream out;
    out << "scenario,algorithm2,disjoint,no_et_optimal,one_way_optimal,two_way_optimal,"
           "algorithm1,algorithm3,error\n";
    for (const auto &r : rows)
        out << r.name << ',' << cell(r.algorithm2) << ',' << cell(r.disjoint) << ','
            << cell(r.no_et_optimal) << ',' << cell(r.one_way_optimal) << ','
            << cell(r.two_way_optimal) << ',' << cell(r.greedy) << ',' << cell(r.one_way) << ','
            << r.error << '\n';
    return out.str();
}

std::string render_comparison_json(const std::vector<ComparisonRow> &rows) {
    json arr = json::array();
    for (const auto &r : rows) {
        json j;
        j["scenario"] = r.name;
        auto put = [&](const char *key, const std::optional<double> &v) {
            if (v)
                j[key] = *v;
            else
                j[key] = nullptr;
        };
        put("algorithm2", r.algorithm2);
        put("disjoint", r.disjoint);
        put("no_et_optimal", r.no_et_optimal);
        put("one_way_optimal", r.one_way_optimal);
        put("two_way_optimal", r.two_way_optimal);
        put("algorithm1", r.greedy);
        put("algorithm3", r.one_way);
        j["error"] = r.error;
        arr.push_back(std::move(j));
    }
    return arr.dump(2) + "\n";
}

std::string staircase_csv(const Scenario &scenario, const AllocationResult &result) {
    const EHProfile &p = scenario.profile;
    const double b2 = scenario.channel.b2();
    if (result.schedule.p1.size() != p.epoch_count() ||
        result.schedule.p2.size() != p.epoch_count())
        throw ValidationError("result is not defined on the scenario's epoch grid");

    const auto modified = modified_eh_patterns(p, result.transfers, scenario.channel);

    auto harvested = [&](const std::vector<double> &amounts, double t) {
        double cum = 0.0;
        for (std::size_t i = 0; i < p.harvest_count(); ++i)
            if (p.instants[i] <= t) cum += amounts[i];
        return cum;
    };
    auto consumed = [&](const std::vector<double> &power, double t) {
        double cum = 0.0;
        for (std::size_t i = 0; i < p.epoch_count(); ++i) {
            const double len =
                std::min(std::max(t - p.epoch_start(i), 0.0), p.epoch_length(i));
            cum += power[i] * len;
        }
        return cum;
    };

    std::vector<double> times = p.instants;
    times.push_back(p.deadline);

    std::ostringstream out;
    out.precision(15);
    out << "time,harvested_s,harvested_r,consumed_s,consumed_r,"
           "harvested_total_scaled,consumed_total_scaled,modified_s,modified_r\n";
    for (double t : times) {
        const double h1 = harvested(p.e1, t);
        const double h2 = harvested(p.e2, t);
        const double c1 = consumed(result.schedule.p1, t);
        const double c2 = consumed(result.schedule.p2, t);
        out << t << ',' << h1 << ',' << h2 << ',' << c1 << ',' << c2 << ','
            << h1 + b2 * h2 << ',' << c1 + b2 * c2 << ',' << harvested(modified.e1, t) << ','
            << harvested(modified.e2, t) << '\n';
    }
    return out.str();
}

void emit_staircase(const Scenario &scenario, const AllocationResult &result,
                    const std::string &path) {
    write_file(path, staircase_csv(scenario, result));
}

} // namespace ehrelay
