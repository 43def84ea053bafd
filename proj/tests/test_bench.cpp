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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ehrelay/bench.hpp"

using namespace ehrelay;

namespace {

std::string scenario_path(const std::string &name) {
    return std::string(SCENARIO_DIR) + "/" + name + ".json";
}

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<Scenario> table1_scenarios() {
    std::vector<Scenario> out;
    for (int i = 1; i <= 6; ++i)
        out.push_back(load_scenario(scenario_path("table1-s" + std::to_string(i))));
    return out;
}

} // namespace

TEST_CASE("scenario files load into the expected profiles") {
    const auto sc = load_scenario(scenario_path("table1-s2"));
    CHECK(sc.name == "table1-s2");
    CHECK(sc.channel.a == 2.0);
    CHECK(sc.channel.b == 2.0);
    CHECK(sc.channel.noise == 1.0);
    CHECK(sc.profile.instants == std::vector<double>{0, 2, 4, 6});
    CHECK(sc.profile.e1 == std::vector<double>{10, 9, 14, 8});
    CHECK(sc.profile.e2 == std::vector<double>{7, 5, 5, 5});
    CHECK(sc.profile.deadline == 7.0);
}

TEST_CASE("canonical serialization round-trips byte for byte") {
    for (const auto &name : {"example1", "table1-s3", "table1-s5"}) {
        const auto sc = load_scenario(scenario_path(name));
        const std::string text = scenario_to_text(sc);
        const auto reparsed = parse_scenario_text(text);
        CHECK(scenario_to_text(reparsed) == text);
    }
}

TEST_CASE("physical channel blocks are normalized at parse time") {
    const std::string text = R"({
      "name": "physical",
      "channel": {"a": 2.0, "b": 2.0,
                  "physical": {"n0_w_per_hz": 1e-19, "bandwidth_hz": 1e6,
                               "path_loss_db": 100.0}},
      "profile": {"instants": [0.0], "e1": [10.0], "e2": [10.0], "deadline": 5.0}
    })";
    const auto sc = parse_scenario_text(text);
    CHECK(sc.channel.noise == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("parse failures carry the origin and the offending field") {
    try {
        parse_scenario_text("{}", "bad.json");
        FAIL("expected a validation error");
    } catch (const ValidationError &e) {
        CHECK(std::string(e.what()).find("bad.json") != std::string::npos);
    }
    const std::string non_strict = R"({
      "name": "x", "channel": {"a": 2.0, "b": 2.0},
      "profile": {"instants": [0.0, 2.0, 2.0], "e1": [1.0, 1.0, 1.0],
                  "e2": [1.0, 1.0, 1.0], "deadline": 7.0}
    })";
    CHECK_THROWS_AS(parse_scenario_text(non_strict), ValidationError);
    const std::string empty_arrays = R"({
      "name": "x", "channel": {"a": 2.0, "b": 2.0},
      "profile": {"instants": [], "e1": [], "e2": [], "deadline": 7.0}
    })";
    CHECK_THROWS_AS(parse_scenario_text(empty_arrays), ValidationError);
    CHECK_THROWS_AS(load_scenario("/nonexistent/file.json"), ValidationError);
}

TEST_CASE("poisson generation is deterministic and respects the invariants") {
    const std::vector<double> instants{0, 2, 4, 6};
    const auto a = generate_poisson(2024, 50, 10.0, instants, 7.0);
    const auto b = generate_poisson(2024, 50, 10.0, instants, 7.0);
    REQUIRE(a.size() == 50);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].profile.e1 == b[i].profile.e1);
        CHECK(a[i].profile.e2 == b[i].profile.e2);
        CHECK(a[i].profile.e1[0] > 0.0);
        CHECK(a[i].profile.e2[0] > 0.0);
        for (double e : a[i].profile.e1) CHECK(e == std::floor(e));
        for (double e : a[i].profile.e2) CHECK(e >= 0.0);
    }
    CHECK(a[0].name == "poisson-2024-0");

    SUBCASE("sample mean approaches the requested mean") {
        // 1250 scenarios x 8 draws = 10,000 samples
        const auto big = generate_poisson(9, 1250, 10.0, instants, 7.0);
        double sum = 0.0;
        std::size_t n = 0;
        for (const auto &sc : big) {
            for (double e : sc.profile.e1) sum += e, ++n;
            for (double e : sc.profile.e2) sum += e, ++n;
        }
        const double mean = sum / static_cast<double>(n);
        CHECK(mean >= 9.8);
        CHECK(mean <= 10.2);
    }
}

TEST_CASE("comparison table reproduces the published throughput grid") {
    const auto rows = run_comparison(table1_scenarios());
    REQUIRE(rows.size() == 6);
    struct Want {
        double alg2, disj, no_et, one_way, two_way;
    };
    const std::vector<Want> want{
        {31.8339, 31.8082, 32.1965, 32.4212, 32.4212},
        {29.7968, 29.7821, 29.7968, 29.7968, 29.7968},
        {28.2032, 28.4398, 28.9548, 29.8207, 31.1735},
        {31.5337, 31.5387, 31.5387, 31.5387, 33.6705},
        {32.3543, 32.3543, 32.7000, 32.7000, 35.3402},
        {31.1175, 31.1175, 31.1175, 31.1175, 33.4912},
    };
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CAPTURE(rows[i].name);
        CHECK(rows[i].error.empty());
        REQUIRE(rows[i].algorithm2.has_value());
        CHECK(std::abs(*rows[i].algorithm2 - want[i].alg2) <= 5e-4);
        CHECK(std::abs(*rows[i].disjoint - want[i].disj) <= 5e-4);
        CHECK(std::abs(*rows[i].no_et_optimal - want[i].no_et) <= 1e-3);
        CHECK(std::abs(*rows[i].one_way_optimal - want[i].one_way) <= 1e-3);
        CHECK(std::abs(*rows[i].two_way_optimal - want[i].two_way) <= 5e-4);
    }
    // scenario 3 has no applicable gated policies; scenario 2's one-way gate passes
    CHECK(rows[2].algorithm2.has_value());
    CHECK(rows[1].one_way.has_value());
}

TEST_CASE("rendered comparison matches the golden table") {
    const auto rows = run_comparison(table1_scenarios());
    const std::string got = render_comparison_markdown(rows);
    CHECK(got == read_file(std::string(GOLDEN_DIR) + "/table1.md"));

    SUBCASE("rendering is deterministic across runs") {
        const auto again = run_comparison(table1_scenarios());
        CHECK(render_comparison_markdown(again) == got);
        CHECK(render_comparison_csv(again) == render_comparison_csv(rows));
        CHECK(render_comparison_json(again) == render_comparison_json(rows));
    }
}

TEST_CASE("per-scenario failures land in the error column") {
    auto scenarios = table1_scenarios();
    scenarios[0].channel = ChannelModel(0.5, 2.0); // degenerate relay
    const auto rows = run_comparison(scenarios);
    CHECK_FALSE(rows[0].error.empty());
    CHECK_FALSE(rows[0].algorithm2.has_value());
    CHECK(rows[1].error.empty()); // the batch continues
}

TEST_CASE("staircase export") {
    const auto sc = load_scenario(scenario_path("example1"));
    const auto out = run_policy(sc, "greedy");
    REQUIRE(out.ok());
    const std::string csv = staircase_csv(sc, out.value());

    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line ==
          "time,harvested_s,harvested_r,consumed_s,consumed_r,"
          "harvested_total_scaled,consumed_total_scaled,modified_s,modified_r");
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        std::vector<double> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(std::move(row));
    }
    REQUIRE(rows.size() == 5); // t = 0, 2, 4, 6, 7
    const auto &last = rows.back();
    CHECK(last[2] == doctest::Approx(30.0).epsilon(1e-12));   // harvested R
    CHECK(last[4] == doctest::Approx(20.25).epsilon(1e-12));  // consumed R
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i][3] >= rows[i - 1][3]); // consumed curves non-decreasing
        CHECK(rows[i][4] >= rows[i - 1][4]);
        CHECK(rows[i][3] <= rows[i][1] + 1e-9); // never above the staircase
        CHECK(rows[i][4] <= rows[i][2] + 1e-9);
    }

    SUBCASE("zero schedules export zero consumption") {
        PowerSchedule zero;
        zero.p1.assign(4, 0.0);
        zero.p2.assign(4, 0.0);
        const auto res = make_result(zero, TransferSchedule::zeros(4), sc.profile, sc.channel,
                                     EtMode::none, "zero");
        const std::string z = staircase_csv(sc, res);
        std::istringstream zin(z);
        std::getline(zin, line);
        while (std::getline(zin, line)) {
            std::istringstream ls(line);
            std::string cell;
            std::vector<double> row;
            while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
            CHECK(row[3] == 0.0);
            CHECK(row[4] == 0.0);
        }
    }
    SUBCASE("grid mismatch is rejected") {
        const auto other = load_scenario(scenario_path("table1-s4"));
        auto res = out.value();
        res.schedule.p1.pop_back();
        CHECK_THROWS_AS(staircase_csv(other, res), ValidationError);
    }
}

TEST_CASE("policy dispatch by CLI name") {
    const auto sc = load_scenario(scenario_path("table1-s2"));
    for (const auto &name : {"greedy", "total-subopt", "disjoint", "one-way", "two-way",
                             "solve-no-et", "solve-one-way", "solve-two-way"}) {
        CAPTURE(name);
        const auto out = run_policy(sc, name);
        if (out.ok())
            CHECK(out.value().throughput_mbits > 0.0);
        else
            CHECK_FALSE(out.rejection->reason.empty());
    }
    CHECK_THROWS_AS(run_policy(sc, "does-not-exist"), ValidationError);
}

TEST_CASE("results serialize and save") {
    const auto sc = load_scenario(scenario_path("table1-s2"));
    const auto out = run_policy(sc, "two-way");
    REQUIRE(out.ok());
    const std::string text = result_to_text(out.value());
    CHECK(text.find("\"policy\"") != std::string::npos);
    CHECK(text.find("two-way") != std::string::npos);
    CHECK(text.find("throughput_mbits") != std::string::npos);
}
