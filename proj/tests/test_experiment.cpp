// Copyright 2026 The Expressibench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "expressibench/experiment.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gtest/gtest.h"

using namespace expressibench;

namespace {

ExperimentConfig small_config() {
    ExperimentConfig cfg;
    cfg.models = {1};
    cfg.qubit_counts = {2};
    cfg.layers = {1, 2};
    cfg.pairs_m = 500;
    cfg.cost_samples = 500;
    cfg.workers = 1;
    return cfg;
}

std::string to_csv(const std::vector<ResultRow> &rows) {
    std::ostringstream os;
    write_csv(os, rows);
    return os.str();
}

std::filesystem::path temp_path(const std::string &name) {
    return std::filesystem::temp_directory_path() /
           (name + "_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()));
}

}  // namespace

TEST(experiment, parse_index_list) {
    EXPECT_EQ(parse_index_list("1..3,7"), (std::vector<long long>{1, 2, 3, 7}));
    EXPECT_EQ(parse_index_list("5,2,2"), (std::vector<long long>{2, 5}));
    EXPECT_THROW(parse_index_list(""), ValidationError);
    EXPECT_THROW(parse_index_list("3..1"), ValidationError);
    EXPECT_THROW(parse_index_list("a"), ValidationError);
}

TEST(experiment, observable_kinds) {
    EXPECT_EQ(parse_observable_kind("zero-projector"), ObservableKind::ZeroProjector);
    EXPECT_THROW(parse_observable_kind("x"), ValidationError);
    EXPECT_NEAR(make_observable(ObservableKind::ZeroProjector, 3).trace(), 1.0, 1e-15);
}

TEST(experiment, small_config_rows) {
    auto rows = run_experiment(small_config());
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0].L, 1u);
    EXPECT_EQ(rows[1].L, 2u);
    for (const auto &r : rows) {
        EXPECT_EQ(r.model_id, 1);
        EXPECT_EQ(r.n, 2u);
        EXPECT_TRUE(r.expr_norm_t2_exact.has_value());
        EXPECT_EQ(r.wall_time_ms, 0.0);
        EXPECT_TRUE(r.t1_holds);
        EXPECT_TRUE(r.t2_holds);
        EXPECT_TRUE(r.chebyshev_consistent());
        EXPECT_NEAR(r.beta, 0.0375, 1e-15);
    }
    EXPECT_EQ(rows, run_experiment(small_config()));
}

TEST(experiment, default_grid_size) {
    ExperimentConfig cfg;
    EXPECT_EQ(cfg.models.size() * cfg.qubit_counts.size() * cfg.layers.size(), 432u);
    EXPECT_NO_THROW(cfg.validate());
}

TEST(experiment, config_validation) {
    auto cfg = small_config();
    cfg.pairs_m = 1;
    EXPECT_THROW(run_experiment(cfg), ValidationError);
    cfg = small_config();
    cfg.models = {13};
    EXPECT_THROW(run_experiment(cfg), ValidationError);
    cfg = small_config();
    cfg.workers = 0;
    EXPECT_THROW(run_experiment(cfg), ValidationError);
    cfg = small_config();
    cfg.layers = {};
    EXPECT_THROW(run_experiment(cfg), ValidationError);
}

TEST(experiment, no_exact_oracle_when_disabled_or_large) {
    auto cfg = small_config();
    cfg.t2_enabled = false;
    EXPECT_FALSE(run_experiment(cfg)[0].expr_norm_t2_exact.has_value());
    cfg = small_config();
    cfg.qubit_counts = {4};
    cfg.layers = {1};
    EXPECT_FALSE(run_experiment(cfg)[0].expr_norm_t2_exact.has_value());
}

TEST(experiment, csv_shape_and_round_trip) {
    auto rows = run_experiment(small_config());
    std::string text = to_csv(rows);
    std::istringstream lines(text);
    std::string line;
    std::vector<std::string> all;
    while (std::getline(lines, line)) all.push_back(line);
    ASSERT_EQ(all.size(), 3u);
    EXPECT_EQ(all[0].rfind("schema_version,model_id,n,L,", 0), 0u);

    std::istringstream in(text);
    EXPECT_EQ(read_csv(in), rows);
}

TEST(experiment, file_round_trip_and_json) {
    auto rows = run_experiment(small_config());
    auto csv = temp_path("expressibench_rt.csv");
    write_results(rows, csv.string(), ResultFormat::Csv);
    EXPECT_EQ(read_results(csv.string()), rows);
    std::filesystem::remove(csv);

    auto json_path = temp_path("expressibench_rt.json");
    write_results(rows, json_path.string(), ResultFormat::Json);
    std::ifstream in(json_path);
    auto j = nlohmann::json::parse(in);
    ASSERT_EQ(j.size(), 2u);
    EXPECT_EQ(j[1]["L"], 2);
    EXPECT_EQ(j[0]["frame_potential_t1"].get<double>(), rows[0].frame_potential_t1);
    std::filesystem::remove(json_path);

    EXPECT_THROW(write_results({}, csv.string(), ResultFormat::Csv), ValidationError);
    EXPECT_THROW(parse_result_format("xml"), ValidationError);
}

TEST(experiment, worker_count_does_not_change_output) {
    auto cfg = small_config();
    cfg.layers = {1, 2, 3, 4, 5, 6};
    cfg.qubit_counts = {2, 3};
    std::string one = to_csv(run_experiment(cfg));
    cfg.workers = 4;
    EXPECT_EQ(to_csv(run_experiment(cfg)), one);
}

TEST(experiment, reader_accepts_shuffled_columns) {
    auto rows = run_experiment(small_config());
    std::istringstream src(to_csv(rows));
    std::string header, r0, r1;
    std::getline(src, header);
    std::getline(src, r0);
    std::getline(src, r1);
    auto h = detail::split_csv_line(header);
    auto a = detail::split_csv_line(r0);
    auto b = detail::split_csv_line(r1);
    auto join = [](const std::vector<std::string> &v) {
        std::string out;
        for (std::size_t i = v.size(); i-- > 0;) out += v[i] + (i ? "," : "");
        return out;
    };
    std::istringstream reversed(join(h) + "\n" + join(a) + "\n" + join(b) + "\n");
    EXPECT_EQ(read_csv(reversed), rows);
}

TEST(experiment, reader_names_missing_column) {
    auto rows = run_experiment(small_config());
    std::string text = to_csv(rows);
    auto pos = text.find("mean_cost");
    text.replace(pos, 9, "mean_kost");
    std::istringstream in(text);
    try {
        read_csv(in);
        FAIL() << "expected ValidationError";
    } catch (const ValidationError &e) {
        EXPECT_NE(std::string(e.what()).find("mean_cost"), std::string::npos);
    }
}
