// Copyright 2026 The indkg Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "expect_error.hpp"
#include "indkg/config.hpp"
#include "testing.hpp"

namespace indkg {
namespace {

TEST(Config, FileValuesAndOverrides) {
  const std::vector<Override> overrides{{"dim", "32"}};
  const RunConfig c = parse_config_text(
      "# comment\n  dim = 16  \nseed=3\nlayer = comp # trailing\nlr = 0.5\n"
      "filtered = false\n",
      "inline", overrides);
  EXPECT_EQ(c.model.dim, 32u);
  EXPECT_EQ(c.require_seed(), 3u);
  EXPECT_EQ(c.model.layer, LayerKind::kComposition);
  EXPECT_EQ(c.train.adam.lr, 0.5);
  EXPECT_FALSE(c.train.filtered);
}

TEST(Config, Errors) {
  EXPECT_INDKG_ERROR(parse_config_text("bogus = 1\n", "x", {}), ErrorCode::kUnknownKey);
  EXPECT_INDKG_ERROR(parse_config_text("dim = many\n", "x", {}), ErrorCode::kTypeError);
  EXPECT_INDKG_ERROR(parse_config_text("dim = -3\n", "x", {}), ErrorCode::kTypeError);
  EXPECT_INDKG_ERROR(parse_config_text("layer = gat\n", "x", {}), ErrorCode::kTypeError);
  EXPECT_INDKG_ERROR(parse_config_text("just words\n", "x", {}), ErrorCode::kMalformedLine);
  const std::vector<Override> bad{{"nope", "1"}};
  EXPECT_INDKG_ERROR(parse_config_text("", "x", bad), ErrorCode::kUnknownKey);
  EXPECT_INDKG_ERROR(parse_config_text("", "x", {}).require_seed(),
                     ErrorCode::kMissingRequired);
  EXPECT_INDKG_ERROR(parse_config(std::filesystem::path("/nonexistent.cfg"), {}),
                     ErrorCode::kMissingFile);
}

TEST(Config, EveryKeyRoundTripsThroughItsGetter) {
  RunConfig c;
  for (const ConfigKey& key : config_keys()) {
    const std::string value = key.get(c);
    if (value.empty()) continue;  // unset paths and seed
    set_config_value(c, key.name, value);
    EXPECT_EQ(key.get(c), value) << key.name;
  }
  EXPECT_TRUE(to_json(c).is_object());
}

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::execute(args, out, err);
  return {code, out.str(), err.str()};
}

TEST(Cli, HelpListsEveryKey) {
  const CliResult r = run({"--help"});
  EXPECT_EQ(r.code, cli::kExitOk);
  for (const ConfigKey& key : config_keys()) {
    EXPECT_NE(r.out.find("--" + key.name), std::string::npos) << key.name;
  }
}

TEST(Cli, ValidationFailuresExitOne) {
  EXPECT_EQ(run({"frobnicate"}).code, cli::kExitValidation);
  EXPECT_EQ(run({"--dim", "abc", "stats"}).code, cli::kExitValidation);
  EXPECT_EQ(run({"--bogus", "1", "stats"}).code, cli::kExitValidation);
  const auto dir = testing::fresh_temp_dir("cli-missing");
  const CliResult no_seed = run({"--data_dir", dir.string(), "preprocess"});
  EXPECT_EQ(no_seed.code, cli::kExitValidation);
  EXPECT_NE(no_seed.err.find("seed"), std::string::npos);
  EXPECT_EQ(run({"--seed", "1", "--data_dir", dir.string(), "--output_dir", dir.string(),
                 "preprocess"})
                .code,
            cli::kExitValidation);
  std::filesystem::remove_all(dir);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

TEST(Cli, EndToEndPipeline) {
  const auto root = testing::fresh_temp_dir("cli-pipeline");
  const auto data = root / "data";
  const auto out = root / "out";
  testing::write_raw_dataset(data, testing::synthetic_inductive_splits(3, 50, 30, 3, 4));
  {
    std::ofstream cfg(root / "run.cfg");
    cfg << "data_dir = " << data.string() << "\noutput_dir = " << out.string()
        << "\nseed = 7\nk = 2\ndim = 8\nrel_dim = 8\nnum_layers = 1\nnum_bases = 2\n"
        << "epochs = 2\nvalid_limit = 10\neval_num_neg = 10\n";
  }
  const std::string cfg = (root / "run.cfg").string();
  ASSERT_EQ(run({"-c", cfg, "preprocess"}).code, 0);
  EXPECT_TRUE(std::filesystem::exists(out / cli::kDatasetFile));

  // Evaluating before training is a validation failure.
  const CliResult early = run({"-c", cfg, "eval", "--task", "lp"});
  EXPECT_EQ(early.code, cli::kExitValidation);
  EXPECT_NE(early.err.find("model.ikgm"), std::string::npos);

  ASSERT_EQ(run({"-c", cfg, "extract"}).code, 0);
  EXPECT_TRUE(std::filesystem::exists(out / cli::kStatsFile));
  ASSERT_EQ(run({"-c", cfg, "train"}).code, 0);
  EXPECT_TRUE(std::filesystem::exists(out / cli::kModelFile));

  std::istringstream lines(slurp(out / cli::kMetricsFile));
  std::size_t records = 0;
  for (std::string line; std::getline(lines, line);) {
    const auto j = nlohmann::json::parse(line);
    EXPECT_TRUE(j.contains("epoch"));
    ++records;
  }
  EXPECT_EQ(records, 4u);

  const CliResult lp = run({"-c", cfg, "eval", "--task", "lp"});
  ASSERT_EQ(lp.code, 0) << lp.err;
  EXPECT_NE(lp.out.find("MRR"), std::string::npos);
  const auto report = nlohmann::json::parse(slurp(out / cli::kReportFile));
  EXPECT_GT(report.at("mrr").get<double>(), 0.0);
  EXPECT_EQ(report.at("seed").get<int>(), 7);

  const CliResult tc = run({"-c", cfg, "eval", "--task", "tc"});
  ASSERT_EQ(tc.code, 0) << tc.err;
  EXPECT_FALSE(nlohmann::json::parse(slurp(out / cli::kReportFile)).at("auc").is_null());

  EXPECT_EQ(run({"-c", cfg, "eval", "--task", "xx"}).code, cli::kExitValidation);
  const CliResult stats = run({"-c", cfg, "stats"});
  EXPECT_EQ(stats.code, 0);
  EXPECT_FALSE(stats.out.empty());
  std::filesystem::remove_all(root);
}

}  // namespace
}  // namespace indkg
