#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>

#include "arrkit/core/error.hpp"
#include "arrkit/core/text.hpp"
#include "arrkit/market/tick_panel.hpp"
#include "arrkit/nn/serialize.hpp"
#include "arrkit/pipeline/config.hpp"
#include "arrkit/pipeline/pipeline.hpp"
#include "helpers.hpp"

using namespace arrkit;
using namespace arrkit::pipeline;
namespace fs = std::filesystem;

namespace {

RunConfig small_config(const fs::path& out) {
    auto c = default_config();
    c.seed = 5;
    c.synthetic.n_sessions = 14;
    c.synthetic.regime_schedule = {{0, 6, 1.5, 0.5}, {7, 13, 0.8, 0.5}};
    c.synthetic.seed = 5;
    c.autoencoder.iterations = 1;
    c.autoencoder.grid.max_epochs = 2;
    c.bootstrap = 20;
    c.output_dir = out;
    return c;
}

std::size_t count_lines(const fs::path& p) {
    std::ifstream in(p);
    std::size_t n = 0;
    for (std::string line; std::getline(in, line);) n += !line.empty();
    return n;
}

}  // namespace

class PipelineRun : public ::testing::Test {
protected:
    static void SetUpTestSuite() {
        config_ = new RunConfig(small_config(test_util::temp_dir("pipeline")));
        cmd_generate(*config_);
        cmd_train(*config_);
        cmd_arr(*config_);
        cmd_analyze(*config_);
    }
    static void TearDownTestSuite() {
        fs::remove_all(config_->output_dir);
        delete config_;
    }
    static RunConfig* config_;
};

RunConfig* PipelineRun::config_ = nullptr;

TEST(Config, JsonRoundTrip) {
    auto c = small_config("x");
    c.forecast.families = {"gbdt"};
    c.pca_k = 3;
    const auto j = to_json(c);
    EXPECT_EQ(to_json(config_from_json(nlohmann::json::parse(j.dump()))), j);
    EXPECT_EQ(config_hash(config_from_json(j)), config_hash(c));
}

TEST(Config, HashIgnoresThreadsAndOutput) {
    auto a = small_config("a"), b = small_config("b");
    b.threads = 4;
    EXPECT_EQ(config_hash(a), config_hash(b));
    b.seed = 6;
    EXPECT_NE(config_hash(a), config_hash(b));
}

TEST(Config, ValidationRejectsBadSplits) {
    auto c = small_config("x");
    EXPECT_NO_THROW(c.validate());
    c.splits.train = 0.9;
    c.splits.validation = 0.2;
    EXPECT_THROW(c.validate(), Error);
    auto d = small_config("x");
    d.use_autoencoder = d.use_pca = false;
    EXPECT_THROW(d.validate(), Error);
}

TEST(Config, SplitsAreChronological) {
    const auto s = small_config("x").split_sessions(20);
    EXPECT_EQ(s.train_first, 0u);
    EXPECT_LT(s.train_last, s.val_first);
    EXPECT_LT(s.val_last, s.test_first);
    EXPECT_EQ(s.test_last, 19u);
}

TEST_F(PipelineRun, GenerateWritesTwelveAssetsAndReloads) {
    const auto dir = stage_dir(*config_, "data");
    const auto md = load_market_data(*config_);
    EXPECT_EQ(md.ticks.assets(), 12u);
    EXPECT_EQ(md.sector_columns.size(), 11u);
    EXPECT_EQ(md.market(), 0u);
    EXPECT_TRUE(fs::exists(dir / "calendar.json"));

    auto again = *config_;
    again.output_dir = test_util::temp_dir("pipeline_again");
    cmd_generate(again);
    EXPECT_EQ(read_file(dir / "ticks.csv"), read_file(stage_dir(again, "data") / "ticks.csv"));
    fs::remove_all(again.output_dir);
}

TEST_F(PipelineRun, TrainHonoursSearchBudget) {
    const auto dir = stage_dir(*config_, "train");
    EXPECT_EQ(count_lines(dir / "ae_trials.jsonl"), 1u);
    const auto m = nn::load_json(dir / "manifest.json");
    EXPECT_EQ(m.at("stage"), "train");
    EXPECT_EQ(m.at("config_hash"), config_hash(*config_));
    EXPECT_TRUE(m.at("outputs").contains("pca.json"));
}

TEST_F(PipelineRun, ArrWritesEveryFrequencyPerSource) {
    const auto dir = stage_dir(*config_, "arr");
    for (std::string src : {"autoencoder", "pca"}) {
        for (std::string f : {"5min", "1hour", "1day", "1week"}) EXPECT_TRUE(fs::exists(dir / ("arr_" + src + "_" + f + ".csv")));
        EXPECT_TRUE(fs::exists(dir / ("arr_" + src + "_5min_smoothed.csv")));
    }
    const auto rec = nn::load_json(dir / "reconstruction.json");
    EXPECT_TRUE(rec.at("r2").contains("autoencoder"));
    EXPECT_TRUE(rec.contains("bootstrap"));
}

TEST_F(PipelineRun, AnalyzeWritesTwelveKdeGrids) {
    const auto dir = stage_dir(*config_, "analyze");
    std::size_t kde = 0;
    for (const auto& e : fs::directory_iterator(dir)) kde += e.path().filename().string().rfind("kde_", 0) == 0;
    EXPECT_EQ(kde, 12u);
    EXPECT_TRUE(fs::exists(dir / "correlations.json"));
}

TEST_F(PipelineRun, ReportNamesMissingStage) {
    try {
        cmd_report(*config_);
        FAIL() << "report without forecast outputs";
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("cmd_forecast outputs missing"), std::string::npos);
    }
}

TEST(Pipeline, StagesRequireTheirInputs) {
    auto c = small_config(test_util::temp_dir("pipeline_empty"));
    try {
        cmd_arr(c);
        FAIL() << "arr without train outputs";
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("cmd_train outputs missing"), std::string::npos);
    }
    try {
        cmd_report(c);
        FAIL() << "report on an empty directory";
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("cmd_arr outputs missing"), std::string::npos);
    }
    fs::remove_all(c.output_dir);
}

TEST(Cli, ErrorsAreJsonWithExitCodeOne) {
    const auto dir = test_util::temp_dir("cli");
    const auto err = dir / "stderr.txt";
    const std::string cmd = std::string(ARR_CLI_PATH) + " arr --out " + (dir / "run").string() + " 2> " + err.string();
    const int status = std::system(cmd.c_str());
    ASSERT_TRUE(WIFEXITED(status));
    EXPECT_EQ(WEXITSTATUS(status), 1);
    const auto j = nlohmann::json::parse(read_file(err));
    EXPECT_EQ(j.at("error").at("type"), "pipeline");
    EXPECT_NE(j.at("error").at("message").get<std::string>().find("outputs missing"), std::string::npos);

    const std::string bad = std::string(ARR_CLI_PATH) + " frobnicate 2> " + err.string();
    const int s2 = std::system(bad.c_str());
    EXPECT_EQ(WEXITSTATUS(s2), 1);
    EXPECT_EQ(nlohmann::json::parse(read_file(err)).at("error").at("type"), "usage");
    fs::remove_all(dir);
}
