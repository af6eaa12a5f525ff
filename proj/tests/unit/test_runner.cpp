#include <cstdlib>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "support/toy.hpp"
#include "wugbench/error.hpp"
#include "wugbench/runner.hpp"

namespace {

using namespace wugbench;
using nlohmann::json;
namespace fs = std::filesystem;

const fs::path kFixtures = fs::path(WUGBENCH_SOURCE_DIR) / "data" / "fixtures";

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

class TempDir {
 public:
  explicit TempDir(const std::string& name) : path_(fs::temp_directory_path() / ("wugbench-" + name)) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

json tiny_doc(const fs::path& out) {
  return {{"language", "en"},
          {"data", {{"dataset", (kFixtures / "en_verbs.tsv").string()}, {"max_examples", 60}}},
          {"wugs", (kFixtures / "en_wugs.tsv").string()},
          {"architectures", {"uni_lstm_attn", "transformer"}},
          {"seeds", 2},
          {"training", {{"epochs", 2}, {"batch_size", 8}, {"learning_rate", 0.01}}},
          {"beam_width", 3},
          {"model",
           {{"embedding_dim", 8}, {"hidden_dim", 8}, {"attention_dim", 8}, {"lstm_layers", 1}, {"model_dim", 8},
            {"ffn_dim", 16}, {"num_layers", 1}, {"num_heads", 2}, {"dropout", 0.0}}},
          {"output", out.string()}};
}

TEST(Config, ParsesAndValidates) {
  TempDir dir("cfg");
  auto c = runner::ExperimentConfig::from_json(tiny_doc(dir.path()));
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(c.seeds, (std::vector<std::uint64_t>{1, 2}));
  EXPECT_EQ(c.architectures.size(), 2u);
  EXPECT_EQ(c.model_config(seq2seq::Architecture::kTransformer, 2).model_dim, 8u);
  EXPECT_EQ(c.model_config(seq2seq::Architecture::kTransformer, 2).seed, 2u);
  EXPECT_EQ(c.checkpoint_path(seq2seq::Architecture::kTransformer, 2).filename(), "transformer-seed2.ckpt");
}

TEST(Config, HashIgnoresOutput) {
  auto a = runner::ExperimentConfig::from_json(tiny_doc("/tmp/a"));
  auto b = runner::ExperimentConfig::from_json(tiny_doc("/tmp/b"));
  EXPECT_EQ(a.hash(), b.hash());
  auto doc = tiny_doc("/tmp/a");
  doc["beam_width"] = 4;
  EXPECT_NE(runner::ExperimentConfig::from_json(doc).hash(), a.hash());
}

TEST(Config, Errors) {
  auto doc = tiny_doc("/tmp/x");
  doc["bogus"] = 1;
  EXPECT_THROW(runner::ExperimentConfig::from_json(doc), ConfigError);
  doc = tiny_doc("/tmp/x");
  doc["training"]["lr"] = 1;
  EXPECT_THROW(runner::ExperimentConfig::from_json(doc), ConfigError);
  doc = tiny_doc("/tmp/x");
  doc["architectures"] = {"gru"};
  EXPECT_THROW(runner::ExperimentConfig::from_json(doc), ConfigError);
  doc = tiny_doc("/tmp/x");
  doc["seeds"] = json::array({1, 1});
  EXPECT_THROW(runner::ExperimentConfig::from_json(doc).validate(), ConfigError);
  doc = tiny_doc("/tmp/x");
  doc["training"]["epochs"] = 0;
  EXPECT_THROW(runner::ExperimentConfig::from_json(doc).validate(), ConfigError);
  doc = tiny_doc("/tmp/x");
  doc["wugs"] = "/nonexistent/wugs.tsv";
  EXPECT_THROW(runner::ExperimentConfig::from_json(doc).validate(), ConfigError);
  EXPECT_THROW(runner::ExperimentConfig::load("/nonexistent/config.json"), ConfigError);
}

TEST(Corpus, SubsetIsDeterministic) {
  auto c = runner::ExperimentConfig::from_json(tiny_doc("/tmp/x"));
  const auto a = runner::load_corpus(c);
  const auto b = runner::load_corpus(c);
  EXPECT_EQ(a.split.train, b.split.train);
  EXPECT_EQ(a.alphabet, b.alphabet);
  EXPECT_EQ(a.split.train.size() + a.split.dev.size() + a.split.test.size(), 60u);
  for (const auto& cand : a.wugs.candidates) EXPECT_NO_THROW(corpus::encode_target(a.alphabet, cand.form));
}

TEST(Train, DeterministicAndLossFalls) {
  auto c = runner::ExperimentConfig::from_json(tiny_doc("/tmp/x"));
  const auto data = runner::load_corpus(c);
  std::vector<runner::SeedRecord> records;
  double untrained = 0;
  for (int run = 0; run < 2; ++run) {
    auto m = seq2seq::build_model(c.model_config(seq2seq::Architecture::kUniLstmAttn, 1), data.alphabet);
    if (run == 0) {
      for (const auto& ex : data.split.train) {
        nd::Graph g(false);
        untrained += m->loss(g, corpus::encode_source(data.alphabet, ex.lemma, ex.tags),
                             corpus::encode_target(data.alphabet, ex.form)).value().item();
      }
      untrained /= data.split.train.size();
    }
    records.push_back(runner::train(*m, data.split.train, data.split.dev, c.training, 1));
  }
  auto strip = [](json j) {
    j.erase("seconds");
    return j;
  };
  EXPECT_EQ(strip(records[0].to_json()), strip(records[1].to_json()));
  ASSERT_EQ(records[0].curve.size(), 2u);
  for (std::size_t e = 0; e < 2; ++e) EXPECT_EQ(records[0].curve[e].train_loss, records[1].curve[e].train_loss);
  EXPECT_LT(records[0].curve[0].train_loss, untrained);
  EXPECT_LT(records[0].curve[1].train_loss, records[0].curve[0].train_loss);
}

TEST(Train, MemorizesSmallSet) {
  auto c = runner::ExperimentConfig::from_json(tiny_doc("/tmp/x"));
  const auto data = runner::load_corpus(c);
  std::vector<corpus::InflectionExample> small(data.split.train.begin(), data.split.train.begin() + 20);
  auto mc = c.model_config(seq2seq::Architecture::kUniLstmAttn, 3);
  mc.embedding_dim = 16;
  mc.hidden_dim = 48;
  mc.attention_dim = 24;
  auto m = seq2seq::build_model(mc, data.alphabet);
  runner::TrainingOptions opts;
  opts.epochs = 60;
  opts.batch_size = 1;
  opts.adam.learning_rate = 0.01;
  opts.patience = 0;
  const auto rec = runner::train(*m, small, small, opts, 3);
  double best = 0;
  for (const auto& e : rec.curve) best = std::max(best, e.dev_accuracy);
  EXPECT_DOUBLE_EQ(best, 1.0);
  const auto pred = wugeval::predict(*m, small, wugeval::DecodeMode::kGreedy);
  EXPECT_DOUBLE_EQ(wugeval::overall_accuracy(small, pred), 1.0);
}

TEST(SeedRecord, JsonRoundTrip) {
  runner::SeedRecord r;
  r.arch = seq2seq::Architecture::kTransformer;
  r.seed = 4;
  r.curve = {{1, 2.5, 0.1}, {2, 1.25, 0.3}};
  r.selected_epoch = 2;
  r.error = "";
  EXPECT_EQ(runner::SeedRecord::from_json(r.to_json()).to_json(), r.to_json());
}

TEST(Experiment, ReportsAreReproducible) {
  TempDir a("exp-a"), b("exp-b");
  const std::vector<std::string> files{"summary.json",     "accuracy.csv",    "f1.csv",
                                       "ratings.csv",      "correlations.csv", "productions.csv",
                                       "training_curves.csv"};
  auto ca = runner::ExperimentConfig::from_json(tiny_doc(a.path()));
  auto cb = runner::ExperimentConfig::from_json(tiny_doc(b.path()));
  runner::run_experiment(ca);
  runner::run_experiment(cb);
  for (const auto& f : files) {
    ASSERT_TRUE(fs::exists(a.path() / "report" / f)) << f;
    EXPECT_EQ(slurp(a.path() / "report" / f), slurp(b.path() / "report" / f)) << f;
  }
  // A second run over the same output reuses checkpoints and reproduces the report.
  const auto before = slurp(a.path() / "report" / "ratings.csv");
  const auto stamp = fs::last_write_time(ca.checkpoint_path(seq2seq::Architecture::kTransformer, 1));
  runner::run_experiment(ca);
  EXPECT_EQ(fs::last_write_time(ca.checkpoint_path(seq2seq::Architecture::kTransformer, 1)), stamp);
  EXPECT_EQ(slurp(a.path() / "report" / "ratings.csv"), before);

  const auto summary = json::parse(slurp(a.path() / "report" / "summary.json"));
  EXPECT_TRUE(summary["complete"].get<bool>());
  EXPECT_EQ(summary["config_hash"], ca.hash());
}

TEST(Threads, EnvironmentOverride) {
  ::setenv("WUGBENCH_THREADS", "3", 1);
  EXPECT_EQ(runner::thread_count(), 3u);
  ::setenv("WUGBENCH_THREADS", "0", 1);
  EXPECT_GE(runner::thread_count(), 1u);
  ::unsetenv("WUGBENCH_THREADS");
}

}  // namespace
