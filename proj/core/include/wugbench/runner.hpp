#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wugbench/corpus.hpp"
#include "wugbench/nd/adam.hpp"
#include "wugbench/seq2seq/model.hpp"
#include "wugbench/wugeval.hpp"

namespace wugbench::runner {

namespace fs = std::filesystem;
using seq2seq::Architecture;

struct DataSpec {
  // Either one dataset that is split here, or three pre-split files.
  std::optional<fs::path> dataset;
  std::optional<fs::path> train;
  std::optional<fs::path> dev;
  std::optional<fs::path> test;
  corpus::SplitRatios ratios;
  std::uint64_t split_seed = 1;
  std::optional<bool> stratify;  // default: on for English, off for German
  // Keep only the first n examples of the dataset before splitting (0 = all).
  std::size_t max_examples = 0;
};

struct TrainingOptions {
  std::size_t epochs = 50;
  std::size_t batch_size = 32;
  nd::AdamConfig adam;
  double clip_norm = 5.0;
  // Stop after this many epochs without a dev improvement (0 = never).
  std::size_t patience = 0;
};

// A single JSON document; see README for the schema. Relative paths are
// resolved against the directory holding the config file.
struct ExperimentConfig {
  corpus::Language language = corpus::Language::kEnglish;
  DataSpec data;
  fs::path wugs;
  std::vector<Architecture> architectures{std::begin(seq2seq::kAllArchitectures),
                                          std::end(seq2seq::kAllArchitectures)};
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  TrainingOptions training;
  std::size_t beam_width = 12;
  wugeval::DecodeMode dev_decode = wugeval::DecodeMode::kGreedy;
  wugeval::DecodeMode test_decode = wugeval::DecodeMode::kBeam;
  wugeval::ProductionOptions production;
  nlohmann::json model = nlohmann::json::object();             // overrides for every architecture
  std::map<Architecture, nlohmann::json> architecture_model;   // per-architecture overrides
  fs::path output = "out";
  nlohmann::json source = nlohmann::json::object();            // the document as read

  static ExperimentConfig from_json(const nlohmann::json& json, const fs::path& base_dir = {});
  static ExperimentConfig load(const fs::path& path);
  nlohmann::json to_json() const;
  // FNV-1a of to_json().
  std::string hash() const;
  void validate() const;

  bool stratify() const { return data.stratify.value_or(language == corpus::Language::kEnglish); }
  seq2seq::ModelConfig model_config(Architecture arch, std::uint64_t seed) const;
  fs::path report_dir() const { return output / "report"; }
  fs::path checkpoint_path(Architecture arch, std::uint64_t seed) const;
};

// Every file an experiment reads, plus the alphabet induced from them.
struct Corpus {
  corpus::DatasetSplit split;
  corpus::WugSet wugs;
  corpus::Alphabet alphabet;
};
Corpus load_corpus(const ExperimentConfig& config);

struct EpochRecord {
  std::size_t epoch = 0;
  double train_loss = 0.0;   // mean per-example loss, dropout on
  double dev_accuracy = 0.0;
};

struct SeedRecord {
  Architecture arch = Architecture::kBiLstmAttn;
  std::uint64_t seed = 0;
  std::vector<EpochRecord> curve;
  std::size_t selected_epoch = 0;
  double seconds = 0.0;
  std::string error;  // non-empty when training failed

  nlohmann::json to_json() const;
  static SeedRecord from_json(const nlohmann::json& json);
};

using ProgressFn = std::function<void(const EpochRecord&)>;

// Epoch loop with Adam, global-norm clipping and greedy dev accuracy after
// every epoch. Leaves `model` holding the parameters of the best dev epoch
// (ties go to the earlier one). Throws DivergenceError on a non-finite loss.
SeedRecord train(seq2seq::Model& model, std::span<const corpus::InflectionExample> train_set,
                 std::span<const corpus::InflectionExample> dev_set, const TrainingOptions& options,
                 std::uint64_t seed, const ProgressFn& progress = {});

// Parallelism for independent seeds: WUGBENCH_THREADS if set and positive,
// otherwise the hardware concurrency.
std::size_t thread_count();

// Writes <output>/data/{train,dev,test}.tsv.
void run_split(const ExperimentConfig& config);
// Trains (or reuses matching checkpoints for) every architecture and seed and
// writes training_curves.csv.
void run_train(const ExperimentConfig& config);
// accuracy.csv and f1.csv.
void run_eval(const ExperimentConfig& config);
// ratings.csv, correlations.csv and productions.csv.
void run_wug(const ExperimentConfig& config);
// Everything above plus summary.json. With several configs, each is run
// into its own output directory and the accuracy/correlation grid is pooled
// into `combined_out`.
void run_experiment(const ExperimentConfig& config);
void run_report(std::span<const ExperimentConfig> configs, const std::optional<fs::path>& combined_out);

}  // namespace wugbench::runner
