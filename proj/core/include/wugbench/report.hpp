#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wugbench/runner.hpp"
#include "wugbench/wugeval.hpp"

namespace wugbench::report {

namespace fs = std::filesystem;

// Everything one (architecture, seed) job produced.
struct SeedData {
  seq2seq::Architecture arch = seq2seq::Architecture::kBiLstmAttn;
  std::uint64_t seed = 0;
  runner::SeedRecord record;
  std::size_t parameters = 0;
  bool ok = false;                                     // false when training failed
  std::vector<std::string> test_predictions;           // per test example
  std::vector<std::vector<std::string>> wug_outputs;   // [lemma][draw]
  std::vector<double> normalized;                      // per wug candidate
  std::vector<double> raw;
};

struct RunData {
  const runner::ExperimentConfig* config = nullptr;
  const runner::Corpus* corpus = nullptr;
  std::vector<SeedData> seeds;  // (architecture, seed) order
};

// Shortest round-trip decimal; NaN and infinities print as "NA".
std::string format_number(double value);
// RFC 4180 quoting when needed.
std::string csv_field(std::string_view text);

void write_training_curves(const RunData& run);
void write_accuracy(const RunData& run);
void write_f1(const RunData& run);
void write_ratings(const RunData& run);
void write_correlations(const RunData& run);
void write_productions(const RunData& run);  // productions.csv and production_summary.csv
void write_summary(const RunData& run);      // summary.json and accuracy_correlation.csv
void write_all(const RunData& run);

// Performance/correlation cells for the accuracy-vs-correlation analysis:
// test accuracy (English) or F1 (German) in percent against the rating
// Spearman rho of seed-averaged model ratings, per architecture and class.
std::vector<wugeval::GridCell> grid(const RunData& run);
void write_accuracy_correlation(std::span<const wugeval::GridCell> cells, const fs::path& dir);
nlohmann::json grid_cell_to_json(const wugeval::GridCell& cell);
wugeval::GridCell grid_cell_from_json(const nlohmann::json& json);

}  // namespace wugbench::report
