#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wugbench/corpus.hpp"
#include "wugbench/decode.hpp"

namespace wugbench::wugeval {

using corpus::InflectionClass;
using corpus::InflectionExample;
using corpus::Language;
using corpus::WugCandidate;
using corpus::WugSet;
using decode::StepModel;

inline constexpr double kUndefined = std::numeric_limits<double>::quiet_NaN();

// Population statistics (ddof = 0).
struct MeanStd {
  double mean = kUndefined;
  double stdev = kUndefined;
  std::size_t n = 0;
};
MeanStd mean_std(std::span<const double> values);

// ---------------------------------------------------------------------------
// Predictions

enum class DecodeMode { kGreedy, kBeam };

// Top string per example. Unfinished hypotheses yield "", which never equals
// a (non-empty) gold form.
std::vector<std::string> predict(const StepModel& model, std::span<const InflectionExample> examples,
                                 DecodeMode mode, std::size_t beam_width = decode::kDefaultBeamWidth);

// ---------------------------------------------------------------------------
// Accuracy and F1

struct ClassAccuracy {
  InflectionClass inflection_class = InflectionClass::kOther;
  std::size_t correct = 0;
  std::size_t total = 0;
  double accuracy = kUndefined;
};

// Exact-match accuracy per gold class, over the language's class inventory.
// Classes with no gold examples are omitted and noted in `warnings`.
std::vector<ClassAccuracy> class_accuracy(std::span<const InflectionExample> gold,
                                          std::span<const std::string> predictions, Language language,
                                          std::vector<std::string>* warnings = nullptr);
double overall_accuracy(std::span<const InflectionExample> gold, std::span<const std::string> predictions);

struct EnsembleAccuracy {
  InflectionClass inflection_class = InflectionClass::kOther;
  std::vector<double> per_seed;
  MeanStd stats;
};
// `per_seed_predictions[s][i]` is seed s's prediction for gold[i].
std::vector<EnsembleAccuracy> accuracy(std::span<const std::vector<std::string>> per_seed_predictions,
                                       std::span<const InflectionExample> gold, Language language,
                                       std::vector<std::string>* warnings = nullptr);

struct ClassPRF {
  InflectionClass inflection_class = InflectionClass::kOther;
  std::size_t support = 0;    // gold items of the class
  std::size_t predicted = 0;  // predictions assigned to the class
  std::size_t true_positive = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct ClassMetrics {
  Language language = Language::kGerman;
  std::vector<ClassPRF> classes;  // full inventory, in inventory order
  double class_accuracy = 0.0;    // share of items whose predicted class is the gold class
  double exact_accuracy = 0.0;    // share of exact string matches
};

// Labels gold and predicted plurals with classify_german_suffix and scores
// each class as a one-vs-rest decision. Precision (recall) is 0 when a class
// has no predictions (gold items). German only: English classes are lexical
// and cannot be read off a predicted string.
ClassMetrics class_f1(std::span<const InflectionExample> gold, std::span<const std::string> predictions,
                      Language language);

// ---------------------------------------------------------------------------
// Wug scoring

struct Production {
  std::string lemma;
  std::string form;
  std::size_t count = 0;
  double probability = 0.0;
};

// `outputs[m][l]` lists the forms model m produced for lemmas[l]: one form in
// top-prediction mode, s samples in sampling mode. Every list must have the
// same length s, and probability = count / (n * s). Within a lemma, forms are
// ordered by count (descending) then by string.
std::vector<Production> production_probabilities(std::span<const std::string> lemmas,
                                                 std::span<const std::vector<std::vector<std::string>>> outputs);

enum class ProductionMode { kTop, kSample };

struct ProductionOptions {
  ProductionMode mode = ProductionMode::kTop;
  std::size_t beam_width = decode::kDefaultBeamWidth;
  std::size_t samples = 100;
  std::uint64_t seed = 1;
};

// Runs each model on every wug lemma and returns its outputs in the shape
// production_probabilities() takes.
std::vector<std::vector<std::string>> wug_outputs(const StepModel& model, const WugSet& wugs,
                                                  const ProductionOptions& options, std::size_t model_index = 0);

struct Rating {
  std::size_t candidate = 0;              // index into WugSet::candidates
  double mean = kUndefined;               // mean normalized probability over models
  std::vector<double> per_seed_normalized;
  std::vector<double> per_seed_raw;
};

// Forced-scores every candidate under every model. Errors name the
// offending (lemma, form).
std::vector<Rating> model_rating(std::span<const StepModel* const> models, const WugSet& wugs);

// ---------------------------------------------------------------------------
// Correlation

struct Correlation {
  double r = kUndefined;
  double p_value = kUndefined;  // two-sided, t approximation with n - 2 dof
  std::size_t n = 0;

  bool defined() const { return !std::isnan(r); }
};

// 1-based ranks; tied values share the mean of their positions.
std::vector<double> average_ranks(std::span<const double> values);

// Undefined (NaN) when either input has zero variance. Throws ContractError
// on length mismatch or fewer than 3 pairs.
Correlation pearson(std::span<const double> x, std::span<const double> y);
Correlation spearman(std::span<const double> x, std::span<const double> y);

inline constexpr std::size_t kMinClassSize = 3;

struct ClassCorrelation {
  InflectionClass inflection_class = InflectionClass::kOther;
  std::size_t n = 0;
  Correlation rating;      // vs human_rating
  Correlation production;  // vs human_prod_prob
};

struct CorrelationTable {
  std::vector<ClassCorrelation> classes;  // rated classes with >= kMinClassSize pairs
  double macro_rating = kUndefined;       // unweighted mean over defined classes
  double macro_production = kUndefined;
  std::vector<std::string> warnings;
};

// Spearman rho within each rated class; `model_values[i]` belongs to
// candidates[i]. The "other" class is never correlated.
CorrelationTable spearman_by_class(std::span<const double> model_values, std::span<const WugCandidate> candidates,
                                   Language language);

struct GridCell {
  std::string model;
  std::string cell;  // "regular", "irregular", "en", "e", ...
  std::optional<double> performance;
  std::optional<double> correlation;
};

struct AccuracyCorrelation {
  std::vector<std::pair<std::string, Correlation>> by_model;  // first-appearance order
  std::vector<std::pair<std::string, Correlation>> by_cell;
  Correlation pooled;
  std::vector<std::string> gaps;  // "<model>/<cell>" with a missing value
};

// Pearson r between performance and correlation within each model, within
// each cell, and over every complete cell. Incomplete cells are skipped and
// listed in `gaps`; groups with fewer than 3 complete cells stay undefined.
AccuracyCorrelation accuracy_vs_correlation(std::span<const GridCell> grid);

// ---------------------------------------------------------------------------
// Published reference values, rendered next to new results.

struct ReferenceValue {
  std::string_view table;
  std::string_view row;
  std::string_view column;
  double value;
};

std::span<const ReferenceValue> reference_values();
std::optional<double> reference_value(std::string_view table, std::string_view row, std::string_view column);

}  // namespace wugbench::wugeval
