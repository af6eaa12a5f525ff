#include "wugbench/wugeval.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

#include "wugbench/error.hpp"

namespace wugbench::wugeval {
namespace {

void warn(std::vector<std::string>* warnings, std::string message) {
  if (warnings) warnings->push_back(std::move(message));
}

void check_lengths(std::size_t gold, std::size_t predictions) {
  if (gold != predictions) {
    throw ContractError(std::to_string(predictions) + " predictions for " + std::to_string(gold) + " gold items");
  }
}

std::vector<corpus::SymbolId> wug_source(const corpus::Alphabet& alphabet, const WugSet& wugs,
                                         std::string_view lemma) {
  const std::vector<std::string> tags = corpus::wug_tags(wugs.language);
  return corpus::encode_source(alphabet, lemma, tags);
}

double t_test_p(double r, std::size_t n) {
  if (n < 3 || std::isnan(r)) return kUndefined;
  if (std::abs(r) >= 1.0) return 0.0;
  const double dof = static_cast<double>(n - 2);
  const double t = r * std::sqrt(dof / (1.0 - r * r));
  const boost::math::students_t dist(dof);
  return 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
}

void check_pairs(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw ContractError("correlation: lengths " + std::to_string(x.size()) + " and " + std::to_string(y.size()));
  }
  if (x.size() < 3) throw ContractError("correlation: need at least 3 pairs, got " + std::to_string(x.size()));
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return kUndefined;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

MeanStd mean_std(std::span<const double> values) {
  MeanStd out;
  out.n = values.size();
  if (values.empty()) return out;
  const double n = static_cast<double>(values.size());
  out.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  out.stdev = std::sqrt(ss / n);
  return out;
}

std::vector<std::string> predict(const StepModel& model, std::span<const InflectionExample> examples,
                                 DecodeMode mode, std::size_t beam_width) {
  std::vector<std::string> out;
  out.reserve(examples.size());
  for (const InflectionExample& ex : examples) {
    const auto source = corpus::encode_source(model.alphabet(), ex.lemma, ex.tags);
    decode::Hypothesis best;
    if (mode == DecodeMode::kGreedy) {
      best = decode::greedy_decode(model, source);
    } else {
      best = std::move(decode::beam_decode(model, source, beam_width).front());
    }
    out.push_back(best.finished ? decode::hypothesis_text(model, best) : std::string());
  }
  return out;
}

std::vector<ClassAccuracy> class_accuracy(std::span<const InflectionExample> gold,
                                          std::span<const std::string> predictions, Language language,
                                          std::vector<std::string>* warnings) {
  check_lengths(gold.size(), predictions.size());
  std::vector<ClassAccuracy> out;
  for (InflectionClass c : corpus::class_inventory(language)) {
    ClassAccuracy acc;
    acc.inflection_class = c;
    for (std::size_t i = 0; i < gold.size(); ++i) {
      if (gold[i].inflection_class != c) continue;
      ++acc.total;
      if (predictions[i] == gold[i].form) ++acc.correct;
    }
    if (acc.total == 0) {
      warn(warnings, "no gold examples of class " + std::string(corpus::class_token(c)) + "; accuracy omitted");
      continue;
    }
    acc.accuracy = static_cast<double>(acc.correct) / static_cast<double>(acc.total);
    out.push_back(acc);
  }
  return out;
}

double overall_accuracy(std::span<const InflectionExample> gold, std::span<const std::string> predictions) {
  check_lengths(gold.size(), predictions.size());
  if (gold.empty()) return kUndefined;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) correct += predictions[i] == gold[i].form;
  return static_cast<double>(correct) / static_cast<double>(gold.size());
}

std::vector<EnsembleAccuracy> accuracy(std::span<const std::vector<std::string>> per_seed_predictions,
                                       std::span<const InflectionExample> gold, Language language,
                                       std::vector<std::string>* warnings) {
  std::vector<EnsembleAccuracy> out;
  for (std::size_t s = 0; s < per_seed_predictions.size(); ++s) {
    const auto cells = class_accuracy(gold, per_seed_predictions[s], language, s == 0 ? warnings : nullptr);
    for (const ClassAccuracy& cell : cells) {
      auto it = std::find_if(out.begin(), out.end(),
                             [&](const EnsembleAccuracy& e) { return e.inflection_class == cell.inflection_class; });
      if (it == out.end()) {
        out.push_back({cell.inflection_class, {}, {}});
        it = out.end() - 1;
      }
      it->per_seed.push_back(cell.accuracy);
    }
  }
  for (EnsembleAccuracy& e : out) e.stats = mean_std(e.per_seed);
  return out;
}

ClassMetrics class_f1(std::span<const InflectionExample> gold, std::span<const std::string> predictions,
                      Language language) {
  check_lengths(gold.size(), predictions.size());
  if (language != Language::kGerman) {
    throw ConfigError("class F1 needs suffix-classifiable forms; English classes are lexical");
  }
  ClassMetrics metrics;
  metrics.language = language;
  const auto inventory = corpus::class_inventory(language);
  for (InflectionClass c : inventory) metrics.classes.push_back({c});
  auto slot = [&](InflectionClass c) -> ClassPRF& {
    for (ClassPRF& prf : metrics.classes) {
      if (prf.inflection_class == c) return prf;
    }
    throw ContractError("class outside the inventory");
  };

  std::size_t class_hits = 0;
  std::size_t exact_hits = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const InflectionClass g = corpus::classify_german_suffix(gold[i].lemma, gold[i].form);
    const InflectionClass p = predictions[i].empty() ? InflectionClass::kOther
                                                     : corpus::classify_german_suffix(gold[i].lemma, predictions[i]);
    ++slot(g).support;
    ++slot(p).predicted;
    if (g == p) {
      ++slot(g).true_positive;
      ++class_hits;
    }
    exact_hits += predictions[i] == gold[i].form;
  }
  for (ClassPRF& prf : metrics.classes) {
    const double tp = static_cast<double>(prf.true_positive);
    prf.precision = prf.predicted ? tp / static_cast<double>(prf.predicted) : 0.0;
    prf.recall = prf.support ? tp / static_cast<double>(prf.support) : 0.0;
    const double denom = prf.precision + prf.recall;
    prf.f1 = denom > 0.0 ? 2.0 * prf.precision * prf.recall / denom : 0.0;
  }
  if (!gold.empty()) {
    metrics.class_accuracy = static_cast<double>(class_hits) / static_cast<double>(gold.size());
    metrics.exact_accuracy = static_cast<double>(exact_hits) / static_cast<double>(gold.size());
  }
  return metrics;
}

std::vector<Production> production_probabilities(std::span<const std::string> lemmas,
                                                 std::span<const std::vector<std::vector<std::string>>> outputs) {
  if (outputs.empty()) throw ContractError("production_probabilities: no models");
  std::optional<std::size_t> draws;
  for (const auto& model : outputs) {
    if (model.size() != lemmas.size()) {
      throw ContractError("production_probabilities: model outputs cover " + std::to_string(model.size()) +
                          " lemmas, expected " + std::to_string(lemmas.size()));
    }
    for (const auto& forms : model) {
      if (forms.empty() || (draws && *draws != forms.size())) {
        throw ContractError("production_probabilities: every lemma needs the same positive number of outputs");
      }
      draws = forms.size();
    }
  }
  const double total = static_cast<double>(outputs.size() * draws.value_or(1));

  std::vector<Production> out;
  for (std::size_t l = 0; l < lemmas.size(); ++l) {
    std::map<std::string, std::size_t> counts;
    for (const auto& model : outputs) {
      for (const std::string& form : model[l]) ++counts[form];
    }
    std::vector<Production> rows;
    for (const auto& [form, count] : counts) {
      rows.push_back({lemmas[l], form, count, static_cast<double>(count) / total});
    }
    std::stable_sort(rows.begin(), rows.end(), [](const Production& a, const Production& b) { return a.count > b.count; });
    out.insert(out.end(), rows.begin(), rows.end());
  }
  return out;
}

std::vector<std::vector<std::string>> wug_outputs(const StepModel& model, const WugSet& wugs,
                                                  const ProductionOptions& options, std::size_t model_index) {
  std::vector<std::vector<std::string>> out;
  nd::Rng rng = nd::Rng(options.seed).fork(model_index);
  for (const std::string& lemma : wugs.lemmas()) {
    const auto source = wug_source(model.alphabet(), wugs, lemma);
    std::vector<std::string> forms;
    if (options.mode == ProductionMode::kTop) {
      const auto beam = decode::beam_decode(model, source, options.beam_width);
      forms.push_back(beam.front().finished ? decode::hypothesis_text(model, beam.front()) : std::string());
    } else {
      for (std::size_t s = 0; s < options.samples; ++s) {
        const auto h = decode::sample_decode(model, source, rng);
        forms.push_back(h.finished ? decode::hypothesis_text(model, h) : std::string());
      }
    }
    out.push_back(std::move(forms));
  }
  return out;
}

std::vector<Rating> model_rating(std::span<const StepModel* const> models, const WugSet& wugs) {
  if (models.empty()) throw ContractError("model_rating: empty ensemble");
  std::vector<Rating> out(wugs.candidates.size());
  for (std::size_t i = 0; i < wugs.candidates.size(); ++i) out[i].candidate = i;
  for (const StepModel* model : models) {
    for (std::size_t i = 0; i < wugs.candidates.size(); ++i) {
      const WugCandidate& c = wugs.candidates[i];
      decode::ScoredForm scored;
      try {
        scored = decode::force_score(*model, wug_source(model->alphabet(), wugs, c.lemma), c.form);
      } catch (const EncodingError& e) {
        throw EncodingError(e.symbol(), "(" + c.lemma + ", " + c.form + "): " + e.what());
      } catch (const LengthError& e) {
        throw LengthError("(" + c.lemma + ", " + c.form + "): " + e.what());
      }
      out[i].per_seed_normalized.push_back(scored.normalized_prob);
      out[i].per_seed_raw.push_back(scored.raw_logprob);
    }
  }
  for (Rating& r : out) r.mean = mean_of(r.per_seed_normalized);
  return out;
}

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

Correlation pearson(std::span<const double> x, std::span<const double> y) {
  check_pairs(x, y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  Correlation c;
  c.n = x.size();
  if (sxx == 0.0 || syy == 0.0) return c;
  c.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  c.p_value = t_test_p(c.r, c.n);
  return c;
}

Correlation spearman(std::span<const double> x, std::span<const double> y) {
  check_pairs(x, y);
  const std::vector<double> rx = average_ranks(x);
  const std::vector<double> ry = average_ranks(y);
  return pearson(rx, ry);
}

CorrelationTable spearman_by_class(std::span<const double> model_values, std::span<const WugCandidate> candidates,
                                   Language language) {
  if (model_values.size() != candidates.size()) {
    throw ContractError("spearman_by_class: " + std::to_string(model_values.size()) + " values for " +
                        std::to_string(candidates.size()) + " candidates");
  }
  CorrelationTable table;
  std::vector<double> rating_rhos;
  std::vector<double> production_rhos;
  for (InflectionClass c : corpus::rated_classes(language)) {
    std::vector<double> model;
    std::vector<double> rating;
    std::vector<double> production;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (candidates[i].inflection_class != c) continue;
      model.push_back(model_values[i]);
      rating.push_back(candidates[i].human_rating);
      production.push_back(candidates[i].human_prod_prob);
    }
    const std::string token(corpus::class_token(c));
    if (model.size() < kMinClassSize) {
      table.warnings.push_back("class " + token + " has " + std::to_string(model.size()) +
                               " pairs; correlation omitted");
      continue;
    }
    ClassCorrelation row{c, model.size(), spearman(model, rating), spearman(model, production)};
    if (!row.rating.defined()) table.warnings.push_back("class " + token + ": rating correlation undefined (zero variance)");
    if (!row.production.defined()) {
      table.warnings.push_back("class " + token + ": production correlation undefined (zero variance)");
    }
    if (row.rating.defined()) rating_rhos.push_back(row.rating.r);
    if (row.production.defined()) production_rhos.push_back(row.production.r);
    table.classes.push_back(row);
  }
  table.macro_rating = mean_of(rating_rhos);
  table.macro_production = mean_of(production_rhos);
  return table;
}

AccuracyCorrelation accuracy_vs_correlation(std::span<const GridCell> grid) {
  AccuracyCorrelation out;
  std::vector<std::string> models;
  std::vector<std::string> cells;
  for (const GridCell& g : grid) {
    if (std::find(models.begin(), models.end(), g.model) == models.end()) models.push_back(g.model);
    if (std::find(cells.begin(), cells.end(), g.cell) == cells.end()) cells.push_back(g.cell);
  }
  auto complete = [](const GridCell& g) { return g.performance && g.correlation; };
  for (const std::string& m : models) {
    for (const std::string& c : cells) {
      auto it = std::find_if(grid.begin(), grid.end(), [&](const GridCell& g) { return g.model == m && g.cell == c; });
      if (it == grid.end() || !complete(*it)) out.gaps.push_back(m + "/" + c);
    }
  }
  auto correlate = [&](auto&& select) {
    std::vector<double> x;
    std::vector<double> y;
    for (const GridCell& g : grid) {
      if (!complete(g) || !select(g)) continue;
      x.push_back(*g.performance);
      y.push_back(*g.correlation);
    }
    Correlation c;
    c.n = x.size();
    if (x.size() >= 3) c = pearson(x, y);
    return c;
  };
  for (const std::string& m : models) out.by_model.emplace_back(m, correlate([&](const GridCell& g) { return g.model == m; }));
  for (const std::string& c : cells) out.by_cell.emplace_back(c, correlate([&](const GridCell& g) { return g.cell == c; }));
  out.pooled = correlate([](const GridCell&) { return true; });
  return out;
}

// ---------------------------------------------------------------------------

namespace {

// Tables: en_results, de_f1, de_correlations, acc_corr_by_class,
// acc_corr_by_model, acc_corr_pooled, param_counts. Accuracies and F1 are in
// percent; "_sd" columns are the published standard deviations.
constexpr ReferenceValue kReference[] = {
    {"en_results", "mgl", "test_regular", 99.7},
    {"en_results", "mgl", "test_irregular", 38.0},
    {"en_results", "mgl", "prod_regular", 0.33},
    {"en_results", "mgl", "prod_irregular", 0.30},
    {"en_results", "mgl", "rating_regular", 0.50},
    {"en_results", "mgl", "rating_irregular", 0.49},
    {"en_results", "prior_lstm", "test_regular", 98.9},
    {"en_results", "prior_lstm", "test_irregular", 28.6},
    {"en_results", "prior_lstm", "prod_regular", 0.48},
    {"en_results", "prior_lstm", "prod_irregular", 0.45},
    {"en_results", "prior_aggregate", "prod_regular", 0.45},
    {"en_results", "prior_aggregate", "prod_irregular", 0.19},
    {"en_results", "prior_aggregate", "rating_regular", 0.43},
    {"en_results", "prior_aggregate", "rating_irregular", 0.31},

    {"en_results", "bilstm_attn", "dev_acc", 93.33},
    {"en_results", "bilstm_attn", "test_regular", 97.48},
    {"en_results", "bilstm_attn", "test_regular_sd", 0.65},
    {"en_results", "bilstm_attn", "test_irregular", 9.05},
    {"en_results", "bilstm_attn", "test_irregular_sd", 5.24},
    {"en_results", "bilstm_attn", "prod_regular", 0.28},
    {"en_results", "bilstm_attn", "prod_irregular", 0.36},
    {"en_results", "bilstm_attn", "rating_regular", 0.16},
    {"en_results", "bilstm_attn", "rating_irregular", 0.46},

    {"en_results", "bilstm_noattn", "dev_acc", 76.37},
    {"en_results", "bilstm_noattn", "test_regular", 82.72},
    {"en_results", "bilstm_noattn", "test_regular_sd", 2.06},
    {"en_results", "bilstm_noattn", "test_irregular", 7.62},
    {"en_results", "bilstm_noattn", "test_irregular_sd", 3.33},
    {"en_results", "bilstm_noattn", "prod_regular", 0.14},
    {"en_results", "bilstm_noattn", "prod_irregular", 0.44},
    {"en_results", "bilstm_noattn", "rating_regular", 0.23},
    {"en_results", "bilstm_noattn", "rating_irregular", 0.35},

    {"en_results", "unilstm_attn", "dev_acc", 92.45},
    {"en_results", "unilstm_attn", "test_regular", 96.53},
    {"en_results", "unilstm_attn", "test_regular_sd", 0.68},
    {"en_results", "unilstm_attn", "test_irregular", 20.00},
    {"en_results", "unilstm_attn", "test_irregular_sd", 4.38},
    {"en_results", "unilstm_attn", "prod_regular", 0.35},
    {"en_results", "unilstm_attn", "prod_irregular", 0.41},
    {"en_results", "unilstm_attn", "rating_regular", 0.40},
    {"en_results", "unilstm_attn", "rating_irregular", 0.32},

    {"en_results", "unilstm_noattn", "dev_acc", 73.49},
    {"en_results", "unilstm_noattn", "test_regular", 77.72},
    {"en_results", "unilstm_noattn", "test_regular_sd", 1.64},
    {"en_results", "unilstm_noattn", "test_irregular", 10.48},
    {"en_results", "unilstm_noattn", "test_irregular_sd", 10.24},
    {"en_results", "unilstm_noattn", "prod_regular", 0.22},
    {"en_results", "unilstm_noattn", "prod_irregular", 0.43},
    {"en_results", "unilstm_noattn", "rating_regular", 0.28},
    {"en_results", "unilstm_noattn", "rating_irregular", 0.34},

    {"en_results", "transformer", "dev_acc", 94.88},
    {"en_results", "transformer", "test_regular", 99.21},
    {"en_results", "transformer", "test_regular_sd", 0.53},
    {"en_results", "transformer", "test_irregular", 10.95},
    {"en_results", "transformer", "test_irregular_sd", 11.46},
    {"en_results", "transformer", "prod_regular", 0.38},
    {"en_results", "transformer", "prod_irregular", 0.47},
    {"en_results", "transformer", "rating_regular", 0.58},
    {"en_results", "transformer", "rating_irregular", 0.58},

    {"de_f1", "prior_german", "dev_acc", 92.10},
    {"de_f1", "prior_german", "en", 95.00},
    {"de_f1", "prior_german", "e", 87.00},
    {"de_f1", "prior_german", "zero", 92.00},
    {"de_f1", "prior_german", "er", 84.00},
    {"de_f1", "prior_german", "s", 60.00},
    {"de_f1", "prior_german", "other", 42.00},

    {"de_f1", "bilstm_attn", "dev_acc", 89.37},
    {"de_f1", "bilstm_attn", "en", 93.93},
    {"de_f1", "bilstm_attn", "en_sd", 0.6},
    {"de_f1", "bilstm_attn", "e", 88.08},
    {"de_f1", "bilstm_attn", "e_sd", 0.9},
    {"de_f1", "bilstm_attn", "zero", 92.43},
    {"de_f1", "bilstm_attn", "zero_sd", 0.6},
    {"de_f1", "bilstm_attn", "er", 79.07},
    {"de_f1", "bilstm_attn", "er_sd", 5.1},
    {"de_f1", "bilstm_attn", "s", 51.75},
    {"de_f1", "bilstm_attn", "s_sd", 4.6},
    {"de_f1", "bilstm_attn", "other", 45.36},
    {"de_f1", "bilstm_attn", "other_sd", 4.0},

    {"de_f1", "bilstm_noattn", "dev_acc", 54.65},
    {"de_f1", "bilstm_noattn", "en", 74.16},
    {"de_f1", "bilstm_noattn", "en_sd", 1.9},
    {"de_f1", "bilstm_noattn", "e", 63.56},
    {"de_f1", "bilstm_noattn", "e_sd", 2.4},
    {"de_f1", "bilstm_noattn", "zero", 75.57},
    {"de_f1", "bilstm_noattn", "zero_sd", 2.1},
    {"de_f1", "bilstm_noattn", "er", 51.26},
    {"de_f1", "bilstm_noattn", "er_sd", 3.7},
    {"de_f1", "bilstm_noattn", "s", 29.58},
    {"de_f1", "bilstm_noattn", "s_sd", 7.4},
    {"de_f1", "bilstm_noattn", "other", 9.07},
    {"de_f1", "bilstm_noattn", "other_sd", 0.6},

    {"de_f1", "unilstm_attn", "dev_acc", 86.40},
    {"de_f1", "unilstm_attn", "en", 93.39},
    {"de_f1", "unilstm_attn", "en_sd", 0.6},
    {"de_f1", "unilstm_attn", "e", 87.35},
    {"de_f1", "unilstm_attn", "e_sd", 1.0},
    {"de_f1", "unilstm_attn", "zero", 92.49},
    {"de_f1", "unilstm_attn", "zero_sd", 1.1},
    {"de_f1", "unilstm_attn", "er", 69.78},
    {"de_f1", "unilstm_attn", "er_sd", 5.3},
    {"de_f1", "unilstm_attn", "s", 52.36},
    {"de_f1", "unilstm_attn", "s_sd", 4.5},
    {"de_f1", "unilstm_attn", "other", 44.06},
    {"de_f1", "unilstm_attn", "other_sd", 5.8},

    {"de_f1", "unilstm_noattn", "dev_acc", 48.71},
    {"de_f1", "unilstm_noattn", "en", 69.69},
    {"de_f1", "unilstm_noattn", "en_sd", 2.2},
    {"de_f1", "unilstm_noattn", "e", 58.31},
    {"de_f1", "unilstm_noattn", "e_sd", 2.4},
    {"de_f1", "unilstm_noattn", "zero", 71.98},
    {"de_f1", "unilstm_noattn", "zero_sd", 1.7},
    {"de_f1", "unilstm_noattn", "er", 46.64},
    {"de_f1", "unilstm_noattn", "er_sd", 5.2},
    {"de_f1", "unilstm_noattn", "s", 32.54},
    {"de_f1", "unilstm_noattn", "s_sd", 7.7},
    {"de_f1", "unilstm_noattn", "other", 8.08},
    {"de_f1", "unilstm_noattn", "other_sd", 0.4},

    {"de_f1", "transformer", "dev_acc", 91.04},
    {"de_f1", "transformer", "en", 92.93},
    {"de_f1", "transformer", "en_sd", 0.4},
    {"de_f1", "transformer", "e", 87.81},
    {"de_f1", "transformer", "e_sd", 0.7},
    {"de_f1", "transformer", "zero", 93.86},
    {"de_f1", "transformer", "zero_sd", 0.3},
    {"de_f1", "transformer", "er", 65.44},
    {"de_f1", "transformer", "er_sd", 4.7},
    {"de_f1", "transformer", "s", 57.89},
    {"de_f1", "transformer", "s_sd", 2.0},
    {"de_f1", "transformer", "other", 57.47},
    {"de_f1", "transformer", "other_sd", 4.5},

    {"de_correlations", "prior_german", "prod_en", 0.28},
    {"de_correlations", "prior_german", "prod_e", 0.13},
    {"de_correlations", "prior_german", "prod_er", 0.05},
    {"de_correlations", "prior_german", "prod_s", 0.33},
    {"de_correlations", "prior_german", "prod_avg", 0.20},

    {"de_correlations", "bilstm_attn", "prod_en", 0.11},
    {"de_correlations", "bilstm_attn", "prod_e", 0.08},
    {"de_correlations", "bilstm_attn", "prod_zero", -0.14},
    {"de_correlations", "bilstm_attn", "prod_er", 0.24},
    {"de_correlations", "bilstm_attn", "prod_s", 0.38},
    {"de_correlations", "bilstm_attn", "prod_avg", 0.20},
    {"de_correlations", "bilstm_attn", "rating_en", 0.36},
    {"de_correlations", "bilstm_attn", "rating_e", 0.44},
    {"de_correlations", "bilstm_attn", "rating_zero", 0.06},
    {"de_correlations", "bilstm_attn", "rating_er", 0.36},
    {"de_correlations", "bilstm_attn", "rating_s", 0.39},
    {"de_correlations", "bilstm_attn", "rating_avg", 0.32},

    {"de_correlations", "bilstm_noattn", "prod_en", 0.44},
    {"de_correlations", "bilstm_noattn", "prod_e", 0.08},
    {"de_correlations", "bilstm_noattn", "prod_zero", -0.12},
    {"de_correlations", "bilstm_noattn", "prod_er", 0.27},
    {"de_correlations", "bilstm_noattn", "prod_s", 0.39},
    {"de_correlations", "bilstm_noattn", "prod_avg", 0.30},
    {"de_correlations", "bilstm_noattn", "rating_en", 0.51},
    {"de_correlations", "bilstm_noattn", "rating_e", 0.16},
    {"de_correlations", "bilstm_noattn", "rating_zero", -0.29},
    {"de_correlations", "bilstm_noattn", "rating_er", 0.30},
    {"de_correlations", "bilstm_noattn", "rating_s", 0.31},
    {"de_correlations", "bilstm_noattn", "rating_avg", 0.20},

    {"de_correlations", "unilstm_attn", "prod_en", 0.09},
    {"de_correlations", "unilstm_attn", "prod_e", 0.16},
    {"de_correlations", "unilstm_attn", "prod_zero", -0.13},
    {"de_correlations", "unilstm_attn", "prod_er", 0.36},
    {"de_correlations", "unilstm_attn", "prod_s", 0.39},
    {"de_correlations", "unilstm_attn", "prod_avg", 0.25},
    {"de_correlations", "unilstm_attn", "rating_en", 0.22},
    {"de_correlations", "unilstm_attn", "rating_e", 0.27},
    {"de_correlations", "unilstm_attn", "rating_zero", -0.16},
    {"de_correlations", "unilstm_attn", "rating_er", 0.46},
    {"de_correlations", "unilstm_attn", "rating_s", 0.44},
    {"de_correlations", "unilstm_attn", "rating_avg", 0.25},

    {"de_correlations", "unilstm_noattn", "prod_en", 0.14},
    {"de_correlations", "unilstm_noattn", "prod_e", 0.15},
    {"de_correlations", "unilstm_noattn", "prod_zero", 0.08},
    {"de_correlations", "unilstm_noattn", "prod_er", 0.17},
    {"de_correlations", "unilstm_noattn", "prod_s", 0.23},
    {"de_correlations", "unilstm_noattn", "prod_avg", 0.15},
    {"de_correlations", "unilstm_noattn", "rating_en", 0.24},
    {"de_correlations", "unilstm_noattn", "rating_e", 0.16},
    {"de_correlations", "unilstm_noattn", "rating_zero", -0.17},
    {"de_correlations", "unilstm_noattn", "rating_er", 0.05},
    {"de_correlations", "unilstm_noattn", "rating_s", 0.20},
    {"de_correlations", "unilstm_noattn", "rating_avg", 0.10},

    {"de_correlations", "transformer", "prod_en", 0.11},
    {"de_correlations", "transformer", "prod_e", 0.30},
    {"de_correlations", "transformer", "prod_zero", -0.13},
    {"de_correlations", "transformer", "prod_er", 0.28},
    {"de_correlations", "transformer", "prod_s", 0.50},
    {"de_correlations", "transformer", "prod_avg", 0.20},
    {"de_correlations", "transformer", "rating_en", 0.48},
    {"de_correlations", "transformer", "rating_e", 0.59},
    {"de_correlations", "transformer", "rating_zero", 0.15},
    {"de_correlations", "transformer", "rating_er", 0.50},
    {"de_correlations", "transformer", "rating_s", 0.71},
    {"de_correlations", "transformer", "rating_avg", 0.49},

    {"acc_corr_by_class", "r", "regular", 0.44},
    {"acc_corr_by_class", "r", "irregular", -0.31},
    {"acc_corr_by_class", "r", "en", 0.01},
    {"acc_corr_by_class", "r", "e", 0.80},
    {"acc_corr_by_class", "r", "zero", 0.73},
    {"acc_corr_by_class", "r", "er", 0.70},
    {"acc_corr_by_class", "r", "s", 0.83},

    {"acc_corr_by_model", "r", "bilstm_attn", -0.57},
    {"acc_corr_by_model", "r", "bilstm_noattn", -0.33},
    {"acc_corr_by_model", "r", "unilstm_attn", -0.37},
    {"acc_corr_by_model", "r", "unilstm_noattn", -0.39},
    {"acc_corr_by_model", "r", "transformer", -0.38},

    {"acc_corr_pooled", "r", "all", -0.17},
    {"rating_vs_production", "r", "all", 0.75},

    {"param_counts", "bilstm_attn", "params", 0.93e6},
    {"param_counts", "bilstm_noattn", "params", 0.90e6},
    {"param_counts", "unilstm_attn", "params", 0.56e6},
    {"param_counts", "unilstm_noattn", "params", 0.54e6},
    {"param_counts", "transformer", "params", 7.41e6},
};

}  // namespace

std::span<const ReferenceValue> reference_values() { return kReference; }

std::optional<double> reference_value(std::string_view table, std::string_view row, std::string_view column) {
  for (const ReferenceValue& v : kReference) {
    if (v.table == table && v.row == row && v.column == column) return v.value;
  }
  return std::nullopt;
}

}  // namespace wugbench::wugeval
