#include "wugbench/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "wugbench/error.hpp"

namespace wugbench::report {
namespace {

using corpus::InflectionClass;
using corpus::Language;
using nlohmann::json;
using seq2seq::Architecture;
using wugeval::kUndefined;
using wugeval::MeanStd;

std::string arch_key(Architecture a) { return std::string(seq2seq::to_string(a)); }

// The config as written, minus the output directory, so two runs into
// different directories produce identical summaries.
json without_output(json source) {
  if (source.is_object()) source.erase("output");
  return source;
}
std::string class_key(InflectionClass c) { return std::string(corpus::class_token(c)); }

double percent(double fraction) { return std::isnan(fraction) ? fraction : 100.0 * fraction; }

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string join(std::span<const double> values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ';';
    out += format_number(values[i]);
  }
  return out;
}

class Csv {
 public:
  Csv(const fs::path& path, std::initializer_list<std::string_view> header) : path_(path) {
    row_begin();
    for (std::string_view h : header) cell(h);
  }
  ~Csv() noexcept(false) {
    row_begin();
    fs::create_directories(path_.parent_path());
    std::ofstream out(path_, std::ios::binary);
    out << text_.str();
    if (!out) throw IoError("cannot write " + path_.string());
  }
  Csv& row() {
    row_begin();
    return *this;
  }
  Csv& cell(std::string_view s) {
    if (!first_) text_ << ',';
    text_ << csv_field(s);
    first_ = false;
    return *this;
  }
  Csv& num(double v) { return cell(format_number(v)); }
  Csv& count(std::size_t v) { return cell(std::to_string(v)); }

 private:
  void row_begin() {
    if (started_) text_ << '\n';
    started_ = true;
    first_ = true;
  }
  fs::path path_;
  std::ostringstream text_;
  bool started_ = false;
  bool first_ = true;
};

// ---------------------------------------------------------------------------
// Derived statistics, computed once per run in (architecture, seed) order.

struct CorrRow {
  std::string seed;  // "1", "2", ... or "mean"
  InflectionClass inflection_class = InflectionClass::kOther;
  bool macro = false;
  std::size_t n = 0;
  wugeval::Correlation rating;
  wugeval::Correlation production;
  std::string status;  // ok | undefined | omitted
};

struct ArchStats {
  Architecture arch = Architecture::kBiLstmAttn;
  std::vector<const SeedData*> ok;
  std::vector<std::uint64_t> failed;
  std::size_t parameters = 0;
  std::vector<double> dev;  // percent
  // Per class token plus "all"; percent.
  std::map<std::string, std::vector<double>> test;
  struct F1 {
    std::vector<double> precision, recall, f1;
  };
  std::map<std::string, F1> f1;  // German only
  std::vector<double> mean_normalized;  // per candidate
  std::vector<double> mean_raw;
  std::vector<wugeval::Production> productions;  // pooled over ok seeds
  std::vector<double> production_per_candidate;  // pooled
  std::vector<CorrRow> correlations;
};

struct Derived {
  std::vector<ArchStats> archs;
  std::vector<std::string> warnings;
  std::vector<std::string> incomplete;
};

std::map<std::pair<std::string, std::string>, double> production_lookup(std::span<const wugeval::Production> prods) {
  std::map<std::pair<std::string, std::string>, double> out;
  for (const auto& p : prods) out[{p.lemma, p.form}] = p.probability;
  return out;
}

std::vector<double> candidate_production(const corpus::WugSet& wugs, std::span<const wugeval::Production> prods) {
  const auto lookup = production_lookup(prods);
  std::vector<double> out;
  for (const auto& c : wugs.candidates) {
    auto it = lookup.find({c.lemma, c.form});
    out.push_back(it == lookup.end() ? 0.0 : it->second);
  }
  return out;
}

// "ok" when both correlations are defined, otherwise names the undefined one(s).
std::string correlation_status(const wugeval::Correlation& rating, const wugeval::Correlation& production) {
  if (rating.defined() && production.defined()) return "ok";
  if (rating.defined()) return "production_undefined";
  if (production.defined()) return "rating_undefined";
  return "undefined";
}

void add_correlations(ArchStats& a, const std::string& seed, std::span<const double> rating,
                      std::span<const double> production, const corpus::WugSet& wugs, Derived& d) {
  const auto by_rating = wugeval::spearman_by_class(rating, wugs.candidates, wugs.language);
  const auto by_production = wugeval::spearman_by_class(production, wugs.candidates, wugs.language);
  for (const std::string& w : by_rating.warnings) {
    d.warnings.push_back(arch_key(a.arch) + " seed=" + seed + ": " + w);
  }
  std::size_t defined_rating = 0;
  std::size_t defined_production = 0;
  for (InflectionClass c : corpus::rated_classes(wugs.language)) {
    CorrRow row;
    row.seed = seed;
    row.inflection_class = c;
    auto r = std::find_if(by_rating.classes.begin(), by_rating.classes.end(),
                          [&](const auto& x) { return x.inflection_class == c; });
    auto p = std::find_if(by_production.classes.begin(), by_production.classes.end(),
                          [&](const auto& x) { return x.inflection_class == c; });
    if (r == by_rating.classes.end()) {
      row.status = "omitted";
    } else {
      row.n = r->n;
      row.rating = r->rating;
      row.production = p->production;
      row.status = correlation_status(row.rating, row.production);
      defined_rating += row.rating.defined();
      defined_production += row.production.defined();
    }
    a.correlations.push_back(row);
  }
  CorrRow macro;
  macro.seed = seed;
  macro.macro = true;
  // n counts the classes averaged.
  macro.n = defined_rating;
  macro.rating.r = by_rating.macro_rating;
  macro.rating.n = defined_rating;
  macro.production.r = by_production.macro_production;
  macro.production.n = defined_production;
  macro.status = correlation_status(macro.rating, macro.production);
  a.correlations.push_back(macro);
}

Derived derive(const RunData& run) {
  const runner::ExperimentConfig& config = *run.config;
  const runner::Corpus& corpus = *run.corpus;
  const Language lang = config.language;
  const auto& test = corpus.split.test;
  const auto lemmas = corpus.wugs.lemmas();
  Derived d;

  for (Architecture arch : config.architectures) {
    ArchStats a;
    a.arch = arch;
    for (const SeedData& s : run.seeds) {
      if (s.arch != arch) continue;
      a.parameters = s.parameters;
      if (s.ok) a.ok.push_back(&s);
      else a.failed.push_back(s.seed);
    }
    for (std::uint64_t seed : a.failed) d.incomplete.push_back(arch_key(arch) + "/seed" + std::to_string(seed));
    if (a.ok.empty()) {
      d.incomplete.push_back(arch_key(arch) + "/all");
      d.archs.push_back(std::move(a));
      continue;
    }

    for (const SeedData* s : a.ok) {
      const auto& curve = s->record.curve;
      a.dev.push_back(s->record.selected_epoch && s->record.selected_epoch <= curve.size()
                          ? percent(curve[s->record.selected_epoch - 1].dev_accuracy)
                          : kUndefined);
    }

    const bool have_test = !a.ok.front()->test_predictions.empty() && !test.empty();
    if (have_test) {
      std::vector<std::vector<std::string>> preds;
      for (const SeedData* s : a.ok) preds.push_back(s->test_predictions);
      std::vector<std::string> warnings;
      for (const auto& cell : wugeval::accuracy(preds, test, lang, &warnings)) {
        for (double v : cell.per_seed) a.test[class_key(cell.inflection_class)].push_back(percent(v));
      }
      for (const auto& w : warnings) d.warnings.push_back(arch_key(arch) + ": " + w);
      for (const auto& p : preds) a.test["all"].push_back(percent(wugeval::overall_accuracy(test, p)));
      if (lang == Language::kGerman) {
        for (const auto& p : preds) {
          for (const auto& prf : wugeval::class_f1(test, p, lang).classes) {
            auto& f = a.f1[class_key(prf.inflection_class)];
            f.precision.push_back(percent(prf.precision));
            f.recall.push_back(percent(prf.recall));
            f.f1.push_back(percent(prf.f1));
          }
        }
      }
    }

    const bool have_wugs = !a.ok.front()->normalized.empty();
    if (have_wugs) {
      const std::size_t n = corpus.wugs.candidates.size();
      a.mean_normalized.assign(n, 0.0);
      a.mean_raw.assign(n, 0.0);
      std::vector<std::vector<std::vector<std::string>>> outputs;
      for (const SeedData* s : a.ok) {
        for (std::size_t i = 0; i < n; ++i) {
          a.mean_normalized[i] += s->normalized[i] / static_cast<double>(a.ok.size());
          a.mean_raw[i] += s->raw[i] / static_cast<double>(a.ok.size());
        }
        outputs.push_back(s->wug_outputs);
      }
      a.productions = wugeval::production_probabilities(lemmas, outputs);
      a.production_per_candidate = candidate_production(corpus.wugs, a.productions);
      add_correlations(a, "mean", a.mean_normalized, a.production_per_candidate, corpus.wugs, d);
      for (const SeedData* s : a.ok) {
        const auto own = wugeval::production_probabilities(
            lemmas, std::span<const std::vector<std::vector<std::string>>>(&s->wug_outputs, 1));
        add_correlations(a, std::to_string(s->seed), s->normalized, candidate_production(corpus.wugs, own),
                         corpus.wugs, d);
      }
    }
    d.archs.push_back(std::move(a));
  }
  return d;
}

// Class of a produced form for the wug lemma.
InflectionClass production_class(const corpus::WugSet& wugs, const std::string& lemma, const std::string& form) {
  for (const auto& c : wugs.candidates) {
    if (c.lemma == lemma && c.form == form) return c.inflection_class;
  }
  if (wugs.language == Language::kGerman && !form.empty()) return corpus::classify_german_suffix(lemma, form);
  return InflectionClass::kOther;
}

std::vector<std::string> contexts(const corpus::WugSet& wugs) {
  std::vector<std::string> out;
  for (const auto& c : wugs.candidates) {
    if (!c.context.empty() && std::find(out.begin(), out.end(), c.context) == out.end()) out.push_back(c.context);
  }
  std::sort(out.begin(), out.end(), std::greater<>());  // R before NR
  out.push_back("all");
  return out;
}

bool in_context(const std::string& ctx, const std::string& value) { return ctx == "all" || ctx == value; }

// ---------------------------------------------------------------------------

void curves(const RunData& run) {
  Csv csv(run.config->report_dir() / "training_curves.csv",
          {"architecture", "seed", "epoch", "train_loss", "dev_accuracy", "selected", "status"});
  for (const SeedData& s : run.seeds) {
    if (!s.ok) {
      csv.row().cell(arch_key(s.arch)).count(s.seed).cell("NA").cell("NA").cell("NA").cell("0").cell("failed");
      continue;
    }
    for (const auto& e : s.record.curve) {
      csv.row()
          .cell(arch_key(s.arch))
          .count(s.seed)
          .count(e.epoch)
          .num(e.train_loss)
          .num(percent(e.dev_accuracy))
          .cell(e.epoch == s.record.selected_epoch ? "1" : "0")
          .cell("ok");
    }
  }
}

void stat_row(Csv& csv, std::span<const double> values) {
  const MeanStd m = wugeval::mean_std(values);
  csv.num(m.mean).num(m.stdev).count(values.size()).cell(join(values));
}

void accuracy_file(const RunData& run, const Derived& d) {
  Csv csv(run.config->report_dir() / "accuracy.csv",
          {"architecture", "split", "class", "mean", "stdev", "seeds", "per_seed"});
  for (const ArchStats& a : d.archs) {
    csv.row().cell(arch_key(a.arch)).cell("dev").cell("all");
    stat_row(csv, a.dev);
    std::vector<std::string> keys;
    for (InflectionClass c : corpus::class_inventory(run.config->language)) keys.push_back(class_key(c));
    keys.push_back("all");
    for (const std::string& k : keys) {
      csv.row().cell(arch_key(a.arch)).cell("test").cell(k);
      auto it = a.test.find(k);
      stat_row(csv, it == a.test.end() ? std::span<const double>() : std::span<const double>(it->second));
    }
  }
}

void f1_file(const RunData& run, const Derived& d) {
  Csv csv(run.config->report_dir() / "f1.csv",
          {"architecture", "class", "precision", "recall", "f1", "f1_stdev", "seeds", "per_seed_f1"});
  if (run.config->language != Language::kGerman) return;
  for (const ArchStats& a : d.archs) {
    for (InflectionClass c : corpus::class_inventory(Language::kGerman)) {
      csv.row().cell(arch_key(a.arch)).cell(class_key(c));
      auto it = a.f1.find(class_key(c));
      if (it == a.f1.end()) {
        csv.num(kUndefined).num(kUndefined).num(kUndefined).num(kUndefined).count(0).cell("");
        continue;
      }
      const MeanStd f = wugeval::mean_std(it->second.f1);
      csv.num(wugeval::mean_std(it->second.precision).mean)
          .num(wugeval::mean_std(it->second.recall).mean)
          .num(f.mean)
          .num(f.stdev)
          .count(f.n)
          .cell(join(it->second.f1));
    }
  }
}

void ratings_file(const RunData& run, const Derived& d) {
  Csv csv(run.config->report_dir() / "ratings.csv",
          {"architecture", "lemma", "form", "class", "context", "seed", "normalized_prob", "raw_logprob"});
  const auto& cands = run.corpus->wugs.candidates;
  for (const ArchStats& a : d.archs) {
    if (a.mean_normalized.empty()) continue;
    for (std::size_t i = 0; i < cands.size(); ++i) {
      auto prefix = [&]() -> Csv& {
        return csv.row()
            .cell(arch_key(a.arch))
            .cell(cands[i].lemma)
            .cell(cands[i].form)
            .cell(class_key(cands[i].inflection_class))
            .cell(cands[i].context);
      };
      for (const SeedData* s : a.ok) prefix().count(s->seed).num(s->normalized[i]).num(s->raw[i]);
      prefix().cell("mean").num(a.mean_normalized[i]).num(a.mean_raw[i]);
    }
  }
}

void correlations_file(const RunData& run, const Derived& d) {
  Csv csv(run.config->report_dir() / "correlations.csv",
          {"architecture", "seed", "class", "n", "rating_rho", "rating_p", "production_rho", "production_p",
           "status"});
  for (const ArchStats& a : d.archs) {
    if (a.correlations.empty()) {
      for (InflectionClass c : corpus::rated_classes(run.config->language)) {
        csv.row().cell(arch_key(a.arch)).cell("mean").cell(class_key(c)).count(0);
        csv.num(kUndefined).num(kUndefined).num(kUndefined).num(kUndefined).cell("missing");
      }
      continue;
    }
    for (const CorrRow& r : a.correlations) {
      csv.row()
          .cell(arch_key(a.arch))
          .cell(r.seed)
          .cell(r.macro ? "macro" : class_key(r.inflection_class))
          .count(r.n)
          .num(r.rating.r)
          .num(r.rating.p_value)
          .num(r.production.r)
          .num(r.production.p_value)
          .cell(r.status);
    }
  }
}

void productions_files(const RunData& run, const Derived& d) {
  const corpus::WugSet& wugs = run.corpus->wugs;
  {
    Csv csv(run.config->report_dir() / "productions.csv",
            {"architecture", "lemma", "context", "form", "class", "count", "probability", "candidate"});
    for (const ArchStats& a : d.archs) {
      for (const auto& p : a.productions) {
        const bool candidate = std::any_of(wugs.candidates.begin(), wugs.candidates.end(),
                                           [&](const auto& c) { return c.lemma == p.lemma && c.form == p.form; });
        csv.row()
            .cell(arch_key(a.arch))
            .cell(p.lemma)
            .cell(wugs.context_of(p.lemma))
            .cell(p.form)
            .cell(class_key(production_class(wugs, p.lemma, p.form)))
            .count(p.count)
            .num(p.probability)
            .cell(candidate ? "1" : "0");
      }
    }
  }

  Csv csv(run.config->report_dir() / "production_summary.csv",
          {"architecture", "class", "context", "lemmas", "production_count", "model_production", "model_rating",
           "human_production", "human_rating"});
  std::vector<InflectionClass> classes(corpus::class_inventory(wugs.language).begin(),
                                       corpus::class_inventory(wugs.language).end());
  if (std::find(classes.begin(), classes.end(), InflectionClass::kOther) == classes.end()) {
    classes.push_back(InflectionClass::kOther);
  }
  const auto lemmas = wugs.lemmas();
  for (const ArchStats& a : d.archs) {
    for (InflectionClass c : classes) {
      for (const std::string& ctx : contexts(wugs)) {
        std::size_t n_lemmas = 0;
        for (const auto& l : lemmas) n_lemmas += in_context(ctx, wugs.context_of(l));
        std::size_t count = 0;
        double prob = 0.0;
        for (const auto& p : a.productions) {
          if (!in_context(ctx, wugs.context_of(p.lemma)) || production_class(wugs, p.lemma, p.form) != c) continue;
          count += p.count;
          prob += p.probability;
        }
        double model_rating = 0.0, human_rating = 0.0, human_prod = 0.0;
        std::size_t rated = 0;
        for (std::size_t i = 0; i < wugs.candidates.size(); ++i) {
          const auto& cand = wugs.candidates[i];
          if (cand.inflection_class != c || !in_context(ctx, cand.context)) continue;
          ++rated;
          if (!a.mean_normalized.empty()) model_rating += a.mean_normalized[i];
          human_rating += cand.human_rating;
          human_prod += cand.human_prod_prob;
        }
        const bool have_model = !a.productions.empty();
        csv.row().cell(arch_key(a.arch)).cell(class_key(c)).cell(ctx).count(n_lemmas);
        csv.count(count)
            .num(have_model && n_lemmas ? prob / static_cast<double>(n_lemmas) : kUndefined)
            .num(have_model && rated ? model_rating / static_cast<double>(rated) : kUndefined)
            .num(rated ? human_prod / static_cast<double>(rated) : kUndefined)
            .num(rated ? human_rating / static_cast<double>(rated) : kUndefined);
      }
    }
  }
}

std::vector<wugeval::GridCell> grid_of(const RunData& run, const Derived& d) {
  std::vector<wugeval::GridCell> out;
  const Language lang = run.config->language;
  for (const ArchStats& a : d.archs) {
    for (InflectionClass c : corpus::rated_classes(lang)) {
      wugeval::GridCell cell;
      cell.model = arch_key(a.arch);
      cell.cell = class_key(c);
      if (lang == Language::kEnglish) {
        if (auto it = a.test.find(cell.cell); it != a.test.end()) {
          const double m = wugeval::mean_std(it->second).mean;
          if (!std::isnan(m)) cell.performance = m;
        }
      } else if (auto it = a.f1.find(cell.cell); it != a.f1.end()) {
        const double m = wugeval::mean_std(it->second.f1).mean;
        if (!std::isnan(m)) cell.performance = m;
      }
      for (const CorrRow& r : a.correlations) {
        if (r.seed == "mean" && !r.macro && r.inflection_class == c && r.rating.defined()) cell.correlation = r.rating.r;
      }
      out.push_back(cell);
    }
  }
  return out;
}

json stats_json(std::span<const double> values) {
  const MeanStd m = wugeval::mean_std(values);
  json per_seed = json::array();
  for (double v : values) per_seed.push_back(number(v));
  return {{"mean", number(m.mean)}, {"stdev", number(m.stdev)}, {"per_seed", per_seed}};
}

const ArchStats* find_arch(const Derived& d, Architecture arch) {
  for (const ArchStats& a : d.archs) {
    if (a.arch == arch) return &a;
  }
  return nullptr;
}

std::optional<double> mean_of(const std::map<std::string, std::vector<double>>& m, const std::string& key) {
  auto it = m.find(key);
  if (it == m.end()) return std::nullopt;
  const double v = wugeval::mean_std(it->second).mean;
  if (std::isnan(v)) return std::nullopt;
  return v;
}

std::optional<double> test_mean(const Derived& d, Architecture arch, const std::string& cls) {
  const ArchStats* a = find_arch(d, arch);
  return a ? mean_of(a->test, cls) : std::nullopt;
}

std::optional<double> f1_mean(const Derived& d, Architecture arch, const std::string& cls) {
  const ArchStats* a = find_arch(d, arch);
  if (!a) return std::nullopt;
  auto it = a->f1.find(cls);
  if (it == a->f1.end()) return std::nullopt;
  return wugeval::mean_std(it->second.f1).mean;
}

std::optional<double> rating_rho(const Derived& d, Architecture arch, InflectionClass c) {
  const ArchStats* a = find_arch(d, arch);
  if (!a) return std::nullopt;
  for (const CorrRow& r : a->correlations) {
    if (r.seed == "mean" && !r.macro && r.inflection_class == c && r.rating.defined()) return r.rating.r;
  }
  return std::nullopt;
}

json check(std::string name, std::optional<double> value, std::string relation, double threshold,
           bool flag_only = false) {
  std::string status = "missing";
  if (value) {
    const bool ok = relation == ">=" ? *value >= threshold : *value > threshold;
    status = ok ? "pass" : (flag_only ? "flag" : "fail");
  }
  return {{"name", std::move(name)},
          {"value", value ? json(*value) : json(nullptr)},
          {"relation", std::move(relation)},
          {"threshold", threshold},
          {"status", status}};
}

std::optional<double> diff(std::optional<double> a, std::optional<double> b) {
  if (!a || !b) return std::nullopt;
  return *a - *b;
}

json checks(const RunData& run, const Derived& d) {
  using A = Architecture;
  json out = json::array();
  if (run.config->language == Language::kEnglish) {
    out.push_back(check("transformer_test_regular", test_mean(d, A::kTransformer, "regular"), ">=", 95.0));
    out.push_back(check("bilstm_attn_test_regular", test_mean(d, A::kBiLstmAttn, "regular"), ">=", 93.0));
    out.push_back(check("bilstm_attention_gap_regular",
                        diff(test_mean(d, A::kBiLstmAttn, "regular"), test_mean(d, A::kBiLstmNoAttn, "regular")),
                        ">=", 8.0));
    out.push_back(check("unilstm_attention_gap_regular",
                        diff(test_mean(d, A::kUniLstmAttn, "regular"), test_mean(d, A::kUniLstmNoAttn, "regular")),
                        ">=", 8.0));
    return out;
  }
  for (A arch : {A::kBiLstmAttn, A::kUniLstmAttn, A::kTransformer}) {
    out.push_back(check(arch_key(arch) + "_f1_en", f1_mean(d, arch, "en"), ">=", 88.0));
    out.push_back(check(arch_key(arch) + "_f1_zero", f1_mean(d, arch, "zero"), ">=", 88.0));
  }
  for (A noattn : {A::kBiLstmNoAttn, A::kUniLstmNoAttn}) {
    for (A attn : {A::kBiLstmAttn, A::kUniLstmAttn}) {
      out.push_back(check(arch_key(attn) + "_minus_" + arch_key(noattn) + "_f1_e",
                          diff(f1_mean(d, attn, "e"), f1_mean(d, noattn, "e")), ">=", 15.0));
    }
  }
  out.push_back(check("transformer_rating_rho_s", rating_rho(d, A::kTransformer, InflectionClass::kS), ">", 0.0, true));
  out.push_back(check("transformer_minus_unilstm_noattn_rating_rho_s",
                      diff(rating_rho(d, A::kTransformer, InflectionClass::kS),
                           rating_rho(d, A::kUniLstmNoAttn, InflectionClass::kS)),
                      ">", 0.0, true));
  return out;
}

json reference_for(Language lang, Architecture arch) {
  json out = json::object();
  const std::string row = arch_key(arch);
  for (const auto& v : wugeval::reference_values()) {
    const bool relevant = (lang == Language::kEnglish && v.table == "en_results") ||
                          (lang == Language::kGerman && (v.table == "de_f1" || v.table == "de_correlations")) ||
                          v.table == "param_counts" || v.table == "acc_corr_by_model";
    if (relevant && v.row == row) out[std::string(v.table)][std::string(v.column)] = v.value;
  }
  return out;
}

json correlation_json(const wugeval::Correlation& c) {
  return {{"r", number(c.r)}, {"p_value", number(c.p_value)}, {"n", c.n}};
}

void summary_file(const RunData& run, const Derived& d) {
  const runner::ExperimentConfig& config = *run.config;
  const runner::Corpus& corpus = *run.corpus;
  json models = json::object();
  for (const ArchStats& a : d.archs) {
    json m;
    m["display_name"] = seq2seq::display_name(a.arch);
    m["parameters"] = a.parameters;
    m["seeds_ok"] = a.ok.size();
    m["seeds_failed"] = a.failed;
    json selected = json::array();
    for (const SeedData* s : a.ok) selected.push_back(s->record.selected_epoch);
    m["selected_epochs"] = selected;
    m["dev_accuracy"] = stats_json(a.dev);
    json test = json::object();
    for (const auto& [k, v] : a.test) test[k] = stats_json(v);
    m["test_accuracy"] = test;
    json f1 = json::object();
    for (const auto& [k, v] : a.f1) f1[k] = stats_json(v.f1);
    m["f1"] = f1;
    json corr = json::object();
    for (const CorrRow& r : a.correlations) {
      if (r.seed != "mean") continue;
      const std::string key = r.macro ? "macro" : class_key(r.inflection_class);
      corr["rating"][key] = correlation_json(r.rating);
      corr["production"][key] = correlation_json(r.production);
      corr["status"][key] = r.status;
    }
    m["correlations"] = corr;
    if (!a.mean_normalized.empty()) {
      m["rating_vs_production"] = correlation_json(
          wugeval::spearman(a.mean_normalized, a.production_per_candidate));
    }
    m["reference"] = reference_for(config.language, a.arch);
    models[arch_key(a.arch)] = m;
  }

  const auto cells = grid_of(run, d);
  json grid_json = json::array();
  for (const auto& c : cells) grid_json.push_back(grid_cell_to_json(c));
  const auto avc = wugeval::accuracy_vs_correlation(cells);
  json by_model = json::object(), by_cell = json::object();
  for (const auto& [k, c] : avc.by_model) by_model[k] = correlation_json(c);
  for (const auto& [k, c] : avc.by_cell) by_cell[k] = correlation_json(c);

  json archs = json::array();
  for (Architecture a : config.architectures) archs.push_back(arch_key(a));

  json summary = {
      {"config", config.to_json()},
      {"config_source", without_output(config.source)},
      {"config_hash", config.hash()},
      {"language", corpus::to_string(config.language)},
      {"architectures", archs},
      {"seeds", config.seeds},
      {"scale",
       {{"train", corpus.split.train.size()},
        {"dev", corpus.split.dev.size()},
        {"test", corpus.split.test.size()},
        {"wug_candidates", corpus.wugs.candidates.size()},
        {"wug_lemmas", corpus.wugs.lemmas().size()},
        {"epochs", config.training.epochs}}},
      {"units", {{"accuracy", "percent"}, {"f1", "percent"}, {"rating", "exp(raw_logprob / (k + 1))"}}},
      {"models", models},
      {"grid", grid_json},
      {"accuracy_vs_correlation",
       {{"by_model", by_model}, {"by_cell", by_cell}, {"pooled", correlation_json(avc.pooled)}, {"gaps", avc.gaps}}},
      {"checks", checks(run, d)},
      {"incomplete", d.incomplete},
      {"complete", d.incomplete.empty()},
      {"warnings", d.warnings},
  };
  fs::create_directories(config.report_dir());
  std::ofstream out(config.report_dir() / "summary.json", std::ios::binary);
  out << summary.dump(2) << '\n';
  if (!out) throw IoError("cannot write summary.json");
  write_accuracy_correlation(cells, config.report_dir());
}

}  // namespace

std::string format_number(double value) {
  if (!std::isfinite(value)) return "NA";
  if (value == 0.0) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

void write_training_curves(const RunData& run) { curves(run); }
void write_accuracy(const RunData& run) { accuracy_file(run, derive(run)); }
void write_f1(const RunData& run) { f1_file(run, derive(run)); }
void write_ratings(const RunData& run) { ratings_file(run, derive(run)); }
void write_correlations(const RunData& run) { correlations_file(run, derive(run)); }
void write_productions(const RunData& run) { productions_files(run, derive(run)); }
void write_summary(const RunData& run) { summary_file(run, derive(run)); }

void write_all(const RunData& run) {
  const Derived d = derive(run);
  curves(run);
  accuracy_file(run, d);
  f1_file(run, d);
  ratings_file(run, d);
  correlations_file(run, d);
  productions_files(run, d);
  summary_file(run, d);
}

std::vector<wugeval::GridCell> grid(const RunData& run) { return grid_of(run, derive(run)); }

void write_accuracy_correlation(std::span<const wugeval::GridCell> cells, const fs::path& dir) {
  const auto avc = wugeval::accuracy_vs_correlation(cells);
  Csv csv(dir / "accuracy_correlation.csv", {"scope", "key", "n", "r", "p_value", "reference_r"});
  auto ref = [](std::string_view table, const std::string& key) {
    return wugeval::reference_value(table, "r", key).value_or(kUndefined);
  };
  for (const auto& [k, c] : avc.by_model) {
    csv.row().cell("model").cell(k).count(c.n).num(c.r).num(c.p_value).num(ref("acc_corr_by_model", k));
  }
  for (const auto& [k, c] : avc.by_cell) {
    csv.row().cell("class").cell(k).count(c.n).num(c.r).num(c.p_value).num(ref("acc_corr_by_class", k));
  }
  csv.row()
      .cell("pooled")
      .cell("all")
      .count(avc.pooled.n)
      .num(avc.pooled.r)
      .num(avc.pooled.p_value)
      .num(ref("acc_corr_pooled", "all"));
  for (const std::string& g : avc.gaps) {
    csv.row().cell("gap").cell(g).count(0).num(kUndefined).num(kUndefined).num(kUndefined);
  }
}

json grid_cell_to_json(const wugeval::GridCell& cell) {
  return {{"model", cell.model},
          {"cell", cell.cell},
          {"performance", cell.performance ? json(*cell.performance) : json(nullptr)},
          {"correlation", cell.correlation ? json(*cell.correlation) : json(nullptr)}};
}

wugeval::GridCell grid_cell_from_json(const json& j) {
  wugeval::GridCell cell;
  cell.model = j.at("model").get<std::string>();
  cell.cell = j.at("cell").get<std::string>();
  if (!j.at("performance").is_null()) cell.performance = j.at("performance").get<double>();
  if (!j.at("correlation").is_null()) cell.correlation = j.at("correlation").get<double>();
  return cell;
}

}  // namespace wugbench::report
