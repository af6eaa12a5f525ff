#include "wugbench/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <mutex>
#include <numeric>
#include <thread>

#include "wugbench/decode.hpp"
#include "wugbench/error.hpp"
#include "wugbench/nd/checkpoint.hpp"
#include "wugbench/nd/graph.hpp"
#include "wugbench/report.hpp"

namespace wugbench::runner {
namespace {

using corpus::InflectionExample;
using corpus::Language;
using nlohmann::json;

wugeval::DecodeMode parse_decode_mode(const std::string& text) {
  if (text == "greedy") return wugeval::DecodeMode::kGreedy;
  if (text == "beam") return wugeval::DecodeMode::kBeam;
  throw ConfigError("decode mode must be 'greedy' or 'beam', got '" + text + "'");
}

std::string_view to_string(wugeval::DecodeMode mode) {
  return mode == wugeval::DecodeMode::kGreedy ? "greedy" : "beam";
}

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  if (path.is_relative() && !base.empty()) path = base / path;
  return path.lexically_normal();
}

void reject_unknown(const json& object, std::initializer_list<std::string_view> known, const std::string& where) {
  for (const auto& [key, value] : object.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ConfigError("unknown key '" + key + "' in " + where);
    }
  }
}

json path_or_null(const std::optional<fs::path>& p) {
  if (!p) return nullptr;
  return p->string();
}

void log_line(const std::string& line) {
  static std::mutex mu;
  std::lock_guard lock(mu);
  std::cerr << line << '\n';
}

template <class F>
void parallel_for(std::size_t n, std::size_t threads, F&& f) {
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        f(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t extra = std::min(threads, n) > 0 ? std::min(threads, n) - 1 : 0;
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < extra; ++t) pool.emplace_back(worker);
    worker();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::vector<std::pair<std::vector<corpus::SymbolId>, std::vector<corpus::SymbolId>>> encode_all(
    const corpus::Alphabet& alphabet, std::span<const InflectionExample> examples) {
  std::vector<std::pair<std::vector<corpus::SymbolId>, std::vector<corpus::SymbolId>>> out;
  out.reserve(examples.size());
  for (const InflectionExample& ex : examples) {
    out.emplace_back(corpus::encode_source(alphabet, ex.lemma, ex.tags), corpus::encode_target(alphabet, ex.form));
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Configuration

ExperimentConfig ExperimentConfig::from_json(const json& doc, const fs::path& base_dir) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(doc,
                 {"language", "data", "wugs", "architectures", "seeds", "training", "beam_width", "dev_decode",
                  "test_decode", "production", "model", "architecture_model", "output"},
                 "config");
  ExperimentConfig c;
  c.source = doc;
  try {
    if (!doc.contains("language")) throw ConfigError("config needs 'language'");
    c.language = corpus::parse_language(doc.at("language").get<std::string>());

    if (!doc.contains("data")) throw ConfigError("config needs 'data'");
    const json& data = doc.at("data");
    reject_unknown(data, {"dataset", "train", "dev", "test", "ratios", "split_seed", "stratify", "max_examples"},
                   "data");
    for (const char* key : {"dataset", "train", "dev", "test"}) {
      if (!data.contains(key)) continue;
      const fs::path p = resolve(base_dir, data.at(key).get<std::string>());
      if (std::string_view(key) == "dataset") c.data.dataset = p;
      if (std::string_view(key) == "train") c.data.train = p;
      if (std::string_view(key) == "dev") c.data.dev = p;
      if (std::string_view(key) == "test") c.data.test = p;
    }
    if (data.contains("ratios")) {
      const auto r = data.at("ratios").get<std::vector<double>>();
      if (r.size() != 3) throw ConfigError("data.ratios needs three numbers");
      c.data.ratios = {r[0], r[1], r[2]};
    }
    if (data.contains("split_seed")) c.data.split_seed = data.at("split_seed").get<std::uint64_t>();
    if (data.contains("stratify")) c.data.stratify = data.at("stratify").get<bool>();
    if (data.contains("max_examples")) c.data.max_examples = data.at("max_examples").get<std::size_t>();

    if (!doc.contains("wugs")) throw ConfigError("config needs 'wugs'");
    c.wugs = resolve(base_dir, doc.at("wugs").get<std::string>());

    if (doc.contains("architectures")) {
      c.architectures.clear();
      for (const auto& a : doc.at("architectures")) c.architectures.push_back(seq2seq::parse_architecture(a.get<std::string>()));
    }
    if (doc.contains("seeds")) {
      const json& s = doc.at("seeds");
      c.seeds.clear();
      if (s.is_number_integer()) {
        for (std::uint64_t k = 1; k <= s.get<std::uint64_t>(); ++k) c.seeds.push_back(k);
      } else {
        c.seeds = s.get<std::vector<std::uint64_t>>();
      }
    }
    if (doc.contains("training")) {
      const json& t = doc.at("training");
      reject_unknown(t, {"epochs", "batch_size", "learning_rate", "beta1", "beta2", "epsilon", "clip_norm", "patience"},
                     "training");
      c.training.epochs = t.value("epochs", c.training.epochs);
      c.training.batch_size = t.value("batch_size", c.training.batch_size);
      c.training.adam.learning_rate = t.value("learning_rate", c.training.adam.learning_rate);
      c.training.adam.beta1 = t.value("beta1", c.training.adam.beta1);
      c.training.adam.beta2 = t.value("beta2", c.training.adam.beta2);
      c.training.adam.epsilon = t.value("epsilon", c.training.adam.epsilon);
      c.training.clip_norm = t.value("clip_norm", c.training.clip_norm);
      c.training.patience = t.value("patience", c.training.patience);
    }
    c.beam_width = doc.value("beam_width", c.beam_width);
    if (doc.contains("dev_decode")) c.dev_decode = parse_decode_mode(doc.at("dev_decode").get<std::string>());
    if (doc.contains("test_decode")) c.test_decode = parse_decode_mode(doc.at("test_decode").get<std::string>());
    if (doc.contains("production")) {
      const json& p = doc.at("production");
      reject_unknown(p, {"mode", "samples", "seed"}, "production");
      const std::string mode = p.value("mode", std::string("top"));
      if (mode == "top") c.production.mode = wugeval::ProductionMode::kTop;
      else if (mode == "sample") c.production.mode = wugeval::ProductionMode::kSample;
      else throw ConfigError("production.mode must be 'top' or 'sample'");
      c.production.samples = p.value("samples", c.production.samples);
      c.production.seed = p.value("seed", c.production.seed);
    }
    if (doc.contains("model")) c.model = doc.at("model");
    if (doc.contains("architecture_model")) {
      for (const auto& [key, value] : doc.at("architecture_model").items()) {
        c.architecture_model[seq2seq::parse_architecture(key)] = value;
      }
    }
    if (doc.contains("output")) c.output = resolve(base_dir, doc.at("output").get<std::string>());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::load(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return from_json(doc, path.parent_path());
}

json ExperimentConfig::to_json() const {
  json arch = json::array();
  for (Architecture a : architectures) arch.push_back(seq2seq::to_string(a));
  json per_arch = json::object();
  for (const auto& [a, overrides] : architecture_model) per_arch[std::string(seq2seq::to_string(a))] = overrides;
  return {
      {"language", corpus::to_string(language)},
      {"data",
       {{"dataset", path_or_null(data.dataset)},
        {"train", path_or_null(data.train)},
        {"dev", path_or_null(data.dev)},
        {"test", path_or_null(data.test)},
        {"ratios", {data.ratios.train, data.ratios.dev, data.ratios.test}},
        {"split_seed", data.split_seed},
        {"stratify", stratify()},
        {"max_examples", data.max_examples}}},
      {"wugs", wugs.string()},
      {"architectures", arch},
      {"seeds", seeds},
      {"training",
       {{"epochs", training.epochs},
        {"batch_size", training.batch_size},
        {"learning_rate", training.adam.learning_rate},
        {"beta1", training.adam.beta1},
        {"beta2", training.adam.beta2},
        {"epsilon", training.adam.epsilon},
        {"clip_norm", training.clip_norm},
        {"patience", training.patience}}},
      {"beam_width", beam_width},
      {"dev_decode", to_string(dev_decode)},
      {"test_decode", to_string(test_decode)},
      {"production",
       {{"mode", production.mode == wugeval::ProductionMode::kTop ? "top" : "sample"},
        {"samples", production.samples},
        {"seed", production.seed}}},
      {"model", model},
      {"architecture_model", per_arch},
  };
}

std::string ExperimentConfig::hash() const { return nd::config_hash(to_json()); }

void ExperimentConfig::validate() const {
  const bool single = data.dataset.has_value();
  const bool triple = data.train && data.dev && data.test;
  if (single == triple) throw ConfigError("data needs either 'dataset' or all of 'train', 'dev', 'test'");
  if (training.epochs == 0) throw ConfigError("training.epochs must be at least 1");
  if (training.batch_size == 0) throw ConfigError("training.batch_size must be at least 1");
  if (beam_width == 0) throw ConfigError("beam_width must be at least 1");
  if (architectures.empty()) throw ConfigError("no architectures selected");
  if (seeds.empty()) throw ConfigError("no seeds selected");
  std::vector<std::uint64_t> sorted = seeds;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) throw ConfigError("seeds must be distinct");
  std::vector<Architecture> archs = architectures;
  std::sort(archs.begin(), archs.end());
  if (std::adjacent_find(archs.begin(), archs.end()) != archs.end()) throw ConfigError("architectures must be distinct");
  if (production.mode == wugeval::ProductionMode::kSample && production.samples == 0) {
    throw ConfigError("production.samples must be positive in sampling mode");
  }
  for (const fs::path& p : {data.dataset.value_or(fs::path()), data.train.value_or(fs::path()),
                            data.dev.value_or(fs::path()), data.test.value_or(fs::path()), wugs}) {
    if (!p.empty() && !fs::exists(p)) throw ConfigError("file not found: " + p.string());
  }
  for (Architecture a : architectures) model_config(a, seeds.front()).validate();
}

seq2seq::ModelConfig ExperimentConfig::model_config(Architecture arch, std::uint64_t seed) const {
  seq2seq::ModelConfig mc;
  mc.arch = arch;
  mc = mc.with_overrides(model);
  if (auto it = architecture_model.find(arch); it != architecture_model.end()) mc = mc.with_overrides(it->second);
  mc.arch = arch;
  mc.seed = seed;
  return mc;
}

fs::path ExperimentConfig::checkpoint_path(Architecture arch, std::uint64_t seed) const {
  return output / "checkpoints" / (std::string(seq2seq::to_string(arch)) + "-seed" + std::to_string(seed) + ".ckpt");
}

// ---------------------------------------------------------------------------
// Data

Corpus load_corpus(const ExperimentConfig& config) {
  Corpus c;
  if (config.data.dataset) {
    corpus::Dataset d = corpus::read_dataset(*config.data.dataset, config.language, &c.alphabet);
    std::vector<InflectionExample> examples = std::move(d.examples);
    if (config.data.max_examples && config.data.max_examples < examples.size()) {
      // Deterministic subset that keeps file order.
      std::vector<std::size_t> idx(examples.size());
      std::iota(idx.begin(), idx.end(), std::size_t{0});
      nd::Rng rng = nd::Rng(config.data.split_seed).fork(0x737562);
      for (std::size_t i = 0; i < config.data.max_examples; ++i) {
        std::swap(idx[i], idx[i + rng.below(idx.size() - i)]);
      }
      idx.resize(config.data.max_examples);
      std::sort(idx.begin(), idx.end());
      std::vector<InflectionExample> subset;
      for (std::size_t i : idx) subset.push_back(std::move(examples[i]));
      examples = std::move(subset);
    }
    c.split = corpus::split_dataset(examples, config.data.ratios, config.data.split_seed, config.stratify());
  } else {
    c.split.train = corpus::read_dataset(*config.data.train, config.language, &c.alphabet).examples;
    c.split.dev = corpus::read_dataset(*config.data.dev, config.language, &c.alphabet).examples;
    c.split.test = corpus::read_dataset(*config.data.test, config.language, &c.alphabet).examples;
  }
  if (c.split.train.empty()) throw ValidationError("training split is empty");
  if (c.split.dev.empty()) throw ValidationError("dev split is empty");

  c.wugs = corpus::read_wug_file(config.wugs);
  if (c.wugs.language != config.language) {
    throw ConfigError("wug file language " + std::string(corpus::to_string(c.wugs.language)) +
                      " does not match config language " + std::string(corpus::to_string(config.language)));
  }
  for (const std::string& tag : corpus::wug_tags(config.language)) c.alphabet.add_tag(tag);
  for (const corpus::WugCandidate& w : c.wugs.candidates) {
    for (const std::string& s : corpus::split_symbols(w.lemma)) c.alphabet.add_character(s);
    for (const std::string& s : corpus::split_symbols(w.form)) c.alphabet.add_character(s);
  }
  return c;
}

// ---------------------------------------------------------------------------
// Training

json SeedRecord::to_json() const {
  json curve_json = json::array();
  for (const EpochRecord& e : curve) {
    curve_json.push_back({{"epoch", e.epoch}, {"train_loss", e.train_loss}, {"dev_accuracy", e.dev_accuracy}});
  }
  return {{"arch", seq2seq::to_string(arch)}, {"seed", seed},       {"curve", curve_json},
          {"selected_epoch", selected_epoch}, {"seconds", seconds}, {"error", error}};
}

SeedRecord SeedRecord::from_json(const json& j) {
  SeedRecord r;
  r.arch = seq2seq::parse_architecture(j.at("arch").get<std::string>());
  r.seed = j.at("seed").get<std::uint64_t>();
  for (const json& e : j.at("curve")) {
    r.curve.push_back({e.at("epoch").get<std::size_t>(), e.at("train_loss").get<double>(),
                       e.at("dev_accuracy").get<double>()});
  }
  r.selected_epoch = j.at("selected_epoch").get<std::size_t>();
  r.seconds = j.value("seconds", 0.0);
  r.error = j.value("error", std::string());
  return r;
}

SeedRecord train(seq2seq::Model& model, std::span<const InflectionExample> train_set,
                 std::span<const InflectionExample> dev_set, const TrainingOptions& options, std::uint64_t seed,
                 const ProgressFn& progress) {
  if (train_set.empty()) throw ContractError("train: empty training set");
  if (dev_set.empty()) throw ContractError("train: empty dev set");
  const auto start = std::chrono::steady_clock::now();
  const auto encoded = encode_all(model.alphabet(), train_set);

  SeedRecord record;
  record.arch = model.config().arch;
  record.seed = seed;

  std::vector<nd::Parameter*> params = model.parameters();
  nd::Adam adam(params, options.adam);
  nd::Rng order_rng = nd::Rng(seed).fork(1);
  nd::Rng dropout_rng = nd::Rng(seed).fork(2);
  std::vector<std::size_t> order(encoded.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  std::vector<nd::Array> best;
  double best_accuracy = -1.0;
  std::size_t since_best = 0;

  for (std::size_t epoch = 1; epoch <= options.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[order_rng.below(i)]);
    double total = 0.0;
    for (std::size_t begin = 0; begin < order.size(); begin += options.batch_size) {
      const std::size_t end = std::min(order.size(), begin + options.batch_size);
      adam.zero_grad();
      for (std::size_t k = begin; k < end; ++k) {
        const auto& [source, target] = encoded[order[k]];
        nd::Graph g;
        g.set_training(true, &dropout_rng);
        const nd::Var loss = model.loss(g, source, target);
        const double value = loss.value().item();
        if (!std::isfinite(value)) {
          const InflectionExample& ex = train_set[order[k]];
          throw DivergenceError(model.identity() + ": non-finite loss at epoch " + std::to_string(epoch) +
                                " on (" + ex.lemma + ", " + ex.form + ")");
        }
        total += value;
        g.backward(loss);
      }
      const double scale = 1.0 / static_cast<double>(end - begin);
      for (nd::Parameter* p : params) {
        for (double& v : p->grad().values()) v *= scale;
      }
      if (options.clip_norm > 0.0) {
        const double norm = nd::clip_grad_norm(params, options.clip_norm);
        if (!std::isfinite(norm)) {
          throw DivergenceError(model.identity() + ": non-finite gradient norm at epoch " + std::to_string(epoch));
        }
      }
      adam.step();
    }

    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = total / static_cast<double>(order.size());
    const auto predictions = wugeval::predict(model, dev_set, wugeval::DecodeMode::kGreedy);
    rec.dev_accuracy = wugeval::overall_accuracy(dev_set, predictions);
    record.curve.push_back(rec);
    if (progress) progress(rec);

    if (rec.dev_accuracy > best_accuracy) {
      best_accuracy = rec.dev_accuracy;
      record.selected_epoch = epoch;
      best.clear();
      for (const nd::Parameter* p : params) best.push_back(p->value());
      since_best = 0;
    } else if (options.patience && ++since_best >= options.patience) {
      break;
    }
  }
  for (std::size_t i = 0; i < params.size(); ++i) params[i]->value() = std::move(best[i]);
  adam.zero_grad();
  model.set_trained_epochs(record.selected_epoch);
  record.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return record;
}

std::size_t thread_count() {
  if (const char* env = std::getenv("WUGBENCH_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return static_cast<std::size_t>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// ---------------------------------------------------------------------------
// Stages

namespace {

struct Slot {
  Architecture arch;
  std::uint64_t seed;
  std::unique_ptr<seq2seq::Model> model;
  SeedRecord record;
};

std::string training_key(const ExperimentConfig& config, const Corpus& corpus, Architecture arch,
                         std::uint64_t seed) {
  corpus::Dataset train{config.language, corpus.split.train};
  corpus::Dataset dev{config.language, corpus.split.dev};
  const json full = config.to_json();
  return nd::config_hash({{"model", config.model_config(arch, seed).to_json()},
                          {"training", full.at("training")},
                          {"alphabet", corpus.alphabet.to_json()},
                          {"train", nd::config_hash(serialize_dataset(train))},
                          {"dev", nd::config_hash(serialize_dataset(dev))}});
}

// Loads a checkpoint trained under the same settings, or trains and saves one.
std::vector<Slot> obtain_models(const ExperimentConfig& config, const Corpus& corpus) {
  std::vector<Slot> slots;
  for (Architecture a : config.architectures) {
    for (std::uint64_t s : config.seeds) slots.push_back({a, s, nullptr, {}});
  }
  parallel_for(slots.size(), thread_count(), [&](std::size_t i) {
    Slot& slot = slots[i];
    const std::string key = training_key(config, corpus, slot.arch, slot.seed);
    const fs::path path = config.checkpoint_path(slot.arch, slot.seed);
    if (fs::exists(path)) {
      try {
        nd::Checkpoint ckpt = nd::load_checkpoint(path);
        if (ckpt.config.value("training_key", std::string()) == key) {
          slot.model = seq2seq::model_from_checkpoint(ckpt);
          slot.record = SeedRecord::from_json(ckpt.config.at("record"));
          log_line("reuse " + slot.model->identity() + " from " + path.string());
          return;
        }
      } catch (const Error& e) {
        log_line("ignoring checkpoint " + path.string() + ": " + e.what());
      }
    }
    slot.model = seq2seq::build_model(config.model_config(slot.arch, slot.seed), corpus.alphabet);
    const std::string id = slot.model->identity();
    try {
      slot.record = train(*slot.model, corpus.split.train, corpus.split.dev, config.training, slot.seed,
                          [&](const EpochRecord& e) {
                            char buf[160];
                            std::snprintf(buf, sizeof buf, "train %s epoch=%zu loss=%.4f dev_acc=%.4f", id.c_str(),
                                          e.epoch, e.train_loss, e.dev_accuracy);
                            log_line(buf);
                          });
    } catch (const DivergenceError& e) {
      slot.record.arch = slot.arch;
      slot.record.seed = slot.seed;
      slot.record.error = e.what();
      slot.model.reset();
      log_line(std::string("error kind=diverged model=") + id + " message=\"" + e.what() + "\"");
      return;
    }
    nd::Checkpoint ckpt = slot.model->to_checkpoint();
    ckpt.config["training_key"] = key;
    ckpt.config["record"] = slot.record.to_json();
    nd::save_checkpoint(path, ckpt);
  });
  return slots;
}

struct Evaluation {
  std::vector<std::string> test_predictions;
  std::vector<std::vector<std::string>> wug_outputs;  // [lemma][draw]
  std::vector<double> normalized;                     // per wug candidate
  std::vector<double> raw;
};

std::vector<Evaluation> evaluate(const ExperimentConfig& config, const Corpus& corpus, const std::vector<Slot>& slots,
                                 bool accuracy, bool wugs) {
  std::vector<Evaluation> out(slots.size());
  parallel_for(slots.size(), thread_count(), [&](std::size_t i) {
    const Slot& slot = slots[i];
    if (!slot.model) return;
    Evaluation& ev = out[i];
    if (accuracy) {
      ev.test_predictions = wugeval::predict(*slot.model, corpus.split.test, config.test_decode, config.beam_width);
    }
    if (wugs) {
      wugeval::ProductionOptions opts = config.production;
      opts.beam_width = config.beam_width;
      ev.wug_outputs = wugeval::wug_outputs(*slot.model, corpus.wugs, opts, slot.seed);
      const decode::StepModel* models[] = {slot.model.get()};
      for (const wugeval::Rating& r : wugeval::model_rating(models, corpus.wugs)) {
        ev.normalized.push_back(r.per_seed_normalized.front());
        ev.raw.push_back(r.per_seed_raw.front());
      }
    }
  });
  return out;
}

report::RunData assemble(const ExperimentConfig& config, const Corpus& corpus, std::vector<Slot>& slots,
                         std::vector<Evaluation>& evals) {
  report::RunData run;
  run.config = &config;
  run.corpus = &corpus;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    report::SeedData s;
    s.arch = slots[i].arch;
    s.seed = slots[i].seed;
    s.record = slots[i].record;
    s.parameters = slots[i].model ? slots[i].model->parameter_count()
                                  : seq2seq::build_model(config.model_config(s.arch, s.seed), corpus.alphabet)
                                        ->parameter_count();
    s.ok = slots[i].model != nullptr;
    if (i < evals.size()) {
      s.test_predictions = std::move(evals[i].test_predictions);
      s.wug_outputs = std::move(evals[i].wug_outputs);
      s.normalized = std::move(evals[i].normalized);
      s.raw = std::move(evals[i].raw);
    }
    run.seeds.push_back(std::move(s));
  }
  return run;
}

void write_timing(const ExperimentConfig& config, const std::vector<Slot>& slots) {
  json timing = json::object();
  for (const Slot& s : slots) {
    timing[std::string(seq2seq::to_string(s.arch)) + "-seed" + std::to_string(s.seed)] = s.record.seconds;
  }
  fs::create_directories(config.output);
  std::ofstream(config.output / "timing.json") << timing.dump(2) << '\n';
}

}  // namespace

void run_split(const ExperimentConfig& config) {
  const Corpus corpus = load_corpus(config);
  const fs::path dir = config.output / "data";
  corpus::write_dataset(dir / "train.tsv", {config.language, corpus.split.train});
  corpus::write_dataset(dir / "dev.tsv", {config.language, corpus.split.dev});
  corpus::write_dataset(dir / "test.tsv", {config.language, corpus.split.test});
}

void run_train(const ExperimentConfig& config) {
  const Corpus corpus = load_corpus(config);
  std::vector<Slot> slots = obtain_models(config, corpus);
  std::vector<Evaluation> none;
  const report::RunData run = assemble(config, corpus, slots, none);
  report::write_training_curves(run);
  write_timing(config, slots);
}

void run_eval(const ExperimentConfig& config) {
  const Corpus corpus = load_corpus(config);
  std::vector<Slot> slots = obtain_models(config, corpus);
  std::vector<Evaluation> evals = evaluate(config, corpus, slots, true, false);
  const report::RunData run = assemble(config, corpus, slots, evals);
  report::write_training_curves(run);
  report::write_accuracy(run);
  report::write_f1(run);
}

void run_wug(const ExperimentConfig& config) {
  const Corpus corpus = load_corpus(config);
  std::vector<Slot> slots = obtain_models(config, corpus);
  std::vector<Evaluation> evals = evaluate(config, corpus, slots, false, true);
  const report::RunData run = assemble(config, corpus, slots, evals);
  report::write_training_curves(run);
  report::write_ratings(run);
  report::write_correlations(run);
  report::write_productions(run);
}

void run_experiment(const ExperimentConfig& config) {
  const Corpus corpus = load_corpus(config);
  std::vector<Slot> slots = obtain_models(config, corpus);
  std::vector<Evaluation> evals = evaluate(config, corpus, slots, true, true);
  const report::RunData run = assemble(config, corpus, slots, evals);
  report::write_all(run);
  write_timing(config, slots);
}

void run_report(std::span<const ExperimentConfig> configs, const std::optional<fs::path>& combined_out) {
  std::vector<wugeval::GridCell> pooled;
  for (const ExperimentConfig& config : configs) {
    run_experiment(config);
    std::ifstream in(config.report_dir() / "summary.json");
    const json summary = json::parse(in);
    for (const json& cell : summary.at("grid")) pooled.push_back(report::grid_cell_from_json(cell));
  }
  if (combined_out && configs.size() > 1) report::write_accuracy_correlation(pooled, *combined_out);
}

}  // namespace wugbench::runner
