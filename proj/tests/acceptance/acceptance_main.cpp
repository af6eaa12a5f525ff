// Acceptance checks. Prints one line per criterion:
//   c<N> PASS|FAIL|SKIP|FLAG <detail>
// With --only N the exit code is 0 (pass or flag), 1 (fail) or 77 (skip).

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "support/op_cases.hpp"
#include "support/toy.hpp"
#include "wugbench/decode.hpp"
#include "wugbench/nd/grad_check.hpp"
#include "wugbench/runner.hpp"
#include "wugbench/wugeval.hpp"

namespace {

using namespace wugbench;
using nlohmann::json;
namespace fs = std::filesystem;
using corpus::SymbolId;
using seq2seq::Architecture;
using Clock = std::chrono::steady_clock;

enum class Verdict { kPass, kFail, kSkip, kFlag };

struct Outcome {
  Verdict verdict;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(3);
  s << v;
  return s.str();
}

// ---------------------------------------------------------------------------
// c1: gradients

seq2seq::ModelConfig grad_config(Architecture arch, std::uint64_t seed) {
  seq2seq::ModelConfig c;
  c.arch = arch;
  c.seed = seed;
  c.embedding_dim = 4;
  c.hidden_dim = 3;
  c.attention_dim = 3;
  c.lstm_layers = 2;
  c.model_dim = 4;
  c.ffn_dim = 6;
  c.num_layers = 1;
  c.num_heads = 2;
  c.dropout = 0.0;
  c.init_range = 0.5;
  return c;
}

Outcome criterion1() {
  const auto start = Clock::now();
  double worst_op = 0.0;
  std::string worst_op_name;
  const auto cases = toy::op_cases();
  for (const auto& c : cases) {
    const double e = toy::check_op(c, 10, 31);
    if (e > worst_op) worst_op = e, worst_op_name = c.name;
  }
  double worst_model = 0.0;
  std::string worst_model_name;
  const auto alphabet = toy::letters(4);
  const char* lemmas[] = {"abc", "dca", "bbad", "cd", "adcb"};
  const char* forms[] = {"cab", "adc", "dab", "cdd", "b"};
  for (Architecture arch : seq2seq::kAllArchitectures) {
    for (std::uint64_t trial = 0; trial < 10; ++trial) {
      auto m = seq2seq::build_model(grad_config(arch, trial + 1), alphabet);
      const auto source = corpus::encode_source(alphabet, lemmas[trial % 5], std::vector<std::string>{"PST"});
      const auto target = corpus::encode_target(alphabet, forms[(trial + 2) % 5]);
      auto params = m->parameters();
      const auto value = [&] {
        nd::Graph g(false);
        return m->loss(g, source, target).value().item();
      };
      const auto backward = [&] {
        nd::Graph g(true);
        g.backward(m->loss(g, source, target));
      };
      for (auto* p : params) p->zero_grad();
      const double e = nd::grad_check_directional(value, backward, params, 1e-5, 100 + trial);
      if (e > worst_model) worst_model = e, worst_model_name = std::string(seq2seq::to_string(arch));
    }
  }
  const double secs = seconds_since(start);
  const bool ok = worst_op < 1e-4 && worst_model < 1e-4 && secs < 60.0;
  return {ok ? Verdict::kPass : Verdict::kFail,
          std::to_string(cases.size()) + " ops x 10 trials worst=" + fmt(worst_op) + " (" + worst_op_name +
              "); 5 losses x 10 trials worst=" + fmt(worst_model) + " (" + worst_model_name + "); " + fmt(secs) +
              "s"};
}

// ---------------------------------------------------------------------------
// c2: beam search and correlation oracles

using Sequence = std::vector<SymbolId>;

// Scores of every finished sequence, from exhaustive enumeration.
std::map<Sequence, double> exhaustive_scores(const seq2seq::StepModel& model, std::span<const SymbolId> source,
                                             std::size_t max_len) {
  std::map<Sequence, double> out;
  for (const auto& s : toy::enumerate_finished(model, source, max_len)) out[s.symbols] = s.logprob;
  return out;
}

// Beam search over the exhaustively scored tree: each step ranks prefixes
// using the enumerated prefix scores rather than incremental state.
std::vector<toy::Scored> beam_from_table(const std::map<Sequence, double>& finished,
                                         const std::map<Sequence, double>& prefixes,
                                         const std::vector<SymbolId>& outputs, std::size_t width,
                                         std::size_t max_len) {
  auto order = [](const toy::Scored& a, const toy::Scored& b) {
    if (a.logprob != b.logprob) return a.logprob > b.logprob;
    return a.symbols < b.symbols;
  };
  std::vector<toy::Scored> live{{{}, 0.0}}, done, last_live;
  for (std::size_t t = 0; t < max_len && !live.empty(); ++t) {
    std::vector<toy::Scored> cands;
    for (const auto& h : live) {
      cands.push_back({h.symbols, finished.at(h.symbols)});
      cands.back().symbols.push_back(corpus::Alphabet::kEos);
      for (std::size_t i = 1; i < outputs.size(); ++i) {
        Sequence s = h.symbols;
        s.push_back(outputs[i]);
        auto it = prefixes.find(s);
        if (it != prefixes.end()) cands.push_back({s, it->second});
      }
    }
    std::sort(cands.begin(), cands.end(), order);
    if (cands.size() > width) cands.resize(width);
    live.clear();
    for (auto& c : cands) {
      if (c.symbols.back() == corpus::Alphabet::kEos) {
        c.symbols.pop_back();
        done.push_back(c);
      } else {
        live.push_back(c);
      }
    }
    last_live = live;
  }
  // Nothing finished: the best live prefixes, unfinished.
  if (done.empty()) done = last_live;
  std::sort(done.begin(), done.end(), order);
  if (done.size() > width) done.resize(width);
  return done;
}

// Log-probabilities of every character prefix of up to max_len symbols.
std::map<Sequence, double> prefix_scores(const seq2seq::StepModel& model, std::span<const SymbolId> source,
                                         std::size_t max_len) {
  std::map<Sequence, double> out;
  struct Frame {
    seq2seq::DecoderState state;
    SymbolId prev;
    Sequence symbols;
    double logprob;
  };
  std::vector<Frame> stack{{model.start(source), corpus::Alphabet::kBos, {}, 0.0}};
  const auto& outputs = model.alphabet().output_symbols();
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    const auto step = model.step(f.state, f.prev);
    for (std::size_t i = 1; i < outputs.size(); ++i) {
      Sequence s = f.symbols;
      s.push_back(outputs[i]);
      out[s] = f.logprob + step.log_probs[i];
      if (s.size() < max_len) stack.push_back({step.state, outputs[i], s, out[s]});
    }
  }
  return out;
}

std::vector<double> brute_ranks(const std::vector<double>& v) {
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    double less = 0, equal = 0;
    for (double w : v) less += w < v[i], equal += w == v[i];
    r[i] = less + (equal + 1) / 2;
  }
  return r;
}

double brute_pearson(const std::vector<double>& x, const std::vector<double>& y) {
  long double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
  mx /= x.size();
  my /= y.size();
  long double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0 || syy == 0) return std::nan("");
  return static_cast<double>(sxy / std::sqrt(sxx * syy));
}

Outcome criterion2() {
  std::size_t beam_cases = 0, beam_bad = 0, greedy_bad = 0;
  double worst_score = 0.0;
  std::vector<std::unique_ptr<seq2seq::StepModel>> models;
  std::vector<std::size_t> lens;
  for (std::size_t a = 1; a <= 3; ++a) {  // plus EOS: at most 4 outputs
    for (std::size_t max_len = 1; max_len <= 5; ++max_len) {
      for (std::uint64_t seed = 0; seed < 4; ++seed) {
        models.push_back(std::make_unique<toy::ToyModel>(toy::letters(a), seed * 7 + a, max_len));
        lens.push_back(max_len);
      }
    }
  }
  for (Architecture arch : seq2seq::kAllArchitectures) {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      auto c = toy::tiny_config(arch, seed);
      c.init_range = 1.0;
      models.push_back(seq2seq::build_model(c, toy::letters(3)));
      lens.push_back(3 + seed);
    }
  }
  for (std::size_t mi = 0; mi < models.size(); ++mi) {
    const auto& model = *models[mi];
    const std::size_t max_len = lens[mi];
    const std::size_t a = model.alphabet().output_symbols().size() - 1;
    const auto source = corpus::encode_source(model.alphabet(), std::string(1 + mi % 3, 'a'),
                                              std::vector<std::string>{"PST"});
    const auto finished = exhaustive_scores(model, source, max_len);
    const auto prefixes = prefix_scores(model, source, max_len);
    std::size_t total = 1;
    for (std::size_t i = 0; i < max_len; ++i) total *= a + 1;
    for (std::size_t width : {std::size_t{1}, std::size_t{2}, std::size_t{3}, std::size_t{4}, total}) {
      ++beam_cases;
      const auto got = decode::beam_decode(model, source, width, max_len);
      const auto want = beam_from_table(finished, prefixes, model.alphabet().output_symbols(), width, max_len);
      bool same = got.size() == want.size();
      for (std::size_t i = 0; same && i < got.size(); ++i) {
        same = got[i].symbols == want[i].symbols;
        worst_score = std::max(worst_score, std::abs(got[i].logprob - want[i].logprob));
        // Every finished score equals the exhaustive score of that sequence.
        if (got[i].finished) {
          worst_score = std::max(worst_score, std::abs(got[i].logprob - finished.at(got[i].symbols)));
        } else {
          same = same && got[i].symbols.size() == max_len;
        }
      }
      if (width == total) {
        // Wide enough to be exhaustive: the top `width` of all sequences.
        const auto all = toy::enumerate_finished(model, source, max_len);
        same = same && got.size() == std::min(width, all.size());
        for (std::size_t i = 0; same && i < got.size(); ++i) same = got[i].symbols == all[i].symbols;
      }
      beam_bad += !same;
    }
    const auto g = decode::greedy_decode(model, source, max_len);
    const auto b1 = decode::beam_decode(model, source, 1, max_len);
    greedy_bad += b1.size() != 1 || b1[0].symbols != g.symbols || b1[0].logprob != g.logprob ||
                  b1[0].finished != g.finished;
  }

  nd::Rng rng(2024);
  double worst_rank = 0.0, worst_s = 0.0, worst_p = 0.0;
  std::size_t undefined_mismatch = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 3 + rng.below(60);
    std::vector<double> x(n), y(n);
    const bool ties = t % 2 == 0;
    for (auto& v : x) v = ties ? static_cast<double>(rng.below(5)) : rng.normal();
    for (auto& v : y) v = t % 3 == 0 ? static_cast<double>(rng.below(4)) : rng.uniform(-3, 3);
    const auto rx = wugeval::average_ranks(x);
    const auto bx = brute_ranks(x);
    for (std::size_t i = 0; i < n; ++i) worst_rank = std::max(worst_rank, std::abs(rx[i] - bx[i]));
    const double wp = brute_pearson(x, y);
    const double ws = brute_pearson(bx, brute_ranks(y));
    const auto p = wugeval::pearson(x, y);
    const auto s = wugeval::spearman(x, y);
    if (std::isnan(wp) != !p.defined() || std::isnan(ws) != !s.defined()) ++undefined_mismatch;
    if (!std::isnan(wp) && p.defined()) worst_p = std::max(worst_p, std::abs(p.r - wp));
    if (!std::isnan(ws) && s.defined()) worst_s = std::max(worst_s, std::abs(s.r - ws));
  }
  const bool ok = beam_bad == 0 && greedy_bad == 0 && worst_score < 1e-12 && worst_rank == 0.0 &&
                  worst_p < 1e-12 && worst_s < 1e-12 && undefined_mismatch == 0;
  return {ok ? Verdict::kPass : Verdict::kFail,
          "beam " + std::to_string(beam_cases - beam_bad) + "/" + std::to_string(beam_cases) +
              " match (score err " + fmt(worst_score) + "); beam(1)!=greedy " + std::to_string(greedy_bad) +
              "; 1000 vectors: spearman err " + fmt(worst_s) + ", pearson err " + fmt(worst_p) +
              ", definedness mismatches " + std::to_string(undefined_mismatch)};
}

// ---------------------------------------------------------------------------
// c3: force_score consistency

fs::path g_root;

Outcome criterion3() {
  runner::ExperimentConfig config = runner::ExperimentConfig::load(g_root / "configs" / "smoke_en.json");
  config.data.max_examples = 80;
  const auto data = runner::load_corpus(config);
  std::size_t scored = 0;
  double worst_chain = 0.0, worst_norm = 0.0, worst_loss = 0.0;
  for (Architecture arch : seq2seq::kAllArchitectures) {
    auto c = toy::tiny_config(arch, 5);
    c.embedding_dim = 16;
    c.hidden_dim = 16;
    c.attention_dim = 16;
    c.model_dim = 16;
    c.ffn_dim = 32;
    for (int trained = 0; trained < 2; ++trained) {
      auto model = seq2seq::build_model(c, data.alphabet);
      if (trained) {
        runner::TrainingOptions opts;
        opts.epochs = 2;
        opts.batch_size = 4;
        opts.adam.learning_rate = 0.01;
        runner::train(*model, data.split.train, data.split.dev, opts, 5);
      }
      for (std::size_t i = 0; i < data.wugs.candidates.size(); i += 3) {
        const auto& cand = data.wugs.candidates[i];
        const auto tags = corpus::wug_tags(data.wugs.language);
        const auto source = corpus::encode_source(data.alphabet, cand.lemma, tags);
        const auto target = corpus::encode_target(data.alphabet, cand.form);
        const auto s = decode::force_score(*model, source, cand.form);
        // Chain the steps by hand.
        double chained = 0.0;
        auto state = model->start(source);
        SymbolId prev = corpus::Alphabet::kBos;
        for (SymbolId id : target) {
          auto out = model->step(state, prev);
          chained += out.log_probs[data.alphabet.output_index(id)];
          state = std::move(out.state);
          prev = id;
        }
        chained += model->step(state, prev).log_probs[0];
        // Independent path: the teacher-forced training graph.
        nd::Graph g(false);
        const double loss = model->loss(g, source, target).value().item();
        const double k = static_cast<double>(target.size());
        worst_chain = std::max(worst_chain, std::abs(s.raw_logprob - chained));
        worst_loss = std::max(worst_loss, std::abs(s.raw_logprob + loss));
        worst_norm = std::max(worst_norm, std::abs(s.normalized_prob - std::exp(s.raw_logprob / (k + 1))));
        ++scored;
      }
    }
  }
  const bool ok = worst_chain < 1e-9 && worst_loss < 1e-9 && worst_norm < 1e-12;
  return {ok ? Verdict::kPass : Verdict::kFail,
          std::to_string(scored) + " candidates over 5 architectures, untrained and trained: |raw - chained| " +
              fmt(worst_chain) + ", |raw + loss| " + fmt(worst_loss) + ", |normalized - exp(raw/(k+1))| " +
              fmt(worst_norm)};
}

// ---------------------------------------------------------------------------
// c4: parameter counts

Outcome criterion4() {
  corpus::Alphabet alphabet;
  alphabet.add_tag("PST");
  alphabet.add_tag("PL");
  for (int i = 0; i < 35; ++i) alphabet.add_character("c" + std::to_string(i));
  const double expected[] = {0.93e6, 0.90e6, 0.56e6, 0.54e6, 7.41e6};
  std::vector<double> counts;
  bool within = true;
  std::string detail = "V=" + std::to_string(alphabet.size()) + ":";
  for (std::size_t i = 0; i < 5; ++i) {
    seq2seq::ModelConfig c;
    c.arch = seq2seq::kAllArchitectures[i];
    const double n = static_cast<double>(seq2seq::build_model(c, alphabet)->parameter_count());
    counts.push_back(n);
    const double dev = (n - expected[i]) / expected[i];
    within = within && std::abs(dev) < 0.15;
    detail += " " + std::string(seq2seq::display_name(c.arch)) + "=" + std::to_string(static_cast<long>(n)) + " (" +
              (dev >= 0 ? "+" : "") + fmt(100 * dev) + "%)";
  }
  // Published order: Transformer > BiLSTMAttn > BiLSTMNoAttn > UniLSTMAttn > UniLSTMNoAttn.
  const bool ordered = counts[4] > counts[0] && counts[0] > counts[1] && counts[1] > counts[2] && counts[2] > counts[3];
  return {within && ordered ? Verdict::kPass : Verdict::kFail, detail + (ordered ? "; order kept" : "; order broken")};
}

// ---------------------------------------------------------------------------
// c5-c7: full-scale results, read from the reports of configs/en.json and de.json

std::optional<json> full_summary(const std::string& language, std::string& why) {
  const fs::path config_path = g_root / "configs" / (language + ".json");
  runner::ExperimentConfig config;
  try {
    config = runner::ExperimentConfig::load(config_path);
    config.validate();
  } catch (const std::exception& e) {
    why = "full-scale data unavailable (" + std::string(e.what()) + ")";
    return std::nullopt;
  }
  const fs::path summary = config.report_dir() / "summary.json";
  if (!fs::exists(summary)) {
    why = "no report at " + summary.string() + "; run `wugbench report --config " + config_path.string() + "`";
    return std::nullopt;
  }
  std::ifstream in(summary);
  json j = json::parse(in);
  if (j.value("config_hash", "") != config.hash()) {
    why = "report at " + summary.string() + " was produced by a different config";
    return std::nullopt;
  }
  return j;
}

Outcome read_checks(const std::string& language, const std::vector<std::string>& names, bool flag_only) {
  std::string why;
  const auto summary = full_summary(language, why);
  if (!summary) return {Verdict::kSkip, why};
  bool ok = true;
  std::string detail;
  for (const std::string& name : names) {
    const json* found = nullptr;
    for (const json& c : (*summary)["checks"]) {
      if (c["name"] == name) found = &c;
    }
    std::string status = found ? (*found)["status"].get<std::string>() : "missing";
    const bool pass = status == "pass";
    ok = ok && pass;
    detail += (detail.empty() ? "" : "; ") + name + "=";
    detail += found && !(*found)["value"].is_null() ? fmt((*found)["value"].get<double>()) : "NA";
    detail += found ? " " + (*found)["relation"].get<std::string>() + " " + fmt((*found)["threshold"].get<double>())
                    : "";
    detail += pass ? " ok" : " NOT MET";
  }
  if (ok) return {Verdict::kPass, detail};
  return {flag_only ? Verdict::kFlag : Verdict::kFail, detail};
}

Outcome criterion5() {
  return read_checks("en",
                     {"transformer_test_regular", "bilstm_attn_test_regular", "bilstm_attention_gap_regular",
                      "unilstm_attention_gap_regular"},
                     false);
}

Outcome criterion6() {
  return read_checks("de",
                     {"bilstm_attn_f1_en", "bilstm_attn_f1_zero", "unilstm_attn_f1_en", "unilstm_attn_f1_zero",
                      "transformer_f1_en", "transformer_f1_zero", "bilstm_attn_minus_noattn_f1_e",
                      "unilstm_attn_minus_noattn_f1_e"},
                     false);
}

Outcome criterion7() {
  return read_checks("de", {"transformer_rating_rho_s", "transformer_minus_unilstm_noattn_rating_rho_s"}, true);
}

// ---------------------------------------------------------------------------
// c8: smoke run, twice per language

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  char ch;
  while (in.get(ch)) {
    if (quoted) {
      if (ch == '"') {
        if (in.peek() == '"') {
          field += '"';
          in.get();
        } else {
          quoted = false;
        }
      } else {
        field += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      row.push_back(std::move(field));
      field.clear();
    } else if (ch == '\n') {
      row.push_back(std::move(field));
      field.clear();
      rows.push_back(std::move(row));
      row.clear();
    } else if (ch != '\r') {
      field += ch;
    }
  }
  if (!field.empty() || !row.empty()) row.push_back(field), rows.push_back(row);
  return rows;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

bool is_number(const std::string& s) {
  if (s.empty() || s == "NA") return false;
  char* end = nullptr;
  std::strtod(s.c_str(), &end);
  return end && *end == '\0';
}

const std::vector<std::string> kReportFiles{"summary.json", "accuracy.csv",    "f1.csv",
                                            "ratings.csv",  "correlations.csv", "productions.csv",
                                            "training_curves.csv"};

// Problems with one smoke report; empty when it is complete.
std::vector<std::string> completeness(const fs::path& report, const runner::ExperimentConfig& config,
                                      std::size_t candidates) {
  std::vector<std::string> problems;
  for (const auto& f : kReportFiles) {
    if (!fs::exists(report / f)) problems.push_back("missing " + f);
  }
  if (!problems.empty()) return problems;
  const json summary = json::parse(slurp(report / "summary.json"));
  if (!summary.value("complete", false)) problems.push_back("summary.complete is false");

  const std::size_t archs = config.architectures.size(), seeds = config.seeds.size();
  const auto header_index = [](const std::vector<std::string>& header, const std::string& name) {
    return static_cast<std::size_t>(std::find(header.begin(), header.end(), name) - header.begin());
  };

  // Overall accuracy must be numeric for every architecture on dev and test.
  const auto acc = read_csv(report / "accuracy.csv");
  std::size_t acc_all = 0;
  for (std::size_t r = 1; r < acc.size(); ++r) {
    if (acc[r][2] != "all") continue;
    ++acc_all;
    if (!is_number(acc[r][3])) problems.push_back("accuracy " + acc[r][0] + "/" + acc[r][1] + " not numeric");
  }
  if (acc_all != 2 * archs) problems.push_back("accuracy.csv has " + std::to_string(acc_all) + " overall rows");

  if (config.language == corpus::Language::kGerman) {
    const auto f1 = read_csv(report / "f1.csv");
    if (f1.size() < 1 + archs) problems.push_back("f1.csv too short");
    for (std::size_t r = 1; r < f1.size(); ++r) {
      if (!is_number(f1[r][4])) problems.push_back("f1 " + f1[r][0] + "/" + f1[r][1] + " not numeric");
    }
  }

  const auto ratings = read_csv(report / "ratings.csv");
  const std::size_t expected_ratings = archs * candidates * (seeds + 1);
  if (ratings.size() != 1 + expected_ratings) {
    problems.push_back("ratings.csv has " + std::to_string(ratings.size() - 1) + " rows, expected " +
                       std::to_string(expected_ratings));
  }
  const auto& rh = ratings.front();
  for (std::size_t r = 1; r < ratings.size(); ++r) {
    if (!is_number(ratings[r][header_index(rh, "normalized_prob")]) ||
        !is_number(ratings[r][header_index(rh, "raw_logprob")])) {
      problems.push_back("ratings row " + std::to_string(r) + " not numeric");
      break;
    }
  }

  // Rating correlations are numeric; production correlations may carry an
  // explicit undefined status when a model never produced a candidate.
  const auto corr = read_csv(report / "correlations.csv");
  const auto& ch = corr.front();
  std::size_t corr_rows = 0;
  for (std::size_t r = 1; r < corr.size(); ++r) {
    ++corr_rows;
    const std::string& status = corr[r][header_index(ch, "status")];
    const bool rating_ok = is_number(corr[r][header_index(ch, "rating_rho")]);
    const bool production_ok = is_number(corr[r][header_index(ch, "production_rho")]);
    if (status.empty()) problems.push_back("correlations row " + std::to_string(r) + " lacks a status");
    if (status == "omitted") continue;
    if (!rating_ok) problems.push_back("rating rho " + corr[r][0] + "/" + corr[r][1] + "/" + corr[r][2] + " is " + status);
    if (!production_ok && status != "production_undefined" && status != "undefined") {
      problems.push_back("production rho " + corr[r][0] + "/" + corr[r][2] + " missing without status");
    }
  }
  if (corr_rows == 0) problems.push_back("correlations.csv empty");

  if (read_csv(report / "productions.csv").size() < 2) problems.push_back("productions.csv empty");
  const auto curves = read_csv(report / "training_curves.csv");
  if (curves.size() != 1 + archs * seeds * config.training.epochs) problems.push_back("training_curves.csv rows");
  return problems;
}

Outcome criterion8() {
  const auto start = Clock::now();
  const fs::path scratch = fs::temp_directory_path() / "wugbench-acceptance-smoke";
  fs::remove_all(scratch);
  std::vector<std::string> problems;
  std::string detail;
  for (const std::string lang : {"en", "de"}) {
    const auto base = runner::ExperimentConfig::load(g_root / "configs" / ("smoke_" + lang + ".json"));
    if (base.data.max_examples != 200 || base.seeds.size() != 2 || base.training.epochs != 5) {
      problems.push_back(lang + ": smoke config is not 200 examples / 2 seeds / 5 epochs");
    }
    std::vector<fs::path> reports;
    for (int run = 0; run < 2; ++run) {
      auto config = base;
      config.output = scratch / (lang + "-run" + std::to_string(run));
      // Different thread counts must not change any number.
      ::setenv("WUGBENCH_THREADS", run == 0 ? "1" : "2", 1);
      const auto t0 = Clock::now();
      runner::run_experiment(config);
      detail += lang + " run" + std::to_string(run + 1) + " " + fmt(seconds_since(t0)) + "s; ";
      reports.push_back(config.report_dir());
      if (run == 0) {
        const auto corpus = runner::load_corpus(config);
        for (const auto& p : completeness(config.report_dir(), config, corpus.wugs.candidates.size())) {
          problems.push_back(lang + ": " + p);
        }
      }
    }
    for (const auto& f : kReportFiles) {
      if (slurp(reports[0] / f) != slurp(reports[1] / f)) problems.push_back(lang + ": " + f + " differs between runs");
    }
  }
  ::unsetenv("WUGBENCH_THREADS");
  fs::remove_all(scratch);
  const double secs = seconds_since(start);
  if (secs >= 600.0) problems.push_back("took " + fmt(secs) + "s");
  detail += "total " + fmt(secs) + "s";
  if (problems.empty()) return {Verdict::kPass, "complete and byte-identical across runs; " + detail};
  std::string all;
  for (const auto& p : problems) all += p + "; ";
  return {Verdict::kFail, all + detail};
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  g_root = fs::current_path();
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--only" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else if (arg == "--root" && i + 1 < argc) {
      g_root = argv[++i];
    } else {
      std::cerr << "usage: wugbench_acceptance [--root DIR] [--only N]\n";
      return 2;
    }
  }
  const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3, criterion4,
                                                       criterion5, criterion6, criterion7, criterion8};
  bool failed = false, skipped = false;
  for (int n = 1; n <= 8; ++n) {
    if (only && n != only) continue;
    Outcome o;
    try {
      o = criteria[n - 1]();
    } catch (const std::exception& e) {
      o = {Verdict::kFail, std::string("error: ") + e.what()};
    }
    const char* label = o.verdict == Verdict::kPass   ? "PASS"
                        : o.verdict == Verdict::kFail ? "FAIL"
                        : o.verdict == Verdict::kSkip ? "SKIP"
                                                      : "FLAG";
    std::cout << "c" << n << " " << label << " " << o.detail << std::endl;
    failed = failed || o.verdict == Verdict::kFail;
    skipped = skipped || o.verdict == Verdict::kSkip;
  }
  if (failed) return 1;
  return only && skipped ? 77 : 0;
}
