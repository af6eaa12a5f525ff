#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "wugbench/corpus.hpp"
#include "wugbench/decode.hpp"
#include "wugbench/nd/rng.hpp"
#include "wugbench/seq2seq/model.hpp"

namespace wugbench::toy {

inline corpus::Alphabet letters(std::size_t n, std::vector<std::string> tags = {"PST"}) {
  corpus::Alphabet a;
  for (const auto& t : tags) a.add_tag(t);
  for (std::size_t i = 0; i < n; ++i) a.add_character(std::string(1, static_cast<char>('a' + i)));
  return a;
}

// Step model whose next-symbol distribution is a fixed pseudo-random function
// of (source, prefix). Probabilities are drawn from a Dirichlet-like recipe
// so that some steps are peaked and others flat.
class ToyModel final : public seq2seq::StepModel {
 public:
  ToyModel(corpus::Alphabet alphabet, std::uint64_t seed, std::size_t max_len = 5)
      : alphabet_(std::move(alphabet)), seed_(seed), max_len_(max_len) {}

  const corpus::Alphabet& alphabet() const override { return alphabet_; }
  std::size_t max_decode_len(std::size_t) const override { return max_len_; }

  seq2seq::DecoderState start(std::span<const corpus::SymbolId> source) const override {
    seq2seq::DecoderState s;
    auto memory = std::make_shared<seq2seq::EncoderMemory>();
    memory->outputs = nd::Array({source.size()});
    for (std::size_t i = 0; i < source.size(); ++i) memory->outputs[i] = source[i];
    s.memory = memory;
    return s;
  }

  seq2seq::StepOutput step(const seq2seq::DecoderState& state, corpus::SymbolId prev) const override {
    seq2seq::StepOutput out;
    out.state = state;
    if (prev != corpus::Alphabet::kBos) out.state.prefix.push_back(prev);
    std::uint64_t h = seed_ * 0x9E3779B97F4A7C15ULL + 17;
    for (double v : state.memory->outputs.values()) h = h * 1315423911ULL + static_cast<std::uint64_t>(v) + 1;
    for (auto id : out.state.prefix) h = h * 2654435761ULL + static_cast<std::uint64_t>(id) + 7;
    nd::Rng rng(h);
    const std::size_t n = alphabet_.output_symbols().size();
    std::vector<double> w(n);
    const double temperature = rng.uniform(0.3, 3.0);
    double total = 0.0;
    for (double& x : w) total += (x = std::exp(rng.normal() * temperature));
    for (std::size_t i = 0; i < n; ++i) out.log_probs.push_back(std::log(w[i] / total));
    return out;
  }

 private:
  corpus::Alphabet alphabet_;
  std::uint64_t seed_;
  std::size_t max_len_;
};

// Table-driven model: probabilities looked up by prefix string; unspecified
// prefixes force EOS.
class TableModel final : public seq2seq::StepModel {
 public:
  TableModel(corpus::Alphabet alphabet, std::map<std::string, std::vector<double>> table, std::size_t max_len)
      : alphabet_(std::move(alphabet)), table_(std::move(table)), max_len_(max_len) {}

  const corpus::Alphabet& alphabet() const override { return alphabet_; }
  std::size_t max_decode_len(std::size_t) const override { return max_len_; }
  seq2seq::DecoderState start(std::span<const corpus::SymbolId>) const override { return {}; }

  seq2seq::StepOutput step(const seq2seq::DecoderState& state, corpus::SymbolId prev) const override {
    seq2seq::StepOutput out;
    out.state = state;
    if (prev != corpus::Alphabet::kBos) out.state.prefix.push_back(prev);
    const std::string key = corpus::decode_symbols(alphabet_, out.state.prefix);
    const std::size_t n = alphabet_.output_symbols().size();
    auto it = table_.find(key);
    for (std::size_t i = 0; i < n; ++i) {
      const double p = it == table_.end() ? (i == 0 ? 1.0 : 0.0) : it->second[i];
      out.log_probs.push_back(p > 0 ? std::log(p) : -std::numeric_limits<double>::infinity());
    }
    return out;
  }

 private:
  corpus::Alphabet alphabet_;
  std::map<std::string, std::vector<double>> table_;
  std::size_t max_len_;
};

// Small but complete configuration of each architecture.
inline seq2seq::ModelConfig tiny_config(seq2seq::Architecture arch, std::uint64_t seed = 1) {
  seq2seq::ModelConfig c;
  c.arch = arch;
  c.seed = seed;
  c.embedding_dim = 8;
  c.hidden_dim = 6;
  c.attention_dim = 5;
  c.model_dim = 8;
  c.ffn_dim = 12;
  c.num_layers = 1;
  c.num_heads = 2;
  c.dropout = 0.0;
  return c;
}

// Every finished sequence of at most max_len - 1 characters followed by EOS,
// scored by chaining step(); sorted like beam_decode output.
struct Scored {
  std::vector<corpus::SymbolId> symbols;
  double logprob;
};

inline std::vector<Scored> enumerate_finished(const seq2seq::StepModel& model,
                                              std::span<const corpus::SymbolId> source, std::size_t max_len) {
  std::vector<Scored> out;
  const auto& outputs = model.alphabet().output_symbols();
  struct Frame {
    seq2seq::DecoderState state;
    corpus::SymbolId prev;
    std::vector<corpus::SymbolId> symbols;
    double logprob;
  };
  std::vector<Frame> stack{{model.start(source), corpus::Alphabet::kBos, {}, 0.0}};
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    const auto step = model.step(f.state, f.prev);
    out.push_back({f.symbols, f.logprob + step.log_probs[0]});
    if (f.symbols.size() + 1 >= max_len) continue;
    for (std::size_t i = 1; i < outputs.size(); ++i) {
      auto symbols = f.symbols;
      symbols.push_back(outputs[i]);
      stack.push_back({step.state, outputs[i], std::move(symbols), f.logprob + step.log_probs[i]});
    }
  }
  std::sort(out.begin(), out.end(), [](const Scored& a, const Scored& b) {
    if (a.logprob != b.logprob) return a.logprob > b.logprob;
    return a.symbols < b.symbols;
  });
  return out;
}

}  // namespace wugbench::toy
