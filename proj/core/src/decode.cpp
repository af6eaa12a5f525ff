#include "wugbench/decode.hpp"

#include <algorithm>
#include <cmath>

#include "wugbench/error.hpp"

namespace wugbench::decode {
namespace {

using corpus::Alphabet;

std::size_t resolve_max_len(const StepModel& model, std::span<const SymbolId> source,
                            std::optional<std::size_t> max_len) {
  const std::size_t n = max_len.value_or(model.max_decode_len(source.size()));
  if (n == 0) throw ContractError("max_len must be positive");
  return n;
}

std::size_t argmax(const std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

// Orders by logprob descending, then symbol sequence ascending.
bool better(double lp_a, std::span<const SymbolId> a, double lp_b, std::span<const SymbolId> b) {
  if (lp_a != lp_b) return lp_a > lp_b;
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

struct Candidate {
  std::size_t parent;
  std::size_t out_index;
  SymbolId symbol;
  double logprob;
  std::vector<SymbolId> key;  // parent symbols + new symbol, for tie-breaking
};

}  // namespace

Hypothesis greedy_decode(const StepModel& model, std::span<const SymbolId> source,
                         std::optional<std::size_t> max_len) {
  const std::size_t limit = resolve_max_len(model, source, max_len);
  const auto& outputs = model.alphabet().output_symbols();
  Hypothesis h;
  h.state = model.start(source);
  SymbolId prev = Alphabet::kBos;
  for (std::size_t t = 0; t < limit; ++t) {
    seq2seq::StepOutput out = model.step(h.state, prev);
    const std::size_t best = argmax(out.log_probs);
    h.logprob += out.log_probs[best];
    if (outputs[best] == Alphabet::kEos) {
      h.finished = true;
      break;
    }
    prev = outputs[best];
    h.symbols.push_back(prev);
    h.state = std::move(out.state);
  }
  return h;
}

std::vector<Hypothesis> beam_decode(const StepModel& model, std::span<const SymbolId> source, std::size_t width,
                                    std::optional<std::size_t> max_len) {
  if (width == 0) throw ContractError("beam width must be at least 1");
  const std::size_t limit = resolve_max_len(model, source, max_len);
  const auto& outputs = model.alphabet().output_symbols();

  std::vector<Hypothesis> live(1);
  live[0].state = model.start(source);
  std::vector<Hypothesis> finished;

  for (std::size_t t = 0; t < limit && !live.empty(); ++t) {
    std::vector<seq2seq::StepOutput> expanded;
    expanded.reserve(live.size());
    std::vector<Candidate> candidates;
    for (std::size_t b = 0; b < live.size(); ++b) {
      const SymbolId prev = live[b].symbols.empty() ? Alphabet::kBos : live[b].symbols.back();
      expanded.push_back(model.step(live[b].state, prev));
      const auto& lp = expanded.back().log_probs;
      for (std::size_t j = 0; j < lp.size(); ++j) {
        Candidate c{b, j, outputs[j], live[b].logprob + lp[j], live[b].symbols};
        c.key.push_back(outputs[j]);
        candidates.push_back(std::move(c));
      }
    }
    const std::size_t keep = std::min(width, candidates.size());
    std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(keep), candidates.end(),
                      [](const Candidate& a, const Candidate& b) { return better(a.logprob, a.key, b.logprob, b.key); });

    std::vector<Hypothesis> next;
    for (std::size_t i = 0; i < keep; ++i) {
      Candidate& c = candidates[i];
      Hypothesis h;
      h.logprob = c.logprob;
      if (c.symbol == Alphabet::kEos) {
        h.symbols = live[c.parent].symbols;
        h.state = live[c.parent].state;
        h.finished = true;
        finished.push_back(std::move(h));
      } else {
        h.symbols = std::move(c.key);
        h.state = expanded[c.parent].state;
        next.push_back(std::move(h));
      }
    }
    live = std::move(next);

    // Log-probabilities only fall, so once `width` finished hypotheses beat
    // every live prefix nothing can change the result.
    if (finished.size() >= width && !live.empty()) {
      std::vector<double> lps;
      for (const auto& f : finished) lps.push_back(f.logprob);
      std::nth_element(lps.begin(), lps.begin() + static_cast<std::ptrdiff_t>(width - 1), lps.end(),
                       std::greater<>());
      const double best_live = live.front().logprob;
      if (lps[width - 1] > best_live) live.clear();
    }
  }

  std::vector<Hypothesis>& result = finished.empty() ? live : finished;
  std::sort(result.begin(), result.end(), [](const Hypothesis& a, const Hypothesis& b) {
    return better(a.logprob, a.symbols, b.logprob, b.symbols);
  });
  if (result.size() > width) result.resize(width);
  return std::move(result);
}

ScoredForm force_score(const StepModel& model, std::span<const SymbolId> source, std::span<const SymbolId> target) {
  const Alphabet& alphabet = model.alphabet();
  ScoredForm scored;
  scored.symbols.assign(target.begin(), target.end());
  scored.form = corpus::decode_symbols(alphabet, target);
  DecoderState state = model.start(source);
  SymbolId prev = Alphabet::kBos;
  for (std::size_t t = 0; t <= target.size(); ++t) {
    const SymbolId gold = t < target.size() ? target[t] : Alphabet::kEos;
    const int index = alphabet.output_index(gold);
    if (index < 0 || (t < target.size() && gold == Alphabet::kEos)) {
      throw EncodingError(std::to_string(gold), "target symbol id " + std::to_string(gold) + " is not a character");
    }
    seq2seq::StepOutput out = model.step(state, prev);
    const double lp = out.log_probs[static_cast<std::size_t>(index)];
    scored.step_log_probs.push_back(lp);
    scored.raw_logprob += lp;
    state = std::move(out.state);
    prev = gold;
  }
  scored.normalized_prob = std::exp(scored.raw_logprob / static_cast<double>(target.size() + 1));
  return scored;
}

ScoredForm force_score(const StepModel& model, std::span<const SymbolId> source, std::string_view target) {
  const std::vector<SymbolId> ids = corpus::encode_target(model.alphabet(), target);
  return force_score(model, source, ids);
}

Hypothesis sample_decode(const StepModel& model, std::span<const SymbolId> source, nd::Rng& rng,
                         std::optional<std::size_t> max_len) {
  const std::size_t limit = resolve_max_len(model, source, max_len);
  const auto& outputs = model.alphabet().output_symbols();
  Hypothesis h;
  h.state = model.start(source);
  SymbolId prev = Alphabet::kBos;
  for (std::size_t t = 0; t < limit; ++t) {
    seq2seq::StepOutput out = model.step(h.state, prev);
    const double u = rng.uniform();
    double acc = 0.0;
    std::size_t pick = out.log_probs.size() - 1;
    for (std::size_t j = 0; j < out.log_probs.size(); ++j) {
      acc += std::exp(out.log_probs[j]);
      if (u < acc) {
        pick = j;
        break;
      }
    }
    h.logprob += out.log_probs[pick];
    if (outputs[pick] == Alphabet::kEos) {
      h.finished = true;
      break;
    }
    prev = outputs[pick];
    h.symbols.push_back(prev);
    h.state = std::move(out.state);
  }
  return h;
}

std::string hypothesis_text(const StepModel& model, const Hypothesis& h) {
  return corpus::decode_symbols(model.alphabet(), h.symbols);
}

}  // namespace wugbench::decode
