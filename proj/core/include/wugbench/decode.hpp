#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wugbench/nd/rng.hpp"
#include "wugbench/seq2seq/model.hpp"

namespace wugbench::decode {

using corpus::SymbolId;
using seq2seq::DecoderState;
using seq2seq::StepModel;

inline constexpr std::size_t kDefaultBeamWidth = 12;

struct Hypothesis {
  std::vector<SymbolId> symbols;  // character ids; neither BOS nor EOS
  double logprob = 0.0;           // includes the EOS factor when finished
  DecoderState state;             // state after consuming the last symbol
  bool finished = false;
};

struct ScoredForm {
  std::string form;
  std::vector<SymbolId> symbols;
  std::vector<double> step_log_probs;  // k character factors, then EOS
  double raw_logprob = 0.0;
  double normalized_prob = 0.0;        // exp(raw_logprob / (k + 1))
};

// `max_len` bounds the number of decoding steps, EOS included; when unset it
// is model.max_decode_len(source.size()). Argmax ties go to the lower
// symbol id.
Hypothesis greedy_decode(const StepModel& model, std::span<const SymbolId> source,
                         std::optional<std::size_t> max_len = std::nullopt);

// Standard beam search. Every step expands all live prefixes by every output
// symbol and keeps the best `width` candidates; candidates ending in EOS are
// set aside as finished. Returns up to `width` finished hypotheses sorted by
// raw logprob (descending, ties by lexicographic symbol ids). If nothing
// finished within max_len, returns the best live prefixes with
// finished == false, so width 1 reproduces greedy_decode exactly.
std::vector<Hypothesis> beam_decode(const StepModel& model, std::span<const SymbolId> source,
                                    std::size_t width = kDefaultBeamWidth,
                                    std::optional<std::size_t> max_len = std::nullopt);

// Forced decoding of `target` (character ids). Throws EncodingError when a
// target id is not a character.
ScoredForm force_score(const StepModel& model, std::span<const SymbolId> source, std::span<const SymbolId> target);
ScoredForm force_score(const StepModel& model, std::span<const SymbolId> source, std::string_view target);

// Ancestral sample: draws each symbol from the step distribution.
Hypothesis sample_decode(const StepModel& model, std::span<const SymbolId> source, nd::Rng& rng,
                         std::optional<std::size_t> max_len = std::nullopt);

std::string hypothesis_text(const StepModel& model, const Hypothesis& h);

}  // namespace wugbench::decode
