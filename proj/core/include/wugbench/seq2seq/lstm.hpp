#pragma once

#include <span>
#include <vector>

#include "wugbench/seq2seq/model.hpp"

namespace wugbench::seq2seq {

// Encoder-decoder LSTM in four variants: uni- or bidirectional encoder, with
// or without additive attention.
//
// The encoder is a stack of `lstm_layers` LSTMs; a bidirectional layer feeds
// the concatenated directions to the next layer. Its summary s (the last top
// state, or forward-last ++ backward-first) initializes every decoder layer
// through tanh(s W_bridge + b). The decoder reads [embedding(prev); context],
// where the context is the attention readout over encoder rows, or s when
// attention is off, and predicts from [h_top; context].
class LstmModel final : public Model {
 public:
  LstmModel(ModelConfig config, corpus::Alphabet alphabet);

  nd::Var loss(nd::Graph& g, std::span<const SymbolId> source, std::span<const SymbolId> target) override;
  StepOutput step(const DecoderState& state, SymbolId prev) const override;

  // Attention readout for decoder state `h` (length hidden_dim) over the
  // encoder rows of `memory`. Requires an attention variant.
  AttentionResult attend(const EncoderMemory& memory, std::span<const double> h) const;

  std::size_t summary_dim() const noexcept { return summary_dim_; }

 protected:
  std::shared_ptr<EncoderMemory> encode_memory(std::span<const SymbolId> source) const override;
  std::vector<nd::Array> initial_tensors(const EncoderMemory& memory) const override;

 private:
  struct Cell {
    nd::Parameter* wx = nullptr;  // [in, 4H], gate order i, f, g, o
    nd::Parameter* wh = nullptr;  // [H, 4H]
    nd::Parameter* b = nullptr;   // [4H]
  };
  struct Encoded {
    nd::Var rows;     // [T, summary_dim]
    nd::Var summary;  // [1, summary_dim]
    nd::Var keys;     // [T, attention_dim] (attention variants)
  };
  struct Recurrent {
    std::vector<nd::Var> h;  // per layer, [1, H]
    std::vector<nd::Var> c;
  };

  Cell make_cell(const std::string& prefix, std::size_t in_dim);
  Encoded encode(nd::Graph& g, std::span<const SymbolId> source) const;
  Recurrent bridge(nd::Graph& g, nd::Var summary) const;
  nd::Var context(nd::Graph& g, const Encoded& enc, nd::Var h_top, nd::Array* weights_out = nullptr) const;
  // One decoder step; returns the pre-output row [h_top; context].
  nd::Var decode_step(nd::Graph& g, const Encoded& enc, Recurrent& state, SymbolId prev) const;
  std::pair<nd::Var, nd::Var> cell_step(nd::Graph& g, const Cell& cell, nd::Var x_proj, nd::Var h, nd::Var c) const;
  std::vector<nd::Var> run_direction(nd::Graph& g, const Cell& cell, nd::Var inputs, bool reverse) const;

  std::size_t hidden_;
  std::size_t summary_dim_;
  bool bidirectional_;
  bool attention_;

  nd::Parameter* src_embedding_;
  nd::Parameter* tgt_embedding_;
  std::vector<Cell> enc_forward_;
  std::vector<Cell> enc_backward_;
  nd::Parameter* bridge_w_;
  nd::Parameter* bridge_b_;
  nd::Parameter* attn_key_ = nullptr;
  nd::Parameter* attn_query_ = nullptr;
  nd::Parameter* attn_v_ = nullptr;
  std::vector<Cell> dec_;
  nd::Parameter* out_w_;
  nd::Parameter* out_b_;
};

}  // namespace wugbench::seq2seq
