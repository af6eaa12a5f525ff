#pragma once

#include <optional>
#include <span>
#include <vector>

#include "wugbench/seq2seq/model.hpp"

namespace wugbench::seq2seq {

// Pre-norm encoder-decoder Transformer with sinusoidal positions and
// embeddings scaled by sqrt(model_dim). Both stacks end in a layer norm.
//
// Decoding keeps a key/value cache: DecoderState::tensors holds the projected
// self-attention keys and values of every decoded position, two arrays per
// decoder layer, and EncoderMemory::cached holds the cross-attention keys and
// values per layer.
class TransformerModel final : public Model {
 public:
  TransformerModel(ModelConfig config, corpus::Alphabet alphabet);

  nd::Var loss(nd::Graph& g, std::span<const SymbolId> source, std::span<const SymbolId> target) override;
  StepOutput step(const DecoderState& state, SymbolId prev) const override;

  // Sinusoidal position table, rows [first, first + count).
  static nd::Array positions(std::size_t first, std::size_t count, std::size_t dim);

 protected:
  std::shared_ptr<EncoderMemory> encode_memory(std::span<const SymbolId> source) const override;
  std::vector<nd::Array> initial_tensors(const EncoderMemory& memory) const override;

 private:
  struct Linear {
    nd::Parameter* w = nullptr;
    nd::Parameter* b = nullptr;
  };
  struct Norm {
    nd::Parameter* gamma = nullptr;
    nd::Parameter* beta = nullptr;
  };
  struct Attention {
    Linear q, k, v, o;
  };
  struct EncoderLayer {
    Norm norm1, norm2;
    Attention self;
    Linear ff1, ff2;
  };
  struct DecoderLayer {
    Norm norm1, norm2, norm3;
    Attention self, cross;
    Linear ff1, ff2;
  };

  Linear make_linear(const std::string& name, std::size_t in, std::size_t out);
  Norm make_norm(const std::string& name);
  Attention make_attention(const std::string& name);

  nd::Var linear(nd::Graph& g, const Linear& l, nd::Var x) const;
  nd::Var norm(nd::Graph& g, const Norm& n, nd::Var x) const;
  nd::Var feed_forward(nd::Graph& g, const Linear& ff1, const Linear& ff2, nd::Var x) const;
  // Multi-head attention from projected queries onto projected keys/values.
  nd::Var heads(nd::Graph& g, const Attention& a, nd::Var q, nd::Var k, nd::Var v,
                std::optional<std::size_t> causal_offset) const;
  nd::Var embed(nd::Graph& g, nd::Parameter& table, std::span<const SymbolId> ids, std::size_t first_pos) const;

  nd::Var encode(nd::Graph& g, std::span<const SymbolId> source) const;
  // Runs the decoder on `ids` at positions [past, past + ids.size()). `self_kv`
  // holds per-layer cached keys/values for the earlier positions (empty when
  // past == 0) and is replaced by the extended cache. `cross_kv` holds
  // per-layer projected encoder keys/values.
  nd::Var decode(nd::Graph& g, std::span<const SymbolId> ids, std::size_t past, std::vector<nd::Var>& self_kv,
                 const std::vector<nd::Var>& cross_kv) const;
  std::vector<nd::Var> cross_keys_values(nd::Graph& g, nd::Var memory) const;

  std::size_t dim_;
  nd::Parameter* src_embedding_;
  nd::Parameter* tgt_embedding_;
  std::vector<EncoderLayer> encoder_;
  Norm encoder_norm_;
  std::vector<DecoderLayer> decoder_;
  Norm decoder_norm_;
  Linear out_;
};

}  // namespace wugbench::seq2seq
