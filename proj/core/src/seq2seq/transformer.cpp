#include "wugbench/seq2seq/transformer.hpp"

#include <cmath>

#include "wugbench/error.hpp"

namespace wugbench::seq2seq {

using nd::Array;
using nd::Graph;
using nd::Var;

TransformerModel::TransformerModel(ModelConfig config, corpus::Alphabet alphabet)
    : Model(std::move(config), std::move(alphabet)), dim_(config_.model_dim) {
  if (is_lstm(config_.arch)) throw ConfigError("TransformerModel built with an LSTM architecture");
  const std::size_t vocab = alphabet_.size();
  const double emb_sd = 1.0 / std::sqrt(static_cast<double>(dim_));

  src_embedding_ = &add_parameter("src_embedding", gaussian({vocab, dim_}, emb_sd));
  for (std::size_t l = 0; l < config_.num_layers; ++l) {
    const std::string p = "enc." + std::to_string(l);
    EncoderLayer layer;
    layer.norm1 = make_norm(p + ".norm1");
    layer.self = make_attention(p + ".self");
    layer.norm2 = make_norm(p + ".norm2");
    layer.ff1 = make_linear(p + ".ff1", dim_, config_.ffn_dim);
    layer.ff2 = make_linear(p + ".ff2", config_.ffn_dim, dim_);
    encoder_.push_back(layer);
  }
  encoder_norm_ = make_norm("enc.norm");

  tgt_embedding_ = &add_parameter("tgt_embedding", gaussian({vocab, dim_}, emb_sd));
  for (std::size_t l = 0; l < config_.num_layers; ++l) {
    const std::string p = "dec." + std::to_string(l);
    DecoderLayer layer;
    layer.norm1 = make_norm(p + ".norm1");
    layer.self = make_attention(p + ".self");
    layer.norm2 = make_norm(p + ".norm2");
    layer.cross = make_attention(p + ".cross");
    layer.norm3 = make_norm(p + ".norm3");
    layer.ff1 = make_linear(p + ".ff1", dim_, config_.ffn_dim);
    layer.ff2 = make_linear(p + ".ff2", config_.ffn_dim, dim_);
    decoder_.push_back(layer);
  }
  decoder_norm_ = make_norm("dec.norm");
  out_ = make_linear("out", dim_, output_size_);
}

TransformerModel::Linear TransformerModel::make_linear(const std::string& name, std::size_t in, std::size_t out) {
  // Xavier normal.
  const double sd = std::sqrt(2.0 / static_cast<double>(in + out));
  Linear l;
  l.w = &add_parameter(name + ".w", gaussian({in, out}, sd));
  l.b = &add_parameter(name + ".b", Array({out}));
  return l;
}

TransformerModel::Norm TransformerModel::make_norm(const std::string& name) {
  Norm n;
  n.gamma = &add_parameter(name + ".gamma", Array({dim_}, 1.0));
  n.beta = &add_parameter(name + ".beta", Array({dim_}));
  return n;
}

TransformerModel::Attention TransformerModel::make_attention(const std::string& name) {
  Attention a;
  a.q = make_linear(name + ".q", dim_, dim_);
  a.k = make_linear(name + ".k", dim_, dim_);
  a.v = make_linear(name + ".v", dim_, dim_);
  a.o = make_linear(name + ".o", dim_, dim_);
  return a;
}

Array TransformerModel::positions(std::size_t first, std::size_t count, std::size_t dim) {
  Array pe({count, dim});
  for (std::size_t r = 0; r < count; ++r) {
    const double pos = static_cast<double>(first + r);
    for (std::size_t i = 0; i < dim; i += 2) {
      const double freq = std::pow(10000.0, -static_cast<double>(i) / static_cast<double>(dim));
      pe.at(r, i) = std::sin(pos * freq);
      if (i + 1 < dim) pe.at(r, i + 1) = std::cos(pos * freq);
    }
  }
  return pe;
}

Var TransformerModel::linear(Graph& g, const Linear& l, Var x) const {
  return nd::add(nd::matmul(x, g.param(*l.w)), g.param(*l.b));
}

Var TransformerModel::norm(Graph& g, const Norm& n, Var x) const {
  return nd::layer_norm(x, g.param(*n.gamma), g.param(*n.beta));
}

Var TransformerModel::feed_forward(Graph& g, const Linear& ff1, const Linear& ff2, Var x) const {
  Var hidden = nd::dropout(nd::relu(linear(g, ff1, x)), config_.dropout);
  return linear(g, ff2, hidden);
}

Var TransformerModel::heads(Graph& g, const Attention& a, Var q, Var k, Var v,
                            std::optional<std::size_t> causal_offset) const {
  const std::size_t nh = config_.num_heads;
  const std::size_t dh = dim_ / nh;
  if (nh == 1) return linear(g, a.o, nd::scaled_dot_product(q, k, v, causal_offset));
  std::vector<Var> parts;
  parts.reserve(nh);
  for (std::size_t h = 0; h < nh; ++h) {
    const std::size_t lo = h * dh;
    const std::size_t hi = lo + dh;
    parts.push_back(nd::scaled_dot_product(nd::slice(q, 1, lo, hi), nd::slice(k, 1, lo, hi),
                                           nd::slice(v, 1, lo, hi), causal_offset));
  }
  return linear(g, a.o, nd::concat(parts, 1));
}

Var TransformerModel::embed(Graph& g, nd::Parameter& table, std::span<const SymbolId> ids,
                            std::size_t first_pos) const {
  Var e = nd::scale(nd::embedding_lookup(g.param(table), ids), std::sqrt(static_cast<double>(dim_)));
  Var x = nd::add(e, g.constant(positions(first_pos, ids.size(), dim_)));
  return nd::dropout(x, config_.dropout);
}

Var TransformerModel::encode(Graph& g, std::span<const SymbolId> source) const {
  Var x = embed(g, *src_embedding_, source, 0);
  for (const EncoderLayer& layer : encoder_) {
    Var n = norm(g, layer.norm1, x);
    Var attn = heads(g, layer.self, linear(g, layer.self.q, n), linear(g, layer.self.k, n),
                     linear(g, layer.self.v, n), std::nullopt);
    x = nd::add(x, nd::dropout(attn, config_.dropout));
    Var ff = feed_forward(g, layer.ff1, layer.ff2, norm(g, layer.norm2, x));
    x = nd::add(x, nd::dropout(ff, config_.dropout));
  }
  return norm(g, encoder_norm_, x);
}

std::vector<Var> TransformerModel::cross_keys_values(Graph& g, Var memory) const {
  std::vector<Var> kv;
  kv.reserve(2 * decoder_.size());
  for (const DecoderLayer& layer : decoder_) {
    kv.push_back(linear(g, layer.cross.k, memory));
    kv.push_back(linear(g, layer.cross.v, memory));
  }
  return kv;
}

Var TransformerModel::decode(Graph& g, std::span<const SymbolId> ids, std::size_t past, std::vector<Var>& self_kv,
                             const std::vector<Var>& cross_kv) const {
  Var x = embed(g, *tgt_embedding_, ids, past);
  std::vector<Var> next_kv;
  next_kv.reserve(2 * decoder_.size());
  for (std::size_t l = 0; l < decoder_.size(); ++l) {
    const DecoderLayer& layer = decoder_[l];
    Var n = norm(g, layer.norm1, x);
    Var k = linear(g, layer.self.k, n);
    Var v = linear(g, layer.self.v, n);
    if (past > 0) {
      k = nd::concat({self_kv[2 * l], k}, 0);
      v = nd::concat({self_kv[2 * l + 1], v}, 0);
    }
    next_kv.push_back(k);
    next_kv.push_back(v);
    Var attn = heads(g, layer.self, linear(g, layer.self.q, n), k, v, past);
    x = nd::add(x, nd::dropout(attn, config_.dropout));

    n = norm(g, layer.norm2, x);
    Var cross = heads(g, layer.cross, linear(g, layer.cross.q, n), cross_kv[2 * l], cross_kv[2 * l + 1],
                      std::nullopt);
    x = nd::add(x, nd::dropout(cross, config_.dropout));

    Var ff = feed_forward(g, layer.ff1, layer.ff2, norm(g, layer.norm3, x));
    x = nd::add(x, nd::dropout(ff, config_.dropout));
  }
  self_kv = std::move(next_kv);
  return norm(g, decoder_norm_, x);
}

Var TransformerModel::loss(Graph& g, std::span<const SymbolId> source, std::span<const SymbolId> target) {
  check_source(source);
  std::vector<SymbolId> inputs{corpus::Alphabet::kBos};
  std::vector<int> gold;
  for (SymbolId id : target) {
    check_prev(id);
    inputs.push_back(id);
    gold.push_back(alphabet_.output_index(id));
  }
  gold.push_back(alphabet_.output_index(corpus::Alphabet::kEos));

  Var memory = encode(g, source);
  std::vector<Var> cross = cross_keys_values(g, memory);
  std::vector<Var> self_kv;
  Var h = decode(g, inputs, 0, self_kv, cross);
  Var logits = linear(g, out_, h);
  return nd::negate(nd::sum(nd::pick(nd::log_softmax(logits), gold)));
}

std::shared_ptr<EncoderMemory> TransformerModel::encode_memory(std::span<const SymbolId> source) const {
  Graph g(false);
  Var memory = encode(g, source);
  auto out = std::make_shared<EncoderMemory>();
  out->outputs = memory.value();
  for (Var kv : cross_keys_values(g, memory)) out->cached.push_back(kv.value());
  return out;
}

std::vector<Array> TransformerModel::initial_tensors(const EncoderMemory&) const { return {}; }

StepOutput TransformerModel::step(const DecoderState& state, SymbolId prev) const {
  check_prev(prev);
  const std::size_t past = state.tensors.empty() ? 0 : state.tensors.front().rows();
  if (!state.memory || (past > 0 && state.tensors.size() != 2 * decoder_.size()) ||
      state.memory->cached.size() != 2 * decoder_.size()) {
    throw ContractError("TransformerModel::step: state was not produced by this model");
  }
  Graph g(false);
  std::vector<Var> self_kv;
  for (const Array& t : state.tensors) self_kv.push_back(g.constant(t));
  std::vector<Var> cross;
  for (const Array& t : state.memory->cached) cross.push_back(g.constant(t));
  const SymbolId ids[] = {prev};
  Var h = decode(g, ids, past, self_kv, cross);
  Var logp = nd::log_softmax(linear(g, out_, h));

  StepOutput out;
  out.log_probs.assign(logp.value().values().begin(), logp.value().values().end());
  out.state.memory = state.memory;
  for (Var kv : self_kv) out.state.tensors.push_back(kv.value());
  out.state.prefix = state.prefix;
  if (prev != corpus::Alphabet::kBos) out.state.prefix.push_back(prev);
  return out;
}

}  // namespace wugbench::seq2seq
