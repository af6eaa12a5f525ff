#include "wugbench/seq2seq/lstm.hpp"

#include <cmath>

#include "wugbench/error.hpp"

namespace wugbench::seq2seq {

using nd::Array;
using nd::Graph;
using nd::Var;

LstmModel::LstmModel(ModelConfig config, corpus::Alphabet alphabet)
    : Model(std::move(config), std::move(alphabet)),
      hidden_(config_.hidden_dim),
      summary_dim_(config_.hidden_dim * (is_bidirectional(config_.arch) ? 2 : 1)),
      bidirectional_(is_bidirectional(config_.arch)),
      attention_(has_attention(config_.arch)) {
  if (!is_lstm(config_.arch)) throw ConfigError("LstmModel built with a non-LSTM architecture");
  const double r = config_.init_range;
  const std::size_t vocab = alphabet_.size();
  const std::size_t emb = config_.embedding_dim;

  src_embedding_ = &add_parameter("src_embedding", uniform({vocab, emb}, r));
  for (std::size_t l = 0; l < config_.lstm_layers; ++l) {
    const std::size_t in = l == 0 ? emb : summary_dim_;
    enc_forward_.push_back(make_cell("enc.fwd." + std::to_string(l), in));
    if (bidirectional_) enc_backward_.push_back(make_cell("enc.bwd." + std::to_string(l), in));
  }
  bridge_w_ = &add_parameter("bridge.w", uniform({summary_dim_, hidden_}, r));
  bridge_b_ = &add_parameter("bridge.b", uniform({hidden_}, r));
  if (attention_) {
    const std::size_t a = config_.attention_dim;
    attn_key_ = &add_parameter("attn.key", uniform({summary_dim_, a}, r));
    attn_query_ = &add_parameter("attn.query", uniform({hidden_, a}, r));
    attn_v_ = &add_parameter("attn.v", uniform({a, 1}, r));
  }
  tgt_embedding_ = &add_parameter("tgt_embedding", uniform({vocab, emb}, r));
  for (std::size_t l = 0; l < config_.lstm_layers; ++l) {
    dec_.push_back(make_cell("dec." + std::to_string(l), l == 0 ? emb + summary_dim_ : hidden_));
  }
  out_w_ = &add_parameter("out.w", uniform({hidden_ + summary_dim_, output_size_}, r));
  out_b_ = &add_parameter("out.b", uniform({output_size_}, r));
}

LstmModel::Cell LstmModel::make_cell(const std::string& prefix, std::size_t in_dim) {
  const double r = config_.init_range;
  Cell cell;
  cell.wx = &add_parameter(prefix + ".wx", uniform({in_dim, 4 * hidden_}, r));
  cell.wh = &add_parameter(prefix + ".wh", uniform({hidden_, 4 * hidden_}, r));
  cell.b = &add_parameter(prefix + ".b", uniform({4 * hidden_}, r));
  return cell;
}

std::pair<Var, Var> LstmModel::cell_step(Graph& g, const Cell& cell, Var x_proj, Var h, Var c) const {
  const std::size_t H = hidden_;
  Var gates = nd::add(x_proj, nd::matmul(h, g.param(*cell.wh)));
  Var i = nd::sigmoid(nd::slice(gates, 1, 0, H));
  Var f = nd::sigmoid(nd::slice(gates, 1, H, 2 * H));
  Var u = nd::tanh(nd::slice(gates, 1, 2 * H, 3 * H));
  Var o = nd::sigmoid(nd::slice(gates, 1, 3 * H, 4 * H));
  Var c_next = nd::add(nd::multiply(f, c), nd::multiply(i, u));
  Var h_next = nd::multiply(o, nd::tanh(c_next));
  return {h_next, c_next};
}

std::vector<Var> LstmModel::run_direction(Graph& g, const Cell& cell, Var inputs, bool reverse) const {
  const std::size_t T = inputs.value().rows();
  // Input projections for every position at once.
  Var proj = nd::add(nd::matmul(inputs, g.param(*cell.wx)), g.param(*cell.b));
  Var h = g.constant(Array({1, hidden_}));
  Var c = g.constant(Array({1, hidden_}));
  std::vector<Var> out(T);
  for (std::size_t k = 0; k < T; ++k) {
    const std::size_t t = reverse ? T - 1 - k : k;
    std::tie(h, c) = cell_step(g, cell, nd::slice(proj, 0, t, t + 1), h, c);
    out[t] = h;
  }
  return out;
}

LstmModel::Encoded LstmModel::encode(Graph& g, std::span<const SymbolId> source) const {
  Var x = nd::dropout(nd::embedding_lookup(g.param(*src_embedding_), source), config_.dropout);
  const std::size_t T = source.size();
  Var summary{};
  for (std::size_t l = 0; l < enc_forward_.size(); ++l) {
    std::vector<Var> fwd = run_direction(g, enc_forward_[l], x, false);
    Var fwd_rows = nd::concat(fwd, 0);
    if (bidirectional_) {
      std::vector<Var> bwd = run_direction(g, enc_backward_[l], x, true);
      x = nd::concat({fwd_rows, nd::concat(bwd, 0)}, 1);
      summary = nd::concat({fwd[T - 1], bwd[0]}, 1);
    } else {
      x = fwd_rows;
      summary = fwd[T - 1];
    }
  }
  Encoded enc{x, summary, {}};
  if (attention_) enc.keys = nd::matmul(x, g.param(*attn_key_));
  return enc;
}

LstmModel::Recurrent LstmModel::bridge(Graph& g, Var summary) const {
  Var h0 = nd::tanh(nd::add(nd::matmul(summary, g.param(*bridge_w_)), g.param(*bridge_b_)));
  Recurrent state;
  for (std::size_t l = 0; l < dec_.size(); ++l) {
    state.h.push_back(h0);
    state.c.push_back(g.constant(Array({1, hidden_})));
  }
  return state;
}

Var LstmModel::context(Graph& g, const Encoded& enc, Var h_top, Array* weights_out) const {
  if (!attention_) return enc.summary;
  const std::size_t T = enc.rows.value().rows();
  Var energy = nd::tanh(nd::add(enc.keys, nd::matmul(h_top, g.param(*attn_query_))));
  Var scores = nd::reshape(nd::matmul(energy, g.param(*attn_v_)), {1, T});
  Var weights = nd::softmax(scores);
  if (weights_out) *weights_out = weights.value();
  return nd::matmul(weights, enc.rows);
}

Var LstmModel::decode_step(Graph& g, const Encoded& enc, Recurrent& state, SymbolId prev) const {
  const SymbolId ids[] = {prev};
  Var ctx = context(g, enc, state.h.back());
  Var emb = nd::dropout(nd::embedding_lookup(g.param(*tgt_embedding_), ids), config_.dropout);
  Var x = nd::concat({emb, ctx}, 1);
  for (std::size_t l = 0; l < dec_.size(); ++l) {
    const Cell& cell = dec_[l];
    Var proj = nd::add(nd::matmul(x, g.param(*cell.wx)), g.param(*cell.b));
    std::tie(state.h[l], state.c[l]) = cell_step(g, cell, proj, state.h[l], state.c[l]);
    x = state.h[l];
  }
  return nd::concat({x, ctx}, 1);
}

Var LstmModel::loss(Graph& g, std::span<const SymbolId> source, std::span<const SymbolId> target) {
  check_source(source);
  std::vector<int> gold;
  gold.reserve(target.size() + 1);
  for (SymbolId id : target) {
    check_prev(id);
    gold.push_back(alphabet_.output_index(id));
  }
  gold.push_back(alphabet_.output_index(corpus::Alphabet::kEos));

  Encoded enc = encode(g, source);
  Recurrent state = bridge(g, enc.summary);
  std::vector<Var> rows;
  rows.reserve(gold.size());
  SymbolId prev = corpus::Alphabet::kBos;
  for (std::size_t t = 0; t < gold.size(); ++t) {
    rows.push_back(decode_step(g, enc, state, prev));
    if (t < target.size()) prev = target[t];
  }
  Var pre = nd::dropout(nd::concat(rows, 0), config_.dropout);
  Var logits = nd::add(nd::matmul(pre, g.param(*out_w_)), g.param(*out_b_));
  return nd::negate(nd::sum(nd::pick(nd::log_softmax(logits), gold)));
}

std::shared_ptr<EncoderMemory> LstmModel::encode_memory(std::span<const SymbolId> source) const {
  Graph g(false);
  Encoded enc = encode(g, source);
  auto memory = std::make_shared<EncoderMemory>();
  memory->outputs = enc.rows.value();
  memory->cached.push_back(enc.summary.value());
  if (attention_) memory->cached.push_back(enc.keys.value());
  return memory;
}

std::vector<Array> LstmModel::initial_tensors(const EncoderMemory& memory) const {
  Graph g(false);
  Recurrent state = bridge(g, g.constant(memory.cached.at(0)));
  std::vector<Array> tensors;
  for (std::size_t l = 0; l < dec_.size(); ++l) {
    tensors.push_back(state.h[l].value());
    tensors.push_back(state.c[l].value());
  }
  return tensors;
}

StepOutput LstmModel::step(const DecoderState& state, SymbolId prev) const {
  check_prev(prev);
  if (!state.memory || state.tensors.size() != 2 * dec_.size()) {
    throw ContractError("LstmModel::step: state was not produced by this model");
  }
  Graph g(false);
  const EncoderMemory& memory = *state.memory;
  Encoded enc{g.constant(memory.outputs), g.constant(memory.cached.at(0)), {}};
  if (attention_) enc.keys = g.constant(memory.cached.at(1));
  Recurrent rec;
  for (std::size_t l = 0; l < dec_.size(); ++l) {
    rec.h.push_back(g.constant(state.tensors[2 * l]));
    rec.c.push_back(g.constant(state.tensors[2 * l + 1]));
  }
  Var pre = decode_step(g, enc, rec, prev);
  Var logp = nd::log_softmax(nd::add(nd::matmul(pre, g.param(*out_w_)), g.param(*out_b_)));

  StepOutput out;
  out.log_probs.assign(logp.value().values().begin(), logp.value().values().end());
  out.state.memory = state.memory;
  for (std::size_t l = 0; l < dec_.size(); ++l) {
    out.state.tensors.push_back(rec.h[l].value());
    out.state.tensors.push_back(rec.c[l].value());
  }
  out.state.prefix = state.prefix;
  if (prev != corpus::Alphabet::kBos) out.state.prefix.push_back(prev);
  return out;
}

AttentionResult LstmModel::attend(const EncoderMemory& memory, std::span<const double> h) const {
  if (!attention_) throw ContractError("attend: model has no attention");
  if (h.size() != hidden_) throw ShapeError("attend: state has length " + std::to_string(h.size()));
  Graph g(false);
  Encoded enc{g.constant(memory.outputs), g.constant(memory.cached.at(0)), g.constant(memory.cached.at(1))};
  Array weights;
  Var ctx = context(g, enc, g.constant(Array({1, hidden_}, std::vector<double>(h.begin(), h.end()))), &weights);
  return {std::vector<double>(ctx.value().values().begin(), ctx.value().values().end()), weights.to_vector()};
}

}  // namespace wugbench::seq2seq
