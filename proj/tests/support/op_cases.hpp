#pragma once

#include <functional>
#include <string>
#include <vector>

#include "wugbench/nd/graph.hpp"
#include "wugbench/nd/grad_check.hpp"
#include "wugbench/nd/rng.hpp"

namespace wugbench::toy {

inline nd::Array random_array(nd::Shape shape, nd::Rng& rng, double lo = -1.0, double hi = 1.0) {
  nd::Array a(std::move(shape));
  for (double& v : a.values()) v = rng.uniform(lo, hi);
  return a;
}

// Contracts an op's output with fixed pseudo-random weights so that ops whose
// plain sum is constant (softmax, layer_norm) still get informative gradients.
inline nd::Var weighted_sum(nd::Graph& g, nd::Var v, std::uint64_t seed = 99) {
  nd::Rng rng(seed);
  nd::Array w(v.shape());
  for (double& x : w.values()) x = rng.normal();
  return nd::sum(nd::multiply(v, g.constant(std::move(w))));
}

struct OpCase {
  std::string name;
  nd::Shape input_shape;
  double lo = -1.0;
  double hi = 1.0;
  // Builds the op around x; `rng` provides fixed side operands.
  std::function<nd::Var(nd::Graph&, nd::Var, std::uint64_t)> build;
};

inline nd::Var side(nd::Graph& g, nd::Shape shape, std::uint64_t seed, double lo = -1.0, double hi = 1.0) {
  nd::Rng rng(seed);
  return g.constant(random_array(std::move(shape), rng, lo, hi));
}

inline std::vector<OpCase> op_cases() {
  using nd::Graph;
  using nd::Var;
  std::vector<OpCase> cases;
  auto add = [&](std::string name, nd::Shape shape, auto fn, double lo = -1.0, double hi = 1.0) {
    cases.push_back({std::move(name), std::move(shape), lo, hi, fn});
  };
  add("matmul_left", {3, 4}, [](Graph& g, Var x, std::uint64_t s) { return nd::matmul(x, side(g, {4, 2}, s)); });
  add("matmul_right", {4, 2}, [](Graph& g, Var x, std::uint64_t s) { return nd::matmul(side(g, {3, 4}, s), x); });
  add("matmul_nt", {5, 4}, [](Graph& g, Var x, std::uint64_t s) { return nd::matmul_nt(side(g, {3, 4}, s), x); });
  add("transpose", {3, 4}, [](Graph& g, Var x, std::uint64_t s) { return nd::matmul(nd::transpose(x), side(g, {3, 2}, s)); });
  add("add", {3, 4}, [](Graph& g, Var x, std::uint64_t s) { return nd::add(x, side(g, {3, 4}, s)); });
  add("add_row_broadcast", {4}, [](Graph& g, Var x, std::uint64_t s) { return nd::add(side(g, {3, 4}, s), x); });
  add("sub", {3, 4}, [](Graph& g, Var x, std::uint64_t s) { return nd::sub(side(g, {3, 4}, s), x); });
  add("multiply", {3, 4}, [](Graph& g, Var x, std::uint64_t s) { return nd::multiply(x, side(g, {3, 4}, s)); });
  add("multiply_self", {2, 3}, [](Graph&, Var x, std::uint64_t) { return nd::multiply(x, x); });
  add("scale", {3, 2}, [](Graph&, Var x, std::uint64_t) { return nd::scale(x, -2.5); });
  add("negate", {3, 2}, [](Graph&, Var x, std::uint64_t) { return nd::negate(x); });
  add("tanh", {3, 4}, [](Graph&, Var x, std::uint64_t) { return nd::tanh(x); }, -2.0, 2.0);
  add("sigmoid", {3, 4}, [](Graph&, Var x, std::uint64_t) { return nd::sigmoid(x); }, -3.0, 3.0);
  add("relu", {3, 4}, [](Graph&, Var x, std::uint64_t) { return nd::relu(x); });
  add("exp", {3, 4}, [](Graph&, Var x, std::uint64_t) { return nd::exp(x); });
  add("log", {3, 4}, [](Graph&, Var x, std::uint64_t) { return nd::log(x); }, 0.5, 2.0);
  add("sum", {3, 4}, [](Graph&, Var x, std::uint64_t) { return nd::reshape(nd::sum(nd::tanh(x)), {1}); });
  add("reshape", {3, 4}, [](Graph&, Var x, std::uint64_t) { return nd::reshape(x, {2, 6}); });
  add("concat_rows", {2, 3}, [](Graph& g, Var x, std::uint64_t s) {
    return nd::concat({x, side(g, {1, 3}, s), x}, 0);
  });
  add("concat_cols", {2, 3}, [](Graph& g, Var x, std::uint64_t s) {
    return nd::concat({side(g, {2, 2}, s), x}, 1);
  });
  add("slice_rows", {4, 3}, [](Graph&, Var x, std::uint64_t) { return nd::slice(x, 0, 1, 3); });
  add("slice_cols", {4, 5}, [](Graph&, Var x, std::uint64_t) { return nd::slice(x, 1, 2, 5); });
  add("embedding_lookup", {5, 3}, [](Graph&, Var x, std::uint64_t) {
    const int ids[] = {4, 0, 4, 2};
    return nd::embedding_lookup(x, ids);
  });
  add("pick_log_softmax", {3, 5}, [](Graph&, Var x, std::uint64_t) {
    const int cols[] = {1, 4, 0};
    return nd::pick(nd::log_softmax(x), cols);
  }, -3.0, 3.0);
  add("softmax", {3, 5}, [](Graph&, Var x, std::uint64_t) { return nd::softmax(x); }, -3.0, 3.0);
  add("log_softmax", {3, 5}, [](Graph&, Var x, std::uint64_t) { return nd::log_softmax(x); }, -3.0, 3.0);
  add("layer_norm_x", {3, 6}, [](Graph& g, Var x, std::uint64_t s) {
    return nd::layer_norm(x, side(g, {6}, s), side(g, {6}, s + 1));
  });
  add("layer_norm_gamma", {6}, [](Graph& g, Var x, std::uint64_t s) {
    return nd::layer_norm(side(g, {3, 6}, s), x, side(g, {6}, s + 1));
  });
  add("layer_norm_beta", {6}, [](Graph& g, Var x, std::uint64_t s) {
    return nd::layer_norm(side(g, {3, 6}, s), side(g, {6}, s + 1), x);
  });
  add("dropout_eval", {3, 4}, [](Graph&, Var x, std::uint64_t) { return nd::dropout(x, 0.5); });
  add("attention_q", {3, 4}, [](Graph& g, Var x, std::uint64_t s) {
    return nd::scaled_dot_product(x, side(g, {5, 4}, s), side(g, {5, 3}, s + 1));
  });
  add("attention_k", {5, 4}, [](Graph& g, Var x, std::uint64_t s) {
    return nd::scaled_dot_product(side(g, {3, 4}, s), x, side(g, {5, 3}, s + 1));
  });
  add("attention_v", {5, 3}, [](Graph& g, Var x, std::uint64_t s) {
    return nd::scaled_dot_product(side(g, {3, 4}, s), side(g, {5, 4}, s + 1), x);
  });
  add("attention_causal", {4, 4}, [](Graph&, Var x, std::uint64_t) {
    return nd::scaled_dot_product(x, x, x, std::size_t{0});
  });
  add("attention_causal_offset", {2, 4}, [](Graph& g, Var x, std::uint64_t s) {
    return nd::scaled_dot_product(x, side(g, {5, 4}, s), side(g, {5, 2}, s + 1), std::size_t{3});
  });
  return cases;
}

// Worst relative error of one case over `trials` random inputs.
inline double check_op(const OpCase& c, std::size_t trials, std::uint64_t seed = 1) {
  double worst = 0.0;
  nd::Rng rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    const nd::Array x = random_array(c.input_shape, rng, c.lo, c.hi);
    const std::uint64_t side_seed = 1000 + t;
    const double e = nd::grad_check(
        [&](nd::Graph& g, nd::Var v) { return weighted_sum(g, c.build(g, v, side_seed), 7 + t); }, x);
    worst = std::max(worst, e);
  }
  return worst;
}

}  // namespace wugbench::toy
