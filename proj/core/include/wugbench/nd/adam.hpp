#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "wugbench/nd/array.hpp"
#include "wugbench/nd/graph.hpp"

namespace wugbench::nd {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Moments for one parameter set. `step` counts completed updates.
struct AdamState {
  AdamConfig config;
  std::vector<Array> first_moment;
  std::vector<Array> second_moment;
  std::size_t step = 0;
};

AdamState make_adam_state(std::span<const Array> params, AdamConfig config = {});

// One bias-corrected Adam update of `params` from `grads`:
//   m <- b1 m + (1-b1) g,  v <- b2 v + (1-b2) g^2
//   p <- p - lr * (m / (1-b1^t)) / (sqrt(v / (1-b2^t)) + eps)
void adam_step(std::span<Array> params, std::span<const Array> grads, AdamState& state);

// Scales all gradients so their joint L2 norm is at most `max_norm`.
// Returns the norm before clipping.
double clip_grad_norm(std::span<Parameter* const> params, double max_norm);

// Adam bound to a fixed list of Parameters; reads and clears their grads.
class Adam {
 public:
  Adam(std::vector<Parameter*> params, AdamConfig config = {});

  void step();
  void zero_grad();
  const AdamState& state() const noexcept { return state_; }
  std::span<Parameter* const> params() const noexcept { return params_; }

 private:
  std::vector<Parameter*> params_;
  AdamState state_;
};

}  // namespace wugbench::nd
