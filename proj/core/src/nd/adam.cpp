#include "wugbench/nd/adam.hpp"

#include <cmath>

#include "wugbench/error.hpp"

namespace wugbench::nd {

AdamState make_adam_state(std::span<const Array> params, AdamConfig config) {
  AdamState state;
  state.config = config;
  for (const Array& p : params) {
    state.first_moment.emplace_back(p.shape(), 0.0);
    state.second_moment.emplace_back(p.shape(), 0.0);
  }
  return state;
}

void adam_step(std::span<Array> params, std::span<const Array> grads, AdamState& state) {
  if (params.size() != grads.size() || params.size() != state.first_moment.size()) {
    throw ShapeError("adam_step: " + std::to_string(params.size()) + " params, " + std::to_string(grads.size()) +
                     " grads, " + std::to_string(state.first_moment.size()) + " moment slots");
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (params[i].shape() != grads[i].shape() || params[i].shape() != state.first_moment[i].shape()) {
      throw ShapeError("adam_step: parameter " + shape_string(params[i].shape()) + " vs gradient " +
                       shape_string(grads[i].shape()));
    }
  }

  const AdamConfig& c = state.config;
  state.step += 1;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(c.beta1, t);
  const double correction2 = 1.0 - std::pow(c.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    double* p = params[i].data();
    const double* g = grads[i].data();
    double* m = state.first_moment[i].data();
    double* v = state.second_moment[i].data();
    for (std::size_t j = 0, n = params[i].size(); j < n; ++j) {
      m[j] = c.beta1 * m[j] + (1.0 - c.beta1) * g[j];
      v[j] = c.beta2 * v[j] + (1.0 - c.beta2) * g[j] * g[j];
      const double m_hat = m[j] / correction1;
      const double v_hat = v[j] / correction2;
      p[j] -= c.learning_rate * m_hat / (std::sqrt(v_hat) + c.epsilon);
    }
  }
}

double clip_grad_norm(std::span<Parameter* const> params, double max_norm) {
  double total = 0.0;
  for (const Parameter* p : params) total += p->grad().matrix().squaredNorm();
  const double norm = std::sqrt(total);
  if (max_norm > 0.0 && norm > max_norm) {
    const double factor = max_norm / (norm + 1e-12);
    for (Parameter* p : params) p->grad().matrix() *= factor;
  }
  return norm;
}

Adam::Adam(std::vector<Parameter*> params, AdamConfig config) : params_(std::move(params)) {
  std::vector<Array> shapes;
  shapes.reserve(params_.size());
  for (const Parameter* p : params_) shapes.emplace_back(p->value().shape());
  state_ = make_adam_state(shapes, config);
}

void Adam::step() {
  // Moves values in and out so adam_step can keep its span-of-arrays contract.
  std::vector<Array> values;
  std::vector<Array> grads;
  values.reserve(params_.size());
  grads.reserve(params_.size());
  for (Parameter* p : params_) {
    values.push_back(std::move(p->value()));
    grads.push_back(std::move(p->grad()));
  }
  try {
    adam_step(values, grads, state_);
  } catch (...) {
    for (std::size_t i = 0; i < params_.size(); ++i) {
      params_[i]->value() = std::move(values[i]);
      params_[i]->grad() = std::move(grads[i]);
    }
    throw;
  }
  for (std::size_t i = 0; i < params_.size(); ++i) {
    params_[i]->value() = std::move(values[i]);
    params_[i]->grad() = std::move(grads[i]);
  }
}

void Adam::zero_grad() {
  for (Parameter* p : params_) p->zero_grad();
}

}  // namespace wugbench::nd
