#include "wugbench/nd/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wugbench/error.hpp"
#include "wugbench/nd/rng.hpp"

namespace wugbench::nd {
namespace {

double relative_error(double analytic, double numeric) {
  const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-6});
  return std::abs(analytic - numeric) / denom;
}

double evaluate(const ScalarFn& f, const Array& x) {
  Graph g(false);
  const Var out = f(g, g.constant(x));
  if (out.value().size() != 1) {
    throw ContractError("grad_check: function returned shape " + shape_string(out.value().shape()));
  }
  return out.value()[0];
}

}  // namespace

double grad_check(const ScalarFn& f, const Array& x, double h) {
  Graph g;
  const Var input = g.input(x);
  const Var out = f(g, input);
  if (out.value().size() != 1) {
    throw ContractError("grad_check: function returned shape " + shape_string(out.value().shape()));
  }
  g.backward(out);
  const Array analytic = g.grad(input).empty() ? Array(x.shape(), 0.0) : g.grad(input);

  double worst = 0.0;
  Array probe = x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double original = probe[i];
    probe[i] = original + h;
    const double up = evaluate(f, probe);
    probe[i] = original - h;
    const double down = evaluate(f, probe);
    probe[i] = original;
    const double numeric = (up - down) / (2.0 * h);
    worst = std::max(worst, relative_error(analytic[i], numeric));
  }
  return worst;
}

double grad_check_parameter(const std::function<double()>& loss_value, const std::function<void()>& loss_backward,
                            Parameter& parameter, double h, std::size_t max_entries, std::uint64_t seed) {
  parameter.zero_grad();
  loss_backward();
  const Array analytic = parameter.grad();

  std::vector<std::size_t> entries(parameter.value().size());
  std::iota(entries.begin(), entries.end(), std::size_t{0});
  if (max_entries && entries.size() > max_entries) {
    Rng rng(seed);
    for (std::size_t i = 0; i < max_entries; ++i) std::swap(entries[i], entries[i + rng.below(entries.size() - i)]);
    entries.resize(max_entries);
  }

  double worst = 0.0;
  Array& value = parameter.value();
  for (std::size_t i : entries) {
    const double original = value[i];
    value[i] = original + h;
    const double up = loss_value();
    value[i] = original - h;
    const double down = loss_value();
    value[i] = original;
    worst = std::max(worst, relative_error(analytic[i], (up - down) / (2.0 * h)));
  }
  return worst;
}

double grad_check_directional(const std::function<double()>& loss_value, const std::function<void()>& loss_backward,
                              std::span<Parameter* const> parameters, double h, std::uint64_t seed) {
  for (Parameter* p : parameters) p->zero_grad();
  loss_backward();

  Rng rng(seed);
  std::vector<Array> direction;
  double analytic = 0.0;
  for (Parameter* p : parameters) {
    Array u(p->value().shape());
    for (std::size_t i = 0; i < u.size(); ++i) {
      u[i] = rng.normal();
      analytic += p->grad()[i] * u[i];
    }
    direction.push_back(std::move(u));
  }

  auto shift = [&](double amount) {
    for (std::size_t k = 0; k < parameters.size(); ++k) {
      Array& value = parameters[k]->value();
      for (std::size_t i = 0; i < value.size(); ++i) value[i] += amount * direction[k][i];
    }
  };
  const std::vector<Array> saved = [&] {
    std::vector<Array> out;
    for (Parameter* p : parameters) out.push_back(p->value());
    return out;
  }();
  shift(h);
  const double up = loss_value();
  for (std::size_t k = 0; k < parameters.size(); ++k) parameters[k]->value() = saved[k];
  shift(-h);
  const double down = loss_value();
  for (std::size_t k = 0; k < parameters.size(); ++k) parameters[k]->value() = saved[k];
  return relative_error(analytic, (up - down) / (2.0 * h));
}

}  // namespace wugbench::nd
