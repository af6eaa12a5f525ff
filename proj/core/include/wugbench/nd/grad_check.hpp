#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>

#include "wugbench/nd/array.hpp"
#include "wugbench/nd/graph.hpp"

namespace wugbench::nd {

// Builds a scalar from `x` inside the given graph.
using ScalarFn = std::function<Var(Graph&, Var)>;

// Compares reverse-mode gradients of f at x with central differences of
// step h. Returns max_i |analytic_i - numeric_i| / max(|analytic_i|, |numeric_i|, 1e-6).
// Throws ContractError if f is not scalar-valued.
double grad_check(const ScalarFn& f, const Array& x, double h = 1e-5);

// Same comparison against the gradient of a Parameter, for model losses.
// `loss` must rebuild its graph from the parameter's current value.
double grad_check_parameter(const std::function<double()>& loss_value,
                            const std::function<void()>& loss_backward, Parameter& parameter,
                            double h = 1e-5, std::size_t max_entries = 0, std::uint64_t seed = 0);

// Directional form over a whole parameter set: draws a Gaussian direction u
// from `seed` and compares sum(grad * u) with the central difference of the
// loss along u. Per-entry checks are ill-conditioned for entries whose true
// gradient is zero (a key bias under softmax, for example); a projection onto
// a random direction is not.
double grad_check_directional(const std::function<double()>& loss_value,
                              const std::function<void()>& loss_backward, std::span<Parameter* const> parameters,
                              double h = 1e-5, std::uint64_t seed = 0);

}  // namespace wugbench::nd
