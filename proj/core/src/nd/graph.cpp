#include "wugbench/nd/graph.hpp"

#include <algorithm>

#include "wugbench/error.hpp"

namespace wugbench::nd {

Parameter::Parameter(std::string name, Array value)
    : name_(std::move(name)), value_(std::move(value)), grad_(value_.shape(), 0.0) {}

const Array& Var::value() const { return graph->value(*this); }

Var Graph::constant(Array value) {
  Node node;
  node.value = std::move(value);
  node.leaf = true;
  nodes_.push_back(std::move(node));
  return Var{this, nodes_.size() - 1};
}

Var Graph::input(Array value) {
  Node node;
  node.value = std::move(value);
  node.leaf = true;
  node.requires_grad = record_;
  nodes_.push_back(std::move(node));
  return Var{this, nodes_.size() - 1};
}

Var Graph::param(Parameter& parameter) {
  // Read in place: the parameter must not be updated while this graph lives.
  Node node;
  node.leaf = true;
  node.requires_grad = record_;
  node.parameter = &parameter;
  nodes_.push_back(std::move(node));
  return Var{this, nodes_.size() - 1};
}

Var Graph::push(Array value, bool requires_grad, BackwardFn backward) {
  Node node;
  node.value = std::move(value);
  node.requires_grad = record_ && requires_grad;
  if (node.requires_grad) node.backward = std::move(backward);
  nodes_.push_back(std::move(node));
  return Var{this, nodes_.size() - 1};
}

bool Graph::any_requires_grad(std::span<const Var> vars) const {
  return std::any_of(vars.begin(), vars.end(), [this](Var v) { return nodes_[v.id].requires_grad; });
}

Array& Graph::grad_ref(std::size_t id) {
  Node& node = nodes_[id];
  if (node.parameter) {
    Array& target = node.parameter->grad();
    if (target.size() != node.parameter->value().size()) target = Array(node.parameter->value().shape(), 0.0);
    return target;
  }
  if (node.grad.size() != node.value.size()) node.grad = Array(node.value.shape(), 0.0);
  return node.grad;
}

const Array& Graph::grad(Var v) const {
  static const Array kEmpty;
  const Node& node = nodes_[v.id];
  if (node.parameter) return node.parameter->grad();
  return node.grad.size() == node.value.size() ? node.grad : kEmpty;
}

void Graph::backward(Var root) {
  if (root.graph != this) throw ContractError("backward: root belongs to another graph");
  if (value(root).size() != 1) {
    throw ContractError("backward: root must be scalar, got shape " + shape_string(value(root).shape()));
  }
  if (!record_) throw ContractError("backward: graph was built without recording");

  for (std::size_t i = 0; i <= root.id; ++i) {
    Node& node = nodes_[i];
    if (!node.leaf && node.grad.size()) node.grad.fill(0.0);
  }
  if (!nodes_[root.id].requires_grad) return;

  grad_ref(root.id)[0] += 1.0;
  for (std::size_t i = root.id + 1; i-- > 0;) {
    Node& node = nodes_[i];
    if (!node.requires_grad || node.leaf || node.grad.size() == 0) continue;
    if (node.backward) node.backward(*this, i);
  }
}

}  // namespace wugbench::nd
