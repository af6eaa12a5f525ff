#pragma once

#include <cstddef>
#include <deque>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wugbench/nd/array.hpp"
#include "wugbench/nd/rng.hpp"

namespace wugbench::nd {

// A trainable leaf. Graphs read `value` and accumulate into `grad`; the
// optimizer owns the update.
class Parameter {
 public:
  Parameter(std::string name, Array value);

  const std::string& name() const noexcept { return name_; }
  Array& value() noexcept { return value_; }
  const Array& value() const noexcept { return value_; }
  Array& grad() noexcept { return grad_; }
  const Array& grad() const noexcept { return grad_; }
  void zero_grad() { grad_.fill(0.0); }

 private:
  std::string name_;
  Array value_;
  Array grad_;
};

class Graph;

// Handle to a node of one Graph. Cheap to copy; valid while the graph lives.
struct Var {
  Graph* graph = nullptr;
  std::size_t id = 0;

  const Array& value() const;
  const Shape& shape() const { return value().shape(); }
};

// Reverse-mode tape. Nodes are appended in evaluation order, so the id order
// is a topological order and backward() is a single reverse sweep.
//
// A graph built with `record == false` keeps only forward values; it is the
// inference mode used by decoding and scoring.
class Graph {
 public:
  explicit Graph(bool record = true) : record_(record) {}
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  bool recording() const noexcept { return record_; }

  // Dropout is active only while training mode is on and an rng is attached.
  void set_training(bool training, Rng* rng = nullptr) {
    training_ = training;
    rng_ = rng;
  }
  bool training() const noexcept { return training_ && rng_ != nullptr; }
  Rng& rng() { return *rng_; }

  Var constant(Array value);
  // A leaf whose gradient is kept in the graph (read it back with grad()).
  Var input(Array value);
  Var param(Parameter& parameter);

  const Array& value(Var v) const { return value_at(v.id); }
  const Array& grad(Var v) const;
  std::size_t size() const noexcept { return nodes_.size(); }

  // Seeds d(root)/d(root) = 1 and propagates to every leaf. Parameter
  // gradients and input-leaf gradients accumulate across calls; interior
  // gradients are recomputed.
  void backward(Var root);

  // --- used by op implementations ---
  using BackwardFn = std::function<void(Graph&, std::size_t)>;
  Var push(Array value, bool requires_grad, BackwardFn backward);
  bool requires_grad(Var v) const { return nodes_[v.id].requires_grad; }
  bool requires_grad_at(std::size_t id) const { return nodes_[id].requires_grad; }
  bool any_requires_grad(std::span<const Var> vars) const;
  Array& grad_ref(std::size_t id);
  const Array& grad_at(std::size_t id) const { return nodes_[id].grad; }
  const Array& value_at(std::size_t id) const {
    const Node& node = nodes_[id];
    return node.parameter ? node.parameter->value() : node.value;
  }

 private:
  struct Node {
    Array value;
    Array grad;
    BackwardFn backward;
    Parameter* parameter = nullptr;
    bool requires_grad = false;
    bool leaf = false;
  };

  bool record_;
  bool training_ = false;
  Rng* rng_ = nullptr;
  std::deque<Node> nodes_;
};

// ---------------------------------------------------------------------------
// Forward ops. Every op checks shapes and throws ShapeError naming the op and
// the offending shapes. Matrices are row-major; a rank-1 operand of length n
// broadcasts as a row where noted.

Var matmul(Var a, Var b);                 // [m,k] x [k,n] -> [m,n]
Var matmul_nt(Var a, Var b);              // [m,k] x [n,k]^T -> [m,n]
Var transpose(Var a);                     // rank 2 only

Var add(Var a, Var b);                    // b same shape, a row [n]/[1,n], or a scalar
Var sub(Var a, Var b);                    // same broadcasting as add
Var multiply(Var a, Var b);               // same broadcasting as add
Var scale(Var a, double factor);
Var negate(Var a);

Var tanh(Var a);
Var sigmoid(Var a);
Var relu(Var a);
Var exp(Var a);
Var log(Var a);                           // requires positive inputs

Var sum(Var a);                           // -> scalar
Var reshape(Var a, Shape shape);
Var concat(std::span<const Var> parts, std::size_t axis);
Var concat(std::initializer_list<Var> parts, std::size_t axis);
Var slice(Var a, std::size_t axis, std::size_t begin, std::size_t end);
Var embedding_lookup(Var table, std::span<const int> ids);   // [V,d] -> [len,d]
Var pick(Var a, std::span<const int> columns);               // a[i, columns[i]] -> [rows]

Var softmax(Var a);                       // along the last axis
Var log_softmax(Var a);                   // along the last axis
Var layer_norm(Var x, std::optional<Var> gamma, std::optional<Var> beta, double eps = 1e-5);
Var dropout(Var a, double p);             // identity unless the graph is training

// softmax(q k^T / sqrt(d) + mask) v. With `causal_offset`, query row i may
// only see key rows j <= i + offset (the offset is the number of cached
// positions that precede the first query). When `weights_out` is given the
// attention matrix is copied there.
Var scaled_dot_product(Var q, Var k, Var v, std::optional<std::size_t> causal_offset = std::nullopt,
                       Array* weights_out = nullptr);

}  // namespace wugbench::nd
