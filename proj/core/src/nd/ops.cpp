#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "wugbench/error.hpp"
#include "wugbench/nd/graph.hpp"

namespace wugbench::nd {
namespace {

bool needs(const Graph& g, std::size_t id) { return g.requires_grad_at(id); }

[[noreturn]] void shape_fail(const char* op, const Shape& a, const Shape& b) {
  throw ShapeError(std::string(op) + ": incompatible shapes " + shape_string(a) + " and " + shape_string(b));
}

[[noreturn]] void shape_fail(const char* op, const Shape& a, const std::string& why) {
  throw ShapeError(std::string(op) + ": shape " + shape_string(a) + " " + why);
}

Graph& graph_of(Var a, Var b) {
  if (a.graph != b.graph) throw ContractError("operands belong to different graphs");
  return *a.graph;
}

enum class Broadcast { kSame, kRow, kScalar };

Broadcast broadcast_kind(const char* op, const Array& a, const Array& b) {
  if (a.shape() == b.shape()) return Broadcast::kSame;
  if (b.size() == 1) return Broadcast::kScalar;
  if (b.rows() == 1 && b.cols() == a.cols() && a.rank() >= 1 && b.rank() <= 2) return Broadcast::kRow;
  if (a.size() == b.size() && a.rows() == b.rows() && a.cols() == b.cols()) return Broadcast::kSame;
  shape_fail(op, a.shape(), b.shape());
}

// Reduces an upstream gradient shaped like `a` onto the broadcast operand.
void accumulate_broadcast(Broadcast kind, const RowMatrix& upstream, Array& target) {
  switch (kind) {
    case Broadcast::kSame:
      target.matrix() += upstream;
      break;
    case Broadcast::kRow:
      target.matrix() += upstream.colwise().sum();
      break;
    case Broadcast::kScalar:
      target[0] += upstream.sum();
      break;
  }
}

template <typename Combine>
RowMatrix combine(Broadcast kind, const Array& a, const Array& b, Combine f) {
  RowMatrix out(a.rows(), a.cols());
  const auto am = a.matrix();
  const auto bm = b.matrix();
  for (Eigen::Index r = 0; r < out.rows(); ++r) {
    for (Eigen::Index c = 0; c < out.cols(); ++c) {
      double bv = 0.0;
      switch (kind) {
        case Broadcast::kSame: bv = bm(r, c); break;
        case Broadcast::kRow: bv = bm(0, c); break;
        case Broadcast::kScalar: bv = b[0]; break;
      }
      out(r, c) = f(am(r, c), bv);
    }
  }
  return out;
}

Array from_matrix(const Shape& shape, const RowMatrix& m) {
  Array out(shape);
  out.matrix() = m;
  return out;
}

template <typename Forward, typename Derivative>
Var unary(Var a, Forward f, Derivative df) {
  Graph& g = *a.graph;
  const Array& x = a.value();
  Array y(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = f(x[i]);
  return g.push(std::move(y), g.requires_grad(a), [ia = a.id, df](Graph& g, std::size_t self) {
    const Array& up = g.grad_at(self);
    const Array& x = g.value_at(ia);
    const Array& y = g.value_at(self);
    Array& target = g.grad_ref(ia);
    for (std::size_t i = 0; i < x.size(); ++i) target[i] += up[i] * df(x[i], y[i]);
  });
}

}  // namespace

Var matmul(Var a, Var b) {
  Graph& g = graph_of(a, b);
  const Array& A = a.value();
  const Array& B = b.value();
  if (A.rank() > 2 || B.rank() != 2 || A.cols() != B.rows()) shape_fail("matmul", A.shape(), B.shape());
  Shape shape = A.rank() == 2 ? Shape{A.rows(), B.cols()} : Shape{B.cols()};
  Array C(shape);
  C.matrix().noalias() = A.matrix() * B.matrix();
  const Var parts[] = {a, b};
  return g.push(std::move(C), g.any_requires_grad(parts), [ia = a.id, ib = b.id](Graph& g, std::size_t self) {
    const auto up = g.grad_at(self).matrix();
    if (needs(g, ia)) g.grad_ref(ia).matrix().noalias() += up * g.value_at(ib).matrix().transpose();
    if (needs(g, ib)) g.grad_ref(ib).matrix().noalias() += g.value_at(ia).matrix().transpose() * up;
  });
}

Var matmul_nt(Var a, Var b) {
  Graph& g = graph_of(a, b);
  const Array& A = a.value();
  const Array& B = b.value();
  if (A.rank() > 2 || B.rank() > 2 || A.cols() != B.cols()) shape_fail("matmul_nt", A.shape(), B.shape());
  Array C(Shape{A.rows(), B.rows()});
  C.matrix().noalias() = A.matrix() * B.matrix().transpose();
  const Var parts[] = {a, b};
  return g.push(std::move(C), g.any_requires_grad(parts), [ia = a.id, ib = b.id](Graph& g, std::size_t self) {
    const auto up = g.grad_at(self).matrix();
    if (needs(g, ia)) g.grad_ref(ia).matrix().noalias() += up * g.value_at(ib).matrix();
    if (needs(g, ib)) g.grad_ref(ib).matrix().noalias() += up.transpose() * g.value_at(ia).matrix();
  });
}

Var transpose(Var a) {
  Graph& g = *a.graph;
  const Array& A = a.value();
  if (A.rank() != 2) shape_fail("transpose", A.shape(), "is not a matrix");
  Array T(Shape{A.cols(), A.rows()});
  T.matrix() = A.matrix().transpose();
  return g.push(std::move(T), g.requires_grad(a), [ia = a.id](Graph& g, std::size_t self) {
    g.grad_ref(ia).matrix() += g.grad_at(self).matrix().transpose();
  });
}

Var add(Var a, Var b) {
  if (a.value().size() < b.value().size()) std::swap(a, b);
  Graph& g = graph_of(a, b);
  const Broadcast kind = broadcast_kind("add", a.value(), b.value());
  Array out = from_matrix(a.shape(), combine(kind, a.value(), b.value(), [](double x, double y) { return x + y; }));
  const Var parts[] = {a, b};
  return g.push(std::move(out), g.any_requires_grad(parts), [ia = a.id, ib = b.id, kind](Graph& g, std::size_t self) {
    const RowMatrix up = g.grad_at(self).matrix();
    if (needs(g, ia)) g.grad_ref(ia).matrix() += up;
    if (needs(g, ib)) accumulate_broadcast(kind, up, g.grad_ref(ib));
  });
}

Var sub(Var a, Var b) {
  if (a.value().size() < b.value().size()) return negate(sub(b, a));
  Graph& g = graph_of(a, b);
  const Broadcast kind = broadcast_kind("sub", a.value(), b.value());
  Array out = from_matrix(a.shape(), combine(kind, a.value(), b.value(), [](double x, double y) { return x - y; }));
  const Var parts[] = {a, b};
  return g.push(std::move(out), g.any_requires_grad(parts), [ia = a.id, ib = b.id, kind](Graph& g, std::size_t self) {
    const RowMatrix up = g.grad_at(self).matrix();
    if (needs(g, ia)) g.grad_ref(ia).matrix() += up;
    if (needs(g, ib)) accumulate_broadcast(kind, -up, g.grad_ref(ib));
  });
}

Var multiply(Var a, Var b) {
  if (a.value().size() < b.value().size()) std::swap(a, b);
  Graph& g = graph_of(a, b);
  const Broadcast kind = broadcast_kind("multiply", a.value(), b.value());
  Array out = from_matrix(a.shape(), combine(kind, a.value(), b.value(), [](double x, double y) { return x * y; }));
  const Var parts[] = {a, b};
  return g.push(std::move(out), g.any_requires_grad(parts), [ia = a.id, ib = b.id, kind](Graph& g, std::size_t self) {
    const Array& up = g.grad_at(self);
    const Array& A = g.value_at(ia);
    const Array& B = g.value_at(ib);
    if (needs(g, ia)) {
      g.grad_ref(ia).matrix() += combine(kind, up, B, [](double u, double y) { return u * y; });
    }
    if (needs(g, ib)) {
      const RowMatrix prod = up.matrix().cwiseProduct(A.matrix());
      accumulate_broadcast(kind, prod, g.grad_ref(ib));
    }
  });
}

Var scale(Var a, double factor) {
  return unary(a, [factor](double x) { return factor * x; }, [factor](double, double) { return factor; });
}

Var negate(Var a) { return scale(a, -1.0); }

Var tanh(Var a) {
  return unary(a, [](double x) { return std::tanh(x); }, [](double, double y) { return 1.0 - y * y; });
}

Var sigmoid(Var a) {
  return unary(
      a,
      [](double x) {
        if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
        const double e = std::exp(x);
        return e / (1.0 + e);
      },
      [](double, double y) { return y * (1.0 - y); });
}

Var relu(Var a) {
  return unary(a, [](double x) { return x > 0.0 ? x : 0.0; }, [](double x, double) { return x > 0.0 ? 1.0 : 0.0; });
}

Var exp(Var a) {
  return unary(a, [](double x) { return std::exp(x); }, [](double, double y) { return y; });
}

Var log(Var a) {
  for (double x : a.value().values()) {
    if (!(x > 0.0)) throw ContractError("log: non-positive input");
  }
  return unary(a, [](double x) { return std::log(x); }, [](double x, double) { return 1.0 / x; });
}

Var sum(Var a) {
  Graph& g = *a.graph;
  Array out = Array::scalar(a.value().matrix().sum());
  return g.push(std::move(out), g.requires_grad(a), [ia = a.id](Graph& g, std::size_t self) {
    const double up = g.grad_at(self)[0];
    g.grad_ref(ia).matrix().array() += up;
  });
}

Var reshape(Var a, Shape shape) {
  Graph& g = *a.graph;
  Array out = a.value().reshaped(std::move(shape));
  return g.push(std::move(out), g.requires_grad(a), [ia = a.id](Graph& g, std::size_t self) {
    Array& target = g.grad_ref(ia);
    const Array& up = g.grad_at(self);
    for (std::size_t i = 0; i < up.size(); ++i) target[i] += up[i];
  });
}

Var concat(std::initializer_list<Var> parts, std::size_t axis) {
  return concat(std::span<const Var>(parts.begin(), parts.size()), axis);
}

Var concat(std::span<const Var> parts, std::size_t axis) {
  if (parts.empty()) throw ShapeError("concat: no operands");
  if (axis > 1) throw ShapeError("concat: axis must be 0 or 1");
  Graph& g = *parts.front().graph;
  bool all_vectors = true;
  std::size_t total = 0;
  const std::size_t fixed = axis == 0 ? parts.front().value().cols() : parts.front().value().rows();
  for (Var p : parts) {
    if (p.graph != &g) throw ContractError("concat: operands belong to different graphs");
    const Array& v = p.value();
    if (v.rank() > 2) shape_fail("concat", v.shape(), "has rank > 2");
    all_vectors = all_vectors && v.rank() <= 1;
    const std::size_t other = axis == 0 ? v.cols() : v.rows();
    if (other != fixed) shape_fail("concat", parts.front().shape(), v.shape());
    total += axis == 0 ? v.rows() : v.cols();
  }
  Shape shape;
  if (axis == 0) {
    shape = {total, fixed};
  } else if (all_vectors) {
    shape = {total};
  } else {
    shape = {fixed, total};
  }
  Array out(shape);
  auto om = out.matrix();
  std::vector<std::size_t> offsets;
  std::size_t offset = 0;
  for (Var p : parts) {
    const auto pm = p.value().matrix();
    offsets.push_back(offset);
    if (axis == 0) {
      om.middleRows(offset, pm.rows()) = pm;
      offset += pm.rows();
    } else {
      om.middleCols(offset, pm.cols()) = pm;
      offset += pm.cols();
    }
  }
  std::vector<std::size_t> ids;
  for (Var p : parts) ids.push_back(p.id);
  return g.push(std::move(out), g.any_requires_grad(parts),
                [ids = std::move(ids), offsets = std::move(offsets), axis](Graph& g, std::size_t self) {
                  const auto up = g.grad_at(self).matrix();
                  for (std::size_t i = 0; i < ids.size(); ++i) {
                    if (!needs(g, ids[i])) continue;
                    auto target = g.grad_ref(ids[i]).matrix();
                    if (axis == 0) {
                      target += up.middleRows(offsets[i], target.rows());
                    } else {
                      target += up.middleCols(offsets[i], target.cols());
                    }
                  }
                });
}

Var slice(Var a, std::size_t axis, std::size_t begin, std::size_t end) {
  Graph& g = *a.graph;
  const Array& A = a.value();
  if (axis > 1 || A.rank() > 2) throw ShapeError("slice: axis must be 0 or 1 on rank <= 2");
  const std::size_t extent = axis == 0 ? A.rows() : A.cols();
  if (begin > end || end > extent) {
    throw ShapeError("slice: range [" + std::to_string(begin) + ", " + std::to_string(end) + ") out of bounds for shape " +
                     shape_string(A.shape()));
  }
  Shape shape;
  if (axis == 0) {
    shape = {end - begin, A.cols()};
  } else {
    shape = A.rank() <= 1 ? Shape{end - begin} : Shape{A.rows(), end - begin};
  }
  Array out(shape);
  if (axis == 0) {
    out.matrix() = A.matrix().middleRows(begin, end - begin);
  } else {
    out.matrix() = A.matrix().middleCols(begin, end - begin);
  }
  return g.push(std::move(out), g.requires_grad(a), [ia = a.id, axis, begin](Graph& g, std::size_t self) {
    const auto up = g.grad_at(self).matrix();
    auto target = g.grad_ref(ia).matrix();
    if (axis == 0) {
      target.middleRows(begin, up.rows()) += up;
    } else {
      target.middleCols(begin, up.cols()) += up;
    }
  });
}

Var embedding_lookup(Var table, std::span<const int> ids) {
  Graph& g = *table.graph;
  const Array& T = table.value();
  if (T.rank() != 2) shape_fail("embedding_lookup", T.shape(), "is not a matrix");
  Array out(Shape{ids.size(), T.cols()});
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] < 0 || static_cast<std::size_t>(ids[i]) >= T.rows()) {
      throw ShapeError("embedding_lookup: id " + std::to_string(ids[i]) + " out of range for table " +
                       shape_string(T.shape()));
    }
    out.matrix().row(i) = T.matrix().row(ids[i]);
  }
  std::vector<int> idv(ids.begin(), ids.end());
  return g.push(std::move(out), g.requires_grad(table), [it = table.id, idv = std::move(idv)](Graph& g, std::size_t self) {
    const auto up = g.grad_at(self).matrix();
    auto target = g.grad_ref(it).matrix();
    for (std::size_t i = 0; i < idv.size(); ++i) target.row(idv[i]) += up.row(i);
  });
}

Var pick(Var a, std::span<const int> columns) {
  Graph& g = *a.graph;
  const Array& A = a.value();
  if (columns.size() != A.rows()) {
    throw ShapeError("pick: " + std::to_string(columns.size()) + " indices for shape " + shape_string(A.shape()));
  }
  Array out(Shape{A.rows()});
  for (std::size_t r = 0; r < A.rows(); ++r) {
    if (columns[r] < 0 || static_cast<std::size_t>(columns[r]) >= A.cols()) {
      throw ShapeError("pick: column " + std::to_string(columns[r]) + " out of range for shape " +
                       shape_string(A.shape()));
    }
    out[r] = A.at(r, columns[r]);
  }
  std::vector<int> cols(columns.begin(), columns.end());
  return g.push(std::move(out), g.requires_grad(a), [ia = a.id, cols = std::move(cols)](Graph& g, std::size_t self) {
    const Array& up = g.grad_at(self);
    Array& target = g.grad_ref(ia);
    for (std::size_t r = 0; r < cols.size(); ++r) target.at(r, cols[r]) += up[r];
  });
}

Var softmax(Var a) {
  Graph& g = *a.graph;
  const Array& A = a.value();
  Array out(A.shape());
  auto om = out.matrix();
  const auto am = A.matrix();
  for (Eigen::Index r = 0; r < am.rows(); ++r) {
    const double mx = am.row(r).maxCoeff();
    om.row(r) = (am.row(r).array() - mx).exp();
    om.row(r) /= om.row(r).sum();
  }
  return g.push(std::move(out), g.requires_grad(a), [ia = a.id](Graph& g, std::size_t self) {
    const auto up = g.grad_at(self).matrix();
    const auto y = g.value_at(self).matrix();
    auto target = g.grad_ref(ia).matrix();
    for (Eigen::Index r = 0; r < y.rows(); ++r) {
      const double dot = up.row(r).dot(y.row(r));
      target.row(r).array() += y.row(r).array() * (up.row(r).array() - dot);
    }
  });
}

Var log_softmax(Var a) {
  Graph& g = *a.graph;
  const Array& A = a.value();
  Array out(A.shape());
  auto om = out.matrix();
  const auto am = A.matrix();
  for (Eigen::Index r = 0; r < am.rows(); ++r) {
    const double mx = am.row(r).maxCoeff();
    const double lse = mx + std::log((am.row(r).array() - mx).exp().sum());
    om.row(r) = am.row(r).array() - lse;
  }
  return g.push(std::move(out), g.requires_grad(a), [ia = a.id](Graph& g, std::size_t self) {
    const auto up = g.grad_at(self).matrix();
    const auto y = g.value_at(self).matrix();
    auto target = g.grad_ref(ia).matrix();
    for (Eigen::Index r = 0; r < y.rows(); ++r) {
      const double total = up.row(r).sum();
      target.row(r).array() += up.row(r).array() - y.row(r).array().exp() * total;
    }
  });
}

Var layer_norm(Var x, std::optional<Var> gamma, std::optional<Var> beta, double eps) {
  Graph& g = *x.graph;
  const Array& X = x.value();
  const std::size_t n = X.cols();
  if (gamma && gamma->value().size() != n) shape_fail("layer_norm", X.shape(), gamma->shape());
  if (beta && beta->value().size() != n) shape_fail("layer_norm", X.shape(), beta->shape());

  Array normalized(X.shape());
  Array inv_std(Shape{X.rows()});
  const auto xm = X.matrix();
  auto nm = normalized.matrix();
  for (Eigen::Index r = 0; r < xm.rows(); ++r) {
    const double mean = xm.row(r).mean();
    const double var = (xm.row(r).array() - mean).square().mean();
    inv_std[r] = 1.0 / std::sqrt(var + eps);
    nm.row(r) = (xm.row(r).array() - mean) * inv_std[r];
  }
  Array out = normalized;
  if (gamma) {
    const auto gm = gamma->value().matrix();
    for (Eigen::Index r = 0; r < nm.rows(); ++r) out.matrix().row(r).array() *= gm.row(0).array();
  }
  if (beta) {
    const auto bm = beta->value().matrix();
    for (Eigen::Index r = 0; r < nm.rows(); ++r) out.matrix().row(r) += bm.row(0);
  }

  std::vector<Var> operands{x};
  if (gamma) operands.push_back(*gamma);
  if (beta) operands.push_back(*beta);
  const std::size_t ig = gamma ? gamma->id : SIZE_MAX;
  const std::size_t ib = beta ? beta->id : SIZE_MAX;
  return g.push(std::move(out), g.any_requires_grad(operands),
                [ix = x.id, ig, ib, normalized = std::move(normalized), inv_std = std::move(inv_std)](Graph& g,
                                                                                                      std::size_t self) {
                  const auto up = g.grad_at(self).matrix();
                  const auto xhat = normalized.matrix();
                  if (ib != SIZE_MAX && needs(g, ib)) g.grad_ref(ib).matrix() += up.colwise().sum();
                  if (ig != SIZE_MAX && needs(g, ig)) {
                    g.grad_ref(ig).matrix() += up.cwiseProduct(xhat).colwise().sum();
                  }
                  if (!needs(g, ix)) return;
                  RowMatrix dxhat = up;
                  if (ig != SIZE_MAX) {
                    const auto gm = g.value_at(ig).matrix();
                    for (Eigen::Index r = 0; r < dxhat.rows(); ++r) dxhat.row(r).array() *= gm.row(0).array();
                  }
                  auto target = g.grad_ref(ix).matrix();
                  for (Eigen::Index r = 0; r < dxhat.rows(); ++r) {
                    const double mean_d = dxhat.row(r).mean();
                    const double mean_dx = dxhat.row(r).dot(xhat.row(r)) / static_cast<double>(dxhat.cols());
                    target.row(r).array() +=
                        inv_std[r] * (dxhat.row(r).array() - mean_d - xhat.row(r).array() * mean_dx);
                  }
                });
}

Var dropout(Var a, double p) {
  if (p < 0.0 || p >= 1.0) throw ContractError("dropout: rate must be in [0, 1)");
  Graph& g = *a.graph;
  if (!g.training() || p == 0.0) return a;
  const Array& A = a.value();
  Array mask(A.shape());
  const double keep_scale = 1.0 / (1.0 - p);
  for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = g.rng().uniform() >= p ? keep_scale : 0.0;
  Array out(A.shape());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = A[i] * mask[i];
  return g.push(std::move(out), g.requires_grad(a), [ia = a.id, mask = std::move(mask)](Graph& g, std::size_t self) {
    const Array& up = g.grad_at(self);
    Array& target = g.grad_ref(ia);
    for (std::size_t i = 0; i < up.size(); ++i) target[i] += up[i] * mask[i];
  });
}

Var scaled_dot_product(Var q, Var k, Var v, std::optional<std::size_t> causal_offset, Array* weights_out) {
  Graph& g = graph_of(q, k);
  graph_of(k, v);
  const Array& Q = q.value();
  const Array& K = k.value();
  const Array& V = v.value();
  if (Q.cols() != K.cols()) shape_fail("scaled_dot_product", Q.shape(), K.shape());
  if (K.rows() != V.rows()) shape_fail("scaled_dot_product", K.shape(), V.shape());
  const double scale_factor = 1.0 / std::sqrt(static_cast<double>(Q.cols()));

  RowMatrix weights = scale_factor * (Q.matrix() * K.matrix().transpose());
  for (Eigen::Index r = 0; r < weights.rows(); ++r) {
    if (causal_offset) {
      const Eigen::Index visible = std::min<Eigen::Index>(weights.cols(), r + 1 + static_cast<Eigen::Index>(*causal_offset));
      if (visible <= 0) throw ShapeError("scaled_dot_product: query row sees no keys");
      for (Eigen::Index c = visible; c < weights.cols(); ++c) weights(r, c) = -std::numeric_limits<double>::infinity();
    }
    const double mx = weights.row(r).maxCoeff();
    weights.row(r) = (weights.row(r).array() - mx).exp();
    weights.row(r) /= weights.row(r).sum();
  }
  Array out(Shape{Q.rows(), V.cols()});
  out.matrix().noalias() = weights * V.matrix();
  if (weights_out) {
    *weights_out = Array(Shape{static_cast<std::size_t>(weights.rows()), static_cast<std::size_t>(weights.cols())});
    weights_out->matrix() = weights;
  }
  const Var parts[] = {q, k, v};
  return g.push(std::move(out), g.any_requires_grad(parts),
                [iq = q.id, ik = k.id, iv = v.id, weights = std::move(weights), scale_factor](Graph& g,
                                                                                            std::size_t self) {
                  const auto up = g.grad_at(self).matrix();
                  if (needs(g, iv)) g.grad_ref(iv).matrix().noalias() += weights.transpose() * up;
                  if (!needs(g, iq) && !needs(g, ik)) return;
                  const RowMatrix dweights = up * g.value_at(iv).matrix().transpose();
                  RowMatrix dscores = weights.cwiseProduct(dweights);
                  for (Eigen::Index r = 0; r < dscores.rows(); ++r) {
                    dscores.row(r) -= weights.row(r) * dscores.row(r).sum();
                  }
                  dscores *= scale_factor;
                  if (needs(g, iq)) g.grad_ref(iq).matrix().noalias() += dscores * g.value_at(ik).matrix();
                  if (needs(g, ik)) g.grad_ref(ik).matrix().noalias() += dscores.transpose() * g.value_at(iq).matrix();
                });
}

}  // namespace wugbench::nd
