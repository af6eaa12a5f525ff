#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace wugbench::nd {

// Seeded generator with a build-independent stream. The engine is
// std::mt19937_64, whose output sequence is fixed by the standard; the
// distributions are implemented here because the standard library ones are
// implementation-defined.
//
//   uniform()  = (next() >> 11) * 2^-53, in [0, 1)
//   normal()   = Box-Muller on two uniforms, second variate cached
//   below(n)   = rejection sampling on the top bits, unbiased
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  double normal(double mean, double stddev) { return mean + stddev * normal(); }
  std::size_t below(std::size_t n);

  // Independent child stream, e.g. one per epoch or per worker.
  Rng fork(std::uint64_t salt);

 private:
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace wugbench::nd
