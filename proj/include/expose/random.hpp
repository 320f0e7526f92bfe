#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace expose {

/// Seeded random source whose output depends only on the seed.
///
/// The engine is std::mt19937_64, which the standard pins bit-for-bit. The
/// standard distributions are not pinned across library implementations, so
/// uniform and Gaussian variates are derived here from the raw engine output.
/// Model files store only an RKS seed and rely on this.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal (Marsaglia polar method).
  double normal();
  double normal(double mean, double stddev) { return mean + stddev * normal(); }
  bool bernoulli(double p) { return uniform() < p; }
  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);
  /// k distinct indices from [0, n), uniformly, in selection order.
  std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k);

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

}  // namespace expose
