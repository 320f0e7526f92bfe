#pragma once

#include <cstddef>
#include <cstdint>

#include "expose/dataset.hpp"

namespace expose {

/// Gaussian RBF kernel k(x, y) = exp(-||x - y||^2 / (2 sigma^2)).
class RbfKernel {
 public:
  explicit RbfKernel(double sigma);

  double sigma() const { return sigma_; }
  double operator()(InputView x, InputView y) const;

 private:
  double sigma_;
};

/// Squared Euclidean distance by direct summation of squared differences.
double squared_distance(InputView x, InputView y);

double rbf_eval(InputView x, InputView y, double sigma);

/// Mean kernel similarity of `z` to every row of `data`. O(n d); this is the
/// reference every approximate score is checked against.
double exact_score(InputView z, const Dataset& data, double sigma);

/// Median pairwise Euclidean distance over at most `max_points` rows chosen
/// uniformly at random (all rows if fewer). Used as a bandwidth default.
double median_pairwise_distance(const Dataset& data, std::size_t max_points, std::uint64_t seed);

}  // namespace expose
