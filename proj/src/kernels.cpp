#include "expose/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "expose/random.hpp"

namespace expose {

namespace {

void require_bandwidth(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument("RBF bandwidth must be positive and finite");
  }
}

}  // namespace

RbfKernel::RbfKernel(double sigma) : sigma_(sigma) { require_bandwidth(sigma); }

double RbfKernel::operator()(InputView x, InputView y) const {
  return std::exp(-0.5 * squared_distance(x, y) / (sigma_ * sigma_));
}

double squared_distance(InputView x, InputView y) {
  require_same_dim(x.size(), y.size(), "squared_distance");
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double diff = x[i] - y[i];
    acc += diff * diff;
  }
  if (!std::isfinite(acc)) {
    require_finite(x, "squared_distance");
    require_finite(y, "squared_distance");
  }
  return acc;
}

double rbf_eval(InputView x, InputView y, double sigma) {
  require_same_dim(x.size(), y.size(), "rbf_eval");
  require_finite(x, "rbf_eval");
  require_finite(y, "rbf_eval");
  return RbfKernel(sigma)(x, y);
}

double exact_score(InputView z, const Dataset& data, double sigma) {
  if (data.empty()) throw std::invalid_argument("exact_score: empty data");
  require_same_dim(data.dim(), z.size(), "exact_score");
  require_finite(z, "exact_score");
  const RbfKernel kernel(sigma);
  double acc = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) acc += kernel(z, data[i]);
  return acc / static_cast<double>(data.size());
}

double median_pairwise_distance(const Dataset& data, std::size_t max_points, std::uint64_t seed) {
  if (data.size() < 2) throw std::invalid_argument("median_pairwise_distance: need at least two rows");
  std::vector<std::size_t> rows;
  if (data.size() > max_points) {
    Rng rng(seed);
    rows = rng.sample_without_replacement(data.size(), std::max<std::size_t>(max_points, 2));
  } else {
    rows.resize(data.size());
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  }
  std::vector<double> dist;
  dist.reserve(rows.size() * (rows.size() - 1) / 2);
  for (std::size_t a = 0; a < rows.size(); ++a) {
    for (std::size_t b = a + 1; b < rows.size(); ++b) {
      dist.push_back(std::sqrt(squared_distance(data[rows[a]], data[rows[b]])));
    }
  }
  const auto mid = dist.begin() + static_cast<std::ptrdiff_t>(dist.size() / 2);
  std::nth_element(dist.begin(), mid, dist.end());
  double median = *mid;
  if (dist.size() % 2 == 0) {
    median = 0.5 * (median + *std::max_element(dist.begin(), mid));
  }
  if (!(median > 0.0)) throw std::invalid_argument("median_pairwise_distance: all sampled points coincide");
  return median;
}

}  // namespace expose
