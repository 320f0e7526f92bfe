#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "expose/dataset.hpp"
#include "expose/random.hpp"

namespace expose::testing {

inline Dataset gaussian_cloud(std::size_t n, std::size_t d, std::uint64_t seed, double scale = 1.0) {
  Rng rng(seed);
  Dataset out(d);
  std::vector<double> x(d);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& v : x) v = scale * rng.normal();
    out.push_back(x);
  }
  return out;
}

// Written independently of the library: expands the exponent term by term.
inline double reference_rbf(const std::vector<double>& x, const std::vector<double>& y, double sigma) {
  long double acc = 0.0L;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const long double diff = static_cast<long double>(x[i]) - y[i];
    acc += diff * diff;
  }
  return static_cast<double>(std::exp(-acc / (2.0L * sigma * sigma)));
}

inline std::vector<double> to_vec(InputView v) { return {v.begin(), v.end()}; }

inline double max_relative_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double scale = 0.0;
  for (double v : b) scale = std::max(scale, std::abs(v));
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return scale > 0.0 ? worst / scale : worst;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

}  // namespace expose::testing
