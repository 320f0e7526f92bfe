#pragma once

#include <array>

namespace expose::nemenyi {

// Critical values q_alpha for the Nemenyi test: upper-alpha quantiles of the
// Studentized range distribution with k groups and infinite degrees of
// freedom, divided by sqrt(2).
//
// Generated with
//   scipy.stats.studentized_range.ppf(1 - alpha, k, inf) / sqrt(2)
// for k = 2..10 and rounded to 4 decimals. They agree to within 0.001 with
// the three-decimal tables in common use (e.g. 2.728 for k = 5, alpha = 0.05).
// k = 2 reduces to the two-sided normal quantile (1.9600, 1.6449).

inline constexpr int kMinAlgorithms = 2;
inline constexpr int kMaxAlgorithms = 10;

inline constexpr std::array<double, 9> kQ05 = {
    1.9600, 2.3437, 2.5690, 2.7278, 2.8497, 2.9483, 3.0309, 3.1017, 3.1637,
};

inline constexpr std::array<double, 9> kQ10 = {
    1.6449, 2.0523, 2.2913, 2.4595, 2.5885, 2.6927, 2.7799, 2.8546, 2.9199,
};

}  // namespace expose::nemenyi
