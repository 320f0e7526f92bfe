#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "expose/dataset.hpp"
#include "expose/linalg.hpp"

namespace expose {

/// Area under the ROC curve with higher scores meaning "more normal":
/// the probability that a random normal instance outscores a random anomaly,
/// ties counted one half. Computed from midranks in O(n log n).
double auc(std::span<const double> scores, std::span<const Label> labels);

/// Confusion counts with `normal` as the positive class.
struct ConfusionMatrix {
  std::uint64_t tp = 0;  ///< normal predicted normal
  std::uint64_t fn = 0;  ///< normal predicted anomaly
  std::uint64_t tn = 0;  ///< anomaly predicted anomaly
  std::uint64_t fp = 0;  ///< anomaly predicted normal

  void add(Label truth, Label predicted);
};

/// 0.5 * TP/(TP+FN) + 0.5 * TN/(TN+FP). Both classes must be present.
double balanced_accuracy(std::uint64_t tp, std::uint64_t fn, std::uint64_t tn, std::uint64_t fp);
double balanced_accuracy(const ConfusionMatrix& cm);

/// Per-dataset ranks of k algorithms over m datasets (rank 1 = best).
class RankMatrix {
 public:
  RankMatrix(std::size_t datasets, std::size_t algorithms, std::vector<double> ranks);

  std::size_t datasets() const { return m_; }
  std::size_t algorithms() const { return k_; }
  double operator()(std::size_t dataset, std::size_t algorithm) const { return ranks_[dataset * k_ + algorithm]; }
  std::vector<double> average_ranks() const;

 private:
  std::size_t m_;
  std::size_t k_;
  std::vector<double> ranks_;
};

/// Ranks each row of an m x k metric matrix, higher metric = better rank,
/// tied values sharing the mean of the ranks they span.
RankMatrix rank_rows(const Matrix& metrics);

/// Thrown when chi2_F reaches m(k-1), where the Iman-Davenport statistic
/// has a zero denominator.
class SaturatedStatistic : public std::domain_error {
 public:
  explicit SaturatedStatistic(double chi2);
  double chi2() const { return chi2_; }

 private:
  double chi2_;
};

struct FriedmanResult {
  double chi2 = 0.0;            ///< Friedman chi-square
  double iman_davenport = 0.0;  ///< F_F
  std::size_t df_numerator = 0;    ///< k - 1
  std::size_t df_denominator = 0;  ///< (k - 1)(m - 1)
  RankMatrix ranks;
};

double friedman_chi2(const RankMatrix& ranks);
double iman_davenport(double chi2, std::size_t datasets, std::size_t algorithms);
FriedmanResult friedman(const Matrix& metrics);

/// q_alpha for the Nemenyi test; alpha must be 0.05 or 0.10, 2 <= k <= 10.
double nemenyi_q(std::size_t algorithms, double alpha);
/// CD = q_alpha * sqrt(k(k+1) / (6m)).
double nemenyi_cd(std::size_t algorithms, std::size_t datasets, double alpha);

struct CdDiagram {
  double critical_difference = 0.0;
  std::vector<double> average_ranks;
  /// Maximal sets of algorithms whose pairwise average-rank gaps are all
  /// below the critical difference, ordered by best member. Every
  /// algorithm belongs to at least one group.
  std::vector<std::vector<std::size_t>> groups;
};

CdDiagram cd_diagram_data(const RankMatrix& ranks, double alpha);

}  // namespace expose
