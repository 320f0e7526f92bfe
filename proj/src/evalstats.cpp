#include "expose/evalstats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "expose/nemenyi_table.hpp"

namespace expose {

namespace {

// Midranks (1-based) of `values` in ascending order.
std::vector<double> midranks_ascending(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i + 1;
    while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + 1 + j);  // mean of i+1 .. j
    for (std::size_t t = i; t < j; ++t) ranks[order[t]] = rank;
    i = j;
  }
  return ranks;
}

}  // namespace

double auc(std::span<const double> scores, std::span<const Label> labels) {
  if (scores.size() != labels.size()) throw std::invalid_argument("auc: scores and labels differ in length");
  for (double s : scores)
    if (!std::isfinite(s)) throw std::invalid_argument("auc: non-finite score");
  const auto n_normal = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), Label::normal));
  const std::size_t n_anomaly = labels.size() - n_normal;
  if (n_normal == 0 || n_anomaly == 0) throw std::invalid_argument("auc: both classes must be present");

  const std::vector<double> ranks = midranks_ascending(scores);
  double rank_sum = 0.0;
  for (std::size_t i = 0; i < ranks.size(); ++i)
    if (labels[i] == Label::normal) rank_sum += ranks[i];
  const double nn = static_cast<double>(n_normal);
  const double u = rank_sum - nn * (nn + 1.0) / 2.0;
  return u / (nn * static_cast<double>(n_anomaly));
}

void ConfusionMatrix::add(Label truth, Label predicted) {
  if (truth == Label::normal) {
    ++(predicted == Label::normal ? tp : fn);
  } else {
    ++(predicted == Label::anomaly ? tn : fp);
  }
}

double balanced_accuracy(std::uint64_t tp, std::uint64_t fn, std::uint64_t tn, std::uint64_t fp) {
  if (tp + fn == 0 || tn + fp == 0) throw std::invalid_argument("balanced_accuracy: a class has no instances");
  return 0.5 * static_cast<double>(tp) / static_cast<double>(tp + fn) +
         0.5 * static_cast<double>(tn) / static_cast<double>(tn + fp);
}

double balanced_accuracy(const ConfusionMatrix& cm) { return balanced_accuracy(cm.tp, cm.fn, cm.tn, cm.fp); }

RankMatrix::RankMatrix(std::size_t datasets, std::size_t algorithms, std::vector<double> ranks)
    : m_(datasets), k_(algorithms), ranks_(std::move(ranks)) {
  if (ranks_.size() != m_ * k_) throw std::invalid_argument("RankMatrix: size mismatch");
  const double expected = static_cast<double>(k_ * (k_ + 1)) / 2.0;
  for (std::size_t i = 0; i < m_; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < k_; ++j) row += ranks_[i * k_ + j];
    if (row != expected) throw std::invalid_argument("RankMatrix: row " + std::to_string(i) + " is not a ranking");
  }
}

std::vector<double> RankMatrix::average_ranks() const {
  std::vector<double> avg(k_, 0.0);
  for (std::size_t i = 0; i < m_; ++i)
    for (std::size_t j = 0; j < k_; ++j) avg[j] += ranks_[i * k_ + j];
  for (double& a : avg) a /= static_cast<double>(m_);
  return avg;
}

RankMatrix rank_rows(const Matrix& metrics) {
  const std::size_t m = metrics.rows();
  const std::size_t k = metrics.cols();
  if (m < 2 || k < 2) throw std::invalid_argument("rank_rows: need at least 2 datasets and 2 algorithms");
  std::vector<double> ranks;
  ranks.reserve(m * k);
  std::vector<double> negated(k);
  for (std::size_t i = 0; i < m; ++i) {
    const auto row = metrics.row(i);
    for (std::size_t j = 0; j < k; ++j) {
      if (!std::isfinite(row[j])) throw std::invalid_argument("rank_rows: non-finite metric");
      negated[j] = -row[j];
    }
    const auto r = midranks_ascending(negated);
    ranks.insert(ranks.end(), r.begin(), r.end());
  }
  return RankMatrix(m, k, std::move(ranks));
}

SaturatedStatistic::SaturatedStatistic(double chi2)
    : std::domain_error("Iman-Davenport statistic saturated: chi2_F reached m(k-1)"), chi2_(chi2) {}

double friedman_chi2(const RankMatrix& ranks) {
  const double m = static_cast<double>(ranks.datasets());
  const double k = static_cast<double>(ranks.algorithms());
  double sum_sq = 0.0;
  for (double r : ranks.average_ranks()) sum_sq += r * r;
  return 12.0 * m / (k * (k + 1.0)) * (sum_sq - k * (k + 1.0) * (k + 1.0) / 4.0);
}

double iman_davenport(double chi2, std::size_t datasets, std::size_t algorithms) {
  const double m = static_cast<double>(datasets);
  const double k = static_cast<double>(algorithms);
  const double denominator = m * (k - 1.0) - chi2;
  // Relative slack absorbs rounding in chi2 when every dataset agrees.
  if (denominator <= 1e-12 * m * (k - 1.0)) throw SaturatedStatistic(chi2);
  return (m - 1.0) * chi2 / denominator;
}

FriedmanResult friedman(const Matrix& metrics) {
  RankMatrix ranks = rank_rows(metrics);
  const double chi2 = friedman_chi2(ranks);
  const std::size_t m = ranks.datasets();
  const std::size_t k = ranks.algorithms();
  const double ff = iman_davenport(chi2, m, k);
  return FriedmanResult{chi2, ff, k - 1, (k - 1) * (m - 1), std::move(ranks)};
}

double nemenyi_q(std::size_t algorithms, double alpha) {
  if (algorithms < static_cast<std::size_t>(nemenyi::kMinAlgorithms) ||
      algorithms > static_cast<std::size_t>(nemenyi::kMaxAlgorithms)) {
    throw std::invalid_argument("nemenyi: tabulated only for 2 <= k <= 10");
  }
  const std::size_t idx = algorithms - nemenyi::kMinAlgorithms;
  if (std::abs(alpha - 0.05) < 1e-12) return nemenyi::kQ05[idx];
  if (std::abs(alpha - 0.10) < 1e-12) return nemenyi::kQ10[idx];
  throw std::invalid_argument("nemenyi: alpha must be 0.05 or 0.10");
}

double nemenyi_cd(std::size_t algorithms, std::size_t datasets, double alpha) {
  if (datasets < 2) throw std::invalid_argument("nemenyi: need at least 2 datasets");
  const double k = static_cast<double>(algorithms);
  return nemenyi_q(algorithms, alpha) * std::sqrt(k * (k + 1.0) / (6.0 * static_cast<double>(datasets)));
}

CdDiagram cd_diagram_data(const RankMatrix& ranks, double alpha) {
  CdDiagram out;
  out.critical_difference = nemenyi_cd(ranks.algorithms(), ranks.datasets(), alpha);
  out.average_ranks = ranks.average_ranks();

  const auto& avg = out.average_ranks;
  std::vector<std::size_t> order(avg.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return avg[a] < avg[b]; });

  // On a line, the maximal cliques of "gap < CD" are maximal runs in rank order.
  std::size_t previous_end = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    std::size_t end = i + 1;
    while (end < order.size() && avg[order[end]] - avg[order[i]] < out.critical_difference) ++end;
    if (end > previous_end) {
      out.groups.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(i),
                              order.begin() + static_cast<std::ptrdiff_t>(end));
      previous_end = end;
    }
  }
  return out;
}

}  // namespace expose
