#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "expose/dataset.hpp"
#include "expose/linalg.hpp"

namespace expose {

using FeatureVector = std::vector<double>;

/// Random kitchen sinks for the Gaussian RBF kernel.
///
/// Frequencies z_i are rows of an r x d matrix with i.i.d. N(0, 1/sigma^2)
/// entries. A point maps to the 2r-vector
///   (1/sqrt(r)) [cos(z_1.x), sin(z_1.x), ..., cos(z_r.x), sin(z_r.x)]
/// which has unit norm, and <phi(x), phi(y)> = (1/r) sum_i cos(z_i.(x - y))
/// is an unbiased estimate of k(x, y).
class RksProjection {
 public:
  /// Deterministic in (input_dim, expansions, sigma, seed).
  static RksProjection fit(std::size_t input_dim, std::size_t expansions, double sigma, std::uint64_t seed);

  std::size_t input_dim() const { return input_dim_; }
  std::size_t expansions() const { return expansions_; }
  std::size_t feature_dim() const { return 2 * expansions_; }
  double sigma() const { return sigma_; }
  std::uint64_t seed() const { return seed_; }
  /// Row-major r x d frequency matrix.
  const std::vector<double>& frequencies() const { return frequencies_; }

  FeatureVector map(InputView x) const;
  void map_into(InputView x, std::span<double> out) const;

 private:
  RksProjection() = default;

  std::size_t input_dim_ = 0;
  std::size_t expansions_ = 0;
  double sigma_ = 1.0;
  std::uint64_t seed_ = 0;
  std::vector<double> frequencies_;
};

/// Nystroem feature map over a fixed landmark set.
///
/// phi_i(x) = (1/sqrt(lambda_i)) sum_j u_ji k(x_j, x) for the kept
/// eigenpairs (lambda_i, u_i) of the landmark Gram matrix.
class NystroemMap {
 public:
  /// Eigenpairs with lambda <= drop_tol are discarded. Without an explicit
  /// tolerance the cut-off is 1e-10 times the largest eigenvalue.
  static NystroemMap fit(Dataset landmarks, double sigma, std::optional<double> drop_tol = std::nullopt);

  /// Rebuilds a map from stored eigenpairs (model files). Validates shapes
  /// and positivity; does not recompute the decomposition.
  static NystroemMap from_parts(Dataset landmarks, double sigma, std::vector<double> eigenvalues,
                                Matrix eigenvectors);

  std::size_t input_dim() const { return landmarks_.dim(); }
  std::size_t feature_dim() const { return eigenvalues_.size(); }
  std::size_t kept() const { return eigenvalues_.size(); }
  double sigma() const { return sigma_; }
  const Dataset& landmarks() const { return landmarks_; }
  const std::vector<double>& eigenvalues() const { return eigenvalues_; }
  /// landmarks x kept; column i is u_i.
  const Matrix& eigenvectors() const { return eigenvectors_; }

  FeatureVector map(InputView x) const;
  void map_into(InputView x, std::span<double> out) const;

 private:
  NystroemMap() = default;
  void build_projection();

  Dataset landmarks_;
  double sigma_ = 1.0;
  std::vector<double> eigenvalues_;
  Matrix eigenvectors_;
  Matrix projection_;  // landmarks x kept, u_ji / sqrt(lambda_i)
};

/// Uniform sample of `count` rows without replacement (all rows if fewer).
Dataset select_landmarks(const Dataset& data, std::size_t count, std::uint64_t seed);

enum class FeatureMapKind { rks, nystroem };

std::string_view to_string(FeatureMapKind kind);

/// A fitted approximate feature map of either kind.
class FeatureMap {
 public:
  FeatureMap(RksProjection rks) : impl_(std::move(rks)) {}  // NOLINT(google-explicit-constructor)
  FeatureMap(NystroemMap nys) : impl_(std::move(nys)) {}    // NOLINT(google-explicit-constructor)

  FeatureMapKind kind() const;
  std::size_t input_dim() const;
  std::size_t feature_dim() const;
  double sigma() const;

  FeatureVector map(InputView x) const;
  void map_into(InputView x, std::span<double> out) const;

  const RksProjection* as_rks() const { return std::get_if<RksProjection>(&impl_); }
  const NystroemMap* as_nystroem() const { return std::get_if<NystroemMap>(&impl_); }

 private:
  std::variant<RksProjection, NystroemMap> impl_;
};

}  // namespace expose
