#include "expose/feature_map.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "expose/kernels.hpp"
#include "expose/random.hpp"

namespace expose {

RksProjection RksProjection::fit(std::size_t input_dim, std::size_t expansions, double sigma,
                                 std::uint64_t seed) {
  if (input_dim == 0) throw std::invalid_argument("rks: input dimension must be >= 1");
  if (expansions == 0) throw std::invalid_argument("rks: number of expansions must be >= 1");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("rks: sigma must be positive");

  RksProjection p;
  p.input_dim_ = input_dim;
  p.expansions_ = expansions;
  p.sigma_ = sigma;
  p.seed_ = seed;
  p.frequencies_.resize(input_dim * expansions);
  Rng rng(seed);
  const double stddev = 1.0 / sigma;
  for (double& z : p.frequencies_) z = stddev * rng.normal();
  return p;
}

FeatureVector RksProjection::map(InputView x) const {
  FeatureVector out(feature_dim());
  map_into(x, out);
  return out;
}

void RksProjection::map_into(InputView x, std::span<double> out) const {
  require_same_dim(input_dim_, x.size(), "rks map");
  require_same_dim(feature_dim(), out.size(), "rks map output");
  require_finite(x, "rks map");
  const double scale = 1.0 / std::sqrt(static_cast<double>(expansions_));
  const double* z = frequencies_.data();
  for (std::size_t i = 0; i < expansions_; ++i, z += input_dim_) {
    double phase = 0.0;
    for (std::size_t j = 0; j < input_dim_; ++j) phase += z[j] * x[j];
    out[2 * i] = scale * std::cos(phase);
    out[2 * i + 1] = scale * std::sin(phase);
  }
}

NystroemMap NystroemMap::fit(Dataset landmarks, double sigma, std::optional<double> drop_tol) {
  if (landmarks.empty()) throw std::invalid_argument("nystroem: no landmarks");
  if (drop_tol && !(*drop_tol >= 0.0)) throw std::invalid_argument("nystroem: drop tolerance must be >= 0");
  const RbfKernel kernel(sigma);

  const std::size_t r = landmarks.size();
  Matrix gram(r, r);
  for (std::size_t i = 0; i < r; ++i) {
    gram(i, i) = 1.0;
    for (std::size_t j = i + 1; j < r; ++j) {
      const double k = kernel(landmarks[i], landmarks[j]);
      gram(i, j) = k;
      gram(j, i) = k;
    }
  }
  const EigenDecomposition eig = jacobi_eigh(gram);
  const double cutoff = drop_tol ? *drop_tol : 1e-10 * std::max(eig.values.front(), 0.0);

  std::size_t kept = 0;
  while (kept < r && eig.values[kept] > cutoff && eig.values[kept] > 0.0) ++kept;

  NystroemMap m;
  m.landmarks_ = std::move(landmarks);
  m.sigma_ = sigma;
  m.eigenvalues_.assign(eig.values.begin(), eig.values.begin() + static_cast<std::ptrdiff_t>(kept));
  m.eigenvectors_ = Matrix(r, kept);
  for (std::size_t row = 0; row < r; ++row)
    for (std::size_t c = 0; c < kept; ++c) m.eigenvectors_(row, c) = eig.vectors(row, c);
  m.build_projection();
  return m;
}

NystroemMap NystroemMap::from_parts(Dataset landmarks, double sigma, std::vector<double> eigenvalues,
                                    Matrix eigenvectors) {
  if (landmarks.empty()) throw std::invalid_argument("nystroem: no landmarks");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("nystroem: sigma must be positive");
  if (eigenvectors.rows() != landmarks.size() || eigenvectors.cols() != eigenvalues.size()) {
    throw std::invalid_argument("nystroem: eigenvector shape does not match landmarks/eigenvalues");
  }
  if (eigenvalues.empty()) throw std::invalid_argument("nystroem: no eigenpairs");
  for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
    if (!(eigenvalues[i] > 0.0) || !std::isfinite(eigenvalues[i])) {
      throw std::invalid_argument("nystroem: eigenvalues must be positive");
    }
    if (i > 0 && eigenvalues[i] > eigenvalues[i - 1]) {
      throw std::invalid_argument("nystroem: eigenvalues must be sorted descending");
    }
  }
  for (std::size_t a = 0; a < eigenvectors.cols(); ++a) {
    for (std::size_t b = a; b < eigenvectors.cols(); ++b) {
      double g = 0.0;
      for (std::size_t r = 0; r < eigenvectors.rows(); ++r) g += eigenvectors(r, a) * eigenvectors(r, b);
      if (std::abs(g - (a == b ? 1.0 : 0.0)) > 1e-8) {
        throw std::invalid_argument("nystroem: eigenvectors are not orthonormal");
      }
    }
  }
  NystroemMap m;
  m.landmarks_ = std::move(landmarks);
  m.sigma_ = sigma;
  m.eigenvalues_ = std::move(eigenvalues);
  m.eigenvectors_ = std::move(eigenvectors);
  m.build_projection();
  return m;
}

void NystroemMap::build_projection() {
  projection_ = eigenvectors_;
  for (std::size_t c = 0; c < eigenvalues_.size(); ++c) {
    const double inv = 1.0 / std::sqrt(eigenvalues_[c]);
    for (std::size_t r = 0; r < projection_.rows(); ++r) projection_(r, c) *= inv;
  }
}

FeatureVector NystroemMap::map(InputView x) const {
  FeatureVector out(feature_dim());
  map_into(x, out);
  return out;
}

void NystroemMap::map_into(InputView x, std::span<double> out) const {
  require_same_dim(input_dim(), x.size(), "nystroem map");
  require_same_dim(feature_dim(), out.size(), "nystroem map output");
  require_finite(x, "nystroem map");
  const RbfKernel kernel(sigma_);
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t j = 0; j < landmarks_.size(); ++j) {
    const double k = kernel(landmarks_[j], x);
    if (k == 0.0) continue;
    const auto row = projection_.row(j);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += row[i] * k;
  }
}

Dataset select_landmarks(const Dataset& data, std::size_t count, std::uint64_t seed) {
  if (data.empty()) throw std::invalid_argument("select_landmarks: empty data");
  if (count == 0) throw std::invalid_argument("select_landmarks: count must be >= 1");
  if (count >= data.size()) return data;
  Rng rng(seed);
  const auto rows = rng.sample_without_replacement(data.size(), count);
  return data.select(rows);
}

std::string_view to_string(FeatureMapKind kind) {
  return kind == FeatureMapKind::rks ? "rks" : "nystroem";
}

FeatureMapKind FeatureMap::kind() const {
  return std::holds_alternative<RksProjection>(impl_) ? FeatureMapKind::rks : FeatureMapKind::nystroem;
}

std::size_t FeatureMap::input_dim() const {
  return std::visit([](const auto& m) { return m.input_dim(); }, impl_);
}

std::size_t FeatureMap::feature_dim() const {
  return std::visit([](const auto& m) { return m.feature_dim(); }, impl_);
}

double FeatureMap::sigma() const {
  return std::visit([](const auto& m) { return m.sigma(); }, impl_);
}

FeatureVector FeatureMap::map(InputView x) const {
  return std::visit([&](const auto& m) { return m.map(x); }, impl_);
}

void FeatureMap::map_into(InputView x, std::span<double> out) const {
  std::visit([&](const auto& m) { m.map_into(x, out); }, impl_);
}

}  // namespace expose
