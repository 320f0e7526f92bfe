#include <gtest/gtest.h>

#include <cmath>

#include "expose/feature_map.hpp"
#include "expose/kernels.hpp"
#include "expose/linalg.hpp"
#include "support.hpp"

namespace expose {
namespace {

using testing::gaussian_cloud;

double mean_kernel_error(const RksProjection& p, const Dataset& a, const Dataset& b, double sigma) {
  double err = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) err += std::abs(dot(p.map(a[i]), p.map(b[i])) - rbf_eval(a[i], b[i], sigma));
  return err / static_cast<double>(a.size());
}

TEST(Rks, Deterministic) {
  const auto a = RksProjection::fit(4, 30, 0.9, 17);
  const auto b = RksProjection::fit(4, 30, 0.9, 17);
  EXPECT_EQ(a.frequencies(), b.frequencies());
  const auto c = RksProjection::fit(4, 30, 0.9, 18);
  EXPECT_NE(a.frequencies(), c.frequencies());
}

TEST(Rks, Shapes) {
  const auto p = RksProjection::fit(1, 1, 1.0, 0);
  EXPECT_EQ(p.frequencies().size(), 1u);
  EXPECT_EQ(p.feature_dim(), 2u);
  const auto q = RksProjection::fit(3, 7, 1.0, 0);
  EXPECT_EQ(q.frequencies().size(), 21u);
  EXPECT_EQ(q.map(std::vector<double>{1, 2, 3}).size(), 14u);
}

TEST(Rks, FrequencySpreadIsInverseBandwidth) {
  for (double sigma : {1.0, 2.0}) {
    const auto p = RksProjection::fit(10, 5000, sigma, 3);
    double s = 0.0, ss = 0.0;
    for (double z : p.frequencies()) {
      s += z;
      ss += z * z;
    }
    const double n = static_cast<double>(p.frequencies().size());
    const double sd = std::sqrt((ss - s * s / n) / (n - 1));
    EXPECT_GE(sd * sigma, 0.98);
    EXPECT_LE(sd * sigma, 1.02);
  }
}

TEST(Rks, UnitNormFeatures) {
  const auto p = RksProjection::fit(6, 123, 1.7, 2);
  const Dataset data = gaussian_cloud(20, 6, 9, 3.0);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto phi = p.map(data[i]);
    EXPECT_NEAR(std::sqrt(squared_norm(phi)), 1.0, 1e-12);
    EXPECT_NEAR(dot(phi, phi), 1.0, 1e-12);
  }
}

TEST(Rks, InnerProductIsCosineAverage) {
  const auto p = RksProjection::fit(3, 40, 1.0, 5);
  const std::vector<double> x{0.2, -0.4, 1.0}, y{1.1, 0.3, -0.5};
  double expected = 0.0;
  for (std::size_t i = 0; i < 40; ++i) {
    double arg = 0.0;
    for (std::size_t j = 0; j < 3; ++j) arg += p.frequencies()[i * 3 + j] * (x[j] - y[j]);
    expected += std::cos(arg);
  }
  EXPECT_NEAR(dot(p.map(x), p.map(y)), expected / 40.0, 1e-13);
}

TEST(Rks, KernelApproximation) {
  const Dataset a = gaussian_cloud(200, 10, 100), b = gaussian_cloud(200, 10, 101);
  const auto p = RksProjection::fit(10, 2000, 1.0, 7);
  EXPECT_LE(mean_kernel_error(p, a, b, 1.0), 0.03);
  const auto small = RksProjection::fit(10, 50, 1.0, 7);
  EXPECT_LT(mean_kernel_error(p, a, b, 1.0), mean_kernel_error(small, a, b, 1.0));
}

TEST(Rks, InnerProductsBounded) {
  const auto p = RksProjection::fit(2, 5, 0.3, 1);
  const Dataset a = gaussian_cloud(50, 2, 1);
  for (std::size_t i = 0; i + 1 < a.size(); ++i) {
    const double v = dot(p.map(a[i]), p.map(a[i + 1]));
    EXPECT_LE(v, 1.0 + 1e-12);
    EXPECT_GE(v, -1.0 - 1e-12);
  }
}

TEST(Rks, Errors) {
  EXPECT_THROW(RksProjection::fit(0, 5, 1.0, 0), std::invalid_argument);
  EXPECT_THROW(RksProjection::fit(2, 0, 1.0, 0), std::invalid_argument);
  EXPECT_THROW(RksProjection::fit(2, 5, 0.0, 0), std::invalid_argument);
  const auto p = RksProjection::fit(2, 5, 1.0, 0);
  EXPECT_THROW(p.map(std::vector<double>{1.0}), std::invalid_argument);
}

TEST(Nystroem, SingleLandmark) {
  const Dataset l = Dataset::from_rows({{0.5, -0.5}});
  const auto m = NystroemMap::fit(l, 1.0, 0.0);
  ASSERT_EQ(m.kept(), 1u);
  EXPECT_DOUBLE_EQ(m.eigenvalues()[0], 1.0);
  EXPECT_DOUBLE_EQ(m.eigenvectors()(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(m.map(l[0])[0], 1.0);
  const std::vector<double> x{1.0, 1.0};
  EXPECT_NEAR(m.map(x)[0], rbf_eval(x, l[0], 1.0), 1e-15);
}

TEST(Nystroem, TwoLandmarksAnalyticEigenvalues) {
  // k = 0.5 at distance sigma * sqrt(2 ln 2).
  const double gap = std::sqrt(2.0 * std::log(2.0));
  const Dataset l = Dataset::from_rows({{0.0}, {gap}});
  const auto m = NystroemMap::fit(l, 1.0, 0.0);
  ASSERT_EQ(m.kept(), 2u);
  EXPECT_NEAR(m.eigenvalues()[0], 1.5, 1e-14);
  EXPECT_NEAR(m.eigenvalues()[1], 0.5, 1e-14);
}

TEST(Nystroem, GramReconstruction) {
  const Dataset l = gaussian_cloud(30, 3, 12);
  const auto m = NystroemMap::fit(l, 1.0, 0.0);
  EXPECT_EQ(m.kept(), 30u);
  double worst = 0.0;
  for (std::size_t a = 0; a < 30; ++a)
    for (std::size_t b = 0; b < 30; ++b)
      worst = std::max(worst, std::abs(dot(m.map(l[a]), m.map(l[b])) - rbf_eval(l[a], l[b], 1.0)));
  EXPECT_LE(worst, 1e-6);
}

TEST(Nystroem, InvariantsHold) {
  const Dataset l = gaussian_cloud(25, 2, 13);
  const auto m = NystroemMap::fit(l, 0.8);
  const Matrix& u = m.eigenvectors();
  const Matrix gram = u.transposed() * u;
  for (std::size_t i = 0; i < m.kept(); ++i) {
    EXPECT_GT(m.eigenvalues()[i], 0.0);
    if (i > 0) EXPECT_GE(m.eigenvalues()[i - 1], m.eigenvalues()[i]);
    for (std::size_t j = 0; j < m.kept(); ++j) EXPECT_NEAR(gram(i, j), i == j ? 1.0 : 0.0, 1e-8);
  }
  EXPECT_LE(m.kept(), 25u);
}

TEST(Nystroem, DropsNearSingularDirections) {
  const Dataset l = Dataset::from_rows({{0.0, 0.0}, {0.0, 0.0}, {3.0, 0.0}});
  const auto m = NystroemMap::fit(l, 1.0);
  EXPECT_EQ(m.kept(), 2u);
}

TEST(Nystroem, FarPointMapsNearZero) {
  const Dataset l = gaussian_cloud(10, 2, 4, 0.1);
  const auto m = NystroemMap::fit(l, 1.0, 0.0);
  const std::vector<double> far{100.0, 0.0};
  EXPECT_LT(std::sqrt(squared_norm(m.map(far))), 1e-50);
}

TEST(Nystroem, Errors) {
  EXPECT_THROW(NystroemMap::fit(Dataset(2), 1.0), std::invalid_argument);
  const auto m = NystroemMap::fit(gaussian_cloud(3, 2, 1), 1.0);
  EXPECT_THROW(m.map(std::vector<double>{0.0}), std::invalid_argument);
  EXPECT_THROW(NystroemMap::fit(gaussian_cloud(3, 2, 1), 1.0, -1.0), std::invalid_argument);
}

TEST(Landmarks, SampleWithoutReplacement) {
  const Dataset data = gaussian_cloud(50, 2, 3);
  const Dataset l = select_landmarks(data, 10, 4);
  EXPECT_EQ(l.size(), 10u);
  for (std::size_t i = 0; i < l.size(); ++i)
    for (std::size_t j = i + 1; j < l.size(); ++j) EXPECT_NE(testing::to_vec(l[i]), testing::to_vec(l[j]));
  EXPECT_EQ(select_landmarks(data, 10, 4).values(), l.values());
  EXPECT_EQ(select_landmarks(data, 500, 4).size(), 50u);
}

TEST(FeatureMapWrapper, Dispatch) {
  const FeatureMap rks = RksProjection::fit(2, 8, 1.0, 0);
  EXPECT_EQ(rks.kind(), FeatureMapKind::rks);
  EXPECT_EQ(rks.feature_dim(), 16u);
  EXPECT_NE(rks.as_rks(), nullptr);
  EXPECT_EQ(rks.as_nystroem(), nullptr);
  const FeatureMap nys = NystroemMap::fit(gaussian_cloud(5, 2, 0), 1.0);
  EXPECT_EQ(nys.kind(), FeatureMapKind::nystroem);
  EXPECT_EQ(nys.input_dim(), 2u);
  const std::vector<double> x{0.1, 0.2};
  EXPECT_EQ(nys.map(x), nys.as_nystroem()->map(x));
}

}  // namespace
}  // namespace expose
