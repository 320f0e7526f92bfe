#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "expose/dataset.hpp"
#include "expose/random.hpp"

namespace expose {

/// Isotropic Gaussian component: mean + scale * N(0, I).
struct GaussianComponent {
  std::vector<double> mean;
  double scale = 1.0;
  double weight = 1.0;
};

/// A concept is a finite Gaussian mixture.
struct Concept {
  std::vector<GaussianComponent> components;

  std::size_t dim() const { return components.empty() ? 0 : components.front().mean.size(); }
  std::vector<double> sample(Rng& rng) const;
};

struct SuddenDrift {};
/// Sigmoid hand-over of length `width` centred on the concept boundary.
struct SmoothDrift {
  std::size_t width = 1;
};
using Drift = std::variant<SuddenDrift, SmoothDrift>;

/// Axis-aligned box anomalies are drawn uniformly from.
struct AnomalyBox {
  std::vector<double> lower;
  std::vector<double> upper;

  std::vector<double> sample(Rng& rng) const;
};

struct StreamSpec {
  std::vector<Concept> concepts;
  std::vector<std::size_t> lengths;  ///< instances per concept
  std::vector<Drift> transitions;    ///< concepts.size() - 1 entries
  double anomaly_rate = 0.0;
  /// Defaults to every component mean +/- 6 scales, per coordinate.
  std::optional<AnomalyBox> anomaly_box;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument describing the first violated constraint.
  void validate() const;
  std::size_t dim() const;
  std::size_t total_length() const;
  AnomalyBox effective_box() const;
  /// First stream index of each concept.
  std::vector<std::size_t> boundaries() const;
};

/// Probability of drawing from the outgoing concept at index t of a smooth
/// transition centred at t0: 1 - 1/(1 + exp(-4(t - t0)/width)).
double outgoing_probability(double t, double t0, double width);

/// Concept scheduled at index t ignoring the random hand-over (the segment
/// that contains t).
std::size_t nominal_concept(const StreamSpec& spec, std::size_t t);

/// Draws the full labeled stream. Deterministic in the spec (including seed).
std::vector<LabeledInstance> generate(const StreamSpec& spec);

/// Fresh class-labeled draws for one concept: `n_normal` normals followed by
/// `n_anomaly` box anomalies, all tagged with `concept_id`.
std::vector<LabeledInstance> holdout_for_concept(const StreamSpec& spec, std::size_t concept_id, std::size_t n_normal,
                                                 std::size_t n_anomaly, std::uint64_t seed);

}  // namespace expose
