#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "expose/dataset.hpp"
#include "expose/feature_map.hpp"

namespace expose {

/// Unnormalized feature sum over one chunk of data.
///
/// `sum + carry` is the compensated total; `carry` holds the low-order
/// bits lost by `sum`, so merges in any order agree to within rounding of
/// the final addition.
struct PartialSum {
  std::vector<double> sum;
  std::vector<double> carry;
  std::uint64_t count = 0;

  std::size_t dim() const { return sum.size(); }
  std::vector<double> total() const;
};

/// Sum of feature vectors over rows [first, last) of `chunk`.
PartialSum fit_partial(const FeatureMap& map, const Dataset& chunk, std::size_t first = 0,
                       std::size_t last = static_cast<std::size_t>(-1));
PartialSum merge(const PartialSum& a, const PartialSum& b);

struct BatchMode {};
struct OnlineMode {};
struct WindowMode {
  explicit WindowMode(std::size_t length);
  std::size_t length;
};
struct DecayMode {
  explicit DecayMode(double gamma);
  double gamma;
};
using UpdateMode = std::variant<BatchMode, OnlineMode, WindowMode, DecayMode>;

struct ScoredInstance {
  double raw = 0.0;
  std::optional<double> normalized;
  std::optional<Label> label;

  /// Normalized score when present, raw otherwise.
  double decision_value() const { return normalized ? *normalized : raw; }
};

/// Normal iff the decision value is strictly greater than theta.
Label classify(const ScoredInstance& s, double theta);

/// Published, immutable view of the model weights.
struct WeightSnapshot {
  std::vector<double> weights;
  double squared_norm = 0.0;
  std::uint64_t count = 0;
};

/// Kernel mean embedding estimate w over a fixed feature map.
///
/// Streaming updates follow a single-writer contract. Readers on other
/// threads call `snapshot()` or `score()`, which always see the weights of
/// one complete update.
class ExposeModel {
 public:
  /// Fresh model with no observations.
  ExposeModel(std::shared_ptr<const FeatureMap> map, UpdateMode mode);

  ExposeModel(const ExposeModel& other);
  ExposeModel& operator=(const ExposeModel& other);
  ExposeModel(ExposeModel&& other) noexcept;
  ExposeModel& operator=(ExposeModel&& other) noexcept;
  ~ExposeModel() = default;

  const FeatureMap& feature_map() const { return *map_; }
  const std::shared_ptr<const FeatureMap>& feature_map_ptr() const { return map_; }
  const UpdateMode& mode() const { return mode_; }
  std::uint64_t count() const;
  std::size_t dim() const { return map_->feature_dim(); }

  std::shared_ptr<const WeightSnapshot> snapshot() const;
  std::vector<double> weights() const { return snapshot()->weights; }

  /// Whether scores are normalized unless the caller says otherwise:
  /// streaming modes yes, batch no.
  bool normalizes_by_default() const { return !std::holds_alternative<BatchMode>(mode_); }

  /// Dispatches on the mode. Batch models reject updates.
  void update(InputView x);
  void update_online(InputView x);
  void update_window(InputView x);
  void update_decay(InputView x);

  /// Same updates with a precomputed feature vector.
  void update_features(std::span<const double> phi);

  ScoredInstance score(InputView z, bool normalize) const;
  ScoredInstance score(InputView z) const { return score(z, normalizes_by_default()); }
  ScoredInstance score_features(std::span<const double> phi, bool normalize) const;

  /// Streaming state, exposed for persistence.
  const std::vector<std::vector<double>>& window_buffer() const { return window_buffer_; }
  std::size_t window_head() const { return window_head_; }
  const PartialSum& running_sum() const { return running_; }

  /// Restores a model from persisted state. `window` must be given oldest
  /// first for window models; `running` must be given for online models.
  static ExposeModel restore(std::shared_ptr<const FeatureMap> map, UpdateMode mode, std::vector<double> weights,
                             std::uint64_t count, std::optional<PartialSum> running = std::nullopt,
                             std::vector<std::vector<double>> window = {});

  friend ExposeModel finalize(std::span<const PartialSum> parts, std::shared_ptr<const FeatureMap> map);

 private:
  void publish(std::vector<double> weights, std::uint64_t count);
  void require_mode_online() const;
  void recompute_window_sum();

  std::shared_ptr<const FeatureMap> map_;
  UpdateMode mode_;

  mutable std::mutex publish_mutex_;
  std::shared_ptr<const WeightSnapshot> state_;

  // Writer-side state.
  std::uint64_t count_ = 0;
  PartialSum running_;                              // online
  std::vector<std::vector<double>> window_buffer_;  // window ring
  std::size_t window_head_ = 0;
  std::vector<double> window_sum_;
  std::vector<double> decay_weights_;
};

/// Batch model: weights = (sum of partial sums) / (sum of counts).
ExposeModel finalize(std::span<const PartialSum> parts, std::shared_ptr<const FeatureMap> map);

/// Splits `data` into `threads` contiguous chunks, sums each concurrently,
/// merges in chunk order and finalizes.
ExposeModel fit_batch(const Dataset& data, std::shared_ptr<const FeatureMap> map, std::size_t threads = 1);

}  // namespace expose
