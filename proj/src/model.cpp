#include "expose/model.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <thread>

#include "expose/linalg.hpp"

namespace expose {

namespace {

// Neumaier's variant of compensated summation, componentwise.
void compensated_add(std::vector<double>& sum, std::vector<double>& carry, std::span<const double> x) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double s = sum[i];
    const double t = s + x[i];
    if (std::abs(s) >= std::abs(x[i])) {
      carry[i] += (s - t) + x[i];
    } else {
      carry[i] += (x[i] - t) + s;
    }
    sum[i] = t;
  }
}

PartialSum empty_sum(std::size_t dim) {
  return PartialSum{std::vector<double>(dim, 0.0), std::vector<double>(dim, 0.0), 0};
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

std::vector<double> PartialSum::total() const {
  std::vector<double> out(sum.size());
  for (std::size_t i = 0; i < sum.size(); ++i) out[i] = sum[i] + carry[i];
  return out;
}

PartialSum fit_partial(const FeatureMap& map, const Dataset& chunk, std::size_t first, std::size_t last) {
  last = std::min(last, chunk.size());
  if (first >= last) throw std::invalid_argument("fit_partial: empty chunk");
  require_same_dim(map.input_dim(), chunk.dim(), "fit_partial");
  PartialSum part = empty_sum(map.feature_dim());
  std::vector<double> phi(map.feature_dim());
  for (std::size_t i = first; i < last; ++i) {
    map.map_into(chunk[i], phi);
    compensated_add(part.sum, part.carry, phi);
  }
  part.count = last - first;
  return part;
}

PartialSum merge(const PartialSum& a, const PartialSum& b) {
  require_same_dim(a.dim(), b.dim(), "merge");
  PartialSum out = a;
  compensated_add(out.sum, out.carry, b.sum);
  for (std::size_t i = 0; i < out.carry.size(); ++i) out.carry[i] += b.carry[i];
  out.count += b.count;
  return out;
}

WindowMode::WindowMode(std::size_t l) : length(l) {
  if (l == 0) throw std::invalid_argument("window length must be >= 1");
}

DecayMode::DecayMode(double g) : gamma(g) {
  if (!(g >= 0.0 && g < 1.0)) throw std::invalid_argument("decay rate gamma must lie in [0, 1)");
}

Label classify(const ScoredInstance& s, double theta) {
  return s.decision_value() > theta ? Label::normal : Label::anomaly;
}

ExposeModel::ExposeModel(std::shared_ptr<const FeatureMap> map, UpdateMode mode)
    : map_(std::move(map)), mode_(mode) {
  if (!map_) throw std::invalid_argument("ExposeModel: missing feature map");
  state_ = std::make_shared<const WeightSnapshot>(WeightSnapshot{std::vector<double>(dim(), 0.0), 0.0, 0});
  if (std::holds_alternative<OnlineMode>(mode_)) running_ = empty_sum(dim());
  if (const auto* w = std::get_if<WindowMode>(&mode_)) {
    window_buffer_.reserve(w->length);
    window_sum_.assign(dim(), 0.0);
  }
}

ExposeModel::ExposeModel(const ExposeModel& other)
    : map_(other.map_),
      mode_(other.mode_),
      state_(other.snapshot()),
      count_(other.count_),
      running_(other.running_),
      window_buffer_(other.window_buffer_),
      window_head_(other.window_head_),
      window_sum_(other.window_sum_),
      decay_weights_(other.decay_weights_) {}

ExposeModel& ExposeModel::operator=(const ExposeModel& other) {
  if (this != &other) {
    ExposeModel copy(other);
    *this = std::move(copy);
  }
  return *this;
}

ExposeModel::ExposeModel(ExposeModel&& other) noexcept
    : map_(std::move(other.map_)),
      mode_(other.mode_),
      state_(std::move(other.state_)),
      count_(other.count_),
      running_(std::move(other.running_)),
      window_buffer_(std::move(other.window_buffer_)),
      window_head_(other.window_head_),
      window_sum_(std::move(other.window_sum_)),
      decay_weights_(std::move(other.decay_weights_)) {}

ExposeModel& ExposeModel::operator=(ExposeModel&& other) noexcept {
  if (this != &other) {
    map_ = std::move(other.map_);
    mode_ = other.mode_;
    {
      std::lock_guard lock(publish_mutex_);
      state_ = std::move(other.state_);
    }
    count_ = other.count_;
    running_ = std::move(other.running_);
    window_buffer_ = std::move(other.window_buffer_);
    window_head_ = other.window_head_;
    window_sum_ = std::move(other.window_sum_);
    decay_weights_ = std::move(other.decay_weights_);
  }
  return *this;
}

std::uint64_t ExposeModel::count() const { return snapshot()->count; }

std::shared_ptr<const WeightSnapshot> ExposeModel::snapshot() const {
  std::lock_guard lock(publish_mutex_);
  return state_;
}

void ExposeModel::publish(std::vector<double> weights, std::uint64_t count) {
  const double norm = squared_norm(weights);
  auto next = std::make_shared<const WeightSnapshot>(WeightSnapshot{std::move(weights), norm, count});
  std::lock_guard lock(publish_mutex_);
  state_ = std::move(next);
}

void ExposeModel::update(InputView x) {
  require_same_dim(map_->input_dim(), x.size(), "ExposeModel::update");
  update_features(map_->map(x));
}

void ExposeModel::update_features(std::span<const double> phi) {
  require_same_dim(dim(), phi.size(), "ExposeModel::update");
  std::visit(overloaded{
                 [](const BatchMode&) {
                   throw std::logic_error("batch models are immutable; use an online, window or decay model");
                 },
                 [&](const OnlineMode&) {
                   compensated_add(running_.sum, running_.carry, phi);
                   ++running_.count;
                   ++count_;
                   std::vector<double> w = running_.total();
                   const double inv = 1.0 / static_cast<double>(count_);
                   for (double& v : w) v *= inv;
                   publish(std::move(w), count_);
                 },
                 [&](const WindowMode& mode) {
                   if (window_buffer_.size() < mode.length) {
                     for (std::size_t i = 0; i < phi.size(); ++i) window_sum_[i] += phi[i];
                     window_buffer_.emplace_back(phi.begin(), phi.end());
                   } else {
                     auto& oldest = window_buffer_[window_head_];
                     for (std::size_t i = 0; i < phi.size(); ++i) {
                       window_sum_[i] += phi[i] - oldest[i];
                       oldest[i] = phi[i];
                     }
                     window_head_ = (window_head_ + 1) % mode.length;
                     // Resum once per full turn of the ring so rounding from
                     // the add/remove pairs cannot accumulate.
                     if (window_head_ == 0) recompute_window_sum();
                   }
                   ++count_;
                   const double inv = 1.0 / static_cast<double>(window_buffer_.size());
                   std::vector<double> w(window_sum_);
                   for (double& v : w) v *= inv;
                   publish(std::move(w), count_);
                 },
                 [&](const DecayMode& mode) {
                   if (count_ == 0) {
                     decay_weights_.assign(phi.begin(), phi.end());
                   } else {
                     for (std::size_t i = 0; i < phi.size(); ++i) {
                       decay_weights_[i] = mode.gamma * phi[i] + (1.0 - mode.gamma) * decay_weights_[i];
                     }
                   }
                   ++count_;
                   publish(decay_weights_, count_);
                 },
             },
             mode_);
}

void ExposeModel::recompute_window_sum() {
  std::vector<double> sum(dim(), 0.0);
  std::vector<double> carry(dim(), 0.0);
  for (const auto& phi : window_buffer_) compensated_add(sum, carry, phi);
  for (std::size_t i = 0; i < sum.size(); ++i) window_sum_[i] = sum[i] + carry[i];
}

void ExposeModel::update_online(InputView x) {
  if (!std::holds_alternative<OnlineMode>(mode_)) throw std::logic_error("update_online: model is not in online mode");
  update(x);
}

void ExposeModel::update_window(InputView x) {
  if (!std::holds_alternative<WindowMode>(mode_)) throw std::logic_error("update_window: model is not in window mode");
  update(x);
}

void ExposeModel::update_decay(InputView x) {
  if (!std::holds_alternative<DecayMode>(mode_)) throw std::logic_error("update_decay: model is not in decay mode");
  update(x);
}

ScoredInstance ExposeModel::score(InputView z, bool normalize) const {
  require_same_dim(map_->input_dim(), z.size(), "ExposeModel::score");
  return score_features(map_->map(z), normalize);
}

ScoredInstance ExposeModel::score_features(std::span<const double> phi, bool normalize) const {
  const auto state = snapshot();
  if (state->count == 0) throw std::logic_error("score: model has no observations");
  require_same_dim(dim(), phi.size(), "ExposeModel::score");
  ScoredInstance out;
  out.raw = dot(phi, state->weights);
  if (normalize) {
    if (!(state->squared_norm > 0.0)) throw std::domain_error("score: cannot normalize, weight vector is zero");
    out.normalized = out.raw / state->squared_norm;
  }
  return out;
}

ExposeModel ExposeModel::restore(std::shared_ptr<const FeatureMap> map, UpdateMode mode, std::vector<double> weights,
                                 std::uint64_t count, std::optional<PartialSum> running,
                                 std::vector<std::vector<double>> window) {
  ExposeModel m(std::move(map), mode);
  require_same_dim(m.dim(), weights.size(), "ExposeModel::restore weights");
  for (double v : weights)
    if (!std::isfinite(v)) throw std::invalid_argument("ExposeModel::restore: non-finite weight");
  m.count_ = count;
  std::visit(overloaded{
                 [](const BatchMode&) {},
                 [&](const OnlineMode&) {
                   if (!running) throw std::invalid_argument("restore: online model needs its running sum");
                   require_same_dim(m.dim(), running->dim(), "restore running sum");
                   if (running->carry.size() != running->sum.size() || running->count != count) {
                     throw std::invalid_argument("restore: inconsistent running sum");
                   }
                   m.running_ = std::move(*running);
                 },
                 [&](const WindowMode& w) {
                   if (window.size() != std::min<std::uint64_t>(count, w.length)) {
                     throw std::invalid_argument("restore: window buffer size does not match count");
                   }
                   for (const auto& phi : window) require_same_dim(m.dim(), phi.size(), "restore window buffer");
                   m.window_buffer_ = std::move(window);
                   m.window_head_ = 0;
                   m.recompute_window_sum();
                 },
                 [&](const DecayMode&) { m.decay_weights_ = weights; },
             },
             m.mode_);
  m.publish(std::move(weights), count);
  return m;
}

ExposeModel finalize(std::span<const PartialSum> parts, std::shared_ptr<const FeatureMap> map) {
  if (parts.empty()) throw std::invalid_argument("finalize: no partial sums");
  PartialSum total = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) total = merge(total, parts[i]);
  if (total.count == 0) throw std::invalid_argument("finalize: zero observations");
  ExposeModel model(std::move(map), BatchMode{});
  require_same_dim(model.dim(), total.dim(), "finalize");
  std::vector<double> w = total.total();
  const double inv = 1.0 / static_cast<double>(total.count);
  for (double& v : w) v *= inv;
  model.count_ = total.count;
  model.publish(std::move(w), total.count);
  return model;
}

ExposeModel fit_batch(const Dataset& data, std::shared_ptr<const FeatureMap> map, std::size_t threads) {
  if (data.empty()) throw std::invalid_argument("fit_batch: empty data");
  if (!map) throw std::invalid_argument("fit_batch: missing feature map");
  threads = std::clamp<std::size_t>(threads, 1, data.size());
  std::vector<PartialSum> parts(threads);
  std::vector<std::thread> workers;
  std::vector<std::exception_ptr> errors(threads);
  workers.reserve(threads);
  for (std::size_t c = 0; c < threads; ++c) {
    const std::size_t first = data.size() * c / threads;
    const std::size_t last = data.size() * (c + 1) / threads;
    workers.emplace_back([&, c, first, last] {
      try {
        parts[c] = fit_partial(*map, data, first, last);
      } catch (...) {
        errors[c] = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return finalize(parts, std::move(map));
}

}  // namespace expose
