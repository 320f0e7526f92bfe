#include "expose/streamgen.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace expose {

std::vector<double> Concept::sample(Rng& rng) const {
  double total = 0.0;
  for (const auto& c : components) total += c.weight;
  double pick = rng.uniform() * total;
  const GaussianComponent* chosen = &components.back();
  for (const auto& c : components) {
    if (pick < c.weight) {
      chosen = &c;
      break;
    }
    pick -= c.weight;
  }
  std::vector<double> x(chosen->mean.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = chosen->mean[i] + chosen->scale * rng.normal();
  return x;
}

std::vector<double> AnomalyBox::sample(Rng& rng) const {
  std::vector<double> x(lower.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = rng.uniform(lower[i], upper[i]);
  return x;
}

void StreamSpec::validate() const {
  auto fail = [](const std::string& why) { throw std::invalid_argument("stream spec: " + why); };
  if (concepts.empty()) fail("no concepts");
  if (lengths.size() != concepts.size()) fail("one length per concept required");
  if (transitions.size() + 1 != concepts.size()) fail("need exactly one transition between consecutive concepts");
  const std::size_t d = concepts.front().dim();
  if (d == 0) fail("concept dimension must be >= 1");
  for (std::size_t c = 0; c < concepts.size(); ++c) {
    if (concepts[c].components.empty()) fail("concept " + std::to_string(c) + " has no components");
    for (const auto& comp : concepts[c].components) {
      if (comp.mean.size() != d) fail("all components must share one dimension");
      if (!(comp.scale > 0.0) || !std::isfinite(comp.scale)) fail("component scale must be positive");
      if (!(comp.weight > 0.0) || !std::isfinite(comp.weight)) fail("component weight must be positive");
      for (double m : comp.mean)
        if (!std::isfinite(m)) fail("component mean must be finite");
    }
    if (lengths[c] == 0) fail("concept lengths must be positive");
  }
  for (const auto& t : transitions)
    if (const auto* s = std::get_if<SmoothDrift>(&t); s && s->width < 1) fail("smooth drift width must be >= 1");
  if (!(anomaly_rate >= 0.0 && anomaly_rate < 0.5)) fail("anomaly rate must lie in [0, 0.5)");
  if (anomaly_box) {
    if (anomaly_box->lower.size() != d || anomaly_box->upper.size() != d) fail("anomaly box dimension mismatch");
    for (std::size_t i = 0; i < d; ++i)
      if (!(anomaly_box->lower[i] < anomaly_box->upper[i]) || !std::isfinite(anomaly_box->lower[i]) ||
          !std::isfinite(anomaly_box->upper[i])) {
        fail("anomaly box bounds must be finite with lower < upper");
      }
  }
}

std::size_t StreamSpec::dim() const { return concepts.empty() ? 0 : concepts.front().dim(); }

std::size_t StreamSpec::total_length() const {
  std::size_t n = 0;
  for (std::size_t l : lengths) n += l;
  return n;
}

AnomalyBox StreamSpec::effective_box() const {
  if (anomaly_box) return *anomaly_box;
  const std::size_t d = dim();
  AnomalyBox box{std::vector<double>(d, INFINITY), std::vector<double>(d, -INFINITY)};
  for (const auto& c : concepts)
    for (const auto& comp : c.components)
      for (std::size_t i = 0; i < d; ++i) {
        box.lower[i] = std::min(box.lower[i], comp.mean[i] - 6.0 * comp.scale);
        box.upper[i] = std::max(box.upper[i], comp.mean[i] + 6.0 * comp.scale);
      }
  return box;
}

std::vector<std::size_t> StreamSpec::boundaries() const {
  std::vector<std::size_t> starts(lengths.size());
  std::size_t at = 0;
  for (std::size_t c = 0; c < lengths.size(); ++c) {
    starts[c] = at;
    at += lengths[c];
  }
  return starts;
}

double outgoing_probability(double t, double t0, double width) {
  return 1.0 - 1.0 / (1.0 + std::exp(-4.0 * (t - t0) / width));
}

std::size_t nominal_concept(const StreamSpec& spec, std::size_t t) {
  std::size_t end = 0;
  for (std::size_t c = 0; c < spec.lengths.size(); ++c) {
    end += spec.lengths[c];
    if (t < end) return c;
  }
  return spec.lengths.empty() ? 0 : spec.lengths.size() - 1;
}

namespace {

// Concept an instance at index t is drawn from, resolving any smooth
// hand-over with the nearest boundary.
std::size_t draw_concept(const StreamSpec& spec, const std::vector<std::size_t>& starts, std::size_t t, Rng& rng) {
  const std::size_t j = nominal_concept(spec, t);
  const std::size_t last = spec.concepts.size() - 1;
  std::size_t outgoing = 0;
  std::size_t boundary = 0;
  if (j > 0 && (j == last || t - starts[j] < starts[j + 1] - t)) {
    outgoing = j - 1;
    boundary = starts[j];
  } else if (j < last) {
    outgoing = j;
    boundary = starts[j + 1];
  } else {
    return j;
  }
  const auto* smooth = std::get_if<SmoothDrift>(&spec.transitions[outgoing]);
  if (!smooth) return j;
  const double p = outgoing_probability(static_cast<double>(t), static_cast<double>(boundary),
                                        static_cast<double>(smooth->width));
  return rng.bernoulli(p) ? outgoing : outgoing + 1;
}

}  // namespace

std::vector<LabeledInstance> generate(const StreamSpec& spec) {
  spec.validate();
  const auto starts = spec.boundaries();
  const AnomalyBox box = spec.effective_box();
  Rng rng(spec.seed);
  const std::size_t n = spec.total_length();
  std::vector<LabeledInstance> out;
  out.reserve(n);
  for (std::size_t t = 0; t < n; ++t) {
    if (rng.bernoulli(spec.anomaly_rate)) {
      out.push_back({box.sample(rng), Label::anomaly, nominal_concept(spec, t)});
    } else {
      const std::size_t c = draw_concept(spec, starts, t, rng);
      out.push_back({spec.concepts[c].sample(rng), Label::normal, c});
    }
  }
  return out;
}

std::vector<LabeledInstance> holdout_for_concept(const StreamSpec& spec, std::size_t concept_id, std::size_t n_normal,
                                                 std::size_t n_anomaly, std::uint64_t seed) {
  spec.validate();
  if (concept_id >= spec.concepts.size()) {
    throw std::invalid_argument("holdout_for_concept: no concept " + std::to_string(concept_id));
  }
  const AnomalyBox box = spec.effective_box();
  Rng rng(seed);
  std::vector<LabeledInstance> out;
  out.reserve(n_normal + n_anomaly);
  for (std::size_t i = 0; i < n_normal; ++i) out.push_back({spec.concepts[concept_id].sample(rng), Label::normal, concept_id});
  for (std::size_t i = 0; i < n_anomaly; ++i) out.push_back({box.sample(rng), Label::anomaly, concept_id});
  return out;
}

}  // namespace expose
