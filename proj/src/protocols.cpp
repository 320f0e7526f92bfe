#include "expose/protocols.hpp"

#include <charconv>
#include <deque>
#include <stdexcept>

#include "expose/evalstats.hpp"

namespace expose {

std::string_view to_string(Protocol p) { return p == Protocol::holdout ? "holdout" : "prequential"; }

namespace {

double trailing_balanced_accuracy(const ConfusionMatrix& cm) {
  const std::uint64_t normals = cm.tp + cm.fn;
  const std::uint64_t anomalies = cm.tn + cm.fp;
  if (normals > 0 && anomalies > 0) return balanced_accuracy(cm);
  if (normals > 0) return static_cast<double>(cm.tp) / static_cast<double>(normals);
  return static_cast<double>(cm.tn) / static_cast<double>(anomalies);
}

void remove(ConfusionMatrix& cm, Label truth, Label predicted) {
  if (truth == Label::normal) {
    --(predicted == Label::normal ? cm.tp : cm.fn);
  } else {
    --(predicted == Label::anomaly ? cm.tn : cm.fp);
  }
}

}  // namespace

std::vector<EvalRecord> prequential_eval(std::span<const LabeledInstance> stream, ExposeModel& model,
                                         const PrequentialOptions& options) {
  if (options.trailing_window == 0) throw std::invalid_argument("prequential: trailing window must be >= 1");
  const bool normalize = options.normalize.value_or(model.normalizes_by_default());

  std::vector<EvalRecord> records;
  records.reserve(stream.size());
  std::deque<std::pair<Label, Label>> recent;
  ConfusionMatrix cm;
  for (std::size_t t = 0; t < stream.size(); ++t) {
    const LabeledInstance& inst = stream[t];
    // Nothing to score against before the first observation; count it as a
    // "normal" call so the record sequence stays aligned with the stream.
    Label predicted = Label::normal;
    if (model.count() > 0) {
      ScoredInstance s = model.score(inst.x, normalize);
      s.label = inst.label;
      if (options.on_score) options.on_score(t, s);
      predicted = classify(s, options.theta);
    }
    cm.add(inst.label, predicted);
    recent.emplace_back(inst.label, predicted);
    if (recent.size() > options.trailing_window) {
      remove(cm, recent.front().first, recent.front().second);
      recent.pop_front();
    }
    records.push_back({t + 1, Protocol::prequential, {{"balanced_accuracy", trailing_balanced_accuracy(cm)}}});
    model.update(inst.x);
  }
  return records;
}

std::vector<EvalRecord> holdout_eval(std::span<const LabeledInstance> stream, ExposeModel& model,
                                     const std::map<std::size_t, std::vector<LabeledInstance>>& holdout_sets,
                                     const HoldoutOptions& options, const IntervalOf& interval_of) {
  if (options.every == 0) throw std::invalid_argument("holdout: evaluation period must be >= 1");
  const bool normalize = options.normalize.value_or(model.normalizes_by_default());

  std::vector<EvalRecord> records;
  for (std::size_t t = 0; t < stream.size(); ++t) {
    model.update(stream[t].x);
    if ((t + 1) % options.every != 0) continue;

    const std::size_t interval = interval_of ? interval_of(t) : stream[t].concept_id;
    const auto it = holdout_sets.find(interval);
    if (it == holdout_sets.end()) {
      throw std::invalid_argument("holdout: no holdout set for interval " + std::to_string(interval));
    }
    const auto& holdout = it->second;
    std::vector<double> scores;
    std::vector<Label> labels;
    scores.reserve(holdout.size());
    labels.reserve(holdout.size());
    ConfusionMatrix cm;
    for (const auto& h : holdout) {
      const ScoredInstance s = model.score(h.x, normalize);
      scores.push_back(s.decision_value());
      labels.push_back(h.label);
      cm.add(h.label, classify(s, options.theta));
    }
    records.push_back({t + 1,
                       Protocol::holdout,
                       {{"auc", auc(scores, labels)}, {"balanced_accuracy", balanced_accuracy(cm)}}});
  }
  return records;
}

void write_records(std::ostream& out, std::span<const EvalRecord> records) {
  out << "index,protocol,metric,value\n";
  char buf[32];
  for (const auto& r : records) {
    for (const auto& m : r.metrics) {
      const auto end = std::to_chars(buf, buf + sizeof(buf), m.value).ptr;
      out << r.index << ',' << to_string(r.protocol) << ',' << m.name << ',' << std::string_view(buf, end - buf) << '\n';
    }
  }
}

}  // namespace expose
