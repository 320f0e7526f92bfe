#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "expose/dataset.hpp"
#include "expose/model.hpp"

namespace expose {

enum class Protocol { holdout, prequential };

std::string_view to_string(Protocol p);

struct Metric {
  std::string name;
  double value = 0.0;
};

struct EvalRecord {
  std::size_t index = 0;  ///< number of stream instances consumed so far
  Protocol protocol = Protocol::prequential;
  std::vector<Metric> metrics;
};

struct PrequentialOptions {
  double theta = 0.0;
  /// Number of most recent decisions the balanced accuracy is taken over.
  std::size_t trailing_window = 100;
  /// Defaults to the model's own preference.
  std::optional<bool> normalize;
  /// Called with (stream index, score) before the instance is learned.
  std::function<void(std::size_t, const ScoredInstance&)> on_score;
};

/// Score, classify and record each instance, then learn from it.
///
/// Emits one record per instance carrying the balanced accuracy over the
/// trailing window. A class absent from the window is left out of the
/// average (so a window of normals only reports their recall).
std::vector<EvalRecord> prequential_eval(std::span<const LabeledInstance> stream, ExposeModel& model,
                                         const PrequentialOptions& options);

struct HoldoutOptions {
  double theta = 0.0;
  std::size_t every = 25;
  std::optional<bool> normalize;
};

/// Maps a stream position (0-based) to the key of its holdout set.
using IntervalOf = std::function<std::size_t(std::size_t index)>;

/// Learn from every instance; after every `every` updates evaluate AUC and
/// balanced accuracy at theta on the holdout set of the current interval.
/// Without `interval_of` the interval is the instance's concept_id.
std::vector<EvalRecord> holdout_eval(std::span<const LabeledInstance> stream, ExposeModel& model,
                                     const std::map<std::size_t, std::vector<LabeledInstance>>& holdout_sets,
                                     const HoldoutOptions& options, const IntervalOf& interval_of = {});

/// Rows "index,protocol,metric,value" after a header line.
void write_records(std::ostream& out, std::span<const EvalRecord> records);

}  // namespace expose
