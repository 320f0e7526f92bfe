#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "expose/dataset.hpp"
#include "expose/linalg.hpp"

namespace expose::cli {

/// Rectangular numeric CSV with an optional trailing "normal"/"anomaly"
/// column and an optional single header row.
struct CsvDataset {
  Dataset data;
  std::optional<std::vector<Label>> labels;
  std::vector<std::string> header;
};

/// Throws std::runtime_error naming the line on malformed input (ragged
/// rows, unparseable numbers, unknown labels, no data rows).
CsvDataset read_csv(std::istream& in);
CsvDataset read_csv_file(const std::filesystem::path& path);

void write_csv(std::ostream& out, const Dataset& data, const std::vector<Label>* labels = nullptr);
void write_instances(std::ostream& out, const std::vector<LabeledInstance>& instances);

/// Converts a labeled CSV into stream instances (concept_id 0).
std::vector<LabeledInstance> to_instances(const CsvDataset& csv);

/// m x k matrix of metrics (datasets x algorithms). Header row, when
/// present, names the algorithms.
Matrix read_metric_matrix(std::istream& in, std::vector<std::string>& algorithm_names);

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);
std::optional<double> parse_double(std::string_view text);

}  // namespace expose::cli
