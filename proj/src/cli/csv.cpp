#include "expose/cli/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace expose::cli {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

[[noreturn]] void fail(std::size_t line_no, const std::string& why) {
  throw std::runtime_error("csv line " + std::to_string(line_no) + ": " + why);
}

bool is_data_row(const std::vector<std::string_view>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (parse_double(fields[i])) continue;
    if (i + 1 == fields.size() && i > 0 && parse_label(fields[i])) continue;
    return false;
  }
  return true;
}

}  // namespace

std::optional<double> parse_double(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return std::nullopt;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf, ptr);
}

CsvDataset read_csv(std::istream& in) {
  CsvDataset out;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  bool first_content = true;
  bool labeled = false;
  std::vector<double> values;
  std::vector<Label> labels;
  std::size_t rows = 0;

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(line);
    if (first_content) {
      first_content = false;
      if (!is_data_row(fields)) {
        for (auto f : fields) out.header.emplace_back(f);
        width = fields.size();
        continue;
      }
    }
    if (width == 0) width = fields.size();
    if (fields.size() != width) fail(line_no, "expected " + std::to_string(width) + " fields, got " + std::to_string(fields.size()));
    if (rows == 0) labeled = parse_label(fields.back()).has_value() && fields.size() > 1;

    const std::size_t numeric = labeled ? width - 1 : width;
    for (std::size_t i = 0; i < numeric; ++i) {
      const auto v = parse_double(fields[i]);
      if (!v) fail(line_no, "not a number: '" + std::string(fields[i]) + "'");
      if (!std::isfinite(*v)) fail(line_no, "non-finite value");
      values.push_back(*v);
    }
    if (labeled) {
      const auto label = parse_label(fields.back());
      if (!label) fail(line_no, "label must be 'normal' or 'anomaly', got '" + std::string(fields.back()) + "'");
      labels.push_back(*label);
    }
    ++rows;
  }
  if (rows == 0) throw std::runtime_error("csv: no data rows");
  const std::size_t dim = labeled ? width - 1 : width;
  if (dim == 0) throw std::runtime_error("csv: no numeric columns");
  out.data = Dataset(dim, std::move(values));
  if (labeled) out.labels = std::move(labels);
  return out;
}

CsvDataset read_csv_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  return read_csv(in);
}

void write_csv(std::ostream& out, const Dataset& data, const std::vector<Label>* labels) {
  for (std::size_t j = 0; j < data.dim(); ++j) out << (j ? "," : "") << 'x' << (j + 1);
  if (labels) out << ",label";
  out << '\n';
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto row = data[i];
    for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << format_double(row[j]);
    if (labels) out << ',' << to_string((*labels)[i]);
    out << '\n';
  }
}

void write_instances(std::ostream& out, const std::vector<LabeledInstance>& instances) {
  if (instances.empty()) return;
  const std::size_t d = instances.front().x.size();
  for (std::size_t j = 0; j < d; ++j) out << (j ? "," : "") << 'x' << (j + 1);
  out << ",label\n";
  for (const auto& inst : instances) {
    for (std::size_t j = 0; j < inst.x.size(); ++j) out << (j ? "," : "") << format_double(inst.x[j]);
    out << ',' << to_string(inst.label) << '\n';
  }
}

std::vector<LabeledInstance> to_instances(const CsvDataset& csv) {
  if (!csv.labels) throw std::runtime_error("input has no label column");
  std::vector<LabeledInstance> out;
  out.reserve(csv.data.size());
  for (std::size_t i = 0; i < csv.data.size(); ++i) {
    const auto row = csv.data[i];
    out.push_back({std::vector<double>(row.begin(), row.end()), (*csv.labels)[i], 0});
  }
  return out;
}

Matrix read_metric_matrix(std::istream& in, std::vector<std::string>& algorithm_names) {
  CsvDataset csv = read_csv(in);
  if (csv.labels) throw std::runtime_error("metric matrix must be purely numeric");
  const std::size_t k = csv.data.dim();
  algorithm_names = csv.header;
  if (algorithm_names.empty()) {
    for (std::size_t j = 0; j < k; ++j) algorithm_names.push_back("A" + std::to_string(j + 1));
  }
  return Matrix(csv.data.size(), k, csv.data.values());
}

}  // namespace expose::cli
