#include "expose/dataset.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace expose {

std::string_view to_string(Label label) {
  return label == Label::normal ? "normal" : "anomaly";
}

std::optional<Label> parse_label(std::string_view text) {
  if (text == "normal") return Label::normal;
  if (text == "anomaly") return Label::anomaly;
  return std::nullopt;
}

void require_finite(InputView x, std::string_view what) {
  for (double v : x) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument(std::string(what) + ": non-finite value");
    }
  }
}

void require_same_dim(std::size_t a, std::size_t b, std::string_view what) {
  if (a != b) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

Dataset::Dataset(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw std::invalid_argument("Dataset: dimension must be >= 1");
}

Dataset::Dataset(std::size_t dim, std::vector<double> values)
    : dim_(dim), values_(std::move(values)) {
  if (dim == 0) throw std::invalid_argument("Dataset: dimension must be >= 1");
  if (values_.size() % dim != 0) {
    throw std::invalid_argument("Dataset: value count is not a multiple of the dimension");
  }
  require_finite(values_, "Dataset");
}

Dataset Dataset::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw std::invalid_argument("Dataset: no rows");
  Dataset out(rows.front().size());
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r);
  return out;
}

void Dataset::push_back(InputView x) {
  if (dim_ == 0) {
    if (x.empty()) throw std::invalid_argument("Dataset: dimension must be >= 1");
    dim_ = x.size();
  }
  require_same_dim(dim_, x.size(), "Dataset::push_back");
  require_finite(x, "Dataset::push_back");
  values_.insert(values_.end(), x.begin(), x.end());
}

Dataset Dataset::slice(std::size_t first, std::size_t last) const {
  if (first > last || last > size()) throw std::out_of_range("Dataset::slice");
  return Dataset(dim_, std::vector<double>(values_.begin() + static_cast<std::ptrdiff_t>(first * dim_),
                                           values_.begin() + static_cast<std::ptrdiff_t>(last * dim_)));
}

Dataset Dataset::select(std::span<const std::size_t> indices) const {
  Dataset out(dim_);
  out.reserve(indices.size());
  for (std::size_t i : indices) {
    if (i >= size()) throw std::out_of_range("Dataset::select");
    out.push_back(row(i));
  }
  return out;
}

}  // namespace expose
