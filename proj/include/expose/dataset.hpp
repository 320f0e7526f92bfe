#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace expose {

/// Class labels. `normal` plays the role of the positive class throughout.
enum class Label { normal, anomaly };

std::string_view to_string(Label label);
/// Accepts exactly "normal" or "anomaly".
std::optional<Label> parse_label(std::string_view text);

/// Read-only view of one input vector.
using InputView = std::span<const double>;

/// Dense row-major collection of equally sized, finite input vectors.
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::size_t dim);
  /// Takes ownership of `values` laid out row-major with `dim` columns.
  Dataset(std::size_t dim, std::vector<double> values);

  static Dataset from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t size() const { return dim_ == 0 ? 0 : values_.size() / dim_; }
  std::size_t dim() const { return dim_; }
  bool empty() const { return size() == 0; }

  InputView row(std::size_t i) const { return {values_.data() + i * dim_, dim_}; }
  InputView operator[](std::size_t i) const { return row(i); }

  /// Throws std::invalid_argument on dimension mismatch or non-finite values.
  void push_back(InputView x);
  void reserve(std::size_t rows) { values_.reserve(rows * dim_); }

  const std::vector<double>& values() const { return values_; }

  /// Copies rows [first, last).
  Dataset slice(std::size_t first, std::size_t last) const;
  Dataset select(std::span<const std::size_t> indices) const;

 private:
  std::size_t dim_ = 0;
  std::vector<double> values_;
};

/// One element of a labeled stream or test set.
struct LabeledInstance {
  std::vector<double> x;
  Label label = Label::normal;
  std::size_t concept_id = 0;
};

/// Throws std::invalid_argument if any entry is NaN or infinite.
void require_finite(InputView x, std::string_view what);
void require_same_dim(std::size_t a, std::size_t b, std::string_view what);

}  // namespace expose
