#include "pmmh/data.hpp"

#include <limits>
#include <stdexcept>

namespace pmmh {

Dataset::Dataset(std::vector<int> y, Matrix x, std::vector<std::uint8_t> mask,
                 std::vector<std::string> column_names)
    : y_(std::move(y)), x_(std::move(x)), mask_(std::move(mask)),
      column_names_(std::move(column_names)) {
  const std::size_t n = y_.size();
  const std::size_t p = column_names_.size();
  if (x_.rows() != n || x_.cols() != p || mask_.size() != n * p) {
    throw std::invalid_argument("dataset dimensions do not agree");
  }
  for (int v : y_) {
    if (v != 0 && v != 1) throw std::invalid_argument("responses must be 0 or 1");
  }

  missing_ordinal_.assign(n * p, -1);
  for (std::size_t i = 0; i < n; ++i) {
    bool any_missing = false;
    for (std::size_t j = 0; j < p; ++j) {
      if (mask_[i * p + j] != 0) continue;
      missing_ordinal_[i * p + j] = static_cast<int>(missing_cells_.size());
      missing_cells_.push_back({static_cast<int>(i), static_cast<int>(j)});
      x_(i, j) = std::numeric_limits<double>::quiet_NaN();
      any_missing = true;
    }
    if (any_missing) rows_with_missing_.push_back(static_cast<int>(i));
  }
}

int Dataset::column_index(std::string_view name) const {
  for (std::size_t j = 0; j < column_names_.size(); ++j) {
    if (column_names_[j] == name) return static_cast<int>(j);
  }
  return -1;
}

std::vector<int> Dataset::missing_count_by_column() const {
  std::vector<int> counts(column_names_.size(), 0);
  for (const MissingCell& cell : missing_cells_) counts[cell.col] += 1;
  return counts;
}

}  // namespace pmmh
