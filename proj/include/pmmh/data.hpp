#ifndef PMMH_DATA_HPP
#define PMMH_DATA_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace pmmh {

// Minimal dense row-major matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), v_(rows * cols, fill) {}

  double& operator()(std::size_t i, std::size_t j) { return v_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return v_[i * cols_ + j]; }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return v_.empty(); }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> v_;
};

struct MissingCell {
  int row = 0;
  int col = 0;
  friend bool operator==(const MissingCell&, const MissingCell&) = default;
};

// Binary responses, covariate matrix, and the inclusion-indicator mask.
// Masked cells are poisoned with NaN so the sentinel can never leak into a
// finite result; every read must go through the mask.
class Dataset {
 public:
  Dataset(std::vector<int> y, Matrix x, std::vector<std::uint8_t> mask,
          std::vector<std::string> column_names);

  int n_rows() const { return static_cast<int>(y_.size()); }
  int n_cols() const { return static_cast<int>(column_names_.size()); }

  int response(int i) const { return y_[i]; }
  bool observed(int i, int j) const { return mask_[i * n_cols() + j] != 0; }
  double value(int i, int j) const { return x_(i, j); }

  const std::vector<int>& responses() const { return y_; }
  const Matrix& covariates() const { return x_; }
  const std::vector<std::uint8_t>& mask() const { return mask_; }
  const std::vector<std::string>& column_names() const { return column_names_; }
  int column_index(std::string_view name) const;  // -1 when absent

  // Missing cells in row-major order (row, then ascending column), which is
  // also the sampling order the sequential covariate model requires.
  const std::vector<MissingCell>& missing_cells() const { return missing_cells_; }
  // Ordinal of cell (i, j) within missing_cells(), or -1 when observed.
  int missing_ordinal(int i, int j) const { return missing_ordinal_[i * n_cols() + j]; }
  const std::vector<int>& rows_with_missing() const { return rows_with_missing_; }
  std::vector<int> missing_count_by_column() const;

 private:
  std::vector<int> y_;
  Matrix x_;
  std::vector<std::uint8_t> mask_;
  std::vector<std::string> column_names_;
  std::vector<MissingCell> missing_cells_;
  std::vector<int> missing_ordinal_;
  std::vector<int> rows_with_missing_;
};

// One complete assignment of values to the missing cells, aligned with
// Dataset::missing_cells(). The alignment is the sparse-map invariant: entry t
// belongs to cell t and nothing else.
struct MissingFill {
  std::vector<double> values;
};

// Read-through view combining observed values with a fill.
class FilledValues {
 public:
  FilledValues(const Dataset& data, const MissingFill& fill) : data_(&data), fill_(&fill) {}

  double operator()(int i, int j) const {
    const int t = data_->missing_ordinal(i, j);
    return t < 0 ? data_->value(i, j) : fill_->values[t];
  }

 private:
  const Dataset* data_;
  const MissingFill* fill_;
};

}  // namespace pmmh

#endif
