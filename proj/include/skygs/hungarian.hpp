#pragma once

// Rectangular min-cost assignment (rows <= cols) by shortest augmenting
// paths with potentials. Missing edges are +infinity; negative costs are
// allowed. O(rows^2 * cols).

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace skygs {

inline constexpr double kNoEdge = std::numeric_limits<double>::infinity();

class CostMatrix {
 public:
  CostMatrix() = default;
  CostMatrix(std::size_t rows, std::size_t cols, double fill = kNoEdge)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct Matching {
  // Column matched to each row.
  std::vector<std::size_t> row_to_col;
  double total_cost = 0.0;
};

class InfeasibleMatching : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Every row is matched. Throws std::invalid_argument when rows > cols and
// InfeasibleMatching when some row cannot be matched through finite edges.
// Deterministic for identical input.
Matching hungarian_min_matching(const CostMatrix& cost);

}  // namespace skygs
