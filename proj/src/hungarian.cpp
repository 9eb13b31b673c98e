#include "skygs/hungarian.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace skygs {

Matching hungarian_min_matching(const CostMatrix& cost) {
  const std::size_t n = cost.rows();
  const std::size_t m = cost.cols();
  if (n > m) throw std::invalid_argument("hungarian_min_matching: more rows than columns");
  Matching result;
  if (n == 0) return result;

  // 1-based potentials; column 0 is the sentinel root of each search tree.
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> match_of_col(m + 1, 0), way(m + 1, 0);
  std::vector<double> min_slack(m + 1);
  std::vector<char> used(m + 1);

  for (std::size_t row = 1; row <= n; ++row) {
    match_of_col[0] = row;
    std::size_t col0 = 0;
    std::fill(min_slack.begin(), min_slack.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[col0] = 1;
      const std::size_t r0 = match_of_col[col0];
      double delta = kInf;
      std::size_t col1 = 0;
      for (std::size_t c = 1; c <= m; ++c) {
        if (used[c]) continue;
        const double w = cost(r0 - 1, c - 1);
        if (w != kNoEdge) {
          const double reduced = w - u[r0] - v[c];
          if (reduced < min_slack[c]) {
            min_slack[c] = reduced;
            way[c] = col0;
          }
        }
        if (min_slack[c] < delta) {
          delta = min_slack[c];
          col1 = c;
        }
      }
      if (col1 == 0 || !std::isfinite(delta))
        throw InfeasibleMatching("hungarian_min_matching: row " + std::to_string(row - 1) + " has no augmenting path");
      for (std::size_t c = 0; c <= m; ++c) {
        if (used[c]) {
          u[match_of_col[c]] += delta;
          v[c] -= delta;
        } else {
          min_slack[c] -= delta;
        }
      }
      col0 = col1;
    } while (match_of_col[col0] != 0);
    // Flip the augmenting path.
    do {
      const std::size_t col1 = way[col0];
      match_of_col[col0] = match_of_col[col1];
      col0 = col1;
    } while (col0 != 0);
  }

  result.row_to_col.assign(n, 0);
  for (std::size_t c = 1; c <= m; ++c)
    if (match_of_col[c] != 0) result.row_to_col[match_of_col[c] - 1] = c - 1;
  for (std::size_t r = 0; r < n; ++r) result.total_cost += cost(r, result.row_to_col[r]);
  return result;
}

}  // namespace skygs
