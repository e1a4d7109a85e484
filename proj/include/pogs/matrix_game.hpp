#pragma once

#include <vector>

namespace pogs {

// Minimal dense row-major matrix; rows are player-1 (maximizer) actions,
// columns player-2 (minimizer) actions.
struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Mat() = default;
  Mat(int r, int c, double fill = 0.0)
      : rows(r), cols(c), data(static_cast<size_t>(r) * c, fill) {}

  double& operator()(int i, int j) {
    return data[static_cast<size_t>(i) * cols + j];
  }
  double operator()(int i, int j) const {
    return data[static_cast<size_t>(i) * cols + j];
  }
};

struct MatrixGameSolution {
  double value = 0.0;
  std::vector<double> row_strategy;  // optimal mixed strategy of the maximizer
  std::vector<double> col_strategy;  // optimal mixed strategy of the minimizer
  // A posteriori guarantee gap: min_j (row'M)_j >= value - residual and
  // max_i (M col)_i <= value + residual.
  double residual = 0.0;
};

// Exact value and optimal mixed strategies of a finite zero-sum matrix game
// via the standard LP formulation (entries shifted positive, normalized),
// solved by a dense tableau simplex. Dantzig pricing with lowest-index tie
// break, switching to Bland's rule if the objective stalls, so the output is
// deterministic and cycling-free. Throws Error on empty or non-finite input.
MatrixGameSolution solve_matrix_game(const Mat& m);

}  // namespace pogs
