#include "pogs/matrix_game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pogs/errors.hpp"

namespace pogs {

namespace {

constexpr double kReducedCostTol = 1e-11;
constexpr double kPivotTol = 1e-11;
constexpr int kStallLimit = 64;

// Simplex tableau for: maximize sum(y) subject to M'y <= 1, y >= 0, where
// M' has all entries in (0, 1]. The optimum w = sum(y) equals 1/value(M');
// y/w is the minimizer's strategy and the duals (reduced costs of the slack
// columns) divided by their sum give the maximizer's strategy.
struct Tableau {
  int m, n;                    // constraints x structural variables
  std::vector<double> t;       // (m+1) rows x (n+m+1) cols, last row = objective
  std::vector<int> basis;      // basic variable per constraint row

  Tableau(const Mat& mp) : m(mp.rows), n(mp.cols) {
    const int width = n + m + 1;
    t.assign(static_cast<size_t>(m + 1) * width, 0.0);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) at(i, j) = mp(i, j);
      at(i, n + i) = 1.0;
      at(i, n + m) = 1.0;
    }
    for (int j = 0; j < n; ++j) at(m, j) = -1.0;
    basis.resize(m);
    for (int i = 0; i < m; ++i) basis[i] = n + i;
  }

  double& at(int i, int j) {
    return t[static_cast<size_t>(i) * (n + m + 1) + j];
  }
  double at(int i, int j) const {
    return t[static_cast<size_t>(i) * (n + m + 1) + j];
  }

  int width() const { return n + m + 1; }

  int pick_entering(bool bland) const {
    int best = -1;
    double best_val = -kReducedCostTol;
    for (int j = 0; j < n + m; ++j) {
      const double rc = at(m, j);
      if (rc < -kReducedCostTol) {
        if (bland) return j;
        if (rc < best_val) {
          best_val = rc;
          best = j;
        }
      }
    }
    return best;
  }

  int pick_leaving(int col) const {
    int row = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
      const double piv = at(i, col);
      if (piv > kPivotTol) {
        const double ratio = at(i, n + m) / piv;
        if (ratio < best_ratio - 1e-15 ||
            (ratio <= best_ratio + 1e-15 &&
             (row == -1 || basis[i] < basis[row]))) {
          best_ratio = std::min(best_ratio, ratio);
          row = i;
        }
      }
    }
    return row;
  }

  void pivot(int row, int col) {
    const int w = width();
    const double piv = at(row, col);
    for (int j = 0; j < w; ++j) at(row, j) /= piv;
    at(row, col) = 1.0;
    for (int i = 0; i <= m; ++i) {
      if (i == row) continue;
      const double factor = at(i, col);
      if (factor == 0.0) continue;
      for (int j = 0; j < w; ++j) at(i, j) -= factor * at(row, j);
      at(i, col) = 0.0;
    }
    basis[row] = col;
  }
};

}  // namespace

MatrixGameSolution solve_matrix_game(const Mat& m) {
  if (m.rows < 1 || m.cols < 1) throw Error("matrix game needs at least 1x1");
  for (double v : m.data)
    if (!std::isfinite(v)) throw Error("matrix game entries must be finite");

  double lo = m.data[0], hi = m.data[0];
  for (double v : m.data) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double shift = (lo <= 0.0) ? 1.0 - lo : 0.0;
  const double scale = std::max(hi + shift, 1.0);

  Mat mp(m.rows, m.cols);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) mp(i, j) = (m(i, j) + shift) / scale;

  Tableau tab(mp);
  const int max_iters = 2000 * (m.rows + m.cols) + 2000;
  bool bland = false;
  int stall = 0;
  double last_obj = 0.0;
  for (int iter = 0;; ++iter) {
    if (iter > max_iters) throw Error("matrix game simplex did not terminate");
    const int col = tab.pick_entering(bland);
    if (col < 0) break;
    const int row = tab.pick_leaving(col);
    if (row < 0) throw Error("matrix game LP unbounded");  // cannot happen: M' > 0
    tab.pivot(row, col);
    const double obj = tab.at(tab.m, tab.n + tab.m);
    if (!bland) {
      stall = (obj > last_obj + 1e-14) ? 0 : stall + 1;
      if (stall >= kStallLimit) bland = true;
      last_obj = obj;
    }
  }

  const double w = tab.at(tab.m, tab.n + tab.m);  // sum of y at the optimum
  MatrixGameSolution sol;

  std::vector<double> y(m.cols, 0.0);
  for (int i = 0; i < tab.m; ++i)
    if (tab.basis[i] < m.cols) y[tab.basis[i]] = tab.at(i, tab.n + tab.m);
  std::vector<double> u(m.rows, 0.0);
  for (int i = 0; i < m.rows; ++i) u[i] = tab.at(tab.m, tab.n + i);

  auto normalize = [](std::vector<double>& v) {
    double sum = 0.0;
    for (double& x : v) {
      if (x < 0.0) x = 0.0;
      sum += x;
    }
    if (sum > 0.0)
      for (double& x : v) x /= sum;
  };
  normalize(y);
  normalize(u);
  sol.col_strategy = std::move(y);
  sol.row_strategy = std::move(u);

  sol.value = scale / w - shift;

  double worst_col = std::numeric_limits<double>::infinity();
  for (int j = 0; j < m.cols; ++j) {
    double v = 0.0;
    for (int i = 0; i < m.rows; ++i) v += sol.row_strategy[i] * m(i, j);
    worst_col = std::min(worst_col, v);
  }
  double worst_row = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < m.rows; ++i) {
    double v = 0.0;
    for (int j = 0; j < m.cols; ++j) v += m(i, j) * sol.col_strategy[j];
    worst_row = std::max(worst_row, v);
  }
  sol.residual =
      std::max({sol.value - worst_col, worst_row - sol.value, 0.0});
  return sol;
}

}  // namespace pogs
