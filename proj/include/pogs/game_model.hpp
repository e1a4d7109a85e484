#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "pogs/utility.hpp"

namespace pogs {

// Finite two-player zero-sum game with an observable state component x, a
// hidden component y, a jointly controlled transition kernel over (x', y')
// and a strictly positive stage cost that may depend on the hidden state.
// Player 1 maximizes, player 2 minimizes.
//
// All tables are dense and index-addressed; string identifiers exist only at
// the file boundary. finalize() must be called once after the tables are
// filled; it caches the x-marginal of the kernel and the cost bounds.
struct GameSpec {
  std::vector<std::string> observable_states;
  std::vector<std::string> hidden_states;
  std::vector<std::string> actions_p1;
  std::vector<std::string> actions_p2;

  // Per observable state, ascending indices of admissible actions.
  std::vector<std::vector<int>> admissible_p1;
  std::vector<std::vector<int>> admissible_p2;

  std::vector<double> cost_table;    // [x][y][a][b]
  std::vector<double> kernel_table;  // [x][y][a][b][x'][y']
  std::vector<double> initial_hidden;
  double discount = 0.0;
  Utility utility = Utility::linear();

  double cost_lower = 0.0;
  double cost_upper = 0.0;

  int num_x() const { return static_cast<int>(observable_states.size()); }
  int num_y() const { return static_cast<int>(hidden_states.size()); }
  int num_a() const { return static_cast<int>(actions_p1.size()); }
  int num_b() const { return static_cast<int>(actions_p2.size()); }

  bool admissible1(int x, int a) const {
    return adm1_mask_[static_cast<size_t>(x) * num_a() + a] != 0;
  }
  bool admissible2(int x, int b) const {
    return adm2_mask_[static_cast<size_t>(x) * num_b() + b] != 0;
  }
  bool admissible(int x, int a, int b) const {
    return admissible1(x, a) && admissible2(x, b);
  }

  size_t cost_index(int x, int y, int a, int b) const {
    return ((static_cast<size_t>(x) * num_y() + y) * num_a() + a) * num_b() +
           b;
  }
  double cost(int x, int y, int a, int b) const {
    return cost_table[cost_index(x, y, a, b)];
  }
  double q(int x, int y, int a, int b, int xn, int yn) const {
    return kernel_table[cost_index(x, y, a, b) * num_x() * num_y() +
                        static_cast<size_t>(xn) * num_y() + yn];
  }
  // Cached sum of q over the next hidden state.
  double q_marginal(int x, int y, int a, int b, int xn) const {
    return qx_table_[cost_index(x, y, a, b) * num_x() + xn];
  }

  int x_index(const std::string& id) const { return lookup(x_ids_, id); }
  int y_index(const std::string& id) const { return lookup(y_ids_, id); }
  int a_index(const std::string& id) const { return lookup(a_ids_, id); }
  int b_index(const std::string& id) const { return lookup(b_ids_, id); }

  void finalize();
  bool finalized() const { return finalized_; }

 private:
  static int lookup(const std::unordered_map<std::string, int>& m,
                    const std::string& id) {
    auto it = m.find(id);
    return it == m.end() ? -1 : it->second;
  }

  std::vector<uint8_t> adm1_mask_;
  std::vector<uint8_t> adm2_mask_;
  std::vector<double> qx_table_;  // [x][y][a][b][x']
  std::unordered_map<std::string, int> x_ids_, y_ids_, a_ids_, b_ids_;
  bool finalized_ = false;
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// Checks every structural requirement the rest of the library relies on:
// stochastic kernel rows, strictly positive bounded costs, nonempty
// admissible sets, discount in (0,1), initial distribution summing to one,
// utility strictly increasing on a sampled grid. Never throws; all findings
// land in the report.
ValidationReport validate(const GameSpec& spec);

// Marginal transition law of the next observable state given full knowledge
// of the current hidden state. Throws Error on an inadmissible action pair.
std::vector<double> q_marginal_x(const GameSpec& spec, int x, int y, int a,
                                 int b);

// Same marginal averaged over a distribution on the hidden state.
double q_x_under_belief_single(const GameSpec& spec, int x,
                               const std::vector<double>& y_dist, int a, int b,
                               int x_next);
std::vector<double> q_x_under_belief(const GameSpec& spec, int x,
                                     const std::vector<double>& y_dist, int a,
                                     int b);

// Observable history (x0, a0, b0, x1, ..., xn).
struct HistoryStep {
  int a = 0;
  int b = 0;
  int x_next = 0;
};

struct History {
  int x0 = 0;
  std::vector<HistoryStep> steps;

  int length() const { return static_cast<int>(steps.size()); }
  int x_at(int k) const { return k == 0 ? x0 : steps[k - 1].x_next; }
  int last_x() const { return x_at(length()); }
};

// Verifies admissibility of every action pair along the history.
bool history_admissible(const GameSpec& spec, const History& h);

}  // namespace pogs
