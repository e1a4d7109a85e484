#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pogs/belief.hpp"
#include "pogs/game_model.hpp"
#include "pogs/matrix_game.hpp"

namespace pogs::solver {

// Mixed decision rules per reachable node of the belief tree, keyed by the
// path from the root: a concatenation of "(a,b,x')" segments using the
// model's identifiers, the root being the empty string. Each vector is
// aligned with the admissible action list at the node's observable state.
struct PolicyEntry {
  std::vector<double> p1;
  std::vector<double> p2;
};

struct PolicyTree {
  std::map<std::string, PolicyEntry> entries;
};

std::string path_segment(const GameSpec& spec, int a, int b, int x_next);
std::string path_key(const GameSpec& spec, const History& h);

struct SolverOptions {
  long long node_budget = 5'000'000;
  double merge_tol = kDefaultMergeTol;
  bool memoize = false;
  bool parallel = false;
};

struct SolveResult {
  std::optional<double> value;                       // finite horizon
  std::optional<std::pair<double, double>> bracket;  // infinite horizon
  PolicyTree policy;
  int depth = 0;
  long long nodes = 0;
  std::string bound_type;  // epsilon_concave | delta_convex | sandwich
  double tail = 0.0;       // certified gap / policy suboptimality bound
  // Root backup values per depth for the three leaf functions (diagnostics;
  // populated by solve_infinite).
  std::vector<double> seq_v0;
  std::vector<double> seq_lower;
  std::vector<double> seq_upper;
  double wall_seconds = 0.0;  // not serialized
};

// Terminal value: expected utility of the accumulated cost under the belief.
double v0_terminal(const GameSpec& spec, const Belief& mu);

// Closed-form envelopes on the infinite-horizon value: the expected utility
// if every remaining stage cost were at its lower / upper bound.
double bound_lower(const GameSpec& spec, const Belief& mu, double z);
double bound_upper(const GameSpec& spec, const Belief& mu, double z);

// Bound on the gap between the depth-n backup and the infinite-horizon
// value: beta^n * (z*c_up/(1-beta)) * U'_-(z*c_lo) for concave utilities,
// beta^n * (z*c_up/(1-beta)) * sum_w U'_+(s + z*c_up/(1-beta)) for convex
// ones. The two agree for linear utility.
double tail_bound(const GameSpec& spec, int n, double z, const Belief& mu);

using ValueFn = std::function<double(int x, const Belief& mu, double z)>;

// Expected one-step continuation values over the admissible action pairs:
// entry (a, b) averages v_next over the successor augmented states weighted
// by the observable transition law. Children with zero probability are
// never expanded.
Mat payoff_matrix(const GameSpec& spec, const AugmentedState& state,
                  const ValueFn& v_next, double merge_tol = kDefaultMergeTol);

struct BellmanResult {
  double value = 0.0;
  std::vector<double> p1;
  std::vector<double> p2;
};

// One minimax backup: the matrix-game value of payoff_matrix with the
// optimal mixed strategies attached.
BellmanResult bellman_T(const GameSpec& spec, const AugmentedState& state,
                        const ValueFn& v_next,
                        double merge_tol = kDefaultMergeTol);

// N-stage value and saddle-point decision rules by exact backward induction
// over the reachable belief tree rooted at (x0, initial belief, z=1).
SolveResult solve_finite(const GameSpec& spec, int x0, int horizon,
                         const SolverOptions& options = {});

// Value of a fixed pair of behavioral policies (no optimization): forward
// expansion, backward expectation. Throws Error when a policy lacks an
// entry for a reachable node.
double evaluate_policy_pair(const GameSpec& spec, int x0,
                            const PolicyTree& pi, const PolicyTree& sigma,
                            int horizon,
                            const SolverOptions& options = {});

// Brackets the infinite-horizon value: picks the smallest depth whose tail
// bound meets tol, then runs the three backups (terminal value and the two
// envelopes) over one shared tree. The bracket is [depth-n lower-envelope
// backup, depth-n upper-envelope backup]; the root strategies of the
// terminal-value backup are returned as the first-stage decision rules.
SolveResult solve_infinite(const GameSpec& spec, int x0, double tol,
                           const SolverOptions& options = {});

}  // namespace pogs::solver
