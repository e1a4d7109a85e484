#include "pogs/solver.hpp"

#include <array>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <future>
#include <memory>
#include <mutex>
#include <sstream>
#include <unordered_map>

#include "pogs/errors.hpp"

namespace pogs::solver {

namespace {

enum LeafKind { kV0 = 0, kLower = 1, kUpper = 2 };

double leaf_value(const GameSpec& spec, LeafKind kind, const Belief& mu,
                  double z) {
  switch (kind) {
    case kV0:
      return v0_terminal(spec, mu);
    case kLower:
      return bound_lower(spec, mu, z);
    case kUpper:
      return bound_upper(spec, mu, z);
  }
  return 0.0;
}

// Values for every horizon-to-go k = 0..max_depth-depth, one vector per
// requested leaf function.
struct NodeVal {
  std::array<std::vector<double>, 3> v;
};
using NodeValPtr = std::shared_ptr<const NodeVal>;

std::string make_key(int x, int depth, const Belief& mu) {
  std::string key;
  key.reserve(8 + mu.size() * 20);
  auto put32 = [&key](uint32_t v) {
    for (int i = 0; i < 4; ++i) key.push_back(char((v >> (8 * i)) & 0xff));
  };
  auto put64 = [&key](uint64_t v) {
    for (int i = 0; i < 8; ++i) key.push_back(char((v >> (8 * i)) & 0xff));
  };
  put32(static_cast<uint32_t>(x));
  put32(static_cast<uint32_t>(depth));
  for (const auto& atom : mu.atoms()) {
    put32(static_cast<uint32_t>(atom.y));
    put64(std::bit_cast<uint64_t>(atom.s));
    put64(std::bit_cast<uint64_t>(atom.w));
  }
  return key;
}

struct ChildNode {
  int a_slot, b_slot, x_next;
  double prob;
  Belief mu;
};

// Exact depth-first evaluator over the reachable belief tree. Pure function
// of (x, belief, depth), so memoization and subtree parallelism cannot
// change any output bit.
class TreeEval {
 public:
  TreeEval(const GameSpec& spec, const SolverOptions& opts, int max_depth,
           unsigned kinds_mask)
      : spec_(spec), opts_(opts), max_depth_(max_depth), kinds_(kinds_mask) {}

  long long nodes() const { return nodes_.load(); }

  void tick() {
    if (++nodes_ > opts_.node_budget)
      throw BudgetExceeded("node budget exceeded");
  }

  std::vector<ChildNode> expand(int x, const Belief& mu, double z) const {
    const auto y_marg = mu.y_marginal(spec_.num_y());
    std::vector<ChildNode> children;
    const auto& adm1 = spec_.admissible_p1[x];
    const auto& adm2 = spec_.admissible_p2[x];
    children.reserve(adm1.size() * adm2.size() * spec_.num_x());
    for (size_t ai = 0; ai < adm1.size(); ++ai)
      for (size_t bi = 0; bi < adm2.size(); ++bi)
        for (int xn = 0; xn < spec_.num_x(); ++xn) {
          const double prob = q_x_under_belief_single(spec_, x, y_marg,
                                                      adm1[ai], adm2[bi], xn);
          if (prob > 0.0)
            children.push_back({static_cast<int>(ai), static_cast<int>(bi),
                                xn, prob,
                                phi_update(spec_, x, adm1[ai], adm2[bi], xn,
                                           mu, z, opts_.merge_tol)});
        }
    return children;
  }

  NodeValPtr eval(int x, const Belief& mu, int depth, double z,
                  bool parallel_here) {
    std::string key;
    if (opts_.memoize) {
      key = make_key(x, depth, mu);
      std::lock_guard<std::mutex> lock(memo_mu_);
      auto it = memo_.find(key);
      if (it != memo_.end()) return it->second;
    }
    tick();

    auto out = std::make_shared<NodeVal>();
    const int remaining = max_depth_ - depth;
    for (int kind = 0; kind < 3; ++kind)
      if (kinds_ & (1u << kind)) {
        out->v[kind].resize(remaining + 1);
        out->v[kind][0] =
            leaf_value(spec_, static_cast<LeafKind>(kind), mu, z);
      }

    if (remaining > 0) {
      const auto children = expand(x, mu, z);
      std::vector<NodeValPtr> vals(children.size());
      const double z_next = z * spec_.discount;
      if (parallel_here && children.size() > 1) {
        std::vector<std::future<NodeValPtr>> futures;
        futures.reserve(children.size());
        for (size_t i = 0; i < children.size(); ++i)
          futures.push_back(std::async(std::launch::async, [&, i]() {
            return eval(children[i].x_next, children[i].mu, depth + 1, z_next,
                        false);
          }));
        for (size_t i = 0; i < futures.size(); ++i) vals[i] = futures[i].get();
      } else {
        for (size_t i = 0; i < children.size(); ++i)
          vals[i] = eval(children[i].x_next, children[i].mu, depth + 1, z_next,
                         false);
      }

      const int na = static_cast<int>(spec_.admissible_p1[x].size());
      const int nb = static_cast<int>(spec_.admissible_p2[x].size());
      for (int k = 1; k <= remaining; ++k)
        for (int kind = 0; kind < 3; ++kind) {
          if (!(kinds_ & (1u << kind))) continue;
          Mat m(na, nb);
          for (size_t i = 0; i < children.size(); ++i)
            m(children[i].a_slot, children[i].b_slot) +=
                children[i].prob * vals[i]->v[kind][k - 1];
          out->v[kind][k] = solve_matrix_game(m).value;
        }
    }

    if (opts_.memoize) {
      std::lock_guard<std::mutex> lock(memo_mu_);
      auto [it, inserted] = memo_.emplace(std::move(key), out);
      return it->second;
    }
    return out;
  }

 private:
  const GameSpec& spec_;
  SolverOptions opts_;
  int max_depth_;
  unsigned kinds_;
  std::atomic<long long> nodes_{0};
  std::mutex memo_mu_;
  std::unordered_map<std::string, NodeValPtr> memo_;
};

void build_policy(TreeEval& ev, const GameSpec& spec, int horizon,
                  const std::string& path, int x, const Belief& mu, int depth,
                  double z, PolicyTree& out) {
  if (depth >= horizon) return;
  ev.tick();
  const auto children = ev.expand(x, mu, z);
  const double z_next = z * spec.discount;
  std::vector<NodeValPtr> vals(children.size());
  for (size_t i = 0; i < children.size(); ++i)
    vals[i] = ev.eval(children[i].x_next, children[i].mu, depth + 1, z_next,
                      false);

  const int na = static_cast<int>(spec.admissible_p1[x].size());
  const int nb = static_cast<int>(spec.admissible_p2[x].size());
  const int k = horizon - depth;
  Mat m(na, nb);
  for (size_t i = 0; i < children.size(); ++i)
    m(children[i].a_slot, children[i].b_slot) +=
        children[i].prob * vals[i]->v[kV0][k - 1];
  auto sol = solve_matrix_game(m);
  out.entries[path] = {sol.row_strategy, sol.col_strategy};

  const auto& adm1 = spec.admissible_p1[x];
  const auto& adm2 = spec.admissible_p2[x];
  for (const auto& child : children)
    build_policy(ev, spec, horizon,
                 path + path_segment(spec, adm1[child.a_slot],
                                     adm2[child.b_slot], child.x_next),
                 child.x_next, child.mu, depth + 1, z_next, out);
}

void check_mixed(const std::vector<double>& p, size_t expected,
                 const std::string& path, const char* who) {
  if (p.size() != expected)
    throw Error(std::string(who) + " policy entry has wrong arity at node '" +
                path + "'");
  double sum = 0.0;
  for (double v : p) {
    if (v < -1e-12 || !std::isfinite(v))
      throw Error(std::string(who) + " policy entry not a distribution at '" +
                  path + "'");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw Error(std::string(who) + " policy entry does not sum to 1 at '" +
                path + "'");
}

double eval_policy_node(const GameSpec& spec, const PolicyTree& pi,
                        const PolicyTree& sigma, int horizon,
                        const std::string& path, int x, const Belief& mu,
                        int depth, double z, const SolverOptions& opts,
                        long long& nodes) {
  if (++nodes > opts.node_budget)
    throw BudgetExceeded("node budget exceeded");
  if (depth >= horizon) return v0_terminal(spec, mu);

  const auto& adm1 = spec.admissible_p1[x];
  const auto& adm2 = spec.admissible_p2[x];
  auto it1 = pi.entries.find(path);
  if (it1 == pi.entries.end())
    throw Error("player-1 policy undefined at reachable node '" + path + "'");
  auto it2 = sigma.entries.find(path);
  if (it2 == sigma.entries.end())
    throw Error("player-2 policy undefined at reachable node '" + path + "'");
  const auto& zeta = it1->second.p1;
  const auto& eta = it2->second.p2;
  check_mixed(zeta, adm1.size(), path, "player-1");
  check_mixed(eta, adm2.size(), path, "player-2");

  const auto y_marg = mu.y_marginal(spec.num_y());
  const double z_next = z * spec.discount;
  double total = 0.0;
  for (size_t ai = 0; ai < adm1.size(); ++ai)
    for (size_t bi = 0; bi < adm2.size(); ++bi) {
      const double pw = zeta[ai] * eta[bi];
      if (pw <= 0.0) continue;
      double inner = 0.0;
      for (int xn = 0; xn < spec.num_x(); ++xn) {
        const double prob =
            q_x_under_belief_single(spec, x, y_marg, adm1[ai], adm2[bi], xn);
        if (prob <= 0.0) continue;
        const Belief child = phi_update(spec, x, adm1[ai], adm2[bi], xn, mu,
                                        z, opts.merge_tol);
        inner += prob * eval_policy_node(
                            spec, pi, sigma, horizon,
                            path + path_segment(spec, adm1[ai], adm2[bi], xn),
                            xn, child, depth + 1, z_next, opts, nodes);
      }
      total += pw * inner;
    }
  return total;
}

std::string shape_label(UtilityShape shape) {
  switch (shape) {
    case UtilityShape::kConcave:
      return "epsilon_concave";
    case UtilityShape::kConvex:
      return "delta_convex";
    case UtilityShape::kBoth:
      return "sandwich";
  }
  return "sandwich";
}

}  // namespace

std::string path_segment(const GameSpec& spec, int a, int b, int x_next) {
  return "(" + spec.actions_p1[a] + "," + spec.actions_p2[b] + "," +
         spec.observable_states[x_next] + ")";
}

std::string path_key(const GameSpec& spec, const History& h) {
  std::string key;
  for (const auto& step : h.steps)
    key += path_segment(spec, step.a, step.b, step.x_next);
  return key;
}

double v0_terminal(const GameSpec& spec, const Belief& mu) {
  double total = 0.0;
  for (const auto& atom : mu.atoms())
    total += atom.w * spec.utility.eval(atom.s);
  return total;
}

double bound_lower(const GameSpec& spec, const Belief& mu, double z) {
  const double tail = z * spec.cost_lower / (1.0 - spec.discount);
  double total = 0.0;
  for (const auto& atom : mu.atoms())
    total += atom.w * spec.utility.eval(atom.s + tail);
  return total;
}

double bound_upper(const GameSpec& spec, const Belief& mu, double z) {
  const double tail = z * spec.cost_upper / (1.0 - spec.discount);
  double total = 0.0;
  for (const auto& atom : mu.atoms())
    total += atom.w * spec.utility.eval(atom.s + tail);
  return total;
}

double tail_bound(const GameSpec& spec, int n, double z, const Belief& mu) {
  double beta_n = 1.0;
  for (int i = 0; i < n; ++i) beta_n *= spec.discount;
  const double horizon_cost = z * spec.cost_upper / (1.0 - spec.discount);
  const auto shape = spec.utility.shape();
  if (shape == UtilityShape::kConvex) {
    double integral = 0.0;
    for (const auto& atom : mu.atoms())
      integral += atom.w * spec.utility.dright(atom.s + horizon_cost);
    return beta_n * horizon_cost * integral;
  }
  return beta_n * horizon_cost * spec.utility.dleft(z * spec.cost_lower);
}

Mat payoff_matrix(const GameSpec& spec, const AugmentedState& state,
                  const ValueFn& v_next, double merge_tol) {
  const auto& adm1 = spec.admissible_p1[state.x];
  const auto& adm2 = spec.admissible_p2[state.x];
  const auto y_marg = state.mu.y_marginal(spec.num_y());
  Mat m(static_cast<int>(adm1.size()), static_cast<int>(adm2.size()));
  for (size_t ai = 0; ai < adm1.size(); ++ai)
    for (size_t bi = 0; bi < adm2.size(); ++bi) {
      double total = 0.0;
      for (int xn = 0; xn < spec.num_x(); ++xn) {
        const double prob =
            q_x_under_belief_single(spec, state.x, y_marg, adm1[ai], adm2[bi],
                                    xn);
        if (prob <= 0.0) continue;
        const Belief child = phi_update(spec, state.x, adm1[ai], adm2[bi], xn,
                                        state.mu, state.z, merge_tol);
        total += prob * v_next(xn, child, state.z * spec.discount);
      }
      m(static_cast<int>(ai), static_cast<int>(bi)) = total;
    }
  return m;
}

BellmanResult bellman_T(const GameSpec& spec, const AugmentedState& state,
                        const ValueFn& v_next, double merge_tol) {
  const auto sol = solve_matrix_game(payoff_matrix(spec, state, v_next,
                                                   merge_tol));
  return {sol.value, sol.row_strategy, sol.col_strategy};
}

SolveResult solve_finite(const GameSpec& spec, int x0, int horizon,
                         const SolverOptions& options) {
  if (horizon < 0) throw Error("horizon must be nonnegative");
  const auto start = std::chrono::steady_clock::now();

  TreeEval ev(spec, options, horizon, 1u << kV0);
  const Belief mu0 = initial_belief(spec);
  const auto root = ev.eval(x0, mu0, 0, 1.0, options.parallel);

  SolveResult result;
  result.value = root->v[kV0][horizon];
  result.seq_v0 = root->v[kV0];
  result.depth = horizon;

  build_policy(ev, spec, horizon, "", x0, mu0, 0, 1.0, result.policy);
  result.nodes = ev.nodes();
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return result;
}

double evaluate_policy_pair(const GameSpec& spec, int x0,
                            const PolicyTree& pi, const PolicyTree& sigma,
                            int horizon, const SolverOptions& options) {
  if (horizon < 0) throw Error("horizon must be nonnegative");
  long long nodes = 0;
  return eval_policy_node(spec, pi, sigma, horizon, "", x0,
                          initial_belief(spec), 0, 1.0, options, nodes);
}

SolveResult solve_infinite(const GameSpec& spec, int x0, double tol,
                           const SolverOptions& options) {
  if (!(tol > 0.0)) throw Error("tolerance must be positive");
  const auto shape = spec.utility.shape();
  const auto start = std::chrono::steady_clock::now();
  const Belief mu0 = initial_belief(spec);

  // Smallest depth whose tail bound meets tol. The bound is beta^n times a
  // constant, so the concave/linear case has a closed form; the convex case
  // walks forward.
  int depth = 0;
  const double at_zero = tail_bound(spec, 0, 1.0, mu0);
  if (at_zero > tol) {
    if (shape != UtilityShape::kConvex) {
      depth = static_cast<int>(
          std::ceil(std::log(tol / at_zero) / std::log(spec.discount)));
      if (depth < 0) depth = 0;
    }
    while (tail_bound(spec, depth, 1.0, mu0) > tol) ++depth;
    while (depth > 0 && tail_bound(spec, depth - 1, 1.0, mu0) <= tol) --depth;
  }

  SolveResult result;
  result.depth = depth;
  result.bound_type = shape_label(shape);
  result.tail = tail_bound(spec, depth, 1.0, mu0);
  result.seq_v0.resize(depth + 1);
  result.seq_lower.resize(depth + 1);
  result.seq_upper.resize(depth + 1);
  result.seq_v0[0] = v0_terminal(spec, mu0);
  result.seq_lower[0] = bound_lower(spec, mu0, 1.0);
  result.seq_upper[0] = bound_upper(spec, mu0, 1.0);

  TreeEval ev(spec, options, depth, (1u << kV0) | (1u << kLower) |
                                        (1u << kUpper));
  try {
    ev.tick();  // the root itself
    if (depth > 0) {
      const auto children = ev.expand(x0, mu0, 1.0);
      std::vector<NodeValPtr> vals(children.size());
      const double z1 = spec.discount;
      if (options.parallel && children.size() > 1) {
        std::vector<std::future<NodeValPtr>> futures;
        futures.reserve(children.size());
        for (size_t i = 0; i < children.size(); ++i)
          futures.push_back(std::async(std::launch::async, [&, i]() {
            return ev.eval(children[i].x_next, children[i].mu, 1, z1, false);
          }));
        for (size_t i = 0; i < futures.size(); ++i) vals[i] = futures[i].get();
      } else {
        for (size_t i = 0; i < children.size(); ++i)
          vals[i] = ev.eval(children[i].x_next, children[i].mu, 1, z1, false);
      }

      const int na = static_cast<int>(spec.admissible_p1[x0].size());
      const int nb = static_cast<int>(spec.admissible_p2[x0].size());
      for (int k = 1; k <= depth; ++k)
        for (int kind = 0; kind < 3; ++kind) {
          Mat m(na, nb);
          for (size_t i = 0; i < children.size(); ++i)
            m(children[i].a_slot, children[i].b_slot) +=
                children[i].prob * vals[i]->v[kind][k - 1];
          const auto sol = solve_matrix_game(m);
          if (kind == kV0) {
            result.seq_v0[k] = sol.value;
            if (k == depth)
              result.policy.entries[""] = {sol.row_strategy,
                                           sol.col_strategy};
          } else if (kind == kLower) {
            result.seq_lower[k] = sol.value;
          } else {
            result.seq_upper[k] = sol.value;
          }
        }
    }
  } catch (const BudgetExceeded&) {
    // Report what the budget can certify: the deepest tree that fits under
    // worst-case branching.
    long long branch = 0;
    for (int x = 0; x < spec.num_x(); ++x)
      branch = std::max<long long>(
          branch, static_cast<long long>(spec.admissible_p1[x].size()) *
                      spec.admissible_p2[x].size() * spec.num_x());
    long long count = 1;
    int affordable = 0;
    while (count <= options.node_budget && affordable < depth) {
      const long long next = count * branch + 1;
      if (next > options.node_budget) break;
      count = next;
      ++affordable;
    }
    std::ostringstream os;
    os << "node budget exceeded at depth " << depth
       << "; achievable tolerance is about "
       << tail_bound(spec, affordable, 1.0, mu0) << " (depth " << affordable
       << ")";
    throw BudgetExceeded(os.str());
  }

  result.bracket = {result.seq_lower[depth], result.seq_upper[depth]};
  result.nodes = ev.nodes();
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return result;
}

}  // namespace pogs::solver
