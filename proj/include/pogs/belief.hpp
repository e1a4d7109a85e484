#pragma once

#include <vector>

#include "pogs/game_model.hpp"

namespace pogs {

constexpr double kDefaultMergeTol = 1e-9;

struct BeliefAtom {
  int y = 0;
  double s = 0.0;  // accumulated discounted cost
  double w = 0.0;  // weight, > 0
};

// Finitely supported joint distribution of (hidden state, accumulated
// discounted cost). Canonical form: atoms sorted by (y, s), weights summing
// to one, no two atoms sharing y closer than the merge tolerance in s.
class Belief {
 public:
  Belief() = default;

  // Sorts, merges s-clusters per hidden state, drops negligible weights and
  // renormalizes. Clustering is by consecutive gap <= merge_tol, so the
  // result is idempotent under a second pass with the same tolerance.
  static Belief from_atoms(std::vector<BeliefAtom> atoms,
                           double merge_tol = kDefaultMergeTol);

  const std::vector<BeliefAtom>& atoms() const { return atoms_; }
  size_t size() const { return atoms_.size(); }

  std::vector<double> y_marginal(int num_y) const;
  std::vector<std::pair<double, double>> s_marginal(
      double merge_tol = kDefaultMergeTol) const;

  double total_weight() const;
  double max_s() const;

 private:
  std::vector<BeliefAtom> atoms_;
};

// Point mass at cost zero with the model's initial hidden distribution;
// atoms with zero initial probability are omitted.
Belief initial_belief(const GameSpec& spec);

// Bayes update after playing (a, b) in observable state x and observing
// x_next, with z the current discount weight multiplying the stage cost.
// Throws ImpossibleObservation when x_next has zero probability under the
// belief's hidden-state marginal.
Belief phi_update(const GameSpec& spec, int x, int a, int b, int x_next,
                  const Belief& mu, double z,
                  double merge_tol = kDefaultMergeTol);

// Runs the update along a full observable history; element k is the belief
// after k steps (so the front is the initial belief). The discount weight
// for step k is discount^k.
std::vector<Belief> filter(const GameSpec& spec, const History& history,
                           double merge_tol = kDefaultMergeTol);

// Total variation distance between two finite atomic measures, matching
// atoms with equal hidden state whose s coordinates differ by at most s_tol.
double tv_distance(const Belief& a, const Belief& b, double s_tol = 1e-9);

// Observable state, belief and current discount weight: the state of the
// equivalent completely observable game.
struct AugmentedState {
  int x = 0;
  Belief mu;
  double z = 1.0;  // in (0, 1]
};

}  // namespace pogs
