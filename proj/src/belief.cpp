#include "pogs/belief.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "pogs/errors.hpp"

namespace pogs {

namespace {
constexpr double kDropWeight = 1e-15;
}

Belief Belief::from_atoms(std::vector<BeliefAtom> atoms, double merge_tol) {
  std::sort(atoms.begin(), atoms.end(),
            [](const BeliefAtom& l, const BeliefAtom& r) {
              return l.y != r.y ? l.y < r.y : l.s < r.s;
            });

  Belief out;
  out.atoms_.reserve(atoms.size());
  size_t i = 0;
  while (i < atoms.size()) {
    // Cluster atoms with the same y whose consecutive s gaps stay within
    // merge_tol; the cluster collapses to its weighted mean.
    size_t j = i + 1;
    double w_sum = atoms[i].w;
    double sw_sum = atoms[i].s * atoms[i].w;
    while (j < atoms.size() && atoms[j].y == atoms[i].y &&
           atoms[j].s - atoms[j - 1].s <= merge_tol) {
      w_sum += atoms[j].w;
      sw_sum += atoms[j].s * atoms[j].w;
      ++j;
    }
    if (w_sum > kDropWeight)
      out.atoms_.push_back({atoms[i].y, sw_sum / w_sum, w_sum});
    i = j;
  }

  double total = 0.0;
  for (const auto& atom : out.atoms_) total += atom.w;
  if (total > 0.0)
    for (auto& atom : out.atoms_) atom.w /= total;
  return out;
}

std::vector<double> Belief::y_marginal(int num_y) const {
  std::vector<double> out(num_y, 0.0);
  for (const auto& atom : atoms_) out[atom.y] += atom.w;
  return out;
}

std::vector<std::pair<double, double>> Belief::s_marginal(
    double merge_tol) const {
  std::vector<std::pair<double, double>> pts;
  pts.reserve(atoms_.size());
  for (const auto& atom : atoms_) pts.emplace_back(atom.s, atom.w);
  std::sort(pts.begin(), pts.end());
  std::vector<std::pair<double, double>> out;
  for (const auto& [s, w] : pts) {
    if (!out.empty() && s - out.back().first <= merge_tol)
      out.back().second += w;
    else
      out.emplace_back(s, w);
  }
  return out;
}

double Belief::total_weight() const {
  double total = 0.0;
  for (const auto& atom : atoms_) total += atom.w;
  return total;
}

double Belief::max_s() const {
  double m = 0.0;
  for (const auto& atom : atoms_) m = std::max(m, atom.s);
  return m;
}

Belief initial_belief(const GameSpec& spec) {
  std::vector<BeliefAtom> atoms;
  for (int y = 0; y < spec.num_y(); ++y)
    if (spec.initial_hidden[y] > 0.0)
      atoms.push_back({y, 0.0, spec.initial_hidden[y]});
  return Belief::from_atoms(std::move(atoms));
}

Belief phi_update(const GameSpec& spec, int x, int a, int b, int x_next,
                  const Belief& mu, double z, double merge_tol) {
  if (!spec.admissible(x, a, b)) throw Error("inadmissible action");

  const double denom = q_x_under_belief_single(
      spec, x, mu.y_marginal(spec.num_y()), a, b, x_next);
  if (!(denom > 0.0)) {
    std::ostringstream os;
    os << "impossible observation: state " << spec.observable_states[x_next]
       << " has zero probability under the current belief";
    throw ImpossibleObservation(os.str());
  }

  const int ny = spec.num_y();
  std::vector<BeliefAtom> atoms;
  atoms.reserve(mu.size() * ny);
  for (const auto& atom : mu.atoms()) {
    const double s_next = atom.s + z * spec.cost(x, atom.y, a, b);
    for (int yn = 0; yn < ny; ++yn) {
      const double mass = atom.w * spec.q(x, atom.y, a, b, x_next, yn);
      if (mass > 0.0) atoms.push_back({yn, s_next, mass / denom});
    }
  }
  return Belief::from_atoms(std::move(atoms), merge_tol);
}

std::vector<Belief> filter(const GameSpec& spec, const History& history,
                           double merge_tol) {
  if (!history_admissible(spec, history))
    throw Error("history contains an inadmissible action pair");

  std::vector<Belief> out;
  out.reserve(history.steps.size() + 1);
  out.push_back(initial_belief(spec));
  double z = 1.0;
  int x = history.x0;
  for (size_t k = 0; k < history.steps.size(); ++k) {
    const auto& step = history.steps[k];
    try {
      out.push_back(phi_update(spec, x, step.a, step.b, step.x_next,
                               out.back(), z, merge_tol));
    } catch (const ImpossibleObservation& e) {
      std::ostringstream os;
      os << e.what() << " (history step " << k << ")";
      throw ImpossibleObservation(os.str(), static_cast<int>(k));
    }
    x = step.x_next;
    z *= spec.discount;
  }
  return out;
}

double tv_distance(const Belief& a, const Belief& b, double s_tol) {
  // Union the supports per hidden state, clustering s coordinates from both
  // measures with the same gap rule canonicalization uses.
  struct Entry {
    int y;
    double s;
    double wa;
    double wb;
  };
  std::vector<Entry> entries;
  for (const auto& atom : a.atoms()) entries.push_back({atom.y, atom.s, atom.w, 0.0});
  for (const auto& atom : b.atoms()) entries.push_back({atom.y, atom.s, 0.0, atom.w});
  std::sort(entries.begin(), entries.end(), [](const Entry& l, const Entry& r) {
    return l.y != r.y ? l.y < r.y : l.s < r.s;
  });

  double dist = 0.0;
  size_t i = 0;
  while (i < entries.size()) {
    double wa = entries[i].wa, wb = entries[i].wb;
    size_t j = i + 1;
    while (j < entries.size() && entries[j].y == entries[i].y &&
           entries[j].s - entries[j - 1].s <= s_tol) {
      wa += entries[j].wa;
      wb += entries[j].wb;
      ++j;
    }
    dist += std::abs(wa - wb);
    i = j;
  }
  return 0.5 * dist;
}

}  // namespace pogs
