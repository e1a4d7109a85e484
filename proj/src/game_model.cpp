#include "pogs/game_model.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "pogs/errors.hpp"

namespace pogs {

namespace {
constexpr double kStochasticTol = 1e-12;
}

void GameSpec::finalize() {
  const int nx = num_x(), ny = num_y(), na = num_a(), nb = num_b();

  x_ids_.clear();
  y_ids_.clear();
  a_ids_.clear();
  b_ids_.clear();
  for (int i = 0; i < nx; ++i) x_ids_[observable_states[i]] = i;
  for (int i = 0; i < ny; ++i) y_ids_[hidden_states[i]] = i;
  for (int i = 0; i < na; ++i) a_ids_[actions_p1[i]] = i;
  for (int i = 0; i < nb; ++i) b_ids_[actions_p2[i]] = i;

  adm1_mask_.assign(static_cast<size_t>(nx) * na, 0);
  adm2_mask_.assign(static_cast<size_t>(nx) * nb, 0);
  for (int x = 0; x < nx && x < static_cast<int>(admissible_p1.size()); ++x)
    for (int a : admissible_p1[x])
      if (a >= 0 && a < na) adm1_mask_[static_cast<size_t>(x) * na + a] = 1;
  for (int x = 0; x < nx && x < static_cast<int>(admissible_p2.size()); ++x)
    for (int b : admissible_p2[x])
      if (b >= 0 && b < nb) adm2_mask_[static_cast<size_t>(x) * nb + b] = 1;

  qx_table_.assign(static_cast<size_t>(nx) * ny * na * nb * nx, 0.0);
  for (int x = 0; x < nx; ++x)
    for (int y = 0; y < ny; ++y)
      for (int a = 0; a < na; ++a)
        for (int b = 0; b < nb; ++b) {
          const size_t base = cost_index(x, y, a, b);
          for (int xn = 0; xn < nx; ++xn) {
            double sum = 0.0;
            for (int yn = 0; yn < ny; ++yn)
              sum += kernel_table[base * nx * ny +
                                  static_cast<size_t>(xn) * ny + yn];
            qx_table_[base * nx + xn] = sum;
          }
        }

  cost_lower = std::numeric_limits<double>::infinity();
  cost_upper = -std::numeric_limits<double>::infinity();
  for (int x = 0; x < nx; ++x)
    for (int a = 0; a < na; ++a)
      for (int b = 0; b < nb; ++b) {
        if (!admissible(x, a, b)) continue;
        for (int y = 0; y < ny; ++y) {
          const double c = cost(x, y, a, b);
          cost_lower = std::min(cost_lower, c);
          cost_upper = std::max(cost_upper, c);
        }
      }
  finalized_ = true;
}

ValidationReport validate(const GameSpec& spec) {
  ValidationReport report;
  auto add = [&report](const std::string& msg) {
    report.violations.push_back(msg);
  };

  const int nx = spec.num_x(), ny = spec.num_y(), na = spec.num_a(),
            nb = spec.num_b();
  if (nx == 0) add("observable_states must be nonempty");
  if (ny == 0) add("hidden_states must be nonempty");
  if (na == 0) add("actions_p1 must be nonempty");
  if (nb == 0) add("actions_p2 must be nonempty");
  if (!(spec.discount > 0.0 && spec.discount < 1.0)) {
    std::ostringstream os;
    os << "discount must lie in (0,1), got " << spec.discount;
    add(os.str());
  }
  if (!report.ok()) return report;

  for (int x = 0; x < nx; ++x) {
    bool any1 = false, any2 = false;
    for (int a = 0; a < na; ++a) any1 |= spec.admissible1(x, a);
    for (int b = 0; b < nb; ++b) any2 |= spec.admissible2(x, b);
    if (!any1)
      add("admissible_p1 empty at state " + spec.observable_states[x]);
    if (!any2)
      add("admissible_p2 empty at state " + spec.observable_states[x]);
  }

  for (int x = 0; x < nx; ++x)
    for (int a = 0; a < na; ++a)
      for (int b = 0; b < nb; ++b) {
        if (!spec.admissible(x, a, b)) continue;
        for (int y = 0; y < ny; ++y) {
          const double c = spec.cost(x, y, a, b);
          if (!(c > 0.0) || !std::isfinite(c)) {
            std::ostringstream os;
            os << "cost must be strictly positive at (" <<
                spec.observable_states[x] << "," << spec.hidden_states[y]
               << "," << spec.actions_p1[a] << "," << spec.actions_p2[b]
               << "), got " << c;
            add(os.str());
          }
          double row_sum = 0.0;
          bool negative = false, nonfinite = false;
          for (int xn = 0; xn < nx; ++xn)
            for (int yn = 0; yn < ny; ++yn) {
              const double p = spec.q(x, y, a, b, xn, yn);
              if (!std::isfinite(p)) nonfinite = true;
              if (p < 0.0) negative = true;
              row_sum += p;
            }
          if (negative || nonfinite || std::abs(row_sum - 1.0) > kStochasticTol) {
            std::ostringstream os;
            os << "kernel row not stochastic at (" << spec.observable_states[x]
               << "," << spec.hidden_states[y] << "," << spec.actions_p1[a]
               << "," << spec.actions_p2[b] << "): sum=" << row_sum;
            if (negative) os << ", has negative entries";
            if (nonfinite) os << ", has non-finite entries";
            add(os.str());
          }
        }
      }

  if (static_cast<int>(spec.initial_hidden.size()) != ny) {
    add("initial_hidden length does not match hidden_states");
  } else {
    double sum = 0.0;
    for (int y = 0; y < ny; ++y) {
      if (spec.initial_hidden[y] < 0.0)
        add("initial_hidden has a negative entry at " + spec.hidden_states[y]);
      sum += spec.initial_hidden[y];
    }
    if (std::abs(sum - 1.0) > kStochasticTol) {
      std::ostringstream os;
      os << "initial_hidden must sum to 1, got " << sum;
      add(os.str());
    }
  }

  // Utility parameter sanity plus sampled strict monotonicity on the range
  // of accumulated costs the solver can actually produce.
  const Utility& u = spec.utility;
  if (u.kind() == UtilityKind::kExponential && u.param() == 0.0)
    add("utility: exponential theta must be nonzero");
  if (u.kind() == UtilityKind::kPower && !(u.param() > 0.0))
    add("utility: power gamma must be positive");
  if (report.ok()) {
    double s_max = 1.0;
    if (spec.cost_upper > 0.0 && spec.discount < 1.0)
      s_max = spec.cost_upper / (1.0 - spec.discount);
    double prev = u.eval(0.0);
    bool monotone = std::isfinite(prev);
    for (int i = 1; i <= 100 && monotone; ++i) {
      const double s = s_max * i / 100.0;
      const double v = u.eval(s);
      if (!std::isfinite(v) || v <= prev) monotone = false;
      prev = v;
    }
    if (!monotone)
      add("utility not strictly increasing on the sampled cost range");
  }

  return report;
}

std::vector<double> q_marginal_x(const GameSpec& spec, int x, int y, int a,
                                 int b) {
  if (!spec.admissible(x, a, b)) throw Error("inadmissible action");
  std::vector<double> out(spec.num_x());
  for (int xn = 0; xn < spec.num_x(); ++xn)
    out[xn] = spec.q_marginal(x, y, a, b, xn);
  return out;
}

double q_x_under_belief_single(const GameSpec& spec, int x,
                               const std::vector<double>& y_dist, int a, int b,
                               int x_next) {
  if (!spec.admissible(x, a, b)) throw Error("inadmissible action");
  double sum = 0.0;
  for (int y = 0; y < spec.num_y(); ++y)
    sum += y_dist[y] * spec.q_marginal(x, y, a, b, x_next);
  return sum;
}

std::vector<double> q_x_under_belief(const GameSpec& spec, int x,
                                     const std::vector<double>& y_dist, int a,
                                     int b) {
  std::vector<double> out(spec.num_x());
  for (int xn = 0; xn < spec.num_x(); ++xn)
    out[xn] = q_x_under_belief_single(spec, x, y_dist, a, b, xn);
  return out;
}

bool history_admissible(const GameSpec& spec, const History& h) {
  if (h.x0 < 0 || h.x0 >= spec.num_x()) return false;
  int x = h.x0;
  for (const auto& step : h.steps) {
    if (step.a < 0 || step.a >= spec.num_a()) return false;
    if (step.b < 0 || step.b >= spec.num_b()) return false;
    if (step.x_next < 0 || step.x_next >= spec.num_x()) return false;
    if (!spec.admissible(x, step.a, step.b)) return false;
    x = step.x_next;
  }
  return true;
}

}  // namespace pogs
