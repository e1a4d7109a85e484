#pragma once

#include <string>

namespace pogs {

enum class UtilityKind { kLinear, kExponential, kPower, kLog1p };

// Curvature of the utility map on R+. Linear counts as both.
enum class UtilityShape { kConcave, kConvex, kBoth };

// Strictly increasing continuous utility applied to the total discounted
// cost. Four parametric families so that one-sided derivatives have closed
// forms (the tail bounds need them).
class Utility {
 public:
  static Utility linear() { return Utility(UtilityKind::kLinear, 0.0); }
  static Utility exponential(double theta) {
    return Utility(UtilityKind::kExponential, theta);
  }
  static Utility power(double gamma) {
    return Utility(UtilityKind::kPower, gamma);
  }
  static Utility log1p() { return Utility(UtilityKind::kLog1p, 0.0); }

  UtilityKind kind() const { return kind_; }
  double param() const { return param_; }
  UtilityShape shape() const;

  double eval(double s) const;
  // One-sided derivatives; they differ from each other only in naming since
  // every supported family is differentiable on (0, inf). power with
  // gamma < 1 returns +inf at s = 0.
  double dleft(double s) const;
  double dright(double s) const;

  std::string describe() const;

 private:
  Utility(UtilityKind kind, double param) : kind_(kind), param_(param) {}

  UtilityKind kind_;
  double param_;  // theta for exponential, gamma for power
};

}  // namespace pogs
