#include "pogs/utility.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace pogs {

UtilityShape Utility::shape() const {
  switch (kind_) {
    case UtilityKind::kLinear:
      return UtilityShape::kBoth;
    case UtilityKind::kExponential:
      return param_ > 0 ? UtilityShape::kConvex : UtilityShape::kConcave;
    case UtilityKind::kPower:
      if (param_ == 1.0) return UtilityShape::kBoth;
      return param_ > 1.0 ? UtilityShape::kConvex : UtilityShape::kConcave;
    case UtilityKind::kLog1p:
      return UtilityShape::kConcave;
  }
  return UtilityShape::kBoth;
}

double Utility::eval(double s) const {
  switch (kind_) {
    case UtilityKind::kLinear:
      return s;
    case UtilityKind::kExponential:
      return std::exp(param_ * s) / param_;
    case UtilityKind::kPower:
      return std::pow(s, param_);
    case UtilityKind::kLog1p:
      return std::log1p(s);
  }
  return s;
}

double Utility::dleft(double s) const {
  switch (kind_) {
    case UtilityKind::kLinear:
      return 1.0;
    case UtilityKind::kExponential:
      return std::exp(param_ * s);
    case UtilityKind::kPower:
      // pow(0, gamma-1) yields +inf for gamma < 1, 1 for gamma == 1 and 0
      // for gamma > 1, which is exactly the one-sided limit at the origin.
      return param_ * std::pow(s, param_ - 1.0);
    case UtilityKind::kLog1p:
      return 1.0 / (1.0 + s);
  }
  return 1.0;
}

double Utility::dright(double s) const { return dleft(s); }

std::string Utility::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case UtilityKind::kLinear:
      os << "linear";
      break;
    case UtilityKind::kExponential:
      os << "exponential(theta=" << param_ << ")";
      break;
    case UtilityKind::kPower:
      os << "power(gamma=" << param_ << ")";
      break;
    case UtilityKind::kLog1p:
      os << "log1p";
      break;
  }
  return os.str();
}

}  // namespace pogs
