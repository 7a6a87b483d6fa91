#include "ehnet/utility.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ehnet/errors.hpp"

namespace ehnet {

UtilityFunction UtilityFunction::log1p(double weight) {
  if (!(weight > 0) || !std::isfinite(weight)) throw ValidationError("utility weight must be > 0");
  return {Form::log1p, weight, 0.0};
}

UtilityFunction UtilityFunction::power(double exponent, double weight) {
  if (!(weight > 0) || !std::isfinite(weight)) throw ValidationError("utility weight must be > 0");
  if (!(exponent > 0 && exponent < 1)) {
    throw ValidationError("power utility exponent must lie in (0, 1)");
  }
  return {Form::power, weight, exponent};
}

UtilityFunction UtilityFunction::parse(std::string_view form, double weight, double exponent) {
  if (form == "log1p") return log1p(weight);
  if (form == "power") return power(exponent, weight);
  throw ValidationError("unknown utility form '" + std::string(form) + "' (expected log1p or power)");
}

std::string UtilityFunction::name() const {
  std::ostringstream os;
  if (form_ == Form::log1p) {
    os << "log1p";
  } else {
    os << "power(" << exponent_ << ")";
  }
  if (weight_ != 1.0) os << "*" << weight_;
  return os.str();
}

double UtilityFunction::value(double r) const {
  switch (form_) {
    case Form::log1p: return weight_ * std::log1p(r);
    case Form::power: return weight_ * (std::pow(1.0 + r, exponent_) - 1.0) / exponent_;
  }
  return 0;
}

double UtilityFunction::derivative(double r) const {
  switch (form_) {
    case Form::log1p: return weight_ / (1.0 + r);
    case Form::power: return weight_ * std::pow(1.0 + r, exponent_ - 1.0);
  }
  return 0;
}

double UtilitySpec::g_max() const {
  double g = 0;
  for (const auto& t : terms) g = std::max(g, t.fn.max_derivative());
  return g;
}

double UtilitySpec::total(std::span<const double> rates, std::size_t flow_count) const {
  double u = 0;
  for (const auto& t : terms) u += t.fn.value(rates[(t.node - 1) * flow_count + t.flow]);
  return u;
}

ConcavityReport check_concavity(const UtilitySpec& spec, double R_max, int grid) {
  ConcavityReport rep;
  for (const auto& t : spec.terms) {
    for (int i = 0; i + 2 <= grid; ++i) {
      const double a = R_max * i / grid;
      const double b = R_max * (i + 2) / grid;
      const double mid = 0.5 * (a + b);
      const double fa = t.fn.value(a), fb = t.fn.value(b), fm = t.fn.value(mid);
      const double slack = 1e-12 * (1 + std::abs(fm));
      if (fm < 0.5 * (fa + fb) - slack || fb < fa - slack) {
        rep.ok = false;
        std::ostringstream os;
        os << t.fn.name() << " at node " << t.node << " fails concavity/monotonicity on [" << a
           << ", " << b << "]";
        rep.detail = os.str();
        return rep;
      }
    }
  }
  return rep;
}

}  // namespace ehnet
