#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ehnet/model.hpp"

namespace ehnet {

/// A concave, increasing utility of an admitted rate.
///
///   log1p:  w * ln(1 + r)
///   power:  w * ((1 + r)^a - 1) / a,   0 < a < 1
class UtilityFunction {
 public:
  enum class Form { log1p, power };

  static UtilityFunction log1p(double weight = 1.0);
  static UtilityFunction power(double exponent, double weight = 1.0);
  static UtilityFunction parse(std::string_view form, double weight, double exponent);

  Form form() const { return form_; }
  double weight() const { return weight_; }
  double exponent() const { return exponent_; }
  std::string name() const;

  double value(double r) const;
  double derivative(double r) const;
  /// Largest first derivative on r >= 0 (attained at r = 0).
  double max_derivative() const { return derivative(0.0); }

 private:
  UtilityFunction(Form form, double weight, double exponent)
      : form_(form), weight_(weight), exponent_(exponent) {}

  Form form_;
  double weight_;
  double exponent_;
};

/// One admission point: packets of `flow` (a flow index) admitted at `node`.
struct UtilityTerm {
  NodeId node = 0;
  std::size_t flow = 0;
  UtilityFunction fn = UtilityFunction::log1p();
};

struct UtilitySpec {
  std::vector<UtilityTerm> terms;

  double g_max() const;
  /// Sum of U over admission rates given node-major like NetState::Q.
  double total(std::span<const double> rates, std::size_t flow_count) const;
};

struct ConcavityReport {
  bool ok = true;
  std::string detail;
};

/// Midpoint concavity and monotonicity on a uniform grid over [0, R_max].
ConcavityReport check_concavity(const UtilitySpec& spec, double R_max, int grid = 64);

}  // namespace ehnet
