#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "survtest/survival_data.hpp"

namespace survtest {

/// Predictable weight u(n*, l) of the product-form class
///   U_{q,q1}(l) = n^{-1/2} u(l) V_q(l) V_q1(l) / V*(l).
struct WeightSpec {
  enum class Kind { Unit, TaroneWare, FlemingHarrington };

  Kind kind = Kind::Unit;
  double gamma = 0.0;  // Tarone-Ware exponent, u = (V*(l)/n)^gamma
  double beta = 0.0;   // Fleming-Harrington exponent on the previous pooled hazard
  double delta = 0.0;  // Fleming-Harrington exponent on the pooled survival
  /// Positive constant multiplying u. Test statistics are invariant to it.
  double scale = 1.0;

  static WeightSpec unit() { return {}; }
  static WeightSpec tarone_ware(double gamma);
  static WeightSpec fleming_harrington(double beta, double delta);

  /// Parse `unit`, `tw:<gamma>` or `fh:<beta>,<delta>`.
  static WeightSpec parse(const std::string& text);
  /// Inverse of parse (scale is not part of the grammar).
  std::string to_string() const;

  bool operator==(const WeightSpec&) const = default;
};

/// u(n*, l). Uses dR*(0) = 0 and V*(0) = n; ratios with a zero denominator are 0.
double u_eval(const WeightSpec& spec, const RiskTable& rt, int l);

/// u(n*, l) for l = 0..last (slot 0 unused), computed in one pass.
std::vector<double> weight_profile(const WeightSpec& spec, const RiskTable& rt, int last);

/// U_{q,q1}(l) given u(l); 0 when V*(l) = 0.
double pair_weight(double u, const RiskTable& rt, std::size_t q, std::size_t q1, int l);
double pair_weight(const WeightSpec& spec, const RiskTable& rt, std::size_t q, std::size_t q1, int l);

}  // namespace survtest
