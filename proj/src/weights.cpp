#include "survtest/weights.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "survtest/error.hpp"

namespace survtest {

namespace {

double parse_number(std::string_view s, const std::string& whole) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || !std::isfinite(v))
    throw InputError("bad weight spec '" + whole + "'");
  return v;
}

double ratio(long num, long den) {
  return den > 0 ? static_cast<double>(num) / static_cast<double>(den) : 0.0;
}

// Pooled hazard with the category-0 convention dR*(0) = 0.
double pooled_hazard(const RiskTable& rt, int l) {
  if (l <= 0) return 0.0;
  return ratio(rt.pooled_events(l), rt.pooled_at_risk(l));
}

}  // namespace

WeightSpec WeightSpec::tarone_ware(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw InputError("Tarone-Ware exponent must be positive");
  WeightSpec w;
  w.kind = Kind::TaroneWare;
  w.gamma = gamma;
  return w;
}

WeightSpec WeightSpec::fleming_harrington(double beta, double delta) {
  if (!(beta >= 0.0) || !(delta >= 0.0) || !std::isfinite(beta) || !std::isfinite(delta))
    throw InputError("Fleming-Harrington exponents must be finite and nonnegative");
  WeightSpec w;
  w.kind = Kind::FlemingHarrington;
  w.beta = beta;
  w.delta = delta;
  return w;
}

WeightSpec WeightSpec::parse(const std::string& text) {
  if (text == "unit") return unit();
  if (text.rfind("tw:", 0) == 0) return tarone_ware(parse_number(std::string_view(text).substr(3), text));
  if (text.rfind("fh:", 0) == 0) {
    const auto body = std::string_view(text).substr(3);
    const auto comma = body.find(',');
    if (comma == std::string_view::npos) throw InputError("bad weight spec '" + text + "'");
    return fleming_harrington(parse_number(body.substr(0, comma), text),
                              parse_number(body.substr(comma + 1), text));
  }
  throw InputError("bad weight spec '" + text + "' (expected unit | tw:<gamma> | fh:<beta>,<delta>)");
}

std::string WeightSpec::to_string() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind) {
    case Kind::Unit:
      os << "unit";
      break;
    case Kind::TaroneWare:
      os << "tw:" << gamma;
      break;
    case Kind::FlemingHarrington:
      os << "fh:" << beta << ',' << delta;
      break;
  }
  return os.str();
}

double u_eval(const WeightSpec& spec, const RiskTable& rt, int l) {
  switch (spec.kind) {
    case WeightSpec::Kind::Unit:
      return spec.scale;
    case WeightSpec::Kind::TaroneWare:
      return spec.scale * std::pow(ratio(rt.pooled_at_risk(l), rt.total()), spec.gamma);
    case WeightSpec::Kind::FlemingHarrington: {
      double survival = 1.0;
      for (int j = 1; j < l; ++j) survival *= 1.0 - pooled_hazard(rt, j);
      // pow(0, 0) == 1, so beta = 0 disables the first factor.
      return spec.scale * std::pow(pooled_hazard(rt, l - 1), spec.beta) * std::pow(survival, spec.delta);
    }
  }
  return 0.0;
}

std::vector<double> weight_profile(const WeightSpec& spec, const RiskTable& rt, int last) {
  std::vector<double> u(static_cast<std::size_t>(std::max(last, 0)) + 1, 0.0);
  if (spec.kind != WeightSpec::Kind::FlemingHarrington) {
    for (int l = 1; l <= last; ++l) u[static_cast<std::size_t>(l)] = u_eval(spec, rt, l);
    return u;
  }
  double survival = 1.0;
  for (int l = 1; l <= last; ++l) {
    const double prev = pooled_hazard(rt, l - 1);
    survival *= 1.0 - prev;
    u[static_cast<std::size_t>(l)] = spec.scale * std::pow(prev, spec.beta) * std::pow(survival, spec.delta);
  }
  return u;
}

double pair_weight(double u, const RiskTable& rt, std::size_t q, std::size_t q1, int l) {
  const long pooled = rt.pooled_at_risk(l);
  if (pooled <= 0) return 0.0;
  const double vq = static_cast<double>(rt.at_risk(q, l));
  const double vq1 = static_cast<double>(rt.at_risk(q1, l));
  return u * (vq * vq1 / static_cast<double>(pooled)) / std::sqrt(static_cast<double>(rt.total()));
}

double pair_weight(const WeightSpec& spec, const RiskTable& rt, std::size_t q, std::size_t q1, int l) {
  return pair_weight(u_eval(spec, rt, l), rt, q, q1, l);
}

}  // namespace survtest
