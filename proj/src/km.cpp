#include "survtest/km.hpp"

namespace survtest {

std::vector<double> hazard_hat(const RiskTable& rt, std::size_t p) {
  std::vector<double> h(static_cast<std::size_t>(rt.max_category()) + 1, 0.0);
  for (int l = 1; l <= rt.max_category(); ++l) {
    const long v = rt.at_risk(p, l);
    if (v > 0) h[static_cast<std::size_t>(l)] = static_cast<double>(rt.events(p, l)) / static_cast<double>(v);
  }
  return h;
}

std::vector<double> cumulative_hazard_hat(std::span<const double> hazard) {
  std::vector<double> out(hazard.size(), 0.0);
  double acc = 0.0;
  for (std::size_t l = 1; l < hazard.size(); ++l) {
    acc += hazard[l];
    out[l] = acc;
  }
  return out;
}

std::vector<double> pmf_hat(std::span<const double> hazard) {
  std::vector<double> out(hazard.size(), 0.0);
  double survival = 1.0;
  for (std::size_t l = 1; l < hazard.size(); ++l) {
    out[l] = hazard[l] * survival;
    survival *= 1.0 - hazard[l];
  }
  return out;
}

HazardEstimate estimate_hazards(const RiskTable& rt) {
  HazardEstimate est;
  for (std::size_t p = 0; p < rt.num_groups(); ++p) {
    auto h = hazard_hat(rt, p);
    est.cumulative.push_back(cumulative_hazard_hat(h));
    est.pmf.push_back(pmf_hat(h));
    est.hazard.push_back(std::move(h));
  }
  return est;
}

}  // namespace survtest
