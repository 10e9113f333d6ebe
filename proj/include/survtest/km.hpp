#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "survtest/survival_data.hpp"

namespace survtest {

/// Discrete Kaplan-Meier estimates for every group. Arrays are indexed by
/// category with slot 0 unused, so `hazard[p][l]` is the estimate at l.
struct HazardEstimate {
  std::vector<std::vector<double>> hazard;
  std::vector<std::vector<double>> cumulative;
  std::vector<std::vector<double>> pmf;
};

/// h(l) = dR(l) / V(l) where V(l) > 0, else 0. Index 0 is unused.
std::vector<double> hazard_hat(const RiskTable& rt, std::size_t p);

/// Running sum of the hazard.
std::vector<double> cumulative_hazard_hat(std::span<const double> hazard);

/// pi(i) = h(i) * prod_{l<i} (1 - h(l)).
std::vector<double> pmf_hat(std::span<const double> hazard);

HazardEstimate estimate_hazards(const RiskTable& rt);

}  // namespace survtest
