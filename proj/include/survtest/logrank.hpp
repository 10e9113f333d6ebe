#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "survtest/km.hpp"
#include "survtest/numerics.hpp"
#include "survtest/survival_data.hpp"
#include "survtest/weights.hpp"

namespace survtest {

/// Weighted log-rank processes and their estimated covariance, for
/// categories 1..last. All per-category arrays have slot 0 unused (zero).
struct LogRankState {
  std::size_t groups = 0;
  int last = 0;
  /// lr[q][j]: cumulative LR_q up to category j.
  std::vector<std::vector<double>> lr;
  /// Per-category covariance Q(l), J x J.
  std::vector<SymMatrix> q_hat;
  /// Cumulative Gamma(j) = sum_{l <= j} Q(l).
  std::vector<SymMatrix> gamma;
  /// phi[q][l] = sqrt(Q(l)_qq).
  std::vector<std::vector<double>> phi;
};

/// LR_q(j) for every group q and j = 0..last.
std::vector<std::vector<double>> lr_process(const RiskTable& rt, const WeightSpec& spec, int last);

/// Variance estimate phi^2_q(l) of the LR_q increment at category l.
double phi2_hat(const RiskTable& rt, const HazardEstimate& hz, const WeightSpec& spec, std::size_t q, int l);

/// Covariance estimate psi(k, r, l) of the LR_k and LR_r increments (k != r).
/// Used only when there are at least three groups; with two groups Q(l) is diagonal.
double psi_hat(const RiskTable& rt, const HazardEstimate& hz, const WeightSpec& spec, std::size_t k,
               std::size_t r, int l);

/// Q(l) assembled from phi2_hat on the diagonal and psi_hat off it.
SymMatrix q_matrix(const RiskTable& rt, const HazardEstimate& hz, const WeightSpec& spec, int l);

/// Running sums of per-category matrices; result[0] is zero.
std::vector<SymMatrix> gamma_hat(std::span<const SymMatrix> q_hat);

LogRankState build_logrank_state(const RiskTable& rt, const HazardEstimate& hz, const WeightSpec& spec,
                                 int last);

struct LogRankResult {
  double statistic = 0.0;
  int df = 0;
  double p_value = 1.0;
  int d_lo = 0;
  int d_hi = 0;
  /// Category at which LR_0 and Gamma_0 are evaluated (d_hi, or the type-2 stop).
  int evaluated_at = 0;
  double rcond = 0.0;
  std::optional<int> type2_stop;
};

/// X^2 = LR_0' Gamma_0^{-1} LR_0 at d_hi, chi-square with J - 1 df.
/// Throws DegenerateError when Gamma_0 is singular.
LogRankResult logrank_test(const RiskTable& rt, const WeightSpec& spec);

/// As logrank_test, with all sums stopped at min(type2_stop(beta), d_hi).
LogRankResult logrank_test_type2(const RiskTable& rt, const WeightSpec& spec, double beta);

}  // namespace survtest
