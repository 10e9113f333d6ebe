#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "survtest/logrank.hpp"
#include "survtest/numerics.hpp"
#include "survtest/survival_data.hpp"
#include "survtest/weights.hpp"

namespace survtest {

/// Relative tolerance of the non-negativity gate on the operator estimate.
inline constexpr double kGateTolerance = 1e-10;
/// Eigenvalues at or below this fraction of the largest are dropped from the p-value.
inline constexpr double kEigenCutoff = 1e-12;

/// Field g_q(r) = phi_q(r) * LR_q(r) over the observable categories, for the
/// first J - 1 groups. Laid out category-major: g[i * (J - 1) + q].
std::vector<double> glr_field(const LogRankState& state, const CategoryRange& range);

/// Sum of squares of the field.
double cvm_statistic(std::span<const double> field);

/// Blocked operator estimate over the observable categories r_1 < ... < r_L:
/// block (i, j) is M0(r_i) Gamma0(r_min(i,j)) M0(r_j), with M0 = diag(phi_1..phi_{J-1}).
/// Same layout as glr_field.
SymMatrix y0_matrix(const LogRankState& state, const CategoryRange& range);

/// True when the smallest eigenvalue is >= -kGateTolerance * max(1, largest).
/// Expects eigenvalues sorted descending.
bool operator_gate(std::span<const double> eigenvalues_desc);

struct CvmResult {
  double statistic = 0.0;
  /// All eigenvalues of the operator estimate, descending, after clipping.
  std::vector<double> eigenvalues;
  double p_value = 1.0;
  bool gate = true;
  /// Group whose component is left out (always the last group index).
  std::size_t dropped_group = 0;
  int d_lo = 0;
  int d_hi = 0;
  std::size_t observable = 0;
};

/// Cramer-von Mises homogeneity test. The p-value is the tail of
/// sum_s lambda_s chi2_1 at the observed statistic. Throws DegenerateError
/// when the operator estimate has a materially negative eigenvalue or is zero.
CvmResult cvm_test(const RiskTable& rt, const WeightSpec& spec);

}  // namespace survtest
