#include "survtest/cvm.hpp"

#include <algorithm>
#include <cmath>

#include "survtest/error.hpp"
#include "survtest/km.hpp"

namespace survtest {

std::vector<double> glr_field(const LogRankState& state, const CategoryRange& range) {
  const std::size_t k = state.groups - 1;
  std::vector<double> g(range.observable.size() * k, 0.0);
  for (std::size_t i = 0; i < range.observable.size(); ++i) {
    const auto r = static_cast<std::size_t>(range.observable[i]);
    for (std::size_t q = 0; q < k; ++q) g[i * k + q] = state.phi[q][r] * state.lr[q][r];
  }
  return g;
}

double cvm_statistic(std::span<const double> field) {
  double s = 0.0;
  for (double v : field) s += v * v;
  return s;
}

SymMatrix y0_matrix(const LogRankState& state, const CategoryRange& range) {
  const std::size_t k = state.groups - 1;
  const auto& cats = range.observable;
  const std::size_t blocks = cats.size();
  SymMatrix y(blocks * k);

  // Row blocks are independent; each thread writes block (i, j >= i) and its mirror.
  const long nblocks = static_cast<long>(blocks);
#pragma omp parallel for schedule(dynamic) if (nblocks * static_cast<long>(k) > 64)
  for (long bi = 0; bi < nblocks; ++bi) {
    const auto i = static_cast<std::size_t>(bi);
    const auto ri = static_cast<std::size_t>(cats[i]);
    for (std::size_t j = i; j < blocks; ++j) {
      const auto rj = static_cast<std::size_t>(cats[j]);
      const SymMatrix& g = state.gamma[ri];  // r_min = r_i since categories increase
      for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = 0; b < k; ++b) {
          if (i == j && b < a) continue;
          y.set(i * k + a, j * k + b, state.phi[a][ri] * g(a, b) * state.phi[b][rj]);
        }
      }
    }
  }
  return y;
}

bool operator_gate(std::span<const double> eig) {
  if (eig.empty()) return true;
  return eig.back() >= -kGateTolerance * std::max(1.0, eig.front());
}

CvmResult cvm_test(const RiskTable& rt, const WeightSpec& spec) {
  const auto range = category_range(rt);
  const auto hz = estimate_hazards(rt);
  const auto state = build_logrank_state(rt, hz, spec, range.hi);

  CvmResult res;
  res.d_lo = range.lo;
  res.d_hi = range.hi;
  res.observable = range.observable.size();
  res.dropped_group = rt.num_groups() - 1;
  res.statistic = cvm_statistic(glr_field(state, range));

  auto eig = sym_eigenvalues(y0_matrix(state, range));
  const double top = eig.front();
  res.gate = operator_gate(eig);
  if (!res.gate) throw GateError("covariance operator estimate not non-negative");
  for (double& l : eig) l = std::max(l, 0.0);
  res.eigenvalues = eig;

  std::vector<double> kept;
  const double cut = kEigenCutoff * top;
  for (double l : eig)
    if (l > cut) kept.push_back(l);
  if (kept.empty()) throw DegenerateError("degenerate covariance; test not computable");
  res.p_value = imhof_tail(kept, res.statistic);
  return res;
}

}  // namespace survtest
