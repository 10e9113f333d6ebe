#include "survtest/logrank.hpp"

#include <algorithm>
#include <cmath>

#include "survtest/error.hpp"

namespace survtest {

namespace {

// Pair weights U_{q,q1}(l) (zero diagonal) and binomial variances
// h(1 - h) / V for every group at one category.
struct CategoryTerms {
  std::size_t groups;
  std::vector<double> pair;  // row-major J x J
  std::vector<double> var;

  double u(std::size_t a, std::size_t b) const { return pair[a * groups + b]; }
};

CategoryTerms category_terms(const RiskTable& rt, const HazardEstimate& hz, double weight, int l) {
  const std::size_t j = rt.num_groups();
  CategoryTerms t{j, std::vector<double>(j * j, 0.0), std::vector<double>(j, 0.0)};
  for (std::size_t a = 0; a < j; ++a) {
    for (std::size_t b = a + 1; b < j; ++b) {
      const double w = pair_weight(weight, rt, a, b, l);
      t.pair[a * j + b] = w;
      t.pair[b * j + a] = w;
    }
    const long v = rt.at_risk(a, l);
    if (v > 0) {
      const double h = hz.hazard[a][static_cast<std::size_t>(l)];
      t.var[a] = h * (1.0 - h) / static_cast<double>(v);
    }
  }
  return t;
}

double phi2_from_terms(const CategoryTerms& t, std::size_t q) {
  double s = 0.0;
  for (std::size_t q1 = 0; q1 < t.groups; ++q1) {
    if (q1 == q) continue;
    const double u2 = t.u(q, q1) * t.u(q, q1);
    s += u2 * t.var[q1] + u2 * t.var[q];
  }
  double cross = 0.0;
  for (std::size_t q1 = 0; q1 < t.groups; ++q1) {
    if (q1 == q) continue;
    for (std::size_t q2 = q1 + 1; q2 < t.groups; ++q2) {
      if (q2 == q) continue;
      cross += t.u(q, q1) * t.u(q, q2);
    }
  }
  return s + 2.0 * cross * t.var[q];
}

double psi_from_terms(const CategoryTerms& t, std::size_t k, std::size_t r) {
  double s = 0.0;
  for (std::size_t q1 = 0; q1 < t.groups; ++q1)
    if (q1 != k && q1 != r) s += t.u(k, q1) * t.u(r, q1) * t.var[q1];
  for (std::size_t q1 = 0; q1 < t.groups; ++q1)
    if (q1 != k) s -= t.u(k, q1) * t.u(r, k) * t.var[k];
  for (std::size_t q2 = 0; q2 < t.groups; ++q2)
    if (q2 != r) s -= t.u(r, q2) * t.u(k, r) * t.var[r];
  return s;
}

SymMatrix q_from_terms(const CategoryTerms& t) {
  SymMatrix q(t.groups);
  for (std::size_t a = 0; a < t.groups; ++a) q.set(a, a, phi2_from_terms(t, a));
  if (t.groups >= 3) {
    // Computed once per unordered pair, so Q is exactly symmetric.
    for (std::size_t a = 0; a < t.groups; ++a)
      for (std::size_t b = a + 1; b < t.groups; ++b) q.set(a, b, psi_from_terms(t, a, b));
  }
  return q;
}

void check_group(const RiskTable& rt, std::size_t q) {
  if (q >= rt.num_groups()) throw InputError("group index out of range");
}

LogRankResult evaluate(const RiskTable& rt, const WeightSpec& spec, const CategoryRange& range, int at) {
  const auto hz = estimate_hazards(rt);
  const auto state = build_logrank_state(rt, hz, spec, at);
  const std::size_t k = rt.num_groups() - 1;

  std::vector<double> lr0(k);
  for (std::size_t q = 0; q < k; ++q) lr0[q] = state.lr[q][static_cast<std::size_t>(at)];
  const SymMatrix gamma0 = state.gamma[static_cast<std::size_t>(at)].leading(k);

  SpdSolution sol;
  try {
    sol = spd_solve(gamma0, lr0);
  } catch (const DegenerateError&) {
    throw DegenerateError("degenerate covariance; test not computable");
  }

  LogRankResult res;
  res.statistic = 0.0;
  for (std::size_t q = 0; q < k; ++q) res.statistic += lr0[q] * sol.x[q];
  res.statistic = std::max(res.statistic, 0.0);
  res.df = static_cast<int>(k);
  res.p_value = chisq_sf(res.statistic, res.df);
  res.d_lo = range.lo;
  res.d_hi = range.hi;
  res.evaluated_at = at;
  res.rcond = sol.rcond;
  return res;
}

}  // namespace

std::vector<std::vector<double>> lr_process(const RiskTable& rt, const WeightSpec& spec, int last) {
  const auto u = weight_profile(spec, rt, last);
  const double scale = 1.0 / std::sqrt(static_cast<double>(rt.total()));
  std::vector<std::vector<double>> lr(rt.num_groups(), std::vector<double>(static_cast<std::size_t>(last) + 1, 0.0));
  for (std::size_t q = 0; q < rt.num_groups(); ++q) {
    double acc = 0.0;
    for (int l = 1; l <= last; ++l) {
      const long pooled = rt.pooled_at_risk(l);
      const long vq = rt.at_risk(q, l);
      if (pooled > 0 && vq > 0) {
        const double expected = static_cast<double>(vq) * static_cast<double>(rt.pooled_events(l)) /
                                static_cast<double>(pooled);
        acc += scale * u[static_cast<std::size_t>(l)] * (static_cast<double>(rt.events(q, l)) - expected);
      }
      lr[q][static_cast<std::size_t>(l)] = acc;
    }
  }
  return lr;
}

double phi2_hat(const RiskTable& rt, const HazardEstimate& hz, const WeightSpec& spec, std::size_t q, int l) {
  check_group(rt, q);
  if (l < 1 || l > rt.max_category()) return 0.0;
  return phi2_from_terms(category_terms(rt, hz, u_eval(spec, rt, l), l), q);
}

double psi_hat(const RiskTable& rt, const HazardEstimate& hz, const WeightSpec& spec, std::size_t k,
               std::size_t r, int l) {
  check_group(rt, k);
  check_group(rt, r);
  if (k == r) throw InputError("psi_hat needs two distinct groups");
  if (l < 1 || l > rt.max_category()) return 0.0;
  const auto t = category_terms(rt, hz, u_eval(spec, rt, l), l);
  return psi_from_terms(t, std::min(k, r), std::max(k, r));
}

SymMatrix q_matrix(const RiskTable& rt, const HazardEstimate& hz, const WeightSpec& spec, int l) {
  if (l < 1 || l > rt.max_category()) return SymMatrix(rt.num_groups());
  return q_from_terms(category_terms(rt, hz, u_eval(spec, rt, l), l));
}

std::vector<SymMatrix> gamma_hat(std::span<const SymMatrix> q_hat) {
  std::vector<SymMatrix> out;
  out.reserve(q_hat.size());
  if (q_hat.empty()) return out;
  const std::size_t d = q_hat.front().dim();
  out.emplace_back(d);
  for (std::size_t l = 1; l < q_hat.size(); ++l) {
    SymMatrix next = out.back();
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = a; b < d; ++b) next.add(a, b, q_hat[l](a, b));
    out.push_back(std::move(next));
  }
  return out;
}

LogRankState build_logrank_state(const RiskTable& rt, const HazardEstimate& hz, const WeightSpec& spec,
                                 int last) {
  last = std::clamp(last, 0, rt.max_category());
  LogRankState st;
  st.groups = rt.num_groups();
  st.last = last;
  st.lr = lr_process(rt, spec, last);

  const auto u = weight_profile(spec, rt, last);
  st.q_hat.emplace_back(st.groups);
  for (int l = 1; l <= last; ++l)
    st.q_hat.push_back(q_from_terms(category_terms(rt, hz, u[static_cast<std::size_t>(l)], l)));
  st.gamma = gamma_hat(st.q_hat);

  st.phi.assign(st.groups, std::vector<double>(static_cast<std::size_t>(last) + 1, 0.0));
  for (std::size_t q = 0; q < st.groups; ++q)
    for (int l = 1; l <= last; ++l) {
      const auto i = static_cast<std::size_t>(l);
      st.phi[q][i] = std::sqrt(std::max(st.q_hat[i](q, q), 0.0));
    }
  return st;
}

LogRankResult logrank_test(const RiskTable& rt, const WeightSpec& spec) {
  const auto range = category_range(rt);
  return evaluate(rt, spec, range, range.hi);
}

LogRankResult logrank_test_type2(const RiskTable& rt, const WeightSpec& spec, double beta) {
  const int stop = type2_stop(rt, beta);
  const auto range = category_range(rt);
  auto res = evaluate(rt, spec, range, std::min(stop, range.hi));
  res.type2_stop = stop;
  return res;
}

}  // namespace survtest
