#include "survtest/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "survtest/cvm.hpp"
#include "survtest/error.hpp"
#include "survtest/logrank.hpp"

namespace survtest::sim {

namespace {

// exp(-mean) must stay representable for the inversion sampler.
constexpr double kMaxMean = 700.0;

int positive_poisson(Xoshiro256& rng, double mean) {
  int v = 0;
  while (v == 0) v = poisson_inverse(rng, mean);
  return v;
}

Tally tally(const std::vector<ReplicationOutcome>& outcomes, double alpha,
            std::optional<double> ReplicationOutcome::*field) {
  Tally t;
  for (const auto& o : outcomes) {
    const auto& p = o.*field;
    if (!p) {
      ++t.failures;
      continue;
    }
    ++t.valid;
    if (*p <= alpha) ++t.rejections;
  }
  t.level = t.valid > 0 ? static_cast<double>(t.rejections) / static_cast<double>(t.valid) : 0.0;
  return t;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

void SimConfig::validate() const {
  if (groups.size() < 2) throw InputError("simulation needs at least 2 groups");
  for (const auto& g : groups) {
    if (!(g.lambda > 0.0) || g.lambda > kMaxMean) throw InputError("group lambda must lie in (0, 700]");
    if (g.n < 1) throw InputError("group size must be >= 1");
  }
  if (censoring.kind == Censoring::Kind::Poisson && (!(censoring.lambda > 0.0) || censoring.lambda > kMaxMean))
    throw InputError("censoring lambda must lie in (0, 700]");
  if (replications < 1) throw InputError("replications must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("alpha must lie in (0, 1)");
}

std::vector<Observation> sample_group(Xoshiro256& rng, double lambda_event, const Censoring& censoring, int n,
                                      int group) {
  std::vector<Observation> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int m = 0; m < n; ++m) {
    const int w = positive_poisson(rng, lambda_event);
    if (censoring.kind == Censoring::Kind::None) {
      out.push_back({w, true, group});
      continue;
    }
    const int c = positive_poisson(rng, censoring.lambda);
    // Ties count as events.
    out.push_back({std::min(w, c), w <= c, group});
  }
  return out;
}

std::vector<Observation> sample_replication(const SimConfig& cfg, std::uint64_t index) {
  auto rng = Xoshiro256::stream(cfg.seed, index);
  std::vector<Observation> obs;
  for (std::size_t p = 0; p < cfg.groups.size(); ++p) {
    auto g = sample_group(rng, cfg.groups[p].lambda, cfg.censoring, cfg.groups[p].n, static_cast<int>(p));
    obs.insert(obs.end(), g.begin(), g.end());
  }
  return obs;
}

ReplicationOutcome run_replication(const SimConfig& cfg, std::uint64_t index) {
  const auto obs = sample_replication(cfg, index);
  const RiskTable rt(obs, cfg.groups.size());
  ReplicationOutcome out;
  try {
    out.p_logrank = logrank_test(rt, cfg.weight).p_value;
  } catch (const DegenerateError&) {
  }
  try {
    out.p_cvm = cvm_test(rt, cfg.weight).p_value;
  } catch (const GateError&) {
    out.cvm_gate_failed = true;
  } catch (const DegenerateError&) {
  }
  return out;
}

SimResult aggregate(const SimConfig& cfg, std::vector<ReplicationOutcome> outcomes) {
  SimResult res;
  res.logrank = tally(outcomes, cfg.alpha, &ReplicationOutcome::p_logrank);
  res.cvm = tally(outcomes, cfg.alpha, &ReplicationOutcome::p_cvm);
  for (const auto& o : outcomes) res.cvm_gate_failures += o.cvm_gate_failed ? 1 : 0;
  if (res.logrank.valid == 0 && res.cvm.valid == 0) throw InputError("every replication was degenerate");
  res.outcomes = std::move(outcomes);
  return res;
}

SimResult empirical_level(const SimConfig& cfg, int threads) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  const long reps = cfg.replications;
  std::vector<ReplicationOutcome> outcomes(static_cast<std::size_t>(reps));

#ifdef _OPENMP
  const int team = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 4) num_threads(team)
#endif
  for (long i = 0; i < reps; ++i)
    outcomes[static_cast<std::size_t>(i)] = run_replication(cfg, static_cast<std::uint64_t>(i));

  auto res = aggregate(cfg, std::move(outcomes));
  res.wall_seconds = seconds_since(start);
  return res;
}

namespace reference {

SimResult empirical_level(const SimConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  std::vector<ReplicationOutcome> outcomes;
  outcomes.reserve(static_cast<std::size_t>(cfg.replications));
  for (long i = 0; i < cfg.replications; ++i) outcomes.push_back(run_replication(cfg, static_cast<std::uint64_t>(i)));
  auto res = aggregate(cfg, std::move(outcomes));
  res.wall_seconds = seconds_since(start);
  return res;
}

}  // namespace reference

}  // namespace survtest::sim
