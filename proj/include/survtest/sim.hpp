#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "survtest/rng.hpp"
#include "survtest/survival_data.hpp"
#include "survtest/weights.hpp"

namespace survtest::sim {

struct GroupSpec {
  double lambda = 100.0;  // Poisson mean of the event time, conditioned >= 1
  int n = 50;
};

struct Censoring {
  enum class Kind { None, Poisson };
  Kind kind = Kind::None;
  double lambda = 0.0;  // Poisson mean of the censoring time, conditioned >= 1

  static Censoring none() { return {}; }
  static Censoring poisson(double lambda) { return {Kind::Poisson, lambda}; }
};

struct SimConfig {
  std::vector<GroupSpec> groups;
  Censoring censoring;
  long replications = 1;
  double alpha = 0.05;
  WeightSpec weight;
  std::uint64_t seed = 0;

  /// Throws InputError on an invalid configuration.
  void validate() const;
};

/// Outcome of one replication. A missing p-value means that test was not
/// computable on the sample (singular covariance, failed gate).
struct ReplicationOutcome {
  std::optional<double> p_logrank;
  std::optional<double> p_cvm;
  bool cvm_gate_failed = false;

  bool operator==(const ReplicationOutcome&) const = default;
};

struct Tally {
  long rejections = 0;
  long valid = 0;     // replications where the test was computable
  long failures = 0;  // excluded from the level's denominator
  double level = 0.0;

  bool operator==(const Tally&) const = default;
};

struct SimResult {
  Tally logrank;
  Tally cvm;
  long cvm_gate_failures = 0;
  /// Per-replication outcomes in index order.
  std::vector<ReplicationOutcome> outcomes;
  double wall_seconds = 0.0;
};

/// n observations of one group: X = min(W, C), event = (W <= C).
std::vector<Observation> sample_group(Xoshiro256& rng, double lambda_event, const Censoring& censoring, int n,
                                      int group = 0);

/// Full dataset of replication `index`, drawn from its own RNG stream.
std::vector<Observation> sample_replication(const SimConfig& cfg, std::uint64_t index);

ReplicationOutcome run_replication(const SimConfig& cfg, std::uint64_t index);

/// Counts rejections at level alpha. Throws InputError when every replication
/// failed for both tests.
SimResult aggregate(const SimConfig& cfg, std::vector<ReplicationOutcome> outcomes);

/// Replications spread over `threads` OpenMP threads (0 = runtime default).
/// The result does not depend on the thread count.
SimResult empirical_level(const SimConfig& cfg, int threads = 0);

namespace reference {
/// Single-threaded loop over replications, kept as the baseline for the
/// parallel driver.
SimResult empirical_level(const SimConfig& cfg);
}  // namespace reference

}  // namespace survtest::sim
