#pragma once

#include <cstddef>
#include <istream>
#include <span>
#include <string>
#include <vector>

namespace survtest {

/// One right-censored record. `time` is the observed category X = min(W, C),
/// `event` is true when X = W. Groups are 0-based internally.
struct Observation {
  int time = 1;
  bool event = true;
  int group = 0;
};

/// Observations plus the label of each group index, in first-appearance order.
struct Dataset {
  std::vector<Observation> observations;
  std::vector<std::string> group_labels;

  std::size_t num_groups() const { return group_labels.size(); }
};

/// Parse `group,time,event` CSV. Throws InputError naming the offending line.
Dataset ingest_csv(std::istream& in);
Dataset ingest_csv_file(const std::string& path);

/// Per-group and pooled at-risk / event / censor counts over categories
/// 1..max_category. Queries outside that range return 0.
class RiskTable {
 public:
  RiskTable(std::span<const Observation> observations, std::size_t num_groups);

  std::size_t num_groups() const { return sizes_.size(); }
  int max_category() const { return max_cat_; }
  /// Total sample size over all groups.
  long total() const { return total_; }
  long group_size(std::size_t p) const { return sizes_[p]; }
  /// Largest observed category in group p (0 for an empty group).
  int group_max_category(std::size_t p) const { return group_max_[p]; }

  long at_risk(std::size_t p, int l) const { return get(at_risk_[p], l); }
  long events(std::size_t p, int l) const { return get(events_[p], l); }
  long censored(std::size_t p, int l) const { return get(censored_[p], l); }
  long pooled_at_risk(int l) const { return get(pooled_at_risk_, l); }
  long pooled_events(int l) const { return get(pooled_events_, l); }

  /// Smallest at-risk count across groups at category l.
  long min_at_risk(int l) const;

 private:
  long get(const std::vector<long>& v, int l) const {
    return (l >= 1 && l <= max_cat_) ? v[static_cast<std::size_t>(l)] : 0;
  }

  int max_cat_ = 0;
  long total_ = 0;
  std::vector<long> sizes_;
  std::vector<int> group_max_;
  // Indexed by category; slot 0 unused.
  std::vector<std::vector<long>> at_risk_;
  std::vector<std::vector<long>> events_;
  std::vector<std::vector<long>> censored_;
  std::vector<long> pooled_at_risk_;
  std::vector<long> pooled_events_;
};

/// Categories the tests operate on.
struct CategoryRange {
  int lo = 0;  // first category with a pooled event
  int hi = 0;  // last category with every group at risk
  std::vector<int> observable;  // l in [lo, hi] with a pooled event, increasing
};

/// Throws DegenerateError("no observable categories") when no pooled event
/// falls where every group is still at risk.
CategoryRange category_range(const RiskTable& rt);

/// Smallest category at which cumulative pooled events reach beta * n.
int type2_stop(const RiskTable& rt, double beta);

}  // namespace survtest
