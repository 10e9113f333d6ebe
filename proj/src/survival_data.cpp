#include "survtest/survival_data.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <string_view>
#include <unordered_map>

#include "survtest/error.hpp"

namespace survtest {

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

bool valid_label(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
           c == '_' || c == '.' || c == '-';
  });
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw InputError("line " + std::to_string(line) + ": " + what);
}

}  // namespace

Dataset ingest_csv(std::istream& in) {
  Dataset ds;
  std::unordered_map<std::string, int> index;
  std::string raw;
  std::size_t line_no = 0;
  bool header_seen = false;

  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != "group,time,event") fail(line_no, "expected header 'group,time,event'");
      header_seen = true;
      continue;
    }

    std::string_view fields[3];
    std::size_t start = 0;
    for (int f = 0; f < 3; ++f) {
      const auto comma = line.find(',', start);
      if ((f < 2) == (comma == std::string_view::npos)) fail(line_no, "expected 3 comma-separated fields");
      fields[f] = trim(line.substr(start, f < 2 ? comma - start : std::string_view::npos));
      start = comma + 1;
    }

    if (!valid_label(fields[0])) fail(line_no, "invalid group label '" + std::string(fields[0]) + "'");

    long long t = 0;
    const auto* tb = fields[1].data();
    const auto* te = tb + fields[1].size();
    auto [tp, tec] = std::from_chars(tb, te, t);
    if (tec != std::errc{} || tp != te) fail(line_no, "time is not an integer");
    if (t < 1) fail(line_no, "category must be >= 1");
    if (t > std::numeric_limits<int>::max()) fail(line_no, "category out of range");

    bool event = false;
    if (fields[2] == "1") {
      event = true;
    } else if (fields[2] != "0") {
      fail(line_no, "event must be 0 or 1");
    }

    const std::string label(fields[0]);
    auto [it, inserted] = index.try_emplace(label, static_cast<int>(ds.group_labels.size()));
    if (inserted) ds.group_labels.push_back(label);
    ds.observations.push_back({static_cast<int>(t), event, it->second});
  }

  if (!header_seen) throw InputError("empty input: missing header 'group,time,event'");
  if (ds.group_labels.size() < 2) throw InputError("need at least 2 distinct groups");
  return ds;
}

Dataset ingest_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return ingest_csv(in);
}

RiskTable::RiskTable(std::span<const Observation> observations, std::size_t num_groups)
    : sizes_(num_groups, 0), group_max_(num_groups, 0) {
  if (num_groups < 2) throw InputError("need at least 2 groups");
  if (observations.empty()) throw InputError("no observations");

  for (const auto& o : observations) {
    if (o.time < 1) throw InputError("category must be >= 1");
    if (o.group < 0 || static_cast<std::size_t>(o.group) >= num_groups)
      throw InputError("group index out of range");
    max_cat_ = std::max(max_cat_, o.time);
  }

  const auto width = static_cast<std::size_t>(max_cat_) + 2;
  at_risk_.assign(num_groups, std::vector<long>(width, 0));
  events_.assign(num_groups, std::vector<long>(width, 0));
  censored_.assign(num_groups, std::vector<long>(width, 0));
  pooled_at_risk_.assign(width, 0);
  pooled_events_.assign(width, 0);

  for (const auto& o : observations) {
    const auto p = static_cast<std::size_t>(o.group);
    ++sizes_[p];
    group_max_[p] = std::max(group_max_[p], o.time);
    (o.event ? events_ : censored_)[p][static_cast<std::size_t>(o.time)] += 1;
  }

  // V(l) = V(l+1) + dR(l) + dRc(l), accumulated from the top.
  for (std::size_t p = 0; p < num_groups; ++p) {
    for (int l = max_cat_; l >= 1; --l) {
      const auto i = static_cast<std::size_t>(l);
      at_risk_[p][i] = at_risk_[p][i + 1] + events_[p][i] + censored_[p][i];
      pooled_at_risk_[i] += at_risk_[p][i];
      pooled_events_[i] += events_[p][i];
    }
    total_ += sizes_[p];
  }
}

long RiskTable::min_at_risk(int l) const {
  long m = std::numeric_limits<long>::max();
  for (std::size_t p = 0; p < num_groups(); ++p) m = std::min(m, at_risk(p, l));
  return m;
}

CategoryRange category_range(const RiskTable& rt) {
  CategoryRange r;
  for (int l = 1; l <= rt.max_category(); ++l) {
    if (rt.pooled_events(l) > 0) {
      r.lo = l;
      break;
    }
  }
  for (int l = rt.max_category(); l >= 1; --l) {
    if (rt.min_at_risk(l) > 0) {
      r.hi = l;
      break;
    }
  }
  if (r.lo == 0 || r.hi == 0 || r.lo > r.hi) throw DegenerateError("no observable categories");
  for (int l = r.lo; l <= r.hi; ++l)
    if (rt.pooled_events(l) > 0) r.observable.push_back(l);
  return r;
}

int type2_stop(const RiskTable& rt, double beta) {
  if (!(beta > 0.0 && beta < 1.0)) throw InputError("type-2 fraction must lie in (0, 1)");
  const double n = static_cast<double>(rt.total());
  long cumulative = 0;
  for (int l = 1; l <= rt.max_category(); ++l) {
    cumulative += rt.pooled_events(l);
    if (static_cast<double>(cumulative) / n >= beta) return l;
  }
  throw InputError("beta-quantile not attained");
}

}  // namespace survtest
