#include "survtest/report.hpp"

#include <cstdio>

#include "survtest/error.hpp"
#include "survtest/rng.hpp"

namespace survtest {

using nlohmann::json;

TestReport make_report(const LogRankResult& r, const WeightSpec& w, std::size_t observable,
                       std::string input_digest) {
  TestReport rep;
  rep.test = "logrank";
  rep.statistic = r.statistic;
  rep.df = r.df;
  rep.p_value = r.p_value;
  rep.weight = w.to_string();
  rep.d_lo = r.d_lo;
  rep.d_hi = r.d_hi;
  rep.observable = observable;
  rep.rcond = r.rcond;
  rep.evaluated_at = r.evaluated_at;
  rep.type2_stop = r.type2_stop;
  rep.input_digest = std::move(input_digest);
  return rep;
}

TestReport make_report(const CvmResult& r, const WeightSpec& w, const std::string& dropped_label,
                       std::string input_digest) {
  TestReport rep;
  rep.test = "cvm";
  rep.statistic = r.statistic;
  rep.eigenvalues = r.eigenvalues;
  rep.p_value = r.p_value;
  rep.weight = w.to_string();
  rep.d_lo = r.d_lo;
  rep.d_hi = r.d_hi;
  rep.observable = r.observable;
  rep.dropped_group = dropped_label;
  rep.gate = r.gate;
  rep.input_digest = std::move(input_digest);
  return rep;
}

namespace {

template <class T>
void put_optional(json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

template <class T>
void get_optional(const json& j, const char* key, std::optional<T>& v) {
  if (j.contains(key)) {
    v = j.at(key).get<T>();
  } else {
    v.reset();
  }
}

}  // namespace

void to_json(json& j, const TestReport& r) {
  j = json{{"test", r.test},       {"statistic", r.statistic},   {"p_value", r.p_value},
           {"weight", r.weight},   {"d_lo", r.d_lo},             {"d_hi", r.d_hi},
           {"observable", r.observable}, {"version", r.version}, {"input_digest", r.input_digest}};
  if (r.test == "cvm") j["eigenvalues"] = r.eigenvalues;
  put_optional(j, "df", r.df);
  put_optional(j, "dropped_group", r.dropped_group);
  put_optional(j, "rcond", r.rcond);
  put_optional(j, "gate", r.gate);
  put_optional(j, "evaluated_at", r.evaluated_at);
  put_optional(j, "type2_stop", r.type2_stop);
}

void from_json(const json& j, TestReport& r) {
  j.at("test").get_to(r.test);
  j.at("statistic").get_to(r.statistic);
  j.at("p_value").get_to(r.p_value);
  j.at("weight").get_to(r.weight);
  j.at("d_lo").get_to(r.d_lo);
  j.at("d_hi").get_to(r.d_hi);
  j.at("observable").get_to(r.observable);
  j.at("version").get_to(r.version);
  j.at("input_digest").get_to(r.input_digest);
  r.eigenvalues = j.value("eigenvalues", std::vector<double>{});
  get_optional(j, "df", r.df);
  get_optional(j, "dropped_group", r.dropped_group);
  get_optional(j, "rcond", r.rcond);
  get_optional(j, "gate", r.gate);
  get_optional(j, "evaluated_at", r.evaluated_at);
  get_optional(j, "type2_stop", r.type2_stop);
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

sim::SimConfig sim_config_from_json(const json& j) {
  sim::SimConfig cfg;
  try {
    for (const auto& g : j.at("groups")) cfg.groups.push_back({g.at("lambda").get<double>(), g.at("n").get<int>()});
    if (j.contains("censoring")) {
      const auto& c = j.at("censoring");
      const auto kind = c.at("kind").get<std::string>();
      if (kind == "none") {
        cfg.censoring = sim::Censoring::none();
      } else if (kind == "poisson") {
        cfg.censoring = sim::Censoring::poisson(c.at("lambda").get<double>());
      } else {
        throw InputError("censoring.kind must be 'none' or 'poisson'");
      }
    }
    cfg.replications = j.at("replications").get<long>();
    cfg.alpha = j.value("alpha", 0.05);
    cfg.weight = WeightSpec::parse(j.value("weight", std::string("unit")));
    cfg.seed = j.value("seed", std::uint64_t{0});
  } catch (const json::exception& e) {
    throw InputError(std::string("bad simulation config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

json sim_config_to_json(const sim::SimConfig& cfg) {
  json groups = json::array();
  for (const auto& g : cfg.groups) groups.push_back({{"lambda", g.lambda}, {"n", g.n}});
  json censoring = {{"kind", cfg.censoring.kind == sim::Censoring::Kind::None ? "none" : "poisson"}};
  if (cfg.censoring.kind == sim::Censoring::Kind::Poisson) censoring["lambda"] = cfg.censoring.lambda;
  return {{"groups", groups},       {"censoring", censoring},        {"replications", cfg.replications},
          {"alpha", cfg.alpha},     {"weight", cfg.weight.to_string()}, {"seed", cfg.seed}};
}

json sim_result_to_json(const sim::SimConfig& cfg, const sim::SimResult& res) {
  json ss;
  bool equal_sizes = true;
  for (const auto& g : cfg.groups) equal_sizes = equal_sizes && g.n == cfg.groups.front().n;
  if (equal_sizes) {
    ss = cfg.groups.front().n;
  } else {
    ss = json::array();
    for (const auto& g : cfg.groups) ss.push_back(g.n);
  }
  std::string censoring = "none";
  if (cfg.censoring.kind == sim::Censoring::Kind::Poisson) {
    json lam = cfg.censoring.lambda;
    censoring = "poisson(" + lam.dump() + ")";
  }

  auto row = [&](const char* test, const sim::Tally& t) {
    return json{{"ss", ss},
                {"populations", cfg.groups.size()},
                {"censoring", censoring},
                {"test", test},
                {"empirical_level", t.level},
                {"rejections", t.rejections},
                {"valid", t.valid},
                {"failures", t.failures}};
  };
  json rows = json::array();
  auto cvm_row = row("CVM", res.cvm);
  cvm_row["gate_failures"] = res.cvm_gate_failures;
  rows.push_back(cvm_row);
  rows.push_back(row("LR", res.logrank));

  return {{"schema", kSchemaVersion},
          {"tool", "survtest"},
          {"version", kToolVersion},
          {"rng", Xoshiro256::kAlgorithm},
          {"config", sim_config_to_json(cfg)},
          {"rows", rows}};
}

}  // namespace survtest
