#include "survtest/cli.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "survtest/cvm.hpp"
#include "survtest/error.hpp"
#include "survtest/logrank.hpp"
#include "survtest/numerics.hpp"
#include "survtest/report.hpp"
#include "survtest/sim.hpp"

namespace survtest::cli {

using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TestArgs {
  std::string input;
  std::string weight = "unit";
  std::optional<double> type2;
  bool json = false;
};

int cmd_test(const TestArgs& a, std::ostream& out, std::ostream& err) {
  const std::string bytes = read_file(a.input);
  std::istringstream in(bytes);
  const Dataset ds = ingest_csv(in);
  const WeightSpec weight = WeightSpec::parse(a.weight);
  const RiskTable rt(ds.observations, ds.num_groups());
  const std::string digest = fnv1a_hex(bytes);

  std::vector<TestReport> reports;
  std::vector<std::pair<std::string, std::string>> errors;

  try {
    const auto range = category_range(rt);
    const auto lr = a.type2 ? logrank_test_type2(rt, weight, *a.type2) : logrank_test(rt, weight);
    reports.push_back(make_report(lr, weight, range.observable.size(), digest));
  } catch (const DegenerateError& e) {
    errors.emplace_back("logrank", e.what());
  }
  try {
    const auto c = cvm_test(rt, weight);
    reports.push_back(make_report(c, weight, ds.group_labels[c.dropped_group], digest));
  } catch (const DegenerateError& e) {
    errors.emplace_back("cvm", e.what());
  }

  if (a.json) {
    json doc = {{"schema", kSchemaVersion},
                {"tool", "survtest"},
                {"version", kToolVersion},
                {"input_digest", digest},
                {"groups", ds.group_labels},
                {"n", rt.total()},
                {"weight", weight.to_string()},
                {"reports", reports}};
    json errs = json::array();
    for (const auto& [test, msg] : errors) errs.push_back({{"test", test}, {"message", msg}});
    doc["errors"] = errs;
    out << doc.dump(2) << '\n';
  } else {
    out << "survtest " << kToolVersion << "  groups:";
    for (const auto& g : ds.group_labels) out << ' ' << g;
    out << "  n = " << rt.total() << "  weight: " << weight.to_string() << '\n';
    out << std::setprecision(6);
    for (const auto& r : reports) {
      if (r.test == "logrank") {
        out << "log-rank  X2 = " << r.statistic << "  df = " << *r.df << "  p = " << r.p_value
            << "  (categories " << r.d_lo << ".." << *r.evaluated_at;
        if (r.type2_stop) out << ", type-2 stop " << *r.type2_stop;
        out << ")\n";
      } else {
        out << "CVM       stat = " << r.statistic << "  p = " << r.p_value << "  (" << r.observable
            << " observable categories in " << r.d_lo << ".." << r.d_hi << ", dropped group "
            << *r.dropped_group << ")\n";
      }
    }
  }
  for (const auto& [test, msg] : errors) err << "error (" << test << "): " << msg << '\n';
  return errors.empty() ? kOk : kDegenerate;
}

int cmd_simulate(const std::string& config_path, int threads, std::ostream& out, std::ostream& err) {
  json doc;
  try {
    doc = json::parse(read_file(config_path));
  } catch (const json::parse_error& e) {
    throw InputError(std::string("config is not valid JSON: ") + e.what());
  }
  auto cfg = sim_config_from_json(doc);
  if (const char* env = std::getenv("SURVTEST_SEED"); env != nullptr && *env != '\0') {
    const std::string_view s(env);
    std::uint64_t seed = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), seed);
    if (ec != std::errc{} || p != s.data() + s.size()) throw InputError("SURVTEST_SEED is not a 64-bit integer");
    cfg.seed = seed;
  }
  const auto res = sim::empirical_level(cfg, threads);
  out << sim_result_to_json(cfg, res).dump(2) << '\n';
  err << "wall time: " << std::fixed << std::setprecision(2) << res.wall_seconds << " s\n";
  return kOk;
}

int cmd_pvalue(const std::string& lambdas_text, double x, std::ostream& out) {
  std::vector<double> lambdas;
  std::string_view rest(lambdas_text);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const auto tok = rest.substr(0, comma);
    double v = 0.0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || p != tok.data() + tok.size()) throw InputError("bad lambda '" + std::string(tok) + "'");
    if (!(v > 0.0)) throw InputError("lambdas must be positive");
    lambdas.push_back(v);
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  if (lambdas.empty()) throw InputError("no lambdas given");
  if (!(x >= 0.0)) throw InputError("x must be >= 0");
  out << std::setprecision(10) << imhof_tail(lambdas, x) << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Homogeneity tests for right-censored discrete populations", "survtest"};
  app.require_subcommand(1);

  TestArgs test_args;
  auto* test = app.add_subcommand("test", "Weighted log-rank and Cramer-von Mises tests on a CSV file");
  test->add_option("--input", test_args.input, "CSV with header group,time,event")->required();
  test->add_option("--weight", test_args.weight, "unit | tw:<gamma> | fh:<beta>,<delta>");
  test->add_option("--type2", test_args.type2, "stop the log-rank sums at this pooled event fraction");
  test->add_flag("--json", test_args.json, "emit JSON");

  std::string config;
  int threads = 0;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo empirical significance levels");
  simulate->add_option("--config", config, "simulation config (JSON)")->required();
  simulate->add_option("--threads", threads, "worker threads (0 = default)")->check(CLI::NonNegativeNumber);

  std::string lambdas;
  double x = 0.0;
  auto* pvalue = app.add_subcommand("pvalue", "Tail probability of a weighted sum of chi2(1) variables");
  pvalue->add_option("--lambdas", lambdas, "comma-separated positive weights")->required();
  pvalue->add_option("--x", x, "threshold")->required();

  std::vector<std::string> argv_storage{"survtest"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_storage) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kInputError;
  }

  try {
    if (*test) return cmd_test(test_args, out, err);
    if (*simulate) return cmd_simulate(config, threads, out, err);
    if (*pvalue) return cmd_pvalue(lambdas, x, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const DegenerateError& e) {
    err << "error: " << e.what() << '\n';
    return kDegenerate;
  }
  return kInputError;
}

}  // namespace survtest::cli
