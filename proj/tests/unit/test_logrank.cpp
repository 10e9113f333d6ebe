#include <doctest.h>

#include <cmath>
#include <random>

#include "support/fixtures.hpp"
#include "survtest/error.hpp"
#include "survtest/logrank.hpp"

using namespace survtest;
using doctest::Approx;

namespace {

const double kD1Gamma = 3.0 / 128 + 1.0 / 24 + 1.0 / 144;

bool computable(const RiskTable& rt) {
  try {
    category_range(rt);
    return true;
  } catch (const DegenerateError&) {
    return false;
  }
}

}  // namespace

TEST_CASE("log-rank process on D1") {
  const auto obs = fixtures::d1();
  const RiskTable rt(obs, 2);
  const auto lr = lr_process(rt, WeightSpec::unit(), 4);
  const double s8 = std::sqrt(8.0);
  CHECK(lr[0][1] == Approx(0.5 / s8));
  CHECK(lr[0][2] == Approx(0.0).epsilon(1e-15));
  CHECK(lr[0][3] == Approx(1.0 / (6 * std::sqrt(2.0))).epsilon(1e-14));
  for (int j = 0; j <= 4; ++j) CHECK(lr[0][j] + lr[1][j] == Approx(0.0).epsilon(1e-15));
}

TEST_CASE("variance estimates on D1") {
  const auto obs = fixtures::d1();
  const RiskTable rt(obs, 2);
  const auto hz = estimate_hazards(rt);
  const auto w = WeightSpec::unit();
  CHECK(phi2_hat(rt, hz, w, 0, 1) == Approx(3.0 / 128).epsilon(1e-14));
  CHECK(phi2_hat(rt, hz, w, 0, 2) == Approx(1.0 / 24).epsilon(1e-14));
  CHECK(phi2_hat(rt, hz, w, 0, 3) == Approx(1.0 / 144).epsilon(1e-14));
  CHECK(phi2_hat(rt, hz, w, 0, 4) == 0.0);

  const auto state = build_logrank_state(rt, hz, w, 3);
  CHECK(state.gamma[3](0, 0) == Approx(kD1Gamma).epsilon(1e-14));
  for (int l = 1; l <= 3; ++l) {
    CHECK(state.gamma[l](0, 1) == 0.0);
    CHECK(state.gamma[l](0, 0) == Approx(state.gamma[l](1, 1)).epsilon(1e-14));
    CHECK(state.phi[0][l] == Approx(std::sqrt(state.q_hat[l](0, 0))));
  }
}

TEST_CASE("log-rank test on D1") {
  const auto obs = fixtures::d1();
  const RiskTable rt(obs, 2);
  const auto r = logrank_test(rt, WeightSpec::unit());
  const double x2 = (1.0 / 72) / kD1Gamma;
  CHECK(r.statistic == Approx(x2).epsilon(1e-13));
  CHECK(r.df == 1);
  CHECK(r.p_value == Approx(chisq_sf(x2, 1)).epsilon(1e-13));
  CHECK(r.d_lo == 1);
  CHECK(r.d_hi == 3);
  CHECK(r.evaluated_at == 3);
  CHECK_FALSE(r.type2_stop.has_value());
}

TEST_CASE("identical groups give a zero statistic") {
  std::vector<Observation> obs;
  for (int g = 0; g < 3; ++g)
    for (auto [t, e] : {std::pair{1, true}, {2, false}, {2, true}, {3, true}, {4, true}}) obs.push_back({t, e, g});
  const RiskTable rt(obs, 3);
  const auto r = logrank_test(rt, WeightSpec::unit());
  CHECK(r.statistic == Approx(0.0).epsilon(1e-15));
  CHECK(r.p_value == Approx(1.0));
  const auto lr = lr_process(rt, WeightSpec::unit(), rt.max_category());
  for (const auto& row : lr)
    for (double v : row) CHECK(v == Approx(0.0).epsilon(1e-15));
  // with identical groups psi is symmetric in (k, r)
  const auto hz = estimate_hazards(rt);
  for (int l = 1; l <= 3; ++l)
    CHECK(psi_hat(rt, hz, WeightSpec::unit(), 0, 1, l) == Approx(psi_hat(rt, hz, WeightSpec::unit(), 1, 0, l)));
}

TEST_CASE("degenerate hazards make the test not computable") {
  const std::vector<Observation> obs{{1, true, 0}, {1, true, 1}};
  CHECK_THROWS_AS(logrank_test(RiskTable(obs, 2), WeightSpec::unit()), DegenerateError);
}

TEST_CASE("type-2 stopping") {
  const auto obs = fixtures::d1();
  const RiskTable rt(obs, 2);
  const auto half = logrank_test_type2(rt, WeightSpec::unit(), 0.5);
  CHECK(half.evaluated_at == 2);
  CHECK(half.type2_stop == 2);
  // LR_A(2) = 0
  CHECK(half.statistic == Approx(0.0).epsilon(1e-15));
  CHECK(half.rcond == 1.0);

  // stop beyond d_hi reproduces the untruncated test
  const auto late = logrank_test_type2(rt, WeightSpec::unit(), 0.7);
  const auto full = logrank_test(rt, WeightSpec::unit());
  CHECK(late.evaluated_at == 3);
  CHECK(late.type2_stop == 4);
  CHECK(late.statistic == full.statistic);
  CHECK(late.p_value == full.p_value);

  CHECK_THROWS_AS(logrank_test_type2(rt, WeightSpec::unit(), 0.99), InputError);
}

TEST_CASE("three-group covariance matches the direct formulas") {
  std::vector<Observation> obs{{1, true, 0}, {2, true, 0}, {2, false, 0}, {3, true, 0}, {4, true, 0},
                               {1, false, 1}, {1, true, 1}, {3, true, 1}, {3, true, 1}, {5, true, 1},
                               {2, true, 2},  {2, true, 2}, {3, false, 2}, {4, true, 2}, {4, true, 2}};
  const RiskTable rt(obs, 3);
  const auto hz = estimate_hazards(rt);
  const auto recs = fixtures::to_records(obs);
  for (const auto& w : fixtures::weight_family()) {
    const auto o = oracle::compute(recs, 3, fixtures::to_oracle(w));
    const auto state = build_logrank_state(rt, hz, w, rt.max_category());
    for (int l = 1; l <= rt.max_category(); ++l)
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          CHECK(state.q_hat[l](a, b) == Approx(o.q[l][a][b]).epsilon(1e-12).scale(1.0));
          CHECK(state.gamma[l](a, b) == Approx(o.gamma[l][a][b]).epsilon(1e-12).scale(1.0));
        }
    const auto r = logrank_test(rt, w);
    REQUIRE(o.x2.has_value());
    CHECK(r.statistic == Approx(*o.x2).epsilon(1e-10));
    CHECK(r.df == 2);
  }
}

TEST_CASE("random fixtures: sum to zero, oracle agreement, scale invariance") {
  std::mt19937_64 gen(17);
  int tested = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const int J = 2 + trial % 4;
    const auto obs = fixtures::random_dataset(gen, J, 2, 12, 6, 0.3);
    const RiskTable rt(obs, static_cast<std::size_t>(J));
    if (!computable(rt)) continue;
    const auto recs = fixtures::to_records(obs);
    const auto hz = estimate_hazards(rt);
    for (const auto& w : fixtures::weight_family()) {
      const auto lr = lr_process(rt, w, rt.max_category());
      for (int j = 0; j <= rt.max_category(); ++j) {
        double s = 0.0, mag = 0.0;
        for (int q = 0; q < J; ++q) {
          s += lr[q][j];
          mag += std::abs(lr[q][j]);
        }
        CHECK(std::abs(s) <= 1e-12 * (1.0 + mag));
      }
      if (J <= 3) {
        const auto o = oracle::compute(recs, J, fixtures::to_oracle(w));
        const auto state = build_logrank_state(rt, hz, w, rt.max_category());
        for (int q = 0; q < J; ++q)
          for (int j = 1; j <= rt.max_category(); ++j) {
            CHECK(lr[q][j] == Approx(o.lr[q][j]).epsilon(1e-10).scale(1.0));
            CHECK(state.phi[q][j] * state.phi[q][j] == Approx(o.phi2[q][j]).epsilon(1e-10).scale(1.0));
          }
      }
      double base = 0.0;
      try {
        base = logrank_test(rt, w).statistic;
      } catch (const DegenerateError&) {
        continue;
      }
      ++tested;
      CHECK(base >= 0.0);
      for (double c : {0.5, 2.0, 10.0}) {
        auto scaled = w;
        scaled.scale = c;
        CHECK(logrank_test(rt, scaled).statistic == Approx(base).epsilon(1e-9).scale(1.0));
      }
    }
  }
  CHECK(tested > 200);
}
