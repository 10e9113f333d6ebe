#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "oracle/direct_formulas.hpp"
#include "survtest/survival_data.hpp"
#include "survtest/weights.hpp"

namespace fixtures {

using survtest::Observation;

// A: (1,e) (2,e) (3,c) (3,e); B: (1,c) (2,e) (2,e) (4,e)
inline std::vector<Observation> d1() {
  return {{1, true, 0}, {2, true, 0}, {3, false, 0}, {3, true, 0},
          {1, false, 1}, {2, true, 1}, {2, true, 1}, {4, true, 1}};
}

inline std::vector<oracle::Record> to_records(const std::vector<Observation>& obs) {
  std::vector<oracle::Record> out;
  for (const auto& o : obs) out.push_back({o.time, o.event, o.group});
  return out;
}

inline oracle::Weight to_oracle(const survtest::WeightSpec& w) {
  oracle::Weight o;
  o.c = w.scale;
  switch (w.kind) {
    case survtest::WeightSpec::Kind::Unit: o.kind = oracle::Weight::Kind::Unit; break;
    case survtest::WeightSpec::Kind::TaroneWare:
      o.kind = oracle::Weight::Kind::TaroneWare;
      o.gamma = w.gamma;
      break;
    case survtest::WeightSpec::Kind::FlemingHarrington:
      o.kind = oracle::Weight::Kind::FlemingHarrington;
      o.beta = w.beta;
      o.delta = w.delta;
      break;
  }
  return o;
}

// Every group gets between min_n and max_n records with categories in 1..max_cat.
inline std::vector<Observation> random_dataset(std::mt19937_64& gen, int groups, int min_n, int max_n, int max_cat,
                                               double censor_prob) {
  std::uniform_int_distribution<int> size(min_n, max_n);
  std::uniform_int_distribution<int> cat(1, max_cat);
  std::bernoulli_distribution censored(censor_prob);
  std::vector<Observation> out;
  for (int g = 0; g < groups; ++g) {
    const int n = size(gen);
    for (int i = 0; i < n; ++i) out.push_back({cat(gen), !censored(gen), g});
  }
  return out;
}

inline std::vector<survtest::WeightSpec> weight_family() {
  return {survtest::WeightSpec::unit(), survtest::WeightSpec::tarone_ware(0.5), survtest::WeightSpec::tarone_ware(1.0),
          survtest::WeightSpec::fleming_harrington(0.0, 1.0), survtest::WeightSpec::fleming_harrington(1.0, 0.0),
          survtest::WeightSpec::fleming_harrington(0.5, 2.0)};
}

}  // namespace fixtures
