#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "conelab/graphs.hpp"
#include "conelab/modulus.hpp"
#include "test_support.hpp"

using namespace conelab;

// Cross-module oracle: the symbolic induced-subgraph formulas must agree
// with the modulus-computed graph on the selected points, for every
// selection. This backs the decision engine's use of span-sized ambient
// enumeration.
TEST_CASE("induced equals the modulus-computed graph on every selection") {
  std::mt19937 rng(987654321);
  int instances = 0;
  while (instances < 520) {
    uint32_t horizon = 8 + uint32_t(rng() % 18);
    auto mu = testsupport::random_strongly_increasing(rng, horizon);
    auto X = testsupport::random_strongly_transitive_set(rng, mu, 8);
    if (X.size() < 2) continue;
    ++instances;
    for (auto family : {GraphFamily::Vector, GraphFamily::Largeness, GraphFamily::Packed}) {
      auto ambient = graph_of(family, mu, X);
      REQUIRE(validate(ambient));
      for (uint64_t mask = 1; mask < (uint64_t(1) << X.size()); ++mask) {
        std::vector<uint32_t> positions, sub;
        for (uint32_t i = 0; i < X.size(); ++i)
          if ((mask >> i) & 1) {
            positions.push_back(i);
            sub.push_back(X[i]);
          }
        auto symbolic = induced(family, ambient, positions, uint32_t(positions.size()));
        auto concrete = graph_of(family, mu, sub);
        REQUIRE(symbolic == concrete);
      }
    }
  }
  CHECK(instances >= 500);
}
