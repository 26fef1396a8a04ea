#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <vector>

#include "conelab/graphs.hpp"

using namespace conelab;

namespace {

// Independent oracle: filter every edge bitmask through validate.
std::vector<OrderedGraph> brute_force_enumerate(GraphFamily family, uint32_t n) {
  std::vector<OrderedGraph> out;
  uint32_t pairs = n * (n - 1) / 2;
  for (uint64_t mask = 0; mask < (uint64_t(1) << pairs); ++mask) {
    OrderedGraph g{n, family, EdgeMask(mask)};
    if (validate(g)) out.push_back(g);
  }
  return out;
}

}  // namespace

TEST_CASE("catalan matches the tabulated sequence") {
  CHECK(catalan(0) == 1);
  CHECK(catalan(1) == 1);
  CHECK(catalan(2) == 2);
  CHECK(catalan(3) == 5);
  CHECK(catalan(4) == 14);
  CHECK(catalan(5) == 42);
  CHECK(catalan(6) == 132);
  CHECK(catalan(7) == 429);
}

TEST_CASE("validate: named cases") {
  CHECK_FALSE(validate(make_graph(GraphFamily::Largeness, 3, {{1, 2}})));
  CHECK(validate(make_graph(GraphFamily::Largeness, 3, {{1, 2}, {0, 2}})));
  CHECK(validate(make_graph(GraphFamily::Packed, 3, {{0, 2}})));
  CHECK_FALSE(validate(make_graph(GraphFamily::Packed, 3, {{0, 1}})));
  CHECK_FALSE(validate(make_graph(GraphFamily::Vector, 3, {{0, 2}})));
  CHECK(validate(make_graph(GraphFamily::Vector, 3, {{0, 1}, {1, 2}})));

  OrderedGraph bad{2, GraphFamily::Vector, 0};
  bad.edges = EdgeMask(1) << 5;
  CHECK_THROWS_AS(validate(bad), malformed_graph_error);
}

TEST_CASE("enumerate agrees with the brute-force filter oracle") {
  for (uint32_t n = 1; n <= 6; ++n) {
    for (auto family : {GraphFamily::Vector, GraphFamily::Largeness, GraphFamily::Packed}) {
      auto fast = enumerate(family, n);
      auto slow = brute_force_enumerate(family, n);
      REQUIRE(fast.size() == slow.size());
      CHECK(fast == slow);  // same canonical (bitmask) order
    }
  }
}

TEST_CASE("enumerate counts match the closed forms") {
  for (uint32_t n = 1; n <= 8; ++n)
    CHECK(enumerate(GraphFamily::Vector, n).size() == (uint64_t(1) << (n - 1)));
  for (uint32_t n = 1; n <= 6; ++n)
    CHECK(enumerate(GraphFamily::Largeness, n).size() == catalan(n));
  for (uint32_t n = 2; n <= 7; ++n)
    CHECK(enumerate(GraphFamily::Packed, n).size() == catalan(n - 1));
}

TEST_CASE("enumerate: named listings") {
  auto l3 = enumerate(GraphFamily::Largeness, 3);
  std::set<OrderedGraph> expected_l3 = {
      make_graph(GraphFamily::Largeness, 3, {}),
      make_graph(GraphFamily::Largeness, 3, {{0, 1}}),
      make_graph(GraphFamily::Largeness, 3, {{0, 2}}),
      make_graph(GraphFamily::Largeness, 3, {{0, 1}, {1, 2}}),
      make_graph(GraphFamily::Largeness, 3, {{1, 2}, {0, 2}}),
  };
  CHECK(std::set<OrderedGraph>(l3.begin(), l3.end()) == expected_l3);

  auto p4 = enumerate(GraphFamily::Packed, 4);
  std::set<OrderedGraph> expected_p4 = {
      make_graph(GraphFamily::Packed, 4, {}),
      make_graph(GraphFamily::Packed, 4, {{1, 3}}),
      make_graph(GraphFamily::Packed, 4, {{0, 2}, {0, 3}}),
      make_graph(GraphFamily::Packed, 4, {{0, 3}, {1, 3}}),
      make_graph(GraphFamily::Packed, 4, {{0, 2}, {0, 3}, {1, 3}}),
  };
  CHECK(std::set<OrderedGraph>(p4.begin(), p4.end()) == expected_p4);

  CHECK_THROWS_AS(enumerate(GraphFamily::Largeness, 6, 100), infeasible_size_error);
}

TEST_CASE("induced: named cases") {
  auto g1 = make_graph(GraphFamily::Largeness, 4, {{0, 1}});
  CHECK(induced(GraphFamily::Largeness, g1, {0, 2}, 2) ==
        make_graph(GraphFamily::Largeness, 2, {{0, 1}}));

  auto g2 = make_graph(GraphFamily::Largeness, 4, {{0, 2}, {0, 3}, {1, 3}});
  CHECK(induced(GraphFamily::Largeness, g2, {0, 1, 3}, 3) ==
        make_graph(GraphFamily::Largeness, 3, {{0, 2}}));

  for (const auto& g : enumerate(GraphFamily::Vector, 5)) {
    CHECK(induced(GraphFamily::Vector, g, {0, 1, 2, 3, 4}, 5) == g);
  }

  CHECK_THROWS_AS(induced(GraphFamily::Largeness, g1, {2, 0}, 2), malformed_input_error);
  CHECK_THROWS_AS(induced(GraphFamily::Largeness, g1, {0, 7}, 2), malformed_input_error);
}

TEST_CASE("induced closure: every selection of a valid graph validates") {
  for (auto family : {GraphFamily::Vector, GraphFamily::Largeness, GraphFamily::Packed}) {
    for (uint32_t n = 1; n <= 6; ++n) {
      for (const auto& g : enumerate(family, n)) {
        for (uint64_t mask = 1; mask < (uint64_t(1) << n); ++mask) {
          std::vector<uint32_t> positions;
          for (uint32_t i = 0; i < n; ++i)
            if ((mask >> i) & 1) positions.push_back(i);
          // induced() validates its result internally and throws on failure.
          auto sub = induced(family, g, positions, uint32_t(positions.size()));
          // Property (a) carry-over: no selection carries both an adjacent
          // edge and a witness edge from the same left endpoint.
          for (uint32_t p = 0; p + 1 < sub.size; ++p)
            if (sub.has_edge(p, p + 1))
              for (uint32_t q = p + 2; q < sub.size; ++q) CHECK_FALSE(sub.has_edge(p, q));
        }
      }
    }
  }
}

TEST_CASE("packed_reduce: named cases and bijectivity") {
  CHECK(packed_reduce(make_graph(GraphFamily::Packed, 3, {})) ==
        make_graph(GraphFamily::Largeness, 2, {{0, 1}}));
  CHECK(packed_reduce(make_graph(GraphFamily::Packed, 3, {{0, 2}})) ==
        make_graph(GraphFamily::Largeness, 2, {}));

  for (uint32_t n = 1; n <= 5; ++n) {
    auto packed = enumerate(GraphFamily::Packed, n + 1);
    auto largeness = enumerate(GraphFamily::Largeness, n);
    std::set<OrderedGraph> images;
    for (const auto& g : packed) {
      auto img = packed_reduce(g);
      CHECK(validate(img));
      images.insert(img);
    }
    CHECK(images.size() == packed.size());  // injective
    CHECK(images == std::set<OrderedGraph>(largeness.begin(), largeness.end()));  // onto
  }
}

TEST_CASE("graph text form round-trips") {
  CHECK(to_text(make_graph(GraphFamily::Largeness, 4, {{0, 1}, {1, 3}})) ==
        "largeness:4:[{0,1},{1,3}]");
  for (auto family : {GraphFamily::Vector, GraphFamily::Largeness, GraphFamily::Packed})
    for (uint32_t n : {1u, 3u, 5u})
      for (const auto& g : enumerate(family, n)) {
        auto back = graph_from_text(to_text(g));
        CHECK(back == g);
      }
  CHECK_THROWS_AS(graph_from_text("largeness:3:[{2,1}]"), malformed_graph_error);
  CHECK_THROWS_AS(graph_from_text("nonsense"), malformed_input_error);
}
