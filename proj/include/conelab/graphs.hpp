#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "conelab/errors.hpp"

namespace conelab {

// The three ordered-graph families. A member of size n lives on vertices
// {0..n-1}; which edge sets are admissible depends on the family.
enum class GraphFamily : uint8_t { Vector, Largeness, Packed };

inline const char* family_name(GraphFamily f) {
  switch (f) {
    case GraphFamily::Vector: return "vector";
    case GraphFamily::Largeness: return "largeness";
    case GraphFamily::Packed: return "packed";
  }
  return "?";
}

inline std::optional<GraphFamily> family_from_name(const std::string& s) {
  if (s == "vector") return GraphFamily::Vector;
  if (s == "largeness") return GraphFamily::Largeness;
  if (s == "packed") return GraphFamily::Packed;
  return std::nullopt;
}

// Edge sets are bitmasks over the unordered pairs {i,j}, i < j < n, indexed
// by lexicographic rank. 128 bits cover sizes up to 16.
using EdgeMask = unsigned __int128;

constexpr uint32_t kMaxGraphSize = 16;

// Lexicographic rank of the pair (i, j) among pairs over {0..n-1}.
inline uint32_t pair_rank(uint32_t i, uint32_t j, uint32_t n) {
  return i * (2 * n - i - 1) / 2 + (j - i - 1);
}

struct OrderedGraph {
  uint32_t size = 1;
  GraphFamily family = GraphFamily::Largeness;
  EdgeMask edges = 0;

  bool has_edge(uint32_t i, uint32_t j) const {
    if (i > j) std::swap(i, j);
    return (edges >> pair_rank(i, j, size)) & 1;
  }

  void set_edge(uint32_t i, uint32_t j) {
    if (i > j) std::swap(i, j);
    edges |= EdgeMask(1) << pair_rank(i, j, size);
  }

  // Edges in lexicographic order.
  std::vector<std::pair<uint32_t, uint32_t>> edge_list() const {
    std::vector<std::pair<uint32_t, uint32_t>> out;
    for (uint32_t i = 0; i + 1 < size; ++i)
      for (uint32_t j = i + 1; j < size; ++j)
        if (has_edge(i, j)) out.emplace_back(i, j);
    return out;
  }

  friend bool operator==(const OrderedGraph& a, const OrderedGraph& b) {
    return a.size == b.size && a.family == b.family && a.edges == b.edges;
  }
  friend bool operator<(const OrderedGraph& a, const OrderedGraph& b) {
    if (a.family != b.family) return a.family < b.family;
    if (a.size != b.size) return a.size < b.size;
    return a.edges < b.edges;
  }
};

inline OrderedGraph make_graph(GraphFamily family, uint32_t size,
                               std::initializer_list<std::pair<uint32_t, uint32_t>> edges) {
  OrderedGraph g{size, family, 0};
  for (auto [i, j] : edges) g.set_edge(i, j);
  return g;
}

// Canonical text form: family:size:[{i,j},{k,l},...] with edges sorted.
inline std::string to_text(const OrderedGraph& g) {
  std::string out = family_name(g.family);
  out += ':';
  out += std::to_string(g.size);
  out += ":[";
  bool first = true;
  for (auto [i, j] : g.edge_list()) {
    if (!first) out += ',';
    first = false;
    out += '{';
    out += std::to_string(i);
    out += ',';
    out += std::to_string(j);
    out += '}';
  }
  out += ']';
  return out;
}

inline OrderedGraph graph_from_text(const std::string& text) {
  auto c1 = text.find(':');
  auto c2 = text.find(':', c1 == std::string::npos ? c1 : c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos)
    throw malformed_input_error("graph text must look like family:size:[{i,j},...]: " + text);
  auto fam = family_from_name(text.substr(0, c1));
  if (!fam) throw malformed_input_error("unknown graph family in: " + text);
  uint32_t size = 0;
  try {
    size = static_cast<uint32_t>(std::stoul(text.substr(c1 + 1, c2 - c1 - 1)));
  } catch (const std::exception&) {
    throw malformed_input_error("bad graph size in: " + text);
  }
  if (size < 1 || size > kMaxGraphSize)
    throw malformed_input_error("graph size out of range in: " + text);
  OrderedGraph g{size, *fam, 0};
  std::string rest = text.substr(c2 + 1);
  if (rest.size() < 2 || rest.front() != '[' || rest.back() != ']')
    throw malformed_input_error("bad edge list in: " + text);
  rest = rest.substr(1, rest.size() - 2);
  size_t pos = 0;
  while (pos < rest.size()) {
    if (rest[pos] == ',' || rest[pos] == ' ') { ++pos; continue; }
    if (rest[pos] != '{') throw malformed_input_error("bad edge list in: " + text);
    auto close = rest.find('}', pos);
    if (close == std::string::npos) throw malformed_input_error("bad edge list in: " + text);
    std::string pair = rest.substr(pos + 1, close - pos - 1);
    auto comma = pair.find(',');
    if (comma == std::string::npos) throw malformed_input_error("bad edge in: " + text);
    uint32_t i, j;
    try {
      i = static_cast<uint32_t>(std::stoul(pair.substr(0, comma)));
      j = static_cast<uint32_t>(std::stoul(pair.substr(comma + 1)));
    } catch (const std::exception&) {
      throw malformed_input_error("bad edge in: " + text);
    }
    if (i >= j || j >= size)
      throw malformed_graph_error("edge out of range in: " + text);
    g.set_edge(i, j);
    pos = close + 1;
  }
  return g;
}

// n-th Catalan number, C_0 = 1, via the convolution recurrence.
inline uint64_t catalan(uint32_t n) {
  if (n > 36) throw malformed_input_error("catalan(" + std::to_string(n) + ") exceeds 64 bits");
  std::vector<uint64_t> c(n + 1, 0);
  c[0] = 1;
  for (uint32_t m = 1; m <= n; ++m) {
    uint64_t sum = 0;
    for (uint32_t i = 0; i < m; ++i) {
      uint64_t term;
      if (__builtin_mul_overflow(c[i], c[m - 1 - i], &term) ||
          __builtin_add_overflow(sum, term, &sum))
        throw malformed_input_error("catalan overflow");
    }
    c[m] = sum;
  }
  return c[n];
}

namespace detail {

inline void check_edge_range(const OrderedGraph& g) {
  if (g.size < 1 || g.size > kMaxGraphSize)
    throw malformed_graph_error("graph size out of range: " + std::to_string(g.size));
  uint32_t pairs = g.size * (g.size - 1) / 2;
  if (pairs < 128 && (g.edges >> pairs) != 0)
    throw malformed_graph_error("edge bits beyond pair range");
}

// Literal checks of the largeness-graph conditions (a)-(d).
inline bool largeness_conditions_hold(const OrderedGraph& g) {
  const uint32_t n = g.size;
  // (a) an adjacent edge {i,i+1} forbids every witness edge {i,j}, j > i+1.
  for (uint32_t i = 0; i + 1 < n; ++i)
    if (g.has_edge(i, i + 1))
      for (uint32_t j = i + 2; j < n; ++j)
        if (g.has_edge(i, j)) return false;
  // (b) a small interval before a large one is witnessed right after it.
  for (uint32_t i = 0; i + 1 < n; ++i)
    for (uint32_t j = i + 1; j + 1 < n; ++j)
      if (!g.has_edge(i, i + 1) && g.has_edge(j, j + 1) && !g.has_edge(i, j + 1))
        return false;
  // (c) witnesses persist at later stages.
  for (uint32_t i = 0; i + 1 < n; ++i)
    for (uint32_t j = i + 2; j + 1 < n; ++j)
      if (g.has_edge(i, j) && !g.has_edge(i, j + 1)) return false;
  // (d) a late witness for i also witnesses the interval before the gap.
  for (uint32_t i = 0; i + 2 < n; ++i)
    for (uint32_t j = i + 2; j < n; ++j)
      for (uint32_t k = j + 1; k < n; ++k)
        if (!g.has_edge(i, j) && g.has_edge(i, k) && !g.has_edge(j - 1, k))
          return false;
  return true;
}

}  // namespace detail

// True iff g satisfies its family's defining conditions. Out-of-range edges
// are an error, not a false.
inline bool validate(const OrderedGraph& g) {
  detail::check_edge_range(g);
  const uint32_t n = g.size;
  bool any_non_adjacent = false, any_adjacent = false;
  for (uint32_t i = 0; i + 1 < n; ++i) {
    if (g.has_edge(i, i + 1)) any_adjacent = true;
    for (uint32_t j = i + 2; j < n; ++j)
      if (g.has_edge(i, j)) any_non_adjacent = true;
  }
  switch (g.family) {
    case GraphFamily::Vector:
      return !any_non_adjacent;
    case GraphFamily::Largeness:
      return detail::largeness_conditions_hold(g);
    case GraphFamily::Packed:
      return !any_adjacent && detail::largeness_conditions_hold(g);
  }
  return false;
}

// Predicted member count of a family at a given size.
inline uint64_t family_count(GraphFamily family, uint32_t size) {
  if (size < 1) throw malformed_input_error("graph size must be >= 1");
  switch (family) {
    case GraphFamily::Vector: return uint64_t(1) << (size - 1);
    case GraphFamily::Largeness: return catalan(size);
    case GraphFamily::Packed: return catalan(size - 1);
  }
  return 0;
}

namespace detail {

// Largeness graphs of size n, generated structurally: choose the adjacent
// (large-interval) set A, then for every small p the first witness column
// q_p, subject to
//   - q_p <= (first large index after p) + 1, and finite when one exists,
//   - q_r <= q_p for every small r in [p+1, q_p-2].
// Witness columns are up-sets, so edges are {p,q} for q in [q_p, n-1].
// With A forced empty this yields exactly the packed graphs.
inline std::vector<OrderedGraph> generate_catalan_family(GraphFamily family, uint32_t n) {
  std::vector<OrderedGraph> out;
  const uint32_t INF = n + 1;  // stands for "no witness in window"
  std::vector<uint32_t> q(n, INF);
  std::vector<bool> large(n, false);

  auto emit = [&]() {
    OrderedGraph g{n, family, 0};
    for (uint32_t p = 0; p + 1 < n; ++p) {
      if (large[p]) g.set_edge(p, p + 1);
      else if (q[p] <= n - 1)
        for (uint32_t col = q[p]; col < n; ++col) g.set_edge(p, col);
    }
    out.push_back(g);
  };

  // Choose q_p right to left so the (d) bound on smaller indices can be
  // checked against already-fixed later columns.
  auto choose = [&](auto&& self, uint32_t p) -> void {
    if (p == UINT32_MAX) { emit(); return; }
    if (p + 1 >= n || large[p]) { self(self, p == 0 ? UINT32_MAX : p - 1); return; }
    uint32_t first_large_after = INF;
    for (uint32_t j = p + 1; j + 1 < n; ++j)
      if (large[j]) { first_large_after = j; break; }
    uint32_t hi = (first_large_after == INF) ? n - 1
                                             : std::min(n - 1, first_large_after + 1);
    auto ok = [&](uint32_t qp) {
      for (uint32_t r = p + 1; r + 2 <= qp; ++r)
        if (!large[r] && r + 1 < n && q[r] > qp) return false;
      return true;
    };
    for (uint32_t qp = p + 2; qp <= hi; ++qp) {
      if (!ok(qp)) continue;
      q[p] = qp;
      self(self, p == 0 ? UINT32_MAX : p - 1);
    }
    if (first_large_after == INF) {
      q[p] = INF;  // no witness: all columns empty, vacuously fine
      self(self, p == 0 ? UINT32_MAX : p - 1);
    }
    q[p] = INF;
  };

  if (family == GraphFamily::Packed) {
    choose(choose, n - 1);
  } else {
    uint32_t adj = n - 1;
    for (uint32_t mask = 0; mask < (uint32_t(1) << adj); ++mask) {
      for (uint32_t p = 0; p < adj; ++p) large[p] = (mask >> p) & 1;
      choose(choose, n - 1);
    }
    std::fill(large.begin(), large.end(), false);
  }
  return out;
}

}  // namespace detail

// All family members of the given size, in canonical (edge-bitmask) order.
inline std::vector<OrderedGraph> enumerate(GraphFamily family, uint32_t size,
                                           uint64_t cap = 1'000'000) {
  if (size < 1 || size > kMaxGraphSize)
    throw malformed_input_error("enumerate: size out of range: " + std::to_string(size));
  uint64_t predicted = family_count(family, size);
  if (predicted > cap)
    throw infeasible_size_error("enumerate(" + std::string(family_name(family)) + ", " +
                                    std::to_string(size) + ") would produce " +
                                    std::to_string(predicted) + " graphs (cap " +
                                    std::to_string(cap) + ")",
                                static_cast<double>(predicted));
  std::vector<OrderedGraph> out;
  if (family == GraphFamily::Vector) {
    out.reserve(predicted);
    for (uint64_t mask = 0; mask < (uint64_t(1) << (size - 1)); ++mask) {
      OrderedGraph g{size, family, 0};
      for (uint32_t i = 0; i + 1 < size; ++i)
        if ((mask >> i) & 1) g.set_edge(i, i + 1);
      out.push_back(g);
    }
  } else {
    out = detail::generate_catalan_family(family, size);
  }
  std::sort(out.begin(), out.end(),
            [](const OrderedGraph& a, const OrderedGraph& b) { return a.edges < b.edges; });
  return out;
}

// Index of g within enumerate(g.family, g.size); npos if absent.
inline std::size_t canonical_index(const OrderedGraph& g,
                                   const std::vector<OrderedGraph>& canon) {
  auto it = std::lower_bound(
      canon.begin(), canon.end(), g,
      [](const OrderedGraph& a, const OrderedGraph& b) { return a.edges < b.edges; });
  if (it == canon.end() || !(*it == g)) return static_cast<std::size_t>(-1);
  return static_cast<std::size_t>(it - canon.begin());
}

// The sub-configuration graph a realizing modulus would assign to the
// selected positions. Vector/Largeness read adjacent largeness through
// mu-transitivity; Largeness/Packed read witness edges through strong
// mu-transitivity plus stage monotonicity.
inline OrderedGraph induced(GraphFamily family, const OrderedGraph& g,
                            const std::vector<uint32_t>& positions, uint32_t m) {
  if (g.family != family) throw malformed_input_error("induced: family mismatch");
  if (positions.size() != m || m < 1)
    throw malformed_input_error("induced: |positions| must equal m >= 1");
  for (size_t t = 0; t < positions.size(); ++t) {
    if (positions[t] >= g.size)
      throw malformed_input_error("induced: position out of range");
    if (t > 0 && positions[t - 1] >= positions[t])
      throw malformed_input_error("induced: positions must be strictly increasing");
  }
  OrderedGraph out{m, family, 0};
  if (family != GraphFamily::Packed) {
    for (uint32_t p = 0; p + 1 < m; ++p) {
      bool large = false;
      for (uint32_t c = positions[p]; c < positions[p + 1]; ++c)
        if (g.has_edge(c, c + 1)) { large = true; break; }
      if (large) out.set_edge(p, p + 1);
    }
  }
  if (family != GraphFamily::Vector) {
    for (uint32_t p = 0; p + 2 < m; ++p) {
      for (uint32_t qq = p + 2; qq < m; ++qq) {
        bool witnessed = true;
        for (uint32_t c = positions[p]; c < positions[p + 1]; ++c)
          if (!g.has_edge(c, positions[qq])) { witnessed = false; break; }
        if (witnessed) out.set_edge(p, qq);
      }
    }
  }
  if (!validate(out))
    throw malformed_graph_error("induced: result fails family validation (invalid ambient?)");
  return out;
}

// The paper's explicit map P_{n+1} -> L_n: keep witness edges below the top
// vertex, and make an interval large exactly when the top vertex fails to
// witness it.
inline OrderedGraph packed_reduce(const OrderedGraph& g) {
  if (g.family != GraphFamily::Packed)
    throw malformed_input_error("packed_reduce expects a packed graph");
  if (g.size < 2) throw malformed_input_error("packed_reduce: size must be >= 2");
  if (!validate(g)) throw malformed_graph_error("packed_reduce: invalid packed graph");
  const uint32_t n = g.size - 1;
  OrderedGraph out{n, GraphFamily::Largeness, 0};
  for (uint32_t i = 0; i + 1 < n; ++i)
    for (uint32_t j = i + 2; j < n; ++j)
      if (g.has_edge(i, j)) out.set_edge(i, j);
  for (uint32_t i = 0; i + 1 < n; ++i)
    if (!g.has_edge(i, n)) out.set_edge(i, i + 1);
  if (!validate(out))
    throw malformed_graph_error("packed_reduce: result fails largeness validation");
  return out;
}

}  // namespace conelab
