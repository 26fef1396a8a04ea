#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "conelab/errors.hpp"
#include "conelab/graphs.hpp"
#include "conelab/patterns.hpp"

namespace conelab {

// A natural number or the top element OMEGA (the successor ordinal's limit
// point): OMEGA strictly exceeds every natural.
struct ExtendedNat {
  uint64_t v = 0;
  bool omega = false;

  static ExtendedNat make_omega() { return {0, true}; }
  static ExtendedNat of(uint64_t x) { return {x, false}; }

  bool is_omega() const { return omega; }
  uint64_t value() const {
    if (omega) throw malformed_input_error("ExtendedNat: OMEGA has no finite value");
    return v;
  }

  friend bool operator==(const ExtendedNat& a, const ExtendedNat& b) {
    return a.omega == b.omega && (a.omega || a.v == b.v);
  }
  friend bool operator<(const ExtendedNat& a, const ExtendedNat& b) {
    if (a.omega) return false;
    if (b.omega) return true;
    return a.v < b.v;
  }
  friend bool operator<=(const ExtendedNat& a, const ExtendedNat& b) { return a < b || a == b; }
  friend bool operator>(const ExtendedNat& a, const ExtendedNat& b) { return b < a; }
  friend bool operator>=(const ExtendedNat& a, const ExtendedNat& b) { return b <= a; }

  // Mixed comparisons against plain naturals.
  friend bool operator<=(const ExtendedNat& a, uint64_t b) { return !a.omega && a.v <= b; }
  friend bool operator>(const ExtendedNat& a, uint64_t b) { return a.omega || a.v > b; }
};

inline std::string to_string(const ExtendedNat& x) {
  return x.is_omega() ? "w" : std::to_string(x.v);
}

// Finite table of left-c.e.-shaped approximations: stages mu_s(x) for
// 0 <= s,x < horizon, plus a declared limit per argument. Stage values are
// always finite; a limit of OMEGA declares "never large".
struct StagedFunction {
  uint32_t horizon = 1;
  std::vector<std::vector<uint64_t>> stages;  // stages[s][x]
  std::vector<ExtendedNat> limit;

  uint64_t stage_at(uint32_t s, uint32_t x) const { return stages[s][x]; }
  ExtendedNat limit_at(uint32_t x) const { return limit[x]; }

  // The horizon certifies finite limits; OMEGA limits are declarations that
  // no finite table could certify, so they count as settled data.
  bool settled(uint32_t x) const {
    if (limit[x].is_omega()) return true;
    return stages[horizon - 1][x] == limit[x].value();
  }
};

// Structural invariants: table shape, stage monotonicity in s, limit bound.
inline void check_staged(const StagedFunction& mu) {
  const uint32_t N = mu.horizon;
  if (N < 1) throw malformed_input_error("staged function: horizon must be >= 1");
  if (mu.stages.size() != N || mu.limit.size() != N)
    throw malformed_input_error("staged function: table shape does not match horizon");
  for (uint32_t s = 0; s < N; ++s)
    if (mu.stages[s].size() != N)
      throw malformed_input_error("staged function: stage row size mismatch");
  for (uint32_t x = 0; x < N; ++x) {
    for (uint32_t s = 0; s + 1 < N; ++s)
      if (mu.stages[s][x] > mu.stages[s + 1][x])
        throw malformed_input_error("staged function: stage values must be non-decreasing in s");
    for (uint32_t s = 0; s < N; ++s)
      if (!(ExtendedNat::of(mu.stages[s][x]) <= mu.limit[x]))
        throw malformed_input_error("staged function: stage value exceeds declared limit");
  }
}

// A limit-only modulus on an explicit point set (what the arity-2
// conversion produces; no stage table).
struct LimitFunction {
  std::vector<uint32_t> points;   // sorted
  std::vector<ExtendedNat> vals;  // aligned with points

  ExtendedNat at(uint32_t x) const {
    auto it = std::lower_bound(points.begin(), points.end(), x);
    if (it == points.end() || *it != x)
      throw malformed_input_error("limit function: no value at " + std::to_string(x));
    return vals[static_cast<size_t>(it - points.begin())];
  }
};

// --- staged-function text format -------------------------------------------
// header `horizon=N`, one line per stage `s: v0 v1 ...`, final `limit: ...`,
// with `w` for OMEGA.

inline std::string to_text(const StagedFunction& mu) {
  std::ostringstream out;
  out << "horizon=" << mu.horizon << "\n";
  for (uint32_t s = 0; s < mu.horizon; ++s) {
    out << s << ":";
    for (uint32_t x = 0; x < mu.horizon; ++x) out << ' ' << mu.stages[s][x];
    out << "\n";
  }
  out << "limit:";
  for (uint32_t x = 0; x < mu.horizon; ++x) out << ' ' << to_string(mu.limit[x]);
  out << "\n";
  return out.str();
}

inline StagedFunction staged_from_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  StagedFunction mu;
  if (!std::getline(in, line) || line.rfind("horizon=", 0) != 0)
    throw malformed_input_error("staged text: expected 'horizon=N' header");
  mu.horizon = static_cast<uint32_t>(std::stoul(line.substr(8)));
  if (mu.horizon < 1 || mu.horizon > 4096)
    throw malformed_input_error("staged text: horizon out of range");
  mu.stages.assign(mu.horizon, std::vector<uint64_t>(mu.horizon, 0));
  mu.limit.assign(mu.horizon, ExtendedNat::of(0));
  for (uint32_t s = 0; s < mu.horizon; ++s) {
    if (!std::getline(in, line))
      throw malformed_input_error("staged text: missing stage row " + std::to_string(s));
    auto colon = line.find(':');
    if (colon == std::string::npos ||
        std::stoul(line.substr(0, colon)) != s)
      throw malformed_input_error("staged text: bad stage row " + std::to_string(s));
    std::istringstream row(line.substr(colon + 1));
    for (uint32_t x = 0; x < mu.horizon; ++x)
      if (!(row >> mu.stages[s][x]))
        throw malformed_input_error("staged text: short stage row " + std::to_string(s));
  }
  if (!std::getline(in, line) || line.rfind("limit:", 0) != 0)
    throw malformed_input_error("staged text: missing limit row");
  std::istringstream row(line.substr(6));
  for (uint32_t x = 0; x < mu.horizon; ++x) {
    std::string tok;
    if (!(row >> tok)) throw malformed_input_error("staged text: short limit row");
    mu.limit[x] = (tok == "w") ? ExtendedNat::make_omega() : ExtendedNat::of(std::stoull(tok));
  }
  check_staged(mu);
  return mu;
}

// --- structural predicates --------------------------------------------------

// Each stage non-decreasing in the argument, and any stage-to-stage jump at
// x forces every later argument's next-stage value above the stage index.
inline bool is_strongly_increasing(const StagedFunction& mu) {
  check_staged(mu);
  const uint32_t N = mu.horizon;
  for (uint32_t s = 0; s < N; ++s)
    for (uint32_t x = 0; x + 1 < N; ++x)
      if (mu.stages[s][x] > mu.stages[s][x + 1]) return false;
  for (uint32_t s = 0; s + 1 < N; ++s)
    for (uint32_t x = 0; x < N; ++x)
      if (mu.stages[s + 1][x] > mu.stages[s][x])
        for (uint32_t y = x + 1; y < N; ++y)
          if (!(mu.stages[s + 1][y] > s)) return false;
  return true;
}

namespace detail {

inline void check_points_sorted(const std::vector<uint32_t>& D, uint32_t horizon,
                                const char* who) {
  for (size_t t = 0; t < D.size(); ++t) {
    if (D[t] >= horizon)
      throw malformed_input_error(std::string(who) + ": point beyond horizon");
    if (t > 0 && D[t - 1] >= D[t])
      throw malformed_input_error(std::string(who) + ": points must be strictly increasing");
  }
}

inline void require_settled(const StagedFunction& mu, uint32_t x, const char* who) {
  if (!mu.settled(x))
    throw malformed_input_error(std::string(who) + ": limit of argument " +
                                std::to_string(x) + " is not settled within the horizon");
}

}  // namespace detail

// [x,y] is mu-large when mu(x) <= y; smallness composes on mu-transitive
// sets, so the biconditional below is the definition verbatim.
inline bool is_mu_transitive_limits(
    const std::vector<uint32_t>& H,
    const std::function<ExtendedNat(uint32_t)>& limit_of) {
  for (size_t a = 0; a < H.size(); ++a)
    for (size_t b = a + 1; b < H.size(); ++b)
      for (size_t c = b + 1; c < H.size(); ++c) {
        bool premise = limit_of(H[a]) > H[b] && limit_of(H[b]) > H[c];
        bool concl = limit_of(H[a]) > H[c];
        if (premise != concl) return false;
      }
  return true;
}

inline bool is_mu_transitive(const StagedFunction& mu, const std::vector<uint32_t>& H) {
  check_staged(mu);
  detail::check_points_sorted(H, mu.horizon, "is_mu_transitive");
  for (size_t t = 0; t + 1 < H.size(); ++t)
    detail::require_settled(mu, H[t], "is_mu_transitive");
  return is_mu_transitive_limits(H, [&](uint32_t x) { return mu.limit_at(x); });
}

inline bool is_mu_transitive(const LimitFunction& mu, const std::vector<uint32_t>& H) {
  return is_mu_transitive_limits(H, [&](uint32_t x) { return mu.at(x); });
}

// Plain mu-transitivity plus: a stage that witnesses two abutting small
// intervals witnesses their composition.
inline bool is_strongly_mu_transitive(const StagedFunction& mu,
                                      const std::vector<uint32_t>& H) {
  if (!is_mu_transitive(mu, H)) return false;
  for (size_t a = 0; a < H.size(); ++a)
    for (size_t b = a + 1; b < H.size(); ++b)
      for (size_t c = b + 1; c < H.size(); ++c)
        for (size_t d = c + 1; d < H.size(); ++d) {
          uint64_t stage = H[d];
          if (mu.stages[stage][H[a]] > H[b] && mu.stages[stage][H[b]] > H[c] &&
              !(mu.stages[stage][H[a]] > H[c]))
            return false;
        }
  return true;
}

// --- graph extractors ---------------------------------------------------------

// Vector: adjacent edge {i,i+1} iff [x_i, x_{i+1}] is mu-large (limit read).
// Largeness: those plus witness edges {p,q} iff mu at stage x_q already
// exceeds x_{p+1}. Packed: the witness edges only (no limit reads).
inline OrderedGraph graph_of(GraphFamily family, const StagedFunction& mu,
                             const std::vector<uint32_t>& D) {
  check_staged(mu);
  detail::check_points_sorted(D, mu.horizon, "graph_of");
  if (D.empty()) throw malformed_input_error("graph_of: empty point sequence");
  const uint32_t n = static_cast<uint32_t>(D.size());
  OrderedGraph g{n, family, 0};
  if (family != GraphFamily::Packed) {
    for (uint32_t i = 0; i + 1 < n; ++i) {
      detail::require_settled(mu, D[i], "graph_of");
      if (mu.limit_at(D[i]) <= uint64_t(D[i + 1])) g.set_edge(i, i + 1);
    }
  }
  if (family != GraphFamily::Vector) {
    for (uint32_t p = 0; p + 2 < n; ++p)
      for (uint32_t q = p + 2; q < n; ++q)
        if (mu.stages[D[q]][D[p]] > D[p + 1]) g.set_edge(p, q);
  }
  return g;
}

inline OrderedGraph vector_graph_of(const LimitFunction& mu, const std::vector<uint32_t>& D) {
  if (D.empty()) throw malformed_input_error("vector_graph_of: empty point sequence");
  const uint32_t n = static_cast<uint32_t>(D.size());
  OrderedGraph g{n, GraphFamily::Vector, 0};
  for (uint32_t i = 0; i + 1 < n; ++i)
    if (mu.at(D[i]) <= uint64_t(D[i + 1])) g.set_edge(i, i + 1);
  return g;
}

// --- the domination construction -------------------------------------------

// Dominates mu by a strongly increasing staged function: g_s(x) is the max
// of the previous argument's value, the previous stage's value, a moving
// threshold, and mu_s(x); a jump at (s, x) raises the stage-s threshold of
// every later argument to s.
inline StagedFunction strongly_increasing_transform(const StagedFunction& mu) {
  check_staged(mu);
  const uint32_t N = mu.horizon;
  for (uint32_t x = 0; x < N; ++x) {
    if (mu.limit[x].is_omega())
      throw unsupported_input_error(
          "strongly_increasing_transform: OMEGA limit at argument " + std::to_string(x));
    if (!mu.settled(x))
      throw unsupported_input_error(
          "strongly_increasing_transform: unsettled limit at argument " + std::to_string(x));
  }
  StagedFunction g;
  g.horizon = N;
  g.stages.assign(N, std::vector<uint64_t>(N, 0));
  std::vector<std::vector<uint64_t>> t(N, std::vector<uint64_t>(N, 0));
  for (uint32_t x = 0; x < N; ++x) {
    for (uint32_t s = 0; s < N; ++s) {
      uint64_t v = mu.stages[s][x];
      if (x > 0) v = std::max(v, g.stages[s][x - 1]);
      if (s > 0) v = std::max(v, g.stages[s - 1][x]);
      v = std::max(v, t[s][x]);
      g.stages[s][x] = v;
      if (s > 0 && g.stages[s][x] > g.stages[s - 1][x])
        for (uint32_t y = x + 1; y < N; ++y) t[s][y] = std::max(t[s][y], uint64_t(s));
    }
  }
  g.limit.resize(N);
  for (uint32_t x = 0; x < N; ++x) g.limit[x] = ExtendedNat::of(g.stages[N - 1][x]);
  return g;
}

// --- thinning ----------------------------------------------------------------

// Greedy subsequence of a mu-transitive X whose stages close all previously
// selected smallness triples; the result is strongly mu-transitive.
inline std::vector<uint32_t> thin_to_strongly_transitive(const StagedFunction& mu,
                                                         const std::vector<uint32_t>& X) {
  check_staged(mu);
  detail::check_points_sorted(X, mu.horizon, "thin_to_strongly_transitive");
  if (!is_strongly_increasing(mu))
    throw malformed_input_error("thin_to_strongly_transitive: mu must be strongly increasing");
  if (!is_mu_transitive(mu, X))
    throw malformed_input_error("thin_to_strongly_transitive: X must be mu-transitive");
  std::vector<uint32_t> picked;
  size_t next = 0;
  while (next < X.size()) {
    bool found = false;
    for (size_t cand = next; cand < X.size(); ++cand) {
      uint32_t y = X[cand];
      bool ok = true;
      for (size_t a = 0; a < picked.size() && ok; ++a)
        for (size_t b = a + 1; b < picked.size() && ok; ++b)
          for (size_t c = b + 1; c < picked.size() && ok; ++c)
            if (mu.stages[y][picked[a]] > picked[b] && mu.stages[y][picked[b]] > picked[c] &&
                !(mu.stages[y][picked[a]] > picked[c]))
              ok = false;
      if (ok) {
        picked.push_back(y);
        next = cand + 1;
        found = true;
        break;
      }
    }
    if (!found)
      throw horizon_exhausted_error(
          "thin_to_strongly_transitive: no remaining element of X closes all "
          "selected triples",
          picked);
  }
  return picked;
}

// --- graph realization --------------------------------------------------------

struct Realization {
  StagedFunction mu;
  std::vector<uint32_t> points;
};

namespace detail {

// Canonical realization of a valid largeness graph on contiguous points
// 0..n-1 with horizon n+1. Limits follow the first large interval at or
// after each point (W+x beyond the window when none). A small point's value
// passes its adjacent interval exactly at its first witness column and then
// covers the whole contiguous witnessed run (strong transitivity closes
// runs); a cascade keeps every later argument at or above any jump stage.
// Conditions (b) and (d) make all of this consistent with the required
// witness times.
inline StagedFunction realize_largeness_table(const OrderedGraph& G) {
  const uint32_t n = G.size;
  const uint32_t N = n + 1;
  const uint64_t W = uint64_t(n) + 1;
  const uint32_t INF = N + 1;

  std::vector<bool> large(n, false);
  for (uint32_t p = 0; p + 1 < n; ++p) large[p] = G.has_edge(p, p + 1);

  auto first_large_at_or_after = [&](uint32_t p) -> uint32_t {
    for (uint32_t c = p; c + 1 < n; ++c)
      if (large[c]) return c;
    return INF;
  };

  std::vector<uint64_t> lim(N);
  for (uint32_t x = 0; x < N; ++x) {
    if (x < n) {
      uint32_t l = first_large_at_or_after(x);
      lim[x] = (l == INF) ? W + x : uint64_t(l) + 1;
    } else {
      lim[x] = W + x;
    }
  }

  std::vector<uint32_t> wit_stage(N, INF);  // first witness column q_p
  for (uint32_t p = 0; p + 2 < n; ++p) {
    if (large[p]) continue;
    for (uint32_t q = p + 2; q < n; ++q)
      if (G.has_edge(p, q)) { wit_stage[p] = q; break; }
  }

  StagedFunction mu;
  mu.horizon = N;
  mu.stages.assign(N, std::vector<uint64_t>(N, 0));
  mu.limit.resize(N);
  for (uint32_t x = 0; x < N; ++x) mu.limit[x] = ExtendedNat::of(lim[x]);

  for (uint32_t s = 0; s + 1 < N; ++s) {
    std::vector<bool> witnessed(n, false);
    for (uint32_t x = 0; x < n; ++x)
      witnessed[x] = wit_stage[x] != INF && s >= wit_stage[x];
    // First non-witnessed index at or after each witnessed point.
    std::vector<uint32_t> run_end(n, 0);
    for (uint32_t x = n; x-- > 0;) {
      if (!witnessed[x]) run_end[x] = x;
      else run_end[x] = (x + 1 < n && witnessed[x + 1]) ? run_end[x + 1] : x + 1;
    }
    uint64_t cascade = 0;
    for (uint32_t x = 0; x < N; ++x) {
      uint64_t v = uint64_t(x) + 1;
      if (x < n && witnessed[x]) v = std::max(v, uint64_t(run_end[x]) + 1);
      v = std::max(v, cascade);
      v = std::min(v, lim[x]);
      mu.stages[s][x] = v;
      if (x < n && witnessed[x]) cascade = std::max(cascade, uint64_t(wit_stage[x]));
    }
  }
  for (uint32_t x = 0; x < N; ++x) mu.stages[N - 1][x] = lim[x];
  return mu;
}

}  // namespace detail

// A strongly increasing staged function and points whose extracted graph is
// exactly G; points are strongly mu-transitive (mu-transitive for Vector).
// `budget` caps the table horizon.
inline Realization realize_graph(GraphFamily family, const OrderedGraph& G,
                                 uint64_t budget = 10'000) {
  if (G.family != family) throw malformed_input_error("realize_graph: family mismatch");
  if (!validate(G)) throw malformed_graph_error("realize_graph: invalid input graph");
  const uint32_t n = G.size;
  std::vector<uint32_t> D(n);
  for (uint32_t i = 0; i < n; ++i) D[i] = i;

  Realization r;
  r.points = D;
  if (family == GraphFamily::Vector) {
    // Constant stages pinned at the limit; every interval's largeness is a
    // pure limit fact.
    const uint32_t N = n;
    if (N > budget)
      throw realization_failure_error("realize_graph: horizon exceeds budget");
    const uint64_t W = uint64_t(n) + 1;
    StagedFunction mu;
    mu.horizon = N;
    mu.stages.assign(N, std::vector<uint64_t>(N, 0));
    mu.limit.resize(N);
    const uint32_t INF = N + 1;
    for (uint32_t x = 0; x < N; ++x) {
      uint32_t l = INF;
      for (uint32_t c = x; c + 1 < n; ++c)
        if (G.has_edge(c, c + 1)) { l = c; break; }
      uint64_t lim = (l == INF) ? W + x : uint64_t(l) + 1;
      mu.limit[x] = ExtendedNat::of(lim);
      for (uint32_t s = 0; s < N; ++s) mu.stages[s][x] = lim;
    }
    r.mu = std::move(mu);
  } else {
    // Packed graphs realize through their all-small largeness completion,
    // which shares the witness edges and adds no adjacent ones.
    OrderedGraph L = G;
    L.family = GraphFamily::Largeness;
    if (!validate(L))
      throw realization_failure_error("realize_graph: packed completion failed validation");
    if (uint64_t(n) + 1 > budget)
      throw realization_failure_error("realize_graph: horizon exceeds budget");
    r.mu = detail::realize_largeness_table(L);
  }

  // Soundness of decision witnesses rides on these; never skip them.
  if (!(graph_of(family, r.mu, r.points) == G))
    throw realization_failure_error("realize_graph: constructed table does not reproduce " +
                                    to_text(G));
  if (!is_strongly_increasing(r.mu))
    throw realization_failure_error("realize_graph: table is not strongly increasing for " +
                                    to_text(G));
  bool transitive = (family == GraphFamily::Vector)
                        ? is_mu_transitive(r.mu, r.points)
                        : is_strongly_mu_transitive(r.mu, r.points);
  if (!transitive)
    throw realization_failure_error("realize_graph: points not transitive for " + to_text(G));
  return r;
}

// --- census --------------------------------------------------------------------

// Counts of graph_of over all n-subsets of the window.
inline std::map<OrderedGraph, uint64_t> census(GraphFamily family, const StagedFunction& mu,
                                               const std::vector<uint32_t>& window, uint32_t n) {
  check_staged(mu);
  std::vector<uint32_t> w = window;
  std::sort(w.begin(), w.end());
  w.erase(std::unique(w.begin(), w.end()), w.end());
  detail::check_points_sorted(w, mu.horizon, "census");
  std::map<OrderedGraph, uint64_t> counts;
  if (n < 1 || n > w.size()) return counts;
  std::vector<uint32_t> D(n);
  detail::for_each_subset(static_cast<uint32_t>(w.size()), n,
                          [&](const std::vector<uint32_t>& pos) {
                            for (uint32_t t = 0; t < n; ++t) D[t] = w[pos[t]];
                            ++counts[graph_of(family, mu, D)];
                            return false;
                          });
  return counts;
}

// --- coloring -> modulus conversions -------------------------------------------

// LARGE_k promise: range {i_s, i_l} and smallness composes. mu(x) is the
// first later H-member joined to x with the large color, OMEGA when none.
inline LimitFunction modulus_from_large_coloring(const FiniteColoring& f,
                                                 const std::vector<uint32_t>& H,
                                                 uint32_t i_s, uint32_t i_l) {
  if (f.arity != 2)
    throw malformed_input_error("modulus_from_large_coloring: arity must be 2");
  std::vector<uint32_t> h = H;
  std::sort(h.begin(), h.end());
  h.erase(std::unique(h.begin(), h.end()), h.end());
  for (size_t a = 0; a < h.size(); ++a)
    for (size_t b = a + 1; b < h.size(); ++b) {
      uint32_t v = f.value_at({h[a], h[b]});
      if (v != i_s && v != i_l)
        throw promise_violation_error("coloring leaves {i_s,i_l} on pair", {h[a], h[b]});
    }
  if (i_s != i_l) {
    for (size_t a = 0; a < h.size(); ++a)
      for (size_t b = a + 1; b < h.size(); ++b)
        for (size_t c = b + 1; c < h.size(); ++c) {
          bool premise = f.value_at({h[a], h[b]}) == i_s && f.value_at({h[b], h[c]}) == i_s;
          bool concl = f.value_at({h[a], h[c]}) == i_s;
          if (premise != concl)
            throw promise_violation_error("smallness fails to compose on triple",
                                          {h[a], h[b], h[c]});
        }
  }
  LimitFunction mu;
  mu.points = h;
  mu.vals.reserve(h.size());
  for (size_t a = 0; a < h.size(); ++a) {
    ExtendedNat v = ExtendedNat::make_omega();
    for (size_t b = a + 1; b < h.size(); ++b)
      if (f.value_at({h[a], h[b]}) == i_l) { v = ExtendedNat::of(h[b]); break; }
    mu.vals.push_back(v);
  }
  return mu;
}

// PACKED_k promise: range {i_s, i_l} plus composition, persistence and the
// late-witness property. mu_z(x) is the first H-member strictly between the
// H-successors of x and z that carries the large color at stage z.
inline StagedFunction modulus_from_packed_coloring(const FiniteColoring& f,
                                                   const std::vector<uint32_t>& H,
                                                   uint32_t i_s, uint32_t i_l) {
  if (f.arity != 3)
    throw malformed_input_error("modulus_from_packed_coloring: arity must be 3");
  std::vector<uint32_t> h = H;
  std::sort(h.begin(), h.end());
  h.erase(std::unique(h.begin(), h.end()), h.end());
  if (h.empty()) throw malformed_input_error("modulus_from_packed_coloring: empty H");
  auto color = [&](uint32_t a, uint32_t b, uint32_t c) { return f.value_at({a, b, c}); };
  for (size_t a = 0; a < h.size(); ++a)
    for (size_t b = a + 1; b < h.size(); ++b)
      for (size_t c = b + 1; c < h.size(); ++c) {
        uint32_t v = color(h[a], h[b], h[c]);
        if (v != i_s && v != i_l)
          throw promise_violation_error("coloring leaves {i_s,i_l} on triple",
                                        {h[a], h[b], h[c]});
      }
  if (i_s != i_l) {
    for (size_t a = 0; a < h.size(); ++a)
      for (size_t b = a + 1; b < h.size(); ++b)
        for (size_t c = b + 1; c < h.size(); ++c)
          for (size_t d = c + 1; d < h.size(); ++d) {
            uint32_t w = h[a], x = h[b], y = h[c], z = h[d];
            bool pa = (color(w, x, z) == i_s && color(x, y, z) == i_s) ==
                      (color(w, y, z) == i_s);
            bool pb = !(color(w, x, y) == i_s) || color(w, x, z) == i_s;
            bool pc = !(color(w, x, y) == i_l && color(w, x, z) == i_s) ||
                      color(x, y, z) == i_s;
            if (!(pa && pb && pc))
              throw promise_violation_error("PACKED promise fails on quadruple", {w, x, y, z});
          }
  }

  const uint32_t N = h.back() + 1;
  auto h_at_or_after = [&](uint32_t v) -> std::optional<uint32_t> {
    auto it = std::lower_bound(h.begin(), h.end(), v);
    if (it == h.end()) return std::nullopt;
    return *it;
  };
  StagedFunction mu;
  mu.horizon = N;
  mu.stages.assign(N, std::vector<uint64_t>(N, 0));
  mu.limit.resize(N);
  for (uint32_t z = 0; z < N; ++z) {
    for (uint32_t x = 0; x < N; ++x) {
      uint32_t x0 = *h_at_or_after(x);
      uint32_t z0 = *h_at_or_after(z);
      uint64_t val = z;
      for (uint32_t y0 : h) {
        if (y0 <= x0) continue;
        if (y0 >= z0) break;
        if (color(x0, y0, z0) == i_l) { val = y0; break; }
      }
      mu.stages[z][x] = val;
    }
  }
  for (uint32_t x = 0; x < N; ++x) mu.limit[x] = ExtendedNat::of(mu.stages[N - 1][x]);
  return mu;
}

}  // namespace conelab
