#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "conelab/errors.hpp"
#include "conelab/graphs.hpp"
#include "conelab/modulus.hpp"
#include "conelab/patterns.hpp"

namespace conelab {

// Decision modes and the graph family whose quotient they inspect.
enum class Mode : uint8_t { SCA, CA, ArithSCA };

inline GraphFamily family_for_mode(Mode m) {
  switch (m) {
    case Mode::SCA: return GraphFamily::Largeness;
    case Mode::CA: return GraphFamily::Packed;
    case Mode::ArithSCA: return GraphFamily::Vector;
  }
  return GraphFamily::Largeness;
}

inline const char* mode_name(Mode m) {
  switch (m) {
    case Mode::SCA: return "sca";
    case Mode::CA: return "ca";
    case Mode::ArithSCA: return "arith-sca";
  }
  return "?";
}

inline std::optional<Mode> mode_from_name(const std::string& s) {
  if (s == "sca") return Mode::SCA;
  if (s == "ca") return Mode::CA;
  if (s == "arith-sca" || s == "arithsca" || s == "arith_sca") return Mode::ArithSCA;
  return std::nullopt;
}

// A coloring of the size-n family members, stored in canonical enumeration
// order; the unit the identity-reducibility criterion quantifies over.
struct Chi {
  GraphFamily family = GraphFamily::Largeness;
  uint32_t n = 1;
  uint32_t k = 2;
  std::vector<uint32_t> assignment;

  bool is_constant() const {
    for (uint32_t v : assignment)
      if (v != assignment.front()) return false;
    return true;
  }

  friend bool operator==(const Chi& a, const Chi& b) {
    return a.family == b.family && a.n == b.n && a.k == b.k && a.assignment == b.assignment;
  }
};

// Colors as base-k digits over the canonical graph order, most significant
// digit on the first graph; index 0 is the constant-0 coloring.
inline Chi chi_from_index(GraphFamily family, uint32_t n, uint32_t k, uint64_t count,
                          uint64_t index) {
  Chi chi{family, n, k, std::vector<uint32_t>(count, 0)};
  for (uint64_t i = count; i-- > 0;) {
    chi.assignment[i] = uint32_t(index % k);
    index /= k;
  }
  return chi;
}

struct Problem {
  std::string name;
  uint32_t n = 1;
  uint32_t k = 2;
  std::vector<Pattern> promise;  // V
  std::vector<Pattern> forbid;   // W
};

inline void check_problem(const Problem& p) {
  if (p.n < 1 || p.k < 1) throw malformed_input_error("problem: n and k must be >= 1");
  for (const auto* side : {&p.promise, &p.forbid})
    for (const auto& pat : *side) {
      if (pat.arity != p.n)
        throw malformed_input_error("problem " + p.name + ": pattern arity mismatch");
      if (pat.colors != p.k)
        throw malformed_input_error("problem " + p.name + ": pattern color mismatch");
    }
}

enum class Outcome : uint8_t { Avoids, Fails };

inline const char* outcome_name(Outcome o) {
  return o == Outcome::Avoids ? "avoids" : "fails";
}

struct Witness {
  Chi chi;
  OrderedGraph ambient;
  Pattern pattern;
  // Whether realize_graph produced a concrete modulus for the ambient
  // graph; a Fails verdict is only witness-backed when it did.
  bool realizable = false;
};

struct Stats {
  uint64_t chi_count = 0;
  std::map<uint32_t, uint64_t> graphs_per_span;
};

struct Verdict {
  std::string problem;
  Mode mode = Mode::SCA;
  Outcome outcome = Outcome::Avoids;
  std::optional<Witness> witness;
  Stats stats;
};

struct Caps {
  uint64_t chi = 1'000'000;
  uint64_t graphs = 1'000'000;
  uint32_t max_span = 12;
};

// k^count if it stays within bound, otherwise nullopt (with the estimate).
inline std::optional<uint64_t> checked_pow(uint64_t k, uint64_t count, uint64_t bound,
                                           double* estimate = nullptr) {
  if (estimate) *estimate = std::pow(double(k), double(count));
  uint64_t r = 1;
  for (uint64_t i = 0; i < count; ++i) {
    if (r > bound / (k == 0 ? 1 : k)) return std::nullopt;
    r *= k;
    if (r > bound) return std::nullopt;
  }
  return r;
}

// The coloring the identity criterion reads off an ambient configuration:
// each n-subset is colored by chi at its induced sub-configuration.
inline FiniteColoring induced_coloring(const Chi& chi, const OrderedGraph& ambient) {
  if (ambient.family != chi.family)
    throw malformed_input_error("induced_coloring: family mismatch");
  if (ambient.size < chi.n)
    throw malformed_input_error("induced_coloring: ambient smaller than arity");
  auto canon = enumerate(chi.family, chi.n);
  std::vector<uint32_t> domain(ambient.size);
  for (uint32_t i = 0; i < ambient.size; ++i) domain[i] = i;
  return make_coloring(chi.n, chi.k, domain, [&](const std::vector<uint32_t>& subset) {
    auto sub = induced(chi.family, ambient, subset, chi.n);
    auto idx = canonical_index(sub, canon);
    return chi.assignment[idx];
  });
}

namespace detail {

// One (pattern, ambient graph) obligation, precompiled to constraints on
// chi: the check fires when chi maps graph index g to value v for every
// clause.
struct CompiledCheck {
  uint32_t span = 0;
  uint32_t graph_pos = 0;    // position within the span's enumeration
  uint32_t pattern_pos = 0;  // position within W
  std::vector<std::pair<uint32_t, uint32_t>> constraints;  // (graph index, value)
};

struct CompiledChecks {
  std::vector<CompiledCheck> checks;  // ordered: span asc, graph, pattern
  std::map<uint32_t, std::vector<OrderedGraph>> graphs_by_span;
  std::vector<OrderedGraph> canon_n;
};

inline CompiledChecks compile_checks(GraphFamily family, uint32_t n,
                                     const std::vector<Pattern>& patterns, const Caps& caps) {
  CompiledChecks out;
  out.canon_n = enumerate(family, n, caps.graphs);
  std::map<uint32_t, std::vector<uint32_t>> patterns_by_span;
  for (uint32_t pi = 0; pi < patterns.size(); ++pi) {
    const auto& p = patterns[pi];
    if (p.clauses.empty())
      throw malformed_input_error("decide: pattern without clauses");
    if (!is_consistent(p)) continue;  // vacuously avoided
    uint32_t r = p.span();
    if (r > caps.max_span)
      throw infeasible_size_error("pattern span " + std::to_string(r) + " exceeds max span " +
                                      std::to_string(caps.max_span),
                                  double(r));
    patterns_by_span[r].push_back(pi);
  }
  for (auto& [r, pis] : patterns_by_span) {
    auto& graphs = out.graphs_by_span[r];
    graphs = enumerate(family, r, caps.graphs);
    for (uint32_t gi = 0; gi < graphs.size(); ++gi) {
      for (uint32_t pi : pis) {
        CompiledCheck check;
        check.span = r;
        check.graph_pos = gi;
        check.pattern_pos = pi;
        bool contradictory = false;
        for (const auto& clause : patterns[pi].clauses) {
          auto sub = induced(family, graphs[gi], clause.indices, n);
          uint32_t idx = uint32_t(canonical_index(sub, out.canon_n));
          for (auto& [g, v] : check.constraints)
            if (g == idx && v != clause.value) contradictory = true;
          check.constraints.emplace_back(idx, clause.value);
        }
        // Two clauses landing on the same induced graph with different
        // values can never fire; drop them up front.
        if (!contradictory) out.checks.push_back(std::move(check));
      }
    }
  }
  return out;
}

inline const CompiledCheck* first_hit(const CompiledChecks& compiled, const Chi& chi) {
  for (const auto& check : compiled.checks) {
    bool all = true;
    for (auto [g, v] : check.constraints)
      if (chi.assignment[g] != v) { all = false; break; }
    if (all) return &check;
  }
  return nullptr;
}

inline bool witness_realizable(GraphFamily family, const OrderedGraph& ambient) {
  try {
    realize_graph(family, ambient);
    return true;
  } catch (const error&) {
    return false;
  }
}

}  // namespace detail

struct ReducibilityOutcome {
  Outcome outcome = Outcome::Avoids;
  std::optional<Witness> witness;
  Stats stats;
};

// The finite identity-reducibility criterion: Avoids iff no chi in the
// class, pattern in W and span-sized ambient graph satisfy the pattern at
// the identity position assignment. Family closure under induced subgraphs
// makes the span-sized enumeration exhaustive. The first witness in
// (chi, span, graph, pattern) order is reported and replayed before being
// trusted.
inline ReducibilityOutcome identity_reducible(const std::vector<Pattern>& forbid,
                                              const std::vector<Chi>& chi_class,
                                              const Caps& caps = {}) {
  ReducibilityOutcome result;
  result.stats.chi_count = chi_class.size();
  if (chi_class.empty() || forbid.empty()) return result;
  const GraphFamily family = chi_class.front().family;
  const uint32_t n = chi_class.front().n;
  for (const auto& chi : chi_class)
    if (chi.family != family || chi.n != n)
      throw malformed_input_error("identity_reducible: mixed chi class");
  auto compiled = detail::compile_checks(family, n, forbid, caps);
  for (const auto& [span, graphs] : compiled.graphs_by_span)
    result.stats.graphs_per_span[span] = graphs.size();
  for (const auto& chi : chi_class) {
    if (const auto* hit = detail::first_hit(compiled, chi)) {
      Witness w;
      w.chi = chi;
      w.ambient = compiled.graphs_by_span.at(hit->span)[hit->graph_pos];
      w.pattern = forbid[hit->pattern_pos];
      // Replay: the induced coloring must satisfy the pattern on the
      // identity selection; a failure here is an engine bug.
      std::vector<uint32_t> identity(hit->span);
      for (uint32_t i = 0; i < hit->span; ++i) identity[i] = i;
      if (!satisfies(induced_coloring(chi, w.ambient), identity, w.pattern))
        throw error("identity_reducible: witness failed replay");
      w.realizable = detail::witness_realizable(family, w.ambient);
      result.outcome = Outcome::Fails;
      result.witness = std::move(w);
      return result;
    }
  }
  return result;
}

// All chi whose singleton class avoids every pattern in V: the paper's
// R/S/T classes, depending on the family.
inline std::vector<Chi> promise_class(uint32_t n, uint32_t k, const std::vector<Pattern>& V,
                                      GraphFamily family, const Caps& caps = {}) {
  uint64_t count = family_count(family, n);
  double estimate = 0;
  auto total = checked_pow(k, count, caps.chi, &estimate);
  if (!total)
    throw infeasible_size_error("promise class size k^" + std::to_string(count) +
                                    " exceeds cap " + std::to_string(caps.chi),
                                estimate);
  std::vector<Chi> out;
  if (V.empty()) {
    out.reserve(*total);
    for (uint64_t m = 0; m < *total; ++m)
      out.push_back(chi_from_index(family, n, k, count, m));
    return out;
  }
  auto compiled = detail::compile_checks(family, n, V, caps);
  for (uint64_t m = 0; m < *total; ++m) {
    Chi chi = chi_from_index(family, n, k, count, m);
    if (!detail::first_hit(compiled, chi)) out.push_back(std::move(chi));
  }
  return out;
}

inline bool constants_only(const std::vector<Chi>& chi_class) {
  for (const auto& chi : chi_class)
    if (!chi.is_constant()) return false;
  return true;
}

// A Ramsey-like problem is true iff no forbidden pattern is satisfiable by
// a constant coloring.
inline bool is_true_problem(const std::vector<Pattern>& forbid) {
  for (const auto& p : forbid) {
    if (!is_consistent(p)) continue;
    bool all_equal = true;
    for (const auto& c : p.clauses)
      if (c.value != p.clauses.front().value) { all_equal = false; break; }
    if (all_equal) return false;
  }
  return true;
}

// Decides whether the problem admits the mode's avoidance property, per the
// identity-reducibility characterizations.
inline Verdict decide(const Problem& problem, Mode mode, const Caps& caps = {}) {
  check_problem(problem);
  GraphFamily family = family_for_mode(mode);
  auto chi_class = promise_class(problem.n, problem.k, problem.promise, family, caps);
  auto reduced = identity_reducible(problem.forbid, chi_class, caps);
  Verdict v;
  v.problem = problem.name;
  v.mode = mode;
  v.outcome = reduced.outcome;
  v.witness = std::move(reduced.witness);
  v.stats = std::move(reduced.stats);
  v.stats.chi_count = chi_class.size();
  return v;
}

// Largest number of distinct colors induced_coloring(chi, G) can take over
// ambient graphs G of size <= r_max; stops early once the range of chi is
// exhausted.
inline uint32_t max_realizable_colors(const Chi& chi, uint32_t r_max, const Caps& caps = {}) {
  std::vector<bool> in_range(chi.k, false);
  for (uint32_t v : chi.assignment) in_range[v] = true;
  uint32_t range_size = 0;
  for (bool b : in_range) range_size += b;
  if (r_max > caps.max_span)
    throw infeasible_size_error("r_max exceeds max span", double(r_max));
  auto canon = enumerate(chi.family, chi.n);
  uint32_t best = 0;
  for (uint32_t r = chi.n; r <= r_max; ++r) {
    for (const auto& G : enumerate(chi.family, r, caps.graphs)) {
      std::vector<bool> seen(chi.k, false);
      uint32_t distinct = 0;
      detail::for_each_subset(r, chi.n, [&](const std::vector<uint32_t>& subset) {
        auto sub = induced(chi.family, G, subset, chi.n);
        uint32_t v = chi.assignment[canonical_index(sub, canon)];
        if (!seen[v]) { seen[v] = true; ++distinct; }
        return false;
      });
      best = std::max(best, distinct);
      if (best == range_size) return best;
    }
  }
  return best;
}

// Thin-set analysis: a coloring with more than l realizable colors exists
// iff some ambient graph realizes more than l distinct sub-configurations
// (capped by k). Avoids as soon as l reaches min(k, |family_n|); Fails with
// a replayable cover-graph witness otherwise; inconclusive when the search
// bound is hit first.
inline Verdict decide_thin_set(uint32_t n, uint32_t k, uint32_t l, Mode mode,
                               uint32_t r_max = 9, const Caps& caps = {}) {
  GraphFamily family = family_for_mode(mode);
  Verdict v;
  v.problem = "thin(" + std::to_string(n) + "," + std::to_string(k) + "," +
              std::to_string(l) + ")";
  v.mode = mode;
  uint64_t family_n = family_count(family, n);
  uint64_t full = std::min<uint64_t>(k, family_n);
  if (l >= full) {
    v.outcome = Outcome::Avoids;
    return v;
  }
  if (r_max > caps.max_span)
    throw infeasible_size_error("r_max exceeds max span", double(r_max));
  auto canon = enumerate(family, n);
  std::size_t best = 0;
  for (uint32_t r = n; r <= r_max; ++r) {
    auto graphs = enumerate(family, r, caps.graphs);
    v.stats.graphs_per_span[r] = graphs.size();
    for (const auto& G : graphs) {
      std::vector<bool> realized(canon.size(), false);
      detail::for_each_subset(r, n, [&](const std::vector<uint32_t>& subset) {
        realized[canonical_index(induced(family, G, subset, n), canon)] = true;
        return false;
      });
      std::size_t m = 0;
      for (bool b : realized) m += b;
      best = std::max(best, m);
      if (std::min<uint64_t>(k, m) > l) {
        // Build the witness: color realized sub-configurations by rank and
        // pin l+1 of them in a single pattern.
        Chi chi{family, n, k, std::vector<uint32_t>(canon.size(), 0)};
        uint32_t rank = 0;
        for (std::size_t i = 0; i < canon.size(); ++i)
          if (realized[i]) chi.assignment[i] = std::min(rank++, k - 1);
        std::vector<Clause> clauses;
        std::vector<bool> covered(k, false);
        detail::for_each_subset(r, n, [&](const std::vector<uint32_t>& subset) {
          uint32_t color =
              chi.assignment[canonical_index(induced(family, G, subset, n), canon)];
          if (color <= l && !covered[color]) {
            covered[color] = true;
            clauses.push_back({subset, color});
          }
          return false;
        });
        Witness w;
        w.chi = std::move(chi);
        w.ambient = G;
        w.pattern = make_pattern(n, k, std::move(clauses));
        std::vector<uint32_t> identity(r);
        for (uint32_t i = 0; i < r; ++i) identity[i] = i;
        if (!satisfies(induced_coloring(w.chi, G), identity, w.pattern))
          throw error("decide_thin_set: witness failed replay");
        w.realizable = detail::witness_realizable(family, G);
        v.outcome = Outcome::Fails;
        v.witness = std::move(w);
        v.stats.chi_count = 1;
        return v;
      }
    }
  }
  throw inconclusive_bound_error(
      "thin-set search found at most " + std::to_string(best) + " of " +
          std::to_string(family_n) + " sub-configurations within size " +
          std::to_string(r_max) + "; no verdict",
      best);
}

// --- JSON report -----------------------------------------------------------

inline nlohmann::json to_json(const Verdict& v) {
  nlohmann::json j;
  j["problem"] = v.problem;
  j["mode"] = mode_name(v.mode);
  j["outcome"] = outcome_name(v.outcome);
  if (v.witness) {
    j["witness"] = {
        {"chi", v.witness->chi.assignment},
        {"graph", to_text(v.witness->ambient)},
        {"pattern", render(v.witness->pattern)},
        {"realizable", v.witness->realizable},
    };
  }
  nlohmann::json spans = nlohmann::json::object();
  for (auto [span, count] : v.stats.graphs_per_span)
    spans[std::to_string(span)] = count;
  j["stats"] = {{"chi_count", v.stats.chi_count}, {"graphs_per_span", spans}};
  return j;
}

}  // namespace conelab
