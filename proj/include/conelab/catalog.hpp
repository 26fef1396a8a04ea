#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "conelab/decide.hpp"
#include "conelab/errors.hpp"
#include "conelab/patterns.hpp"

namespace conelab {

// The complete two-clause arrangement family forbidding non-homogeneous
// sets: for every ordered pair of distinct colors and every pair of
// distinct n-subsets covering an initial segment (span <= 2n), one
// pattern. Exact on finite configurations, unlike the minimal listing.
inline std::vector<Pattern> rt_homogeneity_patterns(uint32_t n, uint32_t k) {
  std::set<Pattern> out;
  for (uint32_t r = n + 1; r <= 2 * n; ++r) {
    std::vector<std::vector<uint32_t>> subsets;
    detail::for_each_subset(r, n, [&](const std::vector<uint32_t>& s) {
      subsets.push_back(s);
      return false;
    });
    for (const auto& d1 : subsets)
      for (const auto& d2 : subsets) {
        if (d1 == d2) continue;
        std::vector<bool> hit(r, false);
        for (uint32_t i : d1) hit[i] = true;
        for (uint32_t i : d2) hit[i] = true;
        bool covering = true;
        for (bool b : hit) covering &= b;
        if (!covering) continue;
        for (uint32_t i = 0; i < k; ++i)
          for (uint32_t j = 0; j < k; ++j) {
            if (i == j) continue;
            out.insert(make_pattern(n, k, {{d1, i}, {d2, j}}));
          }
      }
  }
  return {out.begin(), out.end()};
}

// The classical four-pattern forbidden family for pair homogeneity, kept as
// a comparison target; exact only on infinite sets.
inline std::vector<Pattern> rt22_minimal_patterns() {
  return {
      parse_pattern("f({0,1})=0 & f({2,3})=1", 2, 2),
      parse_pattern("f({0,1})=1 & f({2,3})=0", 2, 2),
      parse_pattern("f({0,2})=0 & f({1,3})=1", 2, 2),
      parse_pattern("f({0,2})=1 & f({1,3})=0", 2, 2),
  };
}

// Non-transitivity patterns over two colors (the Erdos-Moser forbidden set;
// also the order-promise for ascending/descending sequences).
inline std::vector<Pattern> transitivity_violation_patterns() {
  return {
      parse_pattern("f({0,1})=0 & f({1,2})=0 & f({0,2})=1", 2, 2),
      parse_pattern("f({0,1})=1 & f({1,2})=1 & f({0,2})=0", 2, 2),
  };
}

// Transitivity promise for colors 0 and 1 inside a k-color space (partial
// orders leave the incomparability color unconstrained).
inline std::vector<Pattern> partial_order_promise_patterns(uint32_t k) {
  std::vector<Pattern> out;
  for (uint32_t i = 0; i < 2; ++i)
    for (uint32_t j = 0; j < k; ++j) {
      if (j == i) continue;
      out.push_back(make_pattern(2, k, {{{0, 1}, i}, {{1, 2}, i}, {{0, 2}, j}}));
    }
  return out;
}

// Semi-hereditarity promise: for every color except the exempt one, two
// agreeing late comparisons force the early one.
inline std::vector<Pattern> semi_hereditary_promise_patterns(uint32_t k, uint32_t exempt) {
  std::vector<Pattern> out;
  for (uint32_t i = 0; i < k; ++i) {
    if (i == exempt) continue;
    for (uint32_t j = 0; j < k; ++j) {
      if (j == i) continue;
      out.push_back(make_pattern(2, k, {{{0, 2}, i}, {{1, 2}, i}, {{0, 1}, j}}));
    }
  }
  return out;
}

// Free-set encoding: an (n+1)-tuple's color is an (n+1)-bit word whose bit
// j says "the coloring maps the tuple minus its j-th element to the j-th
// element". Functionality fails exactly when two tuples agree on a selected
// n-set but point at different remaining elements; every such overlap shape
// fits in n+2 variables.
inline std::vector<Pattern> free_set_conflict_patterns(uint32_t n) {
  const uint32_t arity = n + 1;
  const uint32_t colors = uint32_t(1) << arity;
  const uint32_t span = n + 2;
  std::vector<Pattern> out;
  for (uint32_t u = 0; u < span; ++u)
    for (uint32_t v = u + 1; v < span; ++v) {
      std::vector<uint32_t> t1, t2;  // all variables except v / except u
      for (uint32_t i = 0; i < span; ++i) {
        if (i != v) t1.push_back(i);
        if (i != u) t2.push_back(i);
      }
      uint32_t bit1 = u;      // position of u within t1
      uint32_t bit2 = v - 1;  // position of v within t2
      for (uint32_t c1 = 0; c1 < colors; ++c1) {
        if (!((c1 >> bit1) & 1)) continue;
        for (uint32_t c2 = 0; c2 < colors; ++c2) {
          if (!((c2 >> bit2) & 1)) continue;
          out.push_back(make_pattern(arity, colors, {{t1, c1}, {t2, c2}}));
        }
      }
    }
  return out;
}

struct ThinParams {
  uint32_t n = 2;
  uint32_t k = 2;
  uint32_t l = 1;
  uint32_t r_max = 9;
};

struct CatalogEntry {
  std::string name;
  Problem problem;                 // pattern-based entries
  std::optional<ThinParams> thin;  // color-count entries instead
  std::map<Mode, Outcome> expected;
  std::string provenance;
  bool expect_infeasible = false;  // cap-skip is the expected outcome
};

namespace detail {

inline std::vector<uint32_t> parse_name_args(const std::string& name, size_t open) {
  std::vector<uint32_t> args;
  if (name.back() != ')') throw malformed_input_error("bad catalog name: " + name);
  std::string inner = name.substr(open + 1, name.size() - open - 2);
  size_t pos = 0;
  while (pos < inner.size()) {
    size_t comma = inner.find(',', pos);
    std::string tok = inner.substr(pos, comma == std::string::npos ? comma : comma - pos);
    args.push_back(static_cast<uint32_t>(std::stoul(tok)));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return args;
}

}  // namespace detail

// Builds the named entry. Names: RT(n,k), EM, ADS, CAC, SHER(k[,exempt]),
// THIN(n,k,l), FS(n).
inline CatalogEntry builtin(const std::string& name) {
  CatalogEntry e;
  e.name = name;
  auto open = name.find('(');
  std::string head = name.substr(0, open);

  if (head == "RT") {
    auto a = detail::parse_name_args(name, open);
    if (a.size() != 2) throw malformed_input_error("RT expects (n,k)");
    uint32_t n = a[0], k = a[1];
    e.problem = {name, n, k, {}, rt_homogeneity_patterns(n, k)};
    if (n == 1) {
      e.expected = {{Mode::SCA, Outcome::Avoids},
                    {Mode::CA, Outcome::Avoids},
                    {Mode::ArithSCA, Outcome::Avoids}};
      e.provenance = "Dzhafarov-Jockusch: singletons admit strong cone avoidance";
    } else if (n == 2) {
      e.expected = {{Mode::SCA, Outcome::Fails},
                    {Mode::CA, Outcome::Avoids},
                    {Mode::ArithSCA, Outcome::Fails}};
      e.provenance = "Seetapun: pairs admit cone avoidance but not the strong forms";
    } else {
      e.expected = {{Mode::SCA, Outcome::Fails},
                    {Mode::CA, Outcome::Fails},
                    {Mode::ArithSCA, Outcome::Fails}};
      e.provenance = "Jockusch: triples and beyond encode the halting set";
    }
    return e;
  }
  if (head == "EM") {
    e.problem = {name, 2, 2, {}, transitivity_violation_patterns()};
    e.expected = {{Mode::SCA, Outcome::Avoids},
                  {Mode::CA, Outcome::Avoids},
                  {Mode::ArithSCA, Outcome::Avoids}};
    e.provenance = "Patey: the Erdos-Moser theorem admits strong cone avoidance";
    return e;
  }
  if (head == "ADS") {
    e.problem = {name, 2, 2, transitivity_violation_patterns(),
                 rt_homogeneity_patterns(2, 2)};
    e.expected = {{Mode::SCA, Outcome::Fails},
                  {Mode::CA, Outcome::Avoids},
                  {Mode::ArithSCA, Outcome::Fails}};
    e.provenance =
        "Hirschfeldt-Shore principle; no strong cone avoidance (Patey), cone "
        "avoidance derived";
    return e;
  }
  if (head == "CAC") {
    e.problem = {name, 2, 3, partial_order_promise_patterns(3),
                 rt_homogeneity_patterns(2, 3)};
    e.expected = {{Mode::SCA, Outcome::Fails},
                  {Mode::CA, Outcome::Avoids},
                  {Mode::ArithSCA, Outcome::Fails}};
    e.provenance = "chain-antichain; verdicts derived as for ADS";
    return e;
  }
  if (head == "SHER") {
    auto a = detail::parse_name_args(name, open);
    if (a.empty() || a.size() > 2) throw malformed_input_error("SHER expects (k[,exempt])");
    uint32_t k = a[0];
    uint32_t exempt = a.size() == 2 ? a[1] : k - 1;
    e.problem = {name, 2, k, semi_hereditary_promise_patterns(k, exempt),
                 rt_homogeneity_patterns(2, k)};
    e.expected = {{Mode::SCA, Outcome::Fails},
                  {Mode::CA, Outcome::Avoids},
                  {Mode::ArithSCA, Outcome::Fails}};
    e.provenance = "Dorais semi-hereditary principle; no strong cone avoidance";
    return e;
  }
  if (head == "FS") {
    auto a = detail::parse_name_args(name, open);
    if (a.size() != 1) throw malformed_input_error("FS expects (n)");
    uint32_t n = a[0];
    uint32_t arity = n + 1;
    uint32_t colors = uint32_t(1) << arity;
    e.problem = {name, arity, colors, free_set_conflict_patterns(n),
                 rt_homogeneity_patterns(arity, colors)};
    e.expected = {{Mode::SCA, Outcome::Avoids},
                  {Mode::CA, Outcome::Avoids},
                  {Mode::ArithSCA, Outcome::Avoids}};
    e.provenance = "Wang: the free set theorem admits strong cone avoidance";
    if (n >= 3) {
      e.expected = {{Mode::SCA, Outcome::Avoids}};
      e.expect_infeasible = true;
    }
    return e;
  }
  if (head == "THIN") {
    auto a = detail::parse_name_args(name, open);
    if (a.size() != 3) throw malformed_input_error("THIN expects (n,k,l)");
    e.thin = ThinParams{a[0], a[1], a[2], 9};
    e.provenance = "Cholak-Patey thin-set thresholds";
    return e;
  }
  throw malformed_input_error("unknown catalog entry: " + name);
}

// The regression table: every built-in statement with its expected verdict
// per feasible mode.
inline std::vector<CatalogEntry> default_catalog() {
  std::vector<CatalogEntry> entries;
  for (const char* name : {"RT(1,2)", "RT(1,4)", "RT(2,2)", "RT(3,2)", "EM", "ADS", "CAC",
                           "SHER(2)", "FS(1)", "FS(2)", "FS(3)"})
    entries.push_back(builtin(name));

  auto thin = [&](uint32_t n, uint32_t k, uint32_t l, Mode mode, Outcome out) {
    std::string name =
        "THIN(" + std::to_string(n) + "," + std::to_string(k) + "," + std::to_string(l) + ")";
    for (auto& e : entries)
      if (e.name == name) {
        e.expected[mode] = out;
        return;
      }
    auto e = builtin(name);
    e.expected[mode] = out;
    entries.push_back(std::move(e));
  };
  thin(2, 3, 2, Mode::SCA, Outcome::Avoids);
  thin(2, 3, 1, Mode::SCA, Outcome::Fails);
  thin(3, 5, 5, Mode::SCA, Outcome::Avoids);
  thin(3, 5, 4, Mode::SCA, Outcome::Fails);
  thin(3, 2, 2, Mode::CA, Outcome::Avoids);
  thin(3, 2, 1, Mode::CA, Outcome::Fails);
  thin(2, 3, 2, Mode::ArithSCA, Outcome::Avoids);
  thin(2, 3, 1, Mode::ArithSCA, Outcome::Fails);
  thin(3, 5, 4, Mode::ArithSCA, Outcome::Avoids);
  thin(3, 5, 3, Mode::ArithSCA, Outcome::Fails);
  return entries;
}

struct CatalogRow {
  std::string entry;
  Mode mode = Mode::SCA;
  std::string expected;
  std::string actual;  // verdict, "skipped (...)" or an error note
  bool passed = false;
  bool skipped = false;
  double millis = 0;
  std::string witness;  // ambient graph + pattern when Fails
};

struct CatalogReport {
  std::vector<CatalogRow> rows;
  bool all_passed() const {
    for (const auto& r : rows)
      if (!r.passed && !r.skipped) return false;
    return true;
  }
};

// Decides every entry in every expected mode and compares against the
// table.
inline CatalogReport run_catalog(const std::vector<CatalogEntry>& entries,
                                 const Caps& caps = {}) {
  CatalogReport report;
  for (const auto& entry : entries) {
    for (auto [mode, expected] : entry.expected) {
      CatalogRow row;
      row.entry = entry.name;
      row.mode = mode;
      row.expected = outcome_name(expected);
      auto start = std::chrono::steady_clock::now();
      try {
        Verdict v = entry.thin
                        ? decide_thin_set(entry.thin->n, entry.thin->k, entry.thin->l, mode,
                                          entry.thin->r_max, caps)
                        : decide(entry.problem, mode, caps);
        row.actual = outcome_name(v.outcome);
        row.passed = v.outcome == (expected == Outcome::Avoids ? Outcome::Avoids
                                                               : Outcome::Fails) &&
                     row.expected == row.actual;
        if (v.witness)
          row.witness = to_text(v.witness->ambient) + "  " + render(v.witness->pattern);
      } catch (const infeasible_size_error& e) {
        if (entry.expect_infeasible) {
          row.skipped = true;
          row.actual = "skipped (predicted " + std::to_string(e.predicted) + ")";
        } else {
          row.actual = std::string("infeasible: ") + e.what();
        }
      } catch (const error& e) {
        row.actual = std::string("error: ") + e.what();
      }
      auto end = std::chrono::steady_clock::now();
      row.millis = std::chrono::duration<double, std::milli>(end - start).count();
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

inline CatalogReport run_catalog(const Caps& caps = {}) {
  return run_catalog(default_catalog(), caps);
}

}  // namespace conelab
