#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "conelab/errors.hpp"

namespace conelab {

// One conjunct f({x_i : i in indices}) = value of a pattern.
struct Clause {
  std::vector<uint32_t> indices;  // strictly increasing, |indices| = pattern arity
  uint32_t value = 0;

  friend bool operator==(const Clause& a, const Clause& b) {
    return a.indices == b.indices && a.value == b.value;
  }
  friend bool operator<(const Clause& a, const Clause& b) {
    if (a.indices != b.indices) return a.indices < b.indices;
    return a.value < b.value;
  }
};

// A conjunction of color constraints on n-subsets of an ordered variable
// block. Clauses are kept sorted and deduplicated; contradictory clauses
// (same index set, different value) are legal and make the pattern
// unsatisfiable.
struct Pattern {
  uint32_t arity = 1;
  uint32_t colors = 1;
  std::vector<Clause> clauses;

  // 1 + the largest variable index mentioned; 0 for the empty conjunction.
  uint32_t span() const {
    uint32_t mx = 0;
    bool any = false;
    for (const auto& c : clauses)
      for (uint32_t i : c.indices) { mx = std::max(mx, i + 1); any = true; }
    return any ? mx : 0;
  }

  friend bool operator==(const Pattern& a, const Pattern& b) {
    return a.arity == b.arity && a.colors == b.colors && a.clauses == b.clauses;
  }
  friend bool operator<(const Pattern& a, const Pattern& b) {
    if (a.arity != b.arity) return a.arity < b.arity;
    if (a.colors != b.colors) return a.colors < b.colors;
    return a.clauses < b.clauses;
  }
};

inline Pattern canonicalize(Pattern p) {
  for (auto& c : p.clauses) {
    if (!std::is_sorted(c.indices.begin(), c.indices.end()))
      std::sort(c.indices.begin(), c.indices.end());
  }
  std::sort(p.clauses.begin(), p.clauses.end());
  p.clauses.erase(std::unique(p.clauses.begin(), p.clauses.end()), p.clauses.end());
  return p;
}

inline Pattern make_pattern(uint32_t arity, uint32_t colors,
                            std::vector<Clause> clauses) {
  for (const auto& c : clauses) {
    if (c.indices.size() != arity)
      throw malformed_input_error("pattern clause has " + std::to_string(c.indices.size()) +
                                  " indices, arity is " + std::to_string(arity));
    if (c.value >= colors)
      throw malformed_input_error("pattern clause value " + std::to_string(c.value) +
                                  " >= colors " + std::to_string(colors));
  }
  Pattern p{arity, colors, std::move(clauses)};
  return canonicalize(std::move(p));
}

// Canonical rendering of the DSL; parse(render(p)) == p for canonical p.
inline std::string render(const Pattern& p) {
  std::string out;
  bool first_clause = true;
  for (const auto& c : p.clauses) {
    if (!first_clause) out += " & ";
    first_clause = false;
    out += "f({";
    for (size_t t = 0; t < c.indices.size(); ++t) {
      if (t) out += ',';
      out += std::to_string(c.indices[t]);
    }
    out += "})=";
    out += std::to_string(c.value);
  }
  return out;
}

// Parses `clause ("&" clause)*` with clause `f({i,j,...})=v`, whitespace
// insensitive. Arity and color bounds come from the enclosing context.
inline Pattern parse_pattern(const std::string& text, uint32_t arity, uint32_t colors) {
  size_t pos = 0;
  auto skip_ws = [&] { while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos; };
  auto expect = [&](char ch) {
    skip_ws();
    if (pos >= text.size() || text[pos] != ch)
      throw parse_error(std::string("expected '") + ch + "'", pos);
    ++pos;
  };
  auto parse_nat = [&]() -> uint32_t {
    skip_ws();
    size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == start) throw parse_error("expected a number", pos);
    unsigned long v = std::stoul(text.substr(start, pos - start));
    if (v > 0xffffffffUL) throw parse_error("number too large", start);
    return static_cast<uint32_t>(v);
  };

  std::vector<Clause> clauses;
  while (true) {
    skip_ws();
    size_t clause_start = pos;
    expect('f');
    expect('(');
    expect('{');
    Clause c;
    c.indices.push_back(parse_nat());
    while (true) {
      skip_ws();
      if (pos < text.size() && text[pos] == ',') { ++pos; c.indices.push_back(parse_nat()); }
      else break;
    }
    expect('}');
    expect(')');
    expect('=');
    c.value = parse_nat();

    std::sort(c.indices.begin(), c.indices.end());
    if (std::adjacent_find(c.indices.begin(), c.indices.end()) != c.indices.end())
      throw parse_error("duplicate index within a clause", clause_start);
    if (c.indices.size() != arity)
      throw parse_error("clause has " + std::to_string(c.indices.size()) +
                            " indices, arity is " + std::to_string(arity),
                        clause_start);
    if (c.value >= colors)
      throw parse_error("clause value " + std::to_string(c.value) + " >= colors " +
                            std::to_string(colors),
                        clause_start);
    clauses.push_back(std::move(c));

    skip_ws();
    if (pos < text.size() && text[pos] == '&') { ++pos; continue; }
    break;
  }
  skip_ws();
  if (pos != text.size()) throw parse_error("trailing input after pattern", pos);
  Pattern p{arity, colors, std::move(clauses)};
  return canonicalize(std::move(p));
}

// False iff two clauses pin the same index set to different values. Such
// patterns stay legal input and are vacuously avoided.
inline bool is_consistent(const Pattern& p) {
  for (size_t a = 0; a + 1 < p.clauses.size(); ++a)
    if (p.clauses[a].indices == p.clauses[a + 1].indices &&
        p.clauses[a].value != p.clauses[a + 1].value)
      return false;
  return true;
}

namespace detail {

inline uint64_t binomial(uint32_t n, uint32_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  uint64_t r = 1;
  for (uint32_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Colex rank of a strictly increasing index tuple.
inline uint64_t subset_rank(const std::vector<uint32_t>& positions) {
  uint64_t r = 0;
  for (size_t t = 0; t < positions.size(); ++t)
    r += binomial(positions[t], static_cast<uint32_t>(t) + 1);
  return r;
}

// Visits all strictly increasing k-tuples over {0..n-1} in lexicographic
// order; stop early by returning true from the visitor.
inline void for_each_subset(uint32_t n, uint32_t k,
                            const std::function<bool(const std::vector<uint32_t>&)>& visit) {
  if (k > n) return;
  std::vector<uint32_t> idx(k);
  for (uint32_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    if (visit(idx)) return;
    uint32_t t = k;
    while (t > 0 && idx[t - 1] == n - k + t - 1) --t;
    if (t == 0) return;
    ++idx[t - 1];
    for (uint32_t u = t; u < k; ++u) idx[u] = idx[u - 1] + 1;
  }
}

}  // namespace detail

// A total k-coloring of the n-subsets of a finite domain.
struct FiniteColoring {
  uint32_t arity = 1;
  uint32_t colors = 1;
  std::vector<uint32_t> domain;  // sorted
  std::vector<uint32_t> values;  // dense over colex ranks of position tuples

  uint32_t position_of(uint32_t element) const {
    auto it = std::lower_bound(domain.begin(), domain.end(), element);
    if (it == domain.end() || *it != element)
      throw malformed_input_error("coloring: element " + std::to_string(element) +
                                  " not in domain");
    return static_cast<uint32_t>(it - domain.begin());
  }

  // Color of a set of domain elements given in increasing order.
  uint32_t value_at(const std::vector<uint32_t>& elements) const {
    if (elements.size() != arity)
      throw malformed_input_error("coloring: tuple size != arity");
    std::vector<uint32_t> pos(elements.size());
    for (size_t t = 0; t < elements.size(); ++t) {
      pos[t] = position_of(elements[t]);
      if (t > 0 && pos[t - 1] >= pos[t])
        throw malformed_input_error("coloring: tuple must be strictly increasing");
    }
    return values[detail::subset_rank(pos)];
  }
};

// Builds a total coloring by evaluating fn on every n-subset of the domain
// (elements passed in increasing order).
inline FiniteColoring make_coloring(
    uint32_t arity, uint32_t colors, std::vector<uint32_t> domain,
    const std::function<uint32_t(const std::vector<uint32_t>&)>& fn) {
  std::sort(domain.begin(), domain.end());
  if (std::adjacent_find(domain.begin(), domain.end()) != domain.end())
    throw malformed_input_error("coloring domain has duplicates");
  FiniteColoring f;
  f.arity = arity;
  f.colors = colors;
  f.domain = std::move(domain);
  uint64_t count = detail::binomial(static_cast<uint32_t>(f.domain.size()), arity);
  f.values.assign(count, 0);
  std::vector<uint32_t> elems(arity);
  detail::for_each_subset(static_cast<uint32_t>(f.domain.size()), arity,
                          [&](const std::vector<uint32_t>& pos) {
                            for (uint32_t t = 0; t < arity; ++t) elems[t] = f.domain[pos[t]];
                            uint32_t v = fn(elems);
                            if (v >= colors)
                              throw malformed_input_error("coloring value out of range");
                            f.values[detail::subset_rank(pos)] = v;
                            return false;
                          });
  return f;
}

// True iff E (increasing, within f's domain, |E| >= span) f-satisfies p:
// every clause picks its indices out of E and sees its required color.
inline bool satisfies(const FiniteColoring& f, const std::vector<uint32_t>& E,
                      const Pattern& p) {
  if (f.arity != p.arity) throw malformed_input_error("satisfies: arity mismatch");
  if (E.size() < p.span())
    throw malformed_input_error("satisfies: |E| < pattern span");
  std::vector<uint32_t> tuple(p.arity);
  for (const auto& c : p.clauses) {
    for (uint32_t t = 0; t < p.arity; ++t) tuple[t] = E[c.indices[t]];
    if (f.value_at(tuple) != c.value) return false;
  }
  return true;
}

// Least E in [H]^span f-satisfying p, or nullopt (H f-avoids p). Size
// exactly span suffices: clauses constrain only positions below the span.
inline std::optional<std::vector<uint32_t>> meets(const FiniteColoring& f,
                                                  const std::vector<uint32_t>& H,
                                                  const Pattern& p) {
  if (f.arity != p.arity) throw malformed_input_error("meets: arity mismatch");
  std::vector<uint32_t> h = H;
  std::sort(h.begin(), h.end());
  const uint32_t r = p.span();
  if (h.size() < r) return std::nullopt;
  if (!is_consistent(p)) return std::nullopt;
  std::optional<std::vector<uint32_t>> found;
  std::vector<uint32_t> E(r);
  detail::for_each_subset(static_cast<uint32_t>(h.size()), r,
                          [&](const std::vector<uint32_t>& pos) {
                            for (uint32_t t = 0; t < r; ++t) E[t] = h[pos[t]];
                            if (satisfies(f, E, p)) { found = E; return true; }
                            return false;
                          });
  return found;
}

}  // namespace conelab
