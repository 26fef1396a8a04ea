#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace conelab {

// Base for all library errors. Operational failures (bad input, exceeded
// caps) are exceptions; mathematical outcomes (Avoids/Fails) never are.
class error : public std::runtime_error {
public:
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Input value violates a structural precondition (bad edge, bad positions,
// bad syntax outside the pattern DSL, ...).
class malformed_input_error : public error {
public:
  using error::error;
};

// A graph fails its family's range/shape requirements.
class malformed_graph_error : public malformed_input_error {
public:
  using malformed_input_error::malformed_input_error;
};

// Requested enumeration or search exceeds the configured caps.
// `predicted` carries the estimated object count (saturating).
class infeasible_size_error : public error {
public:
  infeasible_size_error(const std::string& what, double predicted)
      : error(what), predicted(predicted) {}
  double predicted;
};

// Pattern DSL syntax error with a byte offset into the input.
class parse_error : public malformed_input_error {
public:
  parse_error(const std::string& what, std::size_t position)
      : malformed_input_error(what + " (at offset " + std::to_string(position) + ")"),
        position(position) {}
  std::size_t position;
};

// Input outside the operation's supported domain (e.g. an OMEGA limit where
// the construction needs finite values).
class unsupported_input_error : public error {
public:
  using error::error;
};

// A finite window ran out before a required element was found. Carries the
// partial result built so far.
class horizon_exhausted_error : public error {
public:
  horizon_exhausted_error(const std::string& what, std::vector<uint32_t> partial)
      : error(what), partial(std::move(partial)) {}
  std::vector<uint32_t> partial;
};

// realize_graph could not realize the requested graph within budget.
class realization_failure_error : public error {
public:
  using error::error;
};

// A coloring handed to a conversion lemma violates its promise. `offenders`
// names the points of the offending triple/quadruple.
class promise_violation_error : public error {
public:
  promise_violation_error(const std::string& what, std::vector<uint32_t> offenders)
      : error(what), offenders(std::move(offenders)) {}
  std::vector<uint32_t> offenders;
};

// Thin-set search ended without a conclusive cover inside r_max; distinct
// from Avoids. `best` is the largest realized graph count found.
class inconclusive_bound_error : public error {
public:
  inconclusive_bound_error(const std::string& what, std::size_t best)
      : error(what), best(best) {}
  std::size_t best;
};

}  // namespace conelab
