#pragma once

#include "bnsat/formula.hpp"

#include <cstdint>
#include <optional>

namespace bnsat {

/// Random k-SAT instance model.
struct GenSpec {
  std::size_t num_vars = 0;
  std::size_t num_clauses = 0;
  std::size_t clause_width = 3;
  bool forced = false;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument unless 1 ≤ width ≤ n and m ≥ 1.
  void validate() const;
};

struct GeneratedInstance {
  Formula formula;
  std::optional<State> hidden; ///< planted assignment, forced instances only
};

/// Each clause picks clause_width distinct variables uniformly and negates
/// each with probability 1/2. Forced instances first draw a uniform hidden
/// assignment, then redraw every clause until the hidden assignment
/// satisfies it. Deterministic in the seed.
GeneratedInstance generate(const GenSpec &spec);

} // namespace bnsat
