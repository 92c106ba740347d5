#pragma once

#include "bnsat/analysis.hpp"
#include "bnsat/solvers.hpp"

#include <json.hpp>

namespace bnsat {

/// Flat record: algorithm, n, m, seed, solved, iterations, micro_updates,
/// restarts, elapsed_ms, plus the model bitstring when solved.
nlohmann::json to_json(const SolveOutcome &o);

/// States appear as bitstrings (x1 first).
nlohmann::json to_json(const AttractorReport &r);
nlohmann::json to_json(const AbsorptionResult &r, std::size_t n);

} // namespace bnsat
