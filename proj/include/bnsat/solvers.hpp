#pragma once

#include "bnsat/dynamics.hpp"
#include "bnsat/formula.hpp"

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace bnsat {

enum class Algorithm { sbn, pbn, abn, gsat };

std::string_view to_string(Algorithm a);
/// Accepts "sbn", "pbn", "abn", "gsat" (case-insensitive).
Algorithm parse_algorithm(std::string_view name);

inline constexpr std::uint64_t kUnbounded =
    std::numeric_limits<std::uint64_t>::max();

struct SolveBudget {
  /// Cap on native iterations (SBN/PBN steps, ABN macro-steps, GSAT flips).
  std::uint64_t max_iterations = 1'000'000;
  /// Cap on node evaluations; lets runs of different algorithms share one
  /// normalized budget.
  std::uint64_t max_micro_updates = kUnbounded;
  /// PBN and ABN restart every ceil(c * n^2) transitions.
  double restart_coefficient = 1.0;
  std::optional<std::chrono::milliseconds> wall_clock_limit;
  /// Distinct states SBN may record per trajectory before it gives up on
  /// finding the attractor and restarts.
  std::size_t attractor_cap = kDefaultAttractorCap;

  void validate() const;
  std::uint64_t restart_threshold(std::size_t n) const;
};

struct GsatParams {
  std::uint64_t max_flips = 0; ///< per try; 0 selects 5n
  std::uint64_t max_tries = 0; ///< 0 runs tries until the budget is spent

  std::uint64_t flips_for(std::size_t n) const {
    return max_flips ? max_flips : 5 * static_cast<std::uint64_t>(n);
  }
};

/// Raised when a solver reaches a state it must never reach, e.g. an ABN
/// macro-step that changes nothing on an unsatisfying assignment.
class ConsistencyError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// Result of one solver run. Construction with a model re-checks it against
/// the formula and throws ConsistencyError if it does not satisfy it, so a
/// SolveOutcome holding an unsound model cannot exist.
class SolveOutcome {
public:
  SolveOutcome(const Formula &f, Algorithm algorithm, std::uint64_t seed,
               std::optional<State> solution, StepCounters counters,
               std::chrono::nanoseconds elapsed);

  bool solved() const { return solution_.has_value(); }
  const std::optional<State> &solution() const { return solution_; }
  Algorithm algorithm() const { return algorithm_; }
  std::uint64_t seed() const { return seed_; }
  const StepCounters &counters() const { return counters_; }
  std::chrono::nanoseconds elapsed() const { return elapsed_; }
  double elapsed_ms() const;
  std::size_t num_vars() const { return n_; }
  std::size_t num_clauses() const { return m_; }

  /// Native iteration count (the `transitions` counter).
  std::uint64_t iterations() const { return counters_.transitions; }

private:
  Algorithm algorithm_;
  std::uint64_t seed_;
  std::optional<State> solution_;
  StepCounters counters_;
  std::chrono::nanoseconds elapsed_;
  std::size_t n_;
  std::size_t m_;
};

/// Flat CSV record: algorithm, n, m, seed, solved, iterations,
/// micro_updates, restarts, elapsed_ms. Timing is always the last column.
std::string csv_header(bool with_timing = true);
std::string csv_row(const SolveOutcome &o, bool with_timing = true);

/// Optional per-transition trace: one bitstring per line.
struct TraceSink {
  std::ostream *out = nullptr;
  void record(const State &s) const;
};

/// Synchronous dynamics from random states; restarts whenever the
/// trajectory closes on a cycle of period ≥ 2.
SolveOutcome solve_sbn(const Formula &f, const SolveBudget &budget,
                       std::uint64_t seed, TraceSink trace = {});

/// Probabilistic dynamics with identity mixing. Tests satisfaction only when
/// a step leaves the state unchanged.
SolveOutcome solve_pbn(const Formula &f, const PbnParams &params,
                       const SolveBudget &budget, std::uint64_t seed,
                       TraceSink trace = {});

/// Asynchronous dynamics in macro-steps; an unchanged macro-step is a
/// fixed point.
SolveOutcome solve_abn(const Formula &f, const SolveBudget &budget,
                       std::uint64_t seed, TraceSink trace = {});

/// GSAT: greedy flips with sideways and uphill moves, uniform tie-breaking,
/// restarts after max_flips.
SolveOutcome solve_gsat(const Formula &f, const GsatParams &params,
                        const SolveBudget &budget, std::uint64_t seed,
                        TraceSink trace = {});

} // namespace bnsat
