#pragma once

#include "bnsat/solvers.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace bnsat {

struct AlgorithmChoice {
  Algorithm algorithm = Algorithm::abn;
  double p = 0.2; ///< PBN only

  /// "ABN", "PBN(0.2)", "GSAT", "SBN".
  std::string label() const;
  /// Parses "abn", "gsat", "pbn" (uses default_p) or "pbn:0.35".
  static AlgorithmChoice parse(std::string_view text, double default_p = 0.2);

  friend bool operator==(const AlgorithmChoice &,
                         const AlgorithmChoice &) = default;
};

struct BenchRow {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t instances = 1;
  /// Explicit instance seeds; derived from the plan seed when empty.
  std::vector<std::uint64_t> seeds;
};

struct BenchPlan {
  std::vector<BenchRow> rows;
  std::vector<AlgorithmChoice> algorithms;
  SolveBudget budget;
  GsatParams gsat;
  std::size_t clause_width = 3;
  std::uint64_t seed = 1;
  unsigned threads = 0; ///< 0 selects default_thread_count()

  void validate() const;
  /// Canonical one-line description, hashed into the report metadata.
  std::string describe() const;
};

struct RunRecord {
  std::size_t row = 0;
  std::size_t instance = 0;
  std::uint64_t instance_seed = 0;
  AlgorithmChoice choice;
  SolveOutcome outcome;
};

/// Medians run over every run of the cell; an unsolved run contributes the
/// counter values it reached when its budget ran out.
struct CellSummary {
  std::size_t n = 0;
  std::size_t m = 0;
  AlgorithmChoice choice;
  std::size_t runs = 0;
  std::size_t solved = 0;
  double solved_pct = 0.0;
  double median_iterations = 0.0;
  double median_micro_updates = 0.0;
  double median_elapsed_ms = 0.0;
};

struct BenchReport {
  std::vector<CellSummary> cells; ///< row-major, algorithms in plan order
  std::vector<RunRecord> runs;    ///< (row, instance, algorithm) order
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string config_hash;
  std::string machine;
};

/// Generates instance_count forced instances per row and runs every selected
/// algorithm once per instance. Results do not depend on the thread count.
BenchReport run_bench(const BenchPlan &plan);

/// Raw per-run CSV; timing is the last column and can be left out.
void write_runs_csv(std::ostream &out, const BenchReport &report,
                    bool with_timing = true);
void write_summary_csv(std::ostream &out, const BenchReport &report);
/// Table with one line per (n, m) and time / iter. / solved per algorithm.
void write_markdown(std::ostream &out, const BenchReport &report);
std::string to_json_string(const BenchReport &report);

struct SweepPlan {
  std::size_t n = 50;
  std::size_t m = 150;
  std::vector<double> p_grid;
  std::size_t instances = 100;
  SolveBudget budget;
  std::uint64_t seed = 1;
  unsigned threads = 0;
};

struct SweepPoint {
  double p = 0.0;
  double solved_pct = 0.0;
  double median_iterations = 0.0;
  double median_micro_updates = 0.0;
};

struct SweepResult {
  std::vector<SweepPoint> points;
  BenchReport report;

  /// Highest solved-%, ties broken by lowest median iterations.
  const SweepPoint &best() const;
};

/// PBN over a grid of p in (0, 1), all on the same instances.
SweepResult run_p_sweep(const SweepPlan &plan);
void write_sweep_csv(std::ostream &out, const SweepResult &result);

/// BNSAT_THREADS if set, else the hardware concurrency.
unsigned default_thread_count();

/// Runs body(i) for i in [0, count) on up to `threads` workers. The first
/// exception thrown by any task is rethrown after all workers join.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)> &body);

double median(std::vector<double> values);

} // namespace bnsat
