#include "bnsat/bench.hpp"

#include "bnsat/generator.hpp"
#include "bnsat/rng.hpp"
#include "bnsat/serialize.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace bnsat {

namespace {

std::string format_double(double v, const char *fmt = "%g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

std::string upper(std::string_view s) {
  std::string out(s);
  for (char &c : out)
    c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

} // namespace

std::string AlgorithmChoice::label() const {
  std::string l = upper(to_string(algorithm));
  if (algorithm == Algorithm::pbn)
    l += "(" + format_double(p) + ")";
  return l;
}

AlgorithmChoice AlgorithmChoice::parse(std::string_view text,
                                       double default_p) {
  AlgorithmChoice c;
  const auto colon = text.find(':');
  c.algorithm = parse_algorithm(text.substr(0, colon));
  c.p = default_p;
  if (colon != std::string_view::npos) {
    if (c.algorithm != Algorithm::pbn)
      throw std::invalid_argument("only pbn takes a probability: `" +
                                  std::string(text) + "`");
    const std::string value(text.substr(colon + 1));
    std::size_t used = 0;
    c.p = std::stod(value, &used);
    if (used != value.size())
      throw std::invalid_argument("bad probability in `" + std::string(text) +
                                  "`");
  }
  if (c.algorithm == Algorithm::pbn)
    PbnParams{c.p};
  return c;
}

void BenchPlan::validate() const {
  budget.validate();
  for (const BenchRow &row : rows) {
    if (row.instances < 1)
      throw std::invalid_argument("bench row needs at least one instance");
    if (!row.seeds.empty() && row.seeds.size() != row.instances)
      throw std::invalid_argument("bench row seed list must match instances");
    GenSpec{row.n, row.m, clause_width, true, 0}.validate();
  }
  for (const AlgorithmChoice &a : algorithms)
    if (a.algorithm == Algorithm::pbn)
      PbnParams{a.p};
}

std::string BenchPlan::describe() const {
  std::ostringstream out;
  out << "seed=" << seed << " k=" << clause_width << " rows=";
  for (const BenchRow &r : rows) {
    out << r.n << ':' << r.m << 'x' << r.instances;
    if (!r.seeds.empty())
      out << "[custom]";
    out << ';';
  }
  out << " algos=";
  for (const AlgorithmChoice &a : algorithms)
    out << a.label() << ';';
  out << " max_iter=" << budget.max_iterations
      << " max_micro=" << budget.max_micro_updates
      << " restart_c=" << format_double(budget.restart_coefficient)
      << " wall_ms="
      << (budget.wall_clock_limit ? budget.wall_clock_limit->count() : 0)
      << " gsat_flips=" << gsat.max_flips << " gsat_tries=" << gsat.max_tries;
  return out.str();
}

unsigned default_thread_count() {
  if (const char *env = std::getenv("BNSAT_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0)
      return static_cast<unsigned>(v);
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)> &body) {
  threads = std::max(1U, std::min<unsigned>(threads, count ? count : 1));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < count;) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure)
          failure = std::current_exception();
        next = count;
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back(worker);
  }
  if (failure)
    std::rethrow_exception(failure);
}

double median(std::vector<double> values) {
  if (values.empty())
    return 0.0;
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  const double upper_mid = values[mid];
  if (values.size() % 2)
    return upper_mid;
  const double lower_mid =
      *std::max_element(values.begin(), values.begin() + mid);
  return (lower_mid + upper_mid) / 2.0;
}

namespace {

SolveOutcome run_one(const Formula &f, const AlgorithmChoice &choice,
                     const BenchPlan &plan, std::uint64_t seed) {
  switch (choice.algorithm) {
  case Algorithm::sbn:
    return solve_sbn(f, plan.budget, seed);
  case Algorithm::pbn:
    return solve_pbn(f, PbnParams{choice.p}, plan.budget, seed);
  case Algorithm::abn:
    return solve_abn(f, plan.budget, seed);
  case Algorithm::gsat:
    return solve_gsat(f, plan.gsat, plan.budget, seed);
  }
  throw std::logic_error("unhandled algorithm");
}

std::uint64_t run_seed(std::uint64_t instance_seed,
                       const AlgorithmChoice &c) {
  return derive_seed(instance_seed, static_cast<std::uint64_t>(c.algorithm),
                     std::bit_cast<std::uint64_t>(c.p));
}

} // namespace

BenchReport run_bench(const BenchPlan &plan) {
  plan.validate();
  BenchReport report;
  report.seed = plan.seed;
  report.threads = plan.threads ? plan.threads : default_thread_count();
  {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a(plan.describe())));
    report.config_hash = buf;
  }
  report.machine = std::to_string(std::thread::hardware_concurrency()) +
                   " hardware threads";

  struct Task {
    std::size_t row;
    std::size_t instance;
    std::uint64_t instance_seed;
  };
  std::vector<Task> instances;
  for (std::size_t r = 0; r < plan.rows.size(); ++r) {
    const BenchRow &row = plan.rows[r];
    for (std::size_t i = 0; i < row.instances; ++i)
      instances.push_back(
          {r, i, row.seeds.empty() ? derive_seed(plan.seed, row.n, row.m, i)
                                   : row.seeds[i]});
  }

  const std::size_t algos = plan.algorithms.size();
  std::vector<std::optional<RunRecord>> slots(instances.size() * algos);
  parallel_for(instances.size(), report.threads, [&](std::size_t t) {
    const Task &task = instances[t];
    const BenchRow &row = plan.rows[task.row];
    const Formula f = generate({row.n, row.m, plan.clause_width, true,
                                task.instance_seed})
                          .formula;
    for (std::size_t a = 0; a < algos; ++a) {
      const AlgorithmChoice &choice = plan.algorithms[a];
      slots[t * algos + a].emplace(RunRecord{
          task.row, task.instance, task.instance_seed, choice,
          run_one(f, choice, plan, run_seed(task.instance_seed, choice))});
    }
  });
  report.runs.reserve(slots.size());
  for (auto &slot : slots)
    report.runs.push_back(std::move(*slot));

  for (std::size_t r = 0; r < plan.rows.size(); ++r) {
    for (const AlgorithmChoice &choice : plan.algorithms) {
      CellSummary cell;
      cell.n = plan.rows[r].n;
      cell.m = plan.rows[r].m;
      cell.choice = choice;
      std::vector<double> iters, micro, ms;
      for (const RunRecord &rec : report.runs) {
        if (rec.row != r || !(rec.choice == choice))
          continue;
        ++cell.runs;
        cell.solved += rec.outcome.solved();
        iters.push_back(static_cast<double>(rec.outcome.iterations()));
        micro.push_back(
            static_cast<double>(rec.outcome.counters().micro_updates));
        ms.push_back(rec.outcome.elapsed_ms());
      }
      cell.solved_pct = cell.runs ? 100.0 * static_cast<double>(cell.solved) /
                                        static_cast<double>(cell.runs)
                                  : 0.0;
      cell.median_iterations = median(iters);
      cell.median_micro_updates = median(micro);
      cell.median_elapsed_ms = median(ms);
      report.cells.push_back(cell);
    }
  }
  return report;
}

void write_runs_csv(std::ostream &out, const BenchReport &report,
                    bool with_timing) {
  out << "row,instance,instance_seed,label," << csv_header(with_timing)
      << '\n';
  for (const RunRecord &rec : report.runs)
    out << rec.row << ',' << rec.instance << ',' << rec.instance_seed << ','
        << rec.choice.label() << ',' << csv_row(rec.outcome, with_timing)
        << '\n';
}

void write_summary_csv(std::ostream &out, const BenchReport &report) {
  out << "n,m,algorithm,runs,solved,solved_pct,median_iterations,"
         "median_micro_updates,median_elapsed_ms\n";
  for (const CellSummary &c : report.cells)
    out << c.n << ',' << c.m << ',' << c.choice.label() << ',' << c.runs
        << ',' << c.solved << ',' << format_double(c.solved_pct, "%.1f")
        << ',' << format_double(c.median_iterations) << ','
        << format_double(c.median_micro_updates) << ','
        << format_double(c.median_elapsed_ms, "%.3f") << '\n';
}

void write_markdown(std::ostream &out, const BenchReport &report) {
  if (report.cells.empty()) {
    out << "(empty plan)\n";
    return;
  }
  std::vector<std::string> labels;
  for (const CellSummary &c : report.cells) {
    const std::string l = c.choice.label();
    if (std::find(labels.begin(), labels.end(), l) == labels.end())
      labels.push_back(l);
  }
  out << "| n | m |";
  for (const auto &l : labels)
    out << ' ' << l << " time (ms) | " << l << " iter. | " << l
        << " solved |";
  out << "\n|---|---|";
  for (std::size_t i = 0; i < labels.size(); ++i)
    out << "---:|---:|---:|";
  out << '\n';
  for (std::size_t i = 0; i < report.cells.size(); i += labels.size()) {
    out << "| " << report.cells[i].n << " | " << report.cells[i].m << " |";
    for (std::size_t a = 0; a < labels.size(); ++a) {
      const CellSummary &c = report.cells[i + a];
      if (c.solved == 0)
        out << " - | - |";
      else
        out << ' ' << format_double(c.median_elapsed_ms, "%.1f") << " | "
            << format_double(c.median_iterations) << " |";
      out << ' ' << format_double(c.solved_pct, "%.1f") << "% |";
    }
    out << '\n';
  }
  out << "\nMedians over all runs; unsolved runs contribute the counters "
         "reached at budget exhaustion.\n";
}

std::string to_json_string(const BenchReport &report) {
  nlohmann::json cells = nlohmann::json::array();
  for (const CellSummary &c : report.cells)
    cells.push_back({{"n", c.n},
                     {"m", c.m},
                     {"algorithm", c.choice.label()},
                     {"runs", c.runs},
                     {"solved", c.solved},
                     {"solved_pct", c.solved_pct},
                     {"median_iterations", c.median_iterations},
                     {"median_micro_updates", c.median_micro_updates},
                     {"median_elapsed_ms", c.median_elapsed_ms}});
  nlohmann::json j = {{"metadata",
                       {{"seed", report.seed},
                        {"threads", report.threads},
                        {"config_hash", report.config_hash},
                        {"machine", report.machine},
                        {"runs", report.runs.size()}}},
                      {"cells", cells}};
  return j.dump(2);
}

const SweepPoint &SweepResult::best() const {
  if (points.empty())
    throw std::logic_error("empty sweep");
  return *std::min_element(points.begin(), points.end(),
                           [](const SweepPoint &a, const SweepPoint &b) {
                             if (a.solved_pct != b.solved_pct)
                               return a.solved_pct > b.solved_pct;
                             return a.median_iterations < b.median_iterations;
                           });
}

SweepResult run_p_sweep(const SweepPlan &plan) {
  BenchPlan bench;
  bench.rows = {{plan.n, plan.m, plan.instances, {}}};
  for (double p : plan.p_grid) {
    if (!(p > 0.0 && p < 1.0))
      throw std::invalid_argument("sweep probabilities must lie in (0, 1)");
    bench.algorithms.push_back({Algorithm::pbn, p});
  }
  bench.budget = plan.budget;
  bench.seed = plan.seed;
  bench.threads = plan.threads;

  SweepResult result;
  result.report = run_bench(bench);
  for (const CellSummary &c : result.report.cells)
    result.points.push_back({c.choice.p, c.solved_pct, c.median_iterations,
                             c.median_micro_updates});
  return result;
}

void write_sweep_csv(std::ostream &out, const SweepResult &result) {
  out << "p,solved_pct,median_iterations,median_micro_updates\n";
  for (const SweepPoint &pt : result.points)
    out << format_double(pt.p) << ',' << format_double(pt.solved_pct, "%.1f")
        << ',' << format_double(pt.median_iterations) << ','
        << format_double(pt.median_micro_updates) << '\n';
}

} // namespace bnsat
