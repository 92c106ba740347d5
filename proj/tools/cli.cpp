#include "cli.hpp"

#include "bnsat/analysis.hpp"
#include "bnsat/bench.hpp"
#include "bnsat/dimacs.hpp"
#include "bnsat/generator.hpp"
#include "bnsat/serialize.hpp"
#include "bnsat/solvers.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace bnsat::cli {

namespace {

struct InputOptions {
  std::string path;
  std::string tautologies = "reject";
  bool lenient_count = false;

  void attach(CLI::App &cmd) {
    cmd.add_option("input", path, "DIMACS CNF file, or - for standard input")
        ->required();
    cmd.add_option("--tautologies", tautologies,
                   "reject or drop tautological clauses")
        ->check(CLI::IsMember({"reject", "drop"}));
    cmd.add_flag("--lenient-count", lenient_count,
                 "accept a clause count differing from the header");
  }

  Formula load() const {
    DimacsOptions options;
    options.tautologies = tautologies == "drop" ? TautologyPolicy::drop
                                                : TautologyPolicy::reject;
    options.clause_count = lenient_count ? ClauseCountPolicy::lenient
                                         : ClauseCountPolicy::strict;
    if (path == "-") {
      options.source_name = "<stdin>";
      return read_dimacs(std::cin, options).formula;
    }
    return read_dimacs_file(path, options).formula;
  }
};

struct BudgetOptions {
  std::uint64_t max_iter = 1'000'000;
  std::optional<std::uint64_t> max_micro;
  double restart_coeff = 1.0;
  std::optional<std::int64_t> time_limit_ms;

  void attach(CLI::App &cmd) {
    cmd.add_option("--max-iter", max_iter,
                   "cap on native iterations (steps, macro-steps or flips)")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd.add_option("--max-micro", max_micro, "cap on node evaluations");
    cmd.add_option("--restart-coeff", restart_coeff,
                   "restart PBN/ABN every ceil(c*n^2) transitions")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd.add_option("--time-limit-ms", time_limit_ms,
                   "wall-clock limit per run");
  }

  SolveBudget budget() const {
    SolveBudget b;
    b.max_iterations = max_iter;
    if (max_micro)
      b.max_micro_updates = *max_micro;
    b.restart_coefficient = restart_coeff;
    if (time_limit_ms)
      b.wall_clock_limit = std::chrono::milliseconds(*time_limit_ms);
    b.validate();
    return b;
  }
};

std::vector<double> parse_list(const std::string &text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ','))
    if (!item.empty())
      out.push_back(std::stod(item));
  return out;
}

std::vector<BenchRow> parse_rows(const std::string &text,
                                 std::size_t instances) {
  std::vector<BenchRow> rows;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty())
      continue;
    const auto colon = item.find(':');
    if (colon == std::string::npos)
      throw std::invalid_argument("row `" + item + "` is not n:m");
    rows.push_back({std::stoul(item.substr(0, colon)),
                    std::stoul(item.substr(colon + 1)), instances, {}});
  }
  return rows;
}

void write_to(const std::string &path, const std::string &content,
              std::ostream &fallback) {
  if (path.empty() || path == "-") {
    fallback << content;
    return;
  }
  std::ofstream file(path);
  if (!file)
    throw std::runtime_error("cannot write " + path);
  file << content;
}

int do_solve(const InputOptions &input, const BudgetOptions &budget_opts,
             const std::string &algo, double p, std::uint64_t seed,
             std::uint64_t max_flips, std::uint64_t max_tries,
             const std::string &format, const std::string &trace_path,
             std::ostream &out) {
  const Formula f = input.load();
  const SolveBudget budget = budget_opts.budget();
  std::ofstream trace_file;
  TraceSink trace;
  if (!trace_path.empty()) {
    trace_file.open(trace_path);
    if (!trace_file)
      throw std::runtime_error("cannot write " + trace_path);
    trace.out = &trace_file;
  }

  const Algorithm a = parse_algorithm(algo);
  const PbnParams pbn{p};
  const SolveOutcome outcome = [&] {
    switch (a) {
    case Algorithm::sbn:
      return solve_sbn(f, budget, seed, trace);
    case Algorithm::pbn:
      return solve_pbn(f, pbn, budget, seed, trace);
    case Algorithm::abn:
      return solve_abn(f, budget, seed, trace);
    case Algorithm::gsat:
      return solve_gsat(f, GsatParams{max_flips, max_tries}, budget, seed,
                        trace);
    }
    throw std::logic_error("unhandled algorithm");
  }();

  if (format == "json") {
    if (outcome.solved())
      out << model_line(*outcome.solution()) << '\n';
    out << to_json(outcome).dump() << '\n';
  } else {
    out << (outcome.solved() ? "s SATISFIABLE" : "s UNKNOWN") << '\n';
    if (outcome.solved())
      out << model_line(*outcome.solution()) << '\n';
    out << "c algorithm " << to_string(outcome.algorithm()) << '\n'
        << "c seed " << outcome.seed() << '\n'
        << "c iterations " << outcome.counters().transitions << '\n'
        << "c micro_updates " << outcome.counters().micro_updates << '\n'
        << "c restarts " << outcome.counters().restarts << '\n'
        << "c elapsed_ms " << outcome.elapsed_ms() << '\n';
  }
  return outcome.solved() ? kSolved : kExhausted;
}

int do_analyze(const InputOptions &input, const std::string &mode,
               const std::string &chain_kind, double p,
               const std::string &dot_path, std::optional<std::size_t> cap,
               std::ostream &out) {
  const Formula f = input.load();
  const Network net = compile(f);
  nlohmann::json result;
  int status = 0;
  std::ostringstream dot;

  if (mode == "graph") {
    const auto graph = build_transition_graph(net, cap.value_or(kGraphCap));
    result = to_json(classify(graph));
    auto functions = nlohmann::json::array();
    for (const NodeFunction &node : net.nodes())
      functions.push_back(describe_node(node));
    result["functions"] = functions;
    if (!dot_path.empty())
      export_dot(dot, graph);
  } else if (mode == "prop1") {
    const auto verdict = check_prop1(f, cap.value_or(kGraphCap));
    result = {{"n", f.num_vars()},
              {"m", f.num_clauses()},
              {"verdict", verdict.ok ? "ok" : "counterexample"}};
    if (!verdict.ok) {
      result["counterexample"] = verdict.counterexample->to_string();
      status = kCheckFailed;
    }
  } else {
    ChainKind kind = AbnMicroChain{};
    if (chain_kind == "pbn")
      kind = PbnChain{PbnParams{p}.p()};
    const auto chain = build_markov_chain(net, kind, cap);
    const auto solutions = brute_force_solutions(f, kGraphCap);
    const auto absorption = check_absorption(chain, solutions);
    result = to_json(absorption, f.num_vars());
    result["chain"] = chain_kind;
    if (chain_kind == "pbn")
      result["p"] = p;
    result["max_row_error"] = chain.max_row_error();
    result["solutions"] = solutions.size();
    if (!absorption.passed())
      status = kCheckFailed;
    if (!dot_path.empty())
      export_dot(dot, chain);
  }
  out << result.dump(2) << '\n';
  if (!dot_path.empty())
    write_to(dot_path, dot.str(), out);
  return status;
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out,
        std::ostream &err) {
  CLI::App app{"Boolean-network SAT solving and state-space analysis"};
  app.set_config("--config", "", "key=value configuration file");
  app.require_subcommand(1);

  // solve
  auto *solve = app.add_subcommand("solve", "solve a CNF instance");
  InputOptions solve_in;
  BudgetOptions solve_budget;
  std::string algo = "abn", format = "json", trace_path;
  double p = 0.2;
  std::uint64_t seed = 1, max_flips = 0, max_tries = 0;
  solve_in.attach(*solve);
  solve_budget.attach(*solve);
  solve->add_option("--algo", algo, "sbn, pbn, abn or gsat")
      ->capture_default_str()
      ->check(CLI::IsMember({"sbn", "pbn", "abn", "gsat"}));
  solve->add_option("--p", p, "PBN node-function probability")
      ->capture_default_str();
  solve->add_option("--seed", seed)->capture_default_str();
  solve->add_option("--max-flips", max_flips, "GSAT flips per try (0 = 5n)");
  solve->add_option("--max-tries", max_tries, "GSAT tries (0 = unlimited)");
  solve->add_option("--format", format)
      ->capture_default_str()
      ->check(CLI::IsMember({"json", "text"}));
  solve->add_option("--trace", trace_path,
                    "write every visited state as a bitstring line");

  // gen
  auto *gen = app.add_subcommand("gen", "generate a random k-SAT instance");
  GenSpec spec;
  std::string gen_out;
  bool emit_witness = false;
  gen->add_option("--n", spec.num_vars, "variables")->required();
  gen->add_option("--m", spec.num_clauses, "clauses")->required();
  gen->add_option("--k", spec.clause_width, "literals per clause")
      ->capture_default_str();
  gen->add_flag("--forced", spec.forced, "plant a hidden solution");
  gen->add_option("--seed", spec.seed)->capture_default_str();
  gen->add_option("--out", gen_out, "output path (default standard output)");
  gen->add_flag("--emit-witness", emit_witness,
                "with --forced, write the hidden assignment to <out>.witness");

  // analyze
  auto *analyze =
      app.add_subcommand("analyze", "exhaustive state-space analysis");
  InputOptions analyze_in;
  std::string mode = "graph", chain_kind = "pbn", dot_path;
  double analyze_p = 0.2;
  std::optional<std::size_t> cap;
  analyze_in.attach(*analyze);
  analyze->add_option("--mode", mode, "graph, prop1 or absorption")
      ->capture_default_str()
      ->check(CLI::IsMember({"graph", "prop1", "absorption"}));
  analyze->add_option("--chain", chain_kind, "pbn or abn")
      ->capture_default_str()
      ->check(CLI::IsMember({"pbn", "abn"}));
  analyze->add_option("--p", analyze_p)->capture_default_str();
  analyze->add_option("--dot", dot_path, "write a DOT graph");
  analyze->add_option("--cap", cap, "maximum variable count");

  // bench
  auto *bench = app.add_subcommand("bench", "benchmark over forced instances");
  std::string rows = "50:100,50:150,50:215", algos = "abn,pbn,gsat";
  std::size_t instances = 100;
  BudgetOptions bench_budget;
  bench_budget.max_iter = 1'000'000'000;
  bench_budget.max_micro = 1'000'000;
  bench_budget.time_limit_ms = 10'000;
  std::uint64_t bench_seed = 1, bench_flips = 0;
  double bench_p = 0.2;
  unsigned threads = 0;
  std::string csv_path, summary_path, md_path, json_path;
  bench->add_option("--rows", rows, "comma-separated n:m pairs")
      ->capture_default_str();
  bench->add_option("--instances", instances)->capture_default_str();
  bench->add_option("--algos", algos, "abn, pbn, pbn:<p>, gsat, sbn")
      ->capture_default_str();
  bench->add_option("--p", bench_p, "default PBN probability")
      ->capture_default_str();
  bench->add_option("--seed", bench_seed)->capture_default_str();
  bench->add_option("--max-flips", bench_flips, "GSAT flips per try");
  bench_budget.attach(*bench);
  bench->add_option("--threads", threads)->envname("BNSAT_THREADS");
  bench->add_option("--csv", csv_path, "raw per-run CSV");
  bench->add_option("--summary", summary_path, "per-cell CSV");
  bench->add_option("--md", md_path, "markdown table (default stdout)");
  bench->add_option("--json", json_path, "JSON report");

  // psweep
  auto *psweep = app.add_subcommand("psweep", "PBN probability sweep");
  SweepPlan sweep;
  std::string grid = "0.05,0.1,0.2,0.35,0.5,0.8", sweep_csv;
  BudgetOptions sweep_budget;
  sweep_budget.max_iter = 1'000'000'000;
  sweep_budget.max_micro = 1'000'000;
  sweep_budget.time_limit_ms = 10'000;
  psweep->add_option("--n", sweep.n)->capture_default_str();
  psweep->add_option("--m", sweep.m)->capture_default_str();
  psweep->add_option("--grid", grid)->capture_default_str();
  psweep->add_option("--instances", sweep.instances)->capture_default_str();
  psweep->add_option("--seed", sweep.seed)->capture_default_str();
  sweep_budget.attach(*psweep);
  psweep->add_option("--threads", sweep.threads)->envname("BNSAT_THREADS");
  psweep->add_option("--csv", sweep_csv, "output CSV (default stdout)");

  std::vector<const char *> argv{"bnsat"};
  for (const auto &a : args)
    argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp &) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError &e) {
    err << "error: " << e.what() << '\n';
    return kError;
  }

  try {
    if (solve->parsed())
      return do_solve(solve_in, solve_budget, algo, p, seed, max_flips,
                      max_tries, format, trace_path, out);

    if (gen->parsed()) {
      if (emit_witness && (!spec.forced || gen_out.empty() || gen_out == "-"))
        throw std::invalid_argument(
            "--emit-witness needs --forced and an --out path");
      const GeneratedInstance inst = generate(spec);
      write_to(gen_out, write_dimacs(inst.formula), out);
      if (emit_witness)
        write_to(gen_out + ".witness", model_line(*inst.hidden) + "\n", out);
      return 0;
    }

    if (analyze->parsed())
      return do_analyze(analyze_in, mode, chain_kind, analyze_p, dot_path,
                        cap, out);

    if (bench->parsed()) {
      BenchPlan plan;
      plan.rows = parse_rows(rows, instances);
      std::stringstream in(algos);
      for (std::string item; std::getline(in, item, ',');)
        if (!item.empty())
          plan.algorithms.push_back(AlgorithmChoice::parse(item, bench_p));
      plan.budget = bench_budget.budget();
      plan.gsat.max_flips = bench_flips;
      plan.seed = bench_seed;
      plan.threads = threads;
      const BenchReport report = run_bench(plan);
      std::ostringstream md;
      write_markdown(md, report);
      write_to(md_path, md.str(), out);
      if (!csv_path.empty()) {
        std::ostringstream csv;
        write_runs_csv(csv, report);
        write_to(csv_path, csv.str(), out);
      }
      if (!summary_path.empty()) {
        std::ostringstream csv;
        write_summary_csv(csv, report);
        write_to(summary_path, csv.str(), out);
      }
      if (!json_path.empty())
        write_to(json_path, to_json_string(report) + "\n", out);
      return 0;
    }

    if (psweep->parsed()) {
      sweep.p_grid = parse_list(grid);
      sweep.budget = sweep_budget.budget();
      const SweepResult result = run_p_sweep(sweep);
      std::ostringstream csv;
      write_sweep_csv(csv, result);
      write_to(sweep_csv, csv.str(), out);
      err << "best p = " << result.best().p << '\n';
      return 0;
    }
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return kError;
  }
  return kError;
}

} // namespace bnsat::cli
