#include "bnsat/solvers.hpp"

#include "bnsat/mapping.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace bnsat {

std::string_view to_string(Algorithm a) {
  switch (a) {
  case Algorithm::sbn:
    return "sbn";
  case Algorithm::pbn:
    return "pbn";
  case Algorithm::abn:
    return "abn";
  case Algorithm::gsat:
    return "gsat";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  for (Algorithm a :
       {Algorithm::sbn, Algorithm::pbn, Algorithm::abn, Algorithm::gsat})
    if (lower == to_string(a))
      return a;
  throw std::invalid_argument("unknown algorithm `" + std::string(name) +
                              "`");
}

void SolveBudget::validate() const {
  if (max_iterations < 1)
    throw std::invalid_argument("max_iterations must be at least 1");
  if (!(restart_coefficient > 0.0))
    throw std::invalid_argument("restart coefficient must be positive");
  if (attractor_cap < 1)
    throw std::invalid_argument("attractor cap must be at least 1");
}

std::uint64_t SolveBudget::restart_threshold(std::size_t n) const {
  const double t = std::ceil(restart_coefficient * static_cast<double>(n) *
                             static_cast<double>(n));
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(t));
}

SolveOutcome::SolveOutcome(const Formula &f, Algorithm algorithm,
                           std::uint64_t seed, std::optional<State> solution,
                           StepCounters counters,
                           std::chrono::nanoseconds elapsed)
    : algorithm_(algorithm), seed_(seed), solution_(std::move(solution)),
      counters_(counters), elapsed_(elapsed), n_(f.num_vars()),
      m_(f.num_clauses()) {
  if (solution_ && !satisfies(f, *solution_))
    throw ConsistencyError(std::string(to_string(algorithm)) +
                           " returned a model that falsifies the formula: " +
                           solution_->to_string());
}

double SolveOutcome::elapsed_ms() const {
  return std::chrono::duration<double, std::milli>(elapsed_).count();
}

std::string csv_header(bool with_timing) {
  std::string h =
      "algorithm,n,m,seed,solved,iterations,micro_updates,restarts";
  if (with_timing)
    h += ",elapsed_ms";
  return h;
}

std::string csv_row(const SolveOutcome &o, bool with_timing) {
  std::string row = std::string(to_string(o.algorithm())) + ',' +
                    std::to_string(o.num_vars()) + ',' +
                    std::to_string(o.num_clauses()) + ',' +
                    std::to_string(o.seed()) + ',' +
                    (o.solved() ? "1" : "0") + ',' +
                    std::to_string(o.counters().transitions) + ',' +
                    std::to_string(o.counters().micro_updates) + ',' +
                    std::to_string(o.counters().restarts);
  if (with_timing) {
    char buf[32];
    std::snprintf(buf, sizeof buf, ",%.3f", o.elapsed_ms());
    row += buf;
  }
  return row;
}

void TraceSink::record(const State &s) const {
  if (out)
    *out << s.to_string() << '\n';
}

namespace {

using Clock = std::chrono::steady_clock;

State random_state(std::size_t n, Rng &rng) {
  State s(n);
  for (std::size_t i = 0; i < n; ++i)
    s.set(i, rng.coin());
  return s;
}

/// Shared stop conditions. The clock is sampled every 256 polls.
class BudgetGuard {
public:
  BudgetGuard(const SolveBudget &budget, std::size_t n,
              const StepCounters &counters)
      : budget_(budget), n_(n), counters_(counters), start_(Clock::now()) {
    budget.validate();
  }

  /// True if another step of n node evaluations is not allowed.
  bool exhausted() {
    if (counters_.transitions >= budget_.max_iterations)
      return true;
    if (budget_.max_micro_updates != kUnbounded &&
        counters_.micro_updates + n_ > budget_.max_micro_updates)
      return true;
    if (budget_.wall_clock_limit && (++polls_ & 255U) == 0 &&
        Clock::now() - start_ >= *budget_.wall_clock_limit)
      timed_out_ = true;
    return timed_out_;
  }

  std::chrono::nanoseconds elapsed() const { return Clock::now() - start_; }

private:
  const SolveBudget &budget_;
  std::size_t n_;
  const StepCounters &counters_;
  Clock::time_point start_;
  std::uint32_t polls_ = 0;
  bool timed_out_ = false;
};

} // namespace

SolveOutcome solve_sbn(const Formula &f, const SolveBudget &budget,
                       std::uint64_t seed, TraceSink trace) {
  const Network net = compile(f);
  const std::size_t n = f.num_vars();
  Rng rng(seed);
  StepCounters counters;
  BudgetGuard guard(budget, n, counters);

  // A step that closes the trajectory does not count as a transition; each
  // abandoned trajectory counts as one (the restart).
  while (!guard.exhausted()) {
    Trajectory trajectory(random_state(n, rng));
    trace.record(trajectory.current());
    while (!guard.exhausted()) {
      State next = sbn_step(net, trajectory.current());
      counters.micro_updates += n;
      if (trajectory.contains(next)) {
        if (next == trajectory.current())
          return SolveOutcome(f, Algorithm::sbn, seed, std::move(next),
                              counters, guard.elapsed());
        ++counters.restarts;
        ++counters.transitions;
        break;
      }
      trace.record(next);
      if (trajectory.size() >= budget.attractor_cap) {
        ++counters.restarts;
        ++counters.transitions;
        break;
      }
      trajectory.append(std::move(next));
      ++counters.transitions;
    }
  }
  return SolveOutcome(f, Algorithm::sbn, seed, std::nullopt, counters,
                      guard.elapsed());
}

SolveOutcome solve_pbn(const Formula &f, const PbnParams &params,
                       const SolveBudget &budget, std::uint64_t seed,
                       TraceSink trace) {
  const Network net = compile(f);
  const std::size_t n = f.num_vars();
  const std::uint64_t threshold = budget.restart_threshold(n);
  Rng rng(seed);
  StepCounters counters;
  BudgetGuard guard(budget, n, counters);
  std::vector<std::uint8_t> scratch;

  State state = random_state(n, rng);
  trace.record(state);
  while (!guard.exhausted()) {
    const bool changed = pbn_update(net, state, params, rng, scratch);
    ++counters.transitions;
    counters.micro_updates += n;
    trace.record(state);
    if (!changed && satisfies(f, state))
      return SolveOutcome(f, Algorithm::pbn, seed, std::move(state), counters,
                          guard.elapsed());
    if (counters.transitions % threshold == 0) {
      state = random_state(n, rng);
      ++counters.restarts;
      trace.record(state);
    }
  }
  return SolveOutcome(f, Algorithm::pbn, seed, std::nullopt, counters,
                      guard.elapsed());
}

SolveOutcome solve_abn(const Formula &f, const SolveBudget &budget,
                       std::uint64_t seed, TraceSink trace) {
  const Network net = compile(f);
  const std::size_t n = f.num_vars();
  const std::uint64_t threshold = budget.restart_threshold(n);
  Rng rng(seed);
  StepCounters counters;
  BudgetGuard guard(budget, n, counters);

  SequentialState seq(net, random_state(n, rng));
  trace.record(seq.state());
  while (!guard.exhausted()) {
    const bool changed = seq.macro_step(rng);
    ++counters.transitions;
    counters.micro_updates += n;
    trace.record(seq.state());
    if (!changed) {
      if (seq.unsat_count() != 0)
        throw ConsistencyError(
            "abn: macro-step left an unsatisfying state unchanged: " +
            seq.state().to_string());
      return SolveOutcome(f, Algorithm::abn, seed, seq.state(), counters,
                          guard.elapsed());
    }
    if (counters.transitions % threshold == 0) {
      seq.reset(random_state(n, rng));
      ++counters.restarts;
      trace.record(seq.state());
    }
  }
  return SolveOutcome(f, Algorithm::abn, seed, std::nullopt, counters,
                      guard.elapsed());
}

namespace {

/// Assignment with true-literal counts and make/break scores per variable.
class GsatState {
public:
  GsatState(const Network &net, State s)
      : net_(net), f_(net.formula()), state_(std::move(s)),
        true_count_(f_.num_clauses()), make_(net.size()), break_(net.size()) {
    for (std::size_t j = 0; j < f_.num_clauses(); ++j) {
      const Clause &c = f_.clause(j);
      for (const Literal lit : c)
        true_count_[j] += lit.satisfied_by(state_);
      if (true_count_[j] == 0) {
        ++unsat_;
        for (const Literal lit : c)
          ++make_[lit.index()];
      } else if (true_count_[j] == 1) {
        ++break_[sole_true(c, net.size()).index()];
      }
    }
  }

  const State &state() const { return state_; }
  std::size_t unsat() const { return unsat_; }
  long score(std::size_t v) const {
    return static_cast<long>(make_[v]) - static_cast<long>(break_[v]);
  }

  void flip(std::size_t v) {
    state_.flip(v);
    const NodeFunction &node = net_.node(v);
    const bool now_true = state_[v];
    const auto &gaining = now_true ? node.pos_clauses : node.neg_clauses;
    const auto &losing = now_true ? node.neg_clauses : node.pos_clauses;
    for (ClauseIndex j : gaining) {
      const Clause &c = f_.clause(j);
      if (true_count_[j] == 0) {
        --unsat_;
        for (const Literal lit : c)
          --make_[lit.index()];
        ++break_[v];
      } else if (true_count_[j] == 1) {
        --break_[sole_true(c, v).index()];
      }
      ++true_count_[j];
    }
    for (ClauseIndex j : losing) {
      const Clause &c = f_.clause(j);
      --true_count_[j];
      if (true_count_[j] == 0) {
        ++unsat_;
        for (const Literal lit : c)
          ++make_[lit.index()];
        --break_[v];
      } else if (true_count_[j] == 1) {
        ++break_[sole_true(c, v).index()];
      }
    }
  }

private:
  /// The true literal of c whose variable is not `skip`.
  Literal sole_true(const Clause &c, std::size_t skip) const {
    for (const Literal lit : c)
      if (lit.index() != skip && lit.satisfied_by(state_))
        return lit;
    throw ConsistencyError("gsat: clause counter out of sync");
  }

  const Network &net_;
  const Formula &f_;
  State state_;
  std::vector<std::uint32_t> true_count_;
  std::vector<std::uint32_t> make_;
  std::vector<std::uint32_t> break_;
  std::size_t unsat_ = 0;
};

} // namespace

SolveOutcome solve_gsat(const Formula &f, const GsatParams &params,
                        const SolveBudget &budget, std::uint64_t seed,
                        TraceSink trace) {
  const Network net = compile(f);
  const std::size_t n = f.num_vars();
  const std::uint64_t flips_per_try = params.flips_for(n);
  if (flips_per_try < 1)
    throw std::invalid_argument("gsat: max_flips must be at least 1");
  Rng rng(seed);
  StepCounters counters;
  BudgetGuard guard(budget, n, counters);
  std::vector<std::size_t> best;
  best.reserve(n);

  for (std::uint64_t tries = 0;
       params.max_tries == 0 || tries < params.max_tries; ++tries) {
    if (tries > 0)
      ++counters.restarts;
    GsatState gs(net, random_state(n, rng));
    trace.record(gs.state());
    for (std::uint64_t flips = 0;; ++flips) {
      if (gs.unsat() == 0)
        return SolveOutcome(f, Algorithm::gsat, seed, gs.state(), counters,
                            guard.elapsed());
      if (flips == flips_per_try)
        break;
      if (guard.exhausted())
        return SolveOutcome(f, Algorithm::gsat, seed, std::nullopt, counters,
                            guard.elapsed());
      long top = gs.score(0);
      best.assign(1, 0);
      for (std::size_t v = 1; v < n; ++v) {
        const long s = gs.score(v);
        if (s > top) {
          top = s;
          best.assign(1, v);
        } else if (s == top) {
          best.push_back(v);
        }
      }
      gs.flip(best.size() == 1 ? best[0] : best[rng.below(best.size())]);
      ++counters.transitions;
      counters.micro_updates += n;
      trace.record(gs.state());
    }
  }
  return SolveOutcome(f, Algorithm::gsat, seed, std::nullopt, counters,
                      guard.elapsed());
}

} // namespace bnsat
