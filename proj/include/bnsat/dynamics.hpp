#pragma once

#include "bnsat/mapping.hpp"
#include "bnsat/rng.hpp"

#include <cstdint>
#include <unordered_map>
#include <variant>
#include <vector>

namespace bnsat {

struct StepCounters {
  std::uint64_t micro_updates = 0; ///< single-node evaluations
  std::uint64_t transitions = 0;   ///< whole-state transitions
  std::uint64_t restarts = 0;

  friend bool operator==(const StepCounters &,
                         const StepCounters &) = default;
};

/// Probability of applying the node function; the identity applies with
/// probability 1 - p.
class PbnParams {
public:
  explicit PbnParams(double p = 0.2);
  double p() const { return p_; }

private:
  double p_;
};

/// Visited states in insertion order, with O(1) membership.
class Trajectory {
public:
  explicit Trajectory(State start) { append(std::move(start)); }

  /// Returns false (and does nothing) if the state was already visited.
  bool append(State s);
  bool contains(const State &s) const { return index_.contains(s); }
  std::size_t position(const State &s) const { return index_.at(s); }
  const State &current() const { return states_.back(); }
  const std::vector<State> &states() const { return states_; }
  std::size_t size() const { return states_.size(); }

private:
  std::vector<State> states_;
  std::unordered_map<State, std::size_t> index_;
};

State sbn_step(const Network &net, const State &s);
State sbn_step(const Network &net, const State &s, StepCounters &counters);

struct FixedPointHit {
  State state;
  std::size_t transient = 0; ///< steps before the fixed point is entered
};
struct CycleHit {
  std::vector<State> states; ///< in trajectory order
  std::size_t transient = 0;
  std::size_t period() const { return states.size(); }
};
struct Overflow {
  std::size_t visited = 0;
};
using AttractorProbe = std::variant<FixedPointHit, CycleHit, Overflow>;

inline constexpr std::size_t kDefaultAttractorCap = std::size_t{1} << 20;

/// Follows synchronous steps from start until a state repeats or max_states
/// distinct states have been recorded.
AttractorProbe detect_attractor(const Network &net, const State &start,
                                std::size_t max_states = kDefaultAttractorCap);

/// Computes the synchronous image t once, then keeps t_i with probability p
/// and s_i otherwise. Exactly n Bernoulli draws, in node order.
State pbn_step(const Network &net, const State &s, const PbnParams &params,
               Rng &rng);
State pbn_step(const Network &net, const State &s, const PbnParams &params,
               Rng &rng, StepCounters &counters);

/// In-place pbn_step consuming the same draws; returns whether s changed.
/// clause_scratch is reused across calls to avoid reallocating.
bool pbn_update(const Network &net, State &s, const PbnParams &params,
                Rng &rng, std::vector<std::uint8_t> &clause_scratch);

/// s with component i replaced by F_i(s).
State abn_micro_step(const Network &net, const State &s, std::size_t i);

struct MacroStep {
  State state;
  bool changed = false;
};

/// Sequential update of all nodes in a fresh uniform random order; each
/// update sees the partially updated state.
MacroStep abn_macro_step(const Network &net, const State &s, Rng &rng);

/// State plus per-clause true-literal counts, so one node update costs
/// O(occurrences of that variable) instead of O(m).
class SequentialState {
public:
  SequentialState(const Network &net, State initial);

  void reset(State s);

  const State &state() const { return state_; }
  std::size_t unsat_count() const { return unsat_; }
  bool clause_satisfied(std::size_t j) const { return true_count_[j] != 0; }

  /// F_i at the current state.
  bool node_value(std::size_t i) const;

  /// Applies F_i; returns true if x_i changed.
  bool update(std::size_t i);

  /// One macro-transition; returns whether any variable changed.
  bool macro_step(Rng &rng);

  /// Applies the node updates in the given order (a permutation of 0..n-1).
  bool macro_step(std::span<const std::uint32_t> order);

  void flip(std::size_t i);

private:
  const Network *net_;
  State state_;
  std::vector<std::uint32_t> true_count_;
  std::size_t unsat_ = 0;
  std::vector<std::uint32_t> order_;
};

} // namespace bnsat
