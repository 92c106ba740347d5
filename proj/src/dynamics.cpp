#include "bnsat/dynamics.hpp"

#include <cassert>
#include <numeric>
#include <stdexcept>

namespace bnsat {

PbnParams::PbnParams(double p) : p_(p) {
  if (!(p > 0.0 && p <= 1.0))
    throw std::invalid_argument("PBN probability must lie in (0, 1]");
}

bool Trajectory::append(State s) {
  auto [it, inserted] = index_.try_emplace(s, states_.size());
  if (!inserted)
    return false;
  states_.push_back(std::move(s));
  return true;
}

State sbn_step(const Network &net, const State &s) { return eval_all(net, s); }

State sbn_step(const Network &net, const State &s, StepCounters &counters) {
  counters.micro_updates += net.size();
  ++counters.transitions;
  return eval_all(net, s);
}

AttractorProbe detect_attractor(const Network &net, const State &start,
                                std::size_t max_states) {
  assert(max_states >= 1);
  Trajectory trajectory(start);
  while (true) {
    State next = sbn_step(net, trajectory.current());
    if (trajectory.contains(next)) {
      const std::size_t first = trajectory.position(next);
      if (next == trajectory.current())
        return FixedPointHit{std::move(next), first};
      const auto &states = trajectory.states();
      return CycleHit{{states.begin() + static_cast<std::ptrdiff_t>(first),
                       states.end()},
                      first};
    }
    if (trajectory.size() >= max_states)
      return Overflow{trajectory.size()};
    trajectory.append(std::move(next));
  }
}

State pbn_step(const Network &net, const State &s, const PbnParams &params,
               Rng &rng) {
  const State image = eval_all(net, s);
  State next = s;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (rng.bernoulli(params.p()))
      next.set(i, image[i]);
  }
  return next;
}

State pbn_step(const Network &net, const State &s, const PbnParams &params,
               Rng &rng, StepCounters &counters) {
  counters.micro_updates += net.size();
  ++counters.transitions;
  return pbn_step(net, s, params, rng);
}

bool pbn_update(const Network &net, State &s, const PbnParams &params,
                Rng &rng, std::vector<std::uint8_t> &clause_scratch) {
  const Formula &f = net.formula();
  clause_scratch.resize(f.num_clauses());
  for (std::size_t j = 0; j < clause_scratch.size(); ++j)
    clause_scratch[j] = evaluate_clause(f, j, s);
  // Node i reads only its own component and the clause values, and s[i] is
  // untouched until node i is processed, so updating in place is exact.
  bool changed = false;
  for (const NodeFunction &node : net.nodes()) {
    if (!rng.bernoulli(params.p()))
      continue;
    const bool value = eval_node_with(node, s, clause_scratch);
    if (value != s[node.var]) {
      s.set(node.var, value);
      changed = true;
    }
  }
  return changed;
}

State abn_micro_step(const Network &net, const State &s, std::size_t i) {
  assert(i < net.size());
  State next = s;
  next.set(i, eval_node(net, i, s));
  return next;
}

MacroStep abn_macro_step(const Network &net, const State &s, Rng &rng) {
  SequentialState seq(net, s);
  const bool changed = seq.macro_step(rng);
  return {seq.state(), changed};
}

SequentialState::SequentialState(const Network &net, State initial)
    : net_(&net), order_(net.size()) {
  std::iota(order_.begin(), order_.end(), 0U);
  reset(std::move(initial));
}

void SequentialState::reset(State s) {
  assert(s.size() == net_->size());
  state_ = std::move(s);
  const Formula &f = net_->formula();
  true_count_.assign(f.num_clauses(), 0);
  unsat_ = 0;
  for (std::size_t j = 0; j < f.num_clauses(); ++j) {
    for (const Literal lit : f.clause(j))
      true_count_[j] += lit.satisfied_by(state_);
    unsat_ += true_count_[j] == 0;
  }
}

bool SequentialState::node_value(std::size_t i) const {
  const NodeFunction &node = net_->node(i);
  for (ClauseIndex j : node.pos_clauses)
    if (true_count_[j] == 0)
      return true;
  if (!state_[i])
    return false;
  for (ClauseIndex j : node.neg_clauses)
    if (true_count_[j] == 0)
      return false;
  return true;
}

void SequentialState::flip(std::size_t i) {
  const NodeFunction &node = net_->node(i);
  const bool now_true = !state_[i];
  state_.flip(i);
  // Clauses where x_i's literal becomes true gain one; the others lose one.
  const auto &gaining = now_true ? node.pos_clauses : node.neg_clauses;
  const auto &losing = now_true ? node.neg_clauses : node.pos_clauses;
  for (ClauseIndex j : gaining)
    if (true_count_[j]++ == 0)
      --unsat_;
  for (ClauseIndex j : losing)
    if (--true_count_[j] == 0)
      ++unsat_;
}

bool SequentialState::update(std::size_t i) {
  if (node_value(i) == state_[i])
    return false;
  flip(i);
  return true;
}

bool SequentialState::macro_step(Rng &rng) {
  rng.shuffle(std::span<std::uint32_t>(order_));
  return macro_step(order_);
}

bool SequentialState::macro_step(std::span<const std::uint32_t> order) {
  bool changed = false;
  for (std::uint32_t i : order)
    changed |= update(i);
  return changed;
}

} // namespace bnsat
