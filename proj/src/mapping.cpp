#include "bnsat/mapping.hpp"

#include <algorithm>
#include <cassert>
#include <set>

namespace bnsat {

std::size_t NodeFunction::in_degree(const Formula &f) const {
  std::set<Var> inputs;
  for (const auto *set : {&pos_clauses, &neg_clauses})
    for (ClauseIndex j : *set)
      for (const Literal lit : f.clause(j))
        inputs.insert(lit.var());
  return inputs.size();
}

Network compile(Formula f) {
  Network net(std::move(f));
  const Formula &formula = net.formula_;
  net.nodes_.resize(formula.num_vars());
  for (std::size_t i = 0; i < net.nodes_.size(); ++i)
    net.nodes_[i].var = i;
  for (std::size_t j = 0; j < formula.num_clauses(); ++j) {
    for (const Literal lit : formula.clause(j)) {
      NodeFunction &node = net.nodes_[lit.index()];
      (lit.positive() ? node.pos_clauses : node.neg_clauses)
          .push_back(static_cast<ClauseIndex>(j));
      ++net.build_cost_;
    }
  }
  return net;
}

bool eval_node(const Network &net, std::size_t i, const State &s) {
  assert(i < net.size());
  const NodeFunction &node = net.node(i);
  const Formula &f = net.formula();
  const bool all_pos_sat =
      std::all_of(node.pos_clauses.begin(), node.pos_clauses.end(),
                  [&](ClauseIndex j) { return evaluate_clause(f, j, s); });
  if (!all_pos_sat)
    return true;
  if (!s[i])
    return false;
  return std::all_of(node.neg_clauses.begin(), node.neg_clauses.end(),
                     [&](ClauseIndex j) { return evaluate_clause(f, j, s); });
}

bool eval_node_with(const NodeFunction &node, const State &s,
                    const std::vector<std::uint8_t> &clause_values) {
  for (ClauseIndex j : node.pos_clauses)
    if (!clause_values[j])
      return true;
  if (!s[node.var])
    return false;
  for (ClauseIndex j : node.neg_clauses)
    if (!clause_values[j])
      return false;
  return true;
}

std::vector<std::uint8_t> clause_values(const Formula &f, const State &s) {
  std::vector<std::uint8_t> values(f.num_clauses());
  for (std::size_t j = 0; j < values.size(); ++j)
    values[j] = evaluate_clause(f, j, s);
  return values;
}

State eval_all(const Network &net, const State &s) {
  assert(s.size() == net.size());
  const auto values = clause_values(net.formula(), s);
  State next(s.size());
  for (const NodeFunction &node : net.nodes())
    next.set(node.var, eval_node_with(node, s, values));
  return next;
}

bool is_fixed_point(const Network &net, const State &s) {
  return eval_all(net, s) == s;
}

std::string describe_node(const NodeFunction &node) {
  const std::string x = "x" + std::to_string(node.var + 1);
  std::string keep;
  if (node.neg_clauses.empty()) {
    keep = x;
  } else {
    keep = "(";
    for (ClauseIndex j : node.neg_clauses)
      keep += "c" + std::to_string(j + 1) + " & ";
    keep += x + ")";
  }
  std::string out = "F" + std::to_string(node.var + 1) + " = " + keep;
  for (ClauseIndex j : node.pos_clauses)
    out += " | !c" + std::to_string(j + 1);
  return out;
}

std::string describe(const Network &net) {
  std::string out;
  for (const NodeFunction &node : net.nodes())
    out += describe_node(node) + '\n';
  return out;
}

} // namespace bnsat
