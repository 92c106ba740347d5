#pragma once

#include "bnsat/formula.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace bnsat {

using ClauseIndex = std::uint32_t;

/// Update function of one node, kept as the two clause-index sets
///
///   F_i = (x_i ∧ And[neg_clauses]) ∨ ¬And[pos_clauses]
///
/// with And over an empty set equal to 1. pos_clauses holds the clauses
/// containing x_i, neg_clauses those containing ¬x_i. Both are sorted and
/// disjoint.
struct NodeFunction {
  std::size_t var = 0; ///< 0-based position
  std::vector<ClauseIndex> pos_clauses;
  std::vector<ClauseIndex> neg_clauses;

  /// In-degree of the node: distinct variables appearing in its clauses.
  std::size_t in_degree(const Formula &f) const;

  friend bool operator==(const NodeFunction &, const NodeFunction &) = default;
};

/// Boolean network compiled from a formula; one node per variable. Its fixed
/// points are exactly the formula's satisfying assignments.
class Network {
public:
  const Formula &formula() const { return formula_; }
  std::size_t size() const { return nodes_.size(); }
  const NodeFunction &node(std::size_t i) const { return nodes_[i]; }
  const std::vector<NodeFunction> &nodes() const { return nodes_; }

  /// Literal occurrences visited by compile; equals the formula's total
  /// literal count.
  std::size_t build_cost() const { return build_cost_; }

  friend bool operator==(const Network &a, const Network &b) {
    return a.formula_ == b.formula_ && a.nodes_ == b.nodes_;
  }

private:
  friend Network compile(Formula f);
  explicit Network(Formula f) : formula_(std::move(f)) {}

  Formula formula_;
  std::vector<NodeFunction> nodes_;
  std::size_t build_cost_ = 0;
};

/// One pass over all clause literals.
Network compile(Formula f);

/// F_i(s), computing only the clause values node i reads.
bool eval_node(const Network &net, std::size_t i, const State &s);

/// F_i given precomputed clause values c_j(s).
bool eval_node_with(const NodeFunction &node, const State &s,
                    const std::vector<std::uint8_t> &clause_values);

/// c_j(s) for every clause.
std::vector<std::uint8_t> clause_values(const Formula &f, const State &s);

/// Synchronous image (F_1(s), ..., F_n(s)); clause values computed once.
State eval_all(const Network &net, const State &s);

bool is_fixed_point(const Network &net, const State &s);

/// Readable listing, one line per node, e.g. `F1 = (c2 & x1) | !c1`.
std::string describe(const Network &net);
std::string describe_node(const NodeFunction &node);

} // namespace bnsat
