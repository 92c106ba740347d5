#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bnsat {

/// Variables are numbered 1..n in literals and DIMACS text, and 0..n-1 as
/// positions in a State.
using Var = std::uint32_t;

class FormulaError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Assignment of n booleans. Doubles as the network state x and the truth
/// assignment T; position i holds x_{i+1}.
///
/// Integer index encoding: bit i of the index is position i (little-endian by
/// variable order). Bitstrings print x_1 first, so (1,1,0) prints "110" and
/// has index 3.
class State {
public:
  State() = default;
  explicit State(std::size_t n, bool value = false) : bits_(n, value) {}

  static State from_bits(std::string_view bits);
  static State from_index(std::size_t n, std::uint64_t index);

  std::size_t size() const { return bits_.size(); }
  bool operator[](std::size_t i) const { return bits_[i] != 0; }
  void set(std::size_t i, bool value) { bits_[i] = value; }
  void flip(std::size_t i) { bits_[i] ^= 1; }

  std::uint64_t to_index() const;
  std::string to_string() const;

  /// Hamming distance; both states must have the same length.
  std::size_t distance(const State &other) const;

  friend bool operator==(const State &, const State &) = default;
  friend auto operator<=>(const State &, const State &) = default;

  std::size_t hash() const;

private:
  std::vector<std::uint8_t> bits_;
};

class Literal {
public:
  constexpr Literal(Var var, bool positive) : var_(var), positive_(positive) {}

  /// Signed DIMACS integer; must be non-zero.
  static Literal from_dimacs(int value);

  constexpr Var var() const { return var_; }
  constexpr std::size_t index() const { return var_ - 1; }
  constexpr bool positive() const { return positive_; }
  constexpr Literal negated() const { return {var_, !positive_}; }
  int to_dimacs() const {
    return positive_ ? static_cast<int>(var_) : -static_cast<int>(var_);
  }

  bool satisfied_by(const State &s) const { return s[index()] == positive_; }

  friend constexpr bool operator==(Literal, Literal) = default;
  friend constexpr auto operator<=>(Literal, Literal) = default;

private:
  Var var_;
  bool positive_;
};

using Clause = std::vector<Literal>;

enum class TautologyPolicy { reject, drop };

/// CNF instance c_1 ∧ ... ∧ c_m over n variables.
///
/// Construction enforces the clause invariants: no empty clause, every
/// variable in 1..n, duplicate literals collapsed (first occurrence kept),
/// and tautologies rejected or dropped per policy. A Formula is immutable
/// afterwards.
class Formula {
public:
  Formula(std::size_t num_vars, std::vector<Clause> clauses,
          TautologyPolicy policy = TautologyPolicy::reject,
          std::string source_name = {});

  /// Convenience for tests and examples: clauses as signed DIMACS integers.
  static Formula from_dimacs_clauses(std::size_t num_vars,
                                     const std::vector<std::vector<int>> &cls,
                                     TautologyPolicy policy =
                                         TautologyPolicy::reject);

  std::size_t num_vars() const { return num_vars_; }
  std::size_t num_clauses() const { return clauses_.size(); }
  const std::vector<Clause> &clauses() const { return clauses_; }
  const Clause &clause(std::size_t j) const { return clauses_[j]; }
  const std::string &source_name() const { return source_name_; }
  std::size_t dropped_tautologies() const { return dropped_tautologies_; }
  std::size_t total_literals() const { return total_literals_; }
  std::size_t max_clause_width() const { return max_width_; }

  /// Same n and the same multiset of clauses, ignoring clause and literal
  /// order. operator== is the strict, order-sensitive comparison.
  bool equivalent(const Formula &other) const;

  friend bool operator==(const Formula &a, const Formula &b) {
    return a.num_vars_ == b.num_vars_ && a.clauses_ == b.clauses_;
  }

private:
  std::size_t num_vars_;
  std::vector<Clause> clauses_;
  std::string source_name_;
  std::size_t dropped_tautologies_ = 0;
  std::size_t total_literals_ = 0;
  std::size_t max_width_ = 0;
};

/// Clause value c_j(s).
bool evaluate_clause(const Formula &f, std::size_t j, const State &s);

struct FormulaEvaluation {
  bool satisfied = true;
  std::size_t unsat_count = 0;
  std::vector<std::size_t> unsat_indices;
};

/// Full evaluation; unsat_indices is the set of falsified clauses.
FormulaEvaluation evaluate_formula(const Formula &f, const State &s);

/// Early-exit satisfaction test.
bool satisfies(const Formula &f, const State &s);

} // namespace bnsat

template <> struct std::hash<bnsat::State> {
  std::size_t operator()(const bnsat::State &s) const noexcept {
    return s.hash();
  }
};
