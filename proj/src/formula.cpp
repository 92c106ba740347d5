#include "bnsat/formula.hpp"

#include <algorithm>
#include <cassert>
#include <cstdlib>

namespace bnsat {

State State::from_bits(std::string_view bits) {
  State s(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] != '0' && bits[i] != '1')
      throw std::invalid_argument("state bitstring may only hold 0 and 1");
    s.bits_[i] = bits[i] == '1';
  }
  return s;
}

State State::from_index(std::size_t n, std::uint64_t index) {
  assert(n <= 64);
  State s(n);
  for (std::size_t i = 0; i < n; ++i)
    s.bits_[i] = (index >> i) & 1U;
  return s;
}

std::uint64_t State::to_index() const {
  assert(bits_.size() <= 64);
  std::uint64_t index = 0;
  for (std::size_t i = 0; i < bits_.size(); ++i)
    index |= static_cast<std::uint64_t>(bits_[i]) << i;
  return index;
}

std::string State::to_string() const {
  std::string out(bits_.size(), '0');
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i])
      out[i] = '1';
  return out;
}

std::size_t State::distance(const State &other) const {
  assert(size() == other.size());
  std::size_t d = 0;
  for (std::size_t i = 0; i < bits_.size(); ++i)
    d += bits_[i] != other.bits_[i];
  return d;
}

std::size_t State::hash() const {
  // FNV-1a over packed 64-bit words.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  std::uint64_t word = 0;
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    word |= static_cast<std::uint64_t>(bits_[i]) << (i & 63);
    if ((i & 63) == 63 || i + 1 == bits_.size()) {
      h ^= word;
      h *= 0x100000001b3ULL;
      word = 0;
    }
  }
  return static_cast<std::size_t>(h ^ bits_.size());
}

Literal Literal::from_dimacs(int value) {
  if (value == 0)
    throw FormulaError("literal 0 is the clause terminator, not a literal");
  return {static_cast<Var>(std::abs(value)), value > 0};
}

Formula::Formula(std::size_t num_vars, std::vector<Clause> clauses,
                 TautologyPolicy policy, std::string source_name)
    : num_vars_(num_vars), source_name_(std::move(source_name)) {
  if (num_vars_ == 0)
    throw FormulaError("formula must have at least one variable");
  clauses_.reserve(clauses.size());
  for (std::size_t j = 0; j < clauses.size(); ++j) {
    Clause &raw = clauses[j];
    if (raw.empty())
      throw FormulaError("empty clause at index " + std::to_string(j));
    Clause cleaned;
    cleaned.reserve(raw.size());
    bool tautology = false;
    for (const Literal lit : raw) {
      if (lit.var() == 0 || lit.var() > num_vars_)
        throw FormulaError("literal " + std::to_string(lit.to_dimacs()) +
                           " out of range 1.." + std::to_string(num_vars_) +
                           " in clause " + std::to_string(j));
      if (std::find(cleaned.begin(), cleaned.end(), lit) != cleaned.end())
        continue;
      if (std::find(cleaned.begin(), cleaned.end(), lit.negated()) !=
          cleaned.end())
        tautology = true;
      cleaned.push_back(lit);
    }
    if (tautology) {
      if (policy == TautologyPolicy::reject)
        throw FormulaError("tautological clause at index " +
                           std::to_string(j));
      ++dropped_tautologies_;
      continue;
    }
    total_literals_ += cleaned.size();
    max_width_ = std::max(max_width_, cleaned.size());
    clauses_.push_back(std::move(cleaned));
  }
}

Formula Formula::from_dimacs_clauses(std::size_t num_vars,
                                     const std::vector<std::vector<int>> &cls,
                                     TautologyPolicy policy) {
  std::vector<Clause> clauses;
  clauses.reserve(cls.size());
  for (const auto &c : cls) {
    Clause clause;
    for (int v : c)
      clause.push_back(Literal::from_dimacs(v));
    clauses.push_back(std::move(clause));
  }
  return Formula(num_vars, std::move(clauses), policy);
}

bool Formula::equivalent(const Formula &other) const {
  if (num_vars_ != other.num_vars_ || clauses_.size() != other.clauses_.size())
    return false;
  auto canonical = [](const std::vector<Clause> &cs) {
    std::vector<Clause> out = cs;
    for (auto &c : out)
      std::sort(c.begin(), c.end());
    std::sort(out.begin(), out.end());
    return out;
  };
  return canonical(clauses_) == canonical(other.clauses_);
}

bool evaluate_clause(const Formula &f, std::size_t j, const State &s) {
  assert(j < f.num_clauses());
  assert(s.size() == f.num_vars());
  for (const Literal lit : f.clause(j))
    if (lit.satisfied_by(s))
      return true;
  return false;
}

FormulaEvaluation evaluate_formula(const Formula &f, const State &s) {
  if (s.size() != f.num_vars())
    throw std::invalid_argument("state length does not match variable count");
  FormulaEvaluation result;
  for (std::size_t j = 0; j < f.num_clauses(); ++j) {
    if (!evaluate_clause(f, j, s))
      result.unsat_indices.push_back(j);
  }
  result.unsat_count = result.unsat_indices.size();
  result.satisfied = result.unsat_count == 0;
  return result;
}

bool satisfies(const Formula &f, const State &s) {
  if (s.size() != f.num_vars())
    throw std::invalid_argument("state length does not match variable count");
  for (std::size_t j = 0; j < f.num_clauses(); ++j)
    if (!evaluate_clause(f, j, s))
      return false;
  return true;
}

} // namespace bnsat
