#include "bnsat/generator.hpp"

#include "bnsat/rng.hpp"

#include <algorithm>
#include <stdexcept>

namespace bnsat {

void GenSpec::validate() const {
  if (num_vars < 1)
    throw std::invalid_argument("generator: need at least one variable");
  if (num_clauses < 1)
    throw std::invalid_argument("generator: need at least one clause");
  if (clause_width < 1 || clause_width > num_vars)
    throw std::invalid_argument(
        "generator: clause width must lie in 1..num_vars");
}

namespace {

Clause draw_clause(Rng &rng, std::size_t n, std::size_t width) {
  Clause clause;
  clause.reserve(width);
  while (clause.size() < width) {
    const auto var = static_cast<Var>(rng.below(n) + 1);
    const bool taken =
        std::any_of(clause.begin(), clause.end(),
                    [var](Literal lit) { return lit.var() == var; });
    if (taken)
      continue;
    clause.emplace_back(var, rng.coin());
  }
  return clause;
}

} // namespace

GeneratedInstance generate(const GenSpec &spec) {
  spec.validate();
  Rng rng(spec.seed);
  std::optional<State> hidden;
  if (spec.forced) {
    hidden.emplace(spec.num_vars);
    for (std::size_t i = 0; i < spec.num_vars; ++i)
      hidden->set(i, rng.coin());
  }

  std::vector<Clause> clauses;
  clauses.reserve(spec.num_clauses);
  for (std::size_t j = 0; j < spec.num_clauses; ++j) {
    Clause clause = draw_clause(rng, spec.num_vars, spec.clause_width);
    if (hidden) {
      while (std::none_of(clause.begin(), clause.end(), [&](Literal lit) {
        return lit.satisfied_by(*hidden);
      }))
        clause = draw_clause(rng, spec.num_vars, spec.clause_width);
    }
    clauses.push_back(std::move(clause));
  }
  return {Formula(spec.num_vars, std::move(clauses)), std::move(hidden)};
}

} // namespace bnsat
