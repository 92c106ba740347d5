#include "bnsat/dimacs.hpp"
#include "bnsat/formula.hpp"
#include "bnsat/generator.hpp"
#include "corpus.hpp"

#include <doctest.h>

#include <cmath>

using namespace bnsat;
using namespace bnsat::testing;

TEST_CASE("state index encoding is little-endian by variable") {
  const State s = State::from_bits("110");
  CHECK(s.to_index() == 3);
  CHECK(State::from_index(3, 3) == s);
  CHECK(State::from_index(3, 4).to_string() == "001");
  CHECK(s.distance(State::from_bits("011")) == 2);
  CHECK_THROWS_AS(State::from_bits("012"), std::invalid_argument);
}

TEST_CASE("parse_dimacs reads the three-solution formula") {
  const Formula f = parse_dimacs("c example\np cnf 3 3\n1 -2 0\n-1 2 0\n2 3 0\n");
  CHECK(f.num_vars() == 3);
  CHECK(f.num_clauses() == 3);
  CHECK(f == three_solution_formula());
}

TEST_CASE("parse_dimacs accepts a single unit clause") {
  const Formula f = parse_dimacs("p cnf 1 1\n1 0\n");
  REQUIRE(f.num_clauses() == 1);
  CHECK(f.clause(0) == Clause{Literal(1, true)});
}

TEST_CASE("parse_dimacs clause layout is free-form") {
  const Formula f = parse_dimacs("p cnf 3 2\n1 -2\n 3 0 -1 0\n%\n0\n");
  CHECK(f.num_clauses() == 2);
  CHECK(f.clause(0).size() == 3);
}

TEST_CASE("parse_dimacs errors") {
  SUBCASE("tautology rejected by default") {
    CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n1 1 -1 0\n"), FormulaError);
  }
  SUBCASE("tautology dropped on request") {
    DimacsOptions opts;
    opts.tautologies = TautologyPolicy::drop;
    const auto r = read_dimacs("p cnf 2 2\n1 1 -1 0\n2 0\n", opts);
    CHECK(r.formula.num_clauses() == 1);
    CHECK(r.formula.dropped_tautologies() == 1);
    CHECK(r.declared_clauses == 2);
  }
  SUBCASE("empty clause") {
    CHECK_THROWS_WITH_AS(parse_dimacs("p cnf 2 2\n1 0\n0\n"),
                         doctest::Contains("empty clause"), FormulaError);
  }
  SUBCASE("out of range literal") {
    CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n1 3 0\n"), FormulaError);
  }
  SUBCASE("malformed header") {
    CHECK_THROWS_AS(parse_dimacs("p dnf 2 1\n1 0\n"), FormulaError);
    CHECK_THROWS_AS(parse_dimacs("p cnf x 1\n1 0\n"), FormulaError);
    CHECK_THROWS_AS(parse_dimacs("p cnf 0 0\n"), FormulaError);
    CHECK_THROWS_AS(parse_dimacs("1 2 0\n"), FormulaError);
  }
  SUBCASE("clause count mismatch is strict by default") {
    CHECK_THROWS_AS(parse_dimacs("p cnf 2 2\n1 0\n"), FormulaError);
    DimacsOptions opts;
    opts.clause_count = ClauseCountPolicy::lenient;
    CHECK(parse_dimacs("p cnf 2 2\n1 0\n", opts).num_clauses() == 1);
  }
  SUBCASE("unterminated clause") {
    CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n1 2\n"), FormulaError);
  }
  SUBCASE("garbage token") {
    CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n1 x 0\n"), FormulaError);
  }
}

TEST_CASE("duplicate literals are collapsed") {
  const Formula f = parse_dimacs("p cnf 2 1\n1 1 2 1 0\n");
  CHECK(f.clause(0) == Clause{Literal(1, true), Literal(2, true)});
}

TEST_CASE("formula construction rejects invalid clauses") {
  CHECK_THROWS_AS(Formula(0, {}), FormulaError);
  CHECK_THROWS_AS(Formula(2, {Clause{}}), FormulaError);
  CHECK_THROWS_AS(Formula::from_dimacs_clauses(2, {{1, -3}}), FormulaError);
  CHECK_THROWS_AS(Formula::from_dimacs_clauses(2, {{1, -1}}), FormulaError);
}

TEST_CASE("write_dimacs") {
  SUBCASE("empty body") {
    const std::string text = write_dimacs(no_clauses(4));
    CHECK(text == "p cnf 4 0\n");
    CHECK(parse_dimacs(text).num_clauses() == 0);
  }
  SUBCASE("round trip of the fixtures") {
    for (const Formula &f : {three_solution_formula(), period_two_formula(),
                             two_solution_formula()})
      CHECK(parse_dimacs(write_dimacs(f)).equivalent(f));
  }
  SUBCASE("round trip of a generated instance") {
    const Formula f = generate({50, 100, 3, true, 7}).formula;
    CHECK(parse_dimacs(write_dimacs(f)) == f);
  }
}

TEST_CASE("round trip property over random formulas") {
  Rng rng(99);
  for (int k = 0; k < 200; ++k) {
    const std::size_t n = 1 + rng.below(30);
    const Formula f = random_formula(rng, n, rng.below(60), 5);
    const Formula back = parse_dimacs(write_dimacs(f));
    REQUIRE(back.equivalent(f));
  }
}

TEST_CASE("evaluate_clause") {
  const Formula f = three_solution_formula();
  CHECK(evaluate_clause(f, 0, State::from_bits("000")));
  CHECK(evaluate_clause(f, 2, State::from_bits("010")));
  const Formula g = period_two_formula();
  CHECK_FALSE(evaluate_clause(g, 0, State::from_bits("000")));
}

TEST_CASE("evaluate_formula") {
  const Formula f = three_solution_formula();
  CHECK(evaluate_formula(f, State::from_bits("001")).satisfied);

  const auto e = evaluate_formula(f, State::from_bits("100"));
  CHECK_FALSE(e.satisfied);
  // 100 falsifies (¬x1 ∨ x2) and (x2 ∨ x3).
  CHECK(e.unsat_indices == std::vector<std::size_t>{1, 2});
  CHECK(e.unsat_count == 2);

  const auto empty = evaluate_formula(no_clauses(3), State::from_bits("101"));
  CHECK(empty.satisfied);
  CHECK(empty.unsat_indices.empty());

  CHECK_THROWS_AS(evaluate_formula(f, State(2)), std::invalid_argument);
}

TEST_CASE("evaluation agrees with a naive reference evaluator") {
  // Reference: clause is true iff some literal's DIMACS sign matches the bit.
  Rng rng(5);
  for (int k = 0; k < 300; ++k) {
    const std::size_t n = 1 + rng.below(12);
    const Formula f = random_formula(rng, n, rng.below(25), 4);
    const State s = random_state(rng, n);
    bool all = true;
    std::vector<std::size_t> unsat;
    for (std::size_t j = 0; j < f.num_clauses(); ++j) {
      bool any = false;
      for (const Literal lit : f.clause(j)) {
        const int d = lit.to_dimacs();
        const bool bit = s[static_cast<std::size_t>(std::abs(d)) - 1];
        any = any || (d > 0 ? bit : !bit);
      }
      CHECK(evaluate_clause(f, j, s) == any);
      if (!any)
        unsat.push_back(j);
      all = all && any;
    }
    const auto e = evaluate_formula(f, s);
    CHECK(e.satisfied == all);
    CHECK(e.satisfied == e.unsat_indices.empty());
    CHECK(e.unsat_indices == unsat);
    CHECK(satisfies(f, s) == all);
  }
}

TEST_CASE("generate") {
  SUBCASE("forced instance is satisfied by its hidden assignment") {
    const auto inst = generate({3, 2, 3, true, 11});
    REQUIRE(inst.hidden);
    CHECK(evaluate_formula(inst.formula, *inst.hidden).satisfied);
  }
  SUBCASE("deterministic in the seed") {
    const GenSpec spec{40, 170, 3, true, 123};
    CHECK(generate(spec).formula == generate(spec).formula);
    CHECK(generate(spec).hidden == generate(spec).hidden);
    GenSpec other = spec;
    other.seed = 124;
    CHECK_FALSE(generate(spec).formula == generate(other).formula);
  }
  SUBCASE("unforced has no hidden assignment") {
    CHECK_FALSE(generate({10, 20, 3, false, 1}).hidden);
  }
  SUBCASE("clause shape") {
    const auto f = generate({20, 80, 4, false, 3}).formula;
    CHECK(f.num_clauses() == 80);
    for (const Clause &c : f.clauses())
      CHECK(c.size() == 4); // distinct variables, so nothing collapsed
  }
  SUBCASE("invalid specs") {
    CHECK_THROWS_AS(generate({2, 5, 3, false, 0}), std::invalid_argument);
    CHECK_THROWS_AS(generate({5, 0, 3, false, 0}), std::invalid_argument);
    CHECK_THROWS_AS(generate({0, 1, 0, false, 0}), std::invalid_argument);
  }
}

TEST_CASE("forced generation soundness over a corpus") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const std::size_t n = 3 + seed % 40;
    const auto inst = generate({n, 1 + (seed * 7) % (5 * n), 3, true, seed});
    REQUIRE(inst.hidden);
    REQUIRE(satisfies(inst.formula, *inst.hidden));
  }
}

TEST_CASE("literal sign balance is near one half") {
  std::size_t positive = 0, total = 0;
  for (std::uint64_t seed = 0; total < 10'000; ++seed) {
    const auto f = generate({50, 100, 3, true, seed}).formula;
    for (const Clause &c : f.clauses())
      for (const Literal lit : c) {
        positive += lit.positive();
        ++total;
      }
  }
  const double frac = static_cast<double>(positive) / static_cast<double>(total);
  CHECK(frac == doctest::Approx(0.5).epsilon(0.1)); // 0.5 ± 0.05
  CHECK(std::abs(frac - 0.5) <= 0.05);
}

TEST_CASE("model_line") {
  CHECK(model_line(State::from_bits("101")) == "v 1 -2 3 0");
}
