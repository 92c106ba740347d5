#include "bnsat/analysis.hpp"
#include "bnsat/serialize.hpp"
#include "corpus.hpp"

#include <doctest.h>

#include <cmath>
#include <map>
#include <numeric>
#include <regex>
#include <sstream>

using namespace bnsat;
using namespace bnsat::testing;

namespace {

StateIndex idx(const char *bits) {
  return static_cast<StateIndex>(State::from_bits(bits).to_index());
}

std::string str(std::size_t n, StateIndex s) {
  return State::from_index(n, s).to_string();
}

std::map<std::string, std::string> successor_table(const TransitionGraph &g) {
  std::map<std::string, std::string> out;
  for (std::size_t s = 0; s < g.num_states(); ++s)
    out[str(g.n, static_cast<StateIndex>(s))] = str(g.n, g.successor[s]);
  return out;
}

} // namespace

TEST_CASE("transition graph of the period-two formula") {
  const auto g = build_transition_graph(compile(period_two_formula()));
  CHECK(g.num_states() == 8);
  const std::map<std::string, std::string> expected{
      {"000", "111"}, {"001", "110"}, {"010", "111"}, {"011", "110"},
      {"100", "111"}, {"101", "000"}, {"110", "110"}, {"111", "010"}};
  CHECK(successor_table(g) == expected);
}

TEST_CASE("transition graph of the three-solution formula") {
  const auto g = build_transition_graph(compile(three_solution_formula()));
  const std::map<std::string, std::string> expected{
      {"000", "011"}, {"001", "001"}, {"010", "100"}, {"011", "101"},
      {"100", "011"}, {"101", "011"}, {"110", "110"}, {"111", "111"}};
  CHECK(successor_table(g) == expected);
}

TEST_CASE("classify the period-two formula") {
  const auto r = classify(build_transition_graph(compile(period_two_formula())));
  REQUIRE(r.attractors.size() == 2);
  CHECK(r.fixed_points() == std::vector<StateIndex>{idx("110")});
  const auto cycles = r.cycles();
  REQUIRE(cycles.size() == 1);
  CHECK(cycles[0]->period() == 2);
  CHECK(cycles[0]->basin_size == 5);
  std::vector<std::string> members;
  for (StateIndex s : cycles[0]->states)
    members.push_back(str(3, s));
  CHECK(members == std::vector<std::string>{"010", "111"});
  for (const Attractor &a : r.attractors)
    if (a.is_fixed_point())
      CHECK(a.basin_size == 3);

  const auto j = to_json(r);
  CHECK(j["fixed_points"].size() == 1);
  CHECK(j["fixed_points"][0]["state"] == "110");
  CHECK(j["fixed_points"][0]["basin_size"] == 3);
  CHECK(j["cycles"][0]["period"] == 2);
  CHECK(j["cycles"][0]["basin_size"] == 5);
  CHECK(j["num_states"] == 8);
}

TEST_CASE("classify the three-solution formula") {
  const auto r =
      classify(build_transition_graph(compile(three_solution_formula())));
  CHECK(r.fixed_points() ==
        std::vector<StateIndex>{idx("110"), idx("001"), idx("111")});
  REQUIRE(r.cycles().size() == 1);
  CHECK(r.cycles()[0]->basin_size == 5);
  for (const Attractor &a : r.attractors)
    if (a.is_fixed_point())
      CHECK(a.basin_size == 1);
}

TEST_CASE("empty formula gives the identity graph") {
  const auto g = build_transition_graph(compile(no_clauses(4)));
  for (std::size_t s = 0; s < 16; ++s)
    CHECK(g.successor[s] == s);
  const auto r = classify(g);
  CHECK(r.attractors.size() == 16);
  for (const Attractor &a : r.attractors)
    CHECK(a.basin_size == 1);
}

TEST_CASE("classify partitions the state space") {
  for (const Formula &f : small_corpus(61, 80, 10)) {
    const auto g = build_transition_graph(compile(f));
    const auto r = classify(g);
    std::size_t total = 0;
    std::vector<std::size_t> counted(r.attractors.size(), 0);
    for (std::size_t s = 0; s < g.num_states(); ++s)
      ++counted[r.basin_of[s]];
    for (std::size_t a = 0; a < r.attractors.size(); ++a) {
      const Attractor &att = r.attractors[a];
      total += att.basin_size;
      CHECK(counted[a] == att.basin_size);
      for (std::size_t k = 0; k < att.states.size(); ++k) {
        const StateIndex s = att.states[k];
        CHECK(r.basin_of[s] == a);
        CHECK(g.successor[s] == att.states[(k + 1) % att.states.size()]);
      }
      CHECK(att.states.front() ==
            *std::min_element(att.states.begin(), att.states.end()));
    }
    CHECK(total == g.num_states());
    for (std::size_t s = 0; s < g.num_states(); ++s)
      CHECK(r.basin_of[g.successor[s]] == r.basin_of[s]);
    CHECK(r.fixed_points() == brute_force_solutions(f));
  }
}

TEST_CASE("brute-force solutions") {
  CHECK(brute_force_solutions(two_solution_formula()) ==
        std::vector<StateIndex>{idx("000"), idx("011")});
  CHECK(brute_force_solutions(period_two_formula()) ==
        std::vector<StateIndex>{idx("110")});
  CHECK(brute_force_solutions(contradiction()).empty());
}

TEST_CASE("fixed points versus models over random formulas") {
  CHECK(check_prop1(three_solution_formula()).ok);
  CHECK(check_prop1(period_two_formula()).ok);
  for (const Formula &f : small_corpus(500, 500, 10)) {
    const auto r = check_prop1(f);
    REQUIRE(r.ok);
    CHECK_FALSE(r.counterexample);
  }
}

TEST_CASE("cap violations") {
  const Formula wide = no_clauses(21);
  CHECK_THROWS_AS(build_transition_graph(compile(wide)), CapExceeded);
  CHECK_THROWS_AS(brute_force_solutions(wide), CapExceeded);
  const Network fifteen = compile(no_clauses(15));
  CHECK_THROWS_AS(build_markov_chain(fifteen, PbnChain{0.2}), CapExceeded);
  CHECK_NOTHROW(build_markov_chain(fifteen, AbnMicroChain{}));
  try {
    build_transition_graph(compile(no_clauses(6)), 5);
    FAIL("expected CapExceeded");
  } catch (const CapExceeded &e) {
    CHECK(e.n() == 6);
    CHECK(e.cap() == 5);
    CHECK(std::string(e.what()).find('5') != std::string::npos);
  }
}

TEST_CASE("pbn chain probabilities from 101 of the period-two formula") {
  const auto chain =
      build_markov_chain(compile(period_two_formula()), PbnChain{0.2});
  const StateIndex s = idx("101");
  CHECK(chain.rows[s].size() == 4);
  CHECK(chain.probability(s, idx("101")) == doctest::Approx(0.64).epsilon(1e-12));
  CHECK(chain.probability(s, idx("001")) == doctest::Approx(0.16).epsilon(1e-12));
  CHECK(chain.probability(s, idx("100")) == doctest::Approx(0.16).epsilon(1e-12));
  CHECK(chain.probability(s, idx("000")) == doctest::Approx(0.04).epsilon(1e-12));
  CHECK(chain.probability(s, idx("111")) == 0.0);
  // The single-flip edge exceeds the p(1-p)^(n-1) lower bound.
  const double bound = 0.2 * 0.8 * 0.8;
  CHECK(chain.probability(s, idx("001")) >= bound);
  CHECK(chain.probability(s, idx("001")) > bound + 0.03);
}

TEST_CASE("single-flip probabilities over a corpus") {
  for (const Formula &f : small_corpus(71, 40, 8)) {
    const Network net = compile(f);
    const std::size_t n = f.num_vars();
    const double p = 0.3;
    const auto pbn = build_markov_chain(net, PbnChain{p});
    const auto abn = build_markov_chain(net, AbnMicroChain{});
    for (StateIndex s = 0; s < (1u << n); ++s) {
      const State st = State::from_index(n, s);
      const State t = eval_all(net, st);
      const std::size_t d = st.distance(t);
      for (std::size_t i = 0; i < n; ++i) {
        const StateIndex flipped = s ^ (StateIndex{1} << i);
        if (t[i] != st[i]) {
          const double exact = p * std::pow(1 - p, double(d - 1));
          CHECK(pbn.probability(s, flipped) ==
                doctest::Approx(exact).epsilon(1e-12));
          CHECK(pbn.probability(s, flipped) >=
                p * std::pow(1 - p, double(n - 1)) - 1e-15);
          CHECK(abn.probability(s, flipped) ==
                doctest::Approx(1.0 / double(n)).epsilon(1e-12));
        } else {
          CHECK(pbn.probability(s, flipped) == 0.0);
          CHECK(abn.probability(s, flipped) == 0.0);
        }
      }
      CHECK(abn.probability(s, s) ==
            doctest::Approx(double(n - d) / double(n)).epsilon(1e-12));
      CHECK(pbn.probability(s, s) ==
            doctest::Approx(std::pow(1 - p, double(d))).epsilon(1e-12));
    }
  }
}

TEST_CASE("absorbing states are exactly the models") {
  const double ps[] = {0.1, 0.2, 0.5, 0.9};
  for (const Formula &f : small_corpus(81, 60, 8)) {
    const Network net = compile(f);
    const auto sols = brute_force_solutions(f);
    std::vector<ChainKind> kinds{AbnMicroChain{}};
    for (double p : ps)
      kinds.push_back(PbnChain{p});
    for (const ChainKind &kind : kinds) {
      const auto chain = build_markov_chain(net, kind);
      CHECK(chain.max_row_error() <= 1e-12);
      for (const auto &row : chain.rows)
        for (const ChainEdge &e : row)
          CHECK(e.probability > 0.0);
      const auto res = check_absorption(chain, sols);
      CHECK(res.absorbing_mismatch.empty());
      if (sols.empty()) {
        CHECK(res.verdict == AbsorptionVerdict::ok_vacuous);
      } else {
        CHECK(res.verdict == AbsorptionVerdict::ok);
        CHECK(res.stuck_states.empty());
        CHECK(missing_repair_edges(chain, f).empty());
      }
    }
  }
}

TEST_CASE("absorption examples") {
  const Network three_sol = compile(three_solution_formula());
  const auto sols = brute_force_solutions(three_sol.formula());
  CHECK(check_absorption(build_markov_chain(three_sol, PbnChain{0.2}), sols).verdict ==
        AbsorptionVerdict::ok);
  CHECK(check_absorption(build_markov_chain(three_sol, AbnMicroChain{}), sols)
            .verdict == AbsorptionVerdict::ok);

  const auto unsat = build_markov_chain(compile(contradiction()), PbnChain{0.5});
  const auto vac = check_absorption(unsat, {});
  CHECK(vac.verdict == AbsorptionVerdict::ok_vacuous);
  CHECK(vac.passed());
  CHECK(to_string(vac.verdict) == "ok-vacuous");

  // Claiming a non-absorbing state as a solution is a failure.
  const auto bad = check_absorption(build_markov_chain(three_sol, AbnMicroChain{}),
                                    {idx("100")});
  CHECK(bad.verdict == AbsorptionVerdict::failed);
  CHECK_FALSE(bad.passed());
  CHECK(to_json(bad, 3)["verdict"] == "failed");
}

TEST_CASE("stuck states are reported") {
  // Synchronous dynamics as a degenerate chain: p = 1 keeps the period-two
  // cycle closed, so its basin never reaches the fixed point.
  const Network period_two = compile(period_two_formula());
  const auto chain = build_markov_chain(period_two, PbnChain{1.0});
  const auto res = check_absorption(chain, brute_force_solutions(period_two.formula()));
  CHECK(res.verdict == AbsorptionVerdict::failed);
  CHECK(res.absorbing_mismatch.empty());
  CHECK(res.stuck_states.size() == 5);
}

TEST_CASE("fixed points have a probability-one self loop in both chains") {
  const Network three_sol = compile(three_solution_formula());
  for (const ChainKind &kind : {ChainKind{PbnChain{0.2}}, ChainKind{AbnMicroChain{}}}) {
    const auto chain = build_markov_chain(three_sol, kind);
    for (const char *s : {"001", "110", "111"}) {
      REQUIRE(chain.rows[idx(s)].size() == 1);
      CHECK(chain.rows[idx(s)][0].to == idx(s));
      CHECK(chain.rows[idx(s)][0].probability == 1.0);
      CHECK(chain.is_absorbing(idx(s)));
    }
  }
}

TEST_CASE("DOT export of the period-two graph") {
  std::ostringstream out;
  export_dot(out, build_transition_graph(compile(period_two_formula())), "period_two");
  const std::string dot = out.str();
  CHECK(dot.rfind("digraph period_two {", 0) == 0);
  const std::regex node(R"re(s\d+ \[label="[01]{3}")re");
  const std::regex edge(R"(s\d+ -> s\d+;)");
  CHECK(std::distance(std::sregex_iterator(dot.begin(), dot.end(), node),
                      std::sregex_iterator()) == 8);
  CHECK(std::distance(std::sregex_iterator(dot.begin(), dot.end(), edge),
                      std::sregex_iterator()) == 8);
  CHECK(dot.find("s3 [label=\"110\", shape=doublecircle") != std::string::npos);
  CHECK(dot.find("s7 -> s2;") != std::string::npos);
  CHECK(dot.find("s2 -> s7;") != std::string::npos);
}

TEST_CASE("DOT export of a one-variable formula") {
  std::ostringstream out;
  export_dot(out, build_transition_graph(compile(Formula::from_dimacs_clauses(1, {{1}}))));
  CHECK(out.str() == "digraph transitions {\n"
                     "  node [shape=circle];\n"
                     "  s0 [label=\"0\"];\n"
                     "  s1 [label=\"1\", shape=doublecircle, style=filled, "
                     "fillcolor=lightgrey];\n"
                     "  s0 -> s1;\n"
                     "  s1 -> s1;\n"
                     "}\n");
}

TEST_CASE("DOT export of the three-solution PBN chain") {
  std::ostringstream out;
  export_dot(out, build_markov_chain(compile(three_solution_formula()),
                                     PbnChain{0.2}));
  const std::string dot = out.str();
  const std::regex loop(R"re(s(\d+) -> s\1 \[label="1"\])re");
  CHECK(std::distance(std::sregex_iterator(dot.begin(), dot.end(), loop),
                      std::sregex_iterator()) == 3);
  // Off the fixed points every state disagrees with its image in two or
  // three places, so edge weights are products of 0.2 and 0.8.
  for (const char *w : {"0.64", "0.16", "0.04", "0.512", "0.128", "0.032",
                        "0.008"})
    CHECK(dot.find("label=\"" + std::string(w) + "\"") != std::string::npos);
  CHECK(dot.find("doublecircle") != std::string::npos);
}
