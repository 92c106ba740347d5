#include "bnsat/analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <deque>
#include <ostream>

namespace bnsat {

CapExceeded::CapExceeded(std::size_t n, std::size_t cap)
    : std::runtime_error("exhaustive analysis supports at most " +
                         std::to_string(cap) + " variables, formula has " +
                         std::to_string(n)),
      n_(n), cap_(cap) {}

namespace {

void require_cap(std::size_t n, std::size_t cap) {
  // StateIndex is 32 bits wide.
  if (n > cap || n > 31)
    throw CapExceeded(n, std::min<std::size_t>(cap, 31));
}

StateIndex image_index(const Network &net, StateIndex s) {
  return static_cast<StateIndex>(
      eval_all(net, State::from_index(net.size(), s)).to_index());
}

} // namespace

TransitionGraph build_transition_graph(const Network &net, std::size_t cap) {
  require_cap(net.size(), cap);
  TransitionGraph graph;
  graph.n = net.size();
  graph.successor.resize(std::size_t{1} << graph.n);
  for (std::size_t s = 0; s < graph.successor.size(); ++s)
    graph.successor[s] = image_index(net, static_cast<StateIndex>(s));
  return graph;
}

std::vector<StateIndex> AttractorReport::fixed_points() const {
  std::vector<StateIndex> out;
  for (const Attractor &a : attractors)
    if (a.is_fixed_point())
      out.push_back(a.states.front());
  return out;
}

std::vector<const Attractor *> AttractorReport::cycles() const {
  std::vector<const Attractor *> out;
  for (const Attractor &a : attractors)
    if (!a.is_fixed_point())
      out.push_back(&a);
  return out;
}

AttractorReport classify(const TransitionGraph &graph) {
  const std::size_t size = graph.num_states();
  enum : std::uint8_t { unseen, on_path, done };
  std::vector<std::uint8_t> mark(size, unseen);
  std::vector<StateIndex> path;

  AttractorReport report;
  report.n = graph.n;

  // Successor-following: the first state met twice on the current walk
  // closes a new attractor.
  for (std::size_t start = 0; start < size; ++start) {
    if (mark[start] != unseen)
      continue;
    path.clear();
    auto cur = static_cast<StateIndex>(start);
    while (mark[cur] == unseen) {
      mark[cur] = on_path;
      path.push_back(cur);
      cur = graph.successor[cur];
    }
    if (mark[cur] == on_path) {
      Attractor a;
      StateIndex smallest = cur;
      for (StateIndex s = graph.successor[cur]; s != cur;
           s = graph.successor[s])
        smallest = std::min(smallest, s);
      StateIndex s = smallest;
      do {
        a.states.push_back(s);
        s = graph.successor[s];
      } while (s != smallest);
      report.attractors.push_back(std::move(a));
    }
    for (StateIndex s : path)
      mark[s] = done;
  }
  std::sort(report.attractors.begin(), report.attractors.end(),
            [](const Attractor &a, const Attractor &b) {
              return a.states.front() < b.states.front();
            });

  // Basins by reverse reachability from each attractor.
  std::vector<std::uint32_t> offset(size + 1, 0);
  for (StateIndex t : graph.successor)
    ++offset[t + 1];
  for (std::size_t i = 0; i < size; ++i)
    offset[i + 1] += offset[i];
  std::vector<StateIndex> preds(size);
  {
    std::vector<std::uint32_t> fill(offset.begin(), offset.end() - 1);
    for (std::size_t s = 0; s < size; ++s)
      preds[fill[graph.successor[s]]++] = static_cast<StateIndex>(s);
  }

  constexpr std::uint32_t none = ~0U;
  report.basin_of.assign(size, none);
  std::deque<StateIndex> queue;
  for (std::uint32_t id = 0; id < report.attractors.size(); ++id) {
    Attractor &a = report.attractors[id];
    for (StateIndex s : a.states) {
      report.basin_of[s] = id;
      queue.push_back(s);
    }
    while (!queue.empty()) {
      const StateIndex s = queue.front();
      queue.pop_front();
      ++a.basin_size;
      for (std::uint32_t k = offset[s]; k < offset[s + 1]; ++k) {
        const StateIndex p = preds[k];
        if (report.basin_of[p] == none) {
          report.basin_of[p] = id;
          queue.push_back(p);
        }
      }
    }
  }
  return report;
}

std::vector<StateIndex> brute_force_solutions(const Formula &f,
                                              std::size_t cap) {
  require_cap(f.num_vars(), cap);
  std::vector<StateIndex> out;
  const std::uint64_t size = std::uint64_t{1} << f.num_vars();
  for (std::uint64_t s = 0; s < size; ++s)
    if (satisfies(f, State::from_index(f.num_vars(), s)))
      out.push_back(static_cast<StateIndex>(s));
  return out;
}

Prop1Result check_prop1(const Formula &f, std::size_t cap) {
  require_cap(f.num_vars(), cap);
  const Network net = compile(f);
  const auto solutions = brute_force_solutions(f, cap);
  std::size_t k = 0;
  const std::uint64_t size = std::uint64_t{1} << f.num_vars();
  for (std::uint64_t s = 0; s < size; ++s) {
    const State state = State::from_index(f.num_vars(), s);
    const bool fixed = is_fixed_point(net, state);
    const bool model = k < solutions.size() && solutions[k] == s;
    if (model)
      ++k;
    if (fixed != model)
      return {false, state};
  }
  return {};
}

double MarkovChain::max_row_error() const {
  double worst = 0.0;
  for (const auto &row : rows) {
    double sum = 0.0;
    for (const ChainEdge &e : row)
      sum += e.probability;
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  return worst;
}

bool MarkovChain::is_absorbing(StateIndex s) const {
  const auto &row = rows[s];
  return row.size() == 1 && row.front().to == s &&
         std::abs(row.front().probability - 1.0) <= 1e-12;
}

double MarkovChain::probability(StateIndex from, StateIndex to) const {
  for (const ChainEdge &e : rows[from])
    if (e.to == to)
      return e.probability;
  return 0.0;
}

MarkovChain build_markov_chain(const Network &net, const ChainKind &kind,
                               std::optional<std::size_t> cap) {
  const bool pbn = std::holds_alternative<PbnChain>(kind);
  require_cap(net.size(), cap.value_or(pbn ? kPbnChainCap : kAbnChainCap));
  const std::size_t n = net.size();

  MarkovChain chain;
  chain.n = n;
  chain.kind = kind;
  chain.rows.resize(std::size_t{1} << n);

  for (std::size_t si = 0; si < chain.rows.size(); ++si) {
    const auto s = static_cast<StateIndex>(si);
    const StateIndex disagree = s ^ image_index(net, s);
    auto &row = chain.rows[si];
    if (pbn) {
      const double p = std::get<PbnChain>(kind).p;
      const int d = std::popcount(disagree);
      // Every subset of the disagreeing nodes may fire.
      StateIndex sub = disagree;
      while (true) {
        const int k = std::popcount(sub);
        const double prob = std::pow(p, k) * std::pow(1.0 - p, d - k);
        if (prob > 0.0)
          row.push_back({s ^ sub, prob});
        if (sub == 0)
          break;
        sub = (sub - 1) & disagree;
      }
    } else {
      const double each = 1.0 / static_cast<double>(n);
      double stay = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (disagree >> i & 1U)
          row.push_back({s ^ (StateIndex{1} << i), each});
        else
          stay += each;
      }
      if (stay > 0.0)
        row.push_back({s, stay});
    }
    std::sort(row.begin(), row.end(),
              [](const ChainEdge &a, const ChainEdge &b) { return a.to < b.to; });
  }
  return chain;
}

AbsorptionResult check_absorption(const MarkovChain &chain,
                                  const std::vector<StateIndex> &solutions) {
  const std::size_t size = chain.rows.size();
  std::vector<std::uint8_t> is_solution(size, 0);
  for (StateIndex s : solutions)
    is_solution[s] = 1;

  AbsorptionResult result;
  std::vector<StateIndex> absorbing;
  for (std::size_t s = 0; s < size; ++s) {
    const bool absorb = chain.is_absorbing(static_cast<StateIndex>(s));
    if (absorb)
      absorbing.push_back(static_cast<StateIndex>(s));
    if (absorb != static_cast<bool>(is_solution[s]))
      result.absorbing_mismatch.push_back(static_cast<StateIndex>(s));
  }

  if (absorbing.empty() && solutions.empty()) {
    result.verdict = AbsorptionVerdict::ok_vacuous;
    return result;
  }

  // Reverse search over positive edges.
  std::vector<std::vector<StateIndex>> preds(size);
  for (std::size_t s = 0; s < size; ++s)
    for (const ChainEdge &e : chain.rows[s])
      if (e.probability > 0.0 && e.to != s)
        preds[e.to].push_back(static_cast<StateIndex>(s));
  std::vector<std::uint8_t> reaches(size, 0);
  std::deque<StateIndex> queue(absorbing.begin(), absorbing.end());
  for (StateIndex s : absorbing)
    reaches[s] = 1;
  while (!queue.empty()) {
    const StateIndex s = queue.front();
    queue.pop_front();
    for (StateIndex p : preds[s])
      if (!reaches[p]) {
        reaches[p] = 1;
        queue.push_back(p);
      }
  }
  for (std::size_t s = 0; s < size; ++s)
    if (!reaches[s])
      result.stuck_states.push_back(static_cast<StateIndex>(s));

  result.verdict = result.absorbing_mismatch.empty() &&
                           result.stuck_states.empty()
                       ? AbsorptionVerdict::ok
                       : AbsorptionVerdict::failed;
  return result;
}

std::vector<StateIndex> missing_repair_edges(const MarkovChain &chain,
                                             const Formula &f) {
  std::vector<StateIndex> missing;
  for (std::size_t si = 0; si < chain.rows.size(); ++si) {
    const auto s = static_cast<StateIndex>(si);
    const auto eval = evaluate_formula(f, State::from_index(f.num_vars(), s));
    if (eval.satisfied)
      continue;
    bool found = false;
    for (std::size_t j : eval.unsat_indices) {
      for (const Literal lit : f.clause(j)) {
        const StateIndex flipped = s ^ (StateIndex{1} << lit.index());
        if (chain.probability(s, flipped) > 0.0) {
          found = true;
          break;
        }
      }
      if (found)
        break;
    }
    if (!found)
      missing.push_back(s);
  }
  return missing;
}

std::string_view to_string(AbsorptionVerdict v) {
  switch (v) {
  case AbsorptionVerdict::ok:
    return "ok";
  case AbsorptionVerdict::ok_vacuous:
    return "ok-vacuous";
  case AbsorptionVerdict::failed:
    return "failed";
  }
  return "?";
}

namespace {

void dot_node(std::ostream &out, std::size_t n, StateIndex s, bool fixed) {
  out << "  s" << s << " [label=\"" << State::from_index(n, s).to_string()
      << '"';
  if (fixed)
    out << ", shape=doublecircle, style=filled, fillcolor=lightgrey";
  out << "];\n";
}

} // namespace

void export_dot(std::ostream &out, const TransitionGraph &graph,
                const std::string &name) {
  out << "digraph " << name << " {\n  node [shape=circle];\n";
  for (std::size_t s = 0; s < graph.num_states(); ++s)
    dot_node(out, graph.n, static_cast<StateIndex>(s),
             graph.successor[s] == s);
  for (std::size_t s = 0; s < graph.num_states(); ++s)
    out << "  s" << s << " -> s" << graph.successor[s] << ";\n";
  out << "}\n";
}

void export_dot(std::ostream &out, const MarkovChain &chain,
                const std::string &name) {
  out << "digraph " << name << " {\n  node [shape=circle];\n";
  for (std::size_t s = 0; s < chain.rows.size(); ++s)
    dot_node(out, chain.n, static_cast<StateIndex>(s),
             chain.is_absorbing(static_cast<StateIndex>(s)));
  char label[32];
  for (std::size_t s = 0; s < chain.rows.size(); ++s)
    for (const ChainEdge &e : chain.rows[s]) {
      std::snprintf(label, sizeof label, "%.6g", e.probability);
      out << "  s" << s << " -> s" << e.to << " [label=\"" << label
          << "\"];\n";
    }
  out << "}\n";
}

} // namespace bnsat
