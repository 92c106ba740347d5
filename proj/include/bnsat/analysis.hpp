#pragma once

#include "bnsat/mapping.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace bnsat {

// Exhaustive state-space tools. States are addressed by their integer index
// (bit i = x_{i+1}), so every container here has 2^n entries.

class CapExceeded : public std::runtime_error {
public:
  CapExceeded(std::size_t n, std::size_t cap);
  std::size_t n() const { return n_; }
  std::size_t cap() const { return cap_; }

private:
  std::size_t n_;
  std::size_t cap_;
};

inline constexpr std::size_t kGraphCap = 20;
inline constexpr std::size_t kPbnChainCap = 14;
inline constexpr std::size_t kAbnChainCap = 16;

using StateIndex = std::uint32_t;

struct TransitionGraph {
  std::size_t n = 0;
  std::vector<StateIndex> successor;

  std::size_t num_states() const { return successor.size(); }
};

/// successor[s] = index of the synchronous image of s, for all 2^n states.
TransitionGraph build_transition_graph(const Network &net,
                                       std::size_t cap = kGraphCap);

struct Attractor {
  std::vector<StateIndex> states; ///< cycle order, smallest index first
  std::size_t basin_size = 0;     ///< includes the attractor's own states

  std::size_t period() const { return states.size(); }
  bool is_fixed_point() const { return states.size() == 1; }
};

struct AttractorReport {
  std::size_t n = 0;
  std::vector<Attractor> attractors; ///< ordered by smallest member index
  std::vector<std::uint32_t> basin_of; ///< attractor id for each state

  std::vector<StateIndex> fixed_points() const;
  std::vector<const Attractor *> cycles() const;
};

AttractorReport classify(const TransitionGraph &graph);

/// Direct enumeration of satisfying assignments, independent of the mapping.
/// Indices in increasing order.
std::vector<StateIndex> brute_force_solutions(const Formula &f,
                                              std::size_t cap = kGraphCap);

struct Prop1Result {
  bool ok = true;
  std::optional<State> counterexample;
};

/// Compares the network's fixed points with the formula's models.
Prop1Result check_prop1(const Formula &f, std::size_t cap = kGraphCap);

struct PbnChain {
  double p = 0.2;
};
struct AbnMicroChain {};
using ChainKind = std::variant<PbnChain, AbnMicroChain>;

struct ChainEdge {
  StateIndex to = 0;
  double probability = 0.0;
};

struct MarkovChain {
  std::size_t n = 0;
  ChainKind kind;
  std::vector<std::vector<ChainEdge>> rows; ///< sorted by target, merged

  /// max over rows of |Σ p - 1|.
  double max_row_error() const;
  bool is_absorbing(StateIndex s) const;
  double probability(StateIndex from, StateIndex to) const;
};

/// PBN(p): from s with image t, each node differing from t moves to t_i with
/// probability p independently; successors range over subsets of the
/// disagreeing nodes. ABN-micro: pick a node uniformly and apply F_i.
/// Zero-probability edges are omitted.
MarkovChain build_markov_chain(const Network &net, const ChainKind &kind,
                               std::optional<std::size_t> cap = {});

enum class AbsorptionVerdict {
  ok,
  ok_vacuous, ///< no solutions and no absorbing states (unsatisfiable input)
  failed,
};

struct AbsorptionResult {
  AbsorptionVerdict verdict = AbsorptionVerdict::ok;
  /// States that are absorbing but not solutions, or solutions that are
  /// not absorbing.
  std::vector<StateIndex> absorbing_mismatch;
  /// States from which no absorbing state is reachable.
  std::vector<StateIndex> stuck_states;

  bool passed() const { return verdict != AbsorptionVerdict::failed; }
};

/// Certifies (a) absorbing states == solutions and (b) every state reaches
/// the absorbing set along positive-probability edges, which for a finite
/// chain is absorption with probability 1.
AbsorptionResult check_absorption(const MarkovChain &chain,
                                  const std::vector<StateIndex> &solutions);

/// For each non-solution state, a positive edge to a Hamming-1 neighbour
/// obtained by flipping a variable of some falsified clause. Returns the
/// states lacking one.
std::vector<StateIndex> missing_repair_edges(const MarkovChain &chain,
                                             const Formula &f);

std::string_view to_string(AbsorptionVerdict v);

/// DOT digraph; states are labelled with bitstrings (x1 first) and fixed
/// points drawn as double circles.
void export_dot(std::ostream &out, const TransitionGraph &graph,
                const std::string &name = "transitions");
void export_dot(std::ostream &out, const MarkovChain &chain,
                const std::string &name = "chain");

} // namespace bnsat
