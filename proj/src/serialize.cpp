#include "bnsat/serialize.hpp"

namespace bnsat {

nlohmann::json to_json(const SolveOutcome &o) {
  nlohmann::json j = {
      {"algorithm", to_string(o.algorithm())},
      {"n", o.num_vars()},
      {"m", o.num_clauses()},
      {"seed", o.seed()},
      {"solved", o.solved()},
      {"iterations", o.counters().transitions},
      {"micro_updates", o.counters().micro_updates},
      {"restarts", o.counters().restarts},
      {"elapsed_ms", o.elapsed_ms()},
  };
  if (o.solved())
    j["model"] = o.solution()->to_string();
  return j;
}

namespace {

std::string bits(std::size_t n, StateIndex s) {
  return State::from_index(n, s).to_string();
}

nlohmann::json bit_list(std::size_t n, const std::vector<StateIndex> &xs) {
  auto out = nlohmann::json::array();
  for (StateIndex s : xs)
    out.push_back(bits(n, s));
  return out;
}

} // namespace

nlohmann::json to_json(const AttractorReport &r) {
  auto fixed = nlohmann::json::array();
  auto cycles = nlohmann::json::array();
  for (const Attractor &a : r.attractors) {
    if (a.is_fixed_point())
      fixed.push_back({{"state", bits(r.n, a.states.front())},
                       {"basin_size", a.basin_size}});
    else
      cycles.push_back({{"states", bit_list(r.n, a.states)},
                        {"period", a.period()},
                        {"basin_size", a.basin_size}});
  }
  return {{"n", r.n},
          {"num_states", r.basin_of.size()},
          {"fixed_points", fixed},
          {"cycles", cycles}};
}

nlohmann::json to_json(const AbsorptionResult &r, std::size_t n) {
  return {{"verdict", to_string(r.verdict)},
          {"absorbing_mismatch", bit_list(n, r.absorbing_mismatch)},
          {"stuck_states", bit_list(n, r.stuck_states)}};
}

} // namespace bnsat
