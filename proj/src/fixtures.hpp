#pragma once

#include <random>

#include "equilibrium.hpp"

namespace eg {

struct Fixture {
  std::string id;
  std::string title;
  json structure;
  json goals;     // one goal document per agent
  json modes;     // set modes, nondeterministic fixtures only
  json profiles;  // name -> profile document
  int depth = 2;  // table depth the fixture is meant to be searched at
};

std::vector<std::string> fixture_ids();
Fixture fixture(const std::string& id);
json fixture_to_json(const Fixture& f);
Game fixture_game(const std::string& id);
Profile fixture_profile(const std::string& id, const std::string& name);

// the fixture each one is paired with (bisimilar partner), or "" if none
std::string fixture_partner(const std::string& id);

// ---------------------------------------------------------------- generators

using Rng = std::mt19937_64;

struct GenSpec {
  int max_states = 6;
  int max_agents = 3;
  int max_actions = 3;
  bool det = true;
  int props = 2;
};

// random structure built by splitting states of a smaller base structure,
// so that its quotient is nontrivial
Cgs random_split_cgs(Rng& rng, const GenSpec& g);
// layered structure whose states at depth `depth` are absorbing
Cgs random_layered_cgs(Rng& rng, int max_states, int agents, int max_actions, int depth);
// two bisimilar layered structures obtained from one base by splitting differently
std::pair<Cgs, Cgs> random_layered_pair(Rng& rng, int max_states, int agents, int max_actions, int depth);
// Boolean game structure: agent i picks a subset of its own propositions
Cgs random_bgs(Rng& rng, int agents, int props_per_agent, int extra_states, std::vector<std::vector<std::string>>* part);

Objective random_trace_goal(Rng& rng, const Cgs& m);
Objective random_run_goal(Rng& rng, const Cgs& m);

// random table profile of depth H; actions chosen among those feasible for the key's belief
Profile random_profile(Rng& rng, const Cgs& m, Kind k, int H);

}  // namespace eg
