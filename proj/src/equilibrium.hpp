#pragma once

#include <optional>

#include "objective.hpp"
#include "strategy.hpp"

namespace eg {

struct Game {
  Cgs m;
  std::vector<Objective> goals;
  std::vector<SetMode> modes;  // empty for ordinary games; one per agent for set-valued goals

  bool set_valued() const { return !modes.empty(); }
};

Game make_game(Cgs m, std::vector<Objective> goals, std::vector<SetMode> modes = {});
Game game_from_json(const json& doc);  // {"structure":..., "goals":[...], "modes":[...]}
json game_to_json(const Game& g);

struct Budget {
  int depth = 2;
  long cap = 200000;  // candidates / explored nodes
  long mach_cap = 200000;
};

struct NeVerdict {
  bool equilibrium = true;
  int agent = -1;
  Strategy witness;
  DirLasso outcome;      // deviation outcome, for deterministic games
  bool complete = true;  // false when a budget cut the deviation search short
};

bool satisfied(const Game& g, int agent, const DirLasso& w);

// Exact for deterministic structures: a deviation against fixed opponent
// machines yields a single play, so the one-player problem on the product of
// structure, opponent memories, goal automaton and the deviator's belief
// decides it.
std::optional<std::pair<Strategy, DirLasso>> best_response_improvement(const Game& g, const Profile& p, int agent,
                                                                       long cap = 200000);
NeVerdict is_nash(const Game& g, const Profile& p, long cap = 200000);
json verdict_to_json(const NeVerdict& v, const Game& g);

struct FindResult {
  std::optional<Profile> profile;
  DirLasso outcome;
  bool exhaustive = false;
  bool cap_hit = false;
  long candidates = 0;
  std::string why;  // reason the exhaustiveness flag is off
};
FindResult find_nash(const Game& g, Kind kind, const Budget& b);
// whether a depth-H table search is complete for g
bool exhaustive_regime(const Game& g, int H, std::string* why = nullptr);

bool is_winning_against(const Game& g, const Strategy& f, int opponent, long cap = 200000);
bool two_player_ne_check(const Game& g, const Profile& p, long cap = 200000);

struct Target {
  enum Type { Dirs, States, Vals } type = Dirs;
  DirLasso dirs;
  StateLasso states;
  ValLasso vals;
};
Target target_from_json(const json& j, const Cgs& m);  // {"dirs"|"states"|"trace": {"prefix":[],"cycle":[]}}

struct SustainResult {
  bool sustained = false;
  std::optional<Profile> profile;
  DirLasso realized;
  bool cap_hit = false;
};
SustainResult sustained_by_ne(const Game& g, Kind kind, const Target& t, const Budget& b);

// outcome graph of a profile in a possibly nondeterministic structure
struct OutcomeSet {
  std::vector<int> state;                          // per node
  std::vector<std::vector<int>> mem;               // per node, one machine node per agent
  std::vector<std::vector<std::pair<int, int>>> edges;  // (direction, node)
  bool tree_of_sinks = false;
  std::vector<StateLasso> runs;  // listed when tree_of_sinks
  std::vector<ValLasso> traces;
};
OutcomeSet outcome_set(const Cgs& m, const Profile& p, long cap = 200000);
json outcome_set_to_json(const OutcomeSet& o, const Cgs& m);

bool holds_on_set(const Objective& goal, SetMode mode, const Cgs& m, const OutcomeSet& o);
NeVerdict is_nash_nondet(const Game& g, const Profile& p, const Budget& b);

}  // namespace eg
