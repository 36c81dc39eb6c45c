#pragma once

#include <memory>
#include <optional>

#include "cgs.hpp"

namespace eg {

enum class Level { Computation, Run, Trace };
enum class Accept { Reach, Safe, Buchi, CoBuchi };

const char* level_name(Level l);
const char* accept_name(Accept a);

// Boolean combination of propositions.
struct Pred {
  enum Op { True, False, Atom, Not, And, Or } op = True;
  std::string atom;
  std::vector<Pred> kids;

  bool eval(const Cgs& m, Val v) const;
  std::string str() const;
};
Pred parse_pred(const std::string& text);

struct Guard {
  enum Kind { Any, Prop, States, Pattern } kind = Any;
  Pred pred;
  std::vector<std::string> states;
  std::vector<std::string> pattern;  // one token per agent, "*" matches anything
};

// Deterministic automaton with first-match guarded edges. A letter that
// matches no edge leads to an implicit rejecting sink.
struct Objective {
  Level level = Level::Trace;
  Accept acc = Accept::Reach;
  int nq = 1;
  int q0 = 0;
  std::vector<bool> F;
  std::vector<std::vector<std::pair<Guard, int>>> edges;
  json doc;
};

Objective objective_from_json(const json& doc);
json objective_to_json(const Objective& g);

Objective eventually(const Pred& p);
Objective always(const Pred& p);
Objective infinitely(const Pred& p);
Objective prefix_goal(const std::vector<std::vector<std::vector<std::string>>>& patterns);
Objective accept_all();
Objective reject_all();

// Automaton specialised to one structure: letters are states (run/trace
// level) or direction codes (computation level). State nq is the sink.
struct BoundGoal {
  Level level = Level::Trace;
  Accept acc = Accept::Reach;
  int q0 = 0;
  std::vector<bool> F;                 // size nq+1
  std::vector<std::vector<int>> next;  // [q][letter]

  int size() const { return (int)F.size(); }
  int read_state(int q, int t) const { return level == Level::Computation ? q : next[q][t]; }
  int read_dir(int q, int d) const { return level == Level::Computation ? next[q][d] : q; }
  // automaton state before anything happened at the initial state
  int start(const Cgs& m) const { return read_state(q0, m.init); }
  BoundGoal complement() const;
};

BoundGoal bind(const Objective& g, const Cgs& m);

bool holds_on_lasso(const Objective& g, const Cgs& m, const DirLasso& w);
bool holds_bound(const BoundGoal& b, const Cgs& m, const DirLasso& w);

// Verdict on a lasso of automaton states (one state per position).
bool accepts_cycle(const BoundGoal& b, const std::vector<int>& prefix, const std::vector<int>& cycle);

// 1 accept-all, 0 reject-all, -1 undecided, from automaton state q
std::vector<int> decided_states(const BoundGoal& b);
// least D <= bound such that every automaton state reachable by exactly D
// direction letters is decided; -1 if none. Run/trace goals read states.
int decided_depth(const BoundGoal& b, const Cgs& m, int bound);

enum class Closure { ComputationOnly, RunBased, TraceBased, Unknown };
const char* closure_name(Closure c);
Closure classify_closure(const Objective& g, const Cgs& m, int H);

enum class Tri { Yes, No, Unknown };
const char* tri_name(Tri t);
struct KClosedVerdict {
  Tri verdict = Tri::Unknown;
  std::vector<int> w1, w2;  // witness computations for No
};
KClosedVerdict is_k_closed(const Objective& g, const Cgs& a, const Cgs& b, int H, long cap);

// Generic one-player acceptance on an explicit graph. Returns a lasso of node
// indices starting at node 0 whose acceptance flags satisfy acc.
struct Graph {
  std::vector<std::vector<int>> succ;
  std::vector<bool> good;  // F-membership of each node
};
std::optional<Lasso<int>> find_accepting_lasso(const Graph& g, Accept acc);

enum class SetMode { ForAll, Exists };
struct SetObjective {
  Objective base;
  SetMode mode = SetMode::ForAll;
};
const char* mode_name(SetMode m);
SetObjective lift_nondet(const Objective& g, SetMode mode);

}  // namespace eg
