#pragma once

#include <memory>
#include <mutex>
#include <unordered_map>

#include "bisim.hpp"

namespace eg {

// What a strategy sees after one step: the direction taken, the endpoints,
// and the observable valuation of the new state.
struct Obs {
  int dir = -1;
  int from = -1;
  int to = -1;
  Val val = 0;
};

inline std::int64_t symbol(Kind k, const Obs& o) {
  switch (k) {
    case Kind::Computation: return o.dir;
    case Kind::Run: return o.to;
    case Kind::Trace: return (std::int64_t)o.val;
  }
  return 0;
}

constexpr std::int64_t kTailMem = -1;  // memory that prescribes the tail rule forever

// Strategy implementation over an abstract memory. act() returns an action id,
// or -1 to request the tail rule.
struct Impl {
  virtual ~Impl() = default;
  virtual std::int64_t start(const Cgs& m, int s0) const = 0;
  virtual int act(const Cgs& m, std::int64_t mem) const = 0;
  virtual std::int64_t step(const Cgs& m, std::int64_t mem, const Obs& o) const = 0;
};

// Table over observation sequences, stored as a trie.
struct Trie {
  struct Node {
    std::map<std::int64_t, int> kids;
    int act = -1;
  };
  std::vector<Node> nodes{Node{}};
  void put(const std::vector<std::int64_t>& key, int act);
  int get(const std::vector<std::int64_t>& key) const;  // -1 if absent
};

// Machine over observation symbols; missing transitions go to the tail sink.
struct MachineSpec {
  int init = 0;
  std::vector<int> out;  // -1 = tail rule
  std::vector<std::map<std::int64_t, int>> next;
};
struct Strategy {
  Kind kind = Kind::Computation;
  int agent = 0;  // 0-based
  int depth = 0;  // table depth, informational for machines
  std::shared_ptr<const Impl> impl;
  // serialisable forms, when the strategy has one
  std::shared_ptr<const Trie> table;
  std::shared_ptr<const MachineSpec> machine;
};

using Profile = std::vector<Strategy>;

Strategy table_strategy(Kind k, int agent, int depth, Trie t);
Strategy constant_strategy(Kind k, int agent, int act);
Strategy tail_strategy(Kind k, int agent);

Strategy machine_strategy(Kind k, int agent, MachineSpec spec);

// Table that follows a fixed play on-path. Positions index a lasso of
// (expected observation, action of this agent); off-path it uses the trie.
struct PathSpec {
  std::int64_t first = 0;                   // expected initial observation (run/trace)
  std::vector<std::int64_t> expect;         // expected symbol after step k
  std::vector<int> act;                     // action at step k
  int loop = 0;                             // position the cycle returns to
};
Strategy path_strategy(Kind k, int agent, PathSpec path, Trie off);

Strategy strategy_from_json(const json& doc, const Cgs& m);
json strategy_to_json(const Strategy& f, const Cgs& m);
Profile profile_from_json(const json& doc, const Cgs& m);
json profile_to_json(const Profile& p, const Cgs& m);

// beliefs: states consistent with an observation sequence of a given kind
class Beliefs {
 public:
  explicit Beliefs(const Cgs& m) : m_(m) {}
  int intern(std::vector<int> v);
  const std::vector<int>& get(int id) const { return sets_[id]; }
  int initial() { return intern({m_.init}); }
  int initial_at(int s) { return intern({s}); }
  // belief after observing o, given the current belief
  int advance(Kind k, int bel, const Obs& o);
  // least action of agent i feasible at every state of the belief, -1 if none
  int tail(int bel, int agent) const;
  bool allows(int bel, int agent, int act) const;

 private:
  const Cgs& m_;
  std::vector<std::vector<int>> sets_;
  std::map<std::vector<int>, int> ids_;
  std::map<std::tuple<int, int, std::int64_t>, int> memo_;
};

// Finite machine obtained by exploring (memory, belief) pairs of a strategy in
// one structure, restricted to plays where the agent follows the strategy.
struct Mach {
  Kind kind = Kind::Computation;
  int agent = 0;
  std::vector<int> out;  // concrete action, -1 when nothing feasible
  std::vector<int> bel;
  std::vector<std::vector<int>> sets;  // belief contents per node
  std::vector<std::int64_t> mem;
  std::vector<std::unordered_map<std::int64_t, int>> next;
  std::vector<int> parent;
  std::vector<std::int64_t> via;
  bool feasible = true;
  int bad = -1;  // first infeasible node

  int go(int node, const Obs& o) const;
};

Mach compile(const Strategy& f, const Cgs& m, long cap, int s0 = -1);

struct Feasibility {
  bool ok = true;
  json witness;
};
Feasibility is_feasible(const Strategy& f, const Cgs& m, long cap);

// action prescribed after an observation sequence: directions (comp),
// states starting at the initial one (run) or valuations (trace)
int prescribe(const Strategy& f, const Cgs& m, const std::vector<std::int64_t>& obs);
int prescribe_comp(const Strategy& f, const Cgs& m, const std::vector<int>& comp);

void check_profile(const Profile& p, const Cgs& m);
DirLasso induced_outcome(const Cgs& m, const Profile& p, long cap);
std::vector<Mach> compile_profile(const Profile& p, const Cgs& m, long cap);

struct InvVerdict {
  bool ok = true;
  std::vector<int> w1, w2;  // two computations with different prescriptions
};
InvVerdict is_run_invariant(const Strategy& f, const Cgs& m, int H);
InvVerdict is_trace_invariant(const Strategy& f, const Cgs& m, int H);
InvVerdict is_k_invariant(const Strategy& f, const Cgs& a, const Cgs& b, int H, long cap);
// f is run-based; histories up to H+1 states, compared by class sequence
InvVerdict is_bisimulation_invariant(const Strategy& f, const Cgs& m, int H);

Strategy lower_run(const Strategy& f, const Cgs& m);
Strategy lower_trace(const Strategy& g, const Cgs& m);
Strategy lift_run_invariant(const Strategy& f, const Cgs& m, int H);
Strategy transport_tilde(const Strategy& f, const Cgs& a, const Cgs& b, int H);
// run-based strategy on m that reads bisimulation classes through a trace-based inner strategy
Strategy class_view(const Strategy& inner, const Cgs& m);

// comp-based table of depth H with the same prescriptions as f on all
// computations shorter than H
Strategy materialize(const Strategy& f, const Cgs& m, int H, long cap);

struct FKResult {
  Strategy f1, f2;
  std::map<std::vector<int>, std::vector<int>> rep1, rep2;
  std::map<std::vector<int>, std::string> clause1, clause2;
};
FKResult build_fK(const Strategy& f1, const Strategy& f2, const Cgs& a, const Cgs& b, int H, long cap);

Strategy build_k_invariant_deviation(const FKResult& fk, const Strategy& f1, const Strategy& f2, const Strategy& g2,
                                     const Cgs& a, const Cgs& b, int H, long cap, const Strategy* h2 = nullptr);

}  // namespace eg
