#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace eg {

using json = nlohmann::json;
using Val = std::uint64_t;  // bitmask over the structure's sorted proposition list

enum class Code {
  Ok = 0,
  MalformedDocument,
  EmptyActionSet,
  IllegalTransition,
  DeterminismViolation,
  UnknownState,
  IllegalDirection,
  NondeterministicStructure,
  BadPartition,
  BudgetExceeded,
  AlphabetMismatch,
  LengthMismatch,
  MixedStrategyKinds,
  Infeasible,
  NotRunInvariant,
  NotBisimulationInvariant,
  LevelMismatch,
  BadPattern,
  NotTwoPlayer,
  UnsupportedKind,
  UnboundAgent,
  SyntaxError,
  UnknownFixture,
  NotBisimilar,
  Io,
  Usage,
};

const char* code_name(Code c);

struct Error : std::runtime_error {
  Code code;
  Error(Code c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

[[noreturn]] void fail(Code c, const std::string& msg);

enum class Kind { Computation, Run, Trace };
const char* kind_name(Kind k);
Kind parse_kind(const std::string& s);

struct Cgs {
  int n = 0;
  std::vector<std::string> props;    // sorted
  std::vector<std::string> actions;  // sorted; this order is the global action order
  std::vector<std::string> names;
  std::vector<Val> label;
  // what a trace-based observer sees; equals label except in relabelled copies
  std::vector<Val> obs;
  int init = 0;
  std::vector<std::vector<std::vector<int>>> feas;  // [state][agent] sorted action ids
  std::vector<std::vector<int>> dirs;               // [state] legal direction codes, ascending
  std::vector<std::vector<std::vector<int>>> succ;  // [state][slot] sorted successors
  bool det = true;

  int size() const { return (int)names.size(); }
  int A() const { return (int)actions.size(); }
  int encode(const std::vector<int>& acts) const;
  std::vector<int> decode(int d) const;
  int action_at(int d, int agent) const;
  int with_action(int d, int agent, int a) const;
  int slot(int s, int d) const;  // -1 when d is not legal at s
  const std::vector<int>& next(int s, int d) const;
  int step(int s, int d) const;
  int state(const std::string& id) const;
  int action(const std::string& tok) const;
  int prop(const std::string& p) const;
  bool absorbing(int s) const;

  std::string dir_str(int d) const;
  json dir_json(int d) const;
  int dir_from_json(const json& j) const;
  std::string val_str(Val v) const;
  json val_json(Val v) const;
  Val val_from_json(const json& j) const;
};

Cgs validate(const json& doc);
json to_json(const Cgs& m);

// Builds a structure from already-parsed pieces; used by quotient and generators.
struct CgsBuilder {
  int n = 1;
  std::vector<std::string> props;
  std::vector<std::string> states;
  std::vector<std::vector<std::string>> labels;
  std::string initial;
  std::map<std::string, std::vector<std::vector<std::string>>> feasible;
  struct T {
    std::string from;
    std::vector<std::string> dir;
    std::vector<std::string> to;
  };
  std::vector<T> trans;
  bool deterministic = true;
  json doc() const;
};

std::vector<int> legal_directions(const Cgs& m, int s);
std::vector<int> successors(const Cgs& m, int s, int d);
std::vector<int> run_of(const Cgs& m, const std::vector<int>& comp);
std::vector<Val> trace_of(const Cgs& m, const std::vector<int>& hist);
std::vector<std::vector<int>> enumerate_computations(const Cgs& m, int len, long cap);
bool is_boolean_game_structure(const Cgs& m, const std::vector<std::vector<std::string>>& partition);

// states reachable in exactly k steps, for k = 0..upto
std::vector<std::vector<int>> layers(const Cgs& m, int upto);
// smallest D such that every state reachable in D or more steps is absorbing; -1 if none
int absorbing_depth(const Cgs& m);

Cgs relabel_observations(const Cgs& m, const std::vector<int>& cls);

template <class T>
struct Lasso {
  std::vector<T> prefix, cycle;

  void normalize() {
    if (cycle.empty()) return;
    size_t n = cycle.size();
    for (size_t p = 1; p <= n; ++p) {
      if (n % p) continue;
      bool ok = true;
      for (size_t i = p; i < n && ok; ++i) ok = cycle[i] == cycle[i - p];
      if (ok) {
        cycle.resize(p);
        break;
      }
    }
    while (!prefix.empty() && prefix.back() == cycle.back()) {
      T last = cycle.back();
      cycle.pop_back();
      cycle.insert(cycle.begin(), last);
      prefix.pop_back();
    }
  }
  T at(size_t i) const {
    if (i < prefix.size()) return prefix[i];
    return cycle[(i - prefix.size()) % cycle.size()];
  }
  bool operator==(const Lasso& o) const { return prefix == o.prefix && cycle == o.cycle; }
  bool operator!=(const Lasso& o) const { return !(*this == o); }
  bool operator<(const Lasso& o) const {
    return prefix != o.prefix ? prefix < o.prefix : cycle < o.cycle;
  }
};

using DirLasso = Lasso<int>;
using StateLasso = Lasso<int>;
using ValLasso = Lasso<Val>;

StateLasso run_lasso(const Cgs& m, const DirLasso& w);
ValLasso trace_lasso(const Cgs& m, const StateLasso& r);

json lasso_dirs_json(const Cgs& m, const DirLasso& w);
json lasso_states_json(const Cgs& m, const StateLasso& w);
json lasso_vals_json(const Cgs& m, const ValLasso& w);

}  // namespace eg
