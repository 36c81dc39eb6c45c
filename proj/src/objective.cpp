#include "objective.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <functional>
#include <set>

#include "bisim.hpp"

namespace eg {

const char* level_name(Level l) {
  switch (l) {
    case Level::Computation: return "comp";
    case Level::Run: return "run";
    case Level::Trace: return "trace";
  }
  return "?";
}

const char* accept_name(Accept a) {
  switch (a) {
    case Accept::Reach: return "reach";
    case Accept::Safe: return "safe";
    case Accept::Buchi: return "buchi";
    case Accept::CoBuchi: return "cobuchi";
  }
  return "?";
}

const char* mode_name(SetMode m) { return m == SetMode::ForAll ? "forall" : "exists"; }

const char* closure_name(Closure c) {
  switch (c) {
    case Closure::ComputationOnly: return "ComputationOnly";
    case Closure::RunBased: return "RunBased";
    case Closure::TraceBased: return "TraceBased";
    case Closure::Unknown: return "Unknown";
  }
  return "?";
}

const char* tri_name(Tri t) {
  switch (t) {
    case Tri::Yes: return "Yes";
    case Tri::No: return "No";
    case Tri::Unknown: return "Unknown";
  }
  return "?";
}

bool Pred::eval(const Cgs& m, Val v) const {
  switch (op) {
    case True: return true;
    case False: return false;
    case Atom: {
      int k = m.prop(atom);
      return k >= 0 && (v >> k & 1);
    }
    case Not: return !kids[0].eval(m, v);
    case And:
      for (auto& k : kids)
        if (!k.eval(m, v)) return false;
      return true;
    case Or:
      for (auto& k : kids)
        if (k.eval(m, v)) return true;
      return false;
  }
  return false;
}

std::string Pred::str() const {
  switch (op) {
    case True: return "true";
    case False: return "false";
    case Atom: return atom;
    case Not: return "!" + kids[0].str();
    case And:
    case Or: {
      std::string r = "(";
      for (size_t i = 0; i < kids.size(); ++i) {
        if (i) r += op == And ? " & " : " | ";
        r += kids[i].str();
      }
      return r + ")";
    }
  }
  return "?";
}

namespace {

struct PredParser {
  const std::string& s;
  size_t i = 0;

  void ws() {
    while (i < s.size() && std::isspace((unsigned char)s[i])) ++i;
  }
  [[noreturn]] void err(const std::string& what) {
    fail(Code::MalformedDocument, "predicate '" + s + "': " + what + " at position " + std::to_string(i));
  }
  Pred disj() {
    Pred l = conj();
    ws();
    if (i < s.size() && s[i] == '|') {
      Pred r{Pred::Or, "", {l}};
      while (ws(), i < s.size() && s[i] == '|') {
        ++i;
        r.kids.push_back(conj());
      }
      return r;
    }
    return l;
  }
  Pred conj() {
    Pred l = unary();
    ws();
    if (i < s.size() && s[i] == '&') {
      Pred r{Pred::And, "", {l}};
      while (ws(), i < s.size() && s[i] == '&') {
        ++i;
        r.kids.push_back(unary());
      }
      return r;
    }
    return l;
  }
  Pred unary() {
    ws();
    if (i >= s.size()) err("unexpected end");
    if (s[i] == '!') {
      ++i;
      return Pred{Pred::Not, "", {unary()}};
    }
    if (s[i] == '(') {
      ++i;
      Pred p = disj();
      ws();
      if (i >= s.size() || s[i] != ')') err("expected ')'");
      ++i;
      return p;
    }
    size_t j = i;
    while (j < s.size() && (std::isalnum((unsigned char)s[j]) || s[j] == '_' || s[j] == '\'')) ++j;
    if (j == i) err("expected proposition");
    std::string id = s.substr(i, j - i);
    i = j;
    if (id == "true") return Pred{Pred::True, "", {}};
    if (id == "false") return Pred{Pred::False, "", {}};
    return Pred{Pred::Atom, id, {}};
  }
};

}  // namespace

Pred parse_pred(const std::string& text) {
  PredParser p{text};
  Pred r = p.disj();
  p.ws();
  if (p.i != text.size()) p.err("trailing input");
  return r;
}

namespace {

Guard any_guard() { return Guard{}; }

Guard prop_guard(const Pred& p) {
  Guard g;
  g.kind = Guard::Prop;
  g.pred = p;
  return g;
}

json guard_to_json(const Guard& g) {
  switch (g.kind) {
    case Guard::Any: return "*";
    case Guard::Prop: return g.pred.str();
    case Guard::States: return g.states;
    case Guard::Pattern: return json{{"dir", g.pattern}};
  }
  return nullptr;
}

Guard guard_from_json(Level lv, const json& j) {
  if (j.is_string() && j.get<std::string>() == "*") return any_guard();
  Guard g;
  switch (lv) {
    case Level::Trace:
      if (!j.is_string()) fail(Code::MalformedDocument, "trace-level guards are predicate strings");
      return prop_guard(parse_pred(j.get<std::string>()));
    case Level::Run:
      if (!j.is_array()) fail(Code::MalformedDocument, "run-level guards are lists of state ids");
      g.kind = Guard::States;
      for (auto& x : j) g.states.push_back(x.get<std::string>());
      return g;
    case Level::Computation: {
      const json& p = j.is_object() && j.contains("dir") ? j["dir"] : j;
      if (!p.is_array()) fail(Code::BadPattern, "computation-level guards are direction patterns");
      g.kind = Guard::Pattern;
      for (auto& x : p) {
        if (!x.is_string()) fail(Code::BadPattern, "pattern tokens are strings");
        g.pattern.push_back(x.get<std::string>());
      }
      return g;
    }
  }
  return g;
}

Level parse_level(const std::string& s) {
  if (s == "comp" || s == "computation") return Level::Computation;
  if (s == "run") return Level::Run;
  if (s == "trace") return Level::Trace;
  fail(Code::MalformedDocument, "unknown goal level '" + s + "'");
}

Accept parse_accept(const std::string& s) {
  if (s == "reach") return Accept::Reach;
  if (s == "safe") return Accept::Safe;
  if (s == "buchi") return Accept::Buchi;
  if (s == "cobuchi") return Accept::CoBuchi;
  fail(Code::MalformedDocument, "unknown acceptance '" + s + "'");
}

std::vector<std::vector<std::vector<std::string>>> parse_patterns(const json& j) {
  if (!j.is_array()) fail(Code::BadPattern, "prefix goal needs a list of patterns");
  std::vector<std::vector<std::vector<std::string>>> ps;
  for (auto& p : j) {
    if (!p.is_array()) fail(Code::BadPattern, "a pattern is a list of directions");
    std::vector<std::vector<std::string>> seq;
    for (auto& d : p) {
      if (!d.is_array()) fail(Code::BadPattern, "a pattern direction is a list of tokens");
      std::vector<std::string> toks;
      for (auto& t : d) {
        if (!t.is_string()) fail(Code::BadPattern, "pattern tokens are strings");
        toks.push_back(t.get<std::string>());
      }
      seq.push_back(toks);
    }
    ps.push_back(seq);
  }
  return ps;
}

}  // namespace

Objective eventually(const Pred& p) {
  Objective g;
  g.level = Level::Trace;
  g.acc = Accept::Reach;
  g.nq = 2;
  g.F = {false, true};
  g.edges = {{{prop_guard(p), 1}, {any_guard(), 0}}, {{any_guard(), 1}}};
  g.doc = {{"eventually", p.str()}};
  return g;
}

Objective always(const Pred& p) {
  Objective g;
  g.level = Level::Trace;
  g.acc = Accept::Safe;
  g.nq = 1;
  g.F = {true};
  g.edges = {{{prop_guard(p), 0}}};
  g.doc = {{"always", p.str()}};
  return g;
}

Objective infinitely(const Pred& p) {
  Objective g;
  g.level = Level::Trace;
  g.acc = Accept::Buchi;
  g.nq = 2;
  g.F = {false, true};
  g.edges = {{{prop_guard(p), 1}, {any_guard(), 0}}, {{prop_guard(p), 1}, {any_guard(), 0}}};
  g.doc = {{"infinitely", p.str()}};
  return g;
}

Objective accept_all() {
  Objective g = always(Pred{Pred::True, "", {}});
  g.doc = {{"always", "true"}};
  return g;
}

Objective reject_all() {
  Objective g = eventually(Pred{Pred::False, "", {}});
  g.doc = {{"eventually", "false"}};
  return g;
}

Objective prefix_goal(const std::vector<std::vector<std::vector<std::string>>>& patterns) {
  size_t arity = 0;
  for (auto& p : patterns)
    for (auto& d : p) {
      if (arity && d.size() != arity) fail(Code::BadPattern, "patterns disagree on the number of agents");
      arity = d.size();
      if (d.empty()) fail(Code::BadPattern, "empty direction in pattern");
    }
  Objective g;
  g.level = Level::Computation;
  g.acc = Accept::Reach;
  json pj = json::array();
  for (auto& p : patterns) pj.push_back(p);
  g.doc = {{"prefix", pj}};

  // determinize over (letters read, patterns still matching)
  using St = std::pair<size_t, std::vector<int>>;
  std::map<St, int> ids;
  std::vector<St> todo;
  g.nq = 0;
  g.edges.clear();
  g.F.clear();
  const int ACC = 0;
  g.nq = 1;
  g.F.push_back(true);
  g.edges.push_back({{any_guard(), ACC}});
  auto accepting = [&](const St& s) {
    for (int j : s.second)
      if (patterns[j].size() == s.first) return true;
    return false;
  };
  auto get = [&](const St& s) -> int {
    if (accepting(s)) return ACC;
    auto it = ids.find(s);
    if (it != ids.end()) return it->second;
    int id = g.nq++;
    ids[s] = id;
    g.F.push_back(false);
    g.edges.push_back({});
    todo.push_back(s);
    return id;
  };
  std::vector<int> all(patterns.size());
  for (size_t j = 0; j < patterns.size(); ++j) all[j] = (int)j;
  St init{0, all};
  if (accepting(init)) {
    g.q0 = ACC;
    return g;
  }
  g.q0 = get(init);
  while (!todo.empty()) {
    St s = todo.back();
    todo.pop_back();
    int from = ids[s];
    std::vector<int> live;
    for (int j : s.second)
      if (patterns[j].size() > s.first) live.push_back(j);
    // every nonempty subset, largest first, guarded by the intersection
    std::vector<std::pair<std::vector<int>, std::vector<std::string>>> subs;
    for (unsigned mask = 1; mask < (1u << live.size()); ++mask) {
      std::vector<int> sub;
      std::vector<std::string> inter(arity, "*");
      bool ok = true;
      for (size_t b = 0; b < live.size() && ok; ++b) {
        if (!(mask >> b & 1)) continue;
        sub.push_back(live[b]);
        auto& d = patterns[live[b]][s.first];
        for (size_t i = 0; i < arity; ++i) {
          if (d[i] == "*") continue;
          if (inter[i] == "*") inter[i] = d[i];
          else if (inter[i] != d[i]) ok = false;
        }
      }
      if (ok) subs.emplace_back(sub, inter);
    }
    std::stable_sort(subs.begin(), subs.end(), [](auto& x, auto& y) { return x.first.size() > y.first.size(); });
    for (auto& [sub, inter] : subs) {
      Guard gd;
      gd.kind = Guard::Pattern;
      gd.pattern = inter;
      int to = get(St{s.first + 1, sub});
      g.edges[from].push_back({gd, to});
    }
  }
  return g;
}

Objective objective_from_json(const json& doc) {
  if (!doc.is_object()) fail(Code::MalformedDocument, "goal must be an object");
  if (doc.contains("eventually")) return eventually(parse_pred(doc["eventually"].get<std::string>()));
  if (doc.contains("always")) return always(parse_pred(doc["always"].get<std::string>()));
  if (doc.contains("infinitely")) return infinitely(parse_pred(doc["infinitely"].get<std::string>()));
  if (doc.contains("prefix")) return prefix_goal(parse_patterns(doc["prefix"]));
  if (!doc.contains("level") || !doc.contains("accept") || !doc.contains("automaton"))
    fail(Code::MalformedDocument, "goal needs level, accept and automaton (or a sugar form)");
  Objective g;
  g.level = parse_level(doc["level"].get<std::string>());
  g.acc = parse_accept(doc["accept"].get<std::string>());
  const json& a = doc["automaton"];
  if (!a.contains("states") || !a["states"].is_number_integer() || a["states"].get<int>() < 1)
    fail(Code::MalformedDocument, "automaton needs a positive state count");
  g.nq = a["states"].get<int>();
  g.q0 = a.value("initial", 0);
  if (g.q0 < 0 || g.q0 >= g.nq) fail(Code::MalformedDocument, "automaton initial state out of range");
  g.F.assign(g.nq, false);
  for (auto& f : a.value("accepting", json::array())) {
    int q = f.get<int>();
    if (q < 0 || q >= g.nq) fail(Code::MalformedDocument, "accepting state out of range");
    g.F[q] = true;
  }
  g.edges.assign(g.nq, {});
  for (auto& e : a.value("edges", json::array())) {
    int from = e.at("from").get<int>(), to = e.at("to").get<int>();
    if (from < 0 || from >= g.nq || to < 0 || to >= g.nq) fail(Code::MalformedDocument, "edge endpoint out of range");
    g.edges[from].push_back({guard_from_json(g.level, e.at("guard")), to});
  }
  g.doc = doc;
  return g;
}

json objective_to_json(const Objective& g) {
  if (!g.doc.is_null()) return g.doc;
  json acc = json::array(), edges = json::array();
  for (int q = 0; q < g.nq; ++q) {
    if (g.F[q]) acc.push_back(q);
    for (auto& [gd, to] : g.edges[q]) edges.push_back({{"from", q}, {"guard", guard_to_json(gd)}, {"to", to}});
  }
  return {{"level", level_name(g.level)},
          {"accept", accept_name(g.acc)},
          {"automaton", {{"states", g.nq}, {"initial", g.q0}, {"accepting", acc}, {"edges", edges}}}};
}

SetObjective lift_nondet(const Objective& g, SetMode mode) { return SetObjective{g, mode}; }

BoundGoal BoundGoal::complement() const {
  BoundGoal c = *this;
  for (size_t q = 0; q < F.size(); ++q) c.F[q] = !F[q];
  switch (acc) {
    case Accept::Reach: c.acc = Accept::Safe; break;
    case Accept::Safe: c.acc = Accept::Reach; break;
    case Accept::Buchi: c.acc = Accept::CoBuchi; break;
    case Accept::CoBuchi: c.acc = Accept::Buchi; break;
  }
  return c;
}

namespace {

bool guard_matches_state(const Guard& g, const Cgs& m, int t) {
  switch (g.kind) {
    case Guard::Any: return true;
    case Guard::Prop: return g.pred.eval(m, m.label[t]);
    case Guard::States: return std::find(g.states.begin(), g.states.end(), m.names[t]) != g.states.end();
    case Guard::Pattern: fail(Code::LevelMismatch, "direction pattern in a state-reading goal");
  }
  return false;
}

bool guard_matches_dir(const Guard& g, const Cgs& m, int d) {
  switch (g.kind) {
    case Guard::Any: return true;
    case Guard::Pattern: {
      if ((int)g.pattern.size() != m.n) fail(Code::BadPattern, "pattern arity differs from the agent count");
      auto v = m.decode(d);
      for (int i = 0; i < m.n; ++i)
        if (g.pattern[i] != "*" && g.pattern[i] != m.actions[v[i]]) return false;
      return true;
    }
    default: fail(Code::LevelMismatch, "state guard in a computation-level goal");
  }
}

}  // namespace

BoundGoal bind(const Objective& g, const Cgs& m) {
  BoundGoal b;
  b.level = g.level;
  b.acc = g.acc;
  b.q0 = g.q0;
  int sink = g.nq;
  b.F = g.F;
  b.F.push_back(false);
  if (g.level == Level::Run)
    for (auto& es : g.edges)
      for (auto& [gd, to] : es)
        if (gd.kind == Guard::States)
          for (auto& s : gd.states) m.state(s);
  if (g.level == Level::Trace)
    for (auto& es : g.edges)
      for (auto& [gd, to] : es)
        if (gd.kind == Guard::Prop) {
          std::function<void(const Pred&)> chk = [&](const Pred& p) {
            if (p.op == Pred::Atom && m.prop(p.atom) < 0)
              fail(Code::AlphabetMismatch, "goal mentions proposition '" + p.atom + "' unknown to the structure");
            for (auto& k : p.kids) chk(k);
          };
          chk(gd.pred);
        }
  if (g.level == Level::Computation)
    for (auto& es : g.edges)
      for (auto& [gd, to] : es)
        if (gd.kind == Guard::Pattern) {
          if ((int)gd.pattern.size() != m.n) fail(Code::BadPattern, "pattern arity differs from the agent count");
          for (auto& t : gd.pattern)
            if (t != "*" && !std::binary_search(m.actions.begin(), m.actions.end(), t))
              fail(Code::BadPattern, "pattern token '" + t + "' is not an action of the structure");
        }
  int letters = g.level == Level::Computation ? 1 : m.size();
  if (g.level == Level::Computation)
    for (int i = 0; i < m.n; ++i) letters *= m.A();
  b.next.assign(g.nq + 1, std::vector<int>(letters, sink));
  for (int q = 0; q < g.nq; ++q)
    for (int x = 0; x < letters; ++x)
      for (auto& [gd, to] : g.edges[q]) {
        bool hit = g.level == Level::Computation ? guard_matches_dir(gd, m, x) : guard_matches_state(gd, m, x);
        if (hit) {
          b.next[q][x] = to;
          break;
        }
      }
  return b;
}

bool accepts_cycle(const BoundGoal& b, const std::vector<int>& prefix, const std::vector<int>& cycle) {
  auto any = [&](const std::vector<int>& v) {
    for (int q : v)
      if (b.F[q]) return true;
    return false;
  };
  auto all = [&](const std::vector<int>& v) {
    for (int q : v)
      if (!b.F[q]) return false;
    return true;
  };
  switch (b.acc) {
    case Accept::Reach: return any(prefix) || any(cycle);
    case Accept::Safe: return all(prefix) && all(cycle);
    case Accept::Buchi: return any(cycle);
    case Accept::CoBuchi: return all(cycle);
  }
  return false;
}

bool holds_bound(const BoundGoal& b, const Cgs& m, const DirLasso& w) {
  if (w.cycle.empty()) fail(Code::MalformedDocument, "lasso cycle must be nonempty");
  std::vector<int> qs;
  int s = m.init, q = b.start(m);
  auto advance = [&](int d) {
    q = b.read_dir(q, d);
    s = m.step(s, d);
    q = b.read_state(q, s);
  };
  for (int d : w.prefix) {
    qs.push_back(q);
    advance(d);
  }
  std::map<std::tuple<int, int, size_t>, size_t> seen;
  size_t c = 0;
  while (true) {
    auto key = std::make_tuple(s, q, c);
    auto it = seen.find(key);
    if (it != seen.end()) {
      std::vector<int> pre(qs.begin(), qs.begin() + it->second), cyc(qs.begin() + it->second, qs.end());
      return accepts_cycle(b, pre, cyc);
    }
    seen[key] = qs.size();
    qs.push_back(q);
    advance(w.cycle[c]);
    c = (c + 1) % w.cycle.size();
  }
}

bool holds_on_lasso(const Objective& g, const Cgs& m, const DirLasso& w) {
  return holds_bound(bind(g, m), m, w);
}

std::vector<int> decided_states(const BoundGoal& b) {
  int n = b.size();
  std::vector<std::vector<int>> reach(n);
  for (int q = 0; q < n; ++q) {
    std::vector<char> seen(n, 0);
    std::vector<int> st{q};
    seen[q] = 1;
    while (!st.empty()) {
      int x = st.back();
      st.pop_back();
      reach[q].push_back(x);
      for (int y : b.next[x])
        if (!seen[y]) seen[y] = 1, st.push_back(y);
    }
  }
  std::vector<int> r(n, -1);
  for (int q = 0; q < n; ++q) {
    bool allF = true, noneF = true;
    for (int x : reach[q]) (b.F[x] ? noneF : allF) = false;
    switch (b.acc) {
      case Accept::Reach:
        if (b.F[q]) r[q] = 1;
        else if (noneF) r[q] = 0;
        break;
      case Accept::Safe:
        if (!b.F[q]) r[q] = 0;
        else if (allF) r[q] = 1;
        break;
      case Accept::Buchi:
      case Accept::CoBuchi:
        if (allF) r[q] = 1;
        else if (noneF) r[q] = 0;
        break;
    }
  }
  return r;
}

int decided_depth(const BoundGoal& b, const Cgs& m, int bound) {
  auto dec = decided_states(b);
  // positions carry (structure state, automaton state)
  std::set<std::pair<int, int>> cur{{m.init, b.start(m)}};
  for (int D = 0; D <= bound; ++D) {
    bool ok = true;
    for (auto [s, q] : cur) ok = ok && dec[q] >= 0;
    if (ok) return D;
    std::set<std::pair<int, int>> nx;
    for (auto [s, q] : cur)
      for (size_t k = 0; k < m.dirs[s].size(); ++k)
        for (int t : m.succ[s][k]) nx.insert({t, b.read_state(b.read_dir(q, m.dirs[s][k]), t)});
    cur = nx;
  }
  return -1;
}

namespace {

// verdict of a computation prefix whose automaton state is decided
int prefix_verdict(const BoundGoal& b, const std::vector<int>& dec, const Cgs& m, const std::vector<int>& k) {
  int s = m.init, q = b.start(m);
  for (int d : k) {
    q = b.read_dir(q, d);
    s = m.step(s, d);
    q = b.read_state(q, s);
  }
  return dec[q];
}

}  // namespace

Closure classify_closure(const Objective& g, const Cgs& m, int H) {
  if (g.level == Level::Trace) return Closure::TraceBased;
  if (g.level == Level::Run) return Closure::RunBased;
  if (!m.det) fail(Code::NondeterministicStructure, "closure classification needs a deterministic structure");
  BoundGoal b = bind(g, m);
  int D = decided_depth(b, m, H);
  if (D < 0) return Closure::Unknown;
  auto dec = decided_states(b);
  std::map<std::vector<int>, int> byrun;
  for (auto& k : enumerate_computations(m, D, 1000000)) {
    int v = prefix_verdict(b, dec, m, k);
    auto [it, fresh] = byrun.emplace(run_of(m, k), v);
    if (!fresh && it->second != v) return Closure::ComputationOnly;
  }
  return Closure::RunBased;
}

KClosedVerdict is_k_closed(const Objective& g, const Cgs& a, const Cgs& b, int H, long cap) {
  KClosedVerdict r;
  if (g.level == Level::Trace) {
    r.verdict = Tri::Yes;
    return r;
  }
  BoundGoal bg = bind(g, a);
  int D = decided_depth(bg, a, H);
  if (D < 0) return r;
  auto dec = decided_states(bg);
  auto k = k_congruence_classes(a, b, D, cap);
  std::map<int, size_t> first;
  for (size_t i = 0; i < k.comps.size(); ++i) {
    auto [it, fresh] = first.emplace(k.cls[i], i);
    if (!fresh && prefix_verdict(bg, dec, a, k.comps[it->second]) != prefix_verdict(bg, dec, a, k.comps[i])) {
      r.verdict = Tri::No;
      r.w1 = k.comps[it->second];
      r.w2 = k.comps[i];
      return r;
    }
  }
  r.verdict = Tri::Yes;
  return r;
}

namespace {

// strongly connected components, iterative Tarjan; returns component id per node
std::vector<int> sccs(const std::vector<std::vector<int>>& succ, const std::vector<bool>& keep) {
  int n = (int)succ.size();
  std::vector<int> idx(n, -1), low(n, 0), comp(n, -1), stack;
  std::vector<char> on(n, 0);
  int counter = 0, nc = 0;
  for (int r = 0; r < n; ++r) {
    if (!keep[r] || idx[r] >= 0) continue;
    std::vector<std::pair<int, size_t>> work{{r, 0}};
    idx[r] = low[r] = counter++;
    stack.push_back(r);
    on[r] = 1;
    while (!work.empty()) {
      auto& [v, pos] = work.back();
      if (pos < succ[v].size()) {
        int w = succ[v][pos++];
        if (!keep[w]) continue;
        if (idx[w] < 0) {
          idx[w] = low[w] = counter++;
          stack.push_back(w);
          on[w] = 1;
          work.push_back({w, 0});
        } else if (on[w]) {
          low[v] = std::min(low[v], idx[w]);
        }
      } else {
        int vv = v;
        work.pop_back();
        if (!work.empty()) low[work.back().first] = std::min(low[work.back().first], low[vv]);
        if (low[vv] == idx[vv]) {
          while (true) {
            int x = stack.back();
            stack.pop_back();
            on[x] = 0;
            comp[x] = nc;
            if (x == vv) break;
          }
          ++nc;
        }
      }
    }
  }
  return comp;
}

// shortest path from src to dst using only nodes with allowed[], at least `minlen` edges
std::vector<int> bfs_path(const std::vector<std::vector<int>>& succ, int src, int dst, const std::vector<bool>& allowed,
                          bool nonempty) {
  int n = (int)succ.size();
  std::vector<int> par(n, -2);
  std::deque<int> q;
  if (!nonempty) {
    if (src == dst) return {src};
    par[src] = -1;
    q.push_back(src);
  } else {
    // start from the successors of src so that the path has at least one edge
    for (int w : succ[src])
      if (allowed[w] && par[w] == -2) par[w] = src, q.push_back(w);
    if (par[dst] != -2) return {src, dst};
  }
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    if (v == dst) break;
    for (int w : succ[v])
      if (allowed[w] && par[w] == -2) {
        par[w] = v;
        q.push_back(w);
      }
  }
  if (par[dst] == -2) return {};
  std::vector<int> path{dst};
  int v = dst;
  while (true) {
    int p = par[v];
    if (p == -1) break;
    path.push_back(p);
    if (nonempty && p == src) break;
    v = p;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

Lasso<int> walk_to_lasso(const std::vector<int>& walk) {
  // walk ends with a node that occurred earlier
  Lasso<int> l;
  int last = walk.back();
  size_t j = std::find(walk.begin(), walk.end(), last) - walk.begin();
  l.prefix.assign(walk.begin(), walk.begin() + j);
  l.cycle.assign(walk.begin() + j, walk.end() - 1);
  return l;
}

Lasso<int> lasso_through(const std::vector<std::vector<int>>& succ, int x, const std::vector<bool>& cyc_ok) {
  std::vector<bool> all(succ.size(), true);
  auto head = bfs_path(succ, 0, x, all, false);
  auto loop = bfs_path(succ, x, x, cyc_ok, true);
  Lasso<int> l;
  l.prefix.assign(head.begin(), head.end() - 1);
  l.cycle.assign(loop.begin(), loop.end() - 1);
  return l;
}

}  // namespace

std::optional<Lasso<int>> find_accepting_lasso(const Graph& g, Accept acc) {
  int n = (int)g.succ.size();
  if (n == 0) return std::nullopt;
  std::vector<bool> all(n, true);
  switch (acc) {
    case Accept::Reach: {
      int hit = -1;
      for (int v = 0; v < n && hit < 0; ++v)
        if (g.good[v]) hit = v;
      if (hit < 0) return std::nullopt;
      // nodes are numbered in discovery order; take the nearest good node
      std::vector<int> dist(n, -1);
      std::deque<int> q{0};
      dist[0] = 0;
      hit = -1;
      while (!q.empty() && hit < 0) {
        int v = q.front();
        q.pop_front();
        if (g.good[v]) hit = v;
        for (int w : g.succ[v])
          if (dist[w] < 0) dist[w] = dist[v] + 1, q.push_back(w);
      }
      if (hit < 0) return std::nullopt;
      auto walk = bfs_path(g.succ, 0, hit, all, false);
      std::set<int> seen(walk.begin(), walk.end());
      while (true) {
        int nx = g.succ[walk.back()].front();
        walk.push_back(nx);
        if (!seen.insert(nx).second) break;
      }
      return walk_to_lasso(walk);
    }
    case Accept::Safe: {
      std::vector<bool> W = g.good;
      bool changed = true;
      while (changed) {
        changed = false;
        for (int v = 0; v < n; ++v) {
          if (!W[v]) continue;
          bool any = false;
          for (int w : g.succ[v]) any = any || W[w];
          if (!any) W[v] = false, changed = true;
        }
      }
      if (!W[0]) return std::nullopt;
      std::vector<int> walk{0};
      std::set<int> seen{0};
      while (true) {
        int nx = -1;
        for (int w : g.succ[walk.back()])
          if (W[w]) {
            nx = w;
            break;
          }
        walk.push_back(nx);
        if (!seen.insert(nx).second) break;
      }
      return walk_to_lasso(walk);
    }
    case Accept::Buchi:
    case Accept::CoBuchi: {
      std::vector<bool> keep = acc == Accept::Buchi ? all : g.good;
      auto comp = sccs(g.succ, keep);
      std::map<int, int> sz;
      for (int v = 0; v < n; ++v)
        if (comp[v] >= 0) sz[comp[v]]++;
      auto nontrivial = [&](int v) {
        if (comp[v] < 0) return false;
        if (sz[comp[v]] > 1) return true;
        for (int w : g.succ[v])
          if (w == v) return true;
        return false;
      };
      for (int v = 0; v < n; ++v) {
        if (!g.good[v] || !nontrivial(v)) continue;
        std::vector<bool> in(n, false);
        for (int u = 0; u < n; ++u) in[u] = comp[u] == comp[v];
        return lasso_through(g.succ, v, in);
      }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

}  // namespace eg
