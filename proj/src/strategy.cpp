#include "strategy.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>

namespace eg {

namespace {

template <class K>
class Interner {
 public:
  std::int64_t id(const K& k) const {
    std::lock_guard<std::mutex> g(mu_);
    auto it = ids_.find(k);
    if (it != ids_.end()) return it->second;
    std::int64_t i = (std::int64_t)keys_.size();
    ids_.emplace(k, i);
    keys_.push_back(k);
    return i;
  }
  K get(std::int64_t i) const {
    std::lock_guard<std::mutex> g(mu_);
    return keys_[i];
  }

 private:
  mutable std::mutex mu_;
  mutable std::map<K, std::int64_t> ids_;
  mutable std::vector<K> keys_;
};

int least_common(const Cgs& m, const std::vector<int>& states, int agent) {
  if (states.empty()) return -1;
  std::vector<int> cur = m.feas[states[0]][agent];
  for (size_t k = 1; k < states.size(); ++k) {
    std::vector<int> nx;
    auto& f = m.feas[states[k]][agent];
    std::set_intersection(cur.begin(), cur.end(), f.begin(), f.end(), std::back_inserter(nx));
    cur.swap(nx);
  }
  return cur.empty() ? -1 : cur[0];
}

bool feasible_at(const Cgs& m, int s, int agent, int a) {
  auto& f = m.feas[s][agent];
  return std::binary_search(f.begin(), f.end(), a);
}

struct TableImpl : Impl {
  Kind kind;
  std::shared_ptr<const Trie> t;
  TableImpl(Kind k, std::shared_ptr<const Trie> tr) : kind(k), t(std::move(tr)) {}

  std::int64_t child(std::int64_t node, std::int64_t sym) const {
    if (node < 0) return kTailMem;
    auto& kids = t->nodes[node].kids;
    auto it = kids.find(sym);
    return it == kids.end() ? kTailMem : it->second;
  }
  std::int64_t start(const Cgs& m, int s0) const override {
    if (kind == Kind::Computation) return 0;
    Obs o{-1, -1, s0, m.obs[s0]};
    return child(0, symbol(kind, o));
  }
  int act(const Cgs&, std::int64_t mem) const override { return mem < 0 ? -1 : t->nodes[mem].act; }
  std::int64_t step(const Cgs&, std::int64_t mem, const Obs& o) const override {
    return child(mem, symbol(kind, o));
  }
};

struct MachineImpl : Impl {
  Kind kind;
  std::shared_ptr<const MachineSpec> s;
  MachineImpl(Kind k, std::shared_ptr<const MachineSpec> sp) : kind(k), s(std::move(sp)) {}

  std::int64_t start(const Cgs&, int) const override { return s->init; }
  int act(const Cgs&, std::int64_t mem) const override { return mem < 0 ? -1 : s->out[mem]; }
  std::int64_t step(const Cgs&, std::int64_t mem, const Obs& o) const override {
    if (mem < 0) return kTailMem;
    auto& nx = s->next[mem];
    auto it = nx.find(symbol(kind, o));
    return it == nx.end() ? kTailMem : it->second;
  }
};

struct PathImpl : Impl {
  Kind kind;
  PathSpec p;
  std::shared_ptr<const Trie> t;
  static constexpr std::int64_t kOn = std::int64_t(1) << 32;

  PathImpl(Kind k, PathSpec ps, std::shared_ptr<const Trie> tr) : kind(k), p(std::move(ps)), t(std::move(tr)) {}

  std::int64_t child(std::int64_t node, std::int64_t sym) const {
    if (node < 0) return kTailMem;
    auto& kids = t->nodes[node].kids;
    auto it = kids.find(sym);
    return it == kids.end() ? kTailMem : it->second;
  }
  static std::int64_t on(int pos, std::int64_t tn) { return (std::int64_t)(pos + 1) * kOn + (tn + 1); }
  std::int64_t start(const Cgs& m, int s0) const override {
    if (kind == Kind::Computation) return on(0, 0);
    std::int64_t sym = symbol(kind, Obs{-1, -1, s0, m.obs[s0]});
    std::int64_t tn = child(0, sym);
    return sym == p.first ? on(0, tn) : tn;
  }
  int act(const Cgs&, std::int64_t mem) const override {
    if (mem >= kOn) return p.act[mem / kOn - 1];
    return mem < 0 ? -1 : t->nodes[mem].act;
  }
  std::int64_t step(const Cgs&, std::int64_t mem, const Obs& o) const override {
    std::int64_t sym = symbol(kind, o);
    if (mem >= kOn) {
      int pos = (int)(mem / kOn - 1);
      std::int64_t tn = child(mem % kOn - 1, sym);
      if (sym == p.expect[pos]) {
        int nx = pos + 1 == (int)p.act.size() ? p.loop : pos + 1;
        return on(nx, tn);
      }
      return tn;
    }
    return child(mem, sym);
  }
};

// computation-based view of a run- or trace-based strategy in a fixed structure
struct LoweredImpl : Impl {
  Strategy inner;
  std::shared_ptr<const Cgs> a;
  mutable std::mutex mu;
  mutable Beliefs B;
  Interner<std::tuple<std::int64_t, int, int>> keys;

  LoweredImpl(Strategy f, std::shared_ptr<const Cgs> m) : inner(std::move(f)), a(std::move(m)), B(*a) {}

  std::int64_t start(const Cgs&, int s0) const override {
    int b;
    {
      std::lock_guard<std::mutex> g(mu);
      b = B.initial_at(s0);
    }
    return keys.id({inner.impl->start(*a, s0), s0, b});
  }
  int act(const Cgs&, std::int64_t mem) const override {
    auto [im, s, b] = keys.get(mem);
    int x = inner.impl->act(*a, im);
    if (x >= 0) return x;
    std::lock_guard<std::mutex> g(mu);
    return B.tail(b, inner.agent);
  }
  std::int64_t step(const Cgs&, std::int64_t mem, const Obs& o) const override {
    auto [im, s, b] = keys.get(mem);
    int k = a->slot(s, o.dir);
    if (k < 0) return keys.id({kTailMem, s, b});  // unreachable direction, never queried
    int t = a->succ[s][k][0];
    Obs io{o.dir, s, t, a->obs[t]};
    int nb;
    {
      std::lock_guard<std::mutex> g(mu);
      nb = inner.kind == Kind::Trace ? B.advance(Kind::Trace, b, io) : B.initial_at(t);
    }
    return keys.id({inner.impl->step(*a, im, io), t, nb});
  }
};

struct TildeImpl : Impl {
  Strategy inner;
  std::shared_ptr<const Cgs> a, b;
  Interner<std::pair<std::int64_t, int>> keys;

  TildeImpl(Strategy f, std::shared_ptr<const Cgs> x, std::shared_ptr<const Cgs> y)
      : inner(std::move(f)), a(std::move(x)), b(std::move(y)) {}

  std::int64_t start(const Cgs&, int) const override { return keys.id({inner.impl->start(*a, a->init), a->init}); }
  int act(const Cgs&, std::int64_t mem) const override { return inner.impl->act(*a, keys.get(mem).first); }
  std::int64_t step(const Cgs&, std::int64_t mem, const Obs& o) const override {
    auto [im, s] = keys.get(mem);
    // least direction of b realising the observed move
    int d = -1;
    for (size_t k = 0; k < b->dirs[o.from].size() && d < 0; ++k)
      if (std::binary_search(b->succ[o.from][k].begin(), b->succ[o.from][k].end(), o.to)) d = b->dirs[o.from][k];
    if (d < 0 || a->slot(s, d) < 0) return keys.id({kTailMem, s});
    int t = a->step(s, d);
    return keys.id({inner.impl->step(*a, im, Obs{d, s, t, a->obs[t]}), t});
  }
};

struct ClassViewImpl : Impl {
  Strategy inner;
  std::shared_ptr<const Cgs> rel;  // copy observing bisimulation classes
  ClassViewImpl(Strategy f, std::shared_ptr<const Cgs> r) : inner(std::move(f)), rel(std::move(r)) {}

  std::int64_t start(const Cgs&, int s0) const override { return inner.impl->start(*rel, s0); }
  int act(const Cgs&, std::int64_t mem) const override { return inner.impl->act(*rel, mem); }
  std::int64_t step(const Cgs&, std::int64_t mem, const Obs& o) const override {
    return inner.impl->step(*rel, mem, Obs{o.dir, o.from, o.to, rel->obs[o.to]});
  }
};

}  // namespace

void Trie::put(const std::vector<std::int64_t>& key, int act) {
  int cur = 0;
  for (auto sym : key) {
    auto it = nodes[cur].kids.find(sym);
    if (it == nodes[cur].kids.end()) {
      nodes.push_back(Node{});
      int id = (int)nodes.size() - 1;
      nodes[cur].kids[sym] = id;
      cur = id;
    } else {
      cur = it->second;
    }
  }
  nodes[cur].act = act;
}

int Trie::get(const std::vector<std::int64_t>& key) const {
  int cur = 0;
  for (auto sym : key) {
    auto it = nodes[cur].kids.find(sym);
    if (it == nodes[cur].kids.end()) return -1;
    cur = it->second;
  }
  return nodes[cur].act;
}

Strategy table_strategy(Kind k, int agent, int depth, Trie t) {
  Strategy f;
  f.kind = k;
  f.agent = agent;
  f.depth = depth;
  auto tp = std::make_shared<const Trie>(std::move(t));
  f.table = tp;
  f.impl = std::make_shared<TableImpl>(k, tp);
  return f;
}

Strategy tail_strategy(Kind k, int agent) { return table_strategy(k, agent, 0, Trie{}); }

Strategy constant_strategy(Kind k, int agent, int act) {
  MachineSpec s;
  s.init = 0;
  s.out = {act};
  s.next.resize(1);
  Strategy f = machine_strategy(k, agent, s);
  // a constant machine ignores its input: every symbol loops
  auto impl = std::make_shared<MachineImpl>(k, f.machine);
  struct Const : Impl {
    int a;
    explicit Const(int x) : a(x) {}
    std::int64_t start(const Cgs&, int) const override { return 0; }
    int act(const Cgs&, std::int64_t) const override { return a; }
    std::int64_t step(const Cgs&, std::int64_t, const Obs&) const override { return 0; }
  };
  f.impl = std::make_shared<Const>(act);
  f.machine = nullptr;
  return f;
}

Strategy machine_strategy(Kind k, int agent, MachineSpec spec) {
  Strategy f;
  f.kind = k;
  f.agent = agent;
  auto sp = std::make_shared<const MachineSpec>(std::move(spec));
  f.machine = sp;
  f.impl = std::make_shared<MachineImpl>(k, sp);
  return f;
}

Strategy path_strategy(Kind k, int agent, PathSpec path, Trie off) {
  Strategy f;
  f.kind = k;
  f.agent = agent;
  f.impl = std::make_shared<PathImpl>(k, std::move(path), std::make_shared<const Trie>(std::move(off)));
  return f;
}

// ---------------------------------------------------------------- json

namespace {

std::int64_t symbol_from_json(Kind k, const json& j, const Cgs& m) {
  switch (k) {
    case Kind::Computation: return m.dir_from_json(j);
    case Kind::Run:
      if (!j.is_string()) fail(Code::MalformedDocument, "run observations are state ids");
      return m.state(j.get<std::string>());
    case Kind::Trace: return (std::int64_t)m.val_from_json(j);
  }
  return 0;
}

json symbol_to_json(Kind k, std::int64_t s, const Cgs& m) {
  switch (k) {
    case Kind::Computation: return m.dir_json((int)s);
    case Kind::Run: return m.names[s];
    case Kind::Trace: return m.val_json((Val)s);
  }
  return nullptr;
}

int action_from_json(const json& j, const Cgs& m) {
  if (j.is_null()) return -1;
  if (!j.is_string()) fail(Code::MalformedDocument, "actions are strings");
  return m.action(j.get<std::string>());
}

}  // namespace

Strategy strategy_from_json(const json& doc, const Cgs& m) {
  if (!doc.is_object() || !doc.contains("kind") || !doc.contains("agent"))
    fail(Code::MalformedDocument, "strategy needs kind and agent");
  Kind k = parse_kind(doc["kind"].get<std::string>());
  int agent = doc["agent"].get<int>() - 1;
  if (agent < 0 || agent >= m.n) fail(Code::MalformedDocument, "strategy agent out of range");
  if (doc.contains("machine")) {
    const json& mj = doc["machine"];
    MachineSpec s;
    s.init = mj.value("init", 0);
    for (auto& o : mj.at("out")) s.out.push_back(action_from_json(o, m));
    s.next.resize(s.out.size());
    for (auto& e : mj.value("next", json::array())) {
      int from = e.at("from").get<int>(), to = e.at("to").get<int>();
      if (from < 0 || from >= (int)s.out.size() || to < 0 || to >= (int)s.out.size())
        fail(Code::MalformedDocument, "machine transition out of range");
      s.next[from][symbol_from_json(k, e.at("obs"), m)] = to;
    }
    if (s.init < 0 || s.init >= (int)s.out.size()) fail(Code::MalformedDocument, "machine initial state out of range");
    return machine_strategy(k, agent, s);
  }
  if (doc.contains("tail") && doc["tail"] != "least") fail(Code::MalformedDocument, "only the 'least' tail rule exists");
  Trie t;
  for (auto& e : doc.value("table", json::array())) {
    std::vector<std::int64_t> key;
    for (auto& o : e.at("obs")) key.push_back(symbol_from_json(k, o, m));
    t.put(key, action_from_json(e.at("act"), m));
  }
  return table_strategy(k, agent, doc.value("depth", 0), t);
}

json strategy_to_json(const Strategy& f, const Cgs& m) {
  json d{{"kind", kind_name(f.kind)}, {"agent", f.agent + 1}};
  if (f.machine) {
    json out = json::array(), next = json::array();
    for (size_t q = 0; q < f.machine->out.size(); ++q) {
      int a = f.machine->out[q];
      out.push_back(a < 0 ? json(nullptr) : json(m.actions[a]));
      for (auto& [sym, to] : f.machine->next[q])
        next.push_back({{"from", q}, {"obs", symbol_to_json(f.kind, sym, m)}, {"to", to}});
    }
    d["machine"] = {{"init", f.machine->init}, {"out", out}, {"next", next}};
    return d;
  }
  if (f.table) {
    json rows = json::array();
    std::vector<std::int64_t> key;
    std::function<void(int)> walk = [&](int node) {
      auto& nd = f.table->nodes[node];
      if (nd.act >= 0) {
        json obs = json::array();
        for (auto s : key) obs.push_back(symbol_to_json(f.kind, s, m));
        rows.push_back({{"obs", obs}, {"act", m.actions[nd.act]}});
      }
      for (auto& [sym, c] : nd.kids) {
        key.push_back(sym);
        walk(c);
        key.pop_back();
      }
    };
    walk(0);
    d["depth"] = f.depth;
    d["table"] = rows;
    d["tail"] = "least";
    return d;
  }
  // strategies without a finite table form are reported by their depth-bounded table
  auto t = f.kind == Kind::Computation ? materialize(f, m, std::max(f.depth, 1), 100000) : f;
  if (t.table) {
    json r = strategy_to_json(t, m);
    r["derived"] = true;
    return r;
  }
  d["opaque"] = true;
  return d;
}

Profile profile_from_json(const json& doc, const Cgs& m) {
  const json& arr = doc.is_object() && doc.contains("strategies") ? doc["strategies"] : doc;
  if (!arr.is_array()) fail(Code::MalformedDocument, "profile must be a list of strategies");
  Profile p;
  for (auto& s : arr) p.push_back(strategy_from_json(s, m));
  std::sort(p.begin(), p.end(), [](auto& x, auto& y) { return x.agent < y.agent; });
  return p;
}

json profile_to_json(const Profile& p, const Cgs& m) {
  json arr = json::array();
  for (auto& f : p) arr.push_back(strategy_to_json(f, m));
  return {{"kind", p.empty() ? "comp" : kind_name(p[0].kind)}, {"strategies", arr}};
}

// ---------------------------------------------------------------- beliefs

int Beliefs::intern(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  auto it = ids_.find(v);
  if (it != ids_.end()) return it->second;
  int id = (int)sets_.size();
  sets_.push_back(v);
  ids_.emplace(std::move(v), id);
  return id;
}

int Beliefs::advance(Kind k, int bel, const Obs& o) {
  if (k == Kind::Run) return intern({o.to});
  std::int64_t sym = symbol(k, o);
  auto key = std::make_tuple((int)k, bel, sym);
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  std::vector<int> nx;
  for (int t : sets_[bel]) {
    if (k == Kind::Computation) {
      int slot = m_.slot(t, o.dir);
      if (slot >= 0) nx.insert(nx.end(), m_.succ[t][slot].begin(), m_.succ[t][slot].end());
    } else {
      for (auto& v : m_.succ[t])
        for (int u : v)
          if (m_.obs[u] == o.val) nx.push_back(u);
    }
  }
  int id = intern(nx);
  memo_[key] = id;
  return id;
}

int Beliefs::tail(int bel, int agent) const { return least_common(m_, sets_[bel], agent); }

bool Beliefs::allows(int bel, int agent, int act) const {
  for (int t : sets_[bel])
    if (!feasible_at(m_, t, agent, act)) return false;
  return !sets_[bel].empty();
}

// ---------------------------------------------------------------- machines

int Mach::go(int node, const Obs& o) const {
  auto it = next[node].find(symbol(kind, o));
  if (it == next[node].end()) fail(Code::Infeasible, "strategy machine has no move for an observation");
  return it->second;
}

Mach compile(const Strategy& f, const Cgs& m, long cap, int s0) {
  if (s0 < 0) s0 = m.init;
  Mach M;
  M.kind = f.kind;
  M.agent = f.agent;
  Beliefs B(m);
  std::map<std::pair<std::int64_t, int>, int> ids;
  auto get = [&](std::int64_t mem, int bel, int parent, std::int64_t via) {
    auto key = std::make_pair(mem, bel);
    auto it = ids.find(key);
    if (it != ids.end()) return it->second;
    if ((long)M.out.size() >= cap) fail(Code::BudgetExceeded, "strategy compilation exceeded the node cap");
    int id = (int)M.out.size();
    ids.emplace(key, id);
    M.out.push_back(-2);
    M.bel.push_back(bel);
    M.mem.push_back(mem);
    M.next.emplace_back();
    M.parent.push_back(parent);
    M.via.push_back(via);
    return id;
  };
  get(f.impl->start(m, s0), B.initial_at(s0), -1, 0);
  for (size_t node = 0; node < M.out.size(); ++node) {
    std::int64_t mem = M.mem[node];
    int bel = M.bel[node];
    int a = f.impl->act(m, mem);
    if (a < 0) a = B.tail(bel, f.agent);
    else if (!B.allows(bel, f.agent, a)) a = -1;
    M.out[node] = a;
    if (a < 0) {
      if (M.feasible) M.feasible = false, M.bad = (int)node;
      continue;
    }
    for (int t : B.get(bel))
      for (size_t k = 0; k < m.dirs[t].size(); ++k) {
        int d = m.dirs[t][k];
        if (m.action_at(d, f.agent) != a) continue;
        for (int u : m.succ[t][k]) {
          Obs o{d, t, u, m.obs[u]};
          std::int64_t sym = symbol(f.kind, o);
          if (M.next[node].count(sym)) continue;
          std::int64_t nm = f.impl->step(m, mem, o);
          int nb = B.advance(f.kind, bel, o);
          int id = get(nm, nb, (int)node, sym);
          M.next[node][sym] = id;
        }
      }
  }
  for (size_t node = 0; node < M.out.size(); ++node) M.sets.push_back(B.get(M.bel[node]));
  return M;
}

namespace {

json render_path(const Mach& M, int node, const Cgs& m) {
  std::vector<std::int64_t> syms;
  for (int v = node; M.parent[v] >= 0; v = M.parent[v]) syms.push_back(M.via[v]);
  std::reverse(syms.begin(), syms.end());
  json obs = json::array();
  for (auto s : syms) obs.push_back(symbol_to_json(M.kind, s, m));
  return obs;
}

}  // namespace

Feasibility is_feasible(const Strategy& f, const Cgs& m, long cap) {
  Mach M = compile(f, m, cap);
  Feasibility r;
  r.ok = M.feasible;
  if (!r.ok) r.witness = {{"agent", f.agent + 1}, {"kind", kind_name(f.kind)}, {"obs", render_path(M, M.bad, m)}};
  return r;
}

int prescribe(const Strategy& f, const Cgs& m, const std::vector<std::int64_t>& obs) {
  Beliefs B(m);
  int bel = B.initial();
  std::int64_t mem = f.impl->start(m, m.init);
  size_t i0 = 0;
  if (f.kind != Kind::Computation) {
    if (obs.empty()) fail(Code::AlphabetMismatch, "run and trace observations start with the initial observation");
    std::int64_t want = f.kind == Kind::Run ? m.init : (std::int64_t)m.obs[m.init];
    if (obs[0] != want) fail(Code::AlphabetMismatch, "observation sequence does not start at the initial state");
    i0 = 1;
  }
  for (size_t i = i0; i < obs.size(); ++i) {
    Obs o;
    const auto& cur = B.get(bel);
    switch (f.kind) {
      case Kind::Computation:
        o.dir = (int)obs[i];
        if (cur.size() == 1 && m.slot(cur[0], o.dir) >= 0) {
          o.from = cur[0];
          auto& nx = m.next(cur[0], o.dir);
          o.to = nx[0];
          o.val = m.obs[o.to];
        }
        break;
      case Kind::Run:
        o.from = B.get(bel)[0];
        o.to = (int)obs[i];
        if (o.to < 0 || o.to >= m.size()) fail(Code::UnknownState, "unknown state in observation");
        o.val = m.obs[o.to];
        for (size_t k = 0; k < m.dirs[o.from].size() && o.dir < 0; ++k)
          if (std::binary_search(m.succ[o.from][k].begin(), m.succ[o.from][k].end(), o.to)) o.dir = m.dirs[o.from][k];
        break;
      case Kind::Trace: o.val = (Val)obs[i]; break;
    }
    bel = B.advance(f.kind, bel, o);
    if (B.get(bel).empty()) fail(Code::IllegalDirection, "observation sequence is not realizable");
    mem = f.impl->step(m, mem, o);
  }
  int a = f.impl->act(m, mem);
  return a >= 0 ? a : B.tail(bel, f.agent);
}

int prescribe_comp(const Strategy& f, const Cgs& m, const std::vector<int>& comp) {
  if (f.kind != Kind::Computation) fail(Code::AlphabetMismatch, "strategy does not read computations");
  return prescribe(f, m, std::vector<std::int64_t>(comp.begin(), comp.end()));
}

void check_profile(const Profile& p, const Cgs& m) {
  if ((int)p.size() != m.n) fail(Code::MalformedDocument, "profile needs one strategy per agent");
  for (int i = 0; i < m.n; ++i) {
    if (p[i].agent != i) fail(Code::MalformedDocument, "profile strategies must be listed in agent order");
    if (p[i].kind != p[0].kind) fail(Code::MixedStrategyKinds, "profile mixes strategy kinds");
  }
}

std::vector<Mach> compile_profile(const Profile& p, const Cgs& m, long cap) {
  check_profile(p, m);
  std::vector<Mach> ms;
  for (auto& f : p) ms.push_back(compile(f, m, cap));
  return ms;
}

DirLasso induced_outcome(const Cgs& m, const Profile& p, long cap) {
  if (!m.det) fail(Code::NondeterministicStructure, "induced outcome needs a deterministic structure");
  auto ms = compile_profile(p, m, cap);
  std::vector<int> nodes(m.n, 0);
  int s = m.init;
  std::map<std::pair<int, std::vector<int>>, size_t> seen;
  std::vector<int> dirs;
  while (true) {
    auto key = std::make_pair(s, nodes);
    auto it = seen.find(key);
    if (it != seen.end()) {
      DirLasso w;
      w.prefix.assign(dirs.begin(), dirs.begin() + it->second);
      w.cycle.assign(dirs.begin() + it->second, dirs.end());
      w.normalize();
      return w;
    }
    seen.emplace(key, dirs.size());
    std::vector<int> acts(m.n);
    for (int i = 0; i < m.n; ++i) {
      acts[i] = ms[i].out[nodes[i]];
      if (acts[i] < 0) fail(Code::Infeasible, "agent " + std::to_string(i + 1) + " has no feasible action on the play");
    }
    int d = m.encode(acts);
    int t = m.step(s, d);
    Obs o{d, s, t, m.obs[t]};
    for (int i = 0; i < m.n; ++i) nodes[i] = ms[i].go(nodes[i], o);
    dirs.push_back(d);
    s = t;
  }
}

// ---------------------------------------------------------------- invariance

namespace {

// Visits every realizable computation of length <= H together with the
// action f prescribes after it (f computation-based).
void walk_comps(const Strategy& f, const Cgs& m, int H,
                const std::function<void(const std::vector<int>&, const std::vector<int>&, int)>& visit) {
  std::vector<int> comp, run{m.init};
  std::function<void(std::int64_t)> go = [&](std::int64_t mem) {
    int s = run.back();
    int a = f.impl->act(m, mem);
    if (a < 0) a = least_common(m, {s}, f.agent);
    visit(comp, run, a);
    if ((int)comp.size() == H) return;
    for (size_t k = 0; k < m.dirs[s].size(); ++k) {
      int d = m.dirs[s][k], t = m.succ[s][k][0];
      comp.push_back(d);
      run.push_back(t);
      go(f.impl->step(m, mem, Obs{d, s, t, m.obs[t]}));
      comp.pop_back();
      run.pop_back();
    }
  };
  go(f.impl->start(m, m.init));
}

template <class Key>
InvVerdict group_check(const Strategy& f, const Cgs& m, int H,
                       const std::function<Key(const std::vector<int>&, const std::vector<int>&)>& key) {
  if (f.kind != Kind::Computation) fail(Code::AlphabetMismatch, "invariance checks take computation-based strategies");
  if (!m.det) fail(Code::NondeterministicStructure, "invariance checks need a deterministic structure");
  InvVerdict r;
  std::map<Key, std::pair<int, std::vector<int>>> seen;
  walk_comps(f, m, H, [&](const std::vector<int>& comp, const std::vector<int>& run, int a) {
    if (!r.ok) return;
    auto [it, fresh] = seen.emplace(key(comp, run), std::make_pair(a, comp));
    if (!fresh && it->second.first != a) {
      r.ok = false;
      r.w1 = it->second.second;
      r.w2 = comp;
    }
  });
  return r;
}

}  // namespace

InvVerdict is_run_invariant(const Strategy& f, const Cgs& m, int H) {
  return group_check<std::vector<int>>(f, m, H, [](auto&, auto& run) { return run; });
}

InvVerdict is_trace_invariant(const Strategy& f, const Cgs& m, int H) {
  return group_check<std::vector<Val>>(f, m, H, [&](auto&, auto& run) { return trace_of(m, run); });
}

InvVerdict is_k_invariant(const Strategy& f, const Cgs& a, const Cgs& b, int H, long cap) {
  KOracle K(a, b, cap);
  return group_check<std::pair<int, int>>(f, a, H, [&](auto& comp, auto&) {
    return std::make_pair((int)comp.size(), K.at((int)comp.size()).block(comp));
  });
}

InvVerdict is_bisimulation_invariant(const Strategy& f, const Cgs& m, int H) {
  if (f.kind != Kind::Run) fail(Code::AlphabetMismatch, "bisimulation invariance concerns run-based strategies");
  if (!m.det) fail(Code::NondeterministicStructure, "invariance checks need a deterministic structure");
  auto cls = bisim_classes(m);
  InvVerdict r;
  std::map<std::vector<int>, std::pair<int, std::vector<int>>> seen;
  std::vector<int> run{m.init}, key{cls[m.init]}, comp;
  std::function<void(std::int64_t)> go = [&](std::int64_t mem) {
    if (!r.ok) return;
    int s = run.back();
    int a = f.impl->act(m, mem);
    if (a < 0) a = least_common(m, {s}, f.agent);
    auto [it, fresh] = seen.emplace(key, std::make_pair(a, comp));
    if (!fresh && it->second.first != a) {
      r.ok = false;
      r.w1 = it->second.second;
      r.w2 = comp;
      return;
    }
    if ((int)comp.size() == H) return;
    std::set<int> done;
    for (size_t k = 0; k < m.dirs[s].size(); ++k) {
      int t = m.succ[s][k][0];
      if (!done.insert(t).second) continue;
      run.push_back(t);
      key.push_back(cls[t]);
      comp.push_back(m.dirs[s][k]);
      go(f.impl->step(m, mem, Obs{m.dirs[s][k], s, t, m.obs[t]}));
      run.pop_back();
      key.pop_back();
      comp.pop_back();
    }
  };
  go(f.impl->start(m, m.init));
  return r;
}

// ---------------------------------------------------------------- transports

Strategy lower_run(const Strategy& f, const Cgs& m) {
  if (f.kind != Kind::Run) fail(Code::AlphabetMismatch, "lower_run takes a run-based strategy");
  if (!m.det) fail(Code::NondeterministicStructure, "lowering needs a deterministic structure");
  Strategy g;
  g.kind = Kind::Computation;
  g.agent = f.agent;
  g.depth = f.depth;
  g.impl = std::make_shared<LoweredImpl>(f, std::make_shared<const Cgs>(m));
  return g;
}

Strategy lower_trace(const Strategy& f, const Cgs& m) {
  if (f.kind != Kind::Trace) fail(Code::AlphabetMismatch, "lower_trace takes a trace-based strategy");
  if (!m.det) fail(Code::NondeterministicStructure, "lowering needs a deterministic structure");
  Strategy g;
  g.kind = Kind::Computation;
  g.agent = f.agent;
  g.depth = f.depth;
  g.impl = std::make_shared<LoweredImpl>(f, std::make_shared<const Cgs>(m));
  return g;
}

Strategy lift_run_invariant(const Strategy& f, const Cgs& m, int H) {
  auto inv = is_run_invariant(f, m, H);
  if (!inv.ok) fail(Code::NotRunInvariant, "strategy distinguishes two computations with the same run");
  Trie t;
  walk_comps(f, m, H - 1, [&](const std::vector<int>&, const std::vector<int>& run, int a) {
    t.put(std::vector<std::int64_t>(run.begin(), run.end()), a);
  });
  return table_strategy(Kind::Run, f.agent, H, t);
}

Strategy transport_tilde(const Strategy& f, const Cgs& a, const Cgs& b, int H) {
  if (f.kind != Kind::Run) fail(Code::AlphabetMismatch, "tilde transport takes a run-based strategy");
  if (!are_bisimilar(a, b)) fail(Code::NotBisimilar, "tilde transport needs bisimilar structures");
  if (!is_bisimulation_invariant(f, a, H).ok)
    fail(Code::NotBisimulationInvariant, "strategy differs on statewise bisimilar histories");
  Strategy g;
  g.kind = Kind::Run;
  g.agent = f.agent;
  g.depth = f.depth;
  g.impl = std::make_shared<TildeImpl>(f, std::make_shared<const Cgs>(a), std::make_shared<const Cgs>(b));
  return g;
}

Strategy class_view(const Strategy& inner, const Cgs& m) {
  if (inner.kind != Kind::Trace) fail(Code::AlphabetMismatch, "class view wraps a strategy over class observations");
  Strategy g;
  g.kind = Kind::Run;
  g.agent = inner.agent;
  g.depth = inner.depth;
  g.impl = std::make_shared<ClassViewImpl>(inner, std::make_shared<const Cgs>(relabel_observations(m, bisim_classes(m))));
  return g;
}

Strategy materialize(const Strategy& f, const Cgs& m, int H, long cap) {
  if (f.kind != Kind::Computation) fail(Code::AlphabetMismatch, "materialize takes a computation-based strategy");
  Trie t;
  long count = 0;
  walk_comps(f, m, H - 1, [&](const std::vector<int>& comp, const std::vector<int>&, int a) {
    if (++count > cap) fail(Code::BudgetExceeded, "table materialization exceeded the cap");
    t.put(std::vector<std::int64_t>(comp.begin(), comp.end()), a);
  });
  return table_strategy(Kind::Computation, f.agent, H, t);
}

// ---------------------------------------------------------------- f^K

namespace {

struct CompInfo {
  int a1 = -1, a2 = -1, end = -1;
};

}  // namespace

FKResult build_fK(const Strategy& f1, const Strategy& f2, const Cgs& a, const Cgs& b, int H, long cap) {
  if (a.n != 2) fail(Code::NotTwoPlayer, "the f^K construction is for two-player games");
  if (f1.kind != Kind::Computation || f2.kind != Kind::Computation)
    fail(Code::AlphabetMismatch, "f^K takes computation-based strategies");
  if (!are_bisimilar(a, b)) fail(Code::NotBisimilar, "f^K needs bisimilar structures");
  if (!is_run_invariant(f1, a, H).ok || !is_run_invariant(f2, a, H).ok)
    fail(Code::NotRunInvariant, "f^K inputs must be run-invariant");
  std::map<std::vector<int>, CompInfo> info;
  long count = 0;
  walk_comps(f1, a, H, [&](const std::vector<int>& comp, const std::vector<int>& run, int x) {
    if (++count > cap) fail(Code::BudgetExceeded, "f^K enumeration exceeded the cap");
    info[comp].a1 = x;
    info[comp].end = run.back();
  });
  walk_comps(f2, a, H, [&](const std::vector<int>& comp, const std::vector<int>&, int x) { info[comp].a2 = x; });
  KOracle K(a, b, cap);
  FKResult r;
  r.rep1[{}] = {};
  r.rep2[{}] = {};
  r.clause1[{}] = "base";
  r.clause2[{}] = "base";
  auto with = [](std::vector<int> v, int d) {
    v.push_back(d);
    return v;
  };
  // computations in order of length, so prefixes are resolved first
  std::vector<std::vector<int>> order;
  for (auto& [c, i] : info) order.push_back(c);
  std::stable_sort(order.begin(), order.end(), [](auto& x, auto& y) { return x.size() < y.size(); });
  for (auto& kappa : order) {
    if (kappa.empty() || (int)kappa.size() > H - 1) continue;
    std::vector<int> pre(kappa.begin(), kappa.end() - 1);
    for (int who = 0; who < 2; ++who) {
      const auto& r0 = who == 0 ? r.rep1.at(pre) : r.rep2.at(pre);
      const CompInfo& ci = info.at(r0);
      int x1 = ci.a1, x2 = ci.a2, s = ci.end;
      std::vector<int> rep;
      std::string clause;
      if (K.congruent(with(r0, a.encode({x1, x2})), kappa)) {
        rep = with(r0, a.encode({x1, x2}));
        clause = who == 0 ? "i.1" : "i.2";
      }
      if (rep.empty()) {
        // keep the inheriting player's own action, vary the other
        for (int y : a.feas[s][who == 0 ? 1 : 0]) {
          int d = who == 0 ? a.encode({x1, y}) : a.encode({y, x2});
          if (K.congruent(with(r0, d), kappa)) {
            rep = with(r0, d);
            clause = who == 0 ? "ii.1" : "ii.2";
            break;
          }
        }
      }
      if (rep.empty())
        for (int y1 : a.feas[s][0]) {
          for (int y2 : a.feas[s][1])
            if (K.congruent(with(r0, a.encode({y1, y2})), kappa)) {
              rep = with(r0, a.encode({y1, y2}));
              clause = who == 0 ? "iii.1" : "iii.2";
              break;
            }
          if (!rep.empty()) break;
        }
      if (rep.empty()) fail(Code::NotBisimilar, "no K-congruent extension exists; structures are not bisimilar");
      (who == 0 ? r.rep1 : r.rep2)[kappa] = rep;
      (who == 0 ? r.clause1 : r.clause2)[kappa] = clause;
    }
  }
  Trie t1, t2;
  for (auto& [kappa, rep] : r.rep1) {
    if ((int)kappa.size() > H - 1) continue;
    std::vector<std::int64_t> key(kappa.begin(), kappa.end());
    t1.put(key, info.at(rep).a1);
    t2.put(key, info.at(r.rep2.at(kappa)).a2);
  }
  r.f1 = table_strategy(Kind::Computation, 0, H, t1);
  r.f2 = table_strategy(Kind::Computation, 1, H, t2);
  return r;
}

Strategy build_k_invariant_deviation(const FKResult& fk, const Strategy& f1, const Strategy& f2, const Strategy& g2,
                                     const Cgs& a, const Cgs& b, int H, long cap, const Strategy* h2) {
  if (a.n != 2) fail(Code::NotTwoPlayer, "the deviation construction is for two-player games");
  if (g2.agent != 1 || g2.kind != Kind::Computation)
    fail(Code::AlphabetMismatch, "deviation must be a computation-based strategy of player 2");
  Strategy h = h2 ? *h2 : tail_strategy(Kind::Computation, 1);
  auto play = induced_outcome(a, {fk.f1, g2}, cap);
  std::vector<int> dseq;
  for (int k = 0; k < H; ++k) dseq.push_back(play.at(k));
  KOracle K(a, b, cap);
  Trie t;
  long count = 0;
  walk_comps(h, a, H - 1, [&](const std::vector<int>& kappa, const std::vector<int>& run, int hact) {
    if (++count > cap) fail(Code::BudgetExceeded, "deviation construction exceeded the cap");
    int k = (int)kappa.size();
    std::vector<int> dk(dseq.begin(), dseq.begin() + k);
    int act = hact;
    if (k == 0 || K.congruent(kappa, dk)) {
      const auto& r = fk.rep1.at(dk);
      std::vector<int> target(dseq.begin(), dseq.begin() + k + 1);
      int x1 = prescribe_comp(f1, a, r), x2 = prescribe_comp(f2, a, r);
      auto ext = r;
      ext.push_back(a.encode({x1, x2}));
      if (K.congruent(ext, target)) {
        act = x2;
      } else {
        int s = run_of(a, r).back();
        for (int y : a.feas[s][1]) {
          ext.back() = a.encode({x1, y});
          if (K.congruent(ext, target)) {
            act = y;
            break;
          }
        }
      }
      (void)run;
    }
    t.put(std::vector<std::int64_t>(kappa.begin(), kappa.end()), act);
  });
  return table_strategy(Kind::Computation, 1, H, t);
}

}  // namespace eg
