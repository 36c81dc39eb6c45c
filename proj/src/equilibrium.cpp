#include "equilibrium.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>

namespace eg {

using Key = std::vector<std::int64_t>;

Game make_game(Cgs m, std::vector<Objective> goals, std::vector<SetMode> modes) {
  if ((int)goals.size() != m.n) fail(Code::MalformedDocument, "game needs one goal per agent");
  if (!modes.empty() && (int)modes.size() != m.n) fail(Code::MalformedDocument, "game needs one set mode per agent");
  for (auto& g : goals) bind(g, m);
  return Game{std::move(m), std::move(goals), std::move(modes)};
}

Game game_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("structure") || !doc.contains("goals"))
    fail(Code::MalformedDocument, "game document needs structure and goals");
  Cgs m = validate(doc["structure"]);
  std::vector<Objective> goals;
  for (auto& g : doc["goals"]) goals.push_back(objective_from_json(g));
  std::vector<SetMode> modes;
  for (auto& x : doc.value("modes", json::array())) {
    std::string s = x.get<std::string>();
    if (s == "forall") modes.push_back(SetMode::ForAll);
    else if (s == "exists") modes.push_back(SetMode::Exists);
    else fail(Code::MalformedDocument, "set mode must be forall or exists");
  }
  return make_game(std::move(m), std::move(goals), std::move(modes));
}

json game_to_json(const Game& g) {
  json goals = json::array();
  for (auto& o : g.goals) goals.push_back(objective_to_json(o));
  json d{{"structure", to_json(g.m)}, {"goals", goals}};
  if (g.set_valued()) {
    json modes = json::array();
    for (auto x : g.modes) modes.push_back(mode_name(x));
    d["modes"] = modes;
  }
  return d;
}

bool satisfied(const Game& g, int agent, const DirLasso& w) { return holds_bound(bind(g.goals[agent], g.m), g.m, w); }

namespace {

Key initial_key(Kind k, const Cgs& m) {
  if (k == Kind::Computation) return {};
  return {k == Kind::Run ? (std::int64_t)m.init : (std::int64_t)m.obs[m.init]};
}

Key extend(Key k, Kind kind, const Obs& o) {
  k.push_back(symbol(kind, o));
  return k;
}

std::vector<int> options(const Cgs& m, Beliefs& B, int bel, int agent) {
  std::vector<int> r;
  const auto& st = B.get(bel);
  if (st.empty()) return r;
  for (int a : m.feas[st[0]][agent])
    if (B.allows(bel, agent, a)) r.push_back(a);
  return r;
}

// One-player search for `agent` against fixed machines of everybody else.
std::optional<std::pair<Strategy, DirLasso>> improve(const Cgs& m, const BoundGoal& goal, const std::vector<Mach>& ms,
                                                     int agent, Kind kind, long cap) {
  Beliefs B(m);
  std::map<std::vector<int>, int> ids;
  std::vector<std::vector<int>> keys;
  std::vector<std::vector<std::pair<int, int>>> edges;
  auto get = [&](std::vector<int> k) {
    auto it = ids.find(k);
    if (it != ids.end()) return it->second;
    if ((long)keys.size() >= cap) fail(Code::BudgetExceeded, "best-response product exceeded the node cap");
    int id = (int)keys.size();
    ids.emplace(k, id);
    keys.push_back(std::move(k));
    edges.emplace_back();
    return id;
  };
  // key layout: state, automaton state, belief, machine node per agent
  std::vector<int> k0{m.init, goal.start(m), B.initial()};
  for (int j = 0; j < m.n; ++j) k0.push_back(0);
  get(k0);
  for (size_t u = 0; u < keys.size(); ++u) {
    std::vector<int> k = keys[u];
    int s = k[0], q = k[1], bel = k[2];
    std::vector<int> acts(m.n, 0);
    for (int j = 0; j < m.n; ++j) {
      if (j == agent) continue;
      acts[j] = ms[j].out[k[3 + j]];
      if (acts[j] < 0) fail(Code::Infeasible, "agent " + std::to_string(j + 1) + " has no feasible action on a reachable history");
    }
    for (int a : options(m, B, bel, agent)) {
      acts[agent] = a;
      int d = m.encode(acts);
      int slot = m.slot(s, d);
      if (slot < 0) continue;
      for (int t : m.succ[s][slot]) {
        Obs o{d, s, t, m.obs[t]};
        std::vector<int> nk{t, goal.read_state(goal.read_dir(q, d), t), B.advance(kind, bel, o)};
        for (int j = 0; j < m.n; ++j) nk.push_back(j == agent ? 0 : ms[j].go(k[3 + j], o));
        int v = get(nk);
        edges[u].emplace_back(v, d);
      }
    }
  }
  // A node where the deviator has no legal action ends no infinite play, and
  // neither does any node all of whose successors are like that. Such
  // deviations are not strategies, so prune them before the search.
  int N = (int)keys.size();
  std::vector<char> live(N, 1);
  for (bool changed = true; changed;) {
    changed = false;
    for (int u = 0; u < N; ++u) {
      if (!live[u]) continue;
      bool any = false;
      for (auto& e : edges[u]) any = any || live[e.first];
      if (!any) live[u] = 0, changed = true;
    }
  }
  if (!live[0]) return std::nullopt;
  for (int u = 0; u < N; ++u)
    std::erase_if(edges[u], [&](const std::pair<int, int>& e) { return !live[e.first]; });
  Graph gr;
  for (int u = 0; u < N; ++u) {
    std::vector<int> succ;
    for (auto& e : edges[u]) succ.push_back(e.first);
    if (!live[u]) succ.push_back(u);
    gr.succ.push_back(succ);
    gr.good.push_back(live[u] && goal.F[keys[u][1]]);
  }
  auto lasso = find_accepting_lasso(gr, goal.acc);
  if (!lasso) return std::nullopt;
  std::vector<int> nodes = lasso->prefix;
  nodes.insert(nodes.end(), lasso->cycle.begin(), lasso->cycle.end());
  int L = (int)nodes.size(), loop = (int)lasso->prefix.size();
  std::vector<int> dirs;
  for (int k = 0; k < L; ++k) {
    int u = nodes[k], v = k + 1 < L ? nodes[k + 1] : nodes[loop];
    int d = -1;
    for (auto& e : edges[u])
      if (e.first == v) {
        d = e.second;
        break;
      }
    dirs.push_back(d);
  }
  MachineSpec spec;
  spec.init = 0;
  spec.out.resize(L);
  spec.next.resize(L);
  for (int k = 0; k < L; ++k) {
    int u = nodes[k], v = k + 1 < L ? nodes[k + 1] : nodes[loop];
    spec.out[k] = m.action_at(dirs[k], agent);
    Obs o{dirs[k], keys[u][0], keys[v][0], m.obs[keys[v][0]]};
    spec.next[k][symbol(kind, o)] = k + 1 < L ? k + 1 : loop;
  }
  DirLasso w;
  w.prefix.assign(dirs.begin(), dirs.begin() + loop);
  w.cycle.assign(dirs.begin() + loop, dirs.end());
  w.normalize();
  return std::make_pair(machine_strategy(kind, agent, spec), w);
}

void require_det(const Game& g) {
  if (!g.m.det) fail(Code::NondeterministicStructure, "use the set-valued checks for nondeterministic structures");
}

}  // namespace

std::optional<std::pair<Strategy, DirLasso>> best_response_improvement(const Game& g, const Profile& p, int agent,
                                                                       long cap) {
  require_det(g);
  check_profile(p, g.m);
  if (agent < 0 || agent >= g.m.n) fail(Code::UnboundAgent, "agent out of range");
  auto ms = compile_profile(p, g.m, cap);
  auto w = induced_outcome(g.m, p, cap);
  BoundGoal b = bind(g.goals[agent], g.m);
  if (holds_bound(b, g.m, w)) return std::nullopt;
  return improve(g.m, b, ms, agent, p[0].kind, cap);
}

NeVerdict is_nash(const Game& g, const Profile& p, long cap) {
  require_det(g);
  check_profile(p, g.m);
  auto ms = compile_profile(p, g.m, cap);
  for (auto& M : ms)
    if (!M.feasible) fail(Code::Infeasible, "agent " + std::to_string(M.agent + 1) + " plays an infeasible strategy");
  auto w = induced_outcome(g.m, p, cap);
  NeVerdict v;
  for (int i = 0; i < g.m.n; ++i) {
    BoundGoal b = bind(g.goals[i], g.m);
    if (holds_bound(b, g.m, w)) continue;
    auto r = improve(g.m, b, ms, i, p[0].kind, cap);
    if (r) {
      v.equilibrium = false;
      v.agent = i;
      v.witness = r->first;
      v.outcome = r->second;
      return v;
    }
  }
  v.outcome = w;
  return v;
}

json verdict_to_json(const NeVerdict& v, const Game& g) {
  json d{{"verdict", v.equilibrium ? "equilibrium" : "deviation"}, {"complete", v.complete}};
  if (!v.equilibrium) {
    d["agent"] = v.agent + 1;
    d["strategy"] = strategy_to_json(v.witness, g.m);
  }
  if (!v.outcome.cycle.empty() && g.m.det) {
    auto r = run_lasso(g.m, v.outcome);
    d[v.equilibrium ? "outcome" : "improving_outcome"] = {{"computation", lasso_dirs_json(g.m, v.outcome)},
                                                          {"run", lasso_states_json(g.m, r)},
                                                          {"trace", lasso_vals_json(g.m, trace_lasso(g.m, r))}};
  }
  return d;
}

// ---------------------------------------------------------------- search

bool exhaustive_regime(const Game& g, int H, std::string* why) {
  auto say = [&](const std::string& s) {
    if (why) *why = s;
    return false;
  };
  if (!g.m.det) return say("structure is nondeterministic");
  int D = absorbing_depth(g.m);
  if (D < 0 || D > H) return say("structure is not absorbing by depth " + std::to_string(H));
  for (size_t i = 0; i < g.goals.size(); ++i) {
    if (g.goals[i].level != Level::Computation) continue;
    int dd = decided_depth(bind(g.goals[i], g.m), g.m, H);
    if (dd < 0 || dd > H) return say("goal of agent " + std::to_string(i + 1) + " is not decided by depth " + std::to_string(H));
  }
  return true;
}

namespace {

struct Pending {
  int agent = -1;
  Key key;
  std::vector<int> opts;
  bool operator<(const Pending& o) const {
    if (key.size() != o.key.size()) return key.size() < o.key.size();
    if (key != o.key) return key < o.key;
    return agent < o.agent;
  }
};

struct Path {
  std::vector<int> st, ds;  // aligned (state, direction) lasso
  int loop = 0;
  int pos(int k) const { return k < (int)ds.size() ? k : loop + (k - loop) % ((int)ds.size() - loop); }
  int after(int k) const { return k + 1 < (int)ds.size() ? st[k + 1] : st[loop]; }
};

Path align(const Cgs& m, const DirLasso& w) {
  Path p;
  int s = m.init;
  for (int d : w.prefix) {
    p.st.push_back(s);
    p.ds.push_back(d);
    s = m.step(s, d);
  }
  std::map<std::pair<int, size_t>, int> seen;
  size_t c = 0;
  while (true) {
    auto it = seen.find({s, c});
    if (it != seen.end()) {
      p.loop = it->second;
      return p;
    }
    seen[{s, c}] = (int)p.ds.size();
    p.st.push_back(s);
    p.ds.push_back(w.cycle[c]);
    s = m.step(s, w.cycle[c]);
    c = (c + 1) % w.cycle.size();
  }
}

// Enumerates table profiles over the keys that can influence the
// equilibrium verdict: on-path keys and the keys of non-deviators along
// histories an unsatisfied agent can reach alone, up to depth H.
struct Engine {
  const Game& g;
  const Cgs& m;
  Kind kind;
  int H;
  long cap, mach_cap;
  std::vector<BoundGoal> goals;
  Beliefs B;
  std::vector<std::map<Key, int>> assign;

  bool fixed = false;
  DirLasso path;
  std::vector<PathSpec> specs;
  std::vector<Key> onkeys;
  std::vector<std::vector<int>> onacts;
  std::vector<bool> path_sat;

  long candidates = 0;
  bool cap_hit = false;
  std::optional<Profile> found;
  DirLasso found_outcome;

  Engine(const Game& gm, Kind k, int h, long c, long mc)
      : g(gm), m(gm.m), kind(k), H(h), cap(c), mach_cap(mc), B(gm.m), assign(gm.m.n) {
    for (auto& o : g.goals) goals.push_back(bind(o, m));
  }

  void fix_path(const DirLasso& w) {
    fixed = true;
    path = w;
    Path pa = align(m, w);
    specs.assign(m.n, PathSpec{});
    std::int64_t first = kind == Kind::Run ? m.init : kind == Kind::Trace ? (std::int64_t)m.obs[m.init] : 0;
    for (int j = 0; j < m.n; ++j) {
      specs[j].first = first;
      specs[j].loop = pa.loop;
      for (size_t k = 0; k < pa.ds.size(); ++k) {
        int t = pa.after((int)k);
        specs[j].expect.push_back(symbol(kind, Obs{pa.ds[k], pa.st[k], t, m.obs[t]}));
        specs[j].act.push_back(m.action_at(pa.ds[k], j));
      }
    }
    Key key = initial_key(kind, m);
    for (int k = 0; k < H; ++k) {
      int p = pa.pos(k);
      onkeys.push_back(key);
      std::vector<int> acts;
      for (int j = 0; j < m.n; ++j) acts.push_back(m.action_at(pa.ds[p], j));
      onacts.push_back(acts);
      key.push_back(specs[0].expect[p]);
    }
    for (int i = 0; i < m.n; ++i) path_sat.push_back(holds_bound(goals[i], m, w));
  }

  // action of agent j at a history with the given key, -1 if unassigned
  int lookup(int j, const Key& key, int k) const {
    if (fixed && k < (int)onkeys.size() && key == onkeys[k]) return onacts[k][j];
    auto it = assign[j].find(key);
    return it == assign[j].end() ? -1 : it->second;
  }

  Profile build() const {
    Profile p;
    for (int j = 0; j < m.n; ++j) {
      Trie t;
      for (auto& [key, a] : assign[j]) t.put(key, a);
      p.push_back(fixed ? path_strategy(kind, j, specs[j], t) : table_strategy(kind, j, H, t));
    }
    return p;
  }

  // returns false when the partial assignment is already dead
  bool probe(std::optional<Pending>& out) {
    std::set<Pending> pend;
    std::vector<bool> sat;
    if (!fixed) {
      int s = m.init, bel = B.initial();
      Key key = initial_key(kind, m);
      for (int k = 0; k < H; ++k) {
        std::vector<int> acts(m.n);
        for (int j = 0; j < m.n; ++j) {
          acts[j] = lookup(j, key, k);
          if (acts[j] < 0) pend.insert(Pending{j, key, options(m, B, bel, j)});
        }
        if (!pend.empty()) {
          out = *pend.begin();
          return true;
        }
        int d = m.encode(acts);
        int t = m.step(s, d);
        Obs o{d, s, t, m.obs[t]};
        key.push_back(symbol(kind, o));
        bel = B.advance(kind, bel, o);
        s = t;
      }
      DirLasso w;
      try {
        w = induced_outcome(m, build(), mach_cap);
      } catch (const Error& e) {
        if (e.code == Code::Infeasible) return false;
        throw;
      }
      for (int i = 0; i < m.n; ++i) sat.push_back(holds_bound(goals[i], m, w));
    } else {
      sat = path_sat;
    }
    for (int i = 0; i < m.n; ++i) {
      if (sat[i]) continue;
      std::function<void(int, const Key&, int, int)> dfs = [&](int s, const Key& key, int bel, int k) {
        std::vector<int> acts(m.n, 0);
        bool open = false;
        for (int j = 0; j < m.n; ++j) {
          if (j == i) continue;
          acts[j] = lookup(j, key, k);
          if (acts[j] < 0) {
            pend.insert(Pending{j, key, options(m, B, bel, j)});
            open = true;
          }
        }
        if (open || k + 1 >= H) return;
        for (int a : m.feas[s][i]) {
          acts[i] = a;
          int d = m.encode(acts);
          if (m.slot(s, d) < 0) continue;
          int t = m.step(s, d);
          Obs o{d, s, t, m.obs[t]};
          dfs(t, extend(key, kind, o), B.advance(kind, bel, o), k + 1);
        }
      };
      dfs(m.init, initial_key(kind, m), B.initial(), 0);
    }
    if (!pend.empty()) out = *pend.begin();
    return true;
  }

  void evaluate() {
    if (++candidates > cap) {
      cap_hit = true;
      return;
    }
    Profile p = build();
    try {
      for (auto& f : p)
        if (!compile(f, m, mach_cap).feasible) return;
      auto v = is_nash(g, p, mach_cap);
      if (v.equilibrium) {
        found = p;
        found_outcome = v.outcome;
      }
    } catch (const Error& e) {
      if (e.code != Code::Infeasible) throw;
    }
  }

  void search() {
    if (found || cap_hit) return;
    std::optional<Pending> pr;
    if (!probe(pr)) return;
    if (!pr) {
      evaluate();
      return;
    }
    for (int a : pr->opts) {
      assign[pr->agent][pr->key] = a;
      search();
      assign[pr->agent].erase(pr->key);
      if (found || cap_hit) return;
    }
  }
};

}  // namespace

FindResult find_nash(const Game& g, Kind kind, const Budget& b) {
  require_det(g);
  if (b.depth < 1) fail(Code::Usage, "table depth must be positive");
  Engine e(g, kind, b.depth, b.cap, b.mach_cap);
  e.search();
  FindResult r;
  r.profile = e.found;
  r.outcome = e.found_outcome;
  r.cap_hit = e.cap_hit;
  r.candidates = std::min(e.candidates, b.cap);
  bool regime = exhaustive_regime(g, b.depth, &r.why);
  r.exhaustive = regime && !e.cap_hit;
  if (e.cap_hit) r.why = "candidate cap reached";
  return r;
}

bool is_winning_against(const Game& g, const Strategy& f, int opponent, long cap) {
  require_det(g);
  if (g.m.n != 2) fail(Code::NotTwoPlayer, "winning-against is a two-player notion");
  if (opponent == f.agent || opponent < 0 || opponent > 1) fail(Code::UnboundAgent, "opponent must be the other agent");
  std::vector<Mach> ms(2);
  ms[f.agent] = compile(f, g.m, cap);
  if (!ms[f.agent].feasible) fail(Code::Infeasible, "strategy is infeasible");
  return !improve(g.m, bind(g.goals[opponent], g.m), ms, opponent, f.kind, cap);
}

bool two_player_ne_check(const Game& g, const Profile& p, long cap) {
  require_det(g);
  if (g.m.n != 2) fail(Code::NotTwoPlayer, "the winning-strategy characterization is for two players");
  check_profile(p, g.m);
  auto w = induced_outcome(g.m, p, cap);
  bool s1 = satisfied(g, 0, w), s2 = satisfied(g, 1, w);
  return (s1 || is_winning_against(g, p[1], 0, cap)) && (s2 || is_winning_against(g, p[0], 1, cap));
}

// ---------------------------------------------------------------- sustained outcomes

Target target_from_json(const json& j, const Cgs& m) {
  auto part = [&](const json& l, const char* f) {
    if (!l.is_object() || !l.contains(f)) fail(Code::MalformedDocument, std::string("lasso needs ") + f);
    return l[f];
  };
  Target t;
  if (j.contains("dirs")) {
    t.type = Target::Dirs;
    for (auto& d : part(j["dirs"], "prefix")) t.dirs.prefix.push_back(m.dir_from_json(d));
    for (auto& d : part(j["dirs"], "cycle")) t.dirs.cycle.push_back(m.dir_from_json(d));
    if (t.dirs.cycle.empty()) fail(Code::MalformedDocument, "lasso cycle must be nonempty");
  } else if (j.contains("states")) {
    t.type = Target::States;
    for (auto& d : part(j["states"], "prefix")) t.states.prefix.push_back(m.state(d.get<std::string>()));
    for (auto& d : part(j["states"], "cycle")) t.states.cycle.push_back(m.state(d.get<std::string>()));
    if (t.states.cycle.empty()) fail(Code::MalformedDocument, "lasso cycle must be nonempty");
  } else if (j.contains("trace")) {
    t.type = Target::Vals;
    for (auto& d : part(j["trace"], "prefix")) t.vals.prefix.push_back(m.val_from_json(d));
    for (auto& d : part(j["trace"], "cycle")) t.vals.cycle.push_back(m.val_from_json(d));
    if (t.vals.cycle.empty()) fail(Code::MalformedDocument, "lasso cycle must be nonempty");
  } else {
    fail(Code::MalformedDocument, "target needs dirs, states or trace");
  }
  return t;
}

namespace {

// direction lassos realizing a run or trace target, with bounded prefix and period
std::vector<DirLasso> realize(const Cgs& m, const Target& t, long cap) {
  std::set<DirLasso> out;
  if (t.type == Target::Dirs) {
    DirLasso w = t.dirs;
    w.normalize();
    run_lasso(m, w);  // legality
    return {w};
  }
  StateLasso ts = t.states;
  ValLasso tv = t.vals;
  ts.normalize();
  tv.normalize();
  size_t p = t.type == Target::States ? ts.prefix.size() : tv.prefix.size();
  size_t c = t.type == Target::States ? ts.cycle.size() : tv.cycle.size();
  auto ok_at = [&](size_t j, int s) {
    return t.type == Target::States ? ts.at(j) == s : tv.at(j) == m.label[s];
  };
  if (!ok_at(0, m.init)) return {};
  size_t maxL = p + 2 * c + (size_t)m.size();
  long nodes = 0;
  std::vector<int> w;
  std::function<void(int)> dfs = [&](int s) {
    if (++nodes > cap || (long)out.size() >= 64) return;
    if (w.size() >= p + c) {
      for (size_t P = 0; P < w.size(); ++P) {
        DirLasso l;
        l.prefix.assign(w.begin(), w.begin() + P);
        l.cycle.assign(w.begin() + P, w.end());
        StateLasso r;
        try {
          r = run_lasso(m, l);
        } catch (const Error&) {
          continue;
        }
        r.normalize();
        bool hit = t.type == Target::States ? r == ts : [&] {
          auto v = trace_lasso(m, r);
          v.normalize();
          return v == tv;
        }();
        if (hit) {
          l.normalize();
          out.insert(l);
        }
      }
    }
    if (w.size() >= maxL) return;
    for (size_t k = 0; k < m.dirs[s].size(); ++k) {
      int u = m.succ[s][k][0];
      if (!ok_at(w.size() + 1, u)) continue;
      w.push_back(m.dirs[s][k]);
      dfs(u);
      w.pop_back();
    }
  };
  dfs(m.init);
  return {out.begin(), out.end()};
}

}  // namespace

SustainResult sustained_by_ne(const Game& g, Kind kind, const Target& t, const Budget& b) {
  require_det(g);
  SustainResult r;
  for (auto& w : realize(g.m, t, b.cap)) {
    Engine e(g, kind, b.depth, b.cap, b.mach_cap);
    e.fix_path(w);
    e.search();
    r.cap_hit = r.cap_hit || e.cap_hit;
    if (e.found) {
      r.sustained = true;
      r.profile = e.found;
      r.realized = w;
      return r;
    }
  }
  return r;
}

// ---------------------------------------------------------------- nondeterminism

OutcomeSet outcome_set(const Cgs& m, const Profile& p, long cap) {
  auto ms = compile_profile(p, m, cap);
  OutcomeSet o;
  std::map<std::pair<int, std::vector<int>>, int> ids;
  auto get = [&](int s, const std::vector<int>& mem) {
    auto key = std::make_pair(s, mem);
    auto it = ids.find(key);
    if (it != ids.end()) return it->second;
    if ((long)o.state.size() >= cap) fail(Code::BudgetExceeded, "outcome graph exceeded the node cap");
    int id = (int)o.state.size();
    ids.emplace(key, id);
    o.state.push_back(s);
    o.mem.push_back(mem);
    o.edges.emplace_back();
    return id;
  };
  get(m.init, std::vector<int>(m.n, 0));
  for (size_t u = 0; u < o.state.size(); ++u) {
    int s = o.state[u];
    std::vector<int> mem = o.mem[u], acts(m.n);
    for (int j = 0; j < m.n; ++j) {
      acts[j] = ms[j].out[mem[j]];
      if (acts[j] < 0) fail(Code::Infeasible, "agent " + std::to_string(j + 1) + " has no feasible action on a consistent history");
    }
    int d = m.encode(acts);
    int slot = m.slot(s, d);
    if (slot < 0) fail(Code::Infeasible, "profile prescribes an illegal direction");
    for (int t : m.succ[s][slot]) {
      Obs ob{d, s, t, m.obs[t]};
      std::vector<int> nm(m.n);
      for (int j = 0; j < m.n; ++j) nm[j] = ms[j].go(mem[j], ob);
      int v = get(t, nm);
      o.edges[u].emplace_back(d, v);
    }
  }
  int N = (int)o.state.size();
  std::vector<bool> sink(N);
  bool tree = true;
  for (int u = 0; u < N; ++u) {
    bool self = false, other = false;
    for (auto& [d, v] : o.edges[u]) (v == u ? self : other) = true;
    sink[u] = self && !other;
    if (self && other) tree = false;
  }
  // acyclic apart from sink loops
  std::vector<int> color(N, 0);
  std::function<void(int)> visit = [&](int u) {
    color[u] = 1;
    for (auto& [d, v] : o.edges[u]) {
      if (v == u) continue;
      if (color[v] == 1) tree = false;
      else if (color[v] == 0) visit(v);
    }
    color[u] = 2;
  };
  visit(0);
  o.tree_of_sinks = tree;
  if (tree) {
    std::set<StateLasso> runs;
    std::set<ValLasso> traces;
    std::vector<int> path;
    std::function<void(int)> walk = [&](int u) {
      if ((long)runs.size() >= cap) return;
      if (sink[u]) {
        StateLasso r;
        for (int x : path) r.prefix.push_back(o.state[x]);
        r.cycle = {o.state[u]};
        r.normalize();
        runs.insert(r);
        auto v = trace_lasso(m, r);
        v.normalize();
        traces.insert(v);
        return;
      }
      path.push_back(u);
      std::set<int> seen;
      for (auto& [d, v] : o.edges[u])
        if (seen.insert(v).second) walk(v);
      path.pop_back();
    };
    walk(0);
    o.runs.assign(runs.begin(), runs.end());
    o.traces.assign(traces.begin(), traces.end());
  }
  return o;
}

json outcome_set_to_json(const OutcomeSet& o, const Cgs& m) {
  json nodes = json::array();
  for (size_t u = 0; u < o.state.size(); ++u) {
    json es = json::array();
    for (auto& [d, v] : o.edges[u]) es.push_back({{"dir", m.dir_json(d)}, {"to", v}});
    nodes.push_back({{"id", u}, {"state", m.names[o.state[u]]}, {"edges", es}});
  }
  json d{{"nodes", nodes}, {"tree_of_sinks", o.tree_of_sinks}};
  if (o.tree_of_sinks) {
    json runs = json::array(), traces = json::array();
    for (auto& r : o.runs) runs.push_back(lasso_states_json(m, r));
    for (auto& t : o.traces) traces.push_back(lasso_vals_json(m, t));
    d["runs"] = runs;
    d["traces"] = traces;
  }
  return d;
}

namespace {

bool exists_accepting(const BoundGoal& b, const Cgs& m, const OutcomeSet& o) {
  std::map<std::pair<int, int>, int> ids;
  std::vector<std::pair<int, int>> keys;
  Graph gr;
  auto get = [&](int u, int q) {
    auto it = ids.find({u, q});
    if (it != ids.end()) return it->second;
    int id = (int)keys.size();
    ids[{u, q}] = id;
    keys.emplace_back(u, q);
    gr.succ.emplace_back();
    gr.good.push_back(b.F[q]);
    return id;
  };
  get(0, b.start(m));
  for (size_t x = 0; x < keys.size(); ++x) {
    auto [u, q] = keys[x];
    for (auto& [d, v] : o.edges[u]) {
      int y = get(v, b.read_state(b.read_dir(q, d), o.state[v]));
      gr.succ[x].push_back(y);
    }
  }
  return find_accepting_lasso(gr, b.acc).has_value();
}

}  // namespace

bool holds_on_set(const Objective& goal, SetMode mode, const Cgs& m, const OutcomeSet& o) {
  BoundGoal b = bind(goal, m);
  if (mode == SetMode::Exists) return exists_accepting(b, m, o);
  return !exists_accepting(b.complement(), m, o);
}

NeVerdict is_nash_nondet(const Game& g, const Profile& p, const Budget& bud) {
  const Cgs& m = g.m;
  check_profile(p, m);
  Kind kind = p[0].kind;
  if (kind == Kind::Run) fail(Code::UnsupportedKind, "run-based profiles are not meaningful under nondeterminism");
  auto mode = [&](int i) { return g.set_valued() ? g.modes[i] : SetMode::ForAll; };
  auto ms = compile_profile(p, m, bud.mach_cap);
  for (auto& M : ms)
    if (!M.feasible) fail(Code::Infeasible, "agent " + std::to_string(M.agent + 1) + " plays an infeasible strategy");
  auto base = outcome_set(m, p, bud.mach_cap);
  NeVerdict v;
  long candidates = 0;
  int H = bud.depth;
  for (int i = 0; i < m.n; ++i) {
    if (holds_on_set(g.goals[i], mode(i), m, base)) continue;
    Beliefs B(m);
    std::map<Key, int> assign;
    bool hit = false, found = false;
    Strategy wit;
    // least unassigned deviator key reachable within depth H
    auto probe = [&]() -> std::optional<Pending> {
      std::set<Pending> pend;
      std::function<void(int, std::vector<int>, const Key&, int, int)> go = [&](int s, std::vector<int> mem,
                                                                                const Key& key, int bel, int k) {
        if (k >= H) return;
        auto it = assign.find(key);
        if (it == assign.end()) {
          pend.insert(Pending{i, key, options(m, B, bel, i)});
          return;
        }
        std::vector<int> acts(m.n);
        for (int j = 0; j < m.n; ++j) acts[j] = j == i ? it->second : ms[j].out[mem[j]];
        for (int j = 0; j < m.n; ++j)
          if (acts[j] < 0) return;
        int d = m.encode(acts);
        int slot = m.slot(s, d);
        if (slot < 0) return;
        for (int t : m.succ[s][slot]) {
          Obs o{d, s, t, m.obs[t]};
          std::vector<int> nm = mem;
          for (int j = 0; j < m.n; ++j)
            if (j != i) nm[j] = ms[j].go(mem[j], o);
          go(t, nm, extend(key, kind, o), B.advance(kind, bel, o), k + 1);
        }
      };
      go(m.init, std::vector<int>(m.n, 0), initial_key(kind, m), B.initial(), 0);
      if (pend.empty()) return std::nullopt;
      return *pend.begin();
    };
    std::function<void()> search = [&]() {
      if (found || hit) return;
      auto pr = probe();
      if (!pr) {
        if (++candidates > bud.cap) {
          hit = true;
          return;
        }
        Trie t;
        for (auto& [key, a] : assign) t.put(key, a);
        Strategy gi = table_strategy(kind, i, H, t);
        if (!compile(gi, m, bud.mach_cap).feasible) return;
        Profile q = p;
        q[i] = gi;
        try {
          if (holds_on_set(g.goals[i], mode(i), m, outcome_set(m, q, bud.mach_cap))) {
            found = true;
            wit = gi;
          }
        } catch (const Error& e) {
          if (e.code != Code::Infeasible) throw;
        }
        return;
      }
      for (int a : pr->opts) {
        assign[pr->key] = a;
        search();
        assign.erase(pr->key);
        if (found || hit) return;
      }
    };
    search();
    if (hit) v.complete = false;
    if (found) {
      v.equilibrium = false;
      v.agent = i;
      v.witness = wit;
      return v;
    }
  }
  return v;
}

}  // namespace eg
