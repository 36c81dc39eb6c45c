#pragma once

// Brute-force reference implementations. They share data types with the
// library but none of its algorithms: no partition refinement, no product
// graphs, no compiled machines.

#include <functional>
#include <set>

#include "fixtures.hpp"

namespace oracle {

using namespace eg;

// greatest fixpoint by repeated deletion over all state pairs
inline bool bisimilar(const Cgs& a, const Cgs& b) {
  int na = a.size(), nb = b.size();
  std::vector<std::vector<char>> R(na, std::vector<char>(nb, 0));
  for (int s = 0; s < na; ++s)
    for (int t = 0; t < nb; ++t) R[s][t] = a.label[s] == b.label[t] && a.feas[s] == b.feas[t];
  auto succ = [](const Cgs& m, int s, int d) {
    std::vector<int> r;
    for (size_t k = 0; k < m.dirs[s].size(); ++k)
      if (m.dirs[s][k] == d) r = m.succ[s][k];
    return r;
  };
  bool changed = true;
  while (changed) {
    changed = false;
    for (int s = 0; s < na; ++s)
      for (int t = 0; t < nb; ++t) {
        if (!R[s][t]) continue;
        bool ok = a.dirs[s] == b.dirs[t];
        for (size_t k = 0; ok && k < a.dirs[s].size(); ++k) {
          auto x = succ(a, s, a.dirs[s][k]), y = succ(b, t, a.dirs[s][k]);
          for (int u : x) {
            bool any = false;
            for (int v : y) any = any || R[u][v];
            ok = ok && any;
          }
          for (int v : y) {
            bool any = false;
            for (int u : x) any = any || R[u][v];
            ok = ok && any;
          }
        }
        if (!ok) {
          R[s][t] = 0;
          changed = true;
        }
      }
  }
  return R[a.init][b.init];
}

// Goal over state labels: F, G or GF of a literal or a two-literal
// conjunction/disjunction.
struct Goal {
  int temporal = 0;  // 0 eventually, 1 always, 2 infinitely often
  int p = 0, q = -1;
  bool np = false, nq = false, conj = true;

  bool at(const Cgs& m, int s) const {
    bool x = (m.label[s] >> p & 1) != np;
    if (q < 0) return x;
    bool y = (m.label[s] >> q & 1) != nq;
    return conj ? x && y : x || y;
  }
  std::string pred(const Cgs& m) const {
    std::string s = (np ? "!" : "") + m.props[p];
    if (q >= 0) s += std::string(conj ? " & " : " | ") + (nq ? "!" : "") + m.props[q];
    return s;
  }
  Objective objective(const Cgs& m) const {
    Pred pr = parse_pred(pred(m));
    return temporal == 0 ? eventually(pr) : temporal == 1 ? always(pr) : infinitely(pr);
  }
  // prefix states then cycle states, cycle nonempty
  bool holds(const Cgs& m, const std::vector<int>& pre, const std::vector<int>& cyc) const {
    bool any = false, all = true, inf = false;
    for (int s : pre) any = any || at(m, s), all = all && at(m, s);
    for (int s : cyc) any = any || at(m, s), all = all && at(m, s), inf = inf || at(m, s);
    return temporal == 0 ? any : temporal == 1 ? all : inf;
  }
};

inline Goal random_goal(Rng& rng, const Cgs& m) {
  Goal g;
  int np = (int)m.props.size();
  g.temporal = (int)(rng() % 3);
  g.p = (int)(rng() % np);
  g.np = rng() % 2;
  if (np > 1 && rng() % 2) {
    g.q = (int)(rng() % np);
    g.nq = rng() % 2;
    g.conj = rng() % 2;
  }
  return g;
}

using Key = std::vector<std::int64_t>;

// states consistent with a valuation sequence, computed by plain search
inline std::vector<int> trace_belief(const Cgs& m, const std::vector<int>& prev, Val v) {
  std::set<int> r;
  for (int s : prev)
    for (auto& ts : m.succ[s])
      for (int t : ts)
        if (m.obs[t] == v) r.insert(t);
  return {r.begin(), r.end()};
}

inline std::vector<int> options(const Cgs& m, const std::vector<int>& bel, int agent) {
  std::vector<int> r;
  for (int a : m.feas[bel[0]][agent]) {
    bool ok = true;
    for (int s : bel) ok = ok && std::count(m.feas[s][agent].begin(), m.feas[s][agent].end(), a);
    if (ok) r.push_back(a);
  }
  return r;
}

// One play of a deterministic structure. `choose(agent, level, key, belief)`
// gives the deviator's action at levels below H; every other action comes
// from the tables or the tail rule.
struct Play {
  std::vector<int> pre, cyc;
  bool dead = false;  // someone had no legal action
};

inline Play simulate(const Cgs& m, const Profile& p, Kind k, int H, int deviator,
                     const std::vector<int>& dev_actions) {
  int s = m.init;
  Key key;
  if (k == Kind::Run) key.push_back(s);
  if (k == Kind::Trace) key.push_back((std::int64_t)m.obs[s]);
  std::vector<int> bel{s};
  std::vector<int> states;
  std::map<std::pair<int, std::vector<int>>, int> seen;  // beyond H: (state, belief) -> index
  for (int level = 0;; ++level) {
    if (level >= H) {
      auto it = seen.find({s, bel});
      if (it != seen.end()) {
        Play r;
        r.pre.assign(states.begin(), states.begin() + it->second);
        r.cyc.assign(states.begin() + it->second, states.end());
        return r;
      }
      seen[{s, bel}] = level;
    }
    states.push_back(s);
    std::vector<int> acts(m.n);
    for (int i = 0; i < m.n; ++i) {
      int a = -1;
      if (level < H) {
        if (i == deviator) a = dev_actions[level];
        else if (p[i].table) a = p[i].table->get(key);
      }
      if (a < 0) {
        auto o = options(m, bel, i);
        a = o.empty() ? -1 : o[0];
      }
      if (a < 0) {
        Play r;
        r.dead = true;
        return r;
      }
      acts[i] = a;
    }
    int d = m.encode(acts);
    int t = -1;
    for (size_t j = 0; j < m.dirs[s].size(); ++j)
      if (m.dirs[s][j] == d) t = m.succ[s][j][0];
    if (t < 0) throw std::runtime_error("oracle: illegal direction");
    if (k == Kind::Computation) key.push_back(d);
    if (k == Kind::Run) key.push_back(t);
    if (k == Kind::Trace) key.push_back((std::int64_t)m.obs[t]);
    bel = k == Kind::Trace ? trace_belief(m, bel, m.obs[t]) : std::vector<int>{t};
    s = t;
  }
}

// Nash check against every deviating depth-H table of the profile's kind.
// Two tables that agree along the deviation's own play induce the same
// outcome, so it suffices to enumerate the action sequences along plays.
inline bool is_nash(const Cgs& m, const std::vector<Goal>& goals, const Profile& p, Kind k, int H) {
  Play base = simulate(m, p, k, H, -1, {});
  for (int i = 0; i < m.n; ++i) {
    if (goals[i].holds(m, base.pre, base.cyc)) continue;
    bool better = false;
    std::vector<int> acts;
    // walk the deviator's choices level by level, tracking the play so far
    std::function<void(int)> rec = [&](int level) {
      if (better) return;
      if (level == H) {
        Play d = simulate(m, p, k, H, i, acts);
        better = !d.dead && goals[i].holds(m, d.pre, d.cyc);
        return;
      }
      // replay the prefix to learn the belief at this level
      int s = m.init;
      std::vector<int> bel{s};
      Key key;
      if (k == Kind::Run) key.push_back(s);
      if (k == Kind::Trace) key.push_back((std::int64_t)m.obs[s]);
      for (int l = 0; l < level; ++l) {
        std::vector<int> a(m.n);
        for (int j = 0; j < m.n; ++j) {
          int x = j == i ? acts[l] : (p[j].table ? p[j].table->get(key) : -1);
          if (x < 0) {
            auto o = options(m, bel, j);
            if (o.empty()) return;
            x = o[0];
          }
          a[j] = x;
        }
        int d = m.encode(a), t = -1;
        for (size_t jj = 0; jj < m.dirs[s].size(); ++jj)
          if (m.dirs[s][jj] == d) t = m.succ[s][jj][0];
        if (k == Kind::Computation) key.push_back(d);
        if (k == Kind::Run) key.push_back(t);
        if (k == Kind::Trace) key.push_back((std::int64_t)m.obs[t]);
        bel = k == Kind::Trace ? trace_belief(m, bel, m.obs[t]) : std::vector<int>{t};
        s = t;
      }
      for (int a : options(m, bel, i)) {
        acts.push_back(a);
        rec(level + 1);
        acts.pop_back();
        if (better) return;
      }
    };
    rec(0);
    if (better) return false;
  }
  return true;
}

}  // namespace oracle
