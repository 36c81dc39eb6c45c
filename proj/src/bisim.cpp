#include "bisim.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

namespace eg {

void check_same_signature(const Cgs& a, const Cgs& b) {
  if (a.n != b.n) fail(Code::AlphabetMismatch, "structures have different agent counts");
  if (a.props != b.props) fail(Code::AlphabetMismatch, "structures have different propositions");
  if (a.actions != b.actions) fail(Code::AlphabetMismatch, "structures have different action alphabets");
}

namespace {

// Refines the label partition of a family of structures until every block
// agrees on the set of (direction, successor block) pairs.
std::vector<std::vector<int>> refine(const std::vector<const Cgs*>& ms) {
  std::vector<std::vector<int>> blk(ms.size());
  {
    std::map<Val, int> ids;
    for (auto* m : ms)
      for (Val v : m->label) ids.emplace(v, 0);
    int k = 0;
    for (auto& [v, id] : ids) id = k++;
    for (size_t i = 0; i < ms.size(); ++i)
      for (Val v : ms[i]->label) blk[i].push_back(ids[v]);
  }
  size_t count = 0;
  while (true) {
    using Sig = std::pair<int, std::vector<std::pair<int, int>>>;
    std::map<Sig, int> ids;
    std::vector<std::vector<Sig>> sig(ms.size());
    for (size_t i = 0; i < ms.size(); ++i) {
      const Cgs& m = *ms[i];
      for (int s = 0; s < m.size(); ++s) {
        Sig g{blk[i][s], {}};
        for (size_t k = 0; k < m.dirs[s].size(); ++k)
          for (int t : m.succ[s][k]) g.second.emplace_back(m.dirs[s][k], blk[i][t]);
        std::sort(g.second.begin(), g.second.end());
        g.second.erase(std::unique(g.second.begin(), g.second.end()), g.second.end());
        ids.emplace(g, 0);
        sig[i].push_back(std::move(g));
      }
    }
    int k = 0;
    for (auto& [g, id] : ids) id = k++;
    for (size_t i = 0; i < ms.size(); ++i)
      for (size_t s = 0; s < sig[i].size(); ++s) blk[i][s] = ids[sig[i][s]];
    if (ids.size() == count) break;
    count = ids.size();
  }
  return blk;
}

}  // namespace

std::vector<std::pair<int, int>> Relation::pairs() const {
  std::vector<std::pair<int, int>> r;
  for (size_t s = 0; s < ca.size(); ++s)
    for (size_t t = 0; t < cb.size(); ++t)
      if (ca[s] == cb[t]) r.emplace_back((int)s, (int)t);
  return r;
}

json Relation::to_json() const {
  json j = json::array();
  for (auto [s, t] : pairs()) j.push_back({a->names[s], b->names[t]});
  return j;
}

Relation greatest_bisimulation(const Cgs& a, const Cgs& b) {
  check_same_signature(a, b);
  auto blk = refine({&a, &b});
  Relation r;
  r.a = &a;
  r.b = &b;
  r.ca = blk[0];
  r.cb = blk[1];
  return r;
}

bool are_bisimilar(const Cgs& a, const Cgs& b) {
  auto r = greatest_bisimulation(a, b);
  return r.related(a.init, b.init);
}

std::vector<int> bisim_classes(const Cgs& m) {
  auto blk = refine({&m})[0];
  std::map<int, int> renum;
  std::vector<int> r;
  for (int x : blk) {
    auto it = renum.emplace(x, (int)renum.size()).first;
    r.push_back(it->second);
  }
  return r;
}

Quotient quotient(const Cgs& m) {
  auto cls = bisim_classes(m);
  int k = 0;
  for (int c : cls) k = std::max(k, c + 1);
  std::vector<int> rep(k, -1);
  std::vector<std::string> name(k);
  for (int s = 0; s < m.size(); ++s) {
    int c = cls[s];
    if (rep[c] < 0) rep[c] = s;
    if (name[c].empty() || m.names[s] < name[c]) name[c] = m.names[s];
  }
  CgsBuilder bld;
  bld.n = m.n;
  bld.props = m.props;
  bld.initial = name[cls[m.init]];
  bld.deterministic = m.det;
  for (int c = 0; c < k; ++c) {
    int s = rep[c];
    bld.states.push_back(name[c]);
    std::vector<std::string> lab;
    for (auto& p : m.val_json(m.label[s])) lab.push_back(p.get<std::string>());
    bld.labels.push_back(lab);
    std::vector<std::vector<std::string>> fs;
    for (int i = 0; i < m.n; ++i) {
      std::vector<std::string> l;
      for (int x : m.feas[s][i]) l.push_back(m.actions[x]);
      fs.push_back(l);
    }
    bld.feasible[name[c]] = fs;
    for (size_t j = 0; j < m.dirs[s].size(); ++j) {
      std::set<std::string> to;
      for (int t : m.succ[s][j]) to.insert(name[cls[t]]);
      std::vector<std::string> dir;
      for (int x : m.decode(m.dirs[s][j])) dir.push_back(m.actions[x]);
      bld.trans.push_back({name[c], dir, {to.begin(), to.end()}});
    }
  }
  Quotient q{validate(bld.doc()), {}};
  for (int s = 0; s < m.size(); ++s) q.map.push_back(q.q.state(name[cls[s]]));
  return q;
}

bool isomorphic(const Cgs& a, const Cgs& b) {
  if (a.n != b.n || a.props != b.props || a.actions != b.actions || a.size() != b.size()) return false;
  int N = a.size();
  std::vector<int> f(N, -1), used(N, 0);
  auto compatible = [&](int s, int t) {
    return a.label[s] == b.label[t] && a.feas[s] == b.feas[t] && a.dirs[s] == b.dirs[t];
  };
  // checks the edges among already-mapped states
  auto consistent = [&](int s) {
    for (size_t k = 0; k < a.dirs[s].size(); ++k) {
      auto& sa = a.succ[s][k];
      auto& sb = b.succ[f[s]][k];
      if (sa.size() != sb.size()) return false;
      for (int x : sa)
        if (f[x] >= 0 && !std::binary_search(sb.begin(), sb.end(), f[x])) return false;
    }
    for (int u = 0; u < N; ++u) {
      if (f[u] < 0) continue;
      for (size_t k = 0; k < a.dirs[u].size(); ++k) {
        bool ina = std::binary_search(a.succ[u][k].begin(), a.succ[u][k].end(), s);
        bool inb = std::binary_search(b.succ[f[u]][k].begin(), b.succ[f[u]][k].end(), f[s]);
        if (ina != inb) return false;
      }
    }
    return true;
  };
  std::function<bool(int)> go = [&](int s) {
    if (s == N) return true;
    for (int t = 0; t < N; ++t) {
      if (used[t] || !compatible(s, t)) continue;
      if ((s == a.init) != (t == b.init)) continue;
      f[s] = t;
      used[t] = 1;
      if (consistent(s) && go(s + 1)) return true;
      f[s] = -1;
      used[t] = 0;
    }
    return false;
  };
  return go(0);
}

bool statewise_bisimilar(const std::vector<int>& ha, const std::vector<int>& hb, const Relation& r) {
  if (ha.size() != hb.size()) return false;
  for (size_t i = 0; i < ha.size(); ++i) {
    if (ha[i] < 0 || ha[i] >= (int)r.ca.size() || hb[i] < 0 || hb[i] >= (int)r.cb.size()) return false;
    if (!r.related(ha[i], hb[i])) return false;
  }
  return true;
}

int KCongruence::block(const std::vector<int>& k) const {
  auto it = index.find(k);
  return it == index.end() ? -1 : cls[it->second];
}

json KCongruence::to_json(const Cgs& m) const {
  std::map<int, json> blocks;
  for (size_t i = 0; i < comps.size(); ++i) {
    json c = json::array();
    for (int d : comps[i]) c.push_back(m.dir_json(d));
    blocks[cls[i]].push_back(c);
  }
  json out = json::array();
  for (auto& [id, b] : blocks) out.push_back(b);
  return {{"length", len}, {"classes", out}};
}

KCongruence k_congruence_classes(const Cgs& a, const Cgs& b, int len, long cap) {
  if (!a.det || !b.det) fail(Code::NondeterministicStructure, "K-congruence needs deterministic structures");
  if (!are_bisimilar(a, b)) fail(Code::NotBisimilar, "K-congruence is defined for bisimilar structures");
  KCongruence k;
  k.len = len;
  k.comps = enumerate_computations(a, len, cap);
  std::vector<int> parent(k.comps.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  std::map<std::vector<int>, int> ra, rb;
  for (size_t i = 0; i < k.comps.size(); ++i) {
    k.index[k.comps[i]] = (int)i;
    for (auto* pr : {&ra, &rb}) {
      auto h = run_of(pr == &ra ? a : b, k.comps[i]);
      auto it = pr->emplace(h, (int)i).first;
      int x = find(it->second), y = find((int)i);
      if (x != y) parent[std::max(x, y)] = std::min(x, y);
    }
  }
  std::map<int, int> renum;
  for (size_t i = 0; i < k.comps.size(); ++i) {
    int r = find((int)i);
    auto it = renum.emplace(r, (int)renum.size()).first;
    k.cls.push_back(it->second);
  }
  return k;
}

bool k_congruent(const Cgs& a, const Cgs& b, const std::vector<int>& k1, const std::vector<int>& k2, long cap) {
  if (k1.size() != k2.size()) fail(Code::LengthMismatch, "K-congruence compares computations of equal length");
  auto k = k_congruence_classes(a, b, (int)k1.size(), cap);
  int x = k.block(k1), y = k.block(k2);
  if (x < 0 || y < 0) fail(Code::IllegalDirection, "computation is not realizable");
  return x == y;
}

const KCongruence& KOracle::at(int len) {
  auto it = cache_.find(len);
  if (it == cache_.end()) it = cache_.emplace(len, k_congruence_classes(a_, b_, len, cap_)).first;
  return it->second;
}

bool KOracle::congruent(const std::vector<int>& k1, const std::vector<int>& k2) {
  if (k1.size() != k2.size()) return false;
  auto& k = at((int)k1.size());
  int x = k.block(k1), y = k.block(k2);
  return x >= 0 && x == y;
}

}  // namespace eg
