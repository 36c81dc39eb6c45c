#include "cgs.hpp"

#include <algorithm>
#include <set>

namespace eg {

const char* code_name(Code c) {
  switch (c) {
    case Code::Ok: return "Ok";
    case Code::MalformedDocument: return "MalformedDocument";
    case Code::EmptyActionSet: return "EmptyActionSet";
    case Code::IllegalTransition: return "IllegalTransition";
    case Code::DeterminismViolation: return "DeterminismViolation";
    case Code::UnknownState: return "UnknownState";
    case Code::IllegalDirection: return "IllegalDirection";
    case Code::NondeterministicStructure: return "NondeterministicStructure";
    case Code::BadPartition: return "BadPartition";
    case Code::BudgetExceeded: return "BudgetExceeded";
    case Code::AlphabetMismatch: return "AlphabetMismatch";
    case Code::LengthMismatch: return "LengthMismatch";
    case Code::MixedStrategyKinds: return "MixedStrategyKinds";
    case Code::Infeasible: return "Infeasible";
    case Code::NotRunInvariant: return "NotRunInvariant";
    case Code::NotBisimulationInvariant: return "NotBisimulationInvariant";
    case Code::LevelMismatch: return "LevelMismatch";
    case Code::BadPattern: return "BadPattern";
    case Code::NotTwoPlayer: return "NotTwoPlayer";
    case Code::UnsupportedKind: return "UnsupportedKind";
    case Code::UnboundAgent: return "UnboundAgent";
    case Code::SyntaxError: return "SyntaxError";
    case Code::UnknownFixture: return "UnknownFixture";
    case Code::NotBisimilar: return "NotBisimilar";
    case Code::Io: return "Io";
    case Code::Usage: return "Usage";
  }
  return "?";
}

void fail(Code c, const std::string& msg) { throw Error(c, msg); }

const char* kind_name(Kind k) {
  switch (k) {
    case Kind::Computation: return "comp";
    case Kind::Run: return "run";
    case Kind::Trace: return "trace";
  }
  return "?";
}

Kind parse_kind(const std::string& s) {
  if (s == "comp" || s == "computation" || s == "ComputationBased") return Kind::Computation;
  if (s == "run" || s == "RunBased") return Kind::Run;
  if (s == "trace" || s == "TraceBased") return Kind::Trace;
  fail(Code::Usage, "unknown strategy kind '" + s + "'");
}

int Cgs::encode(const std::vector<int>& acts) const {
  int d = 0;
  for (int a : acts) d = d * A() + a;
  return d;
}

std::vector<int> Cgs::decode(int d) const {
  std::vector<int> r(n);
  for (int i = n - 1; i >= 0; --i) {
    r[i] = d % A();
    d /= A();
  }
  return r;
}

int Cgs::action_at(int d, int agent) const {
  for (int i = n - 1; i > agent; --i) d /= A();
  return d % A();
}

int Cgs::with_action(int d, int agent, int a) const {
  auto v = decode(d);
  v[agent] = a;
  return encode(v);
}

int Cgs::slot(int s, int d) const {
  auto& ds = dirs[s];
  auto it = std::lower_bound(ds.begin(), ds.end(), d);
  if (it == ds.end() || *it != d) return -1;
  return (int)(it - ds.begin());
}

const std::vector<int>& Cgs::next(int s, int d) const {
  int k = slot(s, d);
  if (k < 0) fail(Code::IllegalDirection, "direction " + dir_str(d) + " is not legal at " + names[s]);
  return succ[s][k];
}

int Cgs::step(int s, int d) const {
  auto& v = next(s, d);
  if (v.size() != 1) fail(Code::NondeterministicStructure, "nondeterministic successor at " + names[s]);
  return v[0];
}

int Cgs::state(const std::string& id) const {
  for (int i = 0; i < size(); ++i)
    if (names[i] == id) return i;
  fail(Code::UnknownState, "unknown state '" + id + "'");
}

int Cgs::action(const std::string& tok) const {
  auto it = std::lower_bound(actions.begin(), actions.end(), tok);
  if (it == actions.end() || *it != tok) fail(Code::IllegalDirection, "unknown action '" + tok + "'");
  return (int)(it - actions.begin());
}

int Cgs::prop(const std::string& p) const {
  auto it = std::lower_bound(props.begin(), props.end(), p);
  if (it == props.end() || *it != p) return -1;
  return (int)(it - props.begin());
}

bool Cgs::absorbing(int s) const {
  for (auto& t : succ[s])
    if (t.size() != 1 || t[0] != s) return false;
  return true;
}

std::string Cgs::dir_str(int d) const {
  std::string r = "(";
  auto v = decode(d);
  for (int i = 0; i < n; ++i) {
    if (i) r += ",";
    r += actions[v[i]];
  }
  return r + ")";
}

json Cgs::dir_json(int d) const {
  json j = json::array();
  for (int a : decode(d)) j.push_back(actions[a]);
  return j;
}

int Cgs::dir_from_json(const json& j) const {
  if (!j.is_array() || (int)j.size() != n) fail(Code::MalformedDocument, "direction must list one action per agent");
  std::vector<int> v;
  for (auto& a : j) {
    if (!a.is_string()) fail(Code::MalformedDocument, "action tokens are strings");
    v.push_back(action(a.get<std::string>()));
  }
  return encode(v);
}

std::string Cgs::val_str(Val v) const {
  std::string r = "{";
  bool first = true;
  for (size_t i = 0; i < props.size(); ++i)
    if (v >> i & 1) {
      if (!first) r += ",";
      r += props[i];
      first = false;
    }
  return r + "}";
}

json Cgs::val_json(Val v) const {
  json j = json::array();
  for (size_t i = 0; i < props.size(); ++i)
    if (v >> i & 1) j.push_back(props[i]);
  return j;
}

Val Cgs::val_from_json(const json& j) const {
  if (!j.is_array()) fail(Code::MalformedDocument, "valuation must be an array of propositions");
  Val v = 0;
  for (auto& p : j) {
    int k = p.is_string() ? prop(p.get<std::string>()) : -1;
    if (k < 0) fail(Code::MalformedDocument, "unknown proposition in valuation");
    v |= Val(1) << k;
  }
  return v;
}

namespace {

const json& need(const json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) fail(Code::MalformedDocument, std::string("missing field '") + key + "'");
  return doc.at(key);
}

std::string need_str(const json& j, const char* what) {
  if (!j.is_string()) fail(Code::MalformedDocument, std::string(what) + " must be a string");
  return j.get<std::string>();
}

}  // namespace

Cgs validate(const json& doc) {
  Cgs m;
  const json& ag = need(doc, "agents");
  if (!ag.is_number_integer() || ag.get<int>() < 1) fail(Code::MalformedDocument, "agents must be a positive integer");
  m.n = ag.get<int>();

  std::set<std::string> props;
  for (auto& p : need(doc, "props")) {
    auto s = need_str(p, "proposition");
    if (!props.insert(s).second) fail(Code::MalformedDocument, "duplicate proposition '" + s + "'");
  }
  if (props.size() > 64) fail(Code::MalformedDocument, "at most 64 propositions are supported");
  m.props.assign(props.begin(), props.end());

  const json& sts = need(doc, "states");
  if (!sts.is_array() || sts.empty()) fail(Code::MalformedDocument, "states must be a nonempty array");
  std::map<std::string, int> idx;
  for (auto& s : sts) {
    auto id = need_str(need(s, "id"), "state id");
    if (idx.count(id)) fail(Code::MalformedDocument, "duplicate state '" + id + "'");
    idx[id] = m.size();
    m.names.push_back(id);
    Val v = 0;
    if (s.contains("label")) {
      if (!s["label"].is_array()) fail(Code::MalformedDocument, "label must be an array");
      for (auto& p : s["label"]) {
        int k = m.prop(need_str(p, "proposition"));
        if (k < 0) fail(Code::MalformedDocument, "label of '" + id + "' uses an undeclared proposition");
        v |= Val(1) << k;
      }
    }
    m.label.push_back(v);
  }
  m.obs = m.label;
  auto init = need_str(need(doc, "initial"), "initial");
  if (!idx.count(init)) fail(Code::MalformedDocument, "initial state '" + init + "' is not declared");
  m.init = idx[init];

  const json& fe = need(doc, "feasible");
  if (!fe.is_object()) fail(Code::MalformedDocument, "feasible must map states to action lists");
  std::vector<std::vector<std::vector<std::string>>> raw(m.size());
  std::set<std::string> alphabet;
  for (auto& [sid, lists] : fe.items()) {
    if (!idx.count(sid)) fail(Code::MalformedDocument, "feasible lists unknown state '" + sid + "'");
    if (!lists.is_array() || (int)lists.size() != m.n)
      fail(Code::MalformedDocument, "feasible['" + sid + "'] must hold one list per agent");
    auto& r = raw[idx[sid]];
    for (auto& l : lists) {
      if (!l.is_array()) fail(Code::MalformedDocument, "feasible action set must be an array");
      std::vector<std::string> acts;
      for (auto& a : l) acts.push_back(need_str(a, "action"));
      if (acts.empty()) fail(Code::EmptyActionSet, "empty action set at state '" + sid + "'");
      std::sort(acts.begin(), acts.end());
      acts.erase(std::unique(acts.begin(), acts.end()), acts.end());
      alphabet.insert(acts.begin(), acts.end());
      r.push_back(acts);
    }
  }
  for (int s = 0; s < m.size(); ++s)
    if (raw[s].empty()) fail(Code::MalformedDocument, "no feasible actions given for state '" + m.names[s] + "'");
  m.actions.assign(alphabet.begin(), alphabet.end());
  m.feas.assign(m.size(), {});
  for (int s = 0; s < m.size(); ++s)
    for (auto& l : raw[s]) {
      std::vector<int> ids;
      for (auto& a : l) ids.push_back(m.action(a));
      m.feas[s].push_back(ids);
    }

  // legal directions are the product of the feasible sets
  m.dirs.assign(m.size(), {});
  m.succ.assign(m.size(), {});
  for (int s = 0; s < m.size(); ++s) {
    std::vector<int> cur(m.n, 0);
    std::vector<int> pos(m.n, 0);
    while (true) {
      for (int i = 0; i < m.n; ++i) cur[i] = m.feas[s][i][pos[i]];
      m.dirs[s].push_back(m.encode(cur));
      int i = m.n - 1;
      while (i >= 0 && ++pos[i] == (int)m.feas[s][i].size()) pos[i--] = 0;
      if (i < 0) break;
    }
    std::sort(m.dirs[s].begin(), m.dirs[s].end());
    m.succ[s].assign(m.dirs[s].size(), {});
  }

  m.det = doc.contains("deterministic") ? doc["deterministic"].get<bool>() : true;
  const json& tr = need(doc, "trans");
  if (!tr.is_array()) fail(Code::MalformedDocument, "trans must be an array");
  for (auto& t : tr) {
    auto from = need_str(need(t, "from"), "from");
    if (!idx.count(from)) fail(Code::MalformedDocument, "transition from unknown state '" + from + "'");
    int s = idx[from];
    const json& dj = need(t, "dir");
    if (!dj.is_array() || (int)dj.size() != m.n) fail(Code::MalformedDocument, "dir must list one action per agent");
    // '*' stands for every feasible action of that agent at the source state
    std::vector<std::vector<int>> choices;
    for (int i = 0; i < m.n; ++i) {
      auto tok = need_str(dj[i], "action");
      if (tok == "*") {
        choices.push_back(m.feas[s][i]);
        continue;
      }
      auto it = std::lower_bound(m.actions.begin(), m.actions.end(), tok);
      int a = (it != m.actions.end() && *it == tok) ? (int)(it - m.actions.begin()) : -1;
      if (a < 0 || !std::binary_search(m.feas[s][i].begin(), m.feas[s][i].end(), a))
        fail(Code::IllegalTransition, "transition from '" + from + "' uses action '" + tok + "' not feasible for agent " +
                                          std::to_string(i + 1));
      choices.push_back({a});
    }
    std::vector<int> targets;
    const json& to = need(t, "to");
    if (to.is_string()) {
      auto id = to.get<std::string>();
      if (!idx.count(id)) fail(Code::MalformedDocument, "transition to unknown state '" + id + "'");
      targets.push_back(idx[id]);
    } else if (to.is_array() && !to.empty()) {
      for (auto& x : to) {
        auto id = need_str(x, "target");
        if (!idx.count(id)) fail(Code::MalformedDocument, "transition to unknown state '" + id + "'");
        targets.push_back(idx[id]);
      }
    } else {
      fail(Code::MalformedDocument, "transition target must be a state or a nonempty list");
    }
    std::vector<int> pos(m.n, 0), cur(m.n);
    while (true) {
      for (int i = 0; i < m.n; ++i) cur[i] = choices[i][pos[i]];
      int k = m.slot(s, m.encode(cur));
      auto& dst = m.succ[s][k];
      dst.insert(dst.end(), targets.begin(), targets.end());
      int i = m.n - 1;
      while (i >= 0 && ++pos[i] == (int)choices[i].size()) pos[i--] = 0;
      if (i < 0) break;
    }
  }
  for (int s = 0; s < m.size(); ++s)
    for (size_t k = 0; k < m.dirs[s].size(); ++k) {
      auto& v = m.succ[s][k];
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
      if (v.empty())
        fail(Code::MalformedDocument, "no transition for direction " + m.dir_str(m.dirs[s][k]) + " at '" + m.names[s] + "'");
      if (m.det && v.size() > 1)
        fail(Code::DeterminismViolation, "direction " + m.dir_str(m.dirs[s][k]) + " at '" + m.names[s] +
                                             "' has several successors in a structure flagged deterministic");
    }
  return m;
}

json to_json(const Cgs& m) {
  json d;
  d["agents"] = m.n;
  d["props"] = m.props;
  d["states"] = json::array();
  for (int s = 0; s < m.size(); ++s) d["states"].push_back({{"id", m.names[s]}, {"label", m.val_json(m.label[s])}});
  d["initial"] = m.names[m.init];
  d["feasible"] = json::object();
  for (int s = 0; s < m.size(); ++s) {
    json l = json::array();
    for (int i = 0; i < m.n; ++i) {
      json a = json::array();
      for (int x : m.feas[s][i]) a.push_back(m.actions[x]);
      l.push_back(a);
    }
    d["feasible"][m.names[s]] = l;
  }
  d["trans"] = json::array();
  for (int s = 0; s < m.size(); ++s)
    for (size_t k = 0; k < m.dirs[s].size(); ++k) {
      json to = json::array();
      for (int t : m.succ[s][k]) to.push_back(m.names[t]);
      d["trans"].push_back({{"from", m.names[s]}, {"dir", m.dir_json(m.dirs[s][k])}, {"to", to}});
    }
  d["deterministic"] = m.det;
  return d;
}

json CgsBuilder::doc() const {
  json d;
  d["agents"] = n;
  d["props"] = props;
  d["states"] = json::array();
  for (size_t i = 0; i < states.size(); ++i) d["states"].push_back({{"id", states[i]}, {"label", labels[i]}});
  d["initial"] = initial;
  d["feasible"] = json::object();
  for (auto& [s, l] : feasible) d["feasible"][s] = l;
  d["trans"] = json::array();
  for (auto& t : trans) d["trans"].push_back({{"from", t.from}, {"dir", t.dir}, {"to", t.to}});
  d["deterministic"] = deterministic;
  return d;
}

std::vector<int> legal_directions(const Cgs& m, int s) {
  if (s < 0 || s >= m.size()) fail(Code::UnknownState, "unknown state index");
  return m.dirs[s];
}

std::vector<int> successors(const Cgs& m, int s, int d) {
  if (s < 0 || s >= m.size()) fail(Code::UnknownState, "unknown state index");
  return m.next(s, d);
}

std::vector<int> run_of(const Cgs& m, const std::vector<int>& comp) {
  if (!m.det) fail(Code::NondeterministicStructure, "run_of needs a deterministic structure");
  std::vector<int> h{m.init};
  for (int d : comp) h.push_back(m.step(h.back(), d));
  return h;
}

std::vector<Val> trace_of(const Cgs& m, const std::vector<int>& hist) {
  std::vector<Val> t;
  for (int s : hist) {
    if (s < 0 || s >= m.size()) fail(Code::UnknownState, "unknown state index");
    t.push_back(m.label[s]);
  }
  return t;
}

std::vector<std::vector<int>> enumerate_computations(const Cgs& m, int len, long cap) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  // belief = states the computation so far may have led to
  auto rec = [&](auto& self, const std::vector<int>& bel) -> void {
    if ((int)cur.size() == len) {
      if ((long)out.size() >= cap) fail(Code::BudgetExceeded, "computation enumeration cap reached");
      out.push_back(cur);
      return;
    }
    std::set<int> ds;
    for (int s : bel) ds.insert(m.dirs[s].begin(), m.dirs[s].end());
    for (int d : ds) {
      std::set<int> nb;
      for (int s : bel) {
        int k = m.slot(s, d);
        if (k >= 0) nb.insert(m.succ[s][k].begin(), m.succ[s][k].end());
      }
      cur.push_back(d);
      self(self, std::vector<int>(nb.begin(), nb.end()));
      cur.pop_back();
    }
  };
  rec(rec, {m.init});
  return out;
}

namespace {

bool parse_subset_token(const std::string& tok, const std::set<std::string>& part, std::set<std::string>& out) {
  if (tok.size() < 3 || tok.front() != '{' || tok.back() != '}') return false;
  std::string body = tok.substr(1, tok.size() - 2);
  size_t start = 0;
  while (start <= body.size()) {
    size_t c = body.find(',', start);
    std::string p = body.substr(start, c == std::string::npos ? std::string::npos : c - start);
    if (p.empty() || !part.count(p)) return false;
    out.insert(p);
    if (c == std::string::npos) break;
    start = c + 1;
  }
  return !out.empty();
}

}  // namespace

bool is_boolean_game_structure(const Cgs& m, const std::vector<std::vector<std::string>>& partition) {
  if ((int)partition.size() != m.n) fail(Code::BadPartition, "partition needs one part per agent");
  std::set<std::string> seen;
  std::vector<std::set<std::string>> parts;
  for (auto& p : partition) {
    parts.emplace_back(p.begin(), p.end());
    for (auto& x : p) {
      if (m.prop(x) < 0) fail(Code::BadPartition, "partition mentions unknown proposition '" + x + "'");
      if (!seen.insert(x).second) fail(Code::BadPartition, "partition parts overlap on '" + x + "'");
    }
  }
  if (seen.size() != m.props.size()) fail(Code::BadPartition, "partition does not cover every proposition");
  std::vector<std::vector<Val>> actval(m.n, std::vector<Val>(m.A(), 0));
  std::vector<std::vector<bool>> ok(m.n, std::vector<bool>(m.A(), false));
  for (int i = 0; i < m.n; ++i)
    for (int a = 0; a < m.A(); ++a) {
      std::set<std::string> ps;
      if (!parse_subset_token(m.actions[a], parts[i], ps)) continue;
      ok[i][a] = true;
      for (auto& p : ps) actval[i][a] |= Val(1) << m.prop(p);
    }
  for (int s = 0; s < m.size(); ++s) {
    for (int i = 0; i < m.n; ++i)
      for (int a : m.feas[s][i])
        if (!ok[i][a]) return false;
    for (size_t k = 0; k < m.dirs[s].size(); ++k) {
      Val u = 0;
      auto v = m.decode(m.dirs[s][k]);
      for (int i = 0; i < m.n; ++i) u |= actval[i][v[i]];
      for (int t : m.succ[s][k])
        if (m.label[t] != u) return false;
    }
  }
  return true;
}

std::vector<std::vector<int>> layers(const Cgs& m, int upto) {
  std::vector<std::vector<int>> r{{m.init}};
  for (int k = 0; k < upto; ++k) {
    std::set<int> nx;
    for (int s : r.back())
      for (auto& v : m.succ[s]) nx.insert(v.begin(), v.end());
    r.emplace_back(nx.begin(), nx.end());
  }
  return r;
}

int absorbing_depth(const Cgs& m) {
  auto ls = layers(m, m.size() + 1);
  for (size_t d = 0; d < ls.size(); ++d) {
    bool all = true;
    for (int s : ls[d]) all = all && m.absorbing(s);
    if (all) return (int)d;
  }
  return -1;
}

Cgs relabel_observations(const Cgs& m, const std::vector<int>& cls) {
  Cgs r = m;
  for (int s = 0; s < m.size(); ++s) r.obs[s] = (Val)cls[s];
  return r;
}

StateLasso run_lasso(const Cgs& m, const DirLasso& w) {
  if (w.cycle.empty()) fail(Code::MalformedDocument, "lasso cycle must be nonempty");
  std::vector<int> seq;
  int s = m.init;
  for (int d : w.prefix) {
    seq.push_back(s);
    s = m.step(s, d);
  }
  // the run may need several turns of the direction cycle before it repeats
  std::map<std::pair<int, size_t>, size_t> seen;
  size_t c = 0;
  while (true) {
    auto key = std::make_pair(s, c);
    auto it = seen.find(key);
    if (it != seen.end()) {
      StateLasso r;
      r.prefix.assign(seq.begin(), seq.begin() + it->second);
      r.cycle.assign(seq.begin() + it->second, seq.end());
      r.normalize();
      return r;
    }
    seen[key] = seq.size();
    seq.push_back(s);
    s = m.step(s, w.cycle[c]);
    c = (c + 1) % w.cycle.size();
  }
}

ValLasso trace_lasso(const Cgs& m, const StateLasso& r) {
  ValLasso t;
  for (int s : r.prefix) t.prefix.push_back(m.label[s]);
  for (int s : r.cycle) t.cycle.push_back(m.label[s]);
  t.normalize();
  return t;
}

json lasso_dirs_json(const Cgs& m, const DirLasso& w) {
  json p = json::array(), c = json::array();
  for (int d : w.prefix) p.push_back(m.dir_json(d));
  for (int d : w.cycle) c.push_back(m.dir_json(d));
  return {{"prefix", p}, {"cycle", c}};
}

json lasso_states_json(const Cgs& m, const StateLasso& w) {
  json p = json::array(), c = json::array();
  for (int s : w.prefix) p.push_back(m.names[s]);
  for (int s : w.cycle) c.push_back(m.names[s]);
  return {{"prefix", p}, {"cycle", c}};
}

json lasso_vals_json(const Cgs& m, const ValLasso& w) {
  json p = json::array(), c = json::array();
  for (Val v : w.prefix) p.push_back(m.val_json(v));
  for (Val v : w.cycle) c.push_back(m.val_json(v));
  return {{"prefix", p}, {"cycle", c}};
}

}  // namespace eg
