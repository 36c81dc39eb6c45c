#include "fixtures.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace eg {

namespace {

using Strs = std::vector<std::string>;

// Small builder for fixture documents. Wildcard states receive the full
// action alphabet of the structure and loop on every direction.
struct FB {
  int n = 1;
  Strs props;
  Strs order;
  std::map<std::string, Strs> labels;
  std::map<std::string, std::vector<Strs>> feas;
  std::set<std::string> wild;
  std::string init;
  json trans = json::array();
  bool det = true;

  void state(const std::string& id, Strs lab, std::vector<Strs> f) {
    order.push_back(id);
    labels[id] = std::move(lab);
    feas[id] = std::move(f);
  }
  void absorbing(const std::string& id, Strs lab) {
    order.push_back(id);
    labels[id] = std::move(lab);
    wild.insert(id);
  }
  void t(const std::string& from, Strs dir, const std::string& to) {
    trans.push_back({{"from", from}, {"dir", dir}, {"to", to}});
  }
  void t(const std::string& from, Strs dir, Strs to) {
    trans.push_back({{"from", from}, {"dir", dir}, {"to", to}});
  }
  json doc() const {
    std::set<std::string> alpha;
    for (auto& [s, ls] : feas)
      for (auto& l : ls) alpha.insert(l.begin(), l.end());
    json d;
    d["agents"] = n;
    d["props"] = props;
    d["states"] = json::array();
    for (auto& s : order) d["states"].push_back({{"id", s}, {"label", labels.at(s)}});
    d["initial"] = init;
    d["feasible"] = json::object();
    for (auto& s : order) {
      if (wild.count(s)) d["feasible"][s] = std::vector<Strs>(n, Strs(alpha.begin(), alpha.end()));
      else d["feasible"][s] = feas.at(s);
    }
    json tr = trans;
    for (auto& s : order)
      if (wild.count(s)) tr.push_back({{"from", s}, {"dir", Strs(n, "*")}, {"to", s}});
    d["trans"] = tr;
    d["deterministic"] = det;
    return d;
  }
};

json table(const std::string& kind, int agent, int depth, std::vector<std::pair<json, std::string>> rows) {
  json t = json::array();
  for (auto& [obs, act] : rows) t.push_back({{"obs", obs}, {"act", act}});
  return {{"kind", kind}, {"agent", agent}, {"depth", depth}, {"table", t}, {"tail", "least"}};
}

json pat(std::vector<Strs> dirs) { return dirs; }

json m0_like(bool merged) {
  FB b;
  b.n = 3;
  b.props = {"p", "q"};
  b.init = "s0";
  std::vector<Strs> inner{{"a", "b"}, {"a", "b"}, {"a", "a'", "b", "b'"}};
  b.state("s0", {}, inner);
  b.state("s1", {}, inner);
  if (!merged) b.state("s1p", {}, inner);
  b.absorbing("s2", {"p"});
  b.absorbing("s3", {"q"});
  b.absorbing("s4", {});
  for (std::string p1 : {"a", "b"})
    for (std::string p2 : {"a", "b"})
      for (std::string p3 : {"a", "a'", "b", "b'"}) {
        std::string to;
        if (p1 == p2) to = "s4";
        else if (merged) to = "s1";
        else if (p3 == "a" || p3 == "a'") to = p1 == "b" ? "s1" : "s1p";
        else to = p1 == "a" ? "s1" : "s1p";
        b.t("s0", {p1, p2, p3}, to);
      }
  for (std::string s : merged ? Strs{"s1"} : Strs{"s1", "s1p"})
    for (std::string p1 : {"a", "b"})
      for (std::string p2 : {"a", "b"})
        for (std::string p3 : {"a", "a'", "b", "b'"}) {
          std::string to = "s4";
          if (p3 == "a" && p1 == "b") to = "s2";
          if (p3 == "b" && p1 == "a") to = "s2";
          if (p3 == "a'" && p2 == "b") to = "s3";
          if (p3 == "b'" && p2 == "a") to = "s3";
          b.t(s, {p1, p2, p3}, to);
        }
  return b.doc();
}

json m2_like(bool second) {
  FB b;
  b.n = 2;
  b.props = {"p"};
  b.init = "s0";
  b.state("s0", {"p"}, {{"a", "b"}, {"a", "b"}});
  b.absorbing("s1", {"p"});
  b.absorbing("s2", {"p"});
  b.absorbing("s3", {});
  b.t("s0", {"a", "a"}, "s1");
  b.t("s0", {"a", "b"}, second ? "s1" : "s2");
  b.t("s0", {"b", "a"}, "s2");
  b.t("s0", {"b", "b"}, "s3");
  return b.doc();
}

json m4_like(bool merged) {
  FB b;
  b.n = 2;
  b.props = {"p", "q"};
  b.init = "s0";
  std::vector<Strs> inner{{"a", "b"}, {"a", "a'", "b", "b'"}};
  b.state("s0", {}, {{"a", "b", "c"}, {"a"}});
  b.state("s1", {}, inner);
  if (!merged) b.state("s1p", {}, inner);
  b.absorbing("s2", {"p"});
  b.absorbing("s3", {"q"});
  b.absorbing("s4", {});
  b.t("s0", {"a", "a"}, "s4");
  b.t("s0", {"b", "a"}, "s1");
  b.t("s0", {"c", "a"}, merged ? "s1" : "s1p");
  for (std::string s : merged ? Strs{"s1"} : Strs{"s1", "s1p"})
    for (std::string p1 : {"a", "b"})
      for (std::string p2 : {"a", "a'", "b", "b'"}) {
        std::string to = "s4";
        if ((p1 == "a" && p2 == "b") || (p1 == "b" && p2 == "a")) to = "s2";
        if ((p1 == "a" && p2 == "b'") || (p1 == "b" && p2 == "a'")) to = "s3";
        b.t(s, {p1, p2}, to);
      }
  return b.doc();
}

json m6_like(bool seven) {
  FB b;
  b.n = 2;
  b.props = {"p"};
  b.init = "root";
  b.state("root", {"p"}, {{"a", "b"}, {"a", "b"}});
  b.state("v1", {"p"}, {{"a"}, {"a", "b", "c"}});
  b.state("v3", {"p"}, {{"a"}, {"a", "b", "c"}});
  b.absorbing("v4", {"p"});
  b.absorbing("vv1", {"p"});
  b.absorbing("vv3", {"p"});
  b.absorbing("vv4", {});
  b.t("root", {"a", "a"}, "v1");
  b.t("root", {"a", "b"}, seven ? "v1" : "v3");
  b.t("root", {"b", "a"}, "v3");
  b.t("root", {"b", "b"}, "v4");
  for (std::string s : {"v1", "v3"}) {
    b.t(s, {"a", "a"}, "vv1");
    b.t(s, {"a", "b"}, "vv3");
    b.t(s, {"a", "c"}, "vv4");
  }
  return b.doc();
}

json safe_run_goal(const Strs& seq, const std::string& loop) {
  // accepts exactly the run seq[0] ... seq[k-1] loop^omega
  int k = (int)seq.size();
  json edges = json::array();
  for (int i = 0; i < k; ++i) edges.push_back({{"from", i}, {"guard", Strs{seq[i]}}, {"to", i + 1}});
  edges.push_back({{"from", k}, {"guard", Strs{loop}}, {"to", k}});
  std::vector<int> acc;
  for (int i = 1; i <= k; ++i) acc.push_back(i);
  return {{"level", "run"},
          {"accept", "safe"},
          {"automaton", {{"states", k + 1}, {"initial", 0}, {"accepting", acc}, {"edges", edges}}}};
}

Fixture make(const std::string& id) {
  Fixture f;
  f.id = id;
  if (id == "G0" || id == "G1") {
    bool merged = id == "G1";
    f.title = merged ? "three players, merged middle state, no run-based equilibrium" : "three players, run-based equilibrium";
    f.structure = m0_like(merged);
    f.goals = {{{"eventually", "p"}}, {{"eventually", "q"}}, {{"always", "!(p | q)"}}};
    json run3 = table("run", 3, 2, {{Strs{"s0"}, "a"}, {Strs{"s0", "s1"}, "a'"}});
    if (!merged) run3["table"].push_back({{"obs", Strs{"s0", "s1p"}}, {"act", "b"}});
    f.profiles["fstar"] = {{"strategies",
                            {table("run", 1, 2, {{Strs{"s0"}, "a"}}), table("run", 2, 2, {{Strs{"s0"}, "a"}}), run3}}};
  } else if (id == "G2" || id == "G3") {
    f.title = id == "G2" ? "run-based preference that stays run-based" : "same preference, no longer run-based";
    f.structure = m2_like(id == "G3");
    f.goals = {{{"prefix", {pat({{"a", "a"}})}}}, {{"prefix", {pat({{"a", "*"}}), pat({{"b", "a"}})}}}};
  } else if (id == "G4" || id == "G5") {
    bool merged = id == "G5";
    f.title = merged ? "two players, no run-based equilibrium" : "two players, run-based equilibrium";
    f.structure = m4_like(merged);
    f.goals = {{{"prefix",
                 {pat({{"b", "a"}, {"a", "b"}}), pat({{"b", "a"}, {"b", "a"}}), pat({{"c", "a"}, {"a", "b'"}}),
                  pat({{"c", "a"}, {"b", "a'"}})}}},
               {{"prefix",
                 {pat({{"a", "a"}}), pat({{"*", "*"}, {"a", "a"}}), pat({{"*", "*"}, {"a", "a'"}}),
                  pat({{"*", "*"}, {"b", "b"}}), pat({{"*", "*"}, {"b", "b'"}})}}}};
    if (!merged) {
      json r1 = table("run", 1, 2, {{Strs{"s0"}, "a"}});
      json r2 = table("run", 2, 2, {{Strs{"s0"}, "a"}, {Strs{"s0", "s1"}, "a'"}, {Strs{"s0", "s1p"}, "a"}});
      f.profiles["fstar"] = {{"strategies", {r1, r2}}};
    }
  } else if (id == "G6" || id == "G7") {
    f.title = id == "G6" ? "two players, the K-invariance example (left)" : "two players, the K-invariance example (right)";
    f.structure = m6_like(id == "G7");
    std::vector<json> g1;
    for (Strs d0 : {Strs{"a", "a"}, Strs{"a", "b"}, Strs{"b", "a"}}) g1.push_back(pat({d0, {"a", "c"}}));
    json win1 = {{"prefix", g1}};
    // player 2 wants the complement: every other computation
    json c2 = json::array();
    c2.push_back(pat({{"b", "b"}}));
    for (Strs d0 : {Strs{"a", "a"}, Strs{"a", "b"}, Strs{"b", "a"}})
      for (Strs d1 : {Strs{"a", "a"}, Strs{"a", "b"}}) c2.push_back(pat({d0, d1}));
    f.goals = {win1, {{"prefix", c2}}};
    auto dir = [](const char* x, const char* y) { return json::array({json::array({x, y})}); };
    json f1 = table("comp", 1, 2,
                    {{json::array(), "b"}, {dir("a", "a"), "a"}, {dir("a", "b"), "a"}, {dir("b", "a"), "a"}, {dir("b", "b"), "b"}});
    json f2 = table("comp", 2, 2,
                    {{json::array(), "b"}, {dir("a", "a"), "a"}, {dir("a", "b"), "b"}, {dir("b", "a"), "b"}, {dir("b", "b"), "b"}});
    f.profiles["f"] = {{"strategies", {f1, f2}}};
  } else if (id == "ND7") {
    f.title = "nondeterministic branching into two absorbing states";
    FB b;
    b.n = 2;
    b.props = {"x", "y", "z"};
    b.init = "s0";
    b.det = false;
    b.state("s0", {"x"}, {{"a"}, {"a"}});
    b.state("s1", {"z"}, {{"a"}, {"a"}});
    b.state("s2", {"y"}, {{"a"}, {"a"}});
    b.t("s0", {"a", "a"}, Strs{"s1", "s2"});
    b.t("s1", {"a", "a"}, "s1");
    b.t("s2", {"a", "a"}, "s2");
    f.structure = b.doc();
    f.goals = {{{"eventually", "z"}}, {{"eventually", "z"}}};
    f.modes = {"forall", "forall"};
    f.profiles["all-a"] = {{"strategies", {table("comp", 1, 1, {}), table("comp", 2, 1, {})}}};
  } else if (id == "ND8A" || id == "ND8B") {
    f.title = "single self-loop state, one of two non-bisimilar systems";
    FB b;
    b.props = {"x", "y"};
    b.init = "s0";
    b.state("s0", {id == "ND8A" ? "x" : "y"}, {{"a"}});
    b.t("s0", {"a"}, "s0");
    f.structure = b.doc();
    f.goals = {{{"always", "x"}}};
    f.profiles["const"] = {{"strategies", {table("comp", 1, 1, {})}}};
  } else if (id == "ND9" || id == "ND10") {
    bool ten = id == "ND10";
    f.title = ten ? "nondeterministic choice with a shared action" : "nondeterministic choice with disjoint actions";
    FB b;
    b.props = {"x", "y", "z"};
    b.init = "s0";
    b.det = false;
    b.state("s0", {"x"}, {{"a"}});
    b.state("s1", {"y"}, {{ten ? "a" : "b"}});
    b.state("s2", {"z"}, {{ten ? "a" : "c"}});
    b.t("s0", {"a"}, Strs{"s1", "s2"});
    b.t("s1", {ten ? "a" : "b"}, "s1");
    b.t("s2", {ten ? "a" : "c"}, "s2");
    f.structure = b.doc();
    f.goals = {{{"eventually", "y"}}};
    f.modes = {"forall"};
    if (ten) {
      f.profiles["const-a"] = {{"strategies", {table("comp", 1, 1, {})}}};
    } else {
      f.profiles["run"] = {{"strategies", {table("run", 1, 2, {{Strs{"s0"}, "a"}, {Strs{"s0", "s1"}, "b"}, {Strs{"s0", "s2"}, "c"}})}}};
      f.profiles["comp"] = {{"strategies", {table("comp", 1, 1, {{json::array(), "a"}})}}};
    }
  } else if (id == "ND11A" || id == "ND11B") {
    bool b11 = id == "ND11B";
    f.title = b11 ? "bisimilar system without a congruent counterpart goal" : "run-based goals for two players";
    FB b;
    b.n = 2;
    b.props = {"x"};
    b.init = "s0";
    b.state("s0", {"x"}, {{"a", "b"}, {"a", "b"}});
    b.absorbing("s1", {"x"});
    if (!b11) b.absorbing("s2", {"x"});
    if (b11) {
      b.t("s0", {"*", "*"}, "s1");
    } else {
      b.t("s0", {"a", "a"}, "s1");
      b.t("s0", {"b", "b"}, "s1");
      b.t("s0", {"a", "b"}, "s2");
      b.t("s0", {"b", "a"}, "s2");
    }
    f.structure = b.doc();
    if (b11) f.goals = {safe_run_goal({"s0"}, "s1"), {{"always", "false"}}};
    else f.goals = {safe_run_goal({"s0"}, "s1"), safe_run_goal({"s0"}, "s2")};
  } else {
    fail(Code::UnknownFixture, "unknown fixture '" + id + "'");
  }
  if (f.profiles.is_null()) f.profiles = json::object();
  return f;
}

}  // namespace

std::vector<std::string> fixture_ids() {
  return {"G0", "G1", "G2", "G3", "G4", "G5", "G6", "G7", "ND7", "ND8A", "ND8B", "ND9", "ND10", "ND11A", "ND11B"};
}

Fixture fixture(const std::string& id) { return make(id); }

std::string fixture_partner(const std::string& id) {
  static const std::map<std::string, std::string> p{{"G0", "G1"},     {"G1", "G0"},   {"G2", "G3"},   {"G3", "G2"},
                                                    {"G4", "G5"},     {"G5", "G4"},   {"G6", "G7"},   {"G7", "G6"},
                                                    {"ND8A", "ND8B"}, {"ND8B", "ND8A"}, {"ND11A", "ND11B"},
                                                    {"ND11B", "ND11A"}};
  auto it = p.find(id);
  return it == p.end() ? "" : it->second;
}

json fixture_to_json(const Fixture& f) {
  json d{{"id", f.id}, {"title", f.title}, {"structure", f.structure}, {"goals", f.goals}, {"profiles", f.profiles},
         {"depth", f.depth}};
  if (!f.modes.is_null()) d["modes"] = f.modes;
  return d;
}

Game fixture_game(const std::string& id) {
  Fixture f = fixture(id);
  json d{{"structure", f.structure}, {"goals", f.goals}};
  if (!f.modes.is_null()) d["modes"] = f.modes;
  return game_from_json(d);
}

Profile fixture_profile(const std::string& id, const std::string& name) {
  Fixture f = fixture(id);
  if (!f.profiles.contains(name)) fail(Code::UnknownFixture, "fixture '" + id + "' has no profile '" + name + "'");
  return profile_from_json(f.profiles[name], validate(f.structure));
}

// ---------------------------------------------------------------- generators

namespace {

int pick(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

Strs action_names(int k) {
  Strs r;
  for (int i = 0; i < k; ++i) r.push_back(std::string(1, char('a' + i)));
  return r;
}

Strs prop_names(int k) {
  Strs r;
  for (int i = 0; i < k; ++i) r.push_back(std::string(1, char('p' + i)));
  return r;
}

Strs random_subset(Rng& rng, const Strs& from, bool nonempty = true) {
  Strs r;
  while (r.empty()) {
    for (auto& x : from)
      if (pick(rng, 0, 1)) r.push_back(x);
    if (!nonempty) break;
  }
  return r;
}

struct Base {
  int n = 1;
  Strs props;
  std::vector<Strs> labels;
  std::vector<std::vector<Strs>> feas;
  std::vector<std::vector<std::vector<int>>> dirs;  // per state: list of action-index tuples
  std::vector<std::vector<std::vector<int>>> succ;  // per state, per direction: base targets
  std::vector<bool> wild;
  Strs alpha;
};

void expand_dirs(Base& b, int s) {
  std::vector<std::vector<int>> out{{}};
  for (int i = 0; i < b.n; ++i) {
    std::vector<std::vector<int>> nx;
    for (auto& pre : out)
      for (size_t k = 0; k < b.feas[s][i].size(); ++k) {
        auto v = pre;
        v.push_back((int)k);
        nx.push_back(v);
      }
    out = nx;
  }
  b.dirs[s] = out;
}

// copies[s] copies of each base state; every copy picks its own copy of each target
Cgs split(Rng& rng, const Base& b, const std::vector<int>& copies, bool det) {
  auto name = [&](int s, int c) { return "s" + std::to_string(s) + (copies[s] > 1 ? "_" + std::to_string(c) : ""); };
  FB fb;
  fb.n = b.n;
  fb.props = b.props;
  fb.init = name(0, 0);
  fb.det = det;
  for (size_t s = 0; s < b.labels.size(); ++s)
    for (int c = 0; c < copies[s]; ++c) {
      if (b.wild[s]) {
        fb.absorbing(name((int)s, c), b.labels[s]);
        continue;
      }
      fb.state(name((int)s, c), b.labels[s], b.feas[s]);
    }
  for (size_t s = 0; s < b.labels.size(); ++s) {
    if (b.wild[s]) continue;
    for (int c = 0; c < copies[s]; ++c)
      for (size_t k = 0; k < b.dirs[s].size(); ++k) {
        Strs dir;
        for (int i = 0; i < b.n; ++i) dir.push_back(b.feas[s][i][b.dirs[s][k][i]]);
        Strs to;
        for (int t : b.succ[s][k]) {
          if (det) {
            to.push_back(name(t, pick(rng, 0, copies[t] - 1)));
          } else {
            Strs cs;
            for (int x = 0; x < copies[t]; ++x) cs.push_back(name(t, x));
            for (auto& x : random_subset(rng, cs)) to.push_back(x);
          }
        }
        fb.t(name((int)s, c), dir, to);
      }
  }
  json d = fb.doc();
  // wildcard states take the full base alphabet
  for (auto& s : fb.order)
    if (fb.wild.count(s)) d["feasible"][s] = std::vector<Strs>(b.n, b.alpha);
  return validate(d);
}

Base random_base(Rng& rng, int states, int n, int nact, int nprops, bool det) {
  Base b;
  b.n = n;
  b.props = prop_names(nprops);
  b.alpha = action_names(nact);
  b.labels.resize(states);
  b.feas.resize(states);
  b.dirs.resize(states);
  b.succ.resize(states);
  b.wild.assign(states, false);
  for (int s = 0; s < states; ++s) {
    b.labels[s] = random_subset(rng, b.props, false);
    for (int i = 0; i < n; ++i) b.feas[s].push_back(random_subset(rng, b.alpha));
    expand_dirs(b, s);
    for (size_t k = 0; k < b.dirs[s].size(); ++k) {
      std::set<int> to{pick(rng, 0, states - 1)};
      if (!det && pick(rng, 0, 2) == 0) to.insert(pick(rng, 0, states - 1));
      b.succ[s].push_back({to.begin(), to.end()});
    }
  }
  // the alphabet must be exactly what is used
  std::set<std::string> used;
  for (auto& fs : b.feas)
    for (auto& l : fs) used.insert(l.begin(), l.end());
  b.alpha.assign(used.begin(), used.end());
  return b;
}

std::vector<int> random_copies(Rng& rng, int base, int max_states) {
  std::vector<int> c(base, 1);
  int total = base;
  for (int s = 0; s < base && total < max_states; ++s)
    if (pick(rng, 0, 1)) c[s]++, total++;
  return c;
}

Base layered_base(Rng& rng, int max_states, int n, int nact, int depth) {
  // layer sizes: 1 state at depth 0, the remaining budget spread over the others
  std::vector<int> layer{0};
  int budget = max_states - 1;
  std::vector<std::vector<int>> at{{0}};
  int next = 1;
  for (int k = 1; k <= depth; ++k) {
    // keep one state for every later layer; the last layer takes what is left
    int room = budget - (depth - k);
    int want = k == depth ? std::min(room, 3) : pick(rng, 1, std::max(1, std::min(room, 3)));
    want = std::max(1, want);
    if (budget <= 0) want = 0;
    std::vector<int> ids;
    for (int j = 0; j < want; ++j) ids.push_back(next++);
    budget -= want;
    at.push_back(ids);
  }
  int states = next;
  Base b;
  b.n = n;
  b.props = prop_names(2);
  b.alpha = action_names(nact);
  b.labels.resize(states);
  b.feas.resize(states);
  b.dirs.resize(states);
  b.succ.resize(states);
  b.wild.assign(states, false);
  int last = (int)at.size() - 1;
  while (last > 0 && at[last].empty()) --last;
  for (int k = 0; k <= last; ++k)
    for (int s : at[k]) {
      b.labels[s] = random_subset(rng, b.props, false);
      if (k == last) {
        b.wild[s] = true;
        continue;
      }
      bool choice = false;
      for (int i = 0; i < n; ++i) {
        b.feas[s].push_back(random_subset(rng, b.alpha));
        choice = choice || b.feas[s].back().size() > 1;
      }
      // somebody has a choice at every inner state
      if (!choice) b.feas[s][pick(rng, 0, n - 1)] = b.alpha;
      expand_dirs(b, s);
      // successors in the next layer, or directly in the last one
      std::vector<int> cand = at[k + 1];
      if (k + 1 < last) cand.insert(cand.end(), at[last].begin(), at[last].end());
      for (size_t d = 0; d < b.dirs[s].size(); ++d) b.succ[s].push_back({cand[pick(rng, 0, (int)cand.size() - 1)]});
      if (cand.size() > 1 && b.dirs[s].size() > 1) {
        bool branches = false;
        for (auto& t : b.succ[s]) branches = branches || t != b.succ[s][0];
        if (!branches) b.succ[s][pick(rng, 1, (int)b.succ[s].size() - 1)] = {cand[0] == b.succ[s][0][0] ? cand[1] : cand[0]};
      }
    }
  // every action must be in the alphabet; wildcard states carry all of them
  return b;
}

}  // namespace

Cgs random_split_cgs(Rng& rng, const GenSpec& g) {
  int n = pick(rng, 1, g.max_agents);
  int nact = pick(rng, 1, g.max_actions);
  int base = pick(rng, 1, std::max(1, g.max_states / 2 + 1));
  base = std::min(base, g.max_states);
  Base b = random_base(rng, base, n, nact, g.props, g.det);
  return split(rng, b, random_copies(rng, base, g.max_states), g.det);
}

Cgs random_layered_cgs(Rng& rng, int max_states, int agents, int max_actions, int depth) {
  Base b = layered_base(rng, max_states, agents, pick(rng, 2, std::max(2, max_actions)), depth);
  return split(rng, b, std::vector<int>(b.labels.size(), 1), true);
}

std::pair<Cgs, Cgs> random_layered_pair(Rng& rng, int max_states, int agents, int max_actions, int depth) {
  // the base takes part of the state budget so that splitting has room
  int base_budget = std::max(depth + 1, max_states - 2);
  Base b = layered_base(rng, base_budget, agents, pick(rng, 2, std::max(2, max_actions)), depth);
  int N = (int)b.labels.size();
  Cgs x = split(rng, b, random_copies(rng, N, max_states), true);
  Cgs y = split(rng, b, random_copies(rng, N, max_states), true);
  return {x, y};
}

Cgs random_bgs(Rng& rng, int agents, int props_per_agent, int extra_states, std::vector<std::vector<std::string>>* part) {
  (void)extra_states;
  Strs props;
  std::vector<Strs> own(agents);
  for (int i = 0; i < agents; ++i)
    for (int k = 0; k < props_per_agent; ++k) {
      std::string p = std::string(1, char('p' + k)) + std::to_string(i + 1);
      own[i].push_back(p);
      props.push_back(p);
    }
  if (part) *part = own;
  // tokens: nonempty subsets of the agent's own propositions
  std::vector<std::vector<std::pair<std::string, Strs>>> toks(agents);
  for (int i = 0; i < agents; ++i) {
    int k = (int)own[i].size();
    for (int mask = 1; mask < (1 << k); ++mask) {
      Strs ps;
      for (int j = 0; j < k; ++j)
        if (mask >> j & 1) ps.push_back(own[i][j]);
      std::string t = "{";
      for (size_t j = 0; j < ps.size(); ++j) t += (j ? "," : "") + ps[j];
      t += "}";
      toks[i].push_back({t, ps});
    }
  }
  // states are valuations, discovered from a random initial valuation
  auto key = [](Strs v) {
    std::sort(v.begin(), v.end());
    std::string s = "v";
    for (auto& p : v) s += "_" + p;
    return s;
  };
  FB fb;
  fb.n = agents;
  fb.props = props;
  Strs v0 = random_subset(rng, props, false);
  fb.init = key(v0);
  std::map<std::string, Strs> seen{{key(v0), v0}};
  std::vector<std::string> todo{key(v0)};
  while (!todo.empty()) {
    std::string s = todo.back();
    todo.pop_back();
    std::vector<std::vector<int>> choice(agents);
    std::vector<Strs> feas(agents);
    for (int i = 0; i < agents; ++i) {
      for (size_t t = 0; t < toks[i].size(); ++t)
        if (pick(rng, 0, 1)) choice[i].push_back((int)t);
      if (choice[i].empty()) choice[i].push_back(pick(rng, 0, (int)toks[i].size() - 1));
      for (int t : choice[i]) feas[i].push_back(toks[i][t].first);
    }
    fb.state(s, seen[s], feas);
    std::vector<int> pos(agents, 0);
    while (true) {
      Strs dir, lab;
      for (int i = 0; i < agents; ++i) {
        auto& tk = toks[i][choice[i][pos[i]]];
        dir.push_back(tk.first);
        lab.insert(lab.end(), tk.second.begin(), tk.second.end());
      }
      std::string t = key(lab);
      if (!seen.count(t)) {
        std::sort(lab.begin(), lab.end());
        seen[t] = lab;
        todo.push_back(t);
      }
      fb.t(s, dir, t);
      int i = agents - 1;
      while (i >= 0 && ++pos[i] == (int)choice[i].size()) pos[i--] = 0;
      if (i < 0) break;
    }
  }
  return validate(fb.doc());
}

namespace {

Pred random_pred(Rng& rng, const Cgs& m, int depth) {
  Pred p;
  int r = depth <= 0 ? 0 : pick(rng, 0, 3);
  if (r <= 1 || m.props.empty()) {
    if (m.props.empty()) {
      p.op = pick(rng, 0, 1) ? Pred::True : Pred::False;
      return p;
    }
    p.op = Pred::Atom;
    p.atom = m.props[pick(rng, 0, (int)m.props.size() - 1)];
    if (r == 1) {
      Pred n;
      n.op = Pred::Not;
      n.kids.push_back(p);
      return n;
    }
    return p;
  }
  p.op = r == 2 ? Pred::And : Pred::Or;
  p.kids.push_back(random_pred(rng, m, depth - 1));
  p.kids.push_back(random_pred(rng, m, depth - 1));
  return p;
}

}  // namespace

Objective random_trace_goal(Rng& rng, const Cgs& m) {
  Pred p = random_pred(rng, m, 1);
  switch (pick(rng, 0, 2)) {
    case 0: return eventually(p);
    case 1: return always(p);
    default: return infinitely(p);
  }
}

Objective random_run_goal(Rng& rng, const Cgs& m) {
  // reach one of a random set of states
  Strs targets;
  for (auto& s : m.names)
    if (pick(rng, 0, 2) == 0) targets.push_back(s);
  if (targets.empty()) targets.push_back(m.names[pick(rng, 0, m.size() - 1)]);
  json edges = json::array();
  edges.push_back({{"from", 0}, {"guard", targets}, {"to", 1}});
  edges.push_back({{"from", 0}, {"guard", "*"}, {"to", 0}});
  edges.push_back({{"from", 1}, {"guard", "*"}, {"to", 1}});
  return objective_from_json({{"level", "run"},
                              {"accept", "reach"},
                              {"automaton", {{"states", 2}, {"initial", 0}, {"accepting", {1}}, {"edges", edges}}}});
}

Profile random_profile(Rng& rng, const Cgs& m, Kind k, int H) {
  Profile p;
  for (int i = 0; i < m.n; ++i) {
    Trie t;
    Beliefs B(m);
    std::set<std::vector<std::int64_t>> done;
    std::function<void(int, const std::vector<std::int64_t>&, int, int)> go = [&](int s, const std::vector<std::int64_t>& key,
                                                                                int bel, int depth) {
      if (depth >= H) return;
      if (done.insert(key).second) {
        std::vector<int> opts;
        for (int a : m.feas[s][i])
          if (B.allows(bel, i, a)) opts.push_back(a);
        if (!opts.empty()) t.put(key, opts[pick(rng, 0, (int)opts.size() - 1)]);
      }
      for (size_t d = 0; d < m.dirs[s].size(); ++d)
        for (int u : m.succ[s][d]) {
          Obs o{m.dirs[s][d], s, u, m.obs[u]};
          auto nk = key;
          nk.push_back(symbol(k, o));
          go(u, nk, B.advance(k, bel, o), depth + 1);
        }
    };
    std::vector<std::int64_t> k0;
    if (k == Kind::Run) k0.push_back(m.init);
    if (k == Kind::Trace) k0.push_back((std::int64_t)m.obs[m.init]);
    go(m.init, k0, B.initial(), 0);
    p.push_back(table_strategy(k, i, H, t));
  }
  return p;
}

}  // namespace eg
