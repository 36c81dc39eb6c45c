#include "sl.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <unordered_map>

namespace eg {

// ---------------------------------------------------------------- parsing

namespace {

struct Parser {
  const std::string& s;
  size_t i = 0;
  SlFormula f;

  explicit Parser(const std::string& t) : s(t) {}

  [[noreturn]] void err(const std::string& msg) { fail(Code::SyntaxError, msg + " at position " + std::to_string(i)); }
  void ws() {
    while (i < s.size() && std::isspace((unsigned char)s[i])) ++i;
  }
  bool eat(const std::string& t) {
    ws();
    if (s.compare(i, t.size(), t) == 0) {
      i += t.size();
      return true;
    }
    return false;
  }
  void expect(const std::string& t) {
    if (!eat(t)) err("expected '" + t + "'");
  }
  static bool idc(char c) { return std::isalnum((unsigned char)c) || c == '_' || c == '\''; }
  std::string ident() {
    ws();
    size_t j = i;
    if (j >= s.size() || !(std::isalpha((unsigned char)s[j]) || s[j] == '_')) err("expected an identifier");
    while (j < s.size() && idc(s[j])) ++j;
    std::string r = s.substr(i, j - i);
    i = j;
    return r;
  }
  // keyword X/F/G/U only when not part of a longer identifier
  bool keyword(const std::string& k) {
    ws();
    if (s.compare(i, k.size(), k) != 0) return false;
    if (i + k.size() < s.size() && idc(s[i + k.size()])) return false;
    i += k.size();
    return true;
  }
  int node(SlNode n) {
    f.nodes.push_back(std::move(n));
    return (int)f.nodes.size() - 1;
  }
  int mk(SlNode::Op op, std::vector<int> kids, std::string name = "", int agent = -1) {
    SlNode n;
    n.op = op;
    n.kids = std::move(kids);
    n.name = std::move(name);
    n.agent = agent;
    return node(std::move(n));
  }

  int disj() {
    int l = conj();
    while (eat("|")) l = mk(SlNode::Or, {l, conj()});
    return l;
  }
  int conj() {
    int l = until();
    while (eat("&")) l = mk(SlNode::And, {l, until()});
    return l;
  }
  int until() {
    int l = unary();
    if (keyword("U")) return mk(SlNode::Until, {l, until()});
    return l;
  }
  bool binding_ahead() {
    ws();
    size_t j = i;
    if (j >= s.size() || s[j] != '(') return false;
    ++j;
    while (j < s.size() && std::isspace((unsigned char)s[j])) ++j;
    size_t k = j;
    while (k < s.size() && std::isdigit((unsigned char)s[k])) ++k;
    if (k == j) return false;
    while (k < s.size() && std::isspace((unsigned char)s[k])) ++k;
    return k < s.size() && s[k] == ',';
  }
  int unary() {
    if (eat("!")) return mk(SlNode::Not, {unary()});
    if (eat("<<")) {
      std::string x = ident();
      expect(">>");
      return mk(SlNode::Exists, {unary()}, x);
    }
    if (eat("[[")) {
      std::string x = ident();
      expect("]]");
      return mk(SlNode::Forall, {unary()}, x);
    }
    if (binding_ahead()) {
      expect("(");
      ws();
      size_t j = i;
      while (i < s.size() && std::isdigit((unsigned char)s[i])) ++i;
      int agent = std::stoi(s.substr(j, i - j));
      if (agent < 1) err("agents are numbered from 1");
      expect(",");
      std::string x = ident();
      expect(")");
      return mk(SlNode::Bind, {unary()}, x, agent - 1);
    }
    if (keyword("X")) return mk(SlNode::Next, {unary()});
    if (keyword("F")) return mk(SlNode::Eventually, {unary()});
    if (keyword("G")) return mk(SlNode::Always, {unary()});
    return primary();
  }
  int primary() {
    if (eat("(")) {
      int r = disj();
      expect(")");
      return r;
    }
    std::string id = ident();
    if (id == "true") return mk(SlNode::True, {});
    if (id == "false") return mk(SlNode::False, {});
    if (id == "U") err("'U' needs a left operand");
    return mk(SlNode::Atom, {}, id);
  }
};

void annotate(SlFormula& f, int v) {
  SlNode& n = f.nodes[v];
  for (int k : n.kids) annotate(f, k);
  std::set<std::string> r;
  for (int k : f.nodes[v].kids) r.insert(f.nodes[k].reads.begin(), f.nodes[k].reads.end());
  SlNode& m = f.nodes[v];
  switch (m.op) {
    case SlNode::Next:
    case SlNode::Until:
    case SlNode::Eventually:
    case SlNode::Always:
      r.insert("#*");  // every agent
      break;
    case SlNode::Exists:
    case SlNode::Forall: r.erase(m.name); break;
    case SlNode::Bind:
      r.erase("#" + std::to_string(m.agent));
      r.insert(m.name);
      break;
    default: break;
  }
  m.reads.assign(r.begin(), r.end());
}

// agents a variable is bound to inside the scope of its quantifier
void collect_binds(SlFormula& f, int v, const std::string& x, std::set<int>& out) {
  const SlNode& n = f.nodes[v];
  if ((n.op == SlNode::Exists || n.op == SlNode::Forall) && n.name == x) return;
  if (n.op == SlNode::Bind && n.name == x) out.insert(n.agent);
  for (int k : n.kids) collect_binds(f, k, x, out);
}

std::string render(const SlFormula& f, int v) {
  const SlNode& n = f.nodes[v];
  auto k = [&](int i) { return render(f, n.kids[i]); };
  switch (n.op) {
    case SlNode::True: return "true";
    case SlNode::False: return "false";
    case SlNode::Atom: return n.name;
    case SlNode::Not: return "!" + k(0);
    case SlNode::And: return "(" + k(0) + " & " + k(1) + ")";
    case SlNode::Or: return "(" + k(0) + " | " + k(1) + ")";
    case SlNode::Next: return "X " + k(0);
    case SlNode::Until: return "(" + k(0) + " U " + k(1) + ")";
    case SlNode::Eventually: return "F " + k(0);
    case SlNode::Always: return "G " + k(0);
    case SlNode::Exists: return "<<" + n.name + ">> " + k(0);
    case SlNode::Forall: return "[[" + n.name + "]] " + k(0);
    case SlNode::Bind: return "(" + std::to_string(n.agent + 1) + "," + n.name + ") " + k(0);
  }
  return "";
}

}  // namespace

SlFormula parse_sl(const std::string& text) {
  Parser p(text);
  p.f.root = p.disj();
  p.ws();
  if (p.i != text.size()) p.err("unexpected input");
  SlFormula f = std::move(p.f);
  f.text = text;
  annotate(f, f.root);
  for (auto& n : f.nodes)
    if (n.op == SlNode::Exists || n.op == SlNode::Forall) {
      std::set<int> b;
      collect_binds(f, n.kids[0], n.name, b);
      n.binds.assign(b.begin(), b.end());
    }
  return f;
}

std::string sl_to_string(const SlFormula& f) { return render(f, f.root); }

// ---------------------------------------------------------------- evaluation

namespace {

using Key = std::vector<std::int64_t>;

struct KeyHash {
  size_t operator()(const Key& k) const {
    size_t h = 1469598103934665603ull;
    for (auto x : k) h = (h ^ (size_t)x) * 1099511628211ull;
    return h;
  }
};

struct Pos {
  int state = 0;
  int level = 0;  // steps since the evaluation start
  int bel = 0;
  Key key;  // observation sequence, kept while level < H
};

// agents occupy slots 0..n-1, variables the slots after them
using Asg = std::vector<int>;

struct Eval {
  const Cgs& m;
  const SlFormula& f;
  SlSpace sp;
  Beliefs B;
  std::vector<std::map<Key, int>> strats{{}};  // id 0: the empty table
  std::unordered_map<Key, bool, KeyHash> memo;
  std::map<Key, std::vector<int>> spaces;

  std::map<std::string, int> slot;
  std::vector<std::vector<int>> reads;  // per node; -1 stands for every agent
  std::vector<char> qfree;              // no quantifier below: cheaper to recompute than to memoize

  Eval(const Cgs& mm, const SlFormula& ff, const SlSpace& s) : m(mm), f(ff), sp(s), B(mm) {
    for (auto& n : f.nodes)
      if (n.op == SlNode::Exists || n.op == SlNode::Forall || n.op == SlNode::Bind) slot.emplace(n.name, 0);
    int k = m.n;
    for (auto& [name, v] : slot) v = k++;
    for (auto& n : f.nodes) {
      std::vector<int> r;
      for (auto& x : n.reads) {
        if (x == "#*") r.push_back(-1);
        else if (x[0] == '#') r.push_back(std::stoi(x.substr(1)));
        else r.push_back(slot.at(x));
      }
      reads.push_back(r);
    }
    qfree.assign(f.nodes.size(), 1);
    for (int v = 0; v < (int)f.nodes.size(); ++v) {  // children precede parents
      auto& n = f.nodes[v];
      if (n.op == SlNode::Exists || n.op == SlNode::Forall) qfree[v] = 0;
      for (int k : n.kids) qfree[v] = qfree[v] && qfree[k];
    }
  }
  int slots() const { return m.n + (int)slot.size(); }

  bool deep(const Pos& p) const { return p.level >= sp.depth; }

  int act(int sid, int agent, const Pos& p) {
    if (!deep(p)) {
      auto& t = strats[sid];
      auto it = t.find(p.key);
      if (it != t.end()) return it->second;
    }
    int a = B.tail(p.bel, agent);
    if (a < 0) fail(Code::Infeasible, "no feasible tail action for agent " + std::to_string(agent + 1));
    return a;
  }

  Pos step(const Pos& p, const Asg& a) {
    std::vector<int> acts(m.n);
    for (int i = 0; i < m.n; ++i) acts[i] = act(a[i], i, p);
    int d = m.encode(acts);
    if (m.slot(p.state, d) < 0) fail(Code::Infeasible, "assignment prescribes an illegal direction");
    int t = m.step(p.state, d);
    Obs o{d, p.state, t, m.obs[t]};
    Pos q;
    q.state = t;
    q.level = p.level + 1;
    q.bel = sp.kind == Kind::Trace ? B.advance(Kind::Trace, p.bel, o) : B.initial_at(t);
    if (!deep(q)) {
      q.key = p.key;
      q.key.push_back(symbol(sp.kind, o));
    }
    return q;
  }

  void pos_key(Key& k, const Pos& p) const {
    if (deep(p)) {
      k.push_back(-1);
      k.push_back(p.state);
      k.push_back(p.bel);
    } else {
      k.push_back(-2);
      k.push_back(p.state);
      k.push_back((std::int64_t)p.key.size());
      k.insert(k.end(), p.key.begin(), p.key.end());
    }
  }

  // strategies over the keys below p, feasible for every agent in `binds`
  const std::vector<int>& space(const std::vector<int>& binds, const Pos& p) {
    Key ck(binds.begin(), binds.end());
    ck.push_back(-3);
    pos_key(ck, p);
    auto it = spaces.find(ck);
    if (it != spaces.end()) return it->second;
    std::vector<int> ids;
    if (binds.empty() || deep(p)) {
      ids.push_back(0);
      return spaces[ck] = ids;
    }
    std::map<Key, std::vector<int>> opts;
    std::function<void(int, const Key&, int, int)> walk = [&](int s, const Key& key, int bel, int level) {
      if (level >= sp.depth || opts.count(key)) return;
      std::vector<int> o;
      const auto& st = B.get(bel);
      for (int a : m.feas[st[0]][binds[0]]) {
        bool ok = true;
        for (int i : binds) ok = ok && B.allows(bel, i, a);
        if (ok) o.push_back(a);
      }
      opts[key] = o;
      for (size_t k = 0; k < m.dirs[s].size(); ++k) {
        int t = m.succ[s][k][0];
        Obs ob{m.dirs[s][k], s, t, m.obs[t]};
        Key nk = key;
        nk.push_back(symbol(sp.kind, ob));
        walk(t, nk, sp.kind == Kind::Trace ? B.advance(Kind::Trace, bel, ob) : B.initial_at(t), level + 1);
      }
    };
    walk(p.state, p.key, p.bel, p.level);
    std::vector<std::pair<Key, std::vector<int>>> list(opts.begin(), opts.end());
    double total = 1;
    for (auto& [k, o] : list) total *= (double)o.size();
    if (total > (double)sp.cap) fail(Code::BudgetExceeded, "strategy space exceeds the cap");
    std::vector<size_t> pos(list.size(), 0);
    if (total >= 1) {
      while (true) {
        std::map<Key, int> t;
        for (size_t j = 0; j < list.size(); ++j) t[list[j].first] = list[j].second[pos[j]];
        strats.push_back(std::move(t));
        ids.push_back((int)strats.size() - 1);
        int j = (int)list.size() - 1;
        while (j >= 0 && ++pos[j] == list[j].second.size()) pos[j--] = 0;
        if (j < 0) break;
      }
    }
    return spaces[ck] = ids;
  }

  bool eval(int v, const Pos& p, const Asg& a) {
    const SlNode& n = f.nodes[v];
    if (qfree[v]) return compute(n, p, a);
    Key mk{v};
    pos_key(mk, p);
    for (int r : reads[v]) {
      if (r < 0) mk.insert(mk.end(), a.begin(), a.begin() + m.n);
      else mk.push_back(a[r]);
    }
    auto it = memo.find(mk);
    if (it != memo.end()) return it->second;
    bool r = compute(n, p, a);
    if ((long)memo.size() < sp.cap) memo.emplace(std::move(mk), r);
    return r;
  }

  void need_profile(const Asg& a) const {
    for (int i = 0; i < m.n; ++i)
      if (a[i] < 0) fail(Code::UnboundAgent, "temporal operator with agent " + std::to_string(i + 1) + " unbound");
  }

  bool compute(const SlNode& n, const Pos& p, const Asg& a) {
    switch (n.op) {
      case SlNode::True: return true;
      case SlNode::False: return false;
      case SlNode::Atom: {
        int k = m.prop(n.name);
        if (k < 0) fail(Code::AlphabetMismatch, "unknown proposition '" + n.name + "'");
        return m.label[p.state] >> k & 1;
      }
      case SlNode::Not: return !eval(n.kids[0], p, a);
      case SlNode::And: return eval(n.kids[0], p, a) && eval(n.kids[1], p, a);
      case SlNode::Or: return eval(n.kids[0], p, a) || eval(n.kids[1], p, a);
      case SlNode::Exists:
      case SlNode::Forall: {
        bool ex = n.op == SlNode::Exists;
        std::vector<int> ids = space(n.binds, p);
        Asg b = a;
        int x = slot.at(n.name);
        for (int sid : ids) {
          b[x] = sid;
          if (eval(n.kids[0], p, b) == ex) return ex;
        }
        return !ex;
      }
      case SlNode::Bind: {
        int sid = a[slot.at(n.name)];
        if (sid < 0) fail(Code::UnboundAgent, "variable '" + n.name + "' is not quantified");
        Asg b = a;
        b[n.agent] = sid;
        return eval(n.kids[0], p, b);
      }
      case SlNode::Next:
        need_profile(a);
        return eval(n.kids[0], step(p, a), a);
      case SlNode::Until:
      case SlNode::Eventually:
      case SlNode::Always: {
        need_profile(a);
        int lhs = n.op == SlNode::Until ? n.kids[0] : -1;
        int rhs = n.op == SlNode::Until ? n.kids[1] : n.kids[0];
        std::set<std::pair<int, int>> seen;
        Pos q = p;
        while (true) {
          if (deep(q) && !seen.insert({q.state, q.bel}).second) return n.op == SlNode::Always;
          if (n.op == SlNode::Always) {
            if (!eval(rhs, q, a)) return false;
          } else {
            if (eval(rhs, q, a)) return true;
            if (lhs >= 0 && !eval(lhs, q, a)) return false;
          }
          q = step(q, a);
        }
      }
    }
    return false;
  }
};

}  // namespace

bool eval_sl(const Cgs& m, const SlFormula& f, const SlSpace& sp, int s) {
  if (!m.det) fail(Code::NondeterministicStructure, "strategy logic is evaluated on deterministic structures");
  if (sp.depth < 0) fail(Code::Usage, "negative depth");
  for (auto& n : f.nodes)
    if (n.op == SlNode::Bind && n.agent >= m.n) fail(Code::UnboundAgent, "formula binds an agent the structure lacks");
  Eval e(m, f, sp);
  Pos p;
  p.state = s < 0 ? m.init : s;
  p.bel = e.B.initial_at(p.state);
  if (sp.kind == Kind::Run) p.key = {p.state};
  if (sp.kind == Kind::Trace) p.key = {(std::int64_t)m.obs[p.state]};
  if (e.deep(p)) p.key.clear();
  Asg a(e.slots(), -1);
  return e.eval(f.root, p, a);
}

SlFormula ne_formula(const std::vector<std::string>& goals) {
  int n = (int)goals.size();
  std::string t;
  for (int i = 1; i <= n; ++i) t += "<<x" + std::to_string(i) + ">> ";
  for (int i = 1; i <= n; ++i) t += "(" + std::to_string(i) + ",x" + std::to_string(i) + ") ";
  t += "(";
  for (int i = 1; i <= n; ++i) {
    std::string g = "(" + goals[i - 1] + ")";
    std::string y = "y" + std::to_string(i);
    if (i > 1) t += " & ";
    t += "(" + g + " | [[" + y + "]] (" + std::to_string(i) + "," + y + ") !" + g + ")";
  }
  t += ")";
  return parse_sl(t);
}

std::vector<SlRow> invariance_report(const Cgs& a, const Cgs& b, const std::vector<std::string>& corpus,
                                     const std::vector<SlSpace>& spaces) {
  if (!are_bisimilar(a, b)) fail(Code::NotBisimilar, "invariance report needs bisimilar structures");
  std::vector<SlRow> rows;
  for (auto& text : corpus) {
    SlFormula f = parse_sl(text);
    for (auto& sp : spaces) {
      SlRow r;
      r.formula = text;
      r.space = std::string(kind_name(sp.kind)) + "/" + std::to_string(sp.depth);
      auto run = [&](const Cgs& m) -> std::string {
        try {
          return eval_sl(m, f, sp) ? "true" : "false";
        } catch (const Error& e) {
          return code_name(e.code);
        }
      };
      r.a = run(a);
      r.b = run(b);
      r.agree = r.a == r.b;
      rows.push_back(r);
    }
  }
  return rows;
}

json report_to_json(const std::vector<SlRow>& rows) {
  json arr = json::array();
  for (auto& r : rows) arr.push_back({{"formula", r.formula}, {"space", r.space}, {"a", r.a}, {"b", r.b}, {"agree", r.agree}});
  return arr;
}

}  // namespace eg
