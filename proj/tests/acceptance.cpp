// One line per acceptance criterion. Exit status is the number of failures.

#include <chrono>
#include <cstdio>
#include <iostream>

#include "matrix.hpp"
#include "oracles.hpp"
#include "sl.hpp"

using namespace eg;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

int failures = 0;

void run(const char* id, const char* title, const std::function<Outcome()>& f) {
  auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = f();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (s > 10.0) {
    o.ok = false;
    o.detail += "; over the 10 s limit";
  }
  if (!o.ok) ++failures;
  std::printf("%s %s %s (%.2fs) %s\n", o.ok ? "PASS" : "FAIL", id, title, s, o.detail.c_str());
  std::fflush(stdout);
}

Cgs structure(const std::string& id) { return validate(fixture(id).structure); }

std::string states_str(const Cgs& m, const StateLasso& r) {
  std::string s;
  for (int v : r.prefix) s += m.names[v] + " ";
  s += "(";
  for (size_t i = 0; i < r.cycle.size(); ++i) s += (i ? " " : "") + m.names[r.cycle[i]];
  return s + ")^w";
}

// move a profile between bisimilar structures through its document
Profile carry(const Profile& p, const Cgs& from, const Cgs& to) { return profile_from_json(profile_to_json(p, from), to); }

Game with_goals(const Cgs& m, const std::vector<Objective>& g, std::vector<SetMode> modes = {}) {
  return make_game(m, g, modes);
}

std::string yes(bool b) { return b ? "yes" : "no"; }

bool feasible(const Profile& p, const Cgs& m) {
  for (auto& f : p)
    if (!is_feasible(f, m, 100000).ok) return false;
  return true;
}

// Goals that mostly fail on the given outcome but hold somewhere reachable,
// so that verdicts hinge on whether some agent can steer there alone.
std::vector<oracle::Goal> hard_goals(Rng& rng, const Cgs& m, const StateLasso& r) {
  std::set<int> reach{m.init};
  for (bool grow = true; grow;) {
    grow = false;
    for (int s : std::set<int>(reach))
      for (auto& ts : m.succ[s])
        for (int t : ts) grow = reach.insert(t).second || grow;
  }
  std::vector<oracle::Goal> g;
  for (int i = 0; i < m.n; ++i) {
    oracle::Goal x = oracle::random_goal(rng, m);
    if (rng() % 4)
      for (int t = 0; t < 40; ++t) {
        oracle::Goal y = oracle::random_goal(rng, m);
        y.temporal = 0;
        bool somewhere = false;
        for (int s : reach) somewhere = somewhere || y.at(m, s);
        if (somewhere && !y.holds(m, r.prefix, r.cycle)) {
          x = y;
          break;
        }
      }
    g.push_back(x);
  }
  return g;
}

std::vector<Objective> objectives(const Cgs& m, const std::vector<oracle::Goal>& g) {
  std::vector<Objective> r;
  for (auto& x : g) r.push_back(x.objective(m));
  return r;
}

}  // namespace

int main() {
  auto t0 = std::chrono::steady_clock::now();

  run("C1", "bisimilarity and quotient on the fixtures", [] {
    Outcome o;
    std::string d;
    for (auto [x, y, want] : std::vector<std::tuple<std::string, std::string, bool>>{
             {"G0", "G1", true}, {"G4", "G5", true}, {"G6", "G7", true}, {"ND8A", "ND8B", false}}) {
      Cgs a = structure(x), b = structure(y);
      bool lib = are_bisimilar(a, b), ref = oracle::bisimilar(a, b);
      d += x + "~" + y + "=" + yes(lib) + " ";
      if (lib != want || ref != want) o.ok = false;
    }
    bool iso = isomorphic(quotient(structure("G0")).q, structure("G1"));
    d += "quotient(M0)~=M1 " + yes(iso);
    o.ok = o.ok && iso;
    o.detail = d;
    return o;
  });

  run("C2", "run-based equilibrium exists in G0 but not in G1", [] {
    Budget b;
    b.depth = 2;
    Game g0 = fixture_game("G0"), g1 = fixture_game("G1");
    FindResult r0 = find_nash(g0, Kind::Run, b), r1 = find_nash(g1, Kind::Run, b);
    Outcome o;
    std::string run0 = r0.profile ? states_str(g0.m, run_lasso(g0.m, r0.outcome)) : "-";
    o.ok = r0.profile && run0 == "s0 (s4)^w" && is_nash(g0, *r0.profile).equilibrium && !r1.profile && r1.exhaustive;
    o.detail = "G0 outcome " + run0 + "; G1 none=" + yes(!r1.profile) + " exhaustive=" + yes(r1.exhaustive) +
               " candidates=" + std::to_string(r1.candidates);
    return o;
  });

  run("C3", "computation-based equilibria in G0 and G1, trace-based in neither", [] {
    Budget b;
    b.depth = 2;
    Outcome o;
    for (std::string id : {"G0", "G1"}) {
      Game g = fixture_game(id);
      FindResult c = find_nash(g, Kind::Computation, b), t = find_nash(g, Kind::Trace, b);
      bool cok = c.profile && is_nash(g, *c.profile).equilibrium;
      bool tok = !t.profile && t.exhaustive;
      o.ok = o.ok && cok && tok;
      o.detail += id + ": comp " + (c.profile ? "found" : "none") + ", trace " + (t.profile ? "found" : "none") +
                  (t.exhaustive ? " (exhaustive)" : "") + "; ";
    }
    return o;
  });

  run("C4", "computation and trace verdicts agree between M and quotient(M)", [] {
    Rng rng(4);
    Outcome o;
    int ne = 0, checks = 0, sus = 0, sust_checks = 0, skipped = 0;
    for (int k = 0; k < 200; ++k) {
      Cgs m = random_split_cgs(rng, GenSpec{6, 3, 3, true, 2});
      Cgs q = quotient(m).q;
      for (Kind kind : {Kind::Computation, Kind::Trace}) {
        int H = 1 + (int)(rng() % 2);
        Profile p = random_profile(rng, m, kind, H);
        if (!feasible(p, m)) {
          ++skipped;
          continue;
        }
        auto goals = objectives(m, hard_goals(rng, m, run_lasso(m, induced_outcome(m, p, 200000))));
        Game gm = with_goals(m, goals), gq = with_goals(q, goals);
        bool a = is_nash(gm, p).equilibrium, b = is_nash(gq, carry(p, m, q)).equilibrium;
        ++checks;
        ne += a;
        if (a != b) {
          o.ok = false;
          if (o.detail.empty()) o.detail = "is_nash differs on pair " + std::to_string(k) + "; ";
        }
        // the outcome of the profile, sustained or not, is the target in both
        Target t;
        DirLasso w = induced_outcome(m, p, 200000);
        if (kind == Kind::Computation) {
          t.type = Target::Dirs;
          t.dirs = w;
        } else {
          t.type = Target::Vals;
          t.vals = trace_lasso(m, run_lasso(m, w));
        }
        Budget bud;
        bud.depth = 1;
        SustainResult sa = sustained_by_ne(gm, kind, t, bud), sb = sustained_by_ne(gq, kind, t, bud);
        if (sa.cap_hit || sb.cap_hit) continue;
        ++sust_checks;
        sus += sa.sustained;
        if (sa.sustained != sb.sustained) {
          o.ok = false;
          o.detail += "sustained differs on pair " + std::to_string(k) + "; ";
        }
      }
    }
    o.detail += std::to_string(checks) + " is_nash checks (" + std::to_string(ne) + " equilibria), " +
                std::to_string(sust_checks) + " sustained checks (" + std::to_string(sus) + " sustained), " +
                std::to_string(skipped) + " profiles skipped as infeasible";
    return o;
  });

  run("C5", "tilde transport keeps outcome and verdict of bisimulation-invariant profiles", [] {
    Rng rng(5);
    Outcome o;
    int n = 0, ne = 0, skipped = 0;
    for (int k = 0; k < 100; ++k) {
      Cgs m = random_split_cgs(rng, GenSpec{6, 3, 3, true, 2});
      Quotient Q = quotient(m);
      int H = 1 + (int)(rng() % 2);
      Cgs rel = relabel_observations(m, bisim_classes(m));
      Profile inner = random_profile(rng, rel, Kind::Trace, H);
      if (!feasible(inner, rel)) {
        ++skipped;
        continue;
      }
      Profile p, t;
      for (auto& f : inner) p.push_back(class_view(f, m));
      bool inv = true;
      for (auto& f : p) inv = inv && is_bisimulation_invariant(f, m, H).ok;
      for (auto& f : p) t.push_back(transport_tilde(f, m, Q.q, H));
      DirLasso wa = induced_outcome(m, p, 200000), wb = induced_outcome(Q.q, t, 200000);
      wa.normalize();
      wb.normalize();
      StateLasso ra = run_lasso(m, wa), rb = run_lasso(Q.q, wb);
      for (auto& s : ra.prefix) s = Q.map[s];
      for (auto& s : ra.cycle) s = Q.map[s];
      ra.normalize();
      rb.normalize();
      auto goals = objectives(m, hard_goals(rng, m, run_lasso(m, wa)));
      bool va = is_nash(with_goals(m, goals), p).equilibrium, vb = is_nash(with_goals(Q.q, goals), t).equilibrium;
      ++n;
      ne += va;
      if (!inv || !(wa == wb) || !(ra == rb) || va != vb) {
        o.ok = false;
        if (o.detail.empty())
          o.detail = "instance " + std::to_string(k) + ": invariant=" + yes(inv) + " same dirs=" + yes(wa == wb) +
                     " same runs=" + yes(ra == rb) + " verdicts " + yes(va) + "/" + yes(vb) + "; ";
      }
    }
    o.detail += std::to_string(n) + " profiles, " + std::to_string(ne) + " equilibria, " + std::to_string(skipped) +
                " skipped as infeasible";
    return o;
  });

  run("C6", "two-player run-based: equilibrium in G4, none in G5", [] {
    Budget b;
    b.depth = 2;
    FindResult r4 = find_nash(fixture_game("G4"), Kind::Run, b), r5 = find_nash(fixture_game("G5"), Kind::Run, b);
    Outcome o;
    o.ok = r4.profile && !r5.profile && r5.exhaustive;
    o.detail = "G4 " + std::string(r4.profile ? "found" : "none") + "; G5 " + (r5.profile ? "found" : "none") +
               (r5.exhaustive ? " (exhaustive)" : "");
    return o;
  });

  run("C7", "f^K worked example on (M6, M7)", [] {
    Game g6 = fixture_game("G6"), g7 = fixture_game("G7");
    Profile f = fixture_profile("G6", "f");
    FKResult fk = build_fK(f[0], f[1], g6.m, g7.m, 2, 100000);
    const Cgs& m = g6.m;
    auto dir = [&](const char* x, const char* y) { return m.encode({m.action(x), m.action(y)}); };
    struct Row {
      std::vector<int> comp;
      const char *f1, *f2;
    };
    std::vector<Row> want{{{}, "b", "b"},
                          {{dir("a", "a")}, "a", "b"},
                          {{dir("a", "b")}, "a", "b"},
                          {{dir("b", "a")}, "a", "b"},
                          {{dir("b", "b")}, "b", "b"}};
    Outcome o;
    int exact = 0;
    for (auto& r : want) {
      int a1 = prescribe_comp(fk.f1, m, r.comp), a2 = prescribe_comp(fk.f2, m, r.comp);
      bool ok = a1 == m.action(r.f1) && a2 == m.action(r.f2);
      exact += ok;
      if (!ok) o.ok = false;
    }
    bool kinv = is_k_invariant(fk.f1, g6.m, g7.m, 2, 100000).ok && is_k_invariant(fk.f2, g6.m, g7.m, 2, 100000).ok;
    bool n6 = is_nash(g6, {fk.f1, fk.f2}).equilibrium, n7 = is_nash(g7, {fk.f1, fk.f2}).equilibrium;
    o.ok = o.ok && kinv && n6 && n7;
    o.detail = std::to_string(exact) + "/5 table rows exact; K-invariant " + yes(kinv) + "; NE in G6 " + yes(n6) +
               ", in G7 " + yes(n7);
    return o;
  });

  run("C8", "f^K of a found run-based equilibrium is an equilibrium in both structures", [] {
    Rng rng(8);
    Outcome o;
    int found[2] = {0, 0}, tried[2] = {0, 0}, notclosed = 0;
    for (int k = 0; k < 100; ++k) {
      auto [a, b] = random_layered_pair(rng, 5, 2, 2, 2);
      int variant = k % 2;  // 0: K-closed computation goals, 1: trace goals
      std::vector<Objective> goals;
      if (variant == 0) {
        KCongruence K = k_congruence_classes(a, b, 2, 100000);
        int blocks = 0;
        for (int c : K.cls) blocks = std::max(blocks, c + 1);
        for (int i = 0; i < 2; ++i) {
          std::vector<bool> take(blocks);
          for (auto&& t : take) t = rng() % 2;
          std::vector<std::vector<std::vector<std::string>>> pats;
          for (size_t j = 0; j < K.comps.size(); ++j) {
            if (!take[K.cls[j]]) continue;
            std::vector<std::vector<std::string>> pat;
            for (int d : K.comps[j]) {
              std::vector<std::string> dir;
              for (int ac : a.decode(d)) dir.push_back(a.actions[ac]);
              pat.push_back(dir);
            }
            pats.push_back(pat);
          }
          Objective g = pats.empty() ? reject_all() : prefix_goal(pats);
          if (is_k_closed(g, a, b, 2, 100000).verdict != Tri::Yes) ++notclosed;
          goals.push_back(g);
        }
      } else {
        for (int i = 0; i < 2; ++i) goals.push_back(random_trace_goal(rng, a));
      }
      Game ga = with_goals(a, goals), gb = with_goals(b, goals);
      Budget bud;
      bud.depth = 2;
      FindResult r = find_nash(ga, Kind::Run, bud);
      ++tried[variant];
      if (!r.profile) continue;
      ++found[variant];
      Strategy l1 = lower_run((*r.profile)[0], a), l2 = lower_run((*r.profile)[1], a);
      FKResult fk = build_fK(l1, l2, a, b, 2, 100000);
      bool na = is_nash(ga, {fk.f1, fk.f2}).equilibrium, nb = is_nash(gb, {fk.f1, fk.f2}).equilibrium;
      if (!na || !nb) {
        o.ok = false;
        if (o.detail.empty()) o.detail = "pair " + std::to_string(k) + ": NE in a " + yes(na) + ", in b " + yes(nb) + "; ";
      }
    }
    if (notclosed) {
      o.ok = false;
      o.detail += std::to_string(notclosed) + " generated goals not K-closed; ";
    }
    if (!found[0] || !found[1]) {
      o.ok = false;
      o.detail += "vacuous variant; ";
    }
    o.detail += "K-closed goals: " + std::to_string(found[0]) + "/" + std::to_string(tried[0]) +
                " found; trace goals: " + std::to_string(found[1]) + "/" + std::to_string(tried[1]) + " found";
    return o;
  });

  run("C9", "Boolean game structures: run strategies are bisimulation-invariant, verdicts survive quotient", [] {
    Rng rng(9);
    Outcome o;
    int strategies = 0, agree = 0, found = 0;
    for (int k = 0; k < 100; ++k) {
      int agents = 2 + (int)(rng() % 2);
      int per = agents == 2 ? 1 + (int)(rng() % 2) : 1;
      std::vector<std::vector<std::string>> part;
      Cgs m = random_bgs(rng, agents, per, 0, &part);
      if (!is_boolean_game_structure(m, part)) {
        o.ok = false;
        o.detail += "generator produced a non-BGS; ";
      }
      int H = m.size() <= 8 ? 2 : 1;
      // every depth-1 run table of agent 1, plus random deeper ones
      std::vector<Strategy> fs;
      for (int a : m.feas[m.init][0]) {
        Trie t;
        t.put({m.init}, a);
        fs.push_back(table_strategy(Kind::Run, 0, 1, t));
      }
      for (int j = 0; j < 5; ++j) {
        Profile p = random_profile(rng, m, Kind::Run, H);
        fs.insert(fs.end(), p.begin(), p.end());
      }
      for (auto& f : fs) {
        ++strategies;
        if (!is_bisimulation_invariant(f, m, H).ok) {
          o.ok = false;
          if (o.detail.empty()) o.detail = "structure " + std::to_string(k) + " has a non-invariant run strategy; ";
        }
      }
      std::vector<Objective> goals;
      for (int i = 0; i < agents; ++i) goals.push_back(random_trace_goal(rng, m));
      Cgs q = quotient(m).q;
      Budget bud;
      bud.depth = H;
      FindResult ra = find_nash(with_goals(m, goals), Kind::Run, bud), rb = find_nash(with_goals(q, goals), Kind::Run, bud);
      // found / none / none-but-not-exhaustive
      bool same = ra.profile.has_value() == rb.profile.has_value() && (ra.profile || ra.exhaustive == rb.exhaustive);
      agree += same;
      found += ra.profile.has_value();
      if (!same) {
        o.ok = false;
        o.detail += "verdicts differ on structure " + std::to_string(k) + "; ";
      }
    }
    o.detail += std::to_string(strategies) + " strategies invariant-checked; " + std::to_string(agree) +
                "/100 verdicts agree (" + std::to_string(found) + " with an equilibrium)";
    return o;
  });

  run("C10", "nondeterministic outcome sets and verdicts", [] {
    Outcome o;
    // ND7: traces of the all-a profile
    {
      Cgs m = structure("ND7");
      OutcomeSet s = outcome_set(m, fixture_profile("ND7", "all-a"));
      std::set<std::string> got;
      for (auto& t : s.traces) got.insert(lasso_vals_json(m, t).dump());
      std::set<std::string> want{
          json{{"prefix", json::array({json::array({"x"})})}, {"cycle", json::array({json::array({"z"})})}}.dump(),
          json{{"prefix", json::array({json::array({"x"})})}, {"cycle", json::array({json::array({"y"})})}}.dump()};
      bool ok = got == want;
      o.ok = o.ok && ok;
      o.detail += "ND7 traces " + std::string(ok ? "match" : "differ") + "; ";
    }
    // ND9: the computation-based profile cannot be followed
    {
      Cgs m = structure("ND9");
      Profile p = fixture_profile("ND9", "comp");
      bool infeasible = false;
      for (auto& f : p) infeasible = infeasible || !is_feasible(f, m, 100000).ok;
      o.ok = o.ok && infeasible;
      o.detail += "ND9 comp infeasible " + yes(infeasible) + "; ";
    }
    // ND10: runs of the constant profile
    {
      Cgs m = structure("ND10");
      OutcomeSet s = outcome_set(m, fixture_profile("ND10", "const-a"));
      std::set<std::string> got;
      for (auto r : s.runs) {
        r.normalize();
        got.insert(states_str(m, r));
      }
      bool ok = got == std::set<std::string>{"s0 (s1)^w", "s0 (s2)^w"};
      o.ok = o.ok && ok;
      o.detail += "ND10 runs " + std::string(ok ? "match" : "differ") + "; ";
    }
    Rng rng(10);
    int checks = 0, ne = 0, skipped = 0;
    for (int k = 0; k < 100; ++k) {
      Cgs m = random_split_cgs(rng, GenSpec{5, 2, 2, false, 2});
      Cgs q = quotient(m).q;
      std::vector<Objective> goals;
      std::vector<SetMode> modes;
      for (int i = 0; i < m.n; ++i) {
        goals.push_back(random_trace_goal(rng, m));
        modes.push_back(rng() % 2 ? SetMode::ForAll : SetMode::Exists);
      }
      Game gm = with_goals(m, goals, modes), gq = with_goals(q, goals, modes);
      for (Kind kind : {Kind::Computation, Kind::Trace}) {
        Profile p = random_profile(rng, m, kind, 1);
        if (!feasible(p, m)) {
          ++skipped;
          continue;
        }
        Budget b;
        b.depth = 1;
        NeVerdict va = is_nash_nondet(gm, p, b), vb = is_nash_nondet(gq, carry(p, m, q), b);
        ++checks;
        ne += va.equilibrium;
        if (va.equilibrium != vb.equilibrium) {
          o.ok = false;
          o.detail += "random pair " + std::to_string(k) + " differs; ";
        }
      }
    }
    o.detail += std::to_string(checks) + " random nondeterministic checks (" + std::to_string(ne) + " equilibria, " +
                std::to_string(skipped) + " infeasible profiles skipped)";
    return o;
  });

  run("C11", "strategy logic corpus on (M0, M1)", [] {
    Cgs m0 = structure("G0"), m1 = structure("G1");
    std::vector<std::string> corpus{
        "p",
        "!p & !q",
        "<<x>><<y>><<z>>(1,x)(2,y)(3,z) F p",
        "<<x>><<y>><<z>>(1,x)(2,y)(3,z) F q",
        "[[x]]<<y>><<z>>(1,x)(2,y)(3,z) F p",
        "<<z>>[[x]][[y]](1,x)(2,y)(3,z) G !(p|q)",
        "<<x>>[[y]][[z]](1,x)(2,y)(3,z) F p",
        "<<y>>[[x]][[z]](1,x)(2,y)(3,z) F q",
        "<<x>>(1,x)(2,x)(3,x) X !p",
        "<<x>><<y>>(1,x)(2,x)(3,y) F (p | q)",
        "[[x]][[y]][[z]](1,x)(2,y)(3,z) X X (p | q | !p)",
        "<<x>><<y>><<z>>(1,x)(2,y)(3,z) (!p U q)",
        "[[x]][[y]][[z]](1,x)(2,y)(3,z) G (!p | X p)",
        "<<z>>(3,z)[[x]][[y]](1,x)(2,y) F p",
        "[[z]]<<x>><<y>>(1,x)(2,y)(3,z) F (p|q)",
        "<<x>><<y>><<z>>(1,x)(2,y)(3,z) X (<<w>>(3,w) X q)",
        "<<x>><<y>><<z>>(1,x)(2,y)(3,z) (X !(p|q) & F !(p|q))",
        "[[x]](1,x)<<y>><<z>>(2,y)(3,z) G !q",
        "<<x>>[[y]](1,x)(2,x)(3,y) F p",
    };
    std::string ne = ne_formula({"F p", "F q", "G !(p|q)"}).text;
    corpus.push_back(ne);
    SlSpace comp{Kind::Computation, 1}, trace{Kind::Trace, 2}, runsp{Kind::Run, 2};
    auto rows = invariance_report(m0, m1, corpus, {comp, trace, runsp});
    Outcome o;
    int dis_comp = 0, dis_trace = 0, dis_run = 0;
    bool ne_run_differs = false;
    for (auto& r : rows) {
      if (r.a != "true" && r.a != "false") {
        o.ok = false;
        o.detail += "error on " + r.formula + ": " + r.a + "; ";
      }
      if (r.agree) continue;
      if (r.space.rfind("comp", 0) == 0) ++dis_comp;
      else if (r.space.rfind("trace", 0) == 0) ++dis_trace;
      else if (r.formula == ne) ne_run_differs = true;
      else ++dis_run;
    }
    o.ok = o.ok && corpus.size() == 20 && !dis_comp && !dis_trace && !dis_run && ne_run_differs;
    o.detail += "disagreements: comp " + std::to_string(dis_comp) + ", trace " + std::to_string(dis_trace) +
                ", run (other than NE) " + std::to_string(dis_run) + "; NE differs under run " + yes(ne_run_differs);
    return o;
  });

  run("C12", "product is_nash equals brute force on the exhaustive regime", [] {
    Rng rng(12);
    Outcome o;
    int agree = 0, ne = 0, n = 0, skipped = 0;
    for (int k = 0; k < 300; ++k) {
      int d = 1 + (int)(rng() % 3);
      Cgs m = random_layered_cgs(rng, 5, 2, 2 + (int)(rng() % 2), d);
      int H = d + (int)(rng() % (4 - d));
      if (H > 3) H = 3;
      Kind kind = (Kind)(rng() % 3);
      Profile p = random_profile(rng, m, kind, H);
      if (!feasible(p, m)) {
        ++skipped;
        continue;
      }
      oracle::Play base = oracle::simulate(m, p, kind, H, -1, {});
      StateLasso r;
      r.prefix = base.pre;
      r.cycle = base.cyc;
      std::vector<oracle::Goal> og = hard_goals(rng, m, r);
      Game g = with_goals(m, objectives(m, og));
      if (!exhaustive_regime(g, H)) {
        o.ok = false;
        o.detail += "instance " + std::to_string(k) + " outside the exhaustive regime; ";
        continue;
      }
      bool lib = is_nash(g, p).equilibrium;
      bool ref = oracle::is_nash(m, og, p, kind, H);
      ++n;
      ne += ref;
      if (lib == ref) {
        ++agree;
      } else {
        o.ok = false;
        if (o.detail.size() < 200)
          o.detail += "instance " + std::to_string(k) + " (" + kind_name(kind) + ", H=" + std::to_string(H) +
                      "): product " + yes(lib) + ", oracle " + yes(ref) + "; ";
      }
    }
    o.detail += std::to_string(agree) + "/" + std::to_string(n) + " agree (" + std::to_string(ne) + " equilibria), " +
                std::to_string(skipped) + " infeasible profiles skipped";
    return o;
  });

  double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%d of 12 criteria failed; total %.2fs\n", failures, total);
  return failures;
}
