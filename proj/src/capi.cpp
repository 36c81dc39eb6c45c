#include <cstring>

#include "equigame.h"
#include "matrix.hpp"
#include "sl.hpp"

struct eg_model {
  eg::Cgs m;
};
struct eg_game {
  eg::Game g;
};

using namespace eg;

namespace {

thread_local std::string last_error;

char* dup(const std::string& s) {
  char* r = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(r, s.c_str(), s.size() + 1);
  return r;
}

void put(char** out, const json& j) {
  if (out) *out = dup(j.dump(2) + "\n");
}

template <class F>
eg_status guard(F&& f) {
  try {
    last_error.clear();
    f();
    return EG_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return static_cast<eg_status>(e.code);
  } catch (const json::exception& e) {
    last_error = std::string("malformed document: ") + e.what();
    return EG_MALFORMED_DOCUMENT;
  } catch (const std::exception& e) {
    last_error = e.what();
    return EG_INTERNAL;
  }
}

json parse(const char* text, const char* what) {
  if (!text) fail(Code::Usage, std::string("missing ") + what);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail(Code::MalformedDocument, std::string(what) + " is not valid JSON: " + e.what());
  }
}

Budget budget(eg_budget b) {
  Budget r;
  r.depth = b.depth;
  r.cap = b.cap;
  r.mach_cap = b.mach_cap;
  if (r.depth < 0 || r.cap <= 0 || r.mach_cap <= 0) fail(Code::Usage, "budget values must be positive");
  return r;
}

Kind kind_arg(const char* k) {
  if (!k) fail(Code::Usage, "missing kind");
  return parse_kind(k);
}

const Cgs& model(const eg_model* m) {
  if (!m) fail(Code::Usage, "null model");
  return m->m;
}
const Game& game(const eg_game* g) {
  if (!g) fail(Code::Usage, "null game");
  return g->g;
}

json profile_doc(const char* text) { return parse(text, "profile"); }

}  // namespace

extern "C" {

eg_budget eg_default_budget(void) {
  Budget b;
  return {b.depth, b.cap, b.mach_cap};
}

const char* eg_status_name(eg_status s) {
  if (s == EG_INTERNAL) return "Internal";
  if (s < 0 || s > EG_USAGE) return "Unknown";
  return code_name(static_cast<Code>(s));
}

const char* eg_last_error(void) { return last_error.c_str(); }

void eg_free(char* s) { std::free(s); }

eg_status eg_model_load(const char* text, eg_model** out) {
  return guard([&] {
    json j = parse(text, "structure");
    if (j.is_object() && j.contains("structure")) j = j["structure"];
    *out = new eg_model{validate(j)};
  });
}

eg_status eg_model_to_json(const eg_model* m, char** out) {
  return guard([&] { put(out, to_json(model(m))); });
}

void eg_model_free(eg_model* m) { delete m; }

eg_status eg_game_load(const char* text, eg_game** out) {
  return guard([&] { *out = new eg_game{game_from_json(parse(text, "game"))}; });
}

eg_status eg_game_model(const eg_game* g, eg_model** out) {
  return guard([&] { *out = new eg_model{game(g).m}; });
}

void eg_game_free(eg_game* g) { delete g; }

eg_status eg_validate(const char* text, char** report) {
  return guard([&] {
    json doc = parse(text, "structure");
    json j = doc.is_object() && doc.contains("structure") ? doc["structure"] : doc;
    Cgs m = validate(j);
    int H = absorbing_depth(m);
    json r = {{"valid", true},
              {"states", m.size()},
              {"agents", m.n},
              {"deterministic", m.det},
              {"propositions", m.props},
              {"actions", m.actions},
              {"absorbing_depth", H < 0 ? json(nullptr) : json(H)}};
    // optional proposition ownership, one list per agent
    if (doc.is_object() && doc.contains("partition"))
      r["boolean_game_structure"] = is_boolean_game_structure(m, doc["partition"].get<std::vector<std::vector<std::string>>>());
    r["summary"] = "valid structure: " + std::to_string(m.size()) + " states, " + std::to_string(m.n) + " agents, " +
                   (m.det ? "deterministic" : "nondeterministic");
    put(report, r);
  });
}

eg_status eg_bisim(const eg_model* a, const eg_model* b, int* bisimilar, char** report) {
  return guard([&] {
    const Cgs& x = model(a);
    const Cgs& y = model(b);
    Relation rel = greatest_bisimulation(x, y);
    bool ok = rel.related(x.init, y.init);
    if (bisimilar) *bisimilar = ok;
    json pairs = json::array();
    for (auto [s, t] : rel.pairs()) pairs.push_back({x.names[s], y.names[t]});
    put(report, {{"bisimilar", ok},
                 {"relation", pairs},
                 {"summary", ok ? "bisimilar (initial states related)" : "not bisimilar"}});
  });
}

eg_status eg_quotient(const eg_model* m, char** structure, char** report) {
  return guard([&] {
    const Cgs& x = model(m);
    Quotient q = quotient(x);
    json map = json::object();
    for (int s = 0; s < x.size(); ++s) map[x.names[s]] = q.q.names[q.map[s]];
    put(structure, to_json(q.q));
    put(report, {{"states", x.size()},
                 {"classes", q.q.size()},
                 {"map", map},
                 {"summary", std::to_string(x.size()) + " states -> " + std::to_string(q.q.size()) + " classes"}});
  });
}

eg_status eg_outcome(const eg_model* m, const char* profile, char** report) {
  return guard([&] {
    const Cgs& x = model(m);
    if (!x.det) fail(Code::NondeterministicStructure, "use outcome-set on nondeterministic structures");
    Profile p = profile_from_json(profile_doc(profile), x);
    DirLasso w = induced_outcome(x, p, Budget{}.mach_cap);
    StateLasso r = run_lasso(x, w);
    json j = {{"directions", lasso_dirs_json(x, w)}, {"run", lasso_states_json(x, r)}, {"trace", lasso_vals_json(x, trace_lasso(x, r))}};
    std::string s = "run";
    for (int v : r.prefix) s += " " + x.names[v];
    s += " (";
    for (size_t i = 0; i < r.cycle.size(); ++i) s += (i ? " " : "") + x.names[r.cycle[i]];
    s += ")^w";
    j["summary"] = s;
    put(report, j);
  });
}

eg_status eg_outcome_set(const eg_model* m, const char* profile, eg_budget b, char** report) {
  return guard([&] {
    const Cgs& x = model(m);
    Profile p = profile_from_json(profile_doc(profile), x);
    OutcomeSet o = outcome_set(x, p, budget(b).mach_cap);
    json j = outcome_set_to_json(o, x);
    j["summary"] = std::to_string(o.state.size()) + " outcome nodes" +
                   (o.tree_of_sinks ? ", " + std::to_string(o.runs.size()) + " runs" : "");
    put(report, j);
  });
}

eg_status eg_ne_check(const eg_game* g, const char* profile, const char* kind, eg_budget b, int* equilibrium,
                      int* conclusive, char** report) {
  return guard([&] {
    const Game& G = game(g);
    Budget bud = budget(b);
    Profile p = profile_from_json(profile_doc(profile), G.m);
    if (kind) {
      Kind k = kind_arg(kind);
      for (auto& f : p)
        if (f.kind != k)
          fail(Code::MixedStrategyKinds, std::string("profile has a ") + kind_name(f.kind) + " strategy, expected " + kind);
    }
    NeVerdict v = G.m.det && !G.set_valued() ? is_nash(G, p, bud.cap) : is_nash_nondet(G, p, bud);
    if (equilibrium) *equilibrium = v.equilibrium;
    if (conclusive) *conclusive = v.equilibrium ? v.complete : 1;
    json j = verdict_to_json(v, G);
    j["summary"] = v.equilibrium ? (v.complete ? "Nash equilibrium" : "no deviation found within budget")
                                 : "not an equilibrium: agent " + std::to_string(v.agent + 1) + " deviates";
    put(report, j);
  });
}

eg_status eg_ne_find(const eg_game* g, const char* kind, eg_budget b, int* found, int* exhaustive, char** report) {
  return guard([&] {
    const Game& G = game(g);
    Budget bud = budget(b);
    if (!kind) fail(Code::Usage, "missing kind");
    Game h = G;
    Kind k;
    if (std::string(kind) == "bisim-inv") {
      h.m = relabel_observations(G.m, bisim_classes(G.m));
      k = Kind::Trace;
    } else {
      k = kind_arg(kind);
    }
    FindResult r = find_nash(h, k, bud);
    if (found) *found = r.profile.has_value();
    if (exhaustive) *exhaustive = r.exhaustive;
    json j = {{"found", r.profile.has_value()},
              {"exhaustive", r.exhaustive},
              {"cap_hit", r.cap_hit},
              {"candidates", r.candidates},
              {"kind", kind},
              {"depth", bud.depth}};
    if (!r.why.empty()) j["why_not_exhaustive"] = r.why;
    if (r.profile) {
      j["profile"] = profile_to_json(*r.profile, h.m);
      StateLasso run = run_lasso(G.m, r.outcome);
      j["outcome"] = {{"directions", lasso_dirs_json(G.m, r.outcome)}, {"run", lasso_states_json(G.m, run)}};
      j["summary"] = "equilibrium found";
    } else {
      j["summary"] = r.exhaustive ? "no equilibrium (search exhaustive)" : "no equilibrium found (search not exhaustive)";
    }
    put(report, j);
  });
}

eg_status eg_sustained(const eg_game* g, const char* target, const char* kind, eg_budget b, int* sustained,
                       int* conclusive, char** report) {
  return guard([&] {
    const Game& G = game(g);
    Target t = target_from_json(parse(target, "target"), G.m);
    SustainResult r = sustained_by_ne(G, kind_arg(kind), t, budget(b));
    if (sustained) *sustained = r.sustained;
    if (conclusive) *conclusive = r.sustained || !r.cap_hit;
    json j = {{"sustained", r.sustained}, {"cap_hit", r.cap_hit}};
    if (r.profile) {
      j["profile"] = profile_to_json(*r.profile, G.m);
      j["realized"] = lasso_dirs_json(G.m, r.realized);
    }
    j["summary"] = r.sustained ? "sustained by an equilibrium" : r.cap_hit ? "not decided within budget" : "not sustained";
    put(report, j);
  });
}

eg_status eg_fk_build(const eg_game* a, const eg_game* b, const char* profile, eg_budget bud, int* equilibrium,
                      char** report) {
  return guard([&] {
    const Game& A = game(a);
    const Game& B = game(b);
    Budget bb = budget(bud);
    if (A.m.n != 2) fail(Code::NotTwoPlayer, "the K-invariant construction is for two agents");
    Profile p = profile_from_json(profile_doc(profile), A.m);
    for (auto& f : p)
      if (f.kind == Kind::Run) f = lower_run(f, A.m);
    FKResult fk = build_fK(p[0], p[1], A.m, B.m, bb.depth, bb.cap);
    Profile q{fk.f1, fk.f2};
    bool ka = is_k_invariant(fk.f1, A.m, B.m, bb.depth, bb.cap).ok && is_k_invariant(fk.f2, A.m, B.m, bb.depth, bb.cap).ok;
    NeVerdict va = is_nash(A, q, bb.cap);
    NeVerdict vb = is_nash(B, q, bb.cap);
    if (equilibrium) *equilibrium = va.equilibrium && vb.equilibrium;
    auto clauses = [&](const std::map<std::vector<int>, std::string>& c) {
      json r = json::array();
      for (auto& [k, why] : c) {
        json ds = json::array();
        for (int d : k) ds.push_back(A.m.dir_json(d));
        r.push_back({{"key", ds}, {"clause", why}});
      }
      return r;
    };
    json j = {{"profile", profile_to_json(q, A.m)},
              {"clauses", {clauses(fk.clause1), clauses(fk.clause2)}},
              {"k_invariant", ka},
              {"equilibrium_a", va.equilibrium},
              {"equilibrium_b", vb.equilibrium}};
    j["summary"] = std::string(ka ? "K-invariant" : "not K-invariant") + "; equilibrium in A: " +
                   (va.equilibrium ? "yes" : "no") + ", in B: " + (vb.equilibrium ? "yes" : "no");
    put(report, j);
  });
}

eg_status eg_sl_check(const eg_model* m, const char* formula, const char* kind, eg_budget b, int* holds, char** report) {
  return guard([&] {
    const Cgs& x = model(m);
    if (!formula) fail(Code::Usage, "missing formula");
    SlFormula f = parse_sl(formula);
    SlSpace sp;
    sp.kind = kind_arg(kind);
    sp.depth = b.depth;
    sp.cap = std::max(b.cap, 1L);
    bool r = eval_sl(x, f, sp);
    if (holds) *holds = r;
    put(report, {{"formula", sl_to_string(f)},
                 {"kind", kind_name(sp.kind)},
                 {"depth", sp.depth},
                 {"holds", r},
                 {"summary", r ? "holds" : "does not hold"}});
  });
}

eg_status eg_invariance_matrix(const eg_game* a, const eg_game* b, uint64_t seed, int count, eg_budget bud,
                               char** report) {
  return guard([&] {
    std::vector<MatrixInstance> inst;
    if (a || b) {
      MatrixInstance in;
      in.source = "input pair";
      in.a = game(a);
      in.b = game(b);
      in.depth = bud.depth;
      inst.push_back(in);
    } else {
      inst = fixture_instances();
    }
    if (count > 0) {
      auto r = random_instances(seed, count);
      inst.insert(inst.end(), r.begin(), r.end());
    }
    Matrix M = invariance_matrix(inst, budget(bud));
    json j = matrix_to_json(M);
    j["text"] = matrix_to_text(M);
    j["summary"] = matrix_to_text(M);
    put(report, j);
  });
}

eg_status eg_fixture_list(char** out) {
  return guard([&] {
    json r = json::array();
    for (auto& id : fixture_ids()) r.push_back({{"id", id}, {"title", fixture(id).title}, {"partner", fixture_partner(id)}});
    put(out, r);
  });
}

eg_status eg_fixture_emit(const char* id, char** out) {
  return guard([&] {
    if (!id) fail(Code::Usage, "missing fixture id");
    put(out, fixture_to_json(fixture(id)));
  });
}

}  // extern "C"
