#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "equigame.h"

using nlohmann::json;

namespace {

enum Exit { Yes = 0, No = 1, Bad = 2, Unknown = 3 };

struct Failure {
  int code;
  std::string msg;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{Bad, "cannot read " + path};
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void check(eg_status s, bool validation = false) {
  if (s == EG_OK) return;
  int code = Bad;
  if (s == EG_BUDGET_EXCEEDED) code = Unknown;
  else if (validation && s != EG_IO && s != EG_USAGE) code = No;
  throw Failure{code, std::string(eg_status_name(s)) + ": " + eg_last_error()};
}

std::string take(char* s) {
  std::string r = s ? s : "";
  eg_free(s);
  return r;
}

// a fixture id, a file path, or (for small documents) inline JSON
std::string document(const std::string& arg) {
  if (std::filesystem::is_regular_file(arg)) return slurp(arg);
  if (!arg.empty() && (arg[0] == '{' || arg[0] == '[')) return arg;
  char* out = nullptr;
  if (eg_fixture_emit(arg.c_str(), &out) == EG_OK) return take(out);
  throw Failure{Bad, "no such file or fixture: " + arg};
}

// a profile file, or the name of a profile stored in the game document
std::string profile(const std::string& arg, const std::string& game_doc) {
  if (std::filesystem::is_regular_file(arg)) return slurp(arg);
  if (!arg.empty() && arg[0] == '{') return arg;
  json g = json::parse(game_doc, nullptr, false);
  if (g.is_object() && g.contains("profiles") && g["profiles"].contains(arg)) return g["profiles"][arg].dump();
  throw Failure{Bad, "no such profile file or named profile: " + arg};
}

struct Model {
  eg_model* p = nullptr;
  explicit Model(const std::string& doc) { check(eg_model_load(doc.c_str(), &p)); }
  ~Model() { eg_model_free(p); }
};

struct Game {
  eg_game* p = nullptr;
  explicit Game(const std::string& doc) { check(eg_game_load(doc.c_str(), &p)); }
  ~Game() { eg_game_free(p); }
};

eg_budget env_budget() {
  eg_budget b = eg_default_budget();
  const char* e = std::getenv("EQUIGAME_BUDGET");
  if (!e || !*e) return b;
  // "cap", or comma separated key=value pairs over depth, cap, mach_cap
  std::string s = e;
  try {
    if (s.find('=') == std::string::npos) {
      b.cap = std::stol(s);
      return b;
    }
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
      auto eq = item.find('=');
      if (eq == std::string::npos) throw Failure{Bad, "bad EQUIGAME_BUDGET entry: " + item};
      std::string k = item.substr(0, eq);
      long v = std::stol(item.substr(eq + 1));
      if (k == "depth") b.depth = (int)v;
      else if (k == "cap") b.cap = v;
      else if (k == "mach_cap") b.mach_cap = v;
      else throw Failure{Bad, "unknown EQUIGAME_BUDGET key: " + k};
    }
  } catch (const std::logic_error&) {
    throw Failure{Bad, "bad EQUIGAME_BUDGET value: " + s};
  }
  return b;
}

bool as_json = false;

void report(const std::string& r) {
  if (as_json) {
    std::cout << r;
    return;
  }
  json j = json::parse(r, nullptr, false);
  if (j.is_object() && j.contains("summary")) {
    std::string s = j["summary"];
    std::cout << s << (s.empty() || s.back() != '\n' ? "\n" : "");
  } else {
    std::cout << r;
  }
}

void write_out(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Failure{Bad, "cannot write " + path};
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"equigame: bisimulation and equilibrium workbench"};
  app.require_subcommand(1);
  app.add_flag("--json", as_json, "print the full JSON report instead of the summary");

  eg_budget bud;
  int result = Yes;
  std::string a, b, p, kind, formula, out, target;
  int depth = -1;
  std::uint64_t seed = 1;
  int count = -1;
  bool depth_given = false;

  auto with_depth = [&](CLI::App* c) {
    c->add_option("--depth", depth, "table depth H")->each([&](const std::string&) { depth_given = true; });
  };

  auto* validate = app.add_subcommand("validate", "check a structure document");
  validate->add_option("model", a)->required();

  auto* bisim = app.add_subcommand("bisim", "are two structures bisimilar");
  bisim->add_option("a", a)->required();
  bisim->add_option("b", b)->required();

  auto* quot = app.add_subcommand("quotient", "bisimulation quotient of a structure");
  quot->add_option("model", a)->required();
  quot->add_option("-o,--output", out, "where to write the quotient structure");

  auto* outcome = app.add_subcommand("outcome", "outcome of a profile in a deterministic structure");
  outcome->add_option("model", a)->required();
  outcome->add_option("profile", p)->required();

  auto* oset = app.add_subcommand("outcome-set", "outcome runs and traces of a profile");
  oset->add_option("model", a)->required();
  oset->add_option("profile", p)->required();

  auto* necheck = app.add_subcommand("ne-check", "is a profile a Nash equilibrium");
  necheck->add_option("game", a)->required();
  necheck->add_option("profile", p)->required();
  necheck->add_option("--kind", kind)->check(CLI::IsMember({"run", "comp", "trace"}));

  auto* nefind = app.add_subcommand("ne-find", "search for a Nash equilibrium of bounded depth");
  nefind->add_option("game", a)->required();
  nefind->add_option("--kind", kind)->required()->check(CLI::IsMember({"run", "comp", "trace", "bisim-inv"}));
  with_depth(nefind);

  auto* sust = app.add_subcommand("sustained", "is a target outcome sustained by some equilibrium");
  sust->add_option("game", a)->required();
  sust->add_option("target", target, "target document (file or inline JSON)")->required();
  sust->add_option("--kind", kind)->required()->check(CLI::IsMember({"run", "comp", "trace"}));
  with_depth(sust);

  auto* fk = app.add_subcommand("fk-build", "K-invariant profile for a bisimilar pair of two-player games");
  fk->add_option("a", a)->required();
  fk->add_option("b", b)->required();
  fk->add_option("profile", p)->required();
  with_depth(fk);

  auto* sl = app.add_subcommand("sl-check", "model check a strategy logic formula");
  sl->add_option("model", a)->required();
  sl->add_option("--formula", formula)->required();
  sl->add_option("--kind", kind)->required()->check(CLI::IsMember({"run", "comp", "trace"}));
  with_depth(sl);

  auto* fx = app.add_subcommand("fixtures", "built-in example structures");
  fx->require_subcommand(1);
  auto* fxlist = fx->add_subcommand("list", "list fixture ids");
  auto* fxemit = fx->add_subcommand("emit", "print a fixture document");
  fxemit->add_option("id", a)->required();
  fxemit->add_option("-o,--output", out);

  auto* matrix = app.add_subcommand("invariance-matrix", "which equilibrium verdicts survive bisimulation");
  std::vector<std::string> pair;
  matrix->add_option("games", pair, "two game documents (default: the fixture pairs)")->expected(0, 2);
  matrix->add_option("--seed", seed, "generator seed for the random pairs");
  matrix->add_option("--count", count, "number of random pairs (default 40 without a pair, 0 with one)");
  with_depth(matrix);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int r = app.exit(e);
    return r == 0 ? 0 : Bad;
  }

  try {
    bud = env_budget();
    if (depth_given) bud.depth = depth;
    int flag = 0, flag2 = 0;

    if (*validate) {
      char* r = nullptr;
      check(eg_validate(document(a).c_str(), &r), true);
      report(take(r));
    } else if (*bisim) {
      Model x(document(a)), y(document(b));
      char* r = nullptr;
      check(eg_bisim(x.p, y.p, &flag, &r));
      report(take(r));
      result = flag ? Yes : No;
    } else if (*quot) {
      Model x(document(a));
      char *s = nullptr, *r = nullptr;
      check(eg_quotient(x.p, &s, &r));
      std::string st = take(s), rep = take(r);
      if (out.empty()) {
        std::cout << st;
      } else {
        write_out(out, st);
        report(rep);
      }
    } else if (*outcome || *oset) {
      std::string doc = document(a);
      Model x(doc);
      std::string prof = profile(p, doc);
      char* r = nullptr;
      check(*outcome ? eg_outcome(x.p, prof.c_str(), &r) : eg_outcome_set(x.p, prof.c_str(), bud, &r));
      report(take(r));
    } else if (*necheck) {
      std::string doc = document(a);
      Game g(doc);
      std::string prof = profile(p, doc);
      char* r = nullptr;
      check(eg_ne_check(g.p, prof.c_str(), kind.empty() ? nullptr : kind.c_str(), bud, &flag, &flag2, &r));
      report(take(r));
      result = !flag2 ? Unknown : flag ? Yes : No;
    } else if (*nefind) {
      Game g(document(a));
      char* r = nullptr;
      check(eg_ne_find(g.p, kind.c_str(), bud, &flag, &flag2, &r));
      report(take(r));
      result = flag ? Yes : flag2 ? No : Unknown;
    } else if (*sust) {
      Game g(document(a));
      std::string t = document(target);
      char* r = nullptr;
      check(eg_sustained(g.p, t.c_str(), kind.c_str(), bud, &flag, &flag2, &r));
      report(take(r));
      result = flag ? Yes : flag2 ? No : Unknown;
    } else if (*fk) {
      std::string doc = document(a);
      Game x(doc), y(document(b));
      std::string prof = profile(p, doc);
      char* r = nullptr;
      check(eg_fk_build(x.p, y.p, prof.c_str(), bud, &flag, &r));
      report(take(r));
      result = flag ? Yes : No;
    } else if (*sl) {
      Model x(document(a));
      char* r = nullptr;
      check(eg_sl_check(x.p, formula.c_str(), kind.c_str(), bud, &flag, &r));
      report(take(r));
      result = flag ? Yes : No;
    } else if (*fxlist) {
      char* r = nullptr;
      check(eg_fixture_list(&r));
      std::string s = take(r);
      if (as_json) {
        std::cout << s;
      } else {
        for (auto& f : json::parse(s)) std::cout << f["id"].get<std::string>() << "\t" << f["title"].get<std::string>() << "\n";
      }
    } else if (*fxemit) {
      char* r = nullptr;
      check(eg_fixture_emit(a.c_str(), &r));
      write_out(out, take(r));
    } else if (*matrix) {
      if (pair.size() == 1) throw Failure{Bad, "invariance-matrix takes two games or none"};
      char* r = nullptr;
      if (pair.size() == 2) {
        Game x(document(pair[0])), y(document(pair[1]));
        check(eg_invariance_matrix(x.p, y.p, seed, count < 0 ? 0 : count, bud, &r));
      } else {
        check(eg_invariance_matrix(nullptr, nullptr, seed, count < 0 ? 40 : count, bud, &r));
      }
      report(take(r));
    }
  } catch (const Failure& f) {
    std::cerr << "equigame: " << f.msg << "\n";
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "equigame: " << e.what() << "\n";
    return Bad;
  }
  return result;
}
