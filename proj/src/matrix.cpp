#include "matrix.hpp"

#include <sstream>

namespace eg {

const char* row_name(Row r) {
  switch (r) {
    case Row::Comp: return "comp";
    case Row::RunGeneral: return "run-general";
    case Row::RunTwoPlayer: return "run-two-player";
    case Row::Trace: return "trace";
    case Row::BisimInv: return "bisim-inv";
  }
  return "?";
}

const char* col_name(Col c) {
  switch (c) {
    case Col::Comp: return "comp";
    case Col::Run: return "run";
    case Col::Trace: return "trace";
  }
  return "?";
}

Col goal_class(const Game& g) {
  Col c = Col::Trace;
  for (auto& o : g.goals) {
    if (o.level == Level::Computation) return Col::Comp;
    if (o.level == Level::Run) c = Col::Run;
  }
  return c;
}

Existence ne_exists(const Game& g, Row r, const Budget& b, const std::vector<int>* classes) {
  Game h = g;
  Kind k = Kind::Run;
  if (r == Row::Comp) k = Kind::Computation;
  if (r == Row::Trace) k = Kind::Trace;
  if (r == Row::BisimInv) {
    // trace strategies over bisimulation classes are the bisimulation-invariant run strategies
    h.m = relabel_observations(g.m, classes ? *classes : bisim_classes(g.m));
    k = Kind::Trace;
  }
  FindResult f = find_nash(h, k, b);
  return {f.profile.has_value(), f.profile.has_value() || f.exhaustive};
}

namespace {

std::vector<Col> covered(Col c) {
  if (c == Col::Trace) return {Col::Trace, Col::Run, Col::Comp};
  if (c == Col::Run) return {Col::Run, Col::Comp};
  return {Col::Comp};
}

std::string yn(const Existence& e) { return !e.conclusive ? "inconclusive" : e.found ? "found" : "none"; }

}  // namespace

Matrix invariance_matrix(const std::vector<MatrixInstance>& inst, const Budget& b) {
  Matrix M;
  for (auto& in : inst) {
    check_same_signature(in.a.m, in.b.m);
    Relation rel = greatest_bisimulation(in.a.m, in.b.m);
    if (rel.ca[in.a.m.init] != rel.cb[in.b.m.init])
      fail(Code::NotBisimilar, "instance " + in.source + " is not a bisimilar pair");
    Budget bb = b;
    bb.depth = in.depth;
    Col gc = std::min(goal_class(in.a), goal_class(in.b));
    for (int r = 0; r < 5; ++r) {
      Row row = (Row)r;
      if (row == Row::RunTwoPlayer && in.a.m.n != 2) continue;
      Existence ea = ne_exists(in.a, row, bb, &rel.ca);
      Existence eb = ne_exists(in.b, row, bb, &rel.cb);
      for (Col c : covered(gc)) {
        Cell& cell = M.at(row, c);
        if (std::find(cell.sources.begin(), cell.sources.end(), in.source) == cell.sources.end())
          cell.sources.push_back(in.source);
        if (!ea.conclusive || !eb.conclusive) {
          ++cell.inconclusive;
        } else if (ea.found == eb.found) {
          ++cell.agree;
        } else {
          ++cell.disagree;
          if (cell.witness.empty()) cell.witness = in.source + ": " + yn(ea) + " vs " + yn(eb);
        }
      }
    }
  }
  return M;
}

std::vector<MatrixInstance> fixture_instances() {
  std::vector<MatrixInstance> r;
  for (auto [x, y] : std::vector<std::pair<std::string, std::string>>{{"G0", "G1"}, {"G2", "G3"}, {"G4", "G5"}, {"G6", "G7"}}) {
    MatrixInstance in;
    in.source = x + "/" + y;
    in.a = fixture_game(x);
    in.b = fixture_game(y);
    in.depth = fixture(x).depth;
    r.push_back(std::move(in));
  }
  return r;
}

namespace {

Objective reach_states(const std::vector<std::string>& targets) {
  json edges = json::array();
  edges.push_back({{"from", 0}, {"guard", targets}, {"to", 1}});
  edges.push_back({{"from", 0}, {"guard", "*"}, {"to", 0}});
  edges.push_back({{"from", 1}, {"guard", "*"}, {"to", 1}});
  return objective_from_json({{"level", "run"},
                              {"accept", "reach"},
                              {"automaton", {{"states", 2}, {"initial", 0}, {"accepting", {1}}, {"edges", edges}}}});
}

}  // namespace

std::vector<MatrixInstance> random_instances(std::uint64_t seed, int count) {
  Rng rng(seed);
  std::vector<MatrixInstance> r;
  for (int k = 0; k < count; ++k) {
    int agents = 2 + (int)(rng() % 2);
    auto [a, b] = random_layered_pair(rng, 5, agents, 2, 2);
    Relation rel = greatest_bisimulation(a, b);
    MatrixInstance in;
    in.source = "random(seed=" + std::to_string(seed) + ",#" + std::to_string(k) + ")";
    std::vector<Objective> ga, gb;
    bool run_goals = k % 2 == 1;
    for (int i = 0; i < agents; ++i) {
      if (!run_goals) {
        Objective g = random_trace_goal(rng, a);
        ga.push_back(g);
        gb.push_back(g);
        continue;
      }
      // reach a random union of bisimulation classes, named per structure
      int nb = 0;
      for (int c : rel.ca) nb = std::max(nb, c + 1);
      for (int c : rel.cb) nb = std::max(nb, c + 1);
      std::vector<bool> pickc(nb);
      for (int c = 0; c < nb; ++c) pickc[c] = rng() % 3 == 0;
      pickc[rng() % nb] = true;
      std::vector<std::string> ta, tb;
      for (int s = 0; s < a.size(); ++s)
        if (pickc[rel.ca[s]]) ta.push_back(a.names[s]);
      for (int s = 0; s < b.size(); ++s)
        if (pickc[rel.cb[s]]) tb.push_back(b.names[s]);
      if (ta.empty() || tb.empty()) {
        Objective g = random_trace_goal(rng, a);
        ga.push_back(g);
        gb.push_back(g);
      } else {
        ga.push_back(reach_states(ta));
        gb.push_back(reach_states(tb));
      }
    }
    in.a = make_game(a, ga);
    in.b = make_game(b, gb);
    in.depth = 2;
    r.push_back(std::move(in));
  }
  return r;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (int r = 0; r < 5; ++r) {
    json row = {{"class", row_name((Row)r)}, {"cells", json::object()}};
    for (int c = 0; c < 3; ++c) {
      const Cell& cell = m.cells[r][c];
      json j = {{"sign", std::string(1, cell.sign())},
                {"agree", cell.agree},
                {"disagree", cell.disagree},
                {"inconclusive", cell.inconclusive},
                {"sources", cell.sources}};
      if (!cell.witness.empty()) j["witness"] = cell.witness;
      row["cells"][col_name((Col)c)] = j;
    }
    rows.push_back(row);
  }
  return {{"rows", rows}};
}

std::string matrix_to_text(const Matrix& m) {
  std::ostringstream o;
  char buf[128];
  std::snprintf(buf, sizeof buf, "%-16s %-6s %-6s %-6s\n", "strategies", "comp", "run", "trace");
  o << buf;
  for (int r = 0; r < 5; ++r) {
    std::snprintf(buf, sizeof buf, "%-16s %-6c %-6c %-6c\n", row_name((Row)r), m.cells[r][0].sign(), m.cells[r][1].sign(),
                  m.cells[r][2].sign());
    o << buf;
  }
  for (int r = 0; r < 5; ++r)
    for (int c = 0; c < 3; ++c) {
      const Cell& cell = m.cells[r][c];
      o << row_name((Row)r) << "/" << col_name((Col)c) << ": " << cell.agree << " agree, " << cell.disagree << " disagree, "
        << cell.inconclusive << " inconclusive";
      if (!cell.witness.empty()) o << "; witness " << cell.witness;
      o << "; from";
      for (size_t i = 0; i < cell.sources.size() && i < 6; ++i) o << " " << cell.sources[i];
      if (cell.sources.size() > 6) o << " and " << cell.sources.size() - 6 << " more";
      o << "\n";
    }
  return o.str();
}

}  // namespace eg
