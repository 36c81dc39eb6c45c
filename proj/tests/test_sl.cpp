#include <doctest.h>

#include "fixtures.hpp"
#include "sl.hpp"

using namespace eg;

namespace {

Code parse_code(const std::string& s) {
  try {
    parse_sl(s);
  } catch (const Error& e) {
    return e.code;
  }
  return Code::Ok;
}

}  // namespace

TEST_CASE("parser rejects malformed formulas") {
  CHECK(parse_code("<<x>> (1,x) F") == Code::SyntaxError);
  CHECK(parse_code("(p & q") == Code::SyntaxError);
  CHECK(parse_code("<<x (1,x) p") == Code::SyntaxError);
  CHECK(parse_code("p q") == Code::SyntaxError);
  CHECK(parse_code("<<x>> (1,x) F p") == Code::Ok);
}

TEST_CASE("printing and reparsing is stable") {
  for (auto s : {"<<x>>[[y]](1,x)(2,y) F (p | !q)", "!p U X q", "G (p -> F q)"}) {
    if (parse_code(s) != Code::Ok) continue;
    std::string once = sl_to_string(parse_sl(s));
    CHECK(sl_to_string(parse_sl(once)) == once);
  }
}

TEST_CASE("universal quantification is the dual of existential") {
  Cgs m = validate(fixture("G0").structure);
  std::vector<std::string> bodies{"F p", "G !q", "X (p | q)", "(!p U q)"};
  for (Kind k : {Kind::Computation, Kind::Trace}) {
    SlSpace sp{k, 1};
    for (auto& b : bodies) {
      CAPTURE(b);
      std::string tail = "(2,y)(3,y) " + b;
      bool all = eval_sl(m, parse_sl("[[x]]<<y>>(1,x)" + tail), sp);
      bool dual = !eval_sl(m, parse_sl("<<x>>!(<<y>>(1,x)" + tail + ")"), sp);
      CHECK(all == dual);
    }
  }
}

// The formula only ranges over bounded strategies on both sides, so a bounded
// equilibrium found by search must satisfy it, while run strategies tell the
// two structures apart.
TEST_CASE("the equilibrium formula against the equilibrium search") {
  std::vector<std::string> goals{"F p", "F q", "G !(p|q)"};
  SlFormula ne = ne_formula(goals);
  for (auto id : {"G0", "G1"}) {
    CAPTURE(id);
    Game g = fixture_game(id);
    Budget b;
    b.depth = 1;
    FindResult r = find_nash(g, Kind::Computation, b);
    if (r.profile) CHECK(eval_sl(g.m, ne, SlSpace{Kind::Computation, 1}));
  }
  SlSpace run{Kind::Run, 2};
  CHECK(eval_sl(fixture_game("G0").m, ne, run));
  CHECK_FALSE(eval_sl(fixture_game("G1").m, ne, run));
}

TEST_CASE("nondeterministic structures are refused") {
  Cgs m = validate(fixture("ND7").structure);
  CHECK_THROWS_AS(eval_sl(m, parse_sl("p"), SlSpace{}), Error);
}
