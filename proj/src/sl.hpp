#pragma once

#include "strategy.hpp"

namespace eg {

struct SlNode {
  enum Op { True, False, Atom, Not, And, Or, Next, Until, Eventually, Always, Exists, Forall, Bind } op = True;
  std::string name;  // atom or variable
  int agent = -1;    // 0-based, Bind only
  std::vector<int> kids;
  std::vector<std::string> reads;  // free agents ("#i") and variables the subformula depends on
  std::vector<int> binds;          // agents a quantified variable is bound to in its scope
};

struct SlFormula {
  std::vector<SlNode> nodes;
  int root = -1;
  std::string text;
};

SlFormula parse_sl(const std::string& text);
std::string sl_to_string(const SlFormula& f);

struct SlSpace {
  Kind kind = Kind::Computation;
  int depth = 1;
  long cap = 2000000;  // strategies per quantifier and memo entries
};

// evaluated at state s (default: the initial state) under the empty assignment
bool eval_sl(const Cgs& m, const SlFormula& f, const SlSpace& sp, int s = -1);

// the exists-profile / forall-unilateral-deviation encoding over goal formulas
SlFormula ne_formula(const std::vector<std::string>& goals);

struct SlRow {
  std::string formula;
  std::string space;
  std::string a, b;  // "true" / "false" / error code
  bool agree = false;
};
std::vector<SlRow> invariance_report(const Cgs& a, const Cgs& b, const std::vector<std::string>& corpus,
                                     const std::vector<SlSpace>& spaces);
json report_to_json(const std::vector<SlRow>& rows);

}  // namespace eg
