#pragma once

#include "fixtures.hpp"

namespace eg {

enum class Row { Comp, RunGeneral, RunTwoPlayer, Trace, BisimInv };
enum class Col { Comp, Run, Trace };
const char* row_name(Row r);
const char* col_name(Col c);

struct MatrixInstance {
  std::string source;
  Game a, b;
  int depth = 2;
};

// most specific class containing every goal of the game
Col goal_class(const Game& g);

struct Cell {
  int agree = 0, disagree = 0, inconclusive = 0;
  std::string witness;
  std::vector<std::string> sources;
  char sign() const { return disagree ? '-' : agree ? '+' : '?'; }
};

struct Matrix {
  Cell cells[5][3];
  Cell& at(Row r, Col c) { return cells[(int)r][(int)c]; }
  const Cell& at(Row r, Col c) const { return cells[(int)r][(int)c]; }
};

// verdict of one strategy class on one game: does an equilibrium exist
struct Existence {
  bool found = false;
  bool conclusive = true;
};
Existence ne_exists(const Game& g, Row r, const Budget& b, const std::vector<int>* classes = nullptr);

Matrix invariance_matrix(const std::vector<MatrixInstance>& inst, const Budget& b);
std::vector<MatrixInstance> fixture_instances();
// bisimilar layered pairs with trace goals or goals on bisimulation classes
std::vector<MatrixInstance> random_instances(std::uint64_t seed, int count);

json matrix_to_json(const Matrix& m);
std::string matrix_to_text(const Matrix& m);

}  // namespace eg
