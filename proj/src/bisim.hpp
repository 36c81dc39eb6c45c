#pragma once

#include "cgs.hpp"

namespace eg {

// Result of partition refinement over the disjoint union of two structures.
struct Relation {
  const Cgs* a = nullptr;
  const Cgs* b = nullptr;
  std::vector<int> ca, cb;  // block of every state, shared numbering

  bool related(int s, int t) const { return ca[s] == cb[t]; }
  std::vector<std::pair<int, int>> pairs() const;
  json to_json() const;
};

Relation greatest_bisimulation(const Cgs& a, const Cgs& b);
bool are_bisimilar(const Cgs& a, const Cgs& b);

// bisimulation classes of a single structure, numbered by first occurrence
std::vector<int> bisim_classes(const Cgs& m);

struct Quotient {
  Cgs q;
  std::vector<int> map;  // state of m -> state of q
};
Quotient quotient(const Cgs& m);

bool isomorphic(const Cgs& a, const Cgs& b);

bool statewise_bisimilar(const std::vector<int>& ha, const std::vector<int>& hb, const Relation& r);

struct KCongruence {
  int len = 0;
  std::vector<std::vector<int>> comps;  // lexicographic
  std::vector<int> cls;                 // block per computation, numbered by first member
  std::map<std::vector<int>, int> index;

  int block(const std::vector<int>& k) const;
  json to_json(const Cgs& m) const;
};

KCongruence k_congruence_classes(const Cgs& a, const Cgs& b, int len, long cap);
bool k_congruent(const Cgs& a, const Cgs& b, const std::vector<int>& k1, const std::vector<int>& k2, long cap);

// Caches K-classes per length for one pair of structures.
class KOracle {
 public:
  KOracle(const Cgs& a, const Cgs& b, long cap) : a_(a), b_(b), cap_(cap) {}
  bool congruent(const std::vector<int>& k1, const std::vector<int>& k2);
  const KCongruence& at(int len);

 private:
  const Cgs& a_;
  const Cgs& b_;
  long cap_;
  std::map<int, KCongruence> cache_;
};

void check_same_signature(const Cgs& a, const Cgs& b);

}  // namespace eg
