#include <doctest.h>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace eg;

namespace {

bool feasible(const Profile& p, const Cgs& m) {
  for (auto& f : p)
    if (!is_feasible(f, m, 100000).ok) return false;
  return true;
}

}  // namespace

TEST_CASE("run equilibria of the first fixture pair") {
  Budget b;
  b.depth = fixture("G0").depth;
  FindResult r0 = find_nash(fixture_game("G0"), Kind::Run, b);
  CHECK(r0.profile.has_value());
  FindResult r1 = find_nash(fixture_game("G1"), Kind::Run, b);
  CHECK_FALSE(r1.profile.has_value());
  CHECK(r1.exhaustive);
}

TEST_CASE("found profiles are checked equilibria") {
  for (auto id : {"G0", "G1", "G4", "G6", "G7"}) {
    CAPTURE(id);
    Game g = fixture_game(id);
    Budget b;
    b.depth = fixture(id).depth;
    for (Kind k : {Kind::Computation, Kind::Run, Kind::Trace}) {
      FindResult r = find_nash(g, k, b);
      if (r.profile) CHECK(is_nash(g, *r.profile).equilibrium);
    }
  }
}

TEST_CASE("profiles survive a JSON round trip") {
  Rng rng(3);
  Cgs m = validate(fixture("G0").structure);
  for (Kind k : {Kind::Computation, Kind::Run, Kind::Trace}) {
    Profile p = random_profile(rng, m, k, 2);
    Profile q = profile_from_json(profile_to_json(p, m), m);
    CHECK(profile_to_json(q, m) == profile_to_json(p, m));
    CHECK(induced_outcome(m, p, 10000) == induced_outcome(m, q, 10000));
  }
}

// A refuting witness must be a legal play on which the deviator's goal holds.
TEST_CASE("is_nash agrees with brute force and its witnesses are real") {
  Rng rng(77);
  int n = 0, refuted = 0;
  for (int k = 0; k < 150; ++k) {
    int d = 1 + (int)(rng() % 2);
    Cgs m = random_layered_cgs(rng, 5, 2, 2 + (int)(rng() % 2), d);
    Kind kind = (Kind)(rng() % 3);
    int H = d + 1;
    Profile p = random_profile(rng, m, kind, H);
    if (!feasible(p, m)) continue;
    std::vector<oracle::Goal> og;
    std::vector<Objective> goals;
    for (int i = 0; i < m.n; ++i) {
      og.push_back(oracle::random_goal(rng, m));
      goals.push_back(og.back().objective(m));
    }
    Game g = make_game(m, goals);
    if (!exhaustive_regime(g, H)) continue;
    ++n;
    NeVerdict v = is_nash(g, p);
    CHECK(v.equilibrium == oracle::is_nash(m, og, p, kind, H));
    if (!v.equilibrium) {
      ++refuted;
      CHECK(satisfied(g, v.agent, v.outcome));
      CHECK_NOTHROW(run_lasso(m, v.outcome));
      CHECK_NOTHROW(verdict_to_json(v, g));
    }
  }
  CHECK(n > 50);
  CHECK(refuted > 0);
}

TEST_CASE("nondeterministic structures are refused by the deterministic checker") {
  Game g = fixture_game("ND7");
  Budget b;
  CHECK_THROWS_AS(find_nash(g, Kind::Run, b), Error);
}
