/* Exercises the C interface from C: handles, status codes, ownership. */
#include <stdio.h>
#include <string.h>

#include "equigame.h"

static int failed = 0;

#define EXPECT(cond)                                              \
  do {                                                            \
    if (!(cond)) {                                                \
      fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond); \
      failed = 1;                                                 \
    }                                                             \
  } while (0)

static eg_game* game(const char* id) {
  char* doc = NULL;
  eg_game* g = NULL;
  EXPECT(eg_fixture_emit(id, &doc) == EG_OK);
  EXPECT(eg_game_load(doc, &g) == EG_OK);
  eg_free(doc);
  return g;
}

int main(void) {
  eg_budget b = eg_default_budget();
  eg_game *g0 = game("G0"), *g1 = game("G1");
  eg_model *m0 = NULL, *m1 = NULL;
  char* rep = NULL;
  int flag = -1, flag2 = -1;

  EXPECT(eg_game_model(g0, &m0) == EG_OK);
  EXPECT(eg_game_model(g1, &m1) == EG_OK);

  EXPECT(eg_bisim(m0, m1, &flag, &rep) == EG_OK);
  EXPECT(flag == 1);
  EXPECT(rep && strstr(rep, "summary"));
  eg_free(rep);
  rep = NULL;

  EXPECT(eg_ne_find(g0, "run", b, &flag, &flag2, &rep) == EG_OK);
  EXPECT(flag == 1);
  eg_free(rep);
  rep = NULL;
  EXPECT(eg_ne_find(g1, "run", b, &flag, &flag2, &rep) == EG_OK);
  EXPECT(flag == 0 && flag2 == 1);
  eg_free(rep);
  rep = NULL;
  EXPECT(eg_ne_find(g1, "comp", b, &flag, &flag2, &rep) == EG_OK);
  EXPECT(flag == 1);
  eg_free(rep);
  rep = NULL;

  b.depth = 2;
  EXPECT(eg_sl_check(m0, "<<x>><<y>><<z>>(1,x)(2,y)(3,z) F p", "comp", b, &flag, &rep) == EG_BUDGET_EXCEEDED);
  EXPECT(rep == NULL);
  b.depth = 1;
  EXPECT(eg_sl_check(m0, "<<x>><<y>><<z>>(1,x)(2,y)(3,z) G !(p | q)", "comp", b, &flag, &rep) == EG_OK);
  EXPECT(flag == 1);
  eg_free(rep);
  rep = NULL;
  EXPECT(eg_sl_check(m0, "<<x>> (1,x", "comp", b, &flag, &rep) == EG_SYNTAX_ERROR);
  EXPECT(strlen(eg_last_error()) > 0);

  eg_model* bad = NULL;
  EXPECT(eg_model_load("{", &bad) == EG_MALFORMED_DOCUMENT);
  EXPECT(bad == NULL);
  EXPECT(eg_fixture_emit("nope", &rep) == EG_UNKNOWN_FIXTURE);
  EXPECT(eg_ne_find(g0, "sideways", b, &flag, &flag2, &rep) != EG_OK);
  EXPECT(strcmp(eg_status_name(EG_OK), "") != 0);

  eg_model_free(m0);
  eg_model_free(m1);
  eg_game_free(g0);
  eg_game_free(g1);
  eg_model_free(NULL);
  eg_free(NULL);
  puts(failed ? "capi smoke: FAIL" : "capi smoke: ok");
  return failed;
}
