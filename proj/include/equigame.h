#ifndef EQUIGAME_H
#define EQUIGAME_H

#include <stdint.h>

#if defined(_WIN32)
#define EG_API __declspec(dllexport)
#else
#define EG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum eg_status {
  EG_OK = 0,
  EG_MALFORMED_DOCUMENT,
  EG_EMPTY_ACTION_SET,
  EG_ILLEGAL_TRANSITION,
  EG_DETERMINISM_VIOLATION,
  EG_UNKNOWN_STATE,
  EG_ILLEGAL_DIRECTION,
  EG_NONDETERMINISTIC_STRUCTURE,
  EG_BAD_PARTITION,
  EG_BUDGET_EXCEEDED,
  EG_ALPHABET_MISMATCH,
  EG_LENGTH_MISMATCH,
  EG_MIXED_STRATEGY_KINDS,
  EG_INFEASIBLE,
  EG_NOT_RUN_INVARIANT,
  EG_NOT_BISIMULATION_INVARIANT,
  EG_LEVEL_MISMATCH,
  EG_BAD_PATTERN,
  EG_NOT_TWO_PLAYER,
  EG_UNSUPPORTED_KIND,
  EG_UNBOUND_AGENT,
  EG_SYNTAX_ERROR,
  EG_UNKNOWN_FIXTURE,
  EG_NOT_BISIMILAR,
  EG_IO,
  EG_USAGE,
  EG_INTERNAL = 99
} eg_status;

typedef struct eg_model eg_model; /* a validated structure */
typedef struct eg_game eg_game;   /* a structure with one goal per agent */

typedef struct eg_budget {
  int depth;     /* table depth H */
  long cap;      /* candidate / node cap */
  long mach_cap; /* nodes of compiled strategy machines */
} eg_budget;

EG_API eg_budget eg_default_budget(void);

EG_API const char* eg_status_name(eg_status s);
/* message of the last failed call on this thread */
EG_API const char* eg_last_error(void);
EG_API void eg_free(char* s);

/* Strings returned through char** are JSON, owned by the caller, released with eg_free. */

EG_API eg_status eg_model_load(const char* json, eg_model** out); /* bare structure or {"structure": ...} */
EG_API eg_status eg_model_to_json(const eg_model* m, char** out);
EG_API void eg_model_free(eg_model* m);

EG_API eg_status eg_game_load(const char* json, eg_game** out); /* {"structure", "goals", "modes"?} */
EG_API eg_status eg_game_model(const eg_game* g, eg_model** out);
EG_API void eg_game_free(eg_game* g);

EG_API eg_status eg_validate(const char* json, char** report);
EG_API eg_status eg_bisim(const eg_model* a, const eg_model* b, int* bisimilar, char** report);
EG_API eg_status eg_quotient(const eg_model* m, char** structure, char** report);
EG_API eg_status eg_outcome(const eg_model* m, const char* profile, char** report);
EG_API eg_status eg_outcome_set(const eg_model* m, const char* profile, eg_budget b, char** report);

/* kind may be NULL; otherwise every strategy of the profile must have that kind */
EG_API eg_status eg_ne_check(const eg_game* g, const char* profile, const char* kind, eg_budget b, int* equilibrium,
                      int* conclusive, char** report);
EG_API eg_status eg_ne_find(const eg_game* g, const char* kind, eg_budget b, int* found, int* exhaustive, char** report);
EG_API eg_status eg_sustained(const eg_game* g, const char* target, const char* kind, eg_budget b, int* sustained,
                       int* conclusive, char** report);
/* profile of two strategies on a; checks equilibrium in both games */
EG_API eg_status eg_fk_build(const eg_game* a, const eg_game* b, const char* profile, eg_budget bud, int* equilibrium,
                      char** report);
EG_API eg_status eg_sl_check(const eg_model* m, const char* formula, const char* kind, eg_budget b, int* holds, char** report);

/* a and b may both be NULL: fixture pairs plus `count` random pairs from `seed` */
EG_API eg_status eg_invariance_matrix(const eg_game* a, const eg_game* b, uint64_t seed, int count, eg_budget bud,
                               char** report);

EG_API eg_status eg_fixture_list(char** out);
EG_API eg_status eg_fixture_emit(const char* id, char** out);

#ifdef __cplusplus
}
#endif

#endif
