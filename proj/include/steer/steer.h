#ifndef STEER_STEER_H
#define STEER_STEER_H

/*
 * C interface to the steering library.
 *
 * All inputs and reports are JSON strings in the formats documented in
 * steer/io.hpp. Strings returned through `char** out` are owned by the caller
 * and released with steer_string_free. Every function taking a context
 * records a message retrievable with steer_last_error on failure.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(STEER_BUILDING_LIBRARY)
#define STEER_API __attribute__((visibility("default")))
#else
#define STEER_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum steer_status {
  STEER_OK = 0,
  STEER_ERR_INPUT = 1,        /* parse, schema, shape or validation failure */
  STEER_ERR_SOLVER = 2,       /* solver did not reach tolerance; output still written */
  STEER_ERR_NO_ADVANTAGE = 3, /* unsteerable input where steerability is required */
  STEER_ERR_SIZE = 4,         /* a configured size cap was exceeded */
  STEER_ERR_UNSUPPORTED = 5,  /* valid request outside the implemented range */
  STEER_ERR_INTERNAL = 6,
  STEER_ERR_NULL_ARGUMENT = 7
} steer_status;

typedef struct steer_context steer_context;
typedef struct steer_assemblage steer_assemblage;

STEER_API const char* steer_version(void);
STEER_API const char* steer_status_string(steer_status status);

STEER_API steer_context* steer_context_new(void);
STEER_API void steer_context_free(steer_context* ctx);
STEER_API const char* steer_last_error(const steer_context* ctx);

/* Both tolerances must be positive. Defaults 1e-8 / 1e-8. */
STEER_API steer_status steer_set_tolerances(steer_context* ctx, double gap_tol, double feas_tol);
STEER_API steer_status steer_set_max_iter(steer_context* ctx, int max_iter);
/* Also lifts the default MUB verification cap of 1000 strategies. */
STEER_API steer_status steer_set_strategy_cap(steer_context* ctx, size_t cap);
STEER_API steer_status steer_set_seed(steer_context* ctx, uint64_t seed);

STEER_API steer_status steer_assemblage_from_json(steer_context* ctx, const char* json,
                                                  steer_assemblage** out);
STEER_API void steer_assemblage_free(steer_assemblage* a);
STEER_API size_t steer_assemblage_settings(const steer_assemblage* a);
STEER_API size_t steer_assemblage_outcomes(const steer_assemblage* a);
STEER_API size_t steer_assemblage_dim(const steer_assemblage* a);

/* Robustness report of an assemblage. `robustness` may be NULL. */
STEER_API steer_status steer_robustness(steer_context* ctx, const steer_assemblage* a,
                                        double* robustness, char** report_json);
STEER_API steer_status steer_robustness_json(steer_context* ctx, const char* assemblage_json,
                                             char** report_json);

/*
 * Lower bound on the steering robustness of a state. Exactly one of
 * `measurements_json` and `preset` is non-NULL; presets are "mub" and
 * "paulis". `seesaw_rounds` = 0 disables the see-saw refinement.
 */
STEER_API steer_status steer_state_lower_bound_json(steer_context* ctx, const char* state_json,
                                                    const char* measurements_json,
                                                    const char* preset, int seesaw_rounds,
                                                    char** report_json);

STEER_API steer_status steer_discriminate_json(steer_context* ctx, const char* state_json,
                                               const char* measurements_json, size_t padding,
                                               char** report_json);

STEER_API steer_status steer_mub_bound_json(steer_context* ctx, size_t d, char** report_json);

STEER_API steer_status steer_pure_state_generalized_robustness(steer_context* ctx,
                                                               const double* schmidt, size_t n,
                                                               double* out);

STEER_API void steer_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif
