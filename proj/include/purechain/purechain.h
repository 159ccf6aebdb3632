/*
 * purechain: purification-strategy simulation and optimization for
 * entanglement repeater chains.
 *
 * All functions are thread-safe as long as no two threads touch the same
 * handle. Functions returning pchain_status set a thread-local message
 * readable through pchain_last_error() on failure. Functions returning a
 * pointer return NULL on failure and set the same message.
 *
 * Strategy vectors passed in and out are in canonical order unless a
 * function takes an explicit `shifted` flag:
 *   canonical: n(1,2), n(2,3), ..., n(N-1,N), n(1,3), n(1,4), ..., n(1,N)
 *   shifted:   n(1,2), n(2,3), n(1,3), n(3,4), n(1,4), n(4,5), n(1,5), ...
 * Both have 2N-3 entries for an N-node chain.
 */

#ifndef PURECHAIN_H
#define PURECHAIN_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define PCHAIN_API __declspec(dllexport)
#else
#define PCHAIN_API __attribute__((visibility("default")))
#endif

typedef enum pchain_status {
    PCHAIN_OK = 0,
    PCHAIN_ERROR_INVALID_ARGUMENT = 1,
    PCHAIN_ERROR_DIMENSION = 2,      /* array length disagrees with the chain */
    PCHAIN_ERROR_DOMAIN = 3,         /* e.g. purification below fidelity 0.5 */
    PCHAIN_ERROR_OUT_OF_RANGE = 4,   /* index or value outside its valid range */
    PCHAIN_ERROR_BUDGET = 5,         /* search space larger than the budget cap */
    PCHAIN_ERROR_INTERNAL = 6
} pchain_status;

PCHAIN_API const char* pchain_status_name(pchain_status status);

/* Message describing the calling thread's most recent failure. */
PCHAIN_API const char* pchain_last_error(void);

PCHAIN_API const char* pchain_version(void);

/* Frees strings returned by the *_csv / *_json functions. */
PCHAIN_API void pchain_string_free(char* text);

/* ---- fidelity models ---------------------------------------------------- */

/* F -> F * exp(-(gamma * seconds)^kappa) */
PCHAIN_API pchain_status pchain_decohere(double fidelity, double seconds, double gamma,
                                         double kappa, double* out);

/* Entanglement swap: F1*F2 + (1-F1)(1-F2)/3 */
PCHAIN_API pchain_status pchain_swap_fidelity(double f1, double f2, double* out);

/* One purification round: (10F^2 - 2F + 1) / (8F^2 - 4F + 5); needs F >= 0.5 */
PCHAIN_API pchain_status pchain_purify_once(double fidelity, double* out);

PCHAIN_API pchain_status pchain_purify_rounds(double fidelity, int rounds, double* out);

/* 1 - (1 - exp(-attenuation * length))^attempts */
PCHAIN_API pchain_status pchain_entangle_success(double attenuation, double length,
                                                 int attempts, double* out);

/* ---- strategy utilities ------------------------------------------------- */

PCHAIN_API pchain_status pchain_strategy_dimension(int n_nodes, int* out);

/* `canonical` and `out` both hold 2*n_nodes-3 entries. */
PCHAIN_API pchain_status pchain_strategy_to_shifted(int n_nodes, const int* canonical,
                                                    size_t len, int* out);

PCHAIN_API pchain_status pchain_strategy_from_shifted(int n_nodes, const int* shifted,
                                                      size_t len, int* out);

/* (n_max+1)^(2*n_nodes-3); fails with PCHAIN_ERROR_OUT_OF_RANGE past 2^64. */
PCHAIN_API pchain_status pchain_strategy_count(int n_nodes, int n_max, uint64_t* out);

/* ---- repeater chain description ----------------------------------------- */

typedef struct pchain_path pchain_path;

/* A chain of n_nodes >= 3 nodes with ideal defaults: no decoherence
 * (gamma 0, kappa 1, 1 ms slots), perfect operations, no link models,
 * 2 qubits of memory per node, just-in-time link scheduling. */
PCHAIN_API pchain_path* pchain_path_new(int n_nodes);
PCHAIN_API void pchain_path_free(pchain_path* path);

/* One fidelity per adjacent link (n_nodes-1 values). Optimizers that sample
 * fidelities require this to stay unset. */
PCHAIN_API pchain_status pchain_path_set_fidelities(pchain_path* path,
                                                    const double* fidelities,
                                                    size_t count);

PCHAIN_API pchain_status pchain_path_set_decoherence(pchain_path* path, double gamma,
                                                     double kappa, double slot_seconds);

PCHAIN_API pchain_status pchain_path_set_operations(pchain_path* path,
                                                    double swap_success,
                                                    double purify_success);

/* Per-link generation models; all three arrays hold `count` = n_nodes-1
 * entries (optimizers growing the chain accept more and use a prefix). */
PCHAIN_API pchain_status pchain_path_set_links(pchain_path* path,
                                               const double* attenuation,
                                               const double* length, const int* attempts,
                                               size_t count);

PCHAIN_API pchain_status pchain_path_set_memory_capacity(pchain_path* path, int qubits);

/* eager != 0 creates links in the earliest free window instead of just in
 * time for their swap. */
PCHAIN_API pchain_status pchain_path_set_eager(pchain_path* path, int eager);

/* ---- evaluation configuration ------------------------------------------- */

typedef struct pchain_config pchain_config;

/* Defaults: 20 iterations, fidelity range [0.75, 0.99], seed 0, n_max 8,
 * budget cap 10^8 evaluations, 1 worker. */
PCHAIN_API pchain_config* pchain_config_new(void);
PCHAIN_API void pchain_config_free(pchain_config* config);

PCHAIN_API pchain_status pchain_config_set_iterations(pchain_config* config, int n);
PCHAIN_API pchain_status pchain_config_set_fidelity_range(pchain_config* config,
                                                          double low, double high);
PCHAIN_API pchain_status pchain_config_set_seed(pchain_config* config, uint64_t seed);
PCHAIN_API pchain_status pchain_config_set_n_max(pchain_config* config, int n_max);
PCHAIN_API pchain_status pchain_config_set_budget_cap(pchain_config* config,
                                                      uint64_t cap);
/* Parallel map width; never changes any result, only wall time. */
PCHAIN_API pchain_status pchain_config_set_workers(pchain_config* config, int workers);

/* ---- simulation ---------------------------------------------------------- */

typedef struct pchain_outcome pchain_outcome;

/* Runs one strategy on a fully specified path (fidelities required). */
PCHAIN_API pchain_status pchain_simulate(const pchain_path* path, const int* strategy,
                                         size_t len, pchain_outcome** out);
PCHAIN_API void pchain_outcome_free(pchain_outcome* outcome);

PCHAIN_API double pchain_outcome_e2e_fidelity(const pchain_outcome* outcome);
PCHAIN_API int pchain_outcome_final_slot(const pchain_outcome* outcome);
PCHAIN_API double pchain_outcome_success_probability(const pchain_outcome* outcome);
PCHAIN_API int64_t pchain_outcome_purify_noops(const pchain_outcome* outcome);

/* Peak physical qubits ever held at `node` (1-based). */
PCHAIN_API pchain_status pchain_outcome_peak_memory(const pchain_outcome* outcome,
                                                    int node, int* out);

/* Pairs whose lifetime covers `slot` at `node`, counting both sides of a
 * swap handoff. */
PCHAIN_API pchain_status pchain_outcome_memory_usage(const pchain_outcome* outcome,
                                                     int node, int slot, int* out);

/* {"e2e_fidelity", "t_f", "success_probability", "peak_memory", "purify_noops"} */
PCHAIN_API char* pchain_outcome_json(const pchain_outcome* outcome);

/* Full schedule: per-slot node actions plus per-pair lifetimes. */
PCHAIN_API char* pchain_outcome_trace_json(const pchain_outcome* outcome);

/* Feasibility against a delivery request; inclusive thresholds. Output flags
 * may be NULL when not wanted. */
PCHAIN_API pchain_status pchain_check_request(const pchain_outcome* outcome,
                                              const pchain_path* path,
                                              int time_threshold,
                                              double fidelity_threshold, int* memory_ok,
                                              int* time_ok, int* fidelity_ok,
                                              int* feasible);

/* ---- exhaustive ranking --------------------------------------------------- */

typedef struct pchain_ranking pchain_ranking;

/* Evaluates every strategy with components in [0, n_max], ordered by mean
 * fidelity, then fewer total rounds, then lexicographic order. */
PCHAIN_API pchain_status pchain_brute_force(const pchain_path* path,
                                            const pchain_config* config,
                                            pchain_ranking** out);
PCHAIN_API void pchain_ranking_free(pchain_ranking* ranking);

PCHAIN_API size_t pchain_ranking_size(const pchain_ranking* ranking);

/* `out` holds the entry's canonical strategy, 2*n_nodes-3 ints. */
PCHAIN_API pchain_status pchain_ranking_strategy(const pchain_ranking* ranking,
                                                 size_t index, int* out);

PCHAIN_API pchain_status pchain_ranking_stats(const pchain_ranking* ranking,
                                              size_t index, double* mean_fidelity,
                                              double* mean_t_f, double* mean_success,
                                              int* feasible, int* selected);

/* Marks feasibility under the request and selects the best feasible entry;
 * selected_index is -1 when nothing qualifies. */
PCHAIN_API pchain_status pchain_ranking_select_best(pchain_ranking* ranking,
                                                    const pchain_path* path,
                                                    int time_threshold,
                                                    double fidelity_threshold,
                                                    int64_t* selected_index);

PCHAIN_API char* pchain_ranking_csv(const pchain_ranking* ranking, int shifted);
PCHAIN_API char* pchain_ranking_json(const pchain_ranking* ranking, int shifted);

/* ---- incremental optimization --------------------------------------------- */

typedef struct pchain_dp_result pchain_dp_result;

/* Exhaustive search at n_start, then one (n_max+1)^2 extension search per
 * added node up to n_goal. The path acts as a template: its fidelities must
 * be unset, its node count is overridden per step. */
PCHAIN_API pchain_status pchain_dp(const pchain_path* path, const pchain_config* config,
                                   int n_start, int n_goal, pchain_dp_result** out);
PCHAIN_API void pchain_dp_result_free(pchain_dp_result* result);

PCHAIN_API size_t pchain_dp_result_size(const pchain_dp_result* result);

PCHAIN_API pchain_status pchain_dp_result_step(const pchain_dp_result* result,
                                               size_t index, int* n_nodes,
                                               double* mean_fidelity, double* mean_t_f,
                                               double* mean_success,
                                               uint64_t* candidates);

/* `out` holds 2*n_nodes-3 ints for the step's chain length. */
PCHAIN_API pchain_status pchain_dp_result_strategy(const pchain_dp_result* result,
                                                   size_t index, int shifted, int* out);

PCHAIN_API char* pchain_dp_result_csv(const pchain_dp_result* result, int shifted);
PCHAIN_API char* pchain_dp_result_json(const pchain_dp_result* result, int shifted);

/* ---- experiments ----------------------------------------------------------- */

typedef struct pchain_sweep pchain_sweep;

/* Incremental optimization per decay rate; rows ordered by (gamma, n_nodes).
 * Strategies in sweep rows use the shifted order. */
PCHAIN_API pchain_status pchain_sweep_run(const pchain_path* path,
                                          const pchain_config* config,
                                          const double* gammas, size_t n_gammas,
                                          int n_start, int n_goal, pchain_sweep** out);
PCHAIN_API void pchain_sweep_free(pchain_sweep* sweep);

PCHAIN_API size_t pchain_sweep_size(const pchain_sweep* sweep);

PCHAIN_API pchain_status pchain_sweep_row(const pchain_sweep* sweep, size_t index,
                                          double* gamma, int* n_nodes,
                                          double* mean_rounds, double* mean_fidelity,
                                          int* t_f);

PCHAIN_API pchain_status pchain_sweep_strategy(const pchain_sweep* sweep, size_t index,
                                               int* out);

PCHAIN_API char* pchain_sweep_csv(const pchain_sweep* sweep);
PCHAIN_API char* pchain_sweep_json(const pchain_sweep* sweep);

/* Strategy agreement between adjacent decay rates, as a JSON array of
 * {gamma_a, gamma_b, frozen, match_fraction, regime_a, regime_b}. */
PCHAIN_API pchain_status pchain_detect_freeze(const pchain_path* path,
                                              const pchain_config* config,
                                              const double* gammas, size_t n_gammas,
                                              int n_start, int n_goal, char** json_out);

#ifdef __cplusplus
}
#endif

#endif /* PURECHAIN_H */
