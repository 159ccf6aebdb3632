#include "purechain/purechain.h"

#include <cstdlib>
#include <cstring>
#include <limits>
#include <new>
#include <string>
#include <vector>

#include "core/errors.hpp"
#include "core/models.hpp"
#include "core/optimizer.hpp"
#include "core/schedule.hpp"
#include "core/serialize.hpp"
#include "core/strategy.hpp"
#include "core/sweep.hpp"

struct pchain_path {
    purechain::PathSpec spec;
};

struct pchain_config {
    purechain::EvaluationConfig cfg;
};

struct pchain_outcome {
    purechain::Outcome outcome;
    purechain::ScheduleTrace trace;
};

struct pchain_ranking {
    std::vector<purechain::RankedResult> rows;
    int n_nodes = 0;
};

struct pchain_dp_result {
    purechain::DpResult result;
};

struct pchain_sweep {
    std::vector<purechain::SweepRow> rows;
};

namespace {

thread_local std::string g_last_error;

template <typename Fn>
pchain_status guarded(Fn&& fn) noexcept {
    try {
        fn();
        return PCHAIN_OK;
    } catch (const purechain::BudgetExceededError& e) {
        g_last_error = e.what();
        return PCHAIN_ERROR_BUDGET;
    } catch (const purechain::DimensionMismatchError& e) {
        g_last_error = e.what();
        return PCHAIN_ERROR_DIMENSION;
    } catch (const std::domain_error& e) {
        g_last_error = e.what();
        return PCHAIN_ERROR_DOMAIN;
    } catch (const std::out_of_range& e) {
        g_last_error = e.what();
        return PCHAIN_ERROR_OUT_OF_RANGE;
    } catch (const std::invalid_argument& e) {
        g_last_error = e.what();
        return PCHAIN_ERROR_INVALID_ARGUMENT;
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return PCHAIN_ERROR_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return PCHAIN_ERROR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return PCHAIN_ERROR_INTERNAL;
    }
}

void require(const void* ptr, const char* name) {
    if (ptr == nullptr) {
        throw std::invalid_argument(std::string(name) + " must not be null");
    }
}

char* dup_string(const std::string& text) {
    char* out = static_cast<char*>(std::malloc(text.size() + 1));
    if (out == nullptr) throw std::bad_alloc();
    std::memcpy(out, text.c_str(), text.size() + 1);
    return out;
}

purechain::Strategy make_strategy(int n_nodes, const int* rounds, size_t len) {
    require(rounds, "strategy");
    return purechain::Strategy(n_nodes, std::vector<int>(rounds, rounds + len));
}

template <typename Fn>
char* string_result(Fn&& fn) noexcept {
    char* out = nullptr;
    guarded([&] { out = dup_string(fn()); });
    return out;
}

const purechain::RankedResult& ranking_at(const pchain_ranking* ranking, size_t index) {
    require(ranking, "ranking");
    if (index >= ranking->rows.size()) {
        throw std::out_of_range("ranking index " + std::to_string(index) +
                                " outside [0, " + std::to_string(ranking->rows.size()) +
                                ")");
    }
    return ranking->rows[index];
}

const purechain::DpStep& dp_step_at(const pchain_dp_result* result, size_t index) {
    require(result, "result");
    if (index >= result->result.steps.size()) {
        throw std::out_of_range("step index " + std::to_string(index) + " outside [0, " +
                                std::to_string(result->result.steps.size()) + ")");
    }
    return result->result.steps[index];
}

const purechain::SweepRow& sweep_row_at(const pchain_sweep* sweep, size_t index) {
    require(sweep, "sweep");
    if (index >= sweep->rows.size()) {
        throw std::out_of_range("row index " + std::to_string(index) + " outside [0, " +
                                std::to_string(sweep->rows.size()) + ")");
    }
    return sweep->rows[index];
}

}  // namespace

extern "C" {

const char* pchain_status_name(pchain_status status) {
    switch (status) {
        case PCHAIN_OK: return "ok";
        case PCHAIN_ERROR_INVALID_ARGUMENT: return "invalid argument";
        case PCHAIN_ERROR_DIMENSION: return "dimension mismatch";
        case PCHAIN_ERROR_DOMAIN: return "domain error";
        case PCHAIN_ERROR_OUT_OF_RANGE: return "out of range";
        case PCHAIN_ERROR_BUDGET: return "budget exceeded";
        case PCHAIN_ERROR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* pchain_last_error(void) { return g_last_error.c_str(); }

const char* pchain_version(void) { return "1.0.0"; }

void pchain_string_free(char* text) { std::free(text); }

/* ---- fidelity models ---------------------------------------------------- */

pchain_status pchain_decohere(double fidelity, double seconds, double gamma,
                              double kappa, double* out) {
    return guarded([&] {
        require(out, "out");
        purechain::DecoherenceParams params;
        params.gamma = gamma;
        params.kappa = kappa;
        *out = purechain::decohere(purechain::Fidelity(fidelity), seconds, params).value();
    });
}

pchain_status pchain_swap_fidelity(double f1, double f2, double* out) {
    return guarded([&] {
        require(out, "out");
        *out = purechain::swap_fidelity(purechain::Fidelity(f1), purechain::Fidelity(f2))
                   .value();
    });
}

pchain_status pchain_purify_once(double fidelity, double* out) {
    return guarded([&] {
        require(out, "out");
        *out = purechain::purify_once(purechain::Fidelity(fidelity)).value();
    });
}

pchain_status pchain_purify_rounds(double fidelity, int rounds, double* out) {
    return guarded([&] {
        require(out, "out");
        *out = purechain::purify_rounds(purechain::Fidelity(fidelity), rounds).value();
    });
}

pchain_status pchain_entangle_success(double attenuation, double length, int attempts,
                                      double* out) {
    return guarded([&] {
        require(out, "out");
        purechain::LinkModel link{attenuation, length, attempts};
        *out = purechain::entangle_success(link);
    });
}

/* ---- strategy utilities ------------------------------------------------- */

pchain_status pchain_strategy_dimension(int n_nodes, int* out) {
    return guarded([&] {
        require(out, "out");
        *out = purechain::strategy_dimension(n_nodes);
    });
}

pchain_status pchain_strategy_to_shifted(int n_nodes, const int* canonical, size_t len,
                                         int* out) {
    return guarded([&] {
        require(out, "out");
        std::vector<int> shifted =
            purechain::to_shifted(make_strategy(n_nodes, canonical, len));
        std::memcpy(out, shifted.data(), shifted.size() * sizeof(int));
    });
}

pchain_status pchain_strategy_from_shifted(int n_nodes, const int* shifted, size_t len,
                                           int* out) {
    return guarded([&] {
        require(shifted, "shifted");
        require(out, "out");
        purechain::Strategy strategy = purechain::from_shifted(
            n_nodes, std::span<const int>(shifted, len));
        std::memcpy(out, strategy.rounds().data(), strategy.rounds().size() * sizeof(int));
    });
}

pchain_status pchain_strategy_count(int n_nodes, int n_max, uint64_t* out) {
    return guarded([&] {
        require(out, "out");
        auto count = purechain::strategy_count(n_nodes, n_max);
        if (!count) {
            throw std::out_of_range("strategy count overflows 64 bits");
        }
        *out = *count;
    });
}

/* ---- repeater chain description ----------------------------------------- */

pchain_path* pchain_path_new(int n_nodes) {
    pchain_path* path = nullptr;
    guarded([&] {
        if (n_nodes < 3) {
            throw std::invalid_argument("a repeater chain needs at least 3 nodes, got " +
                                        std::to_string(n_nodes));
        }
        path = new pchain_path();
        path->spec.n_nodes = n_nodes;
    });
    return path;
}

void pchain_path_free(pchain_path* path) { delete path; }

pchain_status pchain_path_set_fidelities(pchain_path* path, const double* fidelities,
                                         size_t count) {
    return guarded([&] {
        require(path, "path");
        require(fidelities, "fidelities");
        std::vector<double> values(fidelities, fidelities + count);
        if (static_cast<int>(values.size()) != path->spec.n_nodes - 1) {
            throw purechain::DimensionMismatchError(
                "expected " + std::to_string(path->spec.n_nodes - 1) +
                " fidelities, got " + std::to_string(values.size()));
        }
        for (double f : values) purechain::Fidelity{f};
        path->spec.initial_fidelities = std::move(values);
    });
}

pchain_status pchain_path_set_decoherence(pchain_path* path, double gamma, double kappa,
                                          double slot_seconds) {
    return guarded([&] {
        require(path, "path");
        purechain::DecoherenceParams params{gamma, kappa, slot_seconds};
        params.validate();
        path->spec.decoherence = params;
    });
}

pchain_status pchain_path_set_operations(pchain_path* path, double swap_success,
                                         double purify_success) {
    return guarded([&] {
        require(path, "path");
        purechain::OperationProbabilities ops{swap_success, purify_success};
        ops.validate();
        path->spec.ops = ops;
    });
}

pchain_status pchain_path_set_links(pchain_path* path, const double* attenuation,
                                    const double* length, const int* attempts,
                                    size_t count) {
    return guarded([&] {
        require(path, "path");
        require(attenuation, "attenuation");
        require(length, "length");
        require(attempts, "attempts");
        if (static_cast<int>(count) < path->spec.n_nodes - 1) {
            throw purechain::DimensionMismatchError(
                "expected at least " + std::to_string(path->spec.n_nodes - 1) +
                " links, got " + std::to_string(count));
        }
        std::vector<purechain::LinkModel> links(count);
        for (size_t i = 0; i < count; ++i) {
            links[i] = {attenuation[i], length[i], attempts[i]};
            links[i].validate();
        }
        path->spec.links = std::move(links);
    });
}

pchain_status pchain_path_set_memory_capacity(pchain_path* path, int qubits) {
    return guarded([&] {
        require(path, "path");
        if (qubits < 2) throw std::invalid_argument("memory capacity must be >= 2 qubits");
        path->spec.memory_capacity = qubits;
    });
}

pchain_status pchain_path_set_eager(pchain_path* path, int eager) {
    return guarded([&] {
        require(path, "path");
        path->spec.mode = eager != 0 ? purechain::ScheduleMode::eager
                                     : purechain::ScheduleMode::just_in_time;
    });
}

/* ---- evaluation configuration ------------------------------------------- */

pchain_config* pchain_config_new(void) {
    pchain_config* config = nullptr;
    guarded([&] { config = new pchain_config(); });
    return config;
}

void pchain_config_free(pchain_config* config) { delete config; }

pchain_status pchain_config_set_iterations(pchain_config* config, int n) {
    return guarded([&] {
        require(config, "config");
        if (n < 1) throw std::invalid_argument("iterations must be >= 1");
        config->cfg.iterations = n;
    });
}

pchain_status pchain_config_set_fidelity_range(pchain_config* config, double low,
                                               double high) {
    return guarded([&] {
        require(config, "config");
        if (!(low >= 0.0 && low <= high && high <= 1.0)) {
            throw std::invalid_argument("fidelity range must satisfy 0 <= low <= high <= 1");
        }
        config->cfg.fidelity_low = low;
        config->cfg.fidelity_high = high;
    });
}

pchain_status pchain_config_set_seed(pchain_config* config, uint64_t seed) {
    return guarded([&] {
        require(config, "config");
        config->cfg.seed = seed;
    });
}

pchain_status pchain_config_set_n_max(pchain_config* config, int n_max) {
    return guarded([&] {
        require(config, "config");
        if (n_max < 0) throw std::invalid_argument("n_max must be >= 0");
        config->cfg.n_max = n_max;
    });
}

pchain_status pchain_config_set_budget_cap(pchain_config* config, uint64_t cap) {
    return guarded([&] {
        require(config, "config");
        if (cap < 1) throw std::invalid_argument("budget cap must be >= 1");
        config->cfg.budget_cap = cap;
    });
}

pchain_status pchain_config_set_workers(pchain_config* config, int workers) {
    return guarded([&] {
        require(config, "config");
        if (workers < 1) throw std::invalid_argument("workers must be >= 1");
        config->cfg.workers = workers;
    });
}

/* ---- simulation ---------------------------------------------------------- */

pchain_status pchain_simulate(const pchain_path* path, const int* strategy, size_t len,
                              pchain_outcome** out) {
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        purechain::Strategy parsed = make_strategy(path->spec.n_nodes, strategy, len);
        purechain::Outcome outcome = purechain::simulate(path->spec, parsed);
        purechain::ScheduleTrace trace =
            purechain::build_schedule(path->spec.n_nodes, parsed, path->spec.mode);
        *out = new pchain_outcome{std::move(outcome), std::move(trace)};
    });
}

void pchain_outcome_free(pchain_outcome* outcome) { delete outcome; }

double pchain_outcome_e2e_fidelity(const pchain_outcome* outcome) {
    return outcome != nullptr ? outcome->outcome.e2e_fidelity : -1.0;
}

int pchain_outcome_final_slot(const pchain_outcome* outcome) {
    return outcome != nullptr ? outcome->outcome.t_f : -1;
}

double pchain_outcome_success_probability(const pchain_outcome* outcome) {
    return outcome != nullptr ? outcome->outcome.success_probability : -1.0;
}

int64_t pchain_outcome_purify_noops(const pchain_outcome* outcome) {
    return outcome != nullptr ? outcome->outcome.purify_noops : -1;
}

pchain_status pchain_outcome_peak_memory(const pchain_outcome* outcome, int node,
                                         int* out) {
    return guarded([&] {
        require(outcome, "outcome");
        require(out, "out");
        if (node < 1 || node > outcome->trace.n_nodes) {
            throw std::out_of_range("node " + std::to_string(node) + " outside [1, " +
                                    std::to_string(outcome->trace.n_nodes) + "]");
        }
        *out = outcome->outcome.peak_memory[static_cast<size_t>(node) - 1];
    });
}

pchain_status pchain_outcome_memory_usage(const pchain_outcome* outcome, int node,
                                          int slot, int* out) {
    return guarded([&] {
        require(outcome, "outcome");
        require(out, "out");
        *out = purechain::memory_usage(outcome->trace, node, slot);
    });
}

char* pchain_outcome_json(const pchain_outcome* outcome) {
    return string_result([&] {
        require(outcome, "outcome");
        return purechain::outcome_json(outcome->outcome).dump(2);
    });
}

char* pchain_outcome_trace_json(const pchain_outcome* outcome) {
    return string_result([&] {
        require(outcome, "outcome");
        return purechain::trace_json(outcome->trace).dump(2);
    });
}

pchain_status pchain_check_request(const pchain_outcome* outcome, const pchain_path* path,
                                   int time_threshold, double fidelity_threshold,
                                   int* memory_ok, int* time_ok, int* fidelity_ok,
                                   int* feasible) {
    return guarded([&] {
        require(outcome, "outcome");
        require(path, "path");
        purechain::Request request;
        request.destination = path->spec.n_nodes;
        request.time_threshold = time_threshold;
        request.fidelity_threshold = fidelity_threshold;
        purechain::CheckResult result =
            purechain::check_request(outcome->outcome, request, path->spec);
        if (memory_ok != nullptr) *memory_ok = result.memory_ok ? 1 : 0;
        if (time_ok != nullptr) *time_ok = result.time_ok ? 1 : 0;
        if (fidelity_ok != nullptr) *fidelity_ok = result.fidelity_ok ? 1 : 0;
        if (feasible != nullptr) *feasible = result.feasible ? 1 : 0;
    });
}

/* ---- exhaustive ranking --------------------------------------------------- */

pchain_status pchain_brute_force(const pchain_path* path, const pchain_config* config,
                                 pchain_ranking** out) {
    return guarded([&] {
        require(path, "path");
        require(config, "config");
        require(out, "out");
        auto rows = purechain::brute_force_rank(path->spec, config->cfg);
        *out = new pchain_ranking{std::move(rows), path->spec.n_nodes};
    });
}

void pchain_ranking_free(pchain_ranking* ranking) { delete ranking; }

size_t pchain_ranking_size(const pchain_ranking* ranking) {
    return ranking != nullptr ? ranking->rows.size() : 0;
}

pchain_status pchain_ranking_strategy(const pchain_ranking* ranking, size_t index,
                                      int* out) {
    return guarded([&] {
        require(out, "out");
        const auto& rounds = ranking_at(ranking, index).strategy.rounds();
        std::memcpy(out, rounds.data(), rounds.size() * sizeof(int));
    });
}

pchain_status pchain_ranking_stats(const pchain_ranking* ranking, size_t index,
                                   double* mean_fidelity, double* mean_t_f,
                                   double* mean_success, int* feasible, int* selected) {
    return guarded([&] {
        const purechain::RankedResult& row = ranking_at(ranking, index);
        if (mean_fidelity != nullptr) *mean_fidelity = row.mean_fidelity;
        if (mean_t_f != nullptr) *mean_t_f = row.mean_t_f;
        if (mean_success != nullptr) *mean_success = row.mean_success;
        if (feasible != nullptr) *feasible = row.feasible ? 1 : 0;
        if (selected != nullptr) *selected = row.selected ? 1 : 0;
    });
}

pchain_status pchain_ranking_select_best(pchain_ranking* ranking, const pchain_path* path,
                                         int time_threshold, double fidelity_threshold,
                                         int64_t* selected_index) {
    return guarded([&] {
        require(ranking, "ranking");
        require(path, "path");
        purechain::Request request;
        request.destination = path->spec.n_nodes;
        request.time_threshold = time_threshold;
        request.fidelity_threshold = fidelity_threshold;
        auto best = purechain::select_best(ranking->rows, request, path->spec);
        if (selected_index != nullptr) {
            *selected_index = best ? static_cast<int64_t>(*best) : -1;
        }
    });
}

char* pchain_ranking_csv(const pchain_ranking* ranking, int shifted) {
    return string_result([&] {
        require(ranking, "ranking");
        return purechain::ranking_csv(ranking->rows, shifted != 0);
    });
}

char* pchain_ranking_json(const pchain_ranking* ranking, int shifted) {
    return string_result([&] {
        require(ranking, "ranking");
        return purechain::ranking_json(ranking->rows, shifted != 0).dump(2);
    });
}

/* ---- incremental optimization --------------------------------------------- */

pchain_status pchain_dp(const pchain_path* path, const pchain_config* config, int n_start,
                        int n_goal, pchain_dp_result** out) {
    return guarded([&] {
        require(path, "path");
        require(config, "config");
        require(out, "out");
        auto result = purechain::dp_incremental(path->spec, config->cfg, n_start, n_goal);
        *out = new pchain_dp_result{std::move(result)};
    });
}

void pchain_dp_result_free(pchain_dp_result* result) { delete result; }

size_t pchain_dp_result_size(const pchain_dp_result* result) {
    return result != nullptr ? result->result.steps.size() : 0;
}

pchain_status pchain_dp_result_step(const pchain_dp_result* result, size_t index,
                                    int* n_nodes, double* mean_fidelity, double* mean_t_f,
                                    double* mean_success, uint64_t* candidates) {
    return guarded([&] {
        const purechain::DpStep& step = dp_step_at(result, index);
        if (n_nodes != nullptr) *n_nodes = step.n_nodes;
        if (mean_fidelity != nullptr) *mean_fidelity = step.stats.mean_fidelity;
        if (mean_t_f != nullptr) *mean_t_f = step.stats.mean_t_f;
        if (mean_success != nullptr) *mean_success = step.stats.mean_success;
        if (candidates != nullptr) *candidates = step.candidates;
    });
}

pchain_status pchain_dp_result_strategy(const pchain_dp_result* result, size_t index,
                                        int shifted, int* out) {
    return guarded([&] {
        require(out, "out");
        const purechain::DpStep& step = dp_step_at(result, index);
        if (shifted != 0) {
            std::memcpy(out, step.shifted.data(), step.shifted.size() * sizeof(int));
        } else {
            purechain::Strategy strategy = purechain::from_shifted(step.n_nodes, step.shifted);
            std::memcpy(out, strategy.rounds().data(),
                        strategy.rounds().size() * sizeof(int));
        }
    });
}

char* pchain_dp_result_csv(const pchain_dp_result* result, int shifted) {
    return string_result([&] {
        require(result, "result");
        return purechain::dp_csv(result->result, shifted != 0);
    });
}

char* pchain_dp_result_json(const pchain_dp_result* result, int shifted) {
    return string_result([&] {
        require(result, "result");
        return purechain::dp_json(result->result, shifted != 0).dump(2);
    });
}

/* ---- experiments ----------------------------------------------------------- */

pchain_status pchain_sweep_run(const pchain_path* path, const pchain_config* config,
                               const double* gammas, size_t n_gammas, int n_start,
                               int n_goal, pchain_sweep** out) {
    return guarded([&] {
        require(path, "path");
        require(config, "config");
        require(gammas, "gammas");
        require(out, "out");
        purechain::SweepSpec spec;
        spec.gammas.assign(gammas, gammas + n_gammas);
        spec.n_start = n_start;
        spec.n_goal = n_goal;
        auto rows = purechain::gamma_sweep(path->spec, config->cfg, spec);
        *out = new pchain_sweep{std::move(rows)};
    });
}

void pchain_sweep_free(pchain_sweep* sweep) { delete sweep; }

size_t pchain_sweep_size(const pchain_sweep* sweep) {
    return sweep != nullptr ? sweep->rows.size() : 0;
}

pchain_status pchain_sweep_row(const pchain_sweep* sweep, size_t index, double* gamma,
                               int* n_nodes, double* mean_rounds, double* mean_fidelity,
                               int* t_f) {
    return guarded([&] {
        const purechain::SweepRow& row = sweep_row_at(sweep, index);
        if (gamma != nullptr) *gamma = row.gamma;
        if (n_nodes != nullptr) *n_nodes = row.n_nodes;
        if (mean_rounds != nullptr) *mean_rounds = row.mean_rounds;
        if (mean_fidelity != nullptr) *mean_fidelity = row.mean_fidelity;
        if (t_f != nullptr) *t_f = row.t_f;
    });
}

pchain_status pchain_sweep_strategy(const pchain_sweep* sweep, size_t index, int* out) {
    return guarded([&] {
        require(out, "out");
        const purechain::SweepRow& row = sweep_row_at(sweep, index);
        std::memcpy(out, row.shifted.data(), row.shifted.size() * sizeof(int));
    });
}

char* pchain_sweep_csv(const pchain_sweep* sweep) {
    return string_result([&] {
        require(sweep, "sweep");
        return purechain::sweep_csv(sweep->rows);
    });
}

char* pchain_sweep_json(const pchain_sweep* sweep) {
    return string_result([&] {
        require(sweep, "sweep");
        return purechain::sweep_json(sweep->rows).dump(2);
    });
}

pchain_status pchain_detect_freeze(const pchain_path* path, const pchain_config* config,
                                   const double* gammas, size_t n_gammas, int n_start,
                                   int n_goal, char** json_out) {
    return guarded([&] {
        require(path, "path");
        require(config, "config");
        require(gammas, "gammas");
        require(json_out, "json_out");
        purechain::SweepSpec spec;
        spec.gammas.assign(gammas, gammas + n_gammas);
        spec.n_start = n_start;
        spec.n_goal = n_goal;
        auto pairs = purechain::detect_freeze(path->spec, config->cfg, spec);
        *json_out = dup_string(purechain::freeze_json(pairs).dump(2));
    });
}

}  // extern "C"
