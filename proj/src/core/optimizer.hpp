#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "core/schedule.hpp"
#include "core/strategy.hpp"

namespace purechain {

struct EvaluationConfig {
    int iterations = 20;
    double fidelity_low = 0.75;
    double fidelity_high = 0.99;
    std::uint64_t seed = 0;
    int n_max = 8;
    std::uint64_t budget_cap = 100'000'000;
    int workers = 1;

    void validate() const;
};

struct EvalStats {
    double mean_fidelity = 0.0;
    double mean_t_f = 0.0;
    double mean_success = 0.0;
};

// Monte Carlo average over the configured iterations. Iteration i draws its
// link fidelities from a stream keyed by (seed, i), common to every strategy
// and every chain length. A path with explicit fidelities skips sampling.
EvalStats evaluate_strategy(const PathSpec& path_template, const Strategy& strategy,
                            const EvaluationConfig& cfg);

struct RankedResult {
    Strategy strategy;
    double mean_fidelity = 0.0;
    double mean_t_f = 0.0;
    double mean_success = 0.0;
    bool feasible = false;
    bool selected = false;
};

// Ranking order: higher mean fidelity, then fewer total rounds, then
// lexicographically smaller canonical vector.
bool ranks_before(const RankedResult& a, const RankedResult& b);

// End-to-end delivery demand for the chain's terminal pair.
struct Request {
    int source = 1;
    int destination = 0;  // 0 means the path's last node
    int time_threshold = 0;
    double fidelity_threshold = 0.0;
};

struct CheckResult {
    bool memory_ok = false;
    bool time_ok = false;
    bool fidelity_ok = false;
    bool feasible = false;
};

// Inclusive comparisons: t_f == time_threshold and fidelity == threshold pass.
CheckResult check_request(const Outcome& outcome, const Request& request,
                          const PathSpec& path);

// Evaluates every strategy with components in [0, n_max] and returns them in
// ranking order. Throws BudgetExceededError when the space exceeds
// cfg.budget_cap evaluations.
std::vector<RankedResult> brute_force_rank(const PathSpec& path_template,
                                           const EvaluationConfig& cfg);

// Flags each entry's feasibility under the request and marks exactly the best
// feasible one selected; returns its index, or nullopt if none qualifies.
std::optional<std::size_t> select_best(std::vector<RankedResult>& ranking,
                                       const Request& request, const PathSpec& path);

struct DpStep {
    int n_nodes = 0;
    std::vector<int> shifted;  // cumulative winner in shifted order
    EvalStats stats;
    std::uint64_t candidates = 0;
};

struct DpResult {
    std::vector<DpStep> steps;  // one per chain length in [n_start, n_goal]
};

// Grows the chain one node at a time: exhaustive search at n_start, then each
// added node keeps the previous winner as a prefix and searches only the
// (n_max+1)^2 combinations of its two new components.
DpResult dp_incremental(const PathSpec& path_template, const EvaluationConfig& cfg,
                        int n_start, int n_goal);

}  // namespace purechain
