#include "core/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "core/errors.hpp"
#include "core/parallel.hpp"
#include "core/rng.hpp"

namespace purechain {

void EvaluationConfig::validate() const {
    if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");
    if (!(fidelity_low >= 0.0 && fidelity_low <= fidelity_high && fidelity_high <= 1.0)) {
        throw std::invalid_argument("fidelity range must satisfy 0 <= low <= high <= 1");
    }
    if (n_max < 0) throw std::invalid_argument("n_max must be >= 0");
    if (budget_cap < 1) throw std::invalid_argument("budget cap must be >= 1");
    if (workers < 1) throw std::invalid_argument("workers must be >= 1");
}

EvalStats evaluate_strategy(const PathSpec& path_template, const Strategy& strategy,
                            const EvaluationConfig& cfg) {
    cfg.validate();
    path_template.validate_template();

    EvalStats stats;
    if (!path_template.initial_fidelities.empty()) {
        Outcome outcome = simulate(path_template, strategy);
        stats.mean_fidelity = outcome.e2e_fidelity;
        stats.mean_t_f = static_cast<double>(outcome.t_f);
        stats.mean_success = outcome.success_probability;
        return stats;
    }

    PathSpec path = path_template;
    double sum = 0.0;
    Outcome outcome;
    for (int i = 0; i < cfg.iterations; ++i) {
        path.initial_fidelities =
            draw_fidelities(cfg.seed, i, static_cast<std::size_t>(path.n_nodes) - 1,
                            cfg.fidelity_low, cfg.fidelity_high);
        outcome = simulate(path, strategy);
        sum += outcome.e2e_fidelity;
    }
    stats.mean_fidelity = sum / static_cast<double>(cfg.iterations);
    stats.mean_t_f = static_cast<double>(outcome.t_f);
    stats.mean_success = outcome.success_probability;
    return stats;
}

bool ranks_before(const RankedResult& a, const RankedResult& b) {
    if (a.mean_fidelity != b.mean_fidelity) return a.mean_fidelity > b.mean_fidelity;
    long long ra = a.strategy.total_rounds();
    long long rb = b.strategy.total_rounds();
    if (ra != rb) return ra < rb;
    return a.strategy.rounds() < b.strategy.rounds();
}

namespace {

void validate_request(const Request& request, const PathSpec& path) {
    if (request.source != 1) {
        throw std::invalid_argument("requests start at node 1, got source " +
                                    std::to_string(request.source));
    }
    if (request.destination != 0 && request.destination != path.n_nodes) {
        throw std::invalid_argument("request destination must be the path's last node " +
                                    std::to_string(path.n_nodes) + ", got " +
                                    std::to_string(request.destination));
    }
    if (request.time_threshold < 0) {
        throw std::invalid_argument("time threshold must be >= 0 slots");
    }
    Fidelity{request.fidelity_threshold};
}

}  // namespace

CheckResult check_request(const Outcome& outcome, const Request& request,
                          const PathSpec& path) {
    validate_request(request, path);
    CheckResult result;
    result.memory_ok = true;
    for (int peak : outcome.peak_memory) {
        if (peak > path.memory_capacity) result.memory_ok = false;
    }
    result.time_ok = outcome.t_f <= request.time_threshold;
    result.fidelity_ok = outcome.e2e_fidelity >= request.fidelity_threshold;
    result.feasible = result.memory_ok && result.time_ok && result.fidelity_ok;
    return result;
}

std::vector<RankedResult> brute_force_rank(const PathSpec& path_template,
                                           const EvaluationConfig& cfg) {
    cfg.validate();
    path_template.validate_template();

    std::optional<std::uint64_t> count = strategy_count(path_template.n_nodes, cfg.n_max);
    if (!count || *count > cfg.budget_cap) {
        throw BudgetExceededError(count.value_or(std::numeric_limits<std::uint64_t>::max()),
                                  cfg.budget_cap);
    }

    std::vector<RankedResult> results;
    results.reserve(*count);
    for (std::uint64_t i = 0; i < *count; ++i) {
        results.push_back(
            {strategy_from_index(path_template.n_nodes, cfg.n_max, i), 0.0, 0.0, 0.0});
    }
    parallel_for(*count, cfg.workers, [&](std::uint64_t i) {
        RankedResult& r = results[i];
        EvalStats stats = evaluate_strategy(path_template, r.strategy, cfg);
        r.mean_fidelity = stats.mean_fidelity;
        r.mean_t_f = stats.mean_t_f;
        r.mean_success = stats.mean_success;
    });
    std::sort(results.begin(), results.end(), ranks_before);
    return results;
}

std::optional<std::size_t> select_best(std::vector<RankedResult>& ranking,
                                       const Request& request, const PathSpec& path) {
    validate_request(request, path);
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < ranking.size(); ++i) {
        RankedResult& r = ranking[i];
        r.selected = false;
        ScheduleTrace trace = build_schedule(r.strategy.n_nodes(), r.strategy, path.mode);
        bool memory_ok = true;
        for (int peak : peak_memory(trace)) {
            if (peak > path.memory_capacity) memory_ok = false;
        }
        r.feasible = memory_ok && r.mean_t_f <= static_cast<double>(request.time_threshold) &&
                     r.mean_fidelity >= request.fidelity_threshold;
        if (r.feasible && (!best || ranks_before(r, ranking[*best]))) best = i;
    }
    if (best) ranking[*best].selected = true;
    return best;
}

DpResult dp_incremental(const PathSpec& path_template, const EvaluationConfig& cfg,
                        int n_start, int n_goal) {
    cfg.validate();
    if (n_start < 3) throw std::invalid_argument("incremental search starts at n >= 3");
    if (n_goal < n_start) throw std::invalid_argument("n_goal must be >= n_start");
    if (!path_template.initial_fidelities.empty()) {
        throw std::invalid_argument(
            "incremental search samples link fidelities per iteration; "
            "leave the path's fidelities empty and set the fidelity range");
    }
    if (!path_template.links.empty() &&
        static_cast<int>(path_template.links.size()) < n_goal - 1) {
        throw DimensionMismatchError("link models cover " +
                                     std::to_string(path_template.links.size()) +
                                     " links, need " + std::to_string(n_goal - 1));
    }

    auto path_for = [&](int n) {
        PathSpec p = path_template;
        p.n_nodes = n;
        if (!p.links.empty()) {
            p.links.assign(path_template.links.begin(),
                           path_template.links.begin() + (n - 1));
        }
        return p;
    };

    DpResult result;
    std::vector<RankedResult> seed_ranking = brute_force_rank(path_for(n_start), cfg);
    const RankedResult& seed = seed_ranking.front();
    DpStep step;
    step.n_nodes = n_start;
    step.shifted = to_shifted(seed.strategy);
    step.stats = {seed.mean_fidelity, seed.mean_t_f, seed.mean_success};
    step.candidates = *strategy_count(n_start, cfg.n_max);
    result.steps.push_back(std::move(step));

    std::uint64_t base = static_cast<std::uint64_t>(cfg.n_max) + 1;
    for (int n = n_start + 1; n <= n_goal; ++n) {
        const std::vector<int>& prefix = result.steps.back().shifted;
        PathSpec path = path_for(n);
        std::uint64_t count = base * base;
        std::vector<EvalStats> stats(count);
        parallel_for(count, cfg.workers, [&](std::uint64_t c) {
            int link_rounds = static_cast<int>(c / base);
            int long_rounds = static_cast<int>(c % base);
            Strategy candidate =
                from_shifted(n, extend_shifted(prefix, link_rounds, long_rounds));
            stats[c] = evaluate_strategy(path, candidate, cfg);
        });

        std::optional<std::uint64_t> best;
        for (std::uint64_t c = 0; c < count; ++c) {
            if (!best) {
                best = c;
                continue;
            }
            Strategy cand = from_shifted(
                n, extend_shifted(prefix, static_cast<int>(c / base),
                                  static_cast<int>(c % base)));
            Strategy incumbent = from_shifted(
                n, extend_shifted(prefix, static_cast<int>(*best / base),
                                  static_cast<int>(*best % base)));
            RankedResult challenger{std::move(cand), stats[c].mean_fidelity,
                                    stats[c].mean_t_f, stats[c].mean_success};
            RankedResult holder{std::move(incumbent), stats[*best].mean_fidelity,
                                stats[*best].mean_t_f, stats[*best].mean_success};
            if (ranks_before(challenger, holder)) best = c;
        }

        DpStep next;
        next.n_nodes = n;
        next.shifted = extend_shifted(prefix, static_cast<int>(*best / base),
                                      static_cast<int>(*best % base));
        next.stats = stats[*best];
        next.candidates = count;
        result.steps.push_back(std::move(next));
    }
    return result;
}

}  // namespace purechain
