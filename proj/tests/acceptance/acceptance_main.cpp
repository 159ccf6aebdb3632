// End-to-end acceptance gate. Each criterion prints one [PASS]/[FAIL] line;
// the process exits nonzero if any criterion fails. Run with no arguments for
// the full gate, or pass criterion numbers to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "core/models.hpp"
#include "core/optimizer.hpp"
#include "core/schedule.hpp"
#include "core/strategy.hpp"
#include "core/sweep.hpp"

namespace {

using namespace purechain;

// Recomputed full-precision worked-example values (exact composition of the
// library's own formulas; see the repository tests for the derivations).
constexpr double kNoPurifyE2e = 0.5883466666666667;
constexpr double kOneRoundE2e = 0.6813985848283901;
constexpr double kWorkedTol = 1e-9;
constexpr double kRoundedTol = 0.01;
constexpr double kRoundedE2eTol = 0.015;
constexpr double kOracleSlack = 1e-12;

struct Criterion {
    std::vector<std::string> failures;

    void expect(bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
    }
};

std::string fmt(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

PathSpec sampled_template(int n_nodes, double gamma) {
    PathSpec path;
    path.n_nodes = n_nodes;
    path.decoherence = {gamma, 1.0, 1e-3};
    return path;
}

PathSpec fixed_path(const std::vector<double>& fidelities, double gamma) {
    PathSpec path = sampled_template(static_cast<int>(fidelities.size()) + 1, gamma);
    path.initial_fidelities = fidelities;
    return path;
}

EvaluationConfig config_with(int n_max, std::uint64_t seed) {
    EvaluationConfig cfg;
    cfg.n_max = n_max;
    cfg.seed = seed;
    return cfg;
}

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

// 1. Worked-example regression at gamma = 0, F = (0.86, 0.73, 0.9).
Criterion criterion_1() {
    Criterion c;
    PathSpec path = fixed_path({0.86, 0.73, 0.9}, 0.0);

    Outcome zeros = simulate(path, Strategy(4, {0, 0, 0, 0, 0}));
    c.expect(near(zeros.e2e_fidelity, kNoPurifyE2e, kWorkedTol),
             "no-purification e2e " + fmt(zeros.e2e_fidelity) + " not within 1e-9 of " +
                 fmt(kNoPurifyE2e));
    c.expect(near(zeros.e2e_fidelity, 0.588, kRoundedTol),
             "no-purification e2e disagrees with the rounded 0.588");

    double f12 = purify_once(Fidelity(0.86)).value();
    double f23 = purify_once(Fidelity(0.73)).value();
    double f13 = swap_fidelity(Fidelity(f12), Fidelity(f23)).value();
    c.expect(near(f12, 0.89, kRoundedTol), "purified (1,2) fidelity not near 0.89");
    c.expect(near(f23, 0.77, kRoundedTol), "purified (2,3) fidelity not near 0.77");
    c.expect(near(f13, 0.69, kRoundedTol), "swapped (1,3) fidelity not near 0.69");
    Outcome base_only = simulate(path, Strategy(4, {1, 1, 0, 0, 0}));
    c.expect(near(base_only.e2e_fidelity, 0.63, kRoundedTol),
             "n12=n23=1 e2e " + fmt(base_only.e2e_fidelity) + " not near 0.63");
    double algebraic = swap_fidelity(Fidelity(f13), Fidelity(0.9)).value();
    c.expect(near(base_only.e2e_fidelity, algebraic, 1e-15),
             "simulate disagrees with the algebraic composition at gamma = 0");

    Outcome one_round = simulate(path, Strategy(4, {1, 1, 1, 1, 0}));
    c.expect(near(one_round.e2e_fidelity, kOneRoundE2e, kWorkedTol),
             "strategy (1,1,1,1,0) e2e " + fmt(one_round.e2e_fidelity) +
                 " not within 1e-9 of " + fmt(kOneRoundE2e));
    c.expect(near(one_round.e2e_fidelity, 0.67, kRoundedE2eTol),
             "strategy (1,1,1,1,0) e2e disagrees with the rounded 0.67");
    return c;
}

// 2. Strategy-space counting and dimensions.
Criterion criterion_2() {
    Criterion c;
    for (int n_nodes : {3, 4, 5}) {
        for (int n_max : {0, 1, 2, 3}) {
            int dim = strategy_dimension(n_nodes);
            std::uint64_t expected = 1;
            for (int i = 0; i < dim; ++i) {
                expected *= static_cast<std::uint64_t>(n_max) + 1;
            }
            std::optional<std::uint64_t> count = strategy_count(n_nodes, n_max);
            c.expect(count.has_value() && *count == expected,
                     "strategy_count(" + std::to_string(n_nodes) + ", " +
                         std::to_string(n_max) + ") != (n_max+1)^(2N-3)");
            if (!count) continue;
            std::set<std::vector<int>> seen;
            for (std::uint64_t index = 0; index < *count; ++index) {
                seen.insert(strategy_from_index(n_nodes, n_max, index).rounds());
            }
            c.expect(seen.size() == *count,
                     "enumeration of (" + std::to_string(n_nodes) + ", " +
                         std::to_string(n_max) + ") repeats or skips strategies");
            c.expect(seen.begin()->size() == static_cast<std::size_t>(dim),
                     "enumerated strategies have the wrong dimension");
        }
    }
    c.expect(strategy_dimension(3) == 3 && strategy_dimension(4) == 5 &&
                 strategy_dimension(5) == 7,
             "strategy_dimension disagrees with the 3/5/7 vector lengths");
    return c;
}

// 3. Incremental optimizer vs brute force and restricted re-enumeration.
Criterion criterion_3() {
    Criterion c;
    EvaluationConfig cfg = config_with(2, 42);
    for (double gamma : {0.0, 0.1, 2.0, 20.0, 100.0}) {
        for (int n_nodes : {4, 5}) {
            PathSpec tmpl = sampled_template(n_nodes, gamma);
            DpResult dp = dp_incremental(tmpl, cfg, 3, n_nodes);
            std::vector<RankedResult> ranking = brute_force_rank(tmpl, cfg);
            double dp_fid = dp.steps.back().stats.mean_fidelity;
            double brute_fid = ranking.front().mean_fidelity;
            c.expect(dp_fid <= brute_fid + kOracleSlack,
                     "dp beat brute force at gamma " + fmt(gamma) + ", N " +
                         std::to_string(n_nodes) + ": " + fmt(dp_fid) + " > " +
                         fmt(brute_fid));

            std::uint64_t base = static_cast<std::uint64_t>(cfg.n_max) + 1;
            for (std::size_t s = 1; s < dp.steps.size(); ++s) {
                const std::vector<int>& prefix = dp.steps[s - 1].shifted;
                int n = dp.steps[s].n_nodes;
                PathSpec grown = sampled_template(n, gamma);
                std::optional<RankedResult> best;
                for (std::uint64_t cand = 0; cand < base * base; ++cand) {
                    Strategy candidate = from_shifted(
                        n, extend_shifted(prefix, static_cast<int>(cand / base),
                                          static_cast<int>(cand % base)));
                    EvalStats stats = evaluate_strategy(grown, candidate, cfg);
                    RankedResult row{candidate, stats.mean_fidelity, stats.mean_t_f,
                                     stats.mean_success, false, false};
                    if (!best || ranks_before(row, *best)) best = row;
                }
                c.expect(best && to_shifted(best->strategy) == dp.steps[s].shifted,
                         "dp extension differs from restricted enumeration at gamma " +
                             fmt(gamma) + ", N " + std::to_string(n));
            }
        }
    }
    return c;
}

// 4. gamma = 0 limit: purification is free, so every component maxes out.
Criterion criterion_4() {
    Criterion c;
    EvaluationConfig cfg = config_with(8, 42);
    DpResult dp = dp_incremental(sampled_template(20, 0.0), cfg, 3, 20);
    for (const DpStep& step : dp.steps) {
        bool all_max = std::all_of(step.shifted.begin(), step.shifted.end(),
                                   [&](int v) { return v == cfg.n_max; });
        c.expect(all_max, "dp at gamma 0 left rounds below n_max at N " +
                              std::to_string(step.n_nodes));
    }

    std::vector<RankedResult> ranking = brute_force_rank(sampled_template(4, 0.0), cfg);
    std::vector<int> all_max(strategy_dimension(4), cfg.n_max);
    c.expect(ranking.front().strategy.rounds() == all_max,
             "brute force at gamma 0, N = 4 ranks a non-maximal strategy first");
    const DpStep* step4 = nullptr;
    for (const DpStep& step : dp.steps) {
        if (step.n_nodes == 4) step4 = &step;
    }
    c.expect(step4 != nullptr &&
                 from_shifted(4, step4->shifted) == ranking.front().strategy,
             "dp and brute force disagree at gamma 0, N = 4");
    return c;
}

// 5. Qualitative sweep ordering and a fixed-strategy fidelity curve.
Criterion criterion_5() {
    Criterion c;
    EvaluationConfig cfg = config_with(2, 42);
    SweepSpec spec;
    spec.gammas = {0.1, 100.0};
    spec.n_start = 3;
    spec.n_goal = 50;
    std::vector<SweepRow> rows = gamma_sweep(sampled_template(50, 0.0), cfg, spec);
    std::vector<double> low(51, -1.0), high(51, -1.0);
    for (const SweepRow& row : rows) {
        (row.gamma == 0.1 ? low : high)[static_cast<std::size_t>(row.n_nodes)] =
            row.mean_rounds;
    }
    for (int n = 5; n <= 50; ++n) {
        c.expect(low[static_cast<std::size_t>(n)] >= high[static_cast<std::size_t>(n)],
                 "mean rounds at gamma 0.1 fell below gamma 100 at N " +
                     std::to_string(n));
    }

    Strategy pinned(5, {1, 1, 0, 0, 1, 1, 2});
    std::vector<double> fids = {0.9, 0.87, 0.92, 0.88};
    double previous = 1.0;
    for (double gamma : {0.0, 0.1, 2.0, 20.0, 100.0, 1000.0}) {
        double e2e = simulate(fixed_path(fids, gamma), pinned).e2e_fidelity;
        c.expect(e2e <= previous,
                 "fixed-strategy fidelity rose between decay rates near gamma " +
                     fmt(gamma));
        previous = e2e;
    }
    return c;
}

// 6. Strategy freezing across adjacent decay rates and the regime flag.
Criterion criterion_6() {
    Criterion c;
    EvaluationConfig cfg = config_with(2, 42);

    SweepSpec frozen_spec;
    frozen_spec.gammas = {1000.0, 1050.0};
    frozen_spec.n_start = 3;
    frozen_spec.n_goal = 20;
    std::vector<FreezePair> frozen =
        detect_freeze(sampled_template(20, 0.0), cfg, frozen_spec);
    c.expect(frozen.size() == 1, "freeze report should hold exactly one pair");
    if (frozen.size() == 1) {
        c.expect(frozen[0].frozen, "strategies at 1000 vs 1050 Hz did not freeze");
        c.expect(frozen[0].match_fraction == 1.0, "frozen pair match fraction below 1");
        c.expect(frozen[0].regime_a && frozen[0].regime_b,
                 "regime flag missing at gamma * tau >= 1");
    }

    SweepSpec moving_spec;
    moving_spec.gammas = {0.1, 100.0};
    moving_spec.n_start = 3;
    moving_spec.n_goal = 20;
    std::vector<FreezePair> moving =
        detect_freeze(sampled_template(20, 0.0), cfg, moving_spec);
    c.expect(moving.size() == 1 && !moving[0].frozen,
             "strategies at 0.1 vs 100 Hz should differ");
    if (moving.size() == 1) {
        c.expect(!moving[0].regime_a && !moving[0].regime_b,
                 "regime flag raised below gamma * tau = 1");
    }

    SweepSpec boundary_spec;
    boundary_spec.gammas = {999.0, 1000.0};
    boundary_spec.n_start = 3;
    boundary_spec.n_goal = 5;
    std::vector<FreezePair> boundary =
        detect_freeze(sampled_template(5, 0.0), cfg, boundary_spec);
    c.expect(boundary.size() == 1 && !boundary[0].regime_a && boundary[0].regime_b,
             "regime flag does not flip exactly at gamma * tau = 1");
    return c;
}

// 7. Scale: incremental solve to N = 200 with bit-exact prefix growth.
Criterion criterion_7() {
    Criterion c;
    EvaluationConfig cfg = config_with(8, 42);
    DpResult dp = dp_incremental(sampled_template(200, 2.0), cfg, 3, 200);
    c.expect(dp.steps.size() == 198, "expected one step per chain length 3..200");
    for (std::size_t s = 1; s < dp.steps.size(); ++s) {
        const std::vector<int>& prev = dp.steps[s - 1].shifted;
        const std::vector<int>& next = dp.steps[s].shifted;
        bool prefix = next.size() == prev.size() + 2 &&
                      std::equal(prev.begin(), prev.end(), next.begin());
        c.expect(prefix, "shifted prefix broke at N " +
                             std::to_string(dp.steps[s].n_nodes));
        if (!prefix) break;
    }
    return c;
}

// 8. Representative property checks, one per named category; the full
// suites run in the unit test binaries.
Criterion criterion_8() {
    Criterion c;

    c.expect(purify_once(Fidelity(1.0)).value() == 1.0 &&
                 purify_once(Fidelity(0.5)).value() == 0.5,
             "purification fixed points at 0.5 and 1 do not hold");
    DecoherenceParams still{0.0, 1.0, 1e-3};
    for (double f = 0.05; f < 1.0; f += 0.05) {
        c.expect(swap_fidelity(Fidelity(f), Fidelity(1.0)).value() == f,
                 "swap with a perfect partner moved fidelity " + fmt(f));
        c.expect(decohere(Fidelity(f), 5.0, still).value() == f,
                 "decoherence at gamma 0 moved fidelity " + fmt(f));
    }

    DecoherenceParams decay{3.0, 1.0, 1e-3};
    double prev_purify = 0.5;
    double prev_decay = 1.0;
    for (int i = 1; i <= 40; ++i) {
        double f = 0.5 + 0.0124 * i;
        double purified = purify_once(Fidelity(f)).value();
        c.expect(purified > f, "purify_once failed to improve " + fmt(f));
        c.expect(purified > prev_purify, "purify_once not increasing at " + fmt(f));
        prev_purify = purified;
        double decayed = decohere(Fidelity(0.9), 0.05 * i, decay).value();
        c.expect(decayed < prev_decay, "decohere not decreasing in time");
        prev_decay = decayed;
    }

    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        int n_nodes = 3 + static_cast<int>(rng() % 28);
        std::vector<int> rounds(static_cast<std::size_t>(strategy_dimension(n_nodes)));
        for (int& r : rounds) r = static_cast<int>(rng() % 9);
        Strategy strategy(n_nodes, rounds);
        c.expect(from_shifted(n_nodes, to_shifted(strategy)) == strategy,
                 "shifted round-trip broke at N " + std::to_string(n_nodes));

        ScheduleTrace trace =
            build_schedule(n_nodes, strategy, ScheduleMode::just_in_time);
        int swaps = 0, entangles = 0;
        long long purifies = 0;
        for (const auto& row : trace.action_grid()) {
            for (const NodeAction& action : row) {
                if (action.kind == ActionKind::swap) ++swaps;
                if (action.kind == ActionKind::entangle) ++entangles;
                if (action.kind == ActionKind::purify) ++purifies;
            }
        }
        c.expect(swaps == n_nodes - 2,
                 "swap slots off at N " + std::to_string(n_nodes));
        c.expect(entangles == 2 * (n_nodes - 1),
                 "entangle slots off at N " + std::to_string(n_nodes));
        c.expect(purifies == 2 * strategy.total_rounds(),
                 "purify slots off at N " + std::to_string(n_nodes));
    }

    EvaluationConfig serial = config_with(2, 42);
    EvaluationConfig wide = serial;
    wide.workers = 4;
    std::vector<RankedResult> one = brute_force_rank(sampled_template(5, 2.0), serial);
    std::vector<RankedResult> four = brute_force_rank(sampled_template(5, 2.0), wide);
    bool identical = one.size() == four.size();
    for (std::size_t i = 0; identical && i < one.size(); ++i) {
        identical = one[i].strategy == four[i].strategy &&
                    one[i].mean_fidelity == four[i].mean_fidelity &&
                    one[i].mean_t_f == four[i].mean_t_f &&
                    one[i].mean_success == four[i].mean_success;
    }
    c.expect(identical, "ranking depends on the worker count");
    return c;
}

struct Entry {
    int id;
    const char* title;
    double time_limit_seconds;
    Criterion (*run)();
};

constexpr Entry kEntries[] = {
    {1, "worked-example regression", 1.0, criterion_1},
    {2, "strategy-space counting", 10.0, criterion_2},
    {3, "incremental vs exhaustive oracle", 120.0, criterion_3},
    {4, "gamma 0 all-max limit", 60.0, criterion_4},
    {5, "sweep ordering and fidelity curve", 300.0, criterion_5},
    {6, "phase-transition freeze", 300.0, criterion_6},
    {7, "scale to 200 nodes", 600.0, criterion_7},
    {8, "property suite representatives", 600.0, criterion_8},
};

}  // namespace

int main(int argc, char** argv) {
    std::set<int> wanted;
    for (int i = 1; i < argc; ++i) {
        int id = std::atoi(argv[i]);
        if (id < 1 || id > 8) {
            std::fprintf(stderr, "usage: %s [criterion 1..8]...\n", argv[0]);
            return 2;
        }
        wanted.insert(id);
    }

    bool all_passed = true;
    for (const Entry& entry : kEntries) {
        if (!wanted.empty() && wanted.count(entry.id) == 0) continue;
        auto start = std::chrono::steady_clock::now();
        Criterion result = entry.run();
        double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
        if (elapsed > entry.time_limit_seconds) {
            result.failures.push_back("runtime " + fmt(elapsed) +
                                      " s exceeds the " +
                                      fmt(entry.time_limit_seconds) + " s budget");
        }
        bool passed = result.failures.empty();
        all_passed = all_passed && passed;
        std::printf("[%s] criterion %d: %s (%.2f s)\n", passed ? "PASS" : "FAIL",
                    entry.id, entry.title, elapsed);
        for (const std::string& failure : result.failures) {
            std::printf("       %s\n", failure.c_str());
        }
    }
    return all_passed ? 0 : 1;
}
