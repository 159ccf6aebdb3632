#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "core/errors.hpp"
#include "core/models.hpp"
#include "core/schedule.hpp"
#include "core/strategy.hpp"

using namespace purechain;

namespace {

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

PathSpec make_path(int n, std::vector<double> fids, double gamma,
                   ScheduleMode mode = ScheduleMode::just_in_time, double kappa = 1.0) {
    PathSpec path;
    path.n_nodes = n;
    path.initial_fidelities = std::move(fids);
    path.decoherence.gamma = gamma;
    path.decoherence.kappa = kappa;
    path.mode = mode;
    return path;
}

struct WalkResult {
    double e2e = 0.0;
    long long noops = 0;
};

// Time-major re-simulation: advances one global slot at a time and applies
// decay, purification, creation and swap to every live pair, instead of
// folding each pair's lifetime independently. Must agree with simulate to the
// last bit since the per-pair operation sequences are identical.
WalkResult reference_walk(const PathSpec& path, const Strategy& strategy) {
    ScheduleTrace trace = build_schedule(path.n_nodes, strategy, path.mode);
    double decay = std::exp(-std::pow(path.decoherence.gamma * path.decoherence.slot_duration,
                                      path.decoherence.kappa));
    std::vector<double> fid(trace.pairs.size(), 0.0);
    WalkResult result;
    for (int t = 1; t <= trace.t_f; ++t) {
        for (std::size_t i = 0; i < trace.pairs.size(); ++i) {
            const PairTimeline& p = trace.pairs[i];
            if (p.created < t && t <= p.consumed) fid[i] *= decay;
        }
        for (std::size_t i = 0; i < trace.pairs.size(); ++i) {
            const PairTimeline& p = trace.pairs[i];
            if (p.created < t && t <= p.created + p.rounds) {
                if (fid[i] >= 0.5) {
                    fid[i] = purify_once(Fidelity(fid[i])).value();
                } else {
                    ++result.noops;
                }
            }
        }
        for (std::size_t i = 0; i < trace.pairs.size(); ++i) {
            const PairTimeline& p = trace.pairs[i];
            if (p.created != t) continue;
            if (p.node_b == p.node_a + 1) {
                fid[i] = path.initial_fidelities[static_cast<std::size_t>(p.node_a) - 1];
            } else {
                std::vector<double> inputs;
                for (std::size_t j = 0; j < trace.pairs.size(); ++j) {
                    if (j != i && trace.pairs[j].consumed == t) inputs.push_back(fid[j]);
                }
                REQUIRE(inputs.size() == 2);
                fid[i] = swap_fidelity(Fidelity(inputs[0]), Fidelity(inputs[1])).value();
            }
        }
    }
    result.e2e = fid.back();
    return result;
}

// Purify rounds with the scheduler's skip rule for sub-0.5 pairs.
double purify_clamped(double value, int rounds) {
    for (int i = 0; i < rounds; ++i) {
        if (value >= 0.5) value = purify_once(Fidelity(value)).value();
    }
    return value;
}

// Timing-free composition in skewed order; equals simulate exactly at gamma=0.
double algebraic_e2e(const std::vector<double>& fids, const Strategy& strategy) {
    double value = purify_clamped(fids[0], strategy.base_rounds(1));
    for (int k = 3; k <= strategy.n_nodes(); ++k) {
        double link = purify_clamped(fids[static_cast<std::size_t>(k) - 2],
                                     strategy.base_rounds(k - 1));
        value = swap_fidelity(Fidelity(value), Fidelity(link)).value();
        value = purify_clamped(value, strategy.long_rounds(k));
    }
    return value;
}

std::vector<int> random_rounds(int n, int hi, std::mt19937& gen) {
    std::uniform_int_distribution<int> dist(0, hi);
    std::vector<int> v(static_cast<std::size_t>(strategy_dimension(n)));
    for (int& x : v) x = dist(gen);
    return v;
}

}  // namespace

TEST_CASE("path spec validation") {
    PathSpec path = make_path(4, {0.9, 0.9}, 0.0);
    CHECK_THROWS_AS(path.validate(), DimensionMismatchError);
    path.initial_fidelities = {0.9, 0.9, 0.9};
    CHECK_NOTHROW(path.validate());
    path.initial_fidelities.clear();
    CHECK_NOTHROW(path.validate_template());
    CHECK_THROWS_AS(path.validate(), std::invalid_argument);
    path.n_nodes = 2;
    CHECK_THROWS_AS(path.validate_template(), std::invalid_argument);
    path.n_nodes = 4;
    path.memory_capacity = 1;
    CHECK_THROWS_AS(path.validate_template(), std::invalid_argument);
    path.memory_capacity = 2;
    path.links.resize(2);
    CHECK_THROWS_AS(path.validate_template(), DimensionMismatchError);
}

TEST_CASE("hand-counted trace for three nodes, no purification") {
    ScheduleTrace trace = build_schedule(3, Strategy(3, {0, 0, 0}),
                                         ScheduleMode::just_in_time);
    CHECK(trace.t_f == 3);
    REQUIRE(trace.pairs.size() == 3);
    CHECK(trace.pairs[0].node_a == 1);
    CHECK(trace.pairs[0].created == 1);
    CHECK(trace.pairs[0].consumed == 3);
    CHECK(trace.pairs[1].node_a == 2);
    CHECK(trace.pairs[1].created == 2);
    CHECK(trace.pairs[1].consumed == 3);
    CHECK(trace.pairs[2].node_b == 3);
    CHECK(trace.pairs[2].created == 3);
    CHECK(trace.pairs[2].consumed == 3);

    auto grid = trace.action_grid();
    CHECK(grid[1][1].kind == ActionKind::entangle);
    CHECK(grid[1][2].kind == ActionKind::entangle);
    CHECK(grid[1][3].kind == ActionKind::idle);
    CHECK(grid[2][2].kind == ActionKind::entangle);
    CHECK(grid[2][3].kind == ActionKind::entangle);
    CHECK(grid[3][2].kind == ActionKind::swap);
    CHECK(grid[3][1].kind == ActionKind::idle);
    CHECK(grid[3][3].kind == ActionKind::idle);
}

TEST_CASE("hand-counted trace for four nodes, no purification") {
    ScheduleTrace trace = build_schedule(4, Strategy(4, {0, 0, 0, 0, 0}),
                                         ScheduleMode::just_in_time);
    CHECK(trace.t_f == 4);
    REQUIRE(trace.pairs.size() == 5);
    // Link (3,4) rides the slot where node 2 swaps.
    CHECK(trace.pairs[3].node_a == 3);
    CHECK(trace.pairs[3].created == 3);
    auto grid = trace.action_grid();
    CHECK(grid[3][2].kind == ActionKind::swap);
    CHECK(grid[3][3].kind == ActionKind::entangle);
    CHECK(grid[3][4].kind == ActionKind::entangle);
    CHECK(grid[4][3].kind == ActionKind::swap);
}

TEST_CASE("hand-counted trace with purification rounds") {
    ScheduleTrace trace = build_schedule(3, Strategy(3, {1, 1, 0}),
                                         ScheduleMode::just_in_time);
    CHECK(trace.t_f == 5);
    CHECK(trace.pairs[0].created == 1);
    CHECK(trace.pairs[0].rounds == 1);
    CHECK(trace.pairs[1].created == 3);
    CHECK(trace.pairs[1].rounds == 1);
    auto grid = trace.action_grid();
    CHECK(grid[2][1].kind == ActionKind::purify);
    CHECK(grid[2][2].kind == ActionKind::purify);
    CHECK(grid[4][2].kind == ActionKind::purify);
    CHECK(grid[4][3].kind == ActionKind::purify);
    CHECK(grid[5][2].kind == ActionKind::swap);
}

TEST_CASE("four-node mixed strategy timeline") {
    ScheduleTrace trace = build_schedule(4, Strategy(4, {1, 2, 1, 1, 2}),
                                         ScheduleMode::just_in_time);
    CHECK(trace.t_f == 10);
    REQUIRE(trace.pairs.size() == 5);
    CHECK(trace.pairs[0].created == 1);
    CHECK(trace.pairs[0].consumed == 6);
    CHECK(trace.pairs[1].created == 3);
    CHECK(trace.pairs[1].consumed == 6);
    CHECK(trace.pairs[2].created == 6);
    CHECK(trace.pairs[2].consumed == 8);
    // JIT parks link (3,4) before (2,3) so it does not idle through the swap.
    CHECK(trace.pairs[3].created == 1);
    CHECK(trace.pairs[3].consumed == 8);
    CHECK(trace.pairs[4].created == 8);
    CHECK(trace.pairs[4].consumed == 10);
    CHECK_NOTHROW(trace.action_grid());
}

TEST_CASE("three-node final slot follows the closed formula") {
    for (int n12 = 0; n12 <= 4; ++n12) {
        for (int n23 = 0; n23 <= 4; ++n23) {
            for (int n13 = 0; n13 <= 4; ++n13) {
                ScheduleTrace trace = build_schedule(3, Strategy(3, {n12, n23, n13}),
                                                     ScheduleMode::just_in_time);
                CHECK(trace.t_f == 3 + n12 + n23 + n13);
            }
        }
    }
}

TEST_CASE("final slot respects the swap spine") {
    std::mt19937 gen(11);
    for (int n : {4, 5, 6, 8}) {
        for (int rep = 0; rep < 120; ++rep) {
            std::vector<int> rounds = random_rounds(n, 4, gen);
            Strategy s(n, rounds);
            long long spine = n + rounds[0] + rounds[1];
            for (int j = n - 1; j < strategy_dimension(n); ++j) spine += rounds[j];
            int tf = build_schedule(n, s, ScheduleMode::just_in_time).t_f;
            CHECK(tf >= spine);
            CHECK(tf >= n - 1);

            // Zero tail links leave only the spine, so the bound is tight and
            // every spine component costs exactly one slot.
            std::vector<int> tailless = rounds;
            for (int i = 2; i < n - 1; ++i) tailless[i] = 0;
            long long tight = n + tailless[0] + tailless[1];
            for (int j = n - 1; j < strategy_dimension(n); ++j) tight += tailless[j];
            CHECK(build_schedule(n, Strategy(n, tailless),
                                 ScheduleMode::just_in_time).t_f == tight);

            // The terminal pair's rounds always extend the schedule one-for-one.
            std::vector<int> bumped = rounds;
            bumped[static_cast<std::size_t>(strategy_dimension(n)) - 1] += 1;
            CHECK(build_schedule(n, Strategy(n, bumped),
                                 ScheduleMode::just_in_time).t_f == tf + 1);
        }
    }
}

TEST_CASE("schedules stay conflict-free and conserve operations") {
    std::mt19937 gen(23);
    std::uniform_int_distribution<int> n_dist(3, 30);
    for (auto mode : {ScheduleMode::just_in_time, ScheduleMode::eager}) {
        for (int rep = 0; rep < 60; ++rep) {
            int n = n_dist(gen);
            std::vector<int> rounds = random_rounds(n, 8, gen);
            Strategy s(n, rounds);
            ScheduleTrace trace = build_schedule(n, s, mode);
            REQUIRE(static_cast<int>(trace.pairs.size()) == 2 * n - 3);

            std::vector<std::vector<NodeAction>> grid;
            REQUIRE_NOTHROW(grid = trace.action_grid());
            long long entangles = 0, purifies = 0, swaps = 0;
            for (const auto& row : grid) {
                for (const NodeAction& a : row) {
                    if (a.kind == ActionKind::entangle) ++entangles;
                    if (a.kind == ActionKind::purify) ++purifies;
                    if (a.kind == ActionKind::swap) ++swaps;
                }
            }
            CHECK(entangles == 2 * (n - 1));
            CHECK(purifies == 2 * s.total_rounds());
            CHECK(swaps == n - 2);
            for (const PairTimeline& p : trace.pairs) {
                CHECK(p.created >= 1);
                CHECK(p.created + p.rounds <= p.consumed);
                CHECK(p.consumed <= trace.t_f);
            }
        }
    }
}

TEST_CASE("build_schedule rejects a mismatched strategy") {
    CHECK_THROWS_AS(build_schedule(4, Strategy(3, {0, 0, 0}), ScheduleMode::just_in_time),
                    DimensionMismatchError);
}

TEST_CASE("memory usage counts stored pairs per node and slot") {
    ScheduleTrace trace = build_schedule(3, Strategy(3, {0, 0, 0}),
                                         ScheduleMode::just_in_time);
    CHECK(memory_usage(trace, 2, 2) == 2);
    CHECK(memory_usage(trace, 3, 1) == 0);
    CHECK(memory_usage(trace, 1, 1) == 1);
    // The handoff slot counts the consumed pair and the swap product it became.
    CHECK(memory_usage(trace, 1, 3) == 2);
    for (int node = 1; node <= 3; ++node) CHECK(memory_usage(trace, node, 4) == 0);
    CHECK_THROWS_AS(memory_usage(trace, 0, 1), std::out_of_range);
    CHECK_THROWS_AS(memory_usage(trace, 4, 1), std::out_of_range);
}

TEST_CASE("physical peak memory is one qubit at the ends, two inside") {
    std::mt19937 gen(31);
    for (int n : {3, 4, 5, 9, 14}) {
        for (int rep = 0; rep < 20; ++rep) {
            Strategy s(n, random_rounds(n, 5, gen));
            ScheduleTrace trace = build_schedule(n, s, ScheduleMode::just_in_time);
            std::vector<int> peaks = peak_memory(trace);
            REQUIRE(static_cast<int>(peaks.size()) == n);
            CHECK(peaks.front() == 1);
            CHECK(peaks.back() == 1);
            for (int node = 2; node < n; ++node) CHECK(peaks[static_cast<std::size_t>(node) - 1] == 2);
        }
    }
}

TEST_CASE("numerology lists every pair with its occupied interval") {
    ScheduleTrace trace = build_schedule(3, Strategy(3, {0, 0, 0}),
                                         ScheduleMode::just_in_time);
    std::vector<NumerologyEntry> entries = numerology(trace);
    REQUIRE(entries.size() == 3);
    CHECK(entries[0].node_a == 1);
    CHECK(entries[0].node_b == 2);
    CHECK(entries[0].first_slot == 1);
    CHECK(entries[0].last_slot == 3);
    CHECK(entries[1].first_slot == 2);
    CHECK(entries[1].last_slot == 3);
    CHECK(entries[2].first_slot == 3);
    CHECK(entries[2].last_slot == 3);

    // Purification stretches the intervals but never changes the pair set.
    ScheduleTrace full = build_schedule(3, Strategy(3, {8, 8, 8}),
                                        ScheduleMode::just_in_time);
    std::vector<NumerologyEntry> stretched = numerology(full);
    REQUIRE(stretched.size() == entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        CHECK(stretched[i].node_a == entries[i].node_a);
        CHECK(stretched[i].node_b == entries[i].node_b);
        CHECK(stretched[i].rounds == 8);
    }
}

TEST_CASE("worked chain with ideal memories") {
    PathSpec path = make_path(4, {0.86, 0.73, 0.9}, 0.0);

    Outcome plain = simulate(path, Strategy(4, {0, 0, 0, 0, 0}));
    CHECK(near(plain.e2e_fidelity, 0.58834666666666667, 1e-12));
    CHECK(plain.t_f == 4);
    CHECK(plain.success_probability == 1.0);
    CHECK(plain.purify_noops == 0);

    Outcome once = simulate(path, Strategy(4, {1, 1, 0, 0, 0}));
    CHECK(near(once.e2e_fidelity, 0.63452099101114516, 1e-12));

    Outcome ladder = simulate(path, Strategy(4, {1, 1, 1, 1, 0}));
    CHECK(near(ladder.e2e_fidelity, 0.68139858482839009, 1e-12));
}

TEST_CASE("decayed chains match hand-computed folds") {
    PathSpec path = make_path(3, {0.8, 0.8}, 200.0);
    Outcome plain = simulate(path, Strategy(3, {0, 0, 0}));
    CHECK(plain.t_f == 3);
    CHECK(near(plain.e2e_fidelity, 0.40457238303660358, 1e-12));

    Outcome purified = simulate(path, Strategy(3, {1, 1, 0}));
    CHECK(purified.t_f == 5);
    CHECK(near(purified.e2e_fidelity, 0.30211707920435525, 1e-12));
}

TEST_CASE("simulate agrees with the slot-walking reference bit for bit") {
    std::mt19937 gen(47);
    std::uniform_real_distribution<double> fid_dist(0.5, 0.99);
    double gammas[] = {0.0, 0.3, 5.0, 100.0, 1000.0};
    double kappas[] = {1.0, 2.0};
    int rep = 0;
    for (int n : {3, 4, 5, 6, 8, 10, 12}) {
        for (int i = 0; i < 24; ++i, ++rep) {
            std::vector<double> fids(static_cast<std::size_t>(n) - 1);
            for (double& f : fids) f = fid_dist(gen);
            auto mode = rep % 2 == 0 ? ScheduleMode::just_in_time : ScheduleMode::eager;
            PathSpec path = make_path(n, fids, gammas[rep % 5], mode, kappas[rep % 2]);
            Strategy s(n, random_rounds(n, 6, gen));
            Outcome out = simulate(path, s);
            WalkResult walk = reference_walk(path, s);
            CHECK(out.e2e_fidelity == walk.e2e);
            CHECK(out.purify_noops == walk.noops);
        }
    }
}

TEST_CASE("zero decay reduces simulate to pure algebra") {
    std::mt19937 gen(59);
    std::uniform_real_distribution<double> fid_dist(0.55, 0.99);
    for (int n : {3, 4, 5, 7}) {
        for (int rep = 0; rep < 30; ++rep) {
            std::vector<double> fids(static_cast<std::size_t>(n) - 1);
            for (double& f : fids) f = fid_dist(gen);
            auto mode = rep % 2 == 0 ? ScheduleMode::just_in_time : ScheduleMode::eager;
            PathSpec path = make_path(n, fids, 0.0, mode);
            Strategy s(n, random_rounds(n, 4, gen));
            CHECK(simulate(path, s).e2e_fidelity == algebraic_e2e(fids, s));
        }
    }
}

TEST_CASE("fidelity never gains from more decoherence") {
    Strategy s(4, {2, 1, 0, 1, 1});
    double prev = 1.0;
    for (double gamma : {0.0, 0.1, 2.0, 20.0, 100.0, 1000.0}) {
        PathSpec path = make_path(4, {0.9, 0.85, 0.88}, gamma);
        double e2e = simulate(path, s).e2e_fidelity;
        CHECK(e2e <= prev);
        prev = e2e;
    }
}

TEST_CASE("eager creation only costs fidelity") {
    Strategy s(4, {0, 0, 0, 2, 0});
    PathSpec jit = make_path(4, {0.9, 0.9, 0.9}, 5.0, ScheduleMode::just_in_time);
    PathSpec eager = make_path(4, {0.9, 0.9, 0.9}, 5.0, ScheduleMode::eager);
    Outcome a = simulate(jit, s);
    Outcome b = simulate(eager, s);
    CHECK(a.t_f == 6);
    CHECK(b.t_f == 6);
    CHECK(b.e2e_fidelity < a.e2e_fidelity);

    std::mt19937 gen(67);
    for (int n : {4, 5}) {
        for (int rep = 0; rep < 40; ++rep) {
            Strategy r(n, random_rounds(n, 2, gen));
            PathSpec pj = make_path(n, std::vector<double>(static_cast<std::size_t>(n) - 1, 0.9),
                                    5.0, ScheduleMode::just_in_time);
            PathSpec pe = pj;
            pe.mode = ScheduleMode::eager;
            Outcome oj = simulate(pj, r);
            Outcome oe = simulate(pe, r);
            if (oj.t_f == oe.t_f) CHECK(oe.e2e_fidelity <= oj.e2e_fidelity + 1e-15);
        }
    }
}

TEST_CASE("purification below one half is skipped and counted") {
    PathSpec path = make_path(3, {0.55, 0.55}, 1000.0);
    Outcome out = simulate(path, Strategy(3, {2, 2, 1}));
    CHECK(out.purify_noops == 5);
    CHECK(out.e2e_fidelity < 0.5);
    PathSpec clean = make_path(3, {0.9, 0.9}, 0.0);
    CHECK(simulate(clean, Strategy(3, {2, 2, 1})).purify_noops == 0);
}

TEST_CASE("success probability carries the link and operation models") {
    PathSpec path = make_path(4, {0.9, 0.9, 0.9}, 0.0);
    path.links = {LinkModel{0.2, 10.0, 3}, LinkModel{0.2, 10.0, 3}, LinkModel{0.2, 10.0, 3}};
    path.ops.swap_success = 0.95;
    path.ops.purify_success = 0.9;
    Strategy s(4, {1, 0, 2, 0, 1});
    Outcome out = simulate(path, s);
    CHECK(out.success_probability ==
          path_success(path.links, path.ops, s.rounds()));
    double per_link = entangle_success(LinkModel{0.2, 10.0, 3});
    CHECK(near(out.success_probability,
               per_link * per_link * per_link * std::pow(0.9, 4) * std::pow(0.95, 2),
               1e-12));
}
