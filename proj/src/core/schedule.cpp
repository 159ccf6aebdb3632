#include "core/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "core/errors.hpp"

namespace purechain {

namespace {

struct Placement {
    int created;
    int ready;  // created + rounds, slot after which the pair just waits
};

// Chooses the creation slot of link (k, k+1). Node k is busy during the
// previous link's window [prev_created, prev_ready] and, when the long-range
// pair (1, k) gets purified, during (swap_slot, swap_slot + long_rounds].
// Node k+1 has no earlier work. Just-in-time placement picks the window with
// the latest end not past the long pair's ready slot, falling back to the
// earliest end after it; eager placement picks the earliest free window.
Placement place_link(int rounds, int prev_created, int prev_ready, int swap_slot,
                     int long_rounds, ScheduleMode mode) {
    int len = 1 + rounds;
    int target = swap_slot + long_rounds;
    if (mode == ScheduleMode::just_in_time) {
        if (len <= swap_slot - prev_ready) return {swap_slot - len + 1, swap_slot};
        if (len <= prev_created - 1) return {prev_created - len, prev_created - 1};
        if (long_rounds == 0) return {prev_ready + 1, prev_ready + len};
        return {target + 1, target + len};
    }
    if (len <= prev_created - 1) return {1, len};
    if (long_rounds == 0 || prev_ready + len <= swap_slot)
        return {prev_ready + 1, prev_ready + len};
    return {target + 1, target + len};
}

}  // namespace

std::vector<int> peak_memory(const ScheduleTrace& trace) {
    std::vector<int> peaks(static_cast<std::size_t>(trace.n_nodes), 0);
    for (int node = 1; node <= trace.n_nodes; ++node) {
        std::vector<int> diff(static_cast<std::size_t>(trace.t_f) + 2, 0);
        for (const PairTimeline& p : trace.pairs) {
            if (p.node_a != node && p.node_b != node) continue;
            diff[static_cast<std::size_t>(p.created)] += 1;
            diff[static_cast<std::size_t>(p.consumed) + 1] -= 1;
            // A swap relabels the surviving qubit at both ends of the pair it
            // creates, so the consumed and created pair share memory there.
            bool swap_product = p.node_b != p.node_a + 1;
            if (swap_product && (node == 1 || node == p.node_b)) {
                diff[static_cast<std::size_t>(p.created)] -= 1;
                diff[static_cast<std::size_t>(p.created) + 1] += 1;
            }
        }
        int level = 0;
        int peak = 0;
        for (int t = 1; t <= trace.t_f; ++t) {
            level += diff[static_cast<std::size_t>(t)];
            peak = std::max(peak, level);
        }
        peaks[static_cast<std::size_t>(node) - 1] = peak;
    }
    return peaks;
}

void PathSpec::validate_template() const {
    if (n_nodes < 3) {
        throw std::invalid_argument("a repeater chain needs at least 3 nodes, got " +
                                    std::to_string(n_nodes));
    }
    decoherence.validate();
    ops.validate();
    if (!links.empty() && static_cast<int>(links.size()) != n_nodes - 1) {
        throw DimensionMismatchError("expected " + std::to_string(n_nodes - 1) +
                                     " links, got " + std::to_string(links.size()));
    }
    for (const LinkModel& link : links) link.validate();
    if (memory_capacity < 2) {
        throw std::invalid_argument("memory capacity must be >= 2 qubits");
    }
    if (!initial_fidelities.empty() &&
        static_cast<int>(initial_fidelities.size()) != n_nodes - 1) {
        throw DimensionMismatchError("expected " + std::to_string(n_nodes - 1) +
                                     " initial fidelities, got " +
                                     std::to_string(initial_fidelities.size()));
    }
    for (double f : initial_fidelities) Fidelity{f};
}

void PathSpec::validate() const {
    validate_template();
    if (initial_fidelities.empty()) {
        throw std::invalid_argument("initial link fidelities are required");
    }
}

ScheduleTrace build_schedule(int n_nodes, const Strategy& strategy, ScheduleMode mode) {
    if (strategy.n_nodes() != n_nodes) {
        throw DimensionMismatchError("strategy is for " +
                                     std::to_string(strategy.n_nodes()) +
                                     " nodes, path has " + std::to_string(n_nodes));
    }
    ScheduleTrace trace;
    trace.n_nodes = n_nodes;

    int n12 = strategy.base_rounds(1);
    int n23 = strategy.base_rounds(2);
    int created23 = 2 + n12;
    int swap_slot = created23 + n23 + 1;  // both input pairs ready one slot before
    trace.pairs.push_back({1, 2, 1, n12, swap_slot});
    trace.pairs.push_back({2, 3, created23, n23, swap_slot});

    int long_rounds = strategy.long_rounds(3);
    int long_ready = swap_slot + long_rounds;
    std::size_t long_idx = trace.pairs.size();
    trace.pairs.push_back({1, 3, swap_slot, long_rounds, 0});

    int prev_created = created23;
    int prev_ready = created23 + n23;
    for (int k = 3; k < n_nodes; ++k) {
        Placement link = place_link(strategy.base_rounds(k), prev_created, prev_ready,
                                    swap_slot, long_rounds, mode);
        int next_swap = std::max(long_ready, link.ready) + 1;
        trace.pairs[long_idx].consumed = next_swap;
        trace.pairs.push_back({k, k + 1, link.created, link.ready - link.created,
                               next_swap});

        long_rounds = strategy.long_rounds(k + 1);
        long_ready = next_swap + long_rounds;
        long_idx = trace.pairs.size();
        trace.pairs.push_back({1, k + 1, next_swap, long_rounds, 0});

        swap_slot = next_swap;
        prev_created = link.created;
        prev_ready = link.ready;
    }

    trace.t_f = long_ready;
    trace.pairs[long_idx].consumed = trace.t_f;
    return trace;
}

std::vector<std::vector<NodeAction>> ScheduleTrace::action_grid() const {
    std::vector<std::vector<NodeAction>> grid(
        static_cast<std::size_t>(t_f) + 1,
        std::vector<NodeAction>(static_cast<std::size_t>(n_nodes) + 1));
    auto assign = [&](int slot, int node, NodeAction action) {
        NodeAction& cell = grid[static_cast<std::size_t>(slot)][static_cast<std::size_t>(node)];
        if (cell.kind != ActionKind::idle) {
            throw std::logic_error("node " + std::to_string(node) +
                                   " double-booked at slot " + std::to_string(slot));
        }
        cell = action;
    };
    for (const PairTimeline& p : pairs) {
        if (p.node_b == p.node_a + 1) {
            assign(p.created, p.node_a, {ActionKind::entangle, p.node_a, p.node_b});
            assign(p.created, p.node_b, {ActionKind::entangle, p.node_a, p.node_b});
        } else {
            // Swap product: the action runs at the node the swap measures out.
            assign(p.created, p.node_b - 1, {ActionKind::swap, p.node_a, p.node_b});
        }
        for (int r = 1; r <= p.rounds; ++r) {
            assign(p.created + r, p.node_a, {ActionKind::purify, p.node_a, p.node_b});
            assign(p.created + r, p.node_b, {ActionKind::purify, p.node_a, p.node_b});
        }
    }
    return grid;
}

int memory_usage(const ScheduleTrace& trace, int node, int t) {
    if (node < 1 || node > trace.n_nodes) {
        throw std::out_of_range("node " + std::to_string(node) + " outside [1, " +
                                std::to_string(trace.n_nodes) + "]");
    }
    int count = 0;
    for (const PairTimeline& p : trace.pairs) {
        if ((p.node_a == node || p.node_b == node) && p.created <= t && t <= p.consumed) {
            ++count;
        }
    }
    return count;
}

std::vector<NumerologyEntry> numerology(const ScheduleTrace& trace) {
    std::vector<NumerologyEntry> entries;
    entries.reserve(trace.pairs.size());
    for (const PairTimeline& p : trace.pairs) {
        entries.push_back({p.node_a, p.node_b, p.rounds, p.created, p.consumed});
    }
    return entries;
}

Outcome simulate(const PathSpec& path, const Strategy& strategy) {
    path.validate();
    ScheduleTrace trace = build_schedule(path.n_nodes, strategy, path.mode);

    double slot_exponent = std::pow(path.decoherence.gamma * path.decoherence.slot_duration,
                                    path.decoherence.kappa);
    double decay = std::exp(-slot_exponent);
    long long noops = 0;

    // Every pair decays once per elapsed slot and is purified right after the
    // decay of each of its purification slots; whatever fidelity remains at the
    // consumption slot feeds the swap there.
    auto fold = [&](const PairTimeline& p, double f) {
        for (int r = 0; r < p.rounds; ++r) {
            f *= decay;
            if (f >= 0.5) {
                f = purify_once(Fidelity(f)).value();
            } else {
                ++noops;
            }
        }
        for (int t = p.created + p.rounds; t < p.consumed; ++t) f *= decay;
        return f;
    };

    double left = fold(trace.pairs[0], path.initial_fidelities[0]);
    double right = fold(trace.pairs[1], path.initial_fidelities[1]);
    double value = swap_fidelity(Fidelity(left), Fidelity(right)).value();
    std::size_t idx = 2;
    for (int k = 3; k < path.n_nodes; ++k) {
        double long_in = fold(trace.pairs[idx], value);
        double link_in = fold(trace.pairs[idx + 1],
                              path.initial_fidelities[static_cast<std::size_t>(k) - 1]);
        value = swap_fidelity(Fidelity(long_in), Fidelity(link_in)).value();
        idx += 2;
    }

    Outcome out;
    out.e2e_fidelity = fold(trace.pairs[idx], value);
    out.t_f = trace.t_f;
    out.success_probability = path_success(path.links, path.ops, strategy.rounds());
    out.peak_memory = peak_memory(trace);
    out.purify_noops = noops;
    return out;
}

}  // namespace purechain
