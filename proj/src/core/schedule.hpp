#pragma once

#include <vector>

#include "core/models.hpp"
#include "core/strategy.hpp"

namespace purechain {

enum class ScheduleMode {
    just_in_time,  // links appear as late as their swap allows
    eager,         // links appear in the earliest conflict-free window
};

// A source-to-destination repeater chain with its physical parameters.
struct PathSpec {
    int n_nodes = 3;
    std::vector<double> initial_fidelities;  // one per adjacent link
    DecoherenceParams decoherence;
    OperationProbabilities ops;
    std::vector<LinkModel> links;  // empty models ideal generation
    int memory_capacity = 2;       // qubits per node
    ScheduleMode mode = ScheduleMode::just_in_time;

    // Checks everything except initial fidelities, which samplers fill in.
    void validate_template() const;
    void validate() const;
};

enum class ActionKind { idle, entangle, purify, swap };

struct NodeAction {
    ActionKind kind = ActionKind::idle;
    int node_a = 0;  // pair the action touches, 0 when idle
    int node_b = 0;
};

// Life of one entangled pair. Purification slots are the `rounds` slots
// immediately after creation; consumption is the swap that destroys the pair,
// or the final slot for the end-to-end pair.
struct PairTimeline {
    int node_a = 0;
    int node_b = 0;
    int created = 0;
    int rounds = 0;
    int consumed = 0;
};

struct ScheduleTrace {
    int n_nodes = 0;
    int t_f = 0;
    std::vector<PairTimeline> pairs;  // creation order

    // Per-slot, per-node action table; grid[t][v] is node v's action at slot t.
    // Row 0 and column 0 are unused so slots and nodes keep their 1-based ids.
    std::vector<std::vector<NodeAction>> action_grid() const;
};

struct NumerologyEntry {
    int node_a = 0;
    int node_b = 0;
    int rounds = 0;
    int first_slot = 0;
    int last_slot = 0;
};

struct Outcome {
    double e2e_fidelity = 0.0;
    int t_f = 0;
    double success_probability = 0.0;
    std::vector<int> peak_memory;  // physical qubits per node, index node-1
    long long purify_noops = 0;    // purifications skipped because F < 0.5
};

ScheduleTrace build_schedule(int n_nodes, const Strategy& strategy, ScheduleMode mode);

// Pairs occupying memory at `node` during slot `t`, counting a swap's consumed
// and created pairs separately when their lifetimes meet at the handoff slot.
int memory_usage(const ScheduleTrace& trace, int node, int t);

// Peak physical qubits held per node (index node-1). Unlike memory_usage, a
// swap's consumed and created pair count once at the nodes where the qubit
// survives the handoff.
std::vector<int> peak_memory(const ScheduleTrace& trace);

// Resource demand per pair: purification rounds and occupied slot interval.
std::vector<NumerologyEntry> numerology(const ScheduleTrace& trace);

Outcome simulate(const PathSpec& path, const Strategy& strategy);

}  // namespace purechain
