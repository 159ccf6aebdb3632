#pragma once

#include <vector>

#include "core/optimizer.hpp"

namespace purechain {

struct SweepSpec {
    std::vector<double> gammas;  // decay rates to scan, 1/s
    int n_start = 3;
    int n_goal = 200;

    void validate() const;
};

struct SweepRow {
    double gamma = 0.0;
    int n_nodes = 0;
    double mean_rounds = 0.0;
    double mean_fidelity = 0.0;
    int t_f = 0;
    std::vector<int> shifted;
};

// Incremental optimization for each decay rate; rows ordered by (gamma, n_nodes).
std::vector<SweepRow> gamma_sweep(const PathSpec& path_template,
                                  const EvaluationConfig& cfg, const SweepSpec& spec);

struct FreezePair {
    double gamma_a = 0.0;
    double gamma_b = 0.0;
    bool frozen = false;          // every chain length picked identical strategies
    double match_fraction = 0.0;  // share of chain lengths with identical strategies
    bool regime_a = false;        // gamma * slot_duration >= 1
    bool regime_b = false;
};

// Compares optimized strategies between adjacent decay rates of the sweep.
std::vector<FreezePair> detect_freeze(const PathSpec& path_template,
                                      const EvaluationConfig& cfg, const SweepSpec& spec);

}  // namespace purechain
