#include "core/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "core/strategy.hpp"

namespace purechain {

void SweepSpec::validate() const {
    if (gammas.empty()) throw std::invalid_argument("sweep needs at least one gamma");
    for (double g : gammas) {
        if (!(g >= 0.0)) throw std::invalid_argument("decoherence gamma must be >= 0");
    }
    if (n_start < 3) throw std::invalid_argument("sweep starts at n >= 3");
    if (n_goal < n_start) throw std::invalid_argument("n_goal must be >= n_start");
}

std::vector<SweepRow> gamma_sweep(const PathSpec& path_template,
                                  const EvaluationConfig& cfg, const SweepSpec& spec) {
    spec.validate();
    std::vector<double> gammas = spec.gammas;
    std::sort(gammas.begin(), gammas.end());

    std::vector<SweepRow> rows;
    for (double gamma : gammas) {
        PathSpec tmpl = path_template;
        tmpl.decoherence.gamma = gamma;
        DpResult dp = dp_incremental(tmpl, cfg, spec.n_start, spec.n_goal);
        for (const DpStep& step : dp.steps) {
            Strategy strategy = from_shifted(step.n_nodes, step.shifted);
            SweepRow row;
            row.gamma = gamma;
            row.n_nodes = step.n_nodes;
            row.mean_rounds = strategy.mean_rounds();
            row.mean_fidelity = step.stats.mean_fidelity;
            row.t_f = static_cast<int>(std::llround(step.stats.mean_t_f));
            row.shifted = step.shifted;
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

std::vector<FreezePair> detect_freeze(const PathSpec& path_template,
                                      const EvaluationConfig& cfg, const SweepSpec& spec) {
    if (spec.gammas.size() < 2) {
        throw std::invalid_argument("freeze detection needs at least two gammas");
    }
    std::vector<SweepRow> rows = gamma_sweep(path_template, cfg, spec);
    int lengths = spec.n_goal - spec.n_start + 1;

    std::vector<FreezePair> pairs;
    for (std::size_t g = 0; g + 1 < spec.gammas.size(); ++g) {
        const SweepRow* a = &rows[g * static_cast<std::size_t>(lengths)];
        const SweepRow* b = a + lengths;
        FreezePair entry;
        entry.gamma_a = a[0].gamma;
        entry.gamma_b = b[0].gamma;
        int matches = 0;
        for (int i = 0; i < lengths; ++i) {
            if (a[i].shifted == b[i].shifted) ++matches;
        }
        entry.match_fraction = static_cast<double>(matches) / static_cast<double>(lengths);
        entry.frozen = matches == lengths;
        entry.regime_a = entry.gamma_a * path_template.decoherence.slot_duration >= 1.0;
        entry.regime_b = entry.gamma_b * path_template.decoherence.slot_duration >= 1.0;
        pairs.push_back(entry);
    }
    return pairs;
}

}  // namespace purechain
