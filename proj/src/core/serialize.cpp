#include "core/serialize.hpp"

#include <charconv>
#include <stdexcept>

#include "core/strategy.hpp"

namespace purechain {

std::string format_double(double value) {
    char buffer[64];
    auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    if (ec != std::errc()) throw std::runtime_error("double formatting failed");
    return std::string(buffer, end);
}

std::string join_ints(std::span<const int> values, char separator) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) out.push_back(separator);
        out += std::to_string(values[i]);
    }
    return out;
}

namespace {

std::vector<int> strategy_ints(const Strategy& strategy, bool shifted) {
    return shifted ? to_shifted(strategy) : strategy.rounds();
}

const char* kind_name(ActionKind kind) {
    switch (kind) {
        case ActionKind::entangle: return "entangle";
        case ActionKind::purify: return "purify";
        case ActionKind::swap: return "swap";
        case ActionKind::idle: break;
    }
    return "idle";
}

}  // namespace

std::string ranking_csv(const std::vector<RankedResult>& ranking, bool shifted) {
    std::string out = "strategy,mean_fidelity,t_f,success_probability,feasible,selected\n";
    for (const RankedResult& r : ranking) {
        out += join_ints(strategy_ints(r.strategy, shifted), ';');
        out += ',' + format_double(r.mean_fidelity);
        out += ',' + format_double(r.mean_t_f);
        out += ',' + format_double(r.mean_success);
        out += r.feasible ? ",true" : ",false";
        out += r.selected ? ",true\n" : ",false\n";
    }
    return out;
}

nlohmann::json ranking_json(const std::vector<RankedResult>& ranking, bool shifted) {
    nlohmann::json rows = nlohmann::json::array();
    for (const RankedResult& r : ranking) {
        rows.push_back({{"strategy", strategy_ints(r.strategy, shifted)},
                        {"mean_fidelity", r.mean_fidelity},
                        {"t_f", r.mean_t_f},
                        {"success_probability", r.mean_success},
                        {"feasible", r.feasible},
                        {"selected", r.selected}});
    }
    return rows;
}

std::string dp_csv(const DpResult& result, bool shifted) {
    std::string out = "n_nodes,mean_fidelity,t_f,mean_rounds,strategy\n";
    for (const DpStep& step : result.steps) {
        Strategy strategy = from_shifted(step.n_nodes, step.shifted);
        out += std::to_string(step.n_nodes);
        out += ',' + format_double(step.stats.mean_fidelity);
        out += ',' + format_double(step.stats.mean_t_f);
        out += ',' + format_double(strategy.mean_rounds());
        out += ',';
        out += join_ints(shifted ? step.shifted : strategy.rounds(), ';');
        out += '\n';
    }
    return out;
}

nlohmann::json dp_json(const DpResult& result, bool shifted) {
    nlohmann::json rows = nlohmann::json::array();
    for (const DpStep& step : result.steps) {
        Strategy strategy = from_shifted(step.n_nodes, step.shifted);
        rows.push_back({{"n_nodes", step.n_nodes},
                        {"mean_fidelity", step.stats.mean_fidelity},
                        {"t_f", step.stats.mean_t_f},
                        {"mean_rounds", strategy.mean_rounds()},
                        {"strategy", shifted ? step.shifted : strategy.rounds()},
                        {"candidates", step.candidates}});
    }
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out = "gamma,n_nodes,mean_rounds,mean_fidelity,t_f,strategy\n";
    for (const SweepRow& row : rows) {
        out += format_double(row.gamma);
        out += ',' + std::to_string(row.n_nodes);
        out += ',' + format_double(row.mean_rounds);
        out += ',' + format_double(row.mean_fidelity);
        out += ',' + std::to_string(row.t_f);
        out += ',' + join_ints(row.shifted, ';');
        out += '\n';
    }
    return out;
}

nlohmann::json sweep_json(const std::vector<SweepRow>& rows) {
    nlohmann::json out = nlohmann::json::array();
    for (const SweepRow& row : rows) {
        out.push_back({{"gamma", row.gamma},
                       {"n_nodes", row.n_nodes},
                       {"mean_rounds", row.mean_rounds},
                       {"mean_fidelity", row.mean_fidelity},
                       {"t_f", row.t_f},
                       {"strategy", row.shifted}});
    }
    return out;
}

nlohmann::json freeze_json(const std::vector<FreezePair>& pairs) {
    nlohmann::json out = nlohmann::json::array();
    for (const FreezePair& p : pairs) {
        out.push_back({{"gamma_a", p.gamma_a},
                       {"gamma_b", p.gamma_b},
                       {"frozen", p.frozen},
                       {"match_fraction", p.match_fraction},
                       {"regime_a", p.regime_a},
                       {"regime_b", p.regime_b}});
    }
    return out;
}

nlohmann::json trace_json(const ScheduleTrace& trace) {
    nlohmann::json slots = nlohmann::json::array();
    auto grid = trace.action_grid();
    for (int t = 1; t <= trace.t_f; ++t) {
        nlohmann::json actions = nlohmann::json::array();
        for (int v = 1; v <= trace.n_nodes; ++v) {
            const NodeAction& action = grid[static_cast<std::size_t>(t)][static_cast<std::size_t>(v)];
            if (action.kind == ActionKind::idle) continue;
            actions.push_back({{"node", v},
                               {"kind", kind_name(action.kind)},
                               {"pair", {action.node_a, action.node_b}}});
        }
        slots.push_back({{"slot", t}, {"actions", actions}});
    }
    nlohmann::json pairs = nlohmann::json::array();
    for (const NumerologyEntry& entry : numerology(trace)) {
        pairs.push_back({{"pair", {entry.node_a, entry.node_b}},
                         {"rounds", entry.rounds},
                         {"created", entry.first_slot},
                         {"consumed", entry.last_slot}});
    }
    return {{"n_nodes", trace.n_nodes}, {"t_f", trace.t_f}, {"slots", slots},
            {"pairs", pairs}};
}

nlohmann::json outcome_json(const Outcome& outcome) {
    return {{"e2e_fidelity", outcome.e2e_fidelity},
            {"t_f", outcome.t_f},
            {"success_probability", outcome.success_probability},
            {"peak_memory", outcome.peak_memory},
            {"purify_noops", outcome.purify_noops}};
}

nlohmann::json check_json(const CheckResult& result) {
    return {{"memory_ok", result.memory_ok},
            {"time_ok", result.time_ok},
            {"fidelity_ok", result.fidelity_ok},
            {"feasible", result.feasible}};
}

}  // namespace purechain
