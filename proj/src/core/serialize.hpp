#pragma once

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "core/optimizer.hpp"
#include "core/schedule.hpp"
#include "core/sweep.hpp"

namespace purechain {

// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

std::string join_ints(std::span<const int> values, char separator);

// Columns: strategy,mean_fidelity,t_f,success_probability,feasible,selected
std::string ranking_csv(const std::vector<RankedResult>& ranking, bool shifted);
nlohmann::json ranking_json(const std::vector<RankedResult>& ranking, bool shifted);

// Columns: n_nodes,mean_fidelity,t_f,mean_rounds,strategy
std::string dp_csv(const DpResult& result, bool shifted);
nlohmann::json dp_json(const DpResult& result, bool shifted);

// Columns: gamma,n_nodes,mean_rounds,mean_fidelity,t_f,strategy
// Sweep rows always report the shifted form, which grows by suffix along N.
std::string sweep_csv(const std::vector<SweepRow>& rows);
nlohmann::json sweep_json(const std::vector<SweepRow>& rows);

nlohmann::json freeze_json(const std::vector<FreezePair>& pairs);

nlohmann::json trace_json(const ScheduleTrace& trace);
nlohmann::json outcome_json(const Outcome& outcome);
nlohmann::json check_json(const CheckResult& result);

}  // namespace purechain
