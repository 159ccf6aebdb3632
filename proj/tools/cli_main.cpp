#include <purechain/purechain.h>

#include <charconv>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <system_error>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

namespace {

using nlohmann::json;

struct Options {
    int n = 3;
    int n_start = 3;
    int n_goal = 200;
    int n_max = 8;
    int iterations = 20;
    double gamma = 0.0;
    std::string gammas;
    double kappa = 1.0;
    double slot_ms = 1.0;
    std::string fidelities;
    std::string fid_range = "0.75,0.99";
    double p_swap = 1.0;
    double p_purify = 1.0;
    double link_lambda = 0.0;
    double link_length = 1.0;
    int link_attempts = 1;
    int m_max = 2;
    int t_hat = 0;
    double f_hat = 0.0;
    uint64_t seed = 0;
    uint64_t budget_cap = 100000000ULL;
    int workers = 1;
    std::string strategy;
    std::string schedule = "jit";
    std::string format;
    std::string output;
    std::string config_path;
    bool trace = false;
    bool shifted = false;
};

struct Binder {
    CLI::Option* opt = nullptr;
    std::function<bool(const json&)> apply;
};

using FlagTable = std::map<std::string, Binder>;

struct StringFree {
    void operator()(char* text) const { pchain_string_free(text); }
};
using CString = std::unique_ptr<char, StringFree>;

struct PathFree {
    void operator()(pchain_path* p) const { pchain_path_free(p); }
};
using PathHandle = std::unique_ptr<pchain_path, PathFree>;

struct ConfigFree {
    void operator()(pchain_config* c) const { pchain_config_free(c); }
};
using ConfigHandle = std::unique_ptr<pchain_config, ConfigFree>;

struct OutcomeFree {
    void operator()(pchain_outcome* o) const { pchain_outcome_free(o); }
};
using OutcomeHandle = std::unique_ptr<pchain_outcome, OutcomeFree>;

struct RankingFree {
    void operator()(pchain_ranking* r) const { pchain_ranking_free(r); }
};
using RankingHandle = std::unique_ptr<pchain_ranking, RankingFree>;

struct DpFree {
    void operator()(pchain_dp_result* r) const { pchain_dp_result_free(r); }
};
using DpHandle = std::unique_ptr<pchain_dp_result, DpFree>;

struct SweepFree {
    void operator()(pchain_sweep* s) const { pchain_sweep_free(s); }
};
using SweepHandle = std::unique_ptr<pchain_sweep, SweepFree>;

int usage_error(const std::string& message) {
    std::cerr << "error: " << message << "\n";
    return 1;
}

int api_error(pchain_status status) {
    std::cerr << "error: " << pchain_last_error() << "\n";
    return status == PCHAIN_ERROR_BUDGET ? 2 : 1;
}

#define CLI_TRY(expr)                                     \
    do {                                                  \
        pchain_status cli_try_status_ = (expr);           \
        if (cli_try_status_ != PCHAIN_OK) {               \
            return api_error(cli_try_status_);            \
        }                                                 \
    } while (0)

std::string format_double(double value) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc()) return "nan";
    return std::string(buf, ptr);
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

std::optional<std::vector<double>> parse_double_list(const std::string& text) {
    std::vector<double> out;
    for (const std::string& token : split(text, ',')) {
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
        if (ec != std::errc() || ptr != token.data() + token.size()) return std::nullopt;
        out.push_back(value);
    }
    return out;
}

std::optional<std::vector<int>> parse_int_list(const std::string& text) {
    std::vector<int> out;
    for (const std::string& token : split(text, ',')) {
        int value = 0;
        auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
        if (ec != std::errc() || ptr != token.data() + token.size()) return std::nullopt;
        out.push_back(value);
    }
    return out;
}

std::string join_number_array(const json& value) {
    std::string out;
    for (const auto& item : value) {
        if (!out.empty()) out += ",";
        out += item.dump();
    }
    return out;
}

bool assign_json(const json& value, int& var) {
    if (!value.is_number_integer()) return false;
    var = value.get<int>();
    return true;
}

bool assign_json(const json& value, uint64_t& var) {
    if (!value.is_number_integer() && !value.is_number_unsigned()) return false;
    var = value.get<uint64_t>();
    return true;
}

bool assign_json(const json& value, double& var) {
    if (!value.is_number()) return false;
    var = value.get<double>();
    return true;
}

bool assign_json(const json& value, bool& var) {
    if (!value.is_boolean()) return false;
    var = value.get<bool>();
    return true;
}

bool assign_json(const json& value, std::string& var) {
    if (value.is_string()) {
        var = value.get<std::string>();
        return true;
    }
    if (value.is_number()) {
        var = value.dump();
        return true;
    }
    if (value.is_array()) {
        for (const auto& item : value) {
            if (!item.is_number()) return false;
        }
        var = join_number_array(value);
        return true;
    }
    return false;
}

template <typename T>
CLI::Option* bind_option(CLI::App* sub, FlagTable& table, const std::string& flag,
                         T& var, const std::string& desc) {
    Binder binder;
    binder.opt = sub->add_option(flag, var, desc);
    binder.apply = [&var](const json& value) { return assign_json(value, var); };
    table[flag.substr(2)] = binder;
    return binder.opt;
}

void bind_flag(CLI::App* sub, FlagTable& table, const std::string& flag, bool& var,
               const std::string& desc) {
    Binder binder;
    binder.opt = sub->add_flag(flag, var, desc);
    binder.apply = [&var](const json& value) { return assign_json(value, var); };
    table[flag.substr(2)] = binder;
}

// Values from a config file fill in flags the command line left untouched.
int apply_config_file(const Options& opts, FlagTable& table,
                      std::set<std::string>& given) {
    for (const auto& [name, binder] : table) {
        if (binder.opt->count() > 0) given.insert(name);
    }
    if (opts.config_path.empty()) return 0;
    std::ifstream in(opts.config_path);
    if (!in) return usage_error("cannot open config file " + opts.config_path);
    json config = json::parse(in, nullptr, false);
    if (config.is_discarded() || !config.is_object()) {
        return usage_error("config file " + opts.config_path +
                           " must hold a flat json object");
    }
    for (const auto& [key, value] : config.items()) {
        if (key == "config") return usage_error("config files cannot nest 'config'");
        auto it = table.find(key);
        if (it == table.end()) {
            return usage_error("config key '" + key +
                               "' does not match any --" + key + " option");
        }
        if (given.count(key) > 0) continue;
        if (!it->second.apply(value)) {
            return usage_error("config key '" + key + "' holds an unusable value: " +
                               value.dump());
        }
        given.insert(key);
    }
    return 0;
}

std::string echo_value(const json& value) {
    if (value.is_string()) return value.get<std::string>();
    if (value.is_array()) return join_number_array(value);
    return value.dump();
}

std::string csv_header(const json& echo) {
    std::string out;
    for (const auto& [key, value] : echo.items()) {
        out += "# " + key + "=" + echo_value(value) + "\n";
    }
    return out;
}

int emit(const Options& opts, const std::string& text) {
    if (opts.output.empty()) {
        std::cout << text;
        return 0;
    }
    std::ofstream out(opts.output, std::ios::binary);
    if (!out) return usage_error("cannot write output file " + opts.output);
    out << text;
    out.close();
    return out.good() ? 0 : usage_error("failed writing " + opts.output);
}

json base_echo(const Options& opts, const std::set<std::string>& given) {
    json echo = json::object();
    echo["kappa"] = opts.kappa;
    echo["slot-ms"] = opts.slot_ms;
    echo["p-swap"] = opts.p_swap;
    echo["p-purify"] = opts.p_purify;
    echo["m-max"] = opts.m_max;
    echo["schedule"] = opts.schedule;
    echo["format"] = opts.format;
    if (given.count("link-lambda") > 0) {
        echo["link-lambda"] = opts.link_lambda;
        echo["link-length"] = opts.link_length;
        echo["link-attempts"] = opts.link_attempts;
    }
    return echo;
}

int build_path(const Options& opts, const std::set<std::string>& given, int n_nodes,
               const std::vector<double>* fidelities, PathHandle& out) {
    out.reset(pchain_path_new(n_nodes));
    if (!out) return api_error(PCHAIN_ERROR_INVALID_ARGUMENT);
    CLI_TRY(pchain_path_set_decoherence(out.get(), opts.gamma, opts.kappa,
                                        opts.slot_ms / 1000.0));
    CLI_TRY(pchain_path_set_operations(out.get(), opts.p_swap, opts.p_purify));
    CLI_TRY(pchain_path_set_memory_capacity(out.get(), opts.m_max));
    CLI_TRY(pchain_path_set_eager(out.get(), opts.schedule == "eager" ? 1 : 0));
    if (given.count("link-lambda") > 0) {
        std::vector<double> atten(static_cast<size_t>(n_nodes) - 1, opts.link_lambda);
        std::vector<double> length(static_cast<size_t>(n_nodes) - 1, opts.link_length);
        std::vector<int> attempts(static_cast<size_t>(n_nodes) - 1, opts.link_attempts);
        CLI_TRY(pchain_path_set_links(out.get(), atten.data(), length.data(),
                                      attempts.data(), atten.size()));
    }
    if (fidelities != nullptr) {
        CLI_TRY(pchain_path_set_fidelities(out.get(), fidelities->data(),
                                           fidelities->size()));
    }
    return 0;
}

int build_config(const Options& opts, const std::vector<double>& fid_range,
                 ConfigHandle& out) {
    out.reset(pchain_config_new());
    if (!out) return api_error(PCHAIN_ERROR_INTERNAL);
    CLI_TRY(pchain_config_set_iterations(out.get(), opts.iterations));
    CLI_TRY(pchain_config_set_fidelity_range(out.get(), fid_range[0], fid_range[1]));
    CLI_TRY(pchain_config_set_seed(out.get(), opts.seed));
    CLI_TRY(pchain_config_set_n_max(out.get(), opts.n_max));
    CLI_TRY(pchain_config_set_budget_cap(out.get(), opts.budget_cap));
    CLI_TRY(pchain_config_set_workers(out.get(), opts.workers));
    return 0;
}

int outcome_csv_row(const pchain_outcome* outcome, int n_nodes, std::string& out) {
    out += format_double(pchain_outcome_e2e_fidelity(outcome));
    out += "," + std::to_string(pchain_outcome_final_slot(outcome));
    out += "," + format_double(pchain_outcome_success_probability(outcome));
    out += ",";
    for (int node = 1; node <= n_nodes; ++node) {
        int peak = 0;
        CLI_TRY(pchain_outcome_peak_memory(outcome, node, &peak));
        if (node > 1) out += ";";
        out += std::to_string(peak);
    }
    out += "," + std::to_string(pchain_outcome_purify_noops(outcome));
    return 0;
}

int parse_json_string(CString text, json& out) {
    if (!text) return api_error(PCHAIN_ERROR_INTERNAL);
    out = json::parse(text.get(), nullptr, false);
    if (out.is_discarded()) return usage_error("library returned malformed json");
    return 0;
}

// simulate and check share the fixed-fidelity single run.
int run_single(const Options& opts, const std::set<std::string>& given, bool check) {
    if (given.count("n") == 0) return usage_error("provide --n (number of nodes)");
    if (given.count("fidelities") == 0) {
        return usage_error("provide --fidelities; this mode runs one deterministic "
                           "simulation (sampling lives in brute-force/dp/sweep/freeze)");
    }
    if (given.count("strategy") == 0) {
        return usage_error("provide --strategy as comma-joined rounds");
    }
    if (check && (given.count("t-hat") == 0 || given.count("f-hat") == 0)) {
        return usage_error("check needs both --t-hat and --f-hat");
    }
    if (opts.trace && opts.format != "json") {
        return usage_error("--trace output is json; drop --format csv");
    }
    auto fidelities = parse_double_list(opts.fidelities);
    if (!fidelities) return usage_error("--fidelities must be comma-joined numbers");
    auto strategy = parse_int_list(opts.strategy);
    if (!strategy) return usage_error("--strategy must be comma-joined integers");

    PathHandle path;
    if (int rc = build_path(opts, given, opts.n, &*fidelities, path); rc != 0) return rc;
    pchain_outcome* raw = nullptr;
    CLI_TRY(pchain_simulate(path.get(), strategy->data(), strategy->size(), &raw));
    OutcomeHandle outcome(raw);

    int memory_ok = 0, time_ok = 0, fidelity_ok = 0, feasible = 0;
    if (check) {
        CLI_TRY(pchain_check_request(outcome.get(), path.get(), opts.t_hat, opts.f_hat,
                                     &memory_ok, &time_ok, &fidelity_ok, &feasible));
    }

    json echo = base_echo(opts, given);
    echo["n"] = opts.n;
    echo["gamma"] = opts.gamma;
    echo["fidelities"] = *fidelities;
    echo["strategy"] = *strategy;
    if (check) {
        echo["t-hat"] = opts.t_hat;
        echo["f-hat"] = opts.f_hat;
    } else {
        echo["trace"] = opts.trace;
    }

    if (opts.format == "json") {
        json root;
        root["config"] = echo;
        if (int rc = parse_json_string(CString(pchain_outcome_json(outcome.get())),
                                       root["outcome"]);
            rc != 0) {
            return rc;
        }
        if (opts.trace) {
            if (int rc = parse_json_string(
                    CString(pchain_outcome_trace_json(outcome.get())), root["trace"]);
                rc != 0) {
                return rc;
            }
        }
        if (check) {
            root["check"] = {{"memory_ok", memory_ok != 0},
                             {"time_ok", time_ok != 0},
                             {"fidelity_ok", fidelity_ok != 0},
                             {"feasible", feasible != 0}};
        }
        return emit(opts, root.dump(2) + "\n");
    }

    std::string text = csv_header(echo);
    text += "e2e_fidelity,t_f,success_probability,peak_memory,purify_noops";
    if (check) text += ",memory_ok,time_ok,fidelity_ok,feasible";
    text += "\n";
    if (int rc = outcome_csv_row(outcome.get(), opts.n, text); rc != 0) return rc;
    if (check) {
        text += memory_ok != 0 ? ",true" : ",false";
        text += time_ok != 0 ? ",true" : ",false";
        text += fidelity_ok != 0 ? ",true" : ",false";
        text += feasible != 0 ? ",true" : ",false";
    }
    text += "\n";
    return emit(opts, text);
}

int resolve_sampling(const Options& opts, const std::set<std::string>& given,
                     bool allow_fixed, bool require_seed,
                     std::optional<std::vector<double>>& fidelities,
                     std::vector<double>& fid_range) {
    if (given.count("fidelities") > 0) {
        if (!allow_fixed) {
            return usage_error("this mode samples fidelities; use --fid-range, "
                               "not --fidelities");
        }
        if (given.count("fid-range") > 0) {
            return usage_error("--fidelities and --fid-range are mutually exclusive");
        }
        fidelities = parse_double_list(opts.fidelities);
        if (!fidelities) return usage_error("--fidelities must be comma-joined numbers");
        return 0;
    }
    auto range = parse_double_list(opts.fid_range);
    if (!range || range->size() != 2) {
        return usage_error("--fid-range must be low,high");
    }
    fid_range = *range;
    if (require_seed && given.count("seed") == 0) {
        return usage_error("sampling needs an explicit --seed (use --seed 0 for the "
                           "default stream)");
    }
    return 0;
}

int run_brute(const Options& opts, const std::set<std::string>& given) {
    if (given.count("n") == 0) return usage_error("provide --n (number of nodes)");
    if (given.count("t-hat") != given.count("f-hat")) {
        return usage_error("selection needs both --t-hat and --f-hat");
    }
    std::optional<std::vector<double>> fidelities;
    std::vector<double> fid_range = {0.75, 0.99};
    if (int rc = resolve_sampling(opts, given, true, false, fidelities, fid_range);
        rc != 0) {
        return rc;
    }

    PathHandle path;
    if (int rc = build_path(opts, given, opts.n,
                            fidelities ? &*fidelities : nullptr, path);
        rc != 0) {
        return rc;
    }
    ConfigHandle config;
    if (int rc = build_config(opts, fid_range, config); rc != 0) return rc;

    pchain_ranking* raw = nullptr;
    CLI_TRY(pchain_brute_force(path.get(), config.get(), &raw));
    RankingHandle ranking(raw);
    if (given.count("t-hat") > 0) {
        int64_t selected = -1;
        CLI_TRY(pchain_ranking_select_best(ranking.get(), path.get(), opts.t_hat,
                                           opts.f_hat, &selected));
    }

    json echo = base_echo(opts, given);
    echo["n"] = opts.n;
    echo["gamma"] = opts.gamma;
    echo["n-max"] = opts.n_max;
    echo["iterations"] = opts.iterations;
    echo["budget-cap"] = opts.budget_cap;
    echo["shifted"] = opts.shifted;
    if (fidelities) {
        echo["fidelities"] = *fidelities;
    } else {
        echo["fid-range"] = fid_range;
        echo["seed"] = opts.seed;
    }
    if (given.count("t-hat") > 0) {
        echo["t-hat"] = opts.t_hat;
        echo["f-hat"] = opts.f_hat;
    }

    if (opts.format == "json") {
        json root;
        root["config"] = echo;
        if (int rc = parse_json_string(
                CString(pchain_ranking_json(ranking.get(), opts.shifted ? 1 : 0)),
                root["rows"]);
            rc != 0) {
            return rc;
        }
        return emit(opts, root.dump(2) + "\n");
    }
    CString csv(pchain_ranking_csv(ranking.get(), opts.shifted ? 1 : 0));
    if (!csv) return api_error(PCHAIN_ERROR_INTERNAL);
    return emit(opts, csv_header(echo) + csv.get());
}

int run_dp(const Options& opts, const std::set<std::string>& given) {
    std::optional<std::vector<double>> fidelities;
    std::vector<double> fid_range = {0.75, 0.99};
    if (int rc = resolve_sampling(opts, given, false, true, fidelities, fid_range);
        rc != 0) {
        return rc;
    }
    PathHandle path;
    if (int rc = build_path(opts, given, std::max(opts.n_goal, 3), nullptr, path);
        rc != 0) {
        return rc;
    }
    ConfigHandle config;
    if (int rc = build_config(opts, fid_range, config); rc != 0) return rc;

    pchain_dp_result* raw = nullptr;
    CLI_TRY(pchain_dp(path.get(), config.get(), opts.n_start, opts.n_goal, &raw));
    DpHandle result(raw);

    json echo = base_echo(opts, given);
    echo["n-start"] = opts.n_start;
    echo["n-goal"] = opts.n_goal;
    echo["gamma"] = opts.gamma;
    echo["n-max"] = opts.n_max;
    echo["iterations"] = opts.iterations;
    echo["budget-cap"] = opts.budget_cap;
    echo["shifted"] = opts.shifted;
    echo["fid-range"] = fid_range;
    echo["seed"] = opts.seed;

    if (opts.format == "json") {
        json root;
        root["config"] = echo;
        if (int rc = parse_json_string(
                CString(pchain_dp_result_json(result.get(), opts.shifted ? 1 : 0)),
                root["steps"]);
            rc != 0) {
            return rc;
        }
        return emit(opts, root.dump(2) + "\n");
    }
    CString csv(pchain_dp_result_csv(result.get(), opts.shifted ? 1 : 0));
    if (!csv) return api_error(PCHAIN_ERROR_INTERNAL);
    return emit(opts, csv_header(echo) + csv.get());
}

int run_sweep(const Options& opts, const std::set<std::string>& given, bool freeze) {
    if (given.count("gammas") == 0) {
        return usage_error("provide --gammas as comma-joined rates");
    }
    auto gammas = parse_double_list(opts.gammas);
    if (!gammas || gammas->empty()) {
        return usage_error("--gammas must be comma-joined numbers");
    }
    std::optional<std::vector<double>> fidelities;
    std::vector<double> fid_range = {0.75, 0.99};
    if (int rc = resolve_sampling(opts, given, false, true, fidelities, fid_range);
        rc != 0) {
        return rc;
    }
    if (freeze && opts.format != "json") {
        return usage_error("freeze reports are json; drop --format csv");
    }

    PathHandle path;
    if (int rc = build_path(opts, given, std::max(opts.n_goal, 3), nullptr, path);
        rc != 0) {
        return rc;
    }
    ConfigHandle config;
    if (int rc = build_config(opts, fid_range, config); rc != 0) return rc;

    json echo = base_echo(opts, given);
    echo["gammas"] = *gammas;
    echo["n-start"] = opts.n_start;
    echo["n-goal"] = opts.n_goal;
    echo["n-max"] = opts.n_max;
    echo["iterations"] = opts.iterations;
    echo["budget-cap"] = opts.budget_cap;
    echo["fid-range"] = fid_range;
    echo["seed"] = opts.seed;

    if (freeze) {
        char* raw = nullptr;
        CLI_TRY(pchain_detect_freeze(path.get(), config.get(), gammas->data(),
                                     gammas->size(), opts.n_start, opts.n_goal, &raw));
        json root;
        root["config"] = echo;
        if (int rc = parse_json_string(CString(raw), root["pairs"]); rc != 0) return rc;
        return emit(opts, root.dump(2) + "\n");
    }

    pchain_sweep* raw = nullptr;
    CLI_TRY(pchain_sweep_run(path.get(), config.get(), gammas->data(), gammas->size(),
                             opts.n_start, opts.n_goal, &raw));
    SweepHandle sweep(raw);
    if (opts.format == "json") {
        json root;
        root["config"] = echo;
        if (int rc = parse_json_string(CString(pchain_sweep_json(sweep.get())),
                                       root["rows"]);
            rc != 0) {
            return rc;
        }
        return emit(opts, root.dump(2) + "\n");
    }
    CString csv(pchain_sweep_csv(sweep.get()));
    if (!csv) return api_error(PCHAIN_ERROR_INTERNAL);
    return emit(opts, csv_header(echo) + csv.get());
}

void bind_physics(CLI::App* sub, FlagTable& table, Options& opts) {
    bind_option(sub, table, "--gamma", opts.gamma, "decoherence rate, 1/s");
    bind_option(sub, table, "--kappa", opts.kappa, "decoherence shape exponent");
    bind_option(sub, table, "--slot-ms", opts.slot_ms, "time slot length, ms");
    bind_option(sub, table, "--p-swap", opts.p_swap, "swap success probability");
    bind_option(sub, table, "--p-purify", opts.p_purify,
                "purification success probability");
    bind_option(sub, table, "--link-lambda", opts.link_lambda,
                "fiber attenuation per km (enables the link model)");
    bind_option(sub, table, "--link-length", opts.link_length, "link length, km");
    bind_option(sub, table, "--link-attempts", opts.link_attempts,
                "entanglement attempts per link");
    bind_option(sub, table, "--m-max", opts.m_max, "memory capacity per node, qubits");
    bind_option(sub, table, "--schedule", opts.schedule, "placement mode")
        ->check(CLI::IsMember({"jit", "eager"}));
}

void bind_search(CLI::App* sub, FlagTable& table, Options& opts) {
    bind_option(sub, table, "--n-max", opts.n_max, "max purification rounds per pair");
    bind_option(sub, table, "--iterations", opts.iterations,
                "sampling iterations per strategy");
    bind_option(sub, table, "--fid-range", opts.fid_range,
                "sampled initial fidelity range low,high");
    bind_option(sub, table, "--seed", opts.seed, "master seed for fidelity sampling");
    bind_option(sub, table, "--workers", opts.workers, "parallel evaluation width");
    bind_option(sub, table, "--budget-cap", opts.budget_cap,
                "max strategy evaluations before refusing");
}

void bind_output(CLI::App* sub, FlagTable& table, Options& opts) {
    bind_option(sub, table, "--format", opts.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    bind_option(sub, table, "--output", opts.output, "write to file instead of stdout");
    bind_option(sub, table, "--config", opts.config_path,
                "json file with defaults keyed by long flag names");
}

std::string default_format(const std::string& subcommand) {
    if (subcommand == "simulate" || subcommand == "check" || subcommand == "freeze") {
        return "json";
    }
    return "csv";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"purification strategy tools for quantum repeater chains"};
    app.require_subcommand(1);

    Options opts;
    std::map<std::string, FlagTable> tables;

    CLI::App* simulate = app.add_subcommand(
        "simulate", "run one strategy on a fixed chain and print the outcome");
    {
        FlagTable& t = tables["simulate"];
        bind_option(simulate, t, "--n", opts.n, "number of nodes");
        bind_option(simulate, t, "--fidelities", opts.fidelities,
                    "initial pair fidelities, comma-joined");
        bind_option(simulate, t, "--strategy", opts.strategy,
                    "purification rounds, canonical order, comma-joined");
        bind_physics(simulate, t, opts);
        bind_flag(simulate, t, "--trace", opts.trace, "include the slot-by-slot trace");
        bind_output(simulate, t, opts);
    }

    CLI::App* check = app.add_subcommand(
        "check", "test one strategy against time/fidelity/memory thresholds");
    {
        FlagTable& t = tables["check"];
        bind_option(check, t, "--n", opts.n, "number of nodes");
        bind_option(check, t, "--fidelities", opts.fidelities,
                    "initial pair fidelities, comma-joined");
        bind_option(check, t, "--strategy", opts.strategy,
                    "purification rounds, canonical order, comma-joined");
        bind_option(check, t, "--t-hat", opts.t_hat, "max acceptable final slot");
        bind_option(check, t, "--f-hat", opts.f_hat, "min acceptable e2e fidelity");
        bind_physics(check, t, opts);
        bind_output(check, t, opts);
    }

    CLI::App* brute = app.add_subcommand(
        "brute-force", "rank every strategy up to n-max rounds per pair");
    {
        FlagTable& t = tables["brute-force"];
        bind_option(brute, t, "--n", opts.n, "number of nodes");
        bind_option(brute, t, "--fidelities", opts.fidelities,
                    "fixed initial fidelities (skips sampling)");
        bind_option(brute, t, "--t-hat", opts.t_hat, "max acceptable final slot");
        bind_option(brute, t, "--f-hat", opts.f_hat, "min acceptable e2e fidelity");
        bind_physics(brute, t, opts);
        bind_search(brute, t, opts);
        bind_flag(brute, t, "--shifted", opts.shifted, "emit shifted strategy order");
        bind_output(brute, t, opts);
    }

    CLI::App* dp = app.add_subcommand(
        "dp", "grow the chain node by node, extending the best strategy");
    {
        FlagTable& t = tables["dp"];
        bind_option(dp, t, "--n-start", opts.n_start, "first chain length");
        bind_option(dp, t, "--n-goal", opts.n_goal, "final chain length");
        bind_physics(dp, t, opts);
        bind_search(dp, t, opts);
        bind_flag(dp, t, "--shifted", opts.shifted, "emit shifted strategy order");
        bind_output(dp, t, opts);
    }

    CLI::App* sweep = app.add_subcommand(
        "sweep", "optimal strategies across a grid of decay rates");
    {
        FlagTable& t = tables["sweep"];
        bind_option(sweep, t, "--gammas", opts.gammas,
                    "decoherence rates, comma-joined");
        bind_option(sweep, t, "--n-start", opts.n_start, "first chain length");
        bind_option(sweep, t, "--n-goal", opts.n_goal, "final chain length");
        bind_physics(sweep, t, opts);
        bind_search(sweep, t, opts);
        bind_output(sweep, t, opts);
    }

    CLI::App* freeze = app.add_subcommand(
        "freeze", "report whether adjacent decay rates pick identical strategies");
    {
        FlagTable& t = tables["freeze"];
        bind_option(freeze, t, "--gammas", opts.gammas,
                    "decoherence rates, comma-joined");
        bind_option(freeze, t, "--n-start", opts.n_start, "first chain length");
        bind_option(freeze, t, "--n-goal", opts.n_goal, "final chain length");
        bind_physics(freeze, t, opts);
        bind_search(freeze, t, opts);
        bind_output(freeze, t, opts);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    CLI::App* active = app.get_subcommands().front();
    FlagTable& table = tables[active->get_name()];
    std::set<std::string> given;
    if (int rc = apply_config_file(opts, table, given); rc != 0) return rc;
    if (opts.format.empty()) opts.format = default_format(active->get_name());
    if (opts.format != "csv" && opts.format != "json") {
        return usage_error("--format must be csv or json");
    }
    if (opts.schedule != "jit" && opts.schedule != "eager") {
        return usage_error("--schedule must be jit or eager");
    }

    try {
        if (active == simulate) return run_single(opts, given, false);
        if (active == check) return run_single(opts, given, true);
        if (active == brute) return run_brute(opts, given);
        if (active == dp) return run_dp(opts, given);
        if (active == sweep) return run_sweep(opts, given, false);
        return run_sweep(opts, given, true);
    } catch (const std::exception& e) {
        return usage_error(e.what());
    }
}
