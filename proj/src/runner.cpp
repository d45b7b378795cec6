#include "rancn/runner.hpp"

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "rancn/errors.hpp"
#include "rancn/rng.hpp"
#include "rancn/strutil.hpp"

namespace rancn::exp {

namespace fs = std::filesystem;

std::vector<std::string> default_script() {
    return {
        "Thought: Reserving RAN headroom for the loaded slice first.\n"
        "Action: Apply[ApplyPolicy[PRB_reservation += 10%]]",
        "Thought: Adding core capacity to relieve the transport bottleneck.\n"
        "Action: Apply[ApplyPolicy[Core_Bandwidth += 1 Gbps]]",
        "Thought: Both adjustments are in; closing the loop.\n"
        "Action: Finish[applied the planned directives]",
    };
}

agent::ReasonerFn make_reasoner(const ExperimentConfig& config, const std::string& kind) {
    if (kind == "scripted") {
        auto scripted = std::make_shared<reasoners::ScriptedReasoner>(default_script());
        return [scripted](const std::string& ctx) { return (*scripted)(ctx); };
    }
    if (kind == "heuristic") {
        auto heuristic = std::make_shared<reasoners::HeuristicReasoner>(config.heuristic);
        return [heuristic](const std::string& ctx) { return (*heuristic)(ctx); };
    }
    if (kind == "external") {
        reasoners::ExternalReasonerConfig ext = config.external;
        if (ext.endpoint.empty()) {
            if (const char* env = std::getenv("SLICESIM_REASONER_ENDPOINT")) ext.endpoint = env;
        }
        if (ext.endpoint.empty()) {
            throw ConfigError(
                "external reasoner needs `external.endpoint` or SLICESIM_REASONER_ENDPOINT");
        }
        auto external = std::make_shared<reasoners::ExternalReasoner>(ext);
        return [external](const std::string& ctx) { return (*external)(ctx); };
    }
    throw ConfigError("unknown reasoner kind: " + kind);
}

namespace {

std::string scenario_id_for(int n_users, std::uint64_t seed) {
    std::ostringstream out;
    out << "n" << n_users << "-seed" << seed;
    return out.str();
}

nlohmann::json base_record(const ExperimentConfig& config, const RunOutput& out,
                           const slicing::SlaReport& report) {
    nlohmann::json j;
    char digest[24];
    std::snprintf(digest, sizeof(digest), "%016llx",
                  static_cast<unsigned long long>(config.digest()));
    j["config_digest"] = digest;
    j["scenario_id"] = out.scenario_id;
    j["controller"] = out.controller;
    j["seed"] = out.seed;
    j["n_users"] = out.n_users;
    j["satisfied_total"] = out.satisfied_total;
    j["admitted_total"] = out.admitted_total;
    j["ratio"] = out.ratio;
    j["runtime_ms"] = out.runtime_ms;  // wall clock; excluded from reproducibility
    j["flags"] = out.flags;
    j["report"]["tick"] = report.tick;
    j["report"]["satisfied_by_slice"] = report.satisfied_by_slice;
    j["report"]["violations"] = report.violations.size();
    j["artifacts"]["sla"] = "sla-" + out.artifact_stem + ".jsonl";
    if (!out.trace_jsonl.empty()) j["artifacts"]["trace"] = "trace-" + out.artifact_stem + ".jsonl";
    if (!out.audit_jsonl.empty()) j["artifacts"]["audit"] = "audit-" + out.artifact_stem + ".jsonl";
    if (!out.metrics_csv.empty()) j["artifacts"]["metrics"] = "metrics-" + out.artifact_stem + ".csv";
    return j;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << content;
}

}  // namespace

RunOutput execute_run(const ExperimentConfig& config, control::ControllerKind controller,
                      std::uint64_t seed, int n_users) {
    RunOutput out;
    out.scenario_id = scenario_id_for(n_users, seed);
    out.controller = control::to_string(controller);
    out.artifact_stem = out.controller + "-" + out.scenario_id;
    out.seed = seed;
    out.n_users = n_users;

    auto state = slicing::generate_scenario(n_users, config.mix_for(n_users), seed,
                                            config.scenario);

    slicing::SlaReport report;
    if (controller == control::ControllerKind::agent_driven) {
        monitor::MonitoringDb db;
        policy::Orchestrator orchestrator(config.constraints, state);
        agent::ExperienceStore experiences;
        control::AgentRunOptions options;
        options.episode_id = "ep-" + out.scenario_id;
        options.episode_budget = config.episode_budget;
        options.context_char_limit = static_cast<std::size_t>(config.context_char_limit);
        options.short_term_window = static_cast<std::size_t>(config.short_term_window);
        options.retrieve_top_k = static_cast<std::size_t>(config.retrieve_top_k);

        const auto reasoner = make_reasoner(config, config.reasoner);
        const auto outcome =
            control::run_agent_driven(state, db, orchestrator, experiences, reasoner, options);

        report = outcome.after;
        out.satisfied_total = outcome.after.satisfied_total;
        out.runtime_ms = outcome.result.runtime_ms;
        if (outcome.episode_aborted) out.flags.push_back("episode_aborted");
        if (outcome.reallocated) out.flags.push_back("reallocated");
        if (!outcome.trace.steps.empty() &&
            outcome.trace.steps.back().thought == reasoners::kReasonerUnavailable) {
            out.flags.push_back("reasoner_unavailable");
        }

        out.trace_jsonl = agent::trace_jsonl(outcome.trace, state.tick);
        std::ostringstream audit;
        for (const auto& rec : orchestrator.audit_log()) {
            audit << policy::dispatch_record_jsonl(rec) << '\n';
        }
        out.audit_jsonl = audit.str();
        out.sla_jsonl = slicing::sla_report_jsonl(outcome.before) + "\n" +
                        slicing::sla_report_jsonl(outcome.after) + "\n";
        out.metrics_csv = db.export_csv();
    } else {
        const auto result = control::run_controller(controller, state, config.oracle_cap);
        report = slicing::sla_report(state);
        out.satisfied_total = result.satisfied_total;
        out.runtime_ms = result.runtime_ms;
        out.sla_jsonl = slicing::sla_report_jsonl(report) + "\n";
    }

    out.admitted_total = state.admitted_count();
    // Ratio over the realized population (Poisson mode may differ from n_users).
    out.ratio = state.users.empty() ? 1.0
                                    : static_cast<double>(out.satisfied_total) /
                                          static_cast<double>(state.users.size());
    out.record_jsonl = base_record(config, out, report).dump() + "\n";
    return out;
}

int cmd_simulate(const ExperimentConfig& config) {
    fs::create_directories(config.output_dir);
    for (const auto controller : config.controllers) {
        for (const auto seed : config.seeds) {
            const RunOutput out = execute_run(config, controller, seed, config.n_users);
            const std::string& stem = out.artifact_stem;
            write_file(fs::path(config.output_dir) / ("run-" + stem + ".jsonl"),
                       out.record_jsonl);
            write_file(fs::path(config.output_dir) / ("sla-" + stem + ".jsonl"), out.sla_jsonl);
            if (!out.trace_jsonl.empty()) {
                write_file(fs::path(config.output_dir) / ("trace-" + stem + ".jsonl"),
                           out.trace_jsonl);
            }
            if (!out.audit_jsonl.empty()) {
                write_file(fs::path(config.output_dir) / ("audit-" + stem + ".jsonl"),
                           out.audit_jsonl);
            }
            if (!out.metrics_csv.empty()) {
                write_file(fs::path(config.output_dir) / ("metrics-" + stem + ".csv"),
                           out.metrics_csv);
            }
            std::printf("%s %s seed=%llu satisfied=%d/%d ratio=%.3f\n", out.controller.c_str(),
                        out.scenario_id.c_str(), static_cast<unsigned long long>(seed),
                        out.satisfied_total, out.n_users, out.ratio);
        }
    }
    return kExitOk;
}

int cmd_sweep(const ExperimentConfig& config) {
    if (config.user_sweep.empty()) {
        throw ConfigError("`scenario.user_sweep`: sweep needs a non-empty user list");
    }
    fs::create_directories(config.output_dir);

    struct Task {
        int n_users;
        control::ControllerKind controller;
        std::uint64_t seed;
    };
    std::vector<Task> tasks;
    for (const int n : config.user_sweep) {
        for (const auto controller : config.controllers) {
            for (const auto seed : config.seeds) tasks.push_back({n, controller, seed});
        }
    }

    std::vector<std::optional<RunOutput>> results(tasks.size());
    std::vector<std::string> errors(tasks.size());
    std::atomic<std::size_t> next{0};
    const int workers = std::max(1, std::min<int>(config.workers, static_cast<int>(tasks.size())));

    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) break;
            try {
                results[i] = execute_run(config, tasks[i].controller, tasks[i].seed,
                                         tasks[i].n_users);
            } catch (const std::exception& ex) {
                errors[i] = ex.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    std::ostringstream csv;
    csv << "n_users,controller,seed,satisfied_total,ratio\n";
    std::ostringstream records;
    std::ostringstream failures;
    int failed = 0;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        if (!results[i]) {
            ++failed;
            nlohmann::json j;
            j["n_users"] = tasks[i].n_users;
            j["controller"] = control::to_string(tasks[i].controller);
            j["seed"] = tasks[i].seed;
            j["error"] = errors[i];
            failures << j.dump() << '\n';
            continue;
        }
        const RunOutput& out = *results[i];
        csv << out.n_users << ',' << out.controller << ',' << out.seed << ','
            << out.satisfied_total << ',' << format_double(out.ratio) << '\n';
        records << out.record_jsonl;
    }
    write_file(fs::path(config.output_dir) / "summary.csv", csv.str());
    write_file(fs::path(config.output_dir) / "runs.jsonl", records.str());
    if (failed > 0) {
        write_file(fs::path(config.output_dir) / "failures.jsonl", failures.str());
        std::fprintf(stderr, "sweep finished with %d failed run(s); see failures.jsonl\n", failed);
        return kExitPartialFailure;
    }
    std::printf("sweep complete: %zu runs -> %s/summary.csv\n", tasks.size(),
                config.output_dir.c_str());
    return kExitOk;
}

int cmd_oracle_check(const ExperimentConfig& config, int max_users) {
    if (max_users < 1 || max_users > config.oracle_cap) {
        throw ConfigError("--max-users must be within [1," + std::to_string(config.oracle_cap) +
                          "], got " + std::to_string(max_users));
    }
    fs::create_directories(config.output_dir);

    const std::vector<control::ControllerKind> heuristics = {
        control::ControllerKind::round_robin,       control::ControllerKind::ran_only,
        control::ControllerKind::cn_only,           control::ControllerKind::domain_isolated_pair,
        control::ControllerKind::e2e_heuristic,
    };

    std::ostringstream log;
    int violations = 0;
    for (const auto seed : config.seeds) {
        auto oracle_state = slicing::generate_scenario(max_users, config.mix_for(max_users), seed,
                                                       config.scenario);
        const auto oracle = control::run_exact_oracle(oracle_state, config.oracle_cap);

        nlohmann::json j;
        j["seed"] = seed;
        j["n_users"] = max_users;
        j["oracle"] = oracle.satisfied_total;
        for (const auto kind : heuristics) {
            auto state = slicing::generate_scenario(max_users, config.mix_for(max_users), seed,
                                                    config.scenario);
            const auto result = control::run_controller(kind, state, config.oracle_cap);
            j[control::to_string(kind)] = result.satisfied_total;
            j["gap_" + control::to_string(kind)] = oracle.satisfied_total - result.satisfied_total;
            if (result.satisfied_total > oracle.satisfied_total) {
                ++violations;
                nlohmann::json counter;
                counter["seed"] = seed;
                counter["n_users"] = max_users;
                counter["controller"] = control::to_string(kind);
                counter["controller_satisfied"] = result.satisfied_total;
                counter["oracle_satisfied"] = oracle.satisfied_total;
                counter["config"] = config.canonical_text();
                write_file(fs::path(config.output_dir) /
                               ("counterexample-seed" + std::to_string(seed) + ".json"),
                           counter.dump(2));
            }
        }
        log << j.dump() << '\n';
    }
    write_file(fs::path(config.output_dir) / "oracle-check.jsonl", log.str());
    if (violations > 0) {
        std::fprintf(stderr, "oracle-check: %d soundness violation(s); counterexamples written\n",
                     violations);
        return kExitSoundnessViolation;
    }
    std::printf("oracle-check: %zu seeds at %d users, no soundness violations\n",
                config.seeds.size(), max_users);
    return kExitOk;
}

int cmd_agent_run(const ExperimentConfig& config) {
    ExperimentConfig agent_config = config;
    agent_config.controllers = {control::ControllerKind::agent_driven};
    return cmd_simulate(agent_config);
}

}  // namespace rancn::exp
