#include "rancn/reasoners.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <map>
#include <sstream>
#include <thread>

#include <json.hpp>

#define CPPHTTPLIB_NO_EXCEPTIONS
#include <httplib.h>

#include "rancn/strutil.hpp"

namespace rancn::reasoners {

std::string ScriptedReasoner::operator()(const std::string&) {
    if (calls_ >= script_.size()) {
        ++calls_;
        return "Action: Finish[script exhausted]";
    }
    return script_[calls_++];
}

namespace {

struct ParsedContext {
    std::map<std::string, std::string> kpis;      // key -> rendered value
    std::vector<std::string> recent_steps;
};

ParsedContext parse_context(const std::string& context) {
    ParsedContext out;
    std::istringstream in(context);
    std::string line;
    enum class Section { none, steps, kpis } section = Section::none;
    while (std::getline(in, line)) {
        if (starts_with(line, "RECENT STEPS")) {
            section = Section::steps;
            continue;
        }
        if (starts_with(line, "CURRENT KPIS")) {
            section = Section::kpis;
            continue;
        }
        if (starts_with(line, "OBJECTIVE") || starts_with(line, "TOOLS") ||
            starts_with(line, "RETRIEVED EXPERIENCE")) {
            section = Section::none;
            continue;
        }
        if (line.empty() || line == "(none)") continue;
        if (section == Section::steps) {
            out.recent_steps.push_back(line);
        } else if (section == Section::kpis) {
            const auto eq = line.rfind(" = ");
            if (eq != std::string::npos) {
                out.kpis[line.substr(0, eq)] = line.substr(eq + 3);
            }
        }
    }
    return out;
}

bool kpi_known(const ParsedContext& ctx, const std::string& prefix) {
    for (const auto& [key, value] : ctx.kpis) {
        if (starts_with(key, prefix)) return true;
    }
    return false;
}

bool already_queried(const ParsedContext& ctx, const std::string& metric) {
    for (const auto& step : ctx.recent_steps) {
        if (step.find("Query[GET " + metric) != std::string::npos) return true;
    }
    return false;
}

bool already_applied(const ParsedContext& ctx, const std::string& parameter) {
    for (const auto& step : ctx.recent_steps) {
        if (step.find("Apply[") != std::string::npos &&
            step.find(parameter) != std::string::npos) {
            return true;
        }
    }
    return false;
}

std::optional<double> kpi_value(const ParsedContext& ctx, const std::string& key) {
    auto it = ctx.kpis.find(key);
    if (it == ctx.kpis.end() || it->second == "(empty)" || it->second == "(no rows)") {
        return std::nullopt;
    }
    return std::strtod(it->second.c_str(), nullptr);
}

}  // namespace

HeuristicReasoner::Phase HeuristicReasoner::phase(const std::string& context) const {
    const ParsedContext ctx = parse_context(context);
    if (!kpi_known(ctx, "prb_utilization") && !already_queried(ctx, "prb_utilization")) {
        return Phase::observe_ran;
    }
    if ((!kpi_known(ctx, "upf_processing_delay") &&
         !already_queried(ctx, "upf_processing_delay")) ||
        (!kpi_known(ctx, "qos_violations") && !already_queried(ctx, "qos_violations"))) {
        return Phase::observe_cn;
    }
    return Phase::decide;
}

std::string HeuristicReasoner::operator()(const std::string& context) const {
    const ParsedContext ctx = parse_context(context);

    if (!kpi_known(ctx, "prb_utilization") && !already_queried(ctx, "prb_utilization")) {
        return "Thought: I need the current RAN load before deciding anything.\n"
               "Action: Query[GET prb_utilization AGG max]";
    }
    if (!kpi_known(ctx, "upf_processing_delay") &&
        !already_queried(ctx, "upf_processing_delay")) {
        return "Thought: Next I need the core-side processing delay.\n"
               "Action: Query[GET upf_processing_delay AGG last]";
    }
    if (!kpi_known(ctx, "qos_violations") && !already_queried(ctx, "qos_violations")) {
        return "Thought: Checking slice-level QoS violations to locate the pressure.\n"
               "Action: Query[GET qos_violations]";
    }

    // Decide phase. RAN rule first, then the CN rule, each applied at most once.
    const auto prb_max = kpi_value(ctx, "prb_utilization max");
    if (prb_max && *prb_max > config_.prb_hi_watermark &&
        !already_applied(ctx, "PRB_reservation")) {
        std::string worst_slice;
        double worst = -1;
        for (const auto& [key, value] : ctx.kpis) {
            if (!starts_with(key, "qos_violations{slice=")) continue;
            const auto end = key.find('}');
            const std::string slice = key.substr(21, end - 21);
            const double v = std::strtod(value.c_str(), nullptr);
            if (v > worst || (v == worst && slice < worst_slice)) {
                worst = v;
                worst_slice = slice;
            }
        }
        std::ostringstream out;
        out << "Thought: PRB utilization " << format_double(*prb_max) << " exceeds the "
            << format_double(config_.prb_hi_watermark) << " watermark";
        if (!worst_slice.empty()) out << "; slice " << worst_slice << " has the most violations";
        out << ".\nAction: Apply[ApplyPolicy[PRB_reservation";
        if (!worst_slice.empty()) out << ".slice=" << worst_slice;
        out << " += " << format_double(config_.prb_step_percent) << "%]]";
        return out.str();
    }

    const auto upf_delay = kpi_value(ctx, "upf_processing_delay last");
    if (upf_delay && *upf_delay > config_.latency_watermark_ms &&
        !already_applied(ctx, "Core_Bandwidth")) {
        std::ostringstream out;
        out << "Thought: UPF processing delay " << format_double(*upf_delay)
            << " ms exceeds the " << format_double(config_.latency_watermark_ms)
            << " ms watermark; adding core bandwidth.\n"
            << "Action: Apply[ApplyPolicy[Core_Bandwidth += "
            << format_double(config_.bandwidth_step_gbps) << " Gbps]]";
        return out.str();
    }

    return "Thought: Both domains are within their watermarks; no adjustment needed.\n"
           "Action: Finish[network healthy or directives already issued]";
}

const std::string& default_preamble() {
    static const std::string preamble =
        "You are the control agent for a RAN-CN network slicing testbed.\n"
        "Reply with exactly two lines:\n"
        "  Thought: <one sentence of reasoning>\n"
        "  Action: <one of the forms below>\n"
        "Action forms:\n"
        "  Query[GET <metric> [WHERE <label>=<value> [AND <label>=<value>]] "
        "[RANGE <t0> <t1>] [AGG last|mean|max|min|sum]]\n"
        "  Apply[ApplyPolicy[<parameter>[.<label>=<value>] <op> <number> <unit>]]\n"
        "  Retrieve[<search terms>]\n"
        "  Finish[<summary>]\n"
        "Parameters: PRB_reservation (%), Core_Bandwidth (Gbps|Mbps), CN_Compute (units), "
        "Admission_Cap (count). Operators: += -= =.\n"
        "Issue at most one action per reply. Finish when the network is healthy.\n";
    return preamble;
}

ExternalReasoner::ExternalReasoner(ExternalReasonerConfig config, Transport transport)
    : config_(std::move(config)), transport_(std::move(transport)) {
    if (!transport_) {
        transport_ = [this](const std::string& body) -> std::optional<std::string> {
            // Split endpoint into base URL and path.
            const auto scheme = config_.endpoint.find("://");
            const auto path_start =
                config_.endpoint.find('/', scheme == std::string::npos ? 0 : scheme + 3);
            const std::string base = path_start == std::string::npos
                                         ? config_.endpoint
                                         : config_.endpoint.substr(0, path_start);
            const std::string path =
                path_start == std::string::npos ? "/" : config_.endpoint.substr(path_start);

            httplib::Client client(base);
            client.set_connection_timeout(static_cast<time_t>(config_.timeout_s),
                                          static_cast<time_t>(std::fmod(config_.timeout_s, 1.0) * 1e6));
            client.set_read_timeout(static_cast<time_t>(config_.timeout_s), 0);
            if (const char* key = std::getenv(config_.api_key_env.c_str())) {
                client.set_default_headers({{"Authorization", std::string("Bearer ") + key}});
            }
            auto res = client.Post(path, body, "application/json");
            if (!res || res->status < 200 || res->status >= 300) return std::nullopt;
            return res->body;
        };
    }
}

std::string ExternalReasoner::build_request_body(const std::string& context) const {
    const std::string& preamble = config_.preamble.empty() ? default_preamble() : config_.preamble;
    std::string doc = context;
    const std::size_t overhead = preamble.size() + 512;
    if (doc.size() + overhead > config_.max_request_bytes) {
        const std::size_t keep =
            config_.max_request_bytes > overhead ? config_.max_request_bytes - overhead : 0;
        doc.resize(keep);
        doc += "\n[truncated]";
    }
    nlohmann::json body;
    body["model"] = config_.model;
    body["preamble"] = preamble;
    body["context"] = doc;
    body["temperature"] = config_.temperature;
    return body.dump();
}

std::string ExternalReasoner::operator()(const std::string& context) {
    const std::string body = build_request_body(context);
    double backoff_s = 0.1;
    for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
        ++attempts_;
        const auto response = transport_(body);
        if (response) {
            // Accept {"text": ...} or a raw text body.
            auto parsed = nlohmann::json::parse(*response, nullptr, false);
            if (!parsed.is_discarded() && parsed.is_object() && parsed.contains("text")) {
                return parsed["text"].get<std::string>();
            }
            return *response;
        }
        if (attempt < config_.max_retries) {
            std::this_thread::sleep_for(std::chrono::duration<double>(backoff_s));
            backoff_s *= 2;
        }
    }
    return kReasonerUnavailable;
}

}  // namespace rancn::reasoners
