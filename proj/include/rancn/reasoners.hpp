#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace rancn::reasoners {

// Replays a fixed list of outputs verbatim, one per call; an exhausted
// script emits the closing sentinel.
class ScriptedReasoner {
public:
    explicit ScriptedReasoner(std::vector<std::string> script) : script_(std::move(script)) {}

    std::string operator()(const std::string& context);
    std::size_t calls() const { return calls_; }

private:
    std::vector<std::string> script_;
    std::size_t calls_ = 0;
};

struct HeuristicConfig {
    double prb_hi_watermark = 0.9;
    double latency_watermark_ms = 3.0;
    double prb_step_percent = 10;
    double bandwidth_step_gbps = 1;
};

// Deterministic stand-in for the LLM: observes RAN then CN KPIs through the
// same query tool, then applies fixed rules (RAN rule before CN rule). A
// pure function of the rendered context and its rule configuration.
class HeuristicReasoner {
public:
    enum class Phase { observe_ran, observe_cn, decide };

    explicit HeuristicReasoner(HeuristicConfig config = {}) : config_(config) {}

    std::string operator()(const std::string& context) const;
    Phase phase(const std::string& context) const;

private:
    HeuristicConfig config_;
};

struct ExternalReasonerConfig {
    std::string endpoint;  // e.g. http://127.0.0.1:8080/reason
    std::string model;
    double timeout_s = 30;
    int max_retries = 2;
    double temperature = 0;
    std::size_t max_request_bytes = 32768;
    std::string preamble;  // empty -> built-in instruction preamble
    std::string api_key_env = "SLICESIM_API_KEY";
};

inline constexpr char kReasonerUnavailable[] = "Action: Finish[reasoner unavailable]";

// The versioned instruction preamble describing the line protocol; mirrors
// docs/reasoner_preamble.txt.
const std::string& default_preamble();

// Transport: request body in, response text out; nullopt signals a
// transport failure that should be retried.
using Transport = std::function<std::optional<std::string>(const std::string& body)>;

// Adapter for an external language-model service. Sends the instruction
// preamble plus the (size-capped) context, retries with exponential backoff,
// and degrades to the unavailability sentinel instead of failing the episode.
class ExternalReasoner {
public:
    explicit ExternalReasoner(ExternalReasonerConfig config, Transport transport = nullptr);

    std::string operator()(const std::string& context);
    int attempts_made() const { return attempts_; }
    std::string build_request_body(const std::string& context) const;

private:
    ExternalReasonerConfig config_;
    Transport transport_;
    int attempts_ = 0;
};

}  // namespace rancn::reasoners
