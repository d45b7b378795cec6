#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rancn::agent {

enum class ToolKind { perception, control };
std::string to_string(ToolKind kind);

struct ToolDescriptor {
    std::string name;
    ToolKind kind = ToolKind::perception;
    std::string parameter_grammar;
    std::string description;
};

struct ToolResult {
    std::string observation;
    // Set by control tools when a directive was accepted; collected into the
    // trace's final_directives.
    std::optional<std::string> accepted_directive_id;
    // Latest-KPI entries to cache in short-term memory, key -> rendered value.
    std::map<std::string, std::string> kpis;
};

using ToolHandler = std::function<ToolResult(const std::string& payload)>;

class ToolRegistry {
public:
    void register_tool(ToolDescriptor descriptor, ToolHandler handler);
    bool has(const std::string& name) const;
    const ToolDescriptor& descriptor(const std::string& name) const;
    ToolResult invoke(const std::string& name, const std::string& payload) const;
    std::vector<ToolDescriptor> list() const;  // sorted by name

private:
    struct Entry {
        ToolDescriptor descriptor;
        ToolHandler handler;
    };
    std::map<std::string, Entry> tools_;
};

enum class ActionKind { query, apply, retrieve, finish, invalid };
std::string to_string(ActionKind kind);

struct Action {
    ActionKind kind = ActionKind::invalid;
    std::string payload;
};

struct ReActStep {
    int index = 0;
    std::string thought;
    Action action;
    std::string observation;
};

enum class EpisodeOutcome { finished, budget_exhausted, aborted };
std::string to_string(EpisodeOutcome outcome);

struct ReActTrace {
    std::string episode_id;
    std::vector<ReActStep> steps;
    int budget = 0;
    EpisodeOutcome outcome = EpisodeOutcome::budget_exhausted;
    std::string abort_reason;                    // set when aborted
    std::vector<std::string> final_directives;   // accepted directive ids
};

// JSON-lines export, one step per line.
std::string trace_jsonl(const ReActTrace& trace, long tick = 0);

struct ParsedOutput {
    std::string thought;
    Action action;
};

// Line protocol: `Thought: <text>` then exactly one
// `Action: Query[...]` / `Action: Apply[ApplyPolicy[...]]` /
// `Action: Retrieve[...]` / `Action: Finish[...]`. Content after the action
// line is ignored. Thought is mandatory.
ParsedOutput parse_reasoner_output(const std::string& text);  // throws ParseError

// Bounded FIFO of rendered steps plus the latest KPI observations; holds
// only current-episode content.
class ShortTermMemory {
public:
    explicit ShortTermMemory(std::size_t window = 16) : window_(window) {}

    void push_step(const std::string& rendered);
    void set_kpi(const std::string& key, const std::string& value);

    const std::vector<std::string>& steps() const { return steps_; }
    const std::map<std::string, std::string>& kpis() const { return kpis_; }
    std::size_t window() const { return window_; }

private:
    std::size_t window_;
    std::vector<std::string> steps_;  // oldest first, size <= window
    std::map<std::string, std::string> kpis_;
};

struct ExperienceEntry {
    std::vector<std::string> fingerprint;  // bag of tokens
    std::string decision_summary;
    std::string outcome_digest;
    long sequence = 0;  // assigned by the store; newer = larger
};

struct ScoredExperience {
    double score = 0;
    ExperienceEntry entry;
};

// Long-term memory with token-overlap retrieval; persists across episodes
// within a run.
class ExperienceStore {
public:
    void add(ExperienceEntry entry);
    // Jaccard token overlap, ties broken by recency; top_k results.
    std::vector<ScoredExperience> retrieve(const std::vector<std::string>& query_terms,
                                           std::size_t top_k) const;
    std::size_t size() const { return entries_.size(); }

private:
    std::vector<ExperienceEntry> entries_;
    long next_sequence_ = 0;
};

std::vector<std::string> tokenize_terms(const std::string& text);

struct RenderInputs {
    std::string objective;
    std::string state_digest;
    std::vector<ToolDescriptor> tools;
    std::vector<std::string> recent_steps;  // oldest first
    std::map<std::string, std::string> kpis;
    std::vector<std::string> retrieved;  // rendered experience lines
    std::size_t char_limit = 4000;
};

// Deterministic plain-text document with fixed sections (OBJECTIVE, TOOLS,
// RECENT STEPS, RETRIEVED EXPERIENCE, CURRENT KPIS); oldest recent steps are
// dropped first when over the size limit and the section header notes it.
std::string render_context(const RenderInputs& inputs);

using ReasonerFn = std::function<std::string(const std::string& context)>;

struct EpisodeOptions {
    std::string episode_id = "ep0";
    std::string objective;
    int budget = 8;
    bool perception_only = false;
    std::size_t context_char_limit = 4000;
    std::size_t retrieve_top_k = 3;
    std::function<std::string()> state_digest;  // rendered into each context
};

// The thought-action-observation loop. Tool failures become observations;
// three consecutive parse errors abort the episode.
ReActTrace run_episode(const ReasonerFn& reasoner, const ToolRegistry& registry,
                       ShortTermMemory& short_term, const ExperienceStore& experiences,
                       const EpisodeOptions& options);

}  // namespace rancn::agent
