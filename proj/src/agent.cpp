#include "rancn/agent.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include <json.hpp>

#include "rancn/errors.hpp"
#include "rancn/strutil.hpp"

namespace rancn::agent {

std::string to_string(ToolKind kind) {
    return kind == ToolKind::perception ? "perception" : "control";
}

std::string to_string(ActionKind kind) {
    switch (kind) {
        case ActionKind::query: return "Query";
        case ActionKind::apply: return "Apply";
        case ActionKind::retrieve: return "Retrieve";
        case ActionKind::finish: return "Finish";
        case ActionKind::invalid: return "Invalid";
    }
    return "?";
}

std::string to_string(EpisodeOutcome outcome) {
    switch (outcome) {
        case EpisodeOutcome::finished: return "finished";
        case EpisodeOutcome::budget_exhausted: return "budget_exhausted";
        case EpisodeOutcome::aborted: return "aborted";
    }
    return "?";
}

void ToolRegistry::register_tool(ToolDescriptor descriptor, ToolHandler handler) {
    if (tools_.count(descriptor.name)) {
        throw DuplicateError("tool already registered: " + descriptor.name);
    }
    const std::string name = descriptor.name;
    tools_[name] = Entry{std::move(descriptor), std::move(handler)};
}

bool ToolRegistry::has(const std::string& name) const { return tools_.count(name) > 0; }

const ToolDescriptor& ToolRegistry::descriptor(const std::string& name) const {
    auto it = tools_.find(name);
    if (it == tools_.end()) throw NotFoundError("unknown tool " + name);
    return it->second.descriptor;
}

ToolResult ToolRegistry::invoke(const std::string& name, const std::string& payload) const {
    auto it = tools_.find(name);
    if (it == tools_.end()) throw NotFoundError("unknown tool " + name);
    return it->second.handler(payload);
}

std::vector<ToolDescriptor> ToolRegistry::list() const {
    std::vector<ToolDescriptor> out;
    for (const auto& [name, entry] : tools_) out.push_back(entry.descriptor);
    return out;
}

std::string trace_jsonl(const ReActTrace& trace, long tick) {
    std::ostringstream out;
    for (const auto& step : trace.steps) {
        nlohmann::json j;
        j["episode_id"] = trace.episode_id;
        j["index"] = step.index;
        j["thought"] = step.thought;
        j["action"] = to_string(step.action.kind);
        j["payload"] = step.action.payload;
        j["observation"] = step.observation;
        j["timestamp"] = tick;
        out << j.dump() << '\n';
    }
    return out.str();
}

namespace {

// Extracts `<Verb>[payload]` with bracket depth matching; trailing text after
// the matched bracket is ignored.
Action parse_action_line(const std::string& line, std::size_t line_offset) {
    const std::string body = trim(line.substr(std::string("Action:").size()));
    const auto bracket = body.find('[');
    if (bracket == std::string::npos) {
        throw ParseError("action is missing '['", line_offset);
    }
    const std::string verb = trim(body.substr(0, bracket));
    ActionKind kind;
    if (verb == "Query") kind = ActionKind::query;
    else if (verb == "Apply") kind = ActionKind::apply;
    else if (verb == "Retrieve") kind = ActionKind::retrieve;
    else if (verb == "Finish") kind = ActionKind::finish;
    else throw ParseError("unknown action verb '" + verb + "'", line_offset);

    int depth = 0;
    for (std::size_t i = bracket; i < body.size(); ++i) {
        if (body[i] == '[') ++depth;
        else if (body[i] == ']') {
            --depth;
            if (depth == 0) {
                return Action{kind, body.substr(bracket + 1, i - bracket - 1)};
            }
        }
    }
    throw ParseError("unbalanced brackets in action", line_offset + bracket);
}

}  // namespace

ParsedOutput parse_reasoner_output(const std::string& text) {
    std::vector<std::pair<std::string, std::size_t>> lines;  // text, offset
    std::size_t start = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
        if (i == text.size() || text[i] == '\n') {
            const std::string line = trim(text.substr(start, i - start));
            if (!line.empty()) lines.emplace_back(line, start);
            start = i + 1;
        }
    }
    if (lines.empty()) throw ParseError("empty reasoner output", 0);

    const auto& [first, first_off] = lines[0];
    if (!starts_with(first, "Thought:")) {
        throw ParseError("expected 'Thought:' as the first line (Thought is mandatory)",
                         first_off);
    }
    ParsedOutput out;
    out.thought = trim(first.substr(std::string("Thought:").size()));

    if (lines.size() < 2) throw ParseError("missing 'Action:' line", text.size());
    const auto& [second, second_off] = lines[1];
    if (starts_with(second, "Thought:")) {
        throw ParseError("duplicate 'Thought:' line before the action", second_off);
    }
    if (!starts_with(second, "Action:")) {
        throw ParseError("expected 'Action:' after the thought", second_off);
    }
    out.action = parse_action_line(second, second_off);
    return out;  // anything after the action line is ignored
}

void ShortTermMemory::push_step(const std::string& rendered) {
    steps_.push_back(rendered);
    if (steps_.size() > window_) steps_.erase(steps_.begin());
}

void ShortTermMemory::set_kpi(const std::string& key, const std::string& value) {
    kpis_[key] = value;
}

void ExperienceStore::add(ExperienceEntry entry) {
    entry.sequence = next_sequence_++;
    entries_.push_back(std::move(entry));
}

std::vector<std::string> tokenize_terms(const std::string& text) {
    std::vector<std::string> tokens;
    std::string cur;
    for (char c : text) {
        if (c == ' ' || c == ',' || c == '\t' || c == '\n') {
            if (!cur.empty()) tokens.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) tokens.push_back(cur);
    return tokens;
}

std::vector<ScoredExperience> ExperienceStore::retrieve(
    const std::vector<std::string>& query_terms, std::size_t top_k) const {
    const std::set<std::string> query(query_terms.begin(), query_terms.end());
    std::vector<ScoredExperience> scored;
    for (const auto& entry : entries_) {
        const std::set<std::string> fp(entry.fingerprint.begin(), entry.fingerprint.end());
        std::size_t inter = 0;
        for (const auto& t : query) inter += fp.count(t);
        const std::size_t uni = query.size() + fp.size() - inter;
        const double score = uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
        scored.push_back({score, entry});
    }
    std::stable_sort(scored.begin(), scored.end(),
                     [](const ScoredExperience& a, const ScoredExperience& b) {
                         if (a.score != b.score) return a.score > b.score;
                         return a.entry.sequence > b.entry.sequence;  // recency
                     });
    if (scored.size() > top_k) scored.resize(top_k);
    return scored;
}

std::string render_context(const RenderInputs& inputs) {
    auto assemble = [&inputs](std::size_t skip_steps, bool truncated) {
        std::ostringstream doc;
        doc << "OBJECTIVE\n" << inputs.objective << '\n';
        if (!inputs.state_digest.empty()) doc << "state digest: " << inputs.state_digest << '\n';
        doc << '\n';

        doc << "TOOLS\n";
        if (inputs.tools.empty()) doc << "(none)\n";
        for (const auto& t : inputs.tools) {
            doc << "- " << t.name << " (" << to_string(t.kind) << "): " << t.parameter_grammar
                << " -- " << t.description << '\n';
        }
        doc << '\n';

        doc << (truncated ? "RECENT STEPS (truncated)\n" : "RECENT STEPS\n");
        if (inputs.recent_steps.size() <= skip_steps) doc << "(none)\n";
        for (std::size_t i = skip_steps; i < inputs.recent_steps.size(); ++i) {
            doc << inputs.recent_steps[i] << '\n';
        }
        doc << '\n';

        doc << "RETRIEVED EXPERIENCE\n";
        if (inputs.retrieved.empty()) doc << "(none)\n";
        for (const auto& r : inputs.retrieved) doc << "- " << r << '\n';
        doc << '\n';

        doc << "CURRENT KPIS\n";
        if (inputs.kpis.empty()) doc << "(none)\n";
        for (const auto& [key, value] : inputs.kpis) doc << key << " = " << value << '\n';
        return doc.str();
    };

    std::size_t skip = 0;
    std::string doc = assemble(0, false);
    while (doc.size() > inputs.char_limit && skip < inputs.recent_steps.size()) {
        ++skip;
        doc = assemble(skip, true);
    }
    if (doc.size() > inputs.char_limit) {
        doc.resize(inputs.char_limit > 12 ? inputs.char_limit - 12 : 0);
        doc += "\n[truncated]";
    }
    return doc;
}

namespace {

std::string render_step(const ReActStep& step) {
    std::ostringstream out;
    out << '#' << step.index << " Thought: " << step.thought << " | Action: "
        << to_string(step.action.kind) << '[' << step.action.payload << ']'
        << " | Observation: " << step.observation;
    return out.str();
}

std::string render_experience(const ScoredExperience& scored) {
    std::ostringstream out;
    char score[16];
    std::snprintf(score, sizeof(score), "%.2f", scored.score);
    out << "[score " << score << "] ";
    for (std::size_t i = 0; i < scored.entry.fingerprint.size(); ++i) {
        if (i) out << ' ';
        out << scored.entry.fingerprint[i];
    }
    out << ": " << scored.entry.decision_summary << " => " << scored.entry.outcome_digest;
    return out.str();
}

}  // namespace

ReActTrace run_episode(const ReasonerFn& reasoner, const ToolRegistry& registry,
                       ShortTermMemory& short_term, const ExperienceStore& experiences,
                       const EpisodeOptions& options) {
    if (options.budget < 1) throw DomainError("episode budget must be >= 1");

    ReActTrace trace;
    trace.episode_id = options.episode_id;
    trace.budget = options.budget;
    trace.outcome = EpisodeOutcome::budget_exhausted;

    std::vector<std::string> retrieved_lines;
    int parse_strikes = 0;

    for (int index = 0; index < options.budget; ++index) {
        RenderInputs inputs;
        inputs.objective = options.objective;
        inputs.state_digest = options.state_digest ? options.state_digest() : "";
        inputs.tools = registry.list();
        inputs.recent_steps = short_term.steps();
        inputs.kpis = short_term.kpis();
        inputs.retrieved = retrieved_lines;
        inputs.char_limit = options.context_char_limit;
        const std::string context = render_context(inputs);

        const std::string raw = reasoner(context);

        ReActStep step;
        step.index = index;

        ParsedOutput parsed;
        bool parse_ok = true;
        try {
            parsed = parse_reasoner_output(raw);
        } catch (const ParseError& err) {
            parse_ok = false;
            step.thought = raw;  // keep the malformed output auditable
            step.action = Action{ActionKind::invalid, ""};
            step.observation = std::string("parse error: ") + err.what();
        }

        if (parse_ok) {
            parse_strikes = 0;
            step.thought = parsed.thought;
            step.action = parsed.action;
            switch (parsed.action.kind) {
                case ActionKind::finish:
                    step.observation = "episode closed";
                    break;
                case ActionKind::retrieve: {
                    const auto hits = experiences.retrieve(tokenize_terms(parsed.action.payload),
                                                           options.retrieve_top_k);
                    if (hits.empty()) {
                        step.observation = "(no stored experience)";
                    } else {
                        std::ostringstream obs;
                        for (std::size_t i = 0; i < hits.size(); ++i) {
                            if (i) obs << "; ";
                            obs << render_experience(hits[i]);
                            retrieved_lines.push_back(render_experience(hits[i]));
                        }
                        step.observation = obs.str();
                    }
                    break;
                }
                case ActionKind::query:
                case ActionKind::apply: {
                    const std::string tool_name =
                        parsed.action.kind == ActionKind::query ? "db.query" : "policy.apply";
                    if (!registry.has(tool_name)) {
                        step.observation = "error: tool " + tool_name + " not registered";
                        break;
                    }
                    const auto& desc = registry.descriptor(tool_name);
                    if (options.perception_only && desc.kind == ToolKind::control) {
                        step.observation =
                            "policy violation: control tool " + tool_name +
                            " is not allowed in a perception-only episode";
                        break;
                    }
                    try {
                        ToolResult result = registry.invoke(tool_name, parsed.action.payload);
                        step.observation = result.observation;
                        if (result.accepted_directive_id) {
                            trace.final_directives.push_back(*result.accepted_directive_id);
                        }
                        for (const auto& [key, value] : result.kpis) {
                            short_term.set_kpi(key, value);
                        }
                    } catch (const std::exception& ex) {
                        step.observation = std::string("tool error: ") + ex.what();
                    }
                    break;
                }
                case ActionKind::invalid:
                    step.observation = "internal: invalid action";
                    break;
            }
        } else {
            ++parse_strikes;
        }

        trace.steps.push_back(step);
        short_term.push_step(render_step(step));

        if (parse_ok && step.action.kind == ActionKind::finish) {
            trace.outcome = EpisodeOutcome::finished;
            break;
        }
        if (parse_strikes >= 3) {
            trace.outcome = EpisodeOutcome::aborted;
            trace.abort_reason = "malformed_reasoner";
            break;
        }
    }
    return trace;
}

}  // namespace rancn::agent
