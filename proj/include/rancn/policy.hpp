#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rancn/slicing.hpp"

namespace rancn::policy {

enum class Parameter { prb_reservation, core_bandwidth, cn_compute, admission_cap };
enum class Operator { add, subtract, assign };
enum class Unit { percent, gbps, mbps, units, count };

std::string to_string(Parameter p);
std::string to_string(Operator op);
std::string to_string(Unit u);

struct PolicyDirective {
    std::string directive_id;  // assigned by the orchestrator on submit
    Parameter parameter = Parameter::prb_reservation;
    std::map<std::string, std::string> scope;  // cell= / slice= / tier=
    Operator op = Operator::add;
    double value = 0;
    Unit unit = Unit::percent;

    bool operator==(const PolicyDirective& other) const {
        return parameter == other.parameter && scope == other.scope && op == other.op &&
               value == other.value && unit == other.unit;
    }
};

// `ApplyPolicy[<param>(.<label>=<value>)* <op> <number> <unit>]`, whitespace
// tolerant around the operator. Unknown parameter/operator/unit and
// malformed numbers throw ParseError with the character position.
PolicyDirective parse_directive(const std::string& text);

// Canonical form: `%` attaches to the number, word units are spaced.
std::string print_directive(const PolicyDirective& d);

struct ParamBounds {
    double min_value = 0;          // absolute, in the unit's base form
    double max_value = 0;
    double max_episode_delta = 0;  // cumulative |delta| per episode
};

// Safe action space for directives. Bandwidth and compute ranges are
// multiples of the initial capacities snapshotted when the orchestrator is
// created.
struct ConstraintTemplate {
    ParamBounds prb_reservation{0.0, 1.0, 0.20};       // fractions
    ParamBounds core_bandwidth_scale{0.1, 4.0, 2e9};   // x-initial; delta in bps
    ParamBounds cn_compute_scale{0.1, 4.0, 100.0};     // x-initial; delta in units
    ParamBounds admission_cap{0, 100000, 1000};        // absolute count
    int max_directives_per_episode = 5;
};

enum class Verdict { accepted, rejected };

struct Validation {
    bool ok = false;
    std::string reason;       // rejected: range | delta | episode_budget | usage | scope
    double delta_charge = 0;  // charged against the episode budget when accepted
};

struct DispatchRecord {
    std::string directive_id;
    std::string directive_text;  // canonical form
    Verdict verdict = Verdict::rejected;
    std::string reject_reason;
    std::uint64_t pre_digest = 0;
    std::uint64_t post_digest = 0;
    long tick = 0;
};

std::string dispatch_record_jsonl(const DispatchRecord& r);

// Parses, validates, and atomically enforces directives against the owned
// NetworkState; every submit leaves one audit record. Control-tool calls
// from agent episodes are serialized through one instance.
class Orchestrator {
public:
    Orchestrator(ConstraintTemplate tmpl, slicing::NetworkState& state);

    // Resets the per-episode directive budget and delta accounting.
    void begin_episode();

    struct SubmitOutcome {
        bool accepted = false;
        std::string directive_id;
        std::string message;
    };

    // parse -> validate -> dispatch; parse failures throw, validation
    // failures return a rejected outcome and still append an audit record.
    SubmitOutcome submit(const std::string& directive_text);

    Validation validate(const PolicyDirective& d) const;

    const std::vector<DispatchRecord>& audit_log() const { return audit_; }
    slicing::NetworkState& state() { return state_; }

    // Test hook: the next n enforcement calls fail after validation.
    void inject_enforcement_failures(int n) { forced_failures_ = n; }

private:
    void enforce(const PolicyDirective& d);  // throws on adapter failure
    double base_value(const PolicyDirective& d) const;

    ConstraintTemplate template_;
    slicing::NetworkState& state_;
    std::map<std::string, double> initial_link_bps_;
    std::map<std::string, double> initial_node_units_;
    std::vector<DispatchRecord> audit_;
    std::map<Parameter, double> episode_delta_;
    int episode_accepted_ = 0;
    int next_id_ = 0;
    int forced_failures_ = 0;
};

}  // namespace rancn::policy
