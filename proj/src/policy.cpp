#include "rancn/policy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rancn/errors.hpp"
#include "rancn/strutil.hpp"

namespace rancn::policy {

std::string to_string(Parameter p) {
    switch (p) {
        case Parameter::prb_reservation: return "PRB_reservation";
        case Parameter::core_bandwidth: return "Core_Bandwidth";
        case Parameter::cn_compute: return "CN_Compute";
        case Parameter::admission_cap: return "Admission_Cap";
    }
    return "?";
}

std::string to_string(Operator op) {
    switch (op) {
        case Operator::add: return "+=";
        case Operator::subtract: return "-=";
        case Operator::assign: return "=";
    }
    return "?";
}

std::string to_string(Unit u) {
    switch (u) {
        case Unit::percent: return "%";
        case Unit::gbps: return "Gbps";
        case Unit::mbps: return "Mbps";
        case Unit::units: return "units";
        case Unit::count: return "count";
    }
    return "?";
}

namespace {

std::optional<Parameter> parameter_from(const std::string& name) {
    if (name == "PRB_reservation") return Parameter::prb_reservation;
    if (name == "Core_Bandwidth") return Parameter::core_bandwidth;
    if (name == "CN_Compute") return Parameter::cn_compute;
    if (name == "Admission_Cap") return Parameter::admission_cap;
    return std::nullopt;
}

std::optional<Unit> unit_from(const std::string& name) {
    if (name == "%") return Unit::percent;
    if (name == "Gbps") return Unit::gbps;
    if (name == "Mbps") return Unit::mbps;
    if (name == "units") return Unit::units;
    if (name == "count") return Unit::count;
    return std::nullopt;
}

bool unit_compatible(Parameter p, Unit u) {
    switch (p) {
        case Parameter::prb_reservation: return u == Unit::percent;
        case Parameter::core_bandwidth: return u == Unit::gbps || u == Unit::mbps;
        case Parameter::cn_compute: return u == Unit::units;
        case Parameter::admission_cap: return u == Unit::count;
    }
    return false;
}

}  // namespace

PolicyDirective parse_directive(const std::string& text) {
    const std::string trimmed = trim(text);
    const std::size_t offset = text.find_first_not_of(" \t");
    const std::size_t base = offset == std::string::npos ? 0 : offset;

    static const std::string kPrefix = "ApplyPolicy[";
    if (!starts_with(trimmed, kPrefix)) {
        throw ParseError("directive must start with 'ApplyPolicy['", base);
    }
    if (trimmed.back() != ']') {
        throw ParseError("missing closing ']'", base + trimmed.size());
    }
    std::string body = trimmed.substr(kPrefix.size(), trimmed.size() - kPrefix.size() - 1);
    const std::size_t body_base = base + kPrefix.size();

    // Normalize the unicode minus so both "-=" and the typeset form parse.
    for (std::size_t i = 0; i + 2 < body.size(); ++i) {
        if (static_cast<unsigned char>(body[i]) == 0xE2 &&
            static_cast<unsigned char>(body[i + 1]) == 0x88 &&
            static_cast<unsigned char>(body[i + 2]) == 0x92) {
            body.replace(i, 3, "-");
        }
    }

    PolicyDirective d;

    auto is_word = [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    };

    std::size_t pos = 0;
    while (pos < body.size() && body[pos] == ' ') ++pos;
    const std::size_t head_start = pos;
    while (pos < body.size() && is_word(body[pos])) ++pos;
    const std::string param_name = body.substr(head_start, pos - head_start);
    if (param_name.empty()) throw ParseError("missing parameter name", body_base + head_start);
    const auto param = parameter_from(param_name);
    if (!param) {
        throw ParseError("unknown parameter '" + param_name + "'", body_base + head_start);
    }
    d.parameter = *param;

    // Scope atoms: .<label>=<value>, values stop at space/./operator chars.
    while (pos < body.size() && body[pos] == '.') {
        ++pos;
        const std::size_t label_start = pos;
        while (pos < body.size() && is_word(body[pos])) ++pos;
        const std::string label = body.substr(label_start, pos - label_start);
        if (label.empty() || pos >= body.size() || body[pos] != '=') {
            throw ParseError("scope atom must be <label>=<value>", body_base + label_start);
        }
        ++pos;  // '='
        const std::size_t value_start = pos;
        while (pos < body.size() && is_word(body[pos])) ++pos;
        const std::string value = body.substr(value_start, pos - value_start);
        if (value.empty()) {
            throw ParseError("scope atom must be <label>=<value>", body_base + label_start);
        }
        d.scope[label] = value;
    }

    while (pos < body.size() && body[pos] == ' ') ++pos;
    std::size_t op_start = pos;
    if (pos < body.size() && (body[pos] == '+' || body[pos] == '-')) {
        const char sign = body[pos];
        ++pos;
        if (pos >= body.size() || body[pos] != '=') {
            throw ParseError(std::string("unknown operator '") + sign + "'", body_base + op_start);
        }
        ++pos;
        d.op = sign == '+' ? Operator::add : Operator::subtract;
    } else if (pos < body.size() && body[pos] == '=') {
        ++pos;
        d.op = Operator::assign;
    } else {
        throw ParseError("expected operator +=, -= or =", body_base + op_start);
    }

    while (pos < body.size() && body[pos] == ' ') ++pos;
    const std::size_t num_start = pos;
    while (pos < body.size() && (std::isdigit(static_cast<unsigned char>(body[pos])) ||
                                 body[pos] == '.' || body[pos] == 'e' || body[pos] == 'E' ||
                                 ((body[pos] == '+' || body[pos] == '-') && pos > num_start &&
                                  (body[pos - 1] == 'e' || body[pos - 1] == 'E')))) {
        ++pos;
    }
    const std::string num = body.substr(num_start, pos - num_start);
    if (num.empty()) throw ParseError("missing numeric value", body_base + num_start);
    char* endp = nullptr;
    d.value = std::strtod(num.c_str(), &endp);
    if (endp != num.c_str() + num.size() || !std::isfinite(d.value)) {
        throw ParseError("malformed number '" + num + "'", body_base + num_start);
    }

    while (pos < body.size() && body[pos] == ' ') ++pos;
    const std::size_t unit_start = pos;
    std::string unit_tok = trim(body.substr(pos));
    if (unit_tok.empty()) throw ParseError("missing unit", body_base + unit_start);
    const auto unit = unit_from(unit_tok);
    if (!unit) throw ParseError("unknown unit '" + unit_tok + "'", body_base + unit_start);
    d.unit = *unit;

    if (!unit_compatible(d.parameter, d.unit)) {
        throw ParseError("unit '" + unit_tok + "' incompatible with parameter '" +
                             to_string(d.parameter) + "'",
                         body_base + unit_start);
    }
    if (d.value < 0) {
        throw ParseError("value must be non-negative; use -= to decrease", body_base + num_start);
    }
    return d;
}

std::string print_directive(const PolicyDirective& d) {
    std::ostringstream out;
    out << "ApplyPolicy[" << to_string(d.parameter);
    for (const auto& [k, v] : d.scope) out << '.' << k << '=' << v;
    out << ' ' << to_string(d.op) << ' ' << format_double(d.value);
    if (d.unit == Unit::percent) {
        out << '%';
    } else {
        out << ' ' << to_string(d.unit);
    }
    out << ']';
    return out.str();
}

std::string dispatch_record_jsonl(const DispatchRecord& r) {
    std::ostringstream out;
    out << "{\"directive_id\":\"" << r.directive_id << "\",\"directive\":\"" << r.directive_text
        << "\",\"verdict\":\"" << (r.verdict == Verdict::accepted ? "accepted" : "rejected")
        << "\"";
    if (!r.reject_reason.empty()) out << ",\"reason\":\"" << r.reject_reason << "\"";
    char buf[80];
    std::snprintf(buf, sizeof(buf), ",\"pre_digest\":\"%016llx\",\"post_digest\":\"%016llx\"",
                  static_cast<unsigned long long>(r.pre_digest),
                  static_cast<unsigned long long>(r.post_digest));
    out << buf << ",\"tick\":" << r.tick << "}";
    return out.str();
}

Orchestrator::Orchestrator(ConstraintTemplate tmpl, slicing::NetworkState& state)
    : template_(tmpl), state_(state) {
    for (const auto& link : state_.topology.links) {
        initial_link_bps_[link.id] = link.bandwidth_capacity_bps;
    }
    for (const auto& node : state_.topology.nodes) {
        if (node.tier == cn::NodeTier::server) {
            initial_node_units_[node.id] = node.compute_capacity;
        }
    }
}

void Orchestrator::begin_episode() {
    episode_delta_.clear();
    episode_accepted_ = 0;
}

double Orchestrator::base_value(const PolicyDirective& d) const {
    switch (d.unit) {
        case Unit::percent: return d.value / 100.0;
        case Unit::gbps: return d.value * 1e9;
        case Unit::mbps: return d.value * 1e6;
        case Unit::units: return d.value;
        case Unit::count: return d.value;
    }
    return d.value;
}

namespace {

double apply_op(Operator op, double current, double delta) {
    switch (op) {
        case Operator::add: return current + delta;
        case Operator::subtract: return current - delta;
        case Operator::assign: return delta;
    }
    return current;
}

}  // namespace

Validation Orchestrator::validate(const PolicyDirective& d) const {
    if (episode_accepted_ >= template_.max_directives_per_episode) {
        return {false, "episode_budget: directive limit " +
                           std::to_string(template_.max_directives_per_episode) + " reached"};
    }

    for (const auto& [key, value] : d.scope) {
        const bool ok = (d.parameter == Parameter::prb_reservation &&
                         (key == "cell" || key == "slice")) ||
                        (d.parameter == Parameter::core_bandwidth && key == "tier") ||
                        (d.parameter == Parameter::cn_compute && key == "tier");
        if (!ok) {
            return {false, "scope: label '" + key + "' not applicable to " +
                               to_string(d.parameter)};
        }
    }

    const double delta = base_value(d);
    double worst_delta = d.op == Operator::assign ? 0.0 : delta;

    switch (d.parameter) {
        case Parameter::prb_reservation: {
            const auto cell_scope = d.scope.find("cell");
            const auto slice_scope = d.scope.find("slice");
            if (slice_scope != d.scope.end() && !state_.slices.count(slice_scope->second)) {
                return {false, "scope: unknown slice " + slice_scope->second};
            }
            bool touched = false;
            for (const auto& cell : state_.cells) {
                if (cell_scope != d.scope.end() && cell.id != cell_scope->second) continue;
                touched = true;
                double sum_after = 0;
                for (const auto& [slice_id, spec] : state_.slices) {
                    double cur = 0;
                    if (auto it = cell.prb_reservation.find(slice_id);
                        it != cell.prb_reservation.end()) {
                        cur = it->second;
                    }
                    double next = cur;
                    if (slice_scope == d.scope.end() || slice_scope->second == slice_id) {
                        next = apply_op(d.op, cur, delta);
                        if (next < template_.prb_reservation.min_value - 1e-12 ||
                            next > template_.prb_reservation.max_value + 1e-12) {
                            return {false, "range: reservation for " + slice_id + " on " +
                                               cell.id + " would be " + format_double(next * 100) +
                                               "%"};
                        }
                        if (d.op == Operator::assign) {
                            worst_delta = std::max(worst_delta, std::abs(next - cur));
                        }
                    }
                    sum_after += next;
                }
                if (sum_after > 1.0 + 1e-12) {
                    return {false, "range: reservations on " + cell.id + " would total " +
                                       format_double(sum_after * 100) + "%"};
                }
            }
            if (cell_scope != d.scope.end() && !touched) {
                return {false, "scope: unknown cell " + cell_scope->second};
            }
            const double budget = template_.prb_reservation.max_episode_delta;
            const double used = episode_delta_.count(d.parameter)
                                    ? episode_delta_.at(d.parameter)
                                    : 0.0;
            if (used + worst_delta > budget + 1e-12) {
                return {false, "delta: episode budget " + format_double(budget * 100) +
                                   "% exceeded"};
            }
            break;
        }
        case Parameter::core_bandwidth: {
            auto tier = cn::LinkTier::core;
            if (auto it = d.scope.find("tier"); it != d.scope.end()) {
                const auto parsed = cn::link_tier_from_string(it->second);
                if (!parsed) return {false, "scope: unknown link tier " + it->second};
                tier = *parsed;
            }
            for (const auto& link : state_.topology.links) {
                if (link.tier != tier) continue;
                const double next = apply_op(d.op, link.bandwidth_capacity_bps, delta);
                const double initial = initial_link_bps_.at(link.id);
                if (next < template_.core_bandwidth_scale.min_value * initial - 1e-6 ||
                    next > template_.core_bandwidth_scale.max_value * initial + 1e-6) {
                    return {false, "range: link " + link.id + " capacity would be " +
                                       format_double(next) + " bps"};
                }
                if (next < link.bandwidth_used_bps) {
                    return {false, "usage: link " + link.id + " usage " +
                                       format_double(link.bandwidth_used_bps) +
                                       " bps exceeds new capacity"};
                }
                if (d.op == Operator::assign) {
                    worst_delta =
                        std::max(worst_delta, std::abs(next - link.bandwidth_capacity_bps));
                }
            }
            const double used = episode_delta_.count(d.parameter)
                                    ? episode_delta_.at(d.parameter)
                                    : 0.0;
            if (used + worst_delta > template_.core_bandwidth_scale.max_episode_delta + 1e-6) {
                return {false, "delta: episode bandwidth budget exceeded"};
            }
            break;
        }
        case Parameter::cn_compute: {
            if (auto it = d.scope.find("tier"); it != d.scope.end() && it->second != "server") {
                return {false, "scope: CN_Compute applies to the server tier"};
            }
            for (const auto& node : state_.topology.nodes) {
                if (node.tier != cn::NodeTier::server) continue;
                const double next = apply_op(d.op, node.compute_capacity, delta);
                const double initial = initial_node_units_.at(node.id);
                if (next < template_.cn_compute_scale.min_value * initial - 1e-9 ||
                    next > template_.cn_compute_scale.max_value * initial + 1e-9) {
                    return {false, "range: node " + node.id + " compute would be " +
                                       format_double(next)};
                }
                if (next < node.compute_used) {
                    return {false, "usage: node " + node.id + " usage " +
                                       format_double(node.compute_used) + " exceeds new capacity"};
                }
                if (d.op == Operator::assign) {
                    worst_delta = std::max(worst_delta, std::abs(next - node.compute_capacity));
                }
            }
            const double used = episode_delta_.count(d.parameter)
                                    ? episode_delta_.at(d.parameter)
                                    : 0.0;
            if (used + worst_delta > template_.cn_compute_scale.max_episode_delta + 1e-9) {
                return {false, "delta: episode compute budget exceeded"};
            }
            break;
        }
        case Parameter::admission_cap: {
            if (d.op != Operator::assign && !state_.policy.admission_cap) {
                return {false, "range: admission cap not set; use = to set it"};
            }
            const double cur = state_.policy.admission_cap
                                   ? static_cast<double>(*state_.policy.admission_cap)
                                   : 0.0;
            const double next = apply_op(d.op, cur, delta);
            if (next < template_.admission_cap.min_value ||
                next > template_.admission_cap.max_value) {
                return {false, "range: admission cap would be " + format_double(next)};
            }
            if (d.op == Operator::assign) worst_delta = std::abs(next - cur);
            const double used = episode_delta_.count(d.parameter)
                                    ? episode_delta_.at(d.parameter)
                                    : 0.0;
            if (used + worst_delta > template_.admission_cap.max_episode_delta + 1e-9) {
                return {false, "delta: episode admission-cap budget exceeded"};
            }
            break;
        }
    }
    return {true, "", worst_delta};
}

void Orchestrator::enforce(const PolicyDirective& d) {
    if (forced_failures_ > 0) {
        --forced_failures_;
        throw Error("injected enforcement failure");
    }
    const double delta = base_value(d);

    switch (d.parameter) {
        case Parameter::prb_reservation: {
            // RAN adapter: cell reservation maps
            const auto cell_scope = d.scope.find("cell");
            const auto slice_scope = d.scope.find("slice");
            for (auto& cell : state_.cells) {
                if (cell_scope != d.scope.end() && cell.id != cell_scope->second) continue;
                for (const auto& [slice_id, spec] : state_.slices) {
                    if (slice_scope != d.scope.end() && slice_scope->second != slice_id) continue;
                    double cur = 0;
                    if (auto it = cell.prb_reservation.find(slice_id);
                        it != cell.prb_reservation.end()) {
                        cur = it->second;
                    }
                    cell.prb_reservation[slice_id] = apply_op(d.op, cur, delta);
                }
            }
            break;
        }
        case Parameter::core_bandwidth: {
            // CN adapter: link capacity scaling
            auto tier = cn::LinkTier::core;
            if (auto it = d.scope.find("tier"); it != d.scope.end()) {
                tier = *cn::link_tier_from_string(it->second);
            }
            const auto op = d.op == Operator::add      ? cn::CapacityOp::add
                            : d.op == Operator::subtract ? cn::CapacityOp::subtract
                                                         : cn::CapacityOp::set;
            if (auto err = cn::adjust_link_capacity(state_.topology, tier, op, delta)) {
                throw Error(*err);
            }
            break;
        }
        case Parameter::cn_compute: {
            const auto op = d.op == Operator::add      ? cn::CapacityOp::add
                            : d.op == Operator::subtract ? cn::CapacityOp::subtract
                                                         : cn::CapacityOp::set;
            if (auto err = cn::adjust_node_capacity(state_.topology, op, delta)) {
                throw Error(*err);
            }
            break;
        }
        case Parameter::admission_cap: {
            const double cur = state_.policy.admission_cap
                                   ? static_cast<double>(*state_.policy.admission_cap)
                                   : 0.0;
            state_.policy.admission_cap = static_cast<long>(std::llround(apply_op(d.op, cur, delta)));
            break;
        }
    }
}

Orchestrator::SubmitOutcome Orchestrator::submit(const std::string& directive_text) {
    PolicyDirective d = parse_directive(directive_text);
    char id[16];
    std::snprintf(id, sizeof(id), "d%04d", next_id_++);
    d.directive_id = id;

    DispatchRecord record;
    record.directive_id = d.directive_id;
    record.directive_text = print_directive(d);
    record.tick = state_.tick;
    record.pre_digest = slicing::state_digest(state_);

    const Validation verdict = validate(d);
    if (!verdict.ok) {
        record.verdict = Verdict::rejected;
        record.reject_reason = verdict.reason;
        record.post_digest = record.pre_digest;
        audit_.push_back(record);
        return {false, d.directive_id, "rejected(" + verdict.reason + ")"};
    }

    const slicing::NetworkState snapshot = state_;
    try {
        enforce(d);
    } catch (const std::exception& ex) {
        state_ = snapshot;  // single-directive atomicity
        record.verdict = Verdict::rejected;
        record.reject_reason = std::string("enforcement_failed: ") + ex.what();
        record.post_digest = slicing::state_digest(state_);
        audit_.push_back(record);
        return {false, d.directive_id, "rejected(enforcement_failed)"};
    }

    episode_delta_[d.parameter] += verdict.delta_charge;
    episode_accepted_ += 1;

    record.verdict = Verdict::accepted;
    record.post_digest = slicing::state_digest(state_);
    audit_.push_back(record);
    return {true, d.directive_id, "accepted: " + record.directive_text};
}

}  // namespace rancn::policy
