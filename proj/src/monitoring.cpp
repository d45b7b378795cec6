#include "rancn/monitoring.hpp"

#include <algorithm>
#include <sstream>

#include "rancn/errors.hpp"
#include "rancn/strutil.hpp"

namespace rancn::monitor {

MetricSchema::MetricSchema() {
    units_ = {
        {"prb_utilization", "fraction"},
        {"user_density", "users"},
        {"handover_attempts", "count"},
        {"handover_successes", "count"},
        {"upf_processing_delay", "ms"},
        {"session_count", "count"},
        {"qos_violations", "count"},
        {"sla_satisfied", "count"},
    };
}

bool MetricSchema::is_registered(const std::string& metric) const {
    return units_.count(metric) > 0;
}

std::string MetricSchema::unit_of(const std::string& metric) const {
    auto it = units_.find(metric);
    if (it == units_.end()) throw NotFoundError("unregistered metric " + metric);
    return it->second;
}

std::vector<std::string> MetricSchema::names() const {
    std::vector<std::string> out;
    for (const auto& [name, unit] : units_) out.push_back(name);
    return out;
}

void MetricSchema::register_metric(const std::string& name, const std::string& unit) {
    if (units_.count(name)) throw DuplicateError("metric already registered: " + name);
    units_[name] = unit;
}

std::string encode_labels(const std::map<std::string, std::string>& labels) {
    std::string out;
    for (const auto& [k, v] : labels) {
        if (!out.empty()) out += ';';
        out += k + "=" + v;
    }
    return out;
}

MonitoringDb::MonitoringDb(MetricSchema schema) : schema_(std::move(schema)) {}

void MonitoringDb::append(const MetricRecord& record) {
    if (!schema_.is_registered(record.metric)) {
        throw ConfigError("metric not in schema: " + record.metric);
    }
    const std::string series = record.metric + "|" + encode_labels(record.labels);
    auto it = last_timestamp_.find(series);
    if (it != last_timestamp_.end() && record.timestamp < it->second) {
        throw IntegrityError("time regression on series " + series + ": " +
                             std::to_string(record.timestamp) + " < " +
                             std::to_string(it->second));
    }
    last_timestamp_[series] = record.timestamp;
    records_.push_back(record);
}

int MonitoringDb::ingest_snapshot(const slicing::NetworkState& state) {
    int written = 0;
    const long t = state.tick;

    for (const auto& cell : state.cells) {
        int attached = 0;
        for (const auto& u : state.users) {
            if (u.serving_cell == cell.id) ++attached;
        }
        append({t, "prb_utilization", {{"cell", cell.id}},
                ran::prb_utilization(cell, state.users)});
        append({t, "user_density", {{"cell", cell.id}}, static_cast<double>(attached)});
        written += 2;
    }

    for (const auto& [slice_id, spec] : state.slices) {
        int sessions = 0;
        int satisfied = 0;
        int violations = 0;
        for (const auto& u : state.users) {
            if (u.slice_id != slice_id) continue;
            if (state.decision(u.id).admitted) ++sessions;
            if (slicing::evaluate_user_sla(state, u.id).satisfied) {
                ++satisfied;
            } else {
                ++violations;
            }
        }
        append({t, "session_count", {{"slice", slice_id}}, static_cast<double>(sessions)});
        append({t, "qos_violations", {{"slice", slice_id}}, static_cast<double>(violations)});
        append({t, "sla_satisfied", {{"slice", slice_id}}, static_cast<double>(satisfied)});
        written += 3;
    }

    if (!state.topology.embeddings.empty()) {
        double total = 0;
        for (const auto& [req_id, emb] : state.topology.embeddings) total += emb.total_latency_ms;
        append({t, "upf_processing_delay", {},
                total / static_cast<double>(state.topology.embeddings.size())});
        written += 1;
    }
    return written;
}

namespace {

struct Cursor {
    const std::string& text;
    std::size_t pos = 0;

    void skip_spaces() {
        while (pos < text.size() && text[pos] == ' ') ++pos;
    }
    bool done() {
        skip_spaces();
        return pos >= text.size();
    }
    std::string next_token() {
        skip_spaces();
        const std::size_t start = pos;
        while (pos < text.size() && text[pos] != ' ') ++pos;
        return text.substr(start, pos - start);
    }
    std::string peek_token() {
        const std::size_t save = pos;
        std::string tok = next_token();
        pos = save;
        return tok;
    }
};

long parse_tick(const std::string& tok, std::size_t at) {
    std::size_t used = 0;
    long value = 0;
    try {
        value = std::stol(tok, &used);
    } catch (const std::exception&) {
        throw ParseError("expected integer tick, got '" + tok + "'", at);
    }
    if (used != tok.size()) throw ParseError("expected integer tick, got '" + tok + "'", at);
    return value;
}

}  // namespace

Query parse_query(const std::string& text) {
    Cursor cur{text};
    Query q;

    std::size_t at = cur.pos;
    if (cur.next_token() != "GET") throw ParseError("query must start with GET", at);

    cur.skip_spaces();
    at = cur.pos;
    q.metric = cur.next_token();
    if (q.metric.empty()) throw ParseError("missing metric name", at);

    if (!cur.done() && cur.peek_token() == "WHERE") {
        cur.next_token();
        while (true) {
            cur.skip_spaces();
            at = cur.pos;
            const std::string pair = cur.next_token();
            const auto eq = pair.find('=');
            if (eq == std::string::npos || eq == 0 || eq + 1 >= pair.size()) {
                throw ParseError("expected <label>=<value>, got '" + pair + "'", at);
            }
            q.label_filter[pair.substr(0, eq)] = pair.substr(eq + 1);
            if (!cur.done() && cur.peek_token() == "AND") {
                cur.next_token();
                continue;
            }
            break;
        }
    }

    if (!cur.done() && cur.peek_token() == "RANGE") {
        cur.next_token();
        cur.skip_spaces();
        at = cur.pos;
        q.range_begin = parse_tick(cur.next_token(), at);
        cur.skip_spaces();
        at = cur.pos;
        const std::string t1 = cur.next_token();
        if (t1.empty()) throw ParseError("RANGE needs two ticks", at);
        q.range_end = parse_tick(t1, at);
    }

    if (!cur.done() && cur.peek_token() == "AGG") {
        cur.next_token();
        cur.skip_spaces();
        at = cur.pos;
        const std::string f = cur.next_token();
        if (f == "last") q.agg = Aggregate::last;
        else if (f == "mean") q.agg = Aggregate::mean;
        else if (f == "max") q.agg = Aggregate::max;
        else if (f == "min") q.agg = Aggregate::min;
        else if (f == "sum") q.agg = Aggregate::sum;
        else throw ParseError("unknown aggregate '" + f + "'", at);
    }

    if (!cur.done()) {
        throw ParseError("unexpected trailing token '" + cur.peek_token() + "'", cur.pos);
    }
    return q;
}

std::string print_query(const Query& q) {
    std::ostringstream out;
    out << "GET " << q.metric;
    bool first = true;
    for (const auto& [k, v] : q.label_filter) {
        out << (first ? " WHERE " : " AND ") << k << '=' << v;
        first = false;
    }
    if (q.range_begin && q.range_end) {
        out << " RANGE " << *q.range_begin << ' ' << *q.range_end;
    }
    switch (q.agg) {
        case Aggregate::none: break;
        case Aggregate::last: out << " AGG last"; break;
        case Aggregate::mean: out << " AGG mean"; break;
        case Aggregate::max: out << " AGG max"; break;
        case Aggregate::min: out << " AGG min"; break;
        case Aggregate::sum: out << " AGG sum"; break;
    }
    return out.str();
}

QueryResult MonitoringDb::query(const std::string& text) const { return run(parse_query(text)); }

QueryResult MonitoringDb::run(const Query& q) const {
    if (!schema_.is_registered(q.metric)) {
        throw ConfigError("metric not in schema: " + q.metric);
    }

    QueryResult result;
    for (const auto& rec : records_) {
        if (rec.metric != q.metric) continue;
        if (q.range_begin && rec.timestamp < *q.range_begin) continue;
        if (q.range_end && rec.timestamp > *q.range_end) continue;
        bool match = true;
        for (const auto& [k, v] : q.label_filter) {
            auto it = rec.labels.find(k);
            if (it == rec.labels.end() || it->second != v) {
                match = false;
                break;
            }
        }
        if (match) result.rows.push_back(rec);
    }
    std::stable_sort(result.rows.begin(), result.rows.end(),
                     [](const MetricRecord& a, const MetricRecord& b) {
                         if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
                         return encode_labels(a.labels) < encode_labels(b.labels);
                     });

    if (q.agg == Aggregate::none) return result;

    result.is_aggregate = true;
    if (result.rows.empty()) {
        result.rows.clear();
        return result;  // empty aggregate marker
    }
    double value = 0;
    switch (q.agg) {
        case Aggregate::last: value = result.rows.back().value; break;
        case Aggregate::sum:
        case Aggregate::mean: {
            for (const auto& r : result.rows) value += r.value;
            if (q.agg == Aggregate::mean) value /= static_cast<double>(result.rows.size());
            break;
        }
        case Aggregate::max: {
            value = result.rows.front().value;
            for (const auto& r : result.rows) value = std::max(value, r.value);
            break;
        }
        case Aggregate::min: {
            value = result.rows.front().value;
            for (const auto& r : result.rows) value = std::min(value, r.value);
            break;
        }
        case Aggregate::none: break;
    }
    result.aggregate = value;
    result.rows.clear();
    return result;
}

std::string MonitoringDb::export_csv() const {
    std::ostringstream out;
    out << "timestamp,metric,labels,value\n";
    for (const auto& rec : records_) {
        out << rec.timestamp << ',' << rec.metric << ',' << encode_labels(rec.labels) << ','
            << format_double(rec.value) << '\n';
    }
    return out.str();
}

std::string render_result(const QueryResult& result) {
    if (result.is_aggregate) {
        if (!result.aggregate) return "(empty)";
        return format_double(*result.aggregate);
    }
    if (result.rows.empty()) return "(no rows)";
    std::ostringstream out;
    bool first = true;
    for (const auto& r : result.rows) {
        if (!first) out << "; ";
        first = false;
        out << "t=" << r.timestamp;
        const std::string labels = encode_labels(r.labels);
        if (!labels.empty()) out << ' ' << labels;
        out << " value=" << format_double(r.value);
    }
    return out.str();
}

}  // namespace rancn::monitor
