#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rancn/slicing.hpp"

namespace rancn::monitor {

struct MetricRecord {
    long timestamp = 0;  // control tick
    std::string metric;
    std::map<std::string, std::string> labels;  // cell / slice / node / tier
    double value = 0;
};

// Registered metric names with units. Handover metrics exist in the schema
// but are only written by a mobility extension, so queries on them may
// legally return empty.
class MetricSchema {
public:
    MetricSchema();
    bool is_registered(const std::string& metric) const;
    std::string unit_of(const std::string& metric) const;
    std::vector<std::string> names() const;
    void register_metric(const std::string& name, const std::string& unit);

private:
    std::map<std::string, std::string> units_;
};

enum class Aggregate { none, last, mean, max, min, sum };

struct Query {
    std::string metric;
    std::map<std::string, std::string> label_filter;
    std::optional<long> range_begin;  // inclusive
    std::optional<long> range_end;    // inclusive
    Aggregate agg = Aggregate::none;
};

// `GET <metric> [WHERE k=v {AND k=v}] [RANGE <t0> <t1>] [AGG last|mean|max|min|sum]`
// Keywords are case-sensitive. Throws ParseError with character position.
Query parse_query(const std::string& text);
std::string print_query(const Query& q);

struct QueryResult {
    bool is_aggregate = false;
    std::optional<double> aggregate;   // empty marker when no rows matched
    std::vector<MetricRecord> rows;    // sorted by timestamp, then label order
};

// Append-only in-memory time-series store for one run.
class MonitoringDb {
public:
    explicit MonitoringDb(MetricSchema schema = MetricSchema());

    const MetricSchema& schema() const { return schema_; }

    // Rejects unregistered metrics and per-series time regressions. Equal
    // timestamps are allowed; both records are retained.
    void append(const MetricRecord& record);

    // One record per cell for prb_utilization and user_density, per slice for
    // session_count / qos_violations / sla_satisfied, and one
    // upf_processing_delay when live embeddings exist. Returns records written.
    int ingest_snapshot(const slicing::NetworkState& state);

    QueryResult query(const std::string& text) const;
    QueryResult run(const Query& q) const;

    std::size_t size() const { return records_.size(); }
    const std::vector<MetricRecord>& records() const { return records_; }

    // `timestamp,metric,labels,value` with labels as `k=v;k=v` sorted by key.
    std::string export_csv() const;

private:
    MetricSchema schema_;
    std::vector<MetricRecord> records_;
    std::map<std::string, long> last_timestamp_;  // series key -> last tick
};

std::string encode_labels(const std::map<std::string, std::string>& labels);

// Human-readable rendering used for agent observations.
std::string render_result(const QueryResult& result);

}  // namespace rancn::monitor
