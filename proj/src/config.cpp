#include "rancn/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "rancn/digest.hpp"
#include "rancn/errors.hpp"
#include "rancn/strutil.hpp"

namespace rancn::exp {

namespace {

// Every legal key. Parsing rejects anything else (fail-fast on typos).
const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "scenario.n_users", "scenario.user_sweep", "scenario.slice_mix",
        "scenario.region_width_m", "scenario.region_height_m", "scenario.cells",
        "scenario.poisson_user_count",
        "ran.total_prbs", "ran.prb_bandwidth_hz", "ran.tx_power_dbm", "ran.pl_d0_db",
        "ran.d0_m", "ran.pathloss_exponent", "ran.shadowing_sigma_db",
        "ran.noise_density_dbm_hz", "ran.noise_figure_db",
        "cn.fat_tree_k", "cn.server_compute_units", "cn.core_link_gbps", "cn.agg_link_gbps",
        "cn.edge_link_gbps", "cn.link_delay_ms", "cn.packet_size_bytes", "cn.vnf_compute_min",
        "cn.vnf_compute_max", "cn.vnf_processing_ms",
        "slice.embb.rate_floor_mbps", "slice.embb.latency_budget_ms", "slice.embb.flow_mbps",
        "slice.embb.chain_min", "slice.embb.chain_max",
        "slice.urllc.rate_floor_mbps", "slice.urllc.latency_budget_ms", "slice.urllc.flow_mbps",
        "slice.urllc.chain_min", "slice.urllc.chain_max",
        "run.controllers", "run.seeds", "run.seed_base", "run.seed_count", "run.output_dir",
        "run.workers",
        "agent.episode_budget", "agent.context_char_limit", "agent.short_term_window",
        "agent.retrieve_top_k", "agent.reasoner",
        "heuristic.prb_hi_watermark", "heuristic.latency_watermark_ms",
        "heuristic.prb_step_percent", "heuristic.bandwidth_step_gbps",
        "policy.prb_reservation_min_pct", "policy.prb_reservation_max_pct",
        "policy.prb_reservation_max_delta_pct", "policy.bandwidth_scale_min",
        "policy.bandwidth_scale_max", "policy.bandwidth_max_delta_gbps",
        "policy.compute_scale_min", "policy.compute_scale_max", "policy.compute_max_delta_units",
        "policy.admission_cap_min", "policy.admission_cap_max", "policy.admission_cap_max_delta",
        "policy.max_directives_per_episode",
        "oracle.cap",
        "external.endpoint", "external.model", "external.timeout_s", "external.max_retries",
        "external.temperature", "external.max_request_bytes",
    };
    return keys;
}

class KeyValues {
public:
    explicit KeyValues(const std::string& text) {
        std::istringstream in(text);
        std::string line;
        int line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            line = trim(line);
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos) {
                throw ConfigError("line " + std::to_string(line_no) +
                                  ": expected `key = value`, got '" + line + "'");
            }
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (!known_keys().count(key)) {
                throw ConfigError("line " + std::to_string(line_no) + ": unknown key `" + key +
                                  "`");
            }
            if (values_.count(key)) {
                throw ConfigError("line " + std::to_string(line_no) + ": duplicate key `" + key +
                                  "`");
            }
            values_[key] = value;
        }
    }

    bool has(const std::string& key) const { return values_.count(key) > 0; }

    std::string str(const std::string& key, const std::string& fallback) const {
        auto it = values_.find(key);
        return it == values_.end() ? fallback : it->second;
    }

    double num(const std::string& key, double fallback) const {
        auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        char* end = nullptr;
        const double v = std::strtod(it->second.c_str(), &end);
        if (end != it->second.c_str() + it->second.size() || it->second.empty()) {
            throw ConfigError("`" + key + "`: expected a number, got '" + it->second + "'");
        }
        return v;
    }

    int integer(const std::string& key, int fallback) const {
        const double v = num(key, fallback);
        if (v != std::floor(v)) {
            throw ConfigError("`" + key + "`: expected an integer, got '" + str(key, "") + "'");
        }
        return static_cast<int>(v);
    }

    bool boolean(const std::string& key, bool fallback) const {
        auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        if (it->second == "true") return true;
        if (it->second == "false") return false;
        throw ConfigError("`" + key + "`: expected true or false, got '" + it->second + "'");
    }

private:
    std::map<std::string, std::string> values_;
};

std::vector<std::string> comma_list(const std::string& value) {
    std::vector<std::string> out;
    for (auto& part : split(value, ',')) {
        const std::string token = trim(part);
        if (!token.empty()) out.push_back(token);
    }
    return out;
}

void check(bool ok, const std::string& key, const std::string& message) {
    if (!ok) throw ConfigError("`" + key + "`: " + message);
}

}  // namespace

std::map<std::string, int> ExperimentConfig::mix_for(int n) const {
    int weight_total = 0;
    for (const auto& [slice_id, w] : slice_mix) weight_total += w;
    if (weight_total == 0) throw ConfigError("`scenario.slice_mix`: weights sum to zero");

    std::map<std::string, int> counts;
    std::vector<std::pair<double, std::string>> remainders;
    int assigned = 0;
    for (const auto& [slice_id, w] : slice_mix) {
        const double exact = static_cast<double>(w) * n / weight_total;
        counts[slice_id] = static_cast<int>(std::floor(exact));
        assigned += counts[slice_id];
        remainders.emplace_back(-(exact - counts[slice_id]), slice_id);  // largest first
    }
    std::sort(remainders.begin(), remainders.end());
    for (std::size_t i = 0; assigned < n; ++i, ++assigned) {
        counts[remainders[i % remainders.size()].second] += 1;
    }
    return counts;
}

ExperimentConfig parse_experiment_config(const std::string& text) {
    const KeyValues kv(text);
    ExperimentConfig cfg;

    cfg.n_users = kv.integer("scenario.n_users", cfg.n_users);
    check(cfg.n_users >= 0, "scenario.n_users", "must be >= 0");

    if (kv.has("scenario.user_sweep")) {
        cfg.user_sweep.clear();
        for (const auto& tok : comma_list(kv.str("scenario.user_sweep", ""))) {
            const int v = std::atoi(tok.c_str());
            check(v > 0, "scenario.user_sweep", "entries must be positive, got '" + tok + "'");
            cfg.user_sweep.push_back(v);
        }
    }

    if (kv.has("scenario.slice_mix")) {
        cfg.slice_mix.clear();
        for (const auto& tok : comma_list(kv.str("scenario.slice_mix", ""))) {
            const auto colon = tok.find(':');
            check(colon != std::string::npos, "scenario.slice_mix",
                  "expected <slice>:<count>, got '" + tok + "'");
            const std::string slice_id = trim(tok.substr(0, colon));
            const int count = std::atoi(tok.substr(colon + 1).c_str());
            check(count >= 0, "scenario.slice_mix", "count must be >= 0 in '" + tok + "'");
            cfg.slice_mix[slice_id] = count;
        }
        check(!cfg.slice_mix.empty(), "scenario.slice_mix", "must name at least one slice");
    }

    auto& sc = cfg.scenario;
    sc.region.width_m = kv.num("scenario.region_width_m", sc.region.width_m);
    sc.region.height_m = kv.num("scenario.region_height_m", sc.region.height_m);
    check(sc.region.width_m > 0, "scenario.region_width_m", "must be > 0");
    check(sc.region.height_m > 0, "scenario.region_height_m", "must be > 0");

    if (kv.has("scenario.cells")) {
        sc.region.cell_positions.clear();
        for (const auto& tok : split(kv.str("scenario.cells", ""), ';')) {
            const auto parts = comma_list(tok);
            check(parts.size() == 2, "scenario.cells", "expected `x,y` pairs, got '" + tok + "'");
            sc.region.cell_positions.push_back(
                {std::strtod(parts[0].c_str(), nullptr), std::strtod(parts[1].c_str(), nullptr)});
        }
    }
    check(!sc.region.cell_positions.empty(), "scenario.cells", "must list at least one cell");
    sc.poisson_user_count = kv.boolean("scenario.poisson_user_count", sc.poisson_user_count);

    sc.cell_total_prbs = kv.integer("ran.total_prbs", sc.cell_total_prbs);
    check(sc.cell_total_prbs >= 1, "ran.total_prbs", "must be >= 1");
    sc.prb_bandwidth_hz = kv.num("ran.prb_bandwidth_hz", sc.prb_bandwidth_hz);
    check(sc.prb_bandwidth_hz > 0, "ran.prb_bandwidth_hz", "must be > 0");
    sc.cell_tx_power_dbm = kv.num("ran.tx_power_dbm", sc.cell_tx_power_dbm);
    sc.pathloss.pl_d0_db = kv.num("ran.pl_d0_db", sc.pathloss.pl_d0_db);
    sc.pathloss.d0_m = kv.num("ran.d0_m", sc.pathloss.d0_m);
    check(sc.pathloss.d0_m > 0, "ran.d0_m", "must be > 0");
    sc.pathloss.exponent_n = kv.num("ran.pathloss_exponent", sc.pathloss.exponent_n);
    check(sc.pathloss.exponent_n > 0, "ran.pathloss_exponent", "must be > 0");
    sc.pathloss.shadowing_sigma_db = kv.num("ran.shadowing_sigma_db", sc.pathloss.shadowing_sigma_db);
    check(sc.pathloss.shadowing_sigma_db >= 0, "ran.shadowing_sigma_db", "must be >= 0");
    sc.radio.noise_density_dbm_hz = kv.num("ran.noise_density_dbm_hz", sc.radio.noise_density_dbm_hz);
    check(sc.radio.noise_density_dbm_hz < 0, "ran.noise_density_dbm_hz", "must be < 0");
    sc.radio.ue_noise_figure_db = kv.num("ran.noise_figure_db", sc.radio.ue_noise_figure_db);

    sc.fat_tree.k = kv.integer("cn.fat_tree_k", sc.fat_tree.k);
    check(sc.fat_tree.k >= 2 && sc.fat_tree.k % 2 == 0 && sc.fat_tree.k <= 16, "cn.fat_tree_k",
          "must be even and within [2,16], got " + std::to_string(sc.fat_tree.k));
    sc.fat_tree.server_compute_units =
        kv.num("cn.server_compute_units", sc.fat_tree.server_compute_units);
    check(sc.fat_tree.server_compute_units > 0, "cn.server_compute_units", "must be > 0");
    sc.fat_tree.core_link_bps = kv.num("cn.core_link_gbps", sc.fat_tree.core_link_bps / 1e9) * 1e9;
    sc.fat_tree.agg_link_bps = kv.num("cn.agg_link_gbps", sc.fat_tree.agg_link_bps / 1e9) * 1e9;
    sc.fat_tree.edge_link_bps = kv.num("cn.edge_link_gbps", sc.fat_tree.edge_link_bps / 1e9) * 1e9;
    check(sc.fat_tree.core_link_bps > 0, "cn.core_link_gbps", "must be > 0");
    check(sc.fat_tree.agg_link_bps > 0, "cn.agg_link_gbps", "must be > 0");
    check(sc.fat_tree.edge_link_bps > 0, "cn.edge_link_gbps", "must be > 0");
    sc.fat_tree.link_delay_ms = kv.num("cn.link_delay_ms", sc.fat_tree.link_delay_ms);
    check(sc.fat_tree.link_delay_ms >= 0, "cn.link_delay_ms", "must be >= 0");
    sc.fat_tree.packet_size_bytes = kv.num("cn.packet_size_bytes", sc.fat_tree.packet_size_bytes);
    check(sc.fat_tree.packet_size_bytes > 0, "cn.packet_size_bytes", "must be > 0");
    sc.vnf_compute_min = kv.integer("cn.vnf_compute_min", sc.vnf_compute_min);
    sc.vnf_compute_max = kv.integer("cn.vnf_compute_max", sc.vnf_compute_max);
    check(sc.vnf_compute_min >= 1 && sc.vnf_compute_min <= sc.vnf_compute_max,
          "cn.vnf_compute_min", "need 1 <= min <= max");
    sc.vnf_processing_ms = kv.num("cn.vnf_processing_ms", sc.vnf_processing_ms);
    check(sc.vnf_processing_ms >= 0, "cn.vnf_processing_ms", "must be >= 0");

    sc.slices.clear();
    {
        slicing::SliceSpec embb{"eMBB", slicing::SliceKind::embb,
                                kv.num("slice.embb.rate_floor_mbps", 50) * 1e6,
                                kv.num("slice.embb.latency_budget_ms", 100),
                                kv.integer("slice.embb.chain_min", 4),
                                kv.integer("slice.embb.chain_max", 6),
                                kv.num("slice.embb.flow_mbps", 50) * 1e6};
        slicing::SliceSpec urllc{"URLLC", slicing::SliceKind::urllc,
                                 kv.num("slice.urllc.rate_floor_mbps", 2) * 1e6,
                                 kv.num("slice.urllc.latency_budget_ms", 5),
                                 kv.integer("slice.urllc.chain_min", 2),
                                 kv.integer("slice.urllc.chain_max", 3),
                                 kv.num("slice.urllc.flow_mbps", 2) * 1e6};
        embb.validate();
        urllc.validate();
        sc.slices[embb.slice_id] = embb;
        sc.slices[urllc.slice_id] = urllc;
    }
    for (const auto& [slice_id, count] : cfg.slice_mix) {
        check(sc.slices.count(slice_id) > 0, "scenario.slice_mix",
              "unknown slice '" + slice_id + "'");
    }

    if (kv.has("run.controllers")) {
        cfg.controllers.clear();
        for (const auto& tok : comma_list(kv.str("run.controllers", ""))) {
            const auto kind = control::controller_from_string(tok);
            check(kind.has_value(), "run.controllers", "unknown controller '" + tok + "'");
            cfg.controllers.push_back(*kind);
        }
        check(!cfg.controllers.empty(), "run.controllers", "must list at least one controller");
    }

    if (kv.has("run.seeds")) {
        cfg.seeds.clear();
        for (const auto& tok : comma_list(kv.str("run.seeds", ""))) {
            char* end = nullptr;
            const auto seed = std::strtoull(tok.c_str(), &end, 10);
            check(end == tok.c_str() + tok.size() && !tok.empty(), "run.seeds",
                  "expected an unsigned integer, got '" + tok + "'");
            cfg.seeds.push_back(seed);
        }
    } else if (kv.has("run.seed_base") || kv.has("run.seed_count")) {
        const int base = kv.integer("run.seed_base", 1);
        const int count = kv.integer("run.seed_count", 1);
        check(count >= 1, "run.seed_count", "must be >= 1");
        cfg.seeds.clear();
        for (int i = 0; i < count; ++i) cfg.seeds.push_back(static_cast<std::uint64_t>(base + i));
    }
    check(!cfg.seeds.empty(), "run.seeds", "must provide at least one seed");

    cfg.output_dir = kv.str("run.output_dir", cfg.output_dir);
    cfg.workers = kv.integer("run.workers", cfg.workers);
    check(cfg.workers >= 1, "run.workers", "must be >= 1");

    cfg.episode_budget = kv.integer("agent.episode_budget", cfg.episode_budget);
    check(cfg.episode_budget >= 1, "agent.episode_budget", "must be >= 1");
    cfg.context_char_limit = kv.integer("agent.context_char_limit", cfg.context_char_limit);
    check(cfg.context_char_limit >= 256, "agent.context_char_limit", "must be >= 256");
    cfg.short_term_window = kv.integer("agent.short_term_window", cfg.short_term_window);
    check(cfg.short_term_window >= 1, "agent.short_term_window", "must be >= 1");
    cfg.retrieve_top_k = kv.integer("agent.retrieve_top_k", cfg.retrieve_top_k);
    check(cfg.retrieve_top_k >= 0, "agent.retrieve_top_k", "must be >= 0");
    cfg.reasoner = kv.str("agent.reasoner", cfg.reasoner);
    check(cfg.reasoner == "scripted" || cfg.reasoner == "heuristic" || cfg.reasoner == "external",
          "agent.reasoner", "must be scripted, heuristic or external");

    cfg.heuristic.prb_hi_watermark =
        kv.num("heuristic.prb_hi_watermark", cfg.heuristic.prb_hi_watermark);
    cfg.heuristic.latency_watermark_ms =
        kv.num("heuristic.latency_watermark_ms", cfg.heuristic.latency_watermark_ms);
    cfg.heuristic.prb_step_percent =
        kv.num("heuristic.prb_step_percent", cfg.heuristic.prb_step_percent);
    cfg.heuristic.bandwidth_step_gbps =
        kv.num("heuristic.bandwidth_step_gbps", cfg.heuristic.bandwidth_step_gbps);

    cfg.constraints.prb_reservation.min_value =
        kv.num("policy.prb_reservation_min_pct", 0) / 100.0;
    cfg.constraints.prb_reservation.max_value =
        kv.num("policy.prb_reservation_max_pct", 100) / 100.0;
    cfg.constraints.prb_reservation.max_episode_delta =
        kv.num("policy.prb_reservation_max_delta_pct", 20) / 100.0;
    cfg.constraints.core_bandwidth_scale.min_value = kv.num("policy.bandwidth_scale_min", 0.1);
    cfg.constraints.core_bandwidth_scale.max_value = kv.num("policy.bandwidth_scale_max", 4.0);
    cfg.constraints.core_bandwidth_scale.max_episode_delta =
        kv.num("policy.bandwidth_max_delta_gbps", 2.0) * 1e9;
    cfg.constraints.cn_compute_scale.min_value = kv.num("policy.compute_scale_min", 0.1);
    cfg.constraints.cn_compute_scale.max_value = kv.num("policy.compute_scale_max", 4.0);
    cfg.constraints.cn_compute_scale.max_episode_delta =
        kv.num("policy.compute_max_delta_units", 100);
    cfg.constraints.admission_cap.min_value = kv.num("policy.admission_cap_min", 0);
    cfg.constraints.admission_cap.max_value = kv.num("policy.admission_cap_max", 100000);
    cfg.constraints.admission_cap.max_episode_delta = kv.num("policy.admission_cap_max_delta", 1000);
    cfg.constraints.max_directives_per_episode =
        kv.integer("policy.max_directives_per_episode", 5);
    check(cfg.constraints.max_directives_per_episode >= 1, "policy.max_directives_per_episode",
          "must be >= 1");

    cfg.oracle_cap = kv.integer("oracle.cap", cfg.oracle_cap);
    check(cfg.oracle_cap >= 1, "oracle.cap", "must be >= 1");

    cfg.external.endpoint = kv.str("external.endpoint", cfg.external.endpoint);
    cfg.external.model = kv.str("external.model", cfg.external.model);
    cfg.external.timeout_s = kv.num("external.timeout_s", cfg.external.timeout_s);
    check(cfg.external.timeout_s > 0, "external.timeout_s", "must be > 0");
    cfg.external.max_retries = kv.integer("external.max_retries", cfg.external.max_retries);
    check(cfg.external.max_retries >= 0, "external.max_retries", "must be >= 0");
    cfg.external.temperature = kv.num("external.temperature", cfg.external.temperature);
    cfg.external.max_request_bytes = static_cast<std::size_t>(
        kv.integer("external.max_request_bytes", static_cast<int>(cfg.external.max_request_bytes)));

    int mix_total = 0;
    for (const auto& [slice_id, count] : cfg.slice_mix) mix_total += count;
    if (cfg.user_sweep.empty()) {
        check(mix_total == cfg.n_users, "scenario.slice_mix",
              "counts total " + std::to_string(mix_total) + " but scenario.n_users is " +
                  std::to_string(cfg.n_users));
    }
    return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_experiment_config(buf.str());
}

std::string ExperimentConfig::canonical_text() const {
    std::ostringstream out;
    out << "scenario.n_users = " << n_users << '\n';
    if (!user_sweep.empty()) {
        out << "scenario.user_sweep = ";
        for (std::size_t i = 0; i < user_sweep.size(); ++i) {
            out << (i ? "," : "") << user_sweep[i];
        }
        out << '\n';
    }
    out << "scenario.slice_mix = ";
    {
        bool first = true;
        for (const auto& [slice_id, count] : slice_mix) {
            out << (first ? "" : ",") << slice_id << ':' << count;
            first = false;
        }
    }
    out << '\n';
    out << "scenario.region_width_m = " << format_double(scenario.region.width_m) << '\n';
    out << "scenario.region_height_m = " << format_double(scenario.region.height_m) << '\n';
    out << "scenario.cells = ";
    for (std::size_t i = 0; i < scenario.region.cell_positions.size(); ++i) {
        const auto& p = scenario.region.cell_positions[i];
        out << (i ? ";" : "") << format_double(p.x) << ',' << format_double(p.y);
    }
    out << '\n';
    out << "scenario.poisson_user_count = " << (scenario.poisson_user_count ? "true" : "false")
        << '\n';
    out << "ran.total_prbs = " << scenario.cell_total_prbs << '\n';
    out << "ran.prb_bandwidth_hz = " << format_double(scenario.prb_bandwidth_hz) << '\n';
    out << "ran.tx_power_dbm = " << format_double(scenario.cell_tx_power_dbm) << '\n';
    out << "ran.pl_d0_db = " << format_double(scenario.pathloss.pl_d0_db) << '\n';
    out << "ran.d0_m = " << format_double(scenario.pathloss.d0_m) << '\n';
    out << "ran.pathloss_exponent = " << format_double(scenario.pathloss.exponent_n) << '\n';
    out << "ran.shadowing_sigma_db = " << format_double(scenario.pathloss.shadowing_sigma_db)
        << '\n';
    out << "ran.noise_density_dbm_hz = " << format_double(scenario.radio.noise_density_dbm_hz)
        << '\n';
    out << "ran.noise_figure_db = " << format_double(scenario.radio.ue_noise_figure_db) << '\n';
    out << "cn.fat_tree_k = " << scenario.fat_tree.k << '\n';
    out << "cn.server_compute_units = " << format_double(scenario.fat_tree.server_compute_units)
        << '\n';
    out << "cn.core_link_gbps = " << format_double(scenario.fat_tree.core_link_bps / 1e9) << '\n';
    out << "cn.agg_link_gbps = " << format_double(scenario.fat_tree.agg_link_bps / 1e9) << '\n';
    out << "cn.edge_link_gbps = " << format_double(scenario.fat_tree.edge_link_bps / 1e9) << '\n';
    out << "cn.link_delay_ms = " << format_double(scenario.fat_tree.link_delay_ms) << '\n';
    out << "cn.packet_size_bytes = " << format_double(scenario.fat_tree.packet_size_bytes) << '\n';
    out << "cn.vnf_compute_min = " << scenario.vnf_compute_min << '\n';
    out << "cn.vnf_compute_max = " << scenario.vnf_compute_max << '\n';
    out << "cn.vnf_processing_ms = " << format_double(scenario.vnf_processing_ms) << '\n';
    for (const auto& [slice_id, spec] : scenario.slices) {
        const std::string prefix =
            std::string("slice.") + (spec.kind == slicing::SliceKind::embb ? "embb" : "urllc");
        out << prefix << ".rate_floor_mbps = " << format_double(spec.rate_floor_bps / 1e6) << '\n';
        out << prefix << ".latency_budget_ms = " << format_double(spec.latency_budget_ms) << '\n';
        out << prefix << ".flow_mbps = " << format_double(spec.flow_bandwidth_bps / 1e6) << '\n';
        out << prefix << ".chain_min = " << spec.chain_min << '\n';
        out << prefix << ".chain_max = " << spec.chain_max << '\n';
    }
    out << "run.controllers = ";
    for (std::size_t i = 0; i < controllers.size(); ++i) {
        out << (i ? "," : "") << control::to_string(controllers[i]);
    }
    out << '\n';
    out << "run.seeds = ";
    for (std::size_t i = 0; i < seeds.size(); ++i) out << (i ? "," : "") << seeds[i];
    out << '\n';
    out << "run.output_dir = " << output_dir << '\n';
    out << "run.workers = " << workers << '\n';
    out << "agent.episode_budget = " << episode_budget << '\n';
    out << "agent.context_char_limit = " << context_char_limit << '\n';
    out << "agent.short_term_window = " << short_term_window << '\n';
    out << "agent.retrieve_top_k = " << retrieve_top_k << '\n';
    out << "agent.reasoner = " << reasoner << '\n';
    out << "heuristic.prb_hi_watermark = " << format_double(heuristic.prb_hi_watermark) << '\n';
    out << "heuristic.latency_watermark_ms = " << format_double(heuristic.latency_watermark_ms)
        << '\n';
    out << "heuristic.prb_step_percent = " << format_double(heuristic.prb_step_percent) << '\n';
    out << "heuristic.bandwidth_step_gbps = " << format_double(heuristic.bandwidth_step_gbps)
        << '\n';
    out << "policy.prb_reservation_min_pct = "
        << format_double(constraints.prb_reservation.min_value * 100) << '\n';
    out << "policy.prb_reservation_max_pct = "
        << format_double(constraints.prb_reservation.max_value * 100) << '\n';
    out << "policy.prb_reservation_max_delta_pct = "
        << format_double(constraints.prb_reservation.max_episode_delta * 100) << '\n';
    out << "policy.bandwidth_scale_min = "
        << format_double(constraints.core_bandwidth_scale.min_value) << '\n';
    out << "policy.bandwidth_scale_max = "
        << format_double(constraints.core_bandwidth_scale.max_value) << '\n';
    out << "policy.bandwidth_max_delta_gbps = "
        << format_double(constraints.core_bandwidth_scale.max_episode_delta / 1e9) << '\n';
    out << "policy.compute_scale_min = " << format_double(constraints.cn_compute_scale.min_value)
        << '\n';
    out << "policy.compute_scale_max = " << format_double(constraints.cn_compute_scale.max_value)
        << '\n';
    out << "policy.compute_max_delta_units = "
        << format_double(constraints.cn_compute_scale.max_episode_delta) << '\n';
    out << "policy.admission_cap_min = " << format_double(constraints.admission_cap.min_value)
        << '\n';
    out << "policy.admission_cap_max = " << format_double(constraints.admission_cap.max_value)
        << '\n';
    out << "policy.admission_cap_max_delta = "
        << format_double(constraints.admission_cap.max_episode_delta) << '\n';
    out << "policy.max_directives_per_episode = " << constraints.max_directives_per_episode
        << '\n';
    out << "oracle.cap = " << oracle_cap << '\n';
    out << "external.endpoint = " << external.endpoint << '\n';
    out << "external.model = " << external.model << '\n';
    out << "external.timeout_s = " << format_double(external.timeout_s) << '\n';
    out << "external.max_retries = " << external.max_retries << '\n';
    out << "external.temperature = " << format_double(external.temperature) << '\n';
    out << "external.max_request_bytes = " << external.max_request_bytes << '\n';
    return out.str();
}

std::uint64_t ExperimentConfig::digest() const {
    Digest d;
    d.feed(canonical_text());
    return d.value();
}

std::string default_config_text() { return ExperimentConfig{}.canonical_text(); }

}  // namespace rancn::exp
