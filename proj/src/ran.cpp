#include "rancn/ran.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rancn/errors.hpp"
#include "rancn/rng.hpp"

namespace rancn::ran {

double distance_m(const Point& a, const Point& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

void RegionSpec::validate() const {
    if (width_m <= 0 || height_m <= 0) {
        throw ConfigError("region dimensions must be positive");
    }
    if (cell_positions.empty()) {
        throw ConfigError("region has no cells");
    }
    for (const auto& p : cell_positions) {
        if (p.x < 0 || p.x > width_m || p.y < 0 || p.y > height_m) {
            throw ConfigError("cell position outside region");
        }
    }
}

std::vector<UserTerminal> place_users(int count, const RegionSpec& region, std::uint64_t seed) {
    if (count < 0) throw DomainError("user count must be >= 0");
    region.validate();

    Rng rng(derive_seed(seed, "ran.placement"));
    std::vector<UserTerminal> users;
    users.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        UserTerminal ue;
        char id[16];
        std::snprintf(id, sizeof(id), "ue%04d", i);
        ue.id = id;
        ue.position.x = rng.uniform(0.0, region.width_m);
        ue.position.y = rng.uniform(0.0, region.height_m);

        std::size_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < region.cell_positions.size(); ++c) {
            const double d = distance_m(ue.position, region.cell_positions[c]);
            if (d < best_d) {
                best_d = d;
                best = c;
            }
        }
        char cell_id[16];
        std::snprintf(cell_id, sizeof(cell_id), "c%02zu", best);
        ue.serving_cell = cell_id;
        users.push_back(std::move(ue));
    }
    return users;
}

int poisson_user_count(double mean_count, std::uint64_t seed) {
    if (mean_count < 0) throw DomainError("poisson mean must be >= 0");
    Rng rng(derive_seed(seed, "ran.poisson_count"));
    return rng.poisson(mean_count);
}

double path_loss_db(double distance, const PathLossParams& params, std::uint64_t seed) {
    if (distance <= 0) throw DomainError("path loss needs distance > 0");
    if (params.d0_m <= 0) throw ConfigError("reference distance d0 must be > 0");
    if (params.exponent_n <= 0) throw ConfigError("path loss exponent must be > 0");
    if (params.shadowing_sigma_db < 0) throw ConfigError("shadowing sigma must be >= 0");

    double pl = params.pl_d0_db + 10.0 * params.exponent_n * std::log10(distance / params.d0_m);
    if (params.shadowing_sigma_db > 0) {
        Rng rng(derive_seed(seed, "ran.shadowing"));
        pl += rng.normal(0.0, params.shadowing_sigma_db);
    }
    return pl;
}

double snr_linear(const UserTerminal& user, const Cell& cell, const PathLossParams& pl,
                  const RadioParams& radio, int n_prbs, std::uint64_t shadowing_seed) {
    if (n_prbs < 1) throw DomainError("snr needs n_prbs >= 1");
    if (std::isinf(cell.tx_power_dbm) && cell.tx_power_dbm < 0) return 0.0;  // cell off

    // The log-distance model is valid from the reference distance outward;
    // clamp users inside it to d0.
    const double d = std::max(distance_m(user.position, cell.position), pl.d0_m);
    const double loss_db = path_loss_db(d, pl, shadowing_seed);
    const double rx_dbm = cell.tx_power_dbm - loss_db;
    const double noise_dbm = radio.noise_density_dbm_hz +
                             10.0 * std::log10(static_cast<double>(n_prbs) * cell.prb_bandwidth_hz) +
                             radio.ue_noise_figure_db;
    return std::pow(10.0, (rx_dbm - noise_dbm) / 10.0);
}

double achievable_rate_bps(int n_prbs, double prb_bandwidth_hz, double snr) {
    if (n_prbs < 0) throw DomainError("rate needs n_prbs >= 0");
    if (snr < 0) throw DomainError("rate needs snr >= 0");
    if (n_prbs == 0 || snr == 0.0) return 0.0;
    return static_cast<double>(n_prbs) * prb_bandwidth_hz * std::log2(1.0 + snr);
}

int prbs_needed(double demand_bps, double snr, double prb_bandwidth_hz) {
    if (demand_bps <= 0) throw DomainError("prbs_needed requires demand > 0");
    if (snr < 0) throw DomainError("prbs_needed requires snr >= 0");
    if (snr == 0.0) return kNoPrbCount;

    const double per_prb = prb_bandwidth_hz * std::log2(1.0 + snr);
    // Start from the floating-point estimate, then settle the boundary by
    // direct evaluation so "demand == n * per_prb" lands exactly on n.
    int n = static_cast<int>(demand_bps / per_prb);
    if (n < 1) n = 1;
    while (achievable_rate_bps(n, prb_bandwidth_hz, snr) < demand_bps) ++n;
    while (n > 1 && achievable_rate_bps(n - 1, prb_bandwidth_hz, snr) >= demand_bps) --n;
    return n;
}

double prb_utilization(const Cell& cell, std::span<const UserTerminal> users) {
    long long assigned = 0;
    for (const auto& u : users) {
        if (u.serving_cell == cell.id) assigned += u.assigned_prbs;
    }
    if (assigned > cell.total_prbs) {
        throw IntegrityError("cell " + cell.id + " oversubscribed: " + std::to_string(assigned) +
                             " of " + std::to_string(cell.total_prbs) + " PRBs");
    }
    return static_cast<double>(assigned) / static_cast<double>(cell.total_prbs);
}

}  // namespace rancn::ran
