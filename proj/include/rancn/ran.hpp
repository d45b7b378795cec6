#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rancn::ran {

struct Point {
    double x = 0;
    double y = 0;
};

double distance_m(const Point& a, const Point& b);

// Spatial domain users are dropped into. Cell positions must lie inside.
struct RegionSpec {
    double width_m = 1000;
    double height_m = 1000;
    std::vector<Point> cell_positions;

    void validate() const;  // throws ConfigError
};

// Log-distance model: PL(d) = PL(d0) + 10*n*log10(d/d0) + X_sigma.
struct PathLossParams {
    double pl_d0_db = 40.0;         // loss at reference distance
    double d0_m = 1.0;              // reference distance
    double exponent_n = 3.5;        // path loss exponent
    double shadowing_sigma_db = 0;  // 0 disables shadowing
};

struct RadioParams {
    double noise_density_dbm_hz = -174.0;
    double ue_noise_figure_db = 7.0;
};

struct Cell {
    std::string id;
    Point position;
    double tx_power_dbm = 43.0;
    int total_prbs = 100;
    double prb_bandwidth_hz = 180e3;
    // slice id -> guaranteed fraction of total_prbs; sum over slices <= 1
    std::map<std::string, double> prb_reservation;
};

struct UserTerminal {
    std::string id;
    Point position;
    std::string slice_id;
    std::string serving_cell;
    int assigned_prbs = 0;
};

// Marker for "no n satisfies the demand" (snr == 0). Distinct from errors.
inline constexpr int kNoPrbCount = -1;

// Fixed-count uniform placement over the region (binomial point process,
// the fixed-N conditioning of a PPP), each user attached to its nearest
// cell. Deterministic given seed.
std::vector<UserTerminal> place_users(int count, const RegionSpec& region, std::uint64_t seed);

// Random-N companion for PPP fidelity: draws N ~ Poisson(mean_count).
int poisson_user_count(double mean_count, std::uint64_t seed);

// Large-scale loss in dB at the given distance. The seed pins the shadowing
// draw; with sigma == 0 the result is exactly the deterministic term.
double path_loss_db(double distance_m, const PathLossParams& params, std::uint64_t seed);

// Linear SNR for a user-cell link when receiving over n_prbs PRBs of noise
// bandwidth. tx_power of -inf is the "cell off" sentinel and yields 0.
double snr_linear(const UserTerminal& user, const Cell& cell, const PathLossParams& pl,
                  const RadioParams& radio, int n_prbs, std::uint64_t shadowing_seed);

// Shannon rate over n_prbs PRBs at the given (per-PRB) linear SNR.
double achievable_rate_bps(int n_prbs, double prb_bandwidth_hz, double snr);

// Smallest n with achievable_rate(n, bw, snr) >= demand; kNoPrbCount when
// snr == 0 makes any n insufficient.
int prbs_needed(double demand_bps, double snr, double prb_bandwidth_hz);

// Fraction of the cell's PRB pool booked by the given users.
double prb_utilization(const Cell& cell, std::span<const UserTerminal> users);

}  // namespace rancn::ran
