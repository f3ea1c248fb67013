#pragma once

#include <cstdint>
#include <vector>

#include "otfs/common.hpp"
#include "otfs/config.hpp"
#include "otfs/kernel.hpp"
#include "otfs/rng.hpp"

namespace otfs {

struct Path {
    double tau = 0.0;   // delay [s]
    double nu = 0.0;    // Doppler shift [Hz]
    cplx alpha{0.0, 0.0};
};

// Per-path (delay, Doppler, gain) triples. Ground-truth sets are kept sorted
// by delay (canonical order); estimates keep detection order.
struct PathSet {
    std::vector<Path> paths;

    int count() const { return static_cast<int>(paths.size()); }
    void sort_by_delay();
    void validate() const;  // non-negative delays, finite gains
};

/**
 * Multipath scenario: fixed fractional delays, Rayleigh gains with an
 * exponential power-delay profile normalized to unit total mean power,
 * and Jakes-spectrum Dopplers nu_i = nu_max cos(theta_i).
 */
struct ScenarioConfig {
    std::vector<double> fixed_delays = {0.0, 2.3e-6, 3.15e-6, 7.7e-6};  // [s]
    double pdp_time_constant = 10e-6;  // [s]
    double max_delay = 10e-6;          // [s]
    double v_ue = 190.0;               // [m/s]
    std::uint64_t seed = 1;
    int num_realizations = 100;

    void validate() const;
};

struct Observation {
    CVec y;                 // length MN
    double sigma2 = 0.0;    // per-entry complex noise variance
    double psnr_db = 0.0;   // E_p / (MN sigma2) in dB
};

inline constexpr double kSpeedOfLight = 3e8;  // [m/s]

// sigma^2 = E_p / (MN * 10^(psnr_db / 10)).
double psnr_to_sigma2(const OtfsConfig& cfg, double psnr_db);
double sigma2_to_psnr_db(const OtfsConfig& cfg, double sigma2);

// nu_max = (v_ue / c) * f_c.
double max_doppler(const ScenarioConfig& scen, const OtfsConfig& cfg);

// Draws one channel realization. Per path (in delay order): first the Jakes
// angle theta_i, then the complex gain.
PathSet draw_channel(const ScenarioConfig& scen, const OtfsConfig& cfg, Rng& rng);

// y = sum_i alpha_i r(tau_i, nu_i) + n with i.i.d. CN(0, sigma2) noise.
Observation simulate_observation(const OtfsConfig& cfg, const PathSet& channel,
                                 double sigma2, Rng& rng);

// H_dd = sum_i alpha_i Upsilon(tau_i, nu_i); refuses MN > 4096 (use the
// streaming NMSE path for larger frames).
CMat assemble_channel_matrix(const OtfsConfig& cfg, const PathSet& channel);

}  // namespace otfs
