#include "otfs/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace otfs {

void PathSet::sort_by_delay() {
    std::stable_sort(paths.begin(), paths.end(),
                     [](const Path& a, const Path& b) { return a.tau < b.tau; });
}

void PathSet::validate() const {
    for (const Path& p : paths) {
        if (!(p.tau >= 0.0)) {
            throw std::invalid_argument("PathSet: delays must be non-negative");
        }
        if (!std::isfinite(p.nu) || !std::isfinite(p.alpha.real()) ||
            !std::isfinite(p.alpha.imag())) {
            throw std::invalid_argument("PathSet: non-finite path parameters");
        }
    }
}

void ScenarioConfig::validate() const {
    if (fixed_delays.empty()) {
        throw std::invalid_argument("ScenarioConfig: at least one path delay required");
    }
    for (double d : fixed_delays) {
        if (!(d >= 0.0) || d > max_delay) {
            throw std::invalid_argument("ScenarioConfig: delays must lie in [0, max_delay]");
        }
    }
    if (!(pdp_time_constant > 0.0)) {
        throw std::invalid_argument("ScenarioConfig: pdp_time_constant must be positive");
    }
    if (!(v_ue >= 0.0)) {
        throw std::invalid_argument("ScenarioConfig: v_ue must be non-negative");
    }
    if (num_realizations < 1) {
        throw std::invalid_argument("ScenarioConfig: num_realizations must be >= 1");
    }
}

double psnr_to_sigma2(const OtfsConfig& cfg, double psnr_db) {
    cfg.validate();
    return cfg.E_p / (cfg.grid_size() * std::pow(10.0, psnr_db / 10.0));
}

double sigma2_to_psnr_db(const OtfsConfig& cfg, double sigma2) {
    return 10.0 * std::log10(cfg.E_p / (cfg.grid_size() * sigma2));
}

double max_doppler(const ScenarioConfig& scen, const OtfsConfig& cfg) {
    return (scen.v_ue / kSpeedOfLight) * cfg.f_c;
}

PathSet draw_channel(const ScenarioConfig& scen, const OtfsConfig& cfg, Rng& rng) {
    scen.validate();
    cfg.validate();

    std::vector<double> delays = scen.fixed_delays;
    std::sort(delays.begin(), delays.end());

    // Exponential PDP, normalized so the mean total power is 1.
    std::vector<double> power(delays.size());
    double total = 0.0;
    for (size_t i = 0; i < delays.size(); ++i) {
        power[i] = std::exp(-delays[i] / scen.pdp_time_constant);
        total += power[i];
    }

    const double nu_max = max_doppler(scen, cfg);
    PathSet channel;
    channel.paths.reserve(delays.size());
    for (size_t i = 0; i < delays.size(); ++i) {
        Path p;
        p.tau = delays[i];
        const double theta = rng.uniform(0.0, 2.0 * kPi);
        p.nu = nu_max * std::cos(theta);
        p.alpha = rng.circular_gaussian(power[i] / total);
        channel.paths.push_back(p);
    }
    return channel;
}

Observation simulate_observation(const OtfsConfig& cfg, const PathSet& channel,
                                 double sigma2, Rng& rng) {
    cfg.validate();
    channel.validate();
    if (channel.paths.empty()) {
        throw std::invalid_argument("simulate_observation: channel must be non-empty");
    }
    if (!(sigma2 >= 0.0)) {
        throw std::invalid_argument("simulate_observation: sigma2 must be non-negative");
    }

    Observation obs;
    obs.sigma2 = sigma2;
    obs.psnr_db = sigma2 > 0.0 ? sigma2_to_psnr_db(cfg, sigma2)
                               : std::numeric_limits<double>::infinity();
    obs.y = CVec::Zero(cfg.grid_size());
    for (const Path& p : channel.paths) {
        obs.y += p.alpha * cddpm_column_exact(cfg, p.tau, p.nu).values;
    }
    for (Eigen::Index i = 0; i < obs.y.size(); ++i) {
        obs.y[i] += rng.circular_gaussian(sigma2);
    }
    return obs;
}

CMat assemble_channel_matrix(const OtfsConfig& cfg, const PathSet& channel) {
    cfg.validate();
    channel.validate();
    const int mn = cfg.grid_size();
    if (mn > 4096) {
        throw std::invalid_argument(
            "assemble_channel_matrix: MN > 4096; use the column-streaming NMSE path");
    }
    CMat h = CMat::Zero(mn, mn);
    for (const Path& p : channel.paths) {
        const UpsilonEvaluator ev(cfg, p.tau, p.nu);
        for (int col = 0; col < mn; ++col) {
            h.col(col) += p.alpha * ev.column(col);
        }
    }
    return h;
}

}  // namespace otfs
