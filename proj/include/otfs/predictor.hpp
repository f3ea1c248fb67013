#pragma once

#include <atomic>
#include <memory>
#include <string>

#include "otfs/estimator.hpp"
#include "otfs/fnn.hpp"
#include "otfs/grid.hpp"
#include "otfs/kernel.hpp"
#include "otfs/rng.hpp"

namespace otfs {

// Input normalization: delay divided by tau_scale lands in [0, 1], Doppler
// divided by nu_scale in [-1, 1] over the training domain.
struct NormalizationSpec {
    double tau_scale = 0.0;  // [s]
    double nu_scale = 0.0;   // [Hz]

    // tau_scale = T (one symbol duration), nu_scale = delta_f / 2.
    static NormalizationSpec for_config(const OtfsConfig& cfg);
    void validate() const;
};

struct PredictorTelemetry {
    std::atomic<std::uint64_t> out_of_domain_calls{0};
};

/**
 * Two-FNN surrogate for the exact CDDPM column: fnn_real/fnn_imag predict the
 * real and imaginary parts of the TF image of r(tau, nu); SFFT brings the
 * combined prediction back to the DD domain. Immutable after construction,
 * safe for concurrent inference.
 */
struct PredictorPair {
    FnnModel fnn_real;
    FnnModel fnn_imag;
    OtfsConfig cfg;
    NormalizationSpec norm;
    std::shared_ptr<PredictorTelemetry> telemetry = std::make_shared<PredictorTelemetry>();

    // Untrained pair with the given hidden widths.
    static PredictorPair make_untrained(const OtfsConfig& cfg, int l1, int l2,
                                        std::uint64_t seed);

    void validate() const;
    // Throws when the pair's frame parameters do not match `other`.
    void check_compatible(const OtfsConfig& other) const;
};

struct Dataset {
    Eigen::MatrixXf inputs;       // 2 x S, normalized (tau, nu) pairs
    Eigen::MatrixXf target_real;  // MN x S
    Eigen::MatrixXf target_imag;  // MN x S
    OtfsConfig cfg;
    NormalizationSpec norm;
};

// Real/imag parts of vec(ISFFT(unvec(r(tau, nu)))), the training target.
void tf_target(const OtfsConfig& cfg, double tau, double nu,
               Eigen::VectorXd& real_part, Eigen::VectorXd& imag_part);

// Samples (tau, nu) i.i.d. uniform over [0, tau_scale] x [-nu_scale, nu_scale];
// draw order per sample: tau then nu.
Dataset generate_dataset(const OtfsConfig& cfg, const NormalizationSpec& norm,
                         int n_samples, Rng& rng);

// Runs both networks on the normalized pair and maps the combined TF
// prediction back to a DD-domain CDDPM column.
CddpmColumn predict_cddpm_column(const PredictorPair& pair, double tau, double nu);

// Latency sizing rule: L1 * L2 < N^3 M^4 / 2 (strict), in the regime
// L1, L2 > MN where the second hidden layer dominates.
struct SizingCheck {
    bool latency_budget_ok = false;    // L1 * L2 < N^3 M^4 / 2
    bool hidden_wider_than_output = false;  // L1 > MN and L2 > MN
    double product = 0.0;
    double budget = 0.0;

    bool ok() const { return latency_budget_ok; }
};
SizingCheck validate_latency_sizing(const OtfsConfig& cfg, long l1, long l2);

// Self-describing model container; see README for the exact byte layout.
void save_model(const PredictorPair& pair, const std::string& path);
PredictorPair load_model(const std::string& path);

void save_dataset(const Dataset& ds, const std::string& path);
Dataset load_dataset(const std::string& path);

// ColumnSource running batched FNN predictions (dl-pipic argmax loops).
class FnnColumnSource final : public ColumnSource {
public:
    explicit FnnColumnSource(const PredictorPair& pair);
    CMat columns(std::span<const DdPair> pairs) const override;
    int frame_size() const override { return pair_.cfg.grid_size(); }

private:
    const PredictorPair& pair_;
};

// Exact columns pushed through the same TF-domain plumbing the predictor
// uses (networks replaced by exact-target lookup). Used to test that the
// DL code path is plumbing-identical to the model-based one.
class TfOracleColumnSource final : public ColumnSource {
public:
    explicit TfOracleColumnSource(const OtfsConfig& cfg) : cfg_(cfg) { cfg_.validate(); }
    CMat columns(std::span<const DdPair> pairs) const override;
    int frame_size() const override { return cfg_.grid_size(); }

private:
    OtfsConfig cfg_;
};

}  // namespace otfs
