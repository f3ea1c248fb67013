#pragma once

#include <optional>
#include <span>
#include <vector>

#include "otfs/channel.hpp"
#include "otfs/common.hpp"
#include "otfs/config.hpp"
#include "otfs/kernel.hpp"

namespace otfs {

struct DdPair {
    double tau = 0.0;
    double nu = 0.0;
};

/**
 * Progressive interpath interference cancellation estimator parameters.
 *
 * eps_stop defaults to the noise-derived threshold 3 sqrt(MN sigma2) and is
 * only taken from here when explicitly overridden (noiseless test runs).
 */
struct EstimatorConfig {
    int P_max = 15;        // max detectable paths
    int s_max = 10;        // max fine-grid contraction iterations
    double eps_tau = 1e-10;  // fine delay spacing tolerance [s]
    double eps_nu = 1e-2;    // fine Doppler spacing tolerance [Hz]
    int m_tau = 10;        // fine-grid span/contraction along delay
    int n_nu = 10;         // fine-grid span/contraction along Doppler
    double lambda = 1e-5;  // RLS regularizer
    std::optional<double> eps_stop;  // residue stopping threshold override
    // Refinement coarse stage: +-1-bin neighborhood by default; the full
    // integer grid when set (fidelity experiments).
    bool refine_full_grid = false;

    void validate() const;
    double resolve_eps_stop(const OtfsConfig& cfg, double sigma2) const;
};

struct EstimateDiagnostics {
    int exact_column_evals = 0;   // direct CDDPM column computations
    int search_iterations = 0;
    int refined_paths = 0;        // paths refined before the early stop
    std::vector<double> search_residue_norms;  // ||e^(i)|| per search iteration
};

struct EstimateState {
    PathSet detected;   // path alphas mirror `gains`
    CVec gains;
    CMat columns;       // MN x P exact CDDPM columns of the detected paths
    CVec residue;       // y - R * gains
    double residue_norm = 0.0;
    EstimateDiagnostics diag;
};

/**
 * Evaluates CDDPM columns for batches of delay-Doppler hypotheses. This is
 * the single seam between the model-based estimator (exact columns) and the
 * DL-based one (FNN-predicted columns); both run the same estimator code.
 */
class ColumnSource {
public:
    virtual ~ColumnSource() = default;
    // One column per pair, MN rows.
    virtual CMat columns(std::span<const DdPair> pairs) const = 0;
    virtual int frame_size() const = 0;

    CVec column(const DdPair& pair) const;
};

class ExactColumnSource final : public ColumnSource {
public:
    explicit ExactColumnSource(const OtfsConfig& cfg) : cfg_(cfg) { cfg_.validate(); }
    CMat columns(std::span<const DdPair> pairs) const override;
    int frame_size() const override { return cfg_.grid_size(); }

private:
    OtfsConfig cfg_;
};

// Phi_e = |r^H e|^2 / ||r||^2. Throws on a zero-norm column.
double residue_cost(const CVec& column, const CVec& residue);

// Phi_y = y^H R (R^H R + lambda I)^{-1} R^H y via a stable solve.
double observation_cost(const CMat& r, const CVec& y, double lambda);

// alpha_hat = (R^H R + lambda I)^{-1} R^H y. lambda == 0 solves the
// least-squares problem directly (rank-revealing), never normal equations.
CVec rls_gains(const CMat& r, const CVec& y, double lambda);

// Argmax of Phi_e over the integer grid {0..M-1} dtau x {-floor(N/2)..ceil(N/2)-1} dnu.
// Ties break to the lowest delay, then lowest Doppler (scan order).
DdPair coarse_search(const CVec& residue, const OtfsConfig& cfg,
                     const EstimatorConfig& est, const ColumnSource& source);

// Iterative grid contraction around the coarse estimate; spacing shrinks by
// m_tau (n_nu) per level, negative delay candidates clamp to 0.
DdPair fine_search(DdPair coarse, const CVec& residue, const OtfsConfig& cfg,
                   const EstimatorConfig& est, const ColumnSource& source);

EstimateState search_phase(const Observation& obs, const OtfsConfig& cfg,
                           const EstimatorConfig& est, const ColumnSource& source);

EstimateState refinement_phase(EstimateState state, const Observation& obs,
                               const OtfsConfig& cfg, const EstimatorConfig& est,
                               const ColumnSource& source);

// search_phase followed by refinement_phase.
EstimateState estimate(const Observation& obs, const OtfsConfig& cfg,
                       const EstimatorConfig& est, const ColumnSource& source);

// Model-based P-IPIC: exact columns everywhere.
EstimateState estimate(const Observation& obs, const OtfsConfig& cfg,
                       const EstimatorConfig& est);

}  // namespace otfs
