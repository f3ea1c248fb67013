#pragma once

#include "otfs/estimator.hpp"
#include "otfs/predictor.hpp"

namespace otfs {

/**
 * DL-based P-IPIC: the P-IPIC skeleton with FNN-predicted columns inside
 * every coarse/fine/refinement argmax and the exact column computed only for
 * each detected or refined path. Direct column evaluations are therefore
 * bounded by 2 * P_max per call (tracked in EstimateState::diag).
 */
EstimateState dl_estimate(const Observation& obs, const OtfsConfig& cfg,
                          const EstimatorConfig& est, const PredictorPair& pair);

}  // namespace otfs
