#pragma once

#include <span>

#include "otfs/channel.hpp"
#include "otfs/common.hpp"

namespace otfs {

// ||H_true - H_est||_F^2 / ||H_true||_F^2. Throws when the true channel is zero.
double nmse(const CMat& h_true, const CMat& h_est);

// Same ratio evaluated column by column from the path sets, so the MN x MN
// matrices are never materialized.
double nmse_streaming(const OtfsConfig& cfg, const PathSet& truth, const PathSet& est);

inline double to_db(double x) { return 10.0 * std::log10(x); }

// Arithmetic mean of detected path counts; throws on an empty result set.
double avg_paths(std::span<const int> counts);

}  // namespace otfs
