#pragma once

#include <cstdint>
#include <vector>

#include "otfs/fnn.hpp"
#include "otfs/rng.hpp"

namespace otfs {

// Training recipe: mini-batch Adam on the L1 loss, learning rate halved
// every lr_period epochs.
struct TrainConfig {
    int num_samples = 200000;
    int batch = 1000;
    int epochs = 100;
    double lr0 = 0.001;
    double lr_drop = 0.5;
    int lr_period = 10;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    double holdout_fraction = 0.05;  // monitoring only, never gates the schedule
    std::uint64_t seed = 1;

    void validate() const;
    // 0-based epoch index: lr0 * lr_drop^floor(epoch / lr_period).
    double lr_at_epoch(int epoch) const;
};

struct TrainTrace {
    std::vector<double> epoch_loss;    // training mean-per-sample L1 per epoch
    std::vector<double> holdout_loss;  // empty when no holdout was carved out
    std::vector<double> lr;            // learning rate used in each epoch
};

// Trains `net` in place on inputs (2 x S) and targets (MN x S). The last
// holdout_fraction of the dataset is held out for monitoring. Throws on a
// non-finite loss (divergence detector).
TrainTrace train(FnnModel& net, const Eigen::MatrixXf& inputs,
                 const Eigen::MatrixXf& targets, const TrainConfig& tc, Rng& rng);

}  // namespace otfs
