#include "otfs/train.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace otfs {

void TrainConfig::validate() const {
    if (num_samples < 1 || batch < 1 || epochs < 1 || lr_period < 1) {
        throw std::invalid_argument("TrainConfig: counts must be positive");
    }
    if (!(lr0 > 0.0) || !(lr_drop > 0.0)) {
        throw std::invalid_argument("TrainConfig: lr0 and lr_drop must be positive");
    }
    if (!(adam_eps > 0.0) || !(adam_beta1 > 0.0) || adam_beta1 >= 1.0 ||
        !(adam_beta2 > 0.0) || adam_beta2 >= 1.0) {
        throw std::invalid_argument("TrainConfig: invalid Adam parameters");
    }
    if (holdout_fraction < 0.0 || holdout_fraction >= 1.0) {
        throw std::invalid_argument("TrainConfig: holdout_fraction must be in [0, 1)");
    }
}

double TrainConfig::lr_at_epoch(int epoch) const {
    return lr0 * std::pow(lr_drop, epoch / lr_period);
}

namespace {

struct AdamState {
    Eigen::MatrixXf m, v;

    explicit AdamState(const Eigen::MatrixXf& like)
        : m(Eigen::MatrixXf::Zero(like.rows(), like.cols())),
          v(Eigen::MatrixXf::Zero(like.rows(), like.cols())) {}

    void step(Eigen::MatrixXf& param, const Eigen::MatrixXf& grad,
              const TrainConfig& tc, double lr, long t) {
        const float b1 = static_cast<float>(tc.adam_beta1);
        const float b2 = static_cast<float>(tc.adam_beta2);
        m.array() = b1 * m.array() + (1.0f - b1) * grad.array();
        v.array() = b2 * v.array() + (1.0f - b2) * grad.array().square();
        const float corr1 = 1.0f - std::pow(b1, static_cast<float>(t));
        const float corr2 = 1.0f - std::pow(b2, static_cast<float>(t));
        const float lrf = static_cast<float>(lr);
        const float eps = static_cast<float>(tc.adam_eps);
        param.array() -= (lrf / corr1) * m.array() / ((v.array() / corr2).sqrt() + eps);
    }
};

void fisher_yates(std::vector<int>& idx, Rng& rng) {
    for (size_t i = idx.size(); i > 1; --i) {
        const size_t j = static_cast<size_t>(rng.uniform() * static_cast<double>(i));
        std::swap(idx[i - 1], idx[j < i ? j : i - 1]);
    }
}

}  // namespace

TrainTrace train(FnnModel& net, const Eigen::MatrixXf& inputs,
                 const Eigen::MatrixXf& targets, const TrainConfig& tc, Rng& rng) {
    tc.validate();
    const Eigen::Index total = inputs.cols();
    if (total == 0) throw std::invalid_argument("train: empty dataset");
    if (targets.cols() != total) throw std::invalid_argument("train: target count mismatch");
    if (inputs.rows() != net.dims[0] || targets.rows() != net.dims[3]) {
        throw std::invalid_argument("train: dataset dimensions do not match the network");
    }

    Eigen::Index holdout = static_cast<Eigen::Index>(
        std::floor(tc.holdout_fraction * static_cast<double>(total)));
    if (total - holdout < 1) holdout = 0;
    const Eigen::Index train_count = total - holdout;

    FnnGradients<float> grads = FnnGradients<float>::zeros_like(net);
    AdamState aw1(net.w1), aw2(net.w2), aw3(net.w3);
    AdamState ab1(net.b1), ab2(net.b2), ab3(net.b3);

    std::vector<int> order(static_cast<size_t>(train_count));
    std::iota(order.begin(), order.end(), 0);

    Eigen::MatrixXf bx(inputs.rows(), tc.batch);
    Eigen::MatrixXf bt(targets.rows(), tc.batch);

    TrainTrace trace;
    long t = 0;
    for (int epoch = 0; epoch < tc.epochs; ++epoch) {
        const double lr = tc.lr_at_epoch(epoch);
        trace.lr.push_back(lr);
        fisher_yates(order, rng);

        double loss_sum = 0.0;
        Eigen::Index seen = 0;
        for (Eigen::Index start = 0; start < train_count; start += tc.batch) {
            const Eigen::Index b = std::min<Eigen::Index>(tc.batch, train_count - start);
            for (Eigen::Index k = 0; k < b; ++k) {
                bx.col(k) = inputs.col(order[static_cast<size_t>(start + k)]);
                bt.col(k) = targets.col(order[static_cast<size_t>(start + k)]);
            }
            const float loss = l1_loss_and_gradients<float>(
                net, bx.leftCols(b), bt.leftCols(b), grads);
            if (!std::isfinite(loss)) {
                throw std::runtime_error("train: non-finite loss at epoch " +
                                         std::to_string(epoch) + ", batch offset " +
                                         std::to_string(start) + " (diverged)");
            }
            loss_sum += static_cast<double>(loss) * static_cast<double>(b);
            seen += b;

            ++t;
            aw1.step(net.w1, grads.w1, tc, lr, t);
            ab1.step(net.b1, grads.b1, tc, lr, t);
            aw2.step(net.w2, grads.w2, tc, lr, t);
            ab2.step(net.b2, grads.b2, tc, lr, t);
            aw3.step(net.w3, grads.w3, tc, lr, t);
            ab3.step(net.b3, grads.b3, tc, lr, t);
        }
        trace.epoch_loss.push_back(loss_sum / static_cast<double>(seen));

        if (holdout > 0) {
            trace.holdout_loss.push_back(static_cast<double>(l1_loss<float>(
                net, inputs.rightCols(holdout), targets.rightCols(holdout))));
        }
    }
    return trace;
}

}  // namespace otfs
