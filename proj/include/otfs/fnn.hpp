#pragma once

#include <array>
#include <stdexcept>

#include "otfs/common.hpp"
#include "otfs/rng.hpp"

namespace otfs {

/**
 * Two-hidden-layer fully connected network: ReLU on both hidden layers,
 * linear output. Input is a normalized delay-Doppler pair (dimension 2),
 * output is one real MN-vector (the real or imaginary part of a TF CDDPM
 * column). Templated on the scalar so training runs in single precision
 * while gradient checks run in double.
 */
template <typename Scalar>
struct FnnNet {
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    std::array<int, 4> dims{};  // {2, L1, L2, MN}
    Mat w1, w2, w3;             // (out x in) per layer
    Vec b1, b2, b3;

    static FnnNet zeros(const std::array<int, 4>& layer_dims) {
        check_dims(layer_dims);
        FnnNet net;
        net.dims = layer_dims;
        net.w1 = Mat::Zero(layer_dims[1], layer_dims[0]);
        net.w2 = Mat::Zero(layer_dims[2], layer_dims[1]);
        net.w3 = Mat::Zero(layer_dims[3], layer_dims[2]);
        net.b1 = Vec::Zero(layer_dims[1]);
        net.b2 = Vec::Zero(layer_dims[2]);
        net.b3 = Vec::Zero(layer_dims[3]);
        return net;
    }

    // Symmetric uniform init scaled by fan-in: U(-1/sqrt(in), 1/sqrt(in)).
    // Fill order: w1, b1, w2, b2, w3, b3; matrices column by column.
    static FnnNet random_init(const std::array<int, 4>& layer_dims, Rng& rng) {
        FnnNet net = zeros(layer_dims);
        auto fill = [&rng](Mat& m, Vec& b, int fan_in) {
            const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
            for (Eigen::Index j = 0; j < m.cols(); ++j) {
                for (Eigen::Index i = 0; i < m.rows(); ++i) {
                    m(i, j) = static_cast<Scalar>(rng.uniform(-bound, bound));
                }
            }
            for (Eigen::Index i = 0; i < b.size(); ++i) {
                b[i] = static_cast<Scalar>(rng.uniform(-bound, bound));
            }
        };
        fill(net.w1, net.b1, layer_dims[0]);
        fill(net.w2, net.b2, layer_dims[1]);
        fill(net.w3, net.b3, layer_dims[2]);
        return net;
    }

    // Batched forward; x is (2 x B), result is (MN x B).
    Mat forward_batch(const Eigen::Ref<const Mat>& x) const {
        Mat h1 = ((w1 * x).colwise() + b1).cwiseMax(Scalar(0));
        Mat h2 = ((w2 * h1).colwise() + b2).cwiseMax(Scalar(0));
        return (w3 * h2).colwise() + b3;
    }

    Vec forward(const Eigen::Ref<const Vec>& x) const {
        Vec h1 = (w1 * x + b1).cwiseMax(Scalar(0));
        Vec h2 = (w2 * h1 + b2).cwiseMax(Scalar(0));
        return w3 * h2 + b3;
    }

    long param_count() const {
        return w1.size() + w2.size() + w3.size() + b1.size() + b2.size() + b3.size();
    }

    static void check_dims(const std::array<int, 4>& d) {
        if (d[0] != 2) throw std::invalid_argument("FnnNet: input dimension must be 2");
        if (d[1] < 1 || d[2] < 1 || d[3] < 1) {
            throw std::invalid_argument("FnnNet: layer dimensions must be positive");
        }
    }
};

using FnnModel = FnnNet<float>;

template <typename Scalar>
struct FnnGradients {
    using Mat = typename FnnNet<Scalar>::Mat;
    using Vec = typename FnnNet<Scalar>::Vec;
    Mat w1, w2, w3;
    Vec b1, b2, b3;

    static FnnGradients zeros_like(const FnnNet<Scalar>& net) {
        FnnGradients g;
        g.w1 = Mat::Zero(net.w1.rows(), net.w1.cols());
        g.w2 = Mat::Zero(net.w2.rows(), net.w2.cols());
        g.w3 = Mat::Zero(net.w3.rows(), net.w3.cols());
        g.b1 = Vec::Zero(net.b1.size());
        g.b2 = Vec::Zero(net.b2.size());
        g.b3 = Vec::Zero(net.b3.size());
        return g;
    }
};

// Mean-per-sample L1 loss over the batch (Eq.-style sum over output neurons)
// plus its gradients w.r.t. every weight and bias. The L1 subgradient at an
// exact zero difference is taken as 0, as is the ReLU subgradient at 0.
template <typename Scalar>
Scalar l1_loss_and_gradients(const FnnNet<Scalar>& net,
                             const Eigen::Ref<const typename FnnNet<Scalar>::Mat>& x,
                             const Eigen::Ref<const typename FnnNet<Scalar>::Mat>& target,
                             FnnGradients<Scalar>& grads) {
    using Mat = typename FnnNet<Scalar>::Mat;
    const Eigen::Index batch = x.cols();
    if (batch == 0) throw std::invalid_argument("l1_loss_and_gradients: empty batch");
    if (target.cols() != batch) {
        throw std::invalid_argument("l1_loss_and_gradients: batch size mismatch");
    }

    Mat z1 = (net.w1 * x).colwise() + net.b1;
    Mat h1 = z1.cwiseMax(Scalar(0));
    Mat z2 = (net.w2 * h1).colwise() + net.b2;
    Mat h2 = z2.cwiseMax(Scalar(0));
    Mat out = (net.w3 * h2).colwise() + net.b3;

    Mat diff = out - target;
    const Scalar loss = diff.cwiseAbs().sum() / static_cast<Scalar>(batch);

    // dLoss/dOut = sign(out - target) / batch
    Mat g3 = diff.unaryExpr([](Scalar v) {
        return v > Scalar(0) ? Scalar(1) : (v < Scalar(0) ? Scalar(-1) : Scalar(0));
    });
    g3 /= static_cast<Scalar>(batch);

    grads.w3.noalias() = g3 * h2.transpose();
    grads.b3 = g3.rowwise().sum();

    Mat g2 = (net.w3.transpose() * g3).cwiseProduct(
        z2.unaryExpr([](Scalar v) { return v > Scalar(0) ? Scalar(1) : Scalar(0); }));
    grads.w2.noalias() = g2 * h1.transpose();
    grads.b2 = g2.rowwise().sum();

    Mat g1 = (net.w2.transpose() * g2).cwiseProduct(
        z1.unaryExpr([](Scalar v) { return v > Scalar(0) ? Scalar(1) : Scalar(0); }));
    grads.w1.noalias() = g1 * x.transpose();
    grads.b1 = g1.rowwise().sum();

    return loss;
}

// Mean-per-sample L1 loss only (used for holdout monitoring and tests).
template <typename Scalar>
Scalar l1_loss(const FnnNet<Scalar>& net,
               const Eigen::Ref<const typename FnnNet<Scalar>::Mat>& x,
               const Eigen::Ref<const typename FnnNet<Scalar>::Mat>& target) {
    const auto out = net.forward_batch(x);
    return (out - target).cwiseAbs().sum() / static_cast<Scalar>(x.cols());
}

}  // namespace otfs
