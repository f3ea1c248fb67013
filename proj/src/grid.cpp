#include "otfs/grid.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace otfs {

CVec vec(const CMat& x) {
    // Eigen matrices are column-major, so vec is a flat copy of the storage.
    return Eigen::Map<const CVec>(x.data(), x.size());
}

CMat unvec(const CVec& v, int rows, int cols) {
    if (v.size() != static_cast<Eigen::Index>(rows) * cols) {
        throw std::invalid_argument("unvec: vector length does not match rows*cols");
    }
    return Eigen::Map<const CMat>(v.data(), rows, cols);
}

DdGrid build_pilot_frame(const OtfsConfig& cfg) {
    cfg.validate();
    DdGrid x = DdGrid::Zero(cfg.M, cfg.N);
    x(cfg.m_p, cfg.n_p) = std::sqrt(cfg.E_p);
    return x;
}

CMat dft_matrix(int k) {
    CMat f(k, k);
    const double scale = 1.0 / std::sqrt(static_cast<double>(k));
    for (int m = 0; m < k; ++m) {
        for (int q = 0; q < k; ++q) {
            f(m, q) = scale * cis(-2.0 * kPi * m * q / k);
        }
    }
    return f;
}

namespace {

// DFT matrices are small (desk scale <= 16); cache per size, per thread.
const CMat& cached_dft(int k) {
    thread_local std::unordered_map<int, CMat> cache;
    auto it = cache.find(k);
    if (it == cache.end()) {
        it = cache.emplace(k, dft_matrix(k)).first;
    }
    return it->second;
}

}  // namespace

TfGrid isfft(const DdGrid& dd) {
    const CMat& fm = cached_dft(static_cast<int>(dd.rows()));
    const CMat& fn = cached_dft(static_cast<int>(dd.cols()));
    return fm * dd * fn.adjoint();
}

DdGrid sfft(const TfGrid& tf) {
    const CMat& fm = cached_dft(static_cast<int>(tf.rows()));
    const CMat& fn = cached_dft(static_cast<int>(tf.cols()));
    return fm.adjoint() * tf * fn;
}

}  // namespace otfs
