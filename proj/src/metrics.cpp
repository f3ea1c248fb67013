#include "otfs/metrics.hpp"

#include <memory>
#include <stdexcept>
#include <vector>

namespace otfs {

double nmse(const CMat& h_true, const CMat& h_est) {
    if (h_true.rows() != h_est.rows() || h_true.cols() != h_est.cols()) {
        throw std::invalid_argument("nmse: dimension mismatch");
    }
    const double denom = h_true.squaredNorm();
    if (!(denom > 0.0)) {
        throw std::invalid_argument("nmse: true channel has zero Frobenius norm");
    }
    return (h_true - h_est).squaredNorm() / denom;
}

double nmse_streaming(const OtfsConfig& cfg, const PathSet& truth, const PathSet& est) {
    cfg.validate();
    truth.validate();
    est.validate();

    std::vector<std::unique_ptr<UpsilonEvaluator>> ev_true, ev_est;
    for (const Path& p : truth.paths) {
        ev_true.push_back(std::make_unique<UpsilonEvaluator>(cfg, p.tau, p.nu));
    }
    for (const Path& p : est.paths) {
        ev_est.push_back(std::make_unique<UpsilonEvaluator>(cfg, p.tau, p.nu));
    }

    const int mn = cfg.grid_size();
    double num = 0.0;
    double denom = 0.0;
    CVec col_true(mn), col_est(mn);
    for (int col = 0; col < mn; ++col) {
        col_true.setZero();
        for (size_t i = 0; i < ev_true.size(); ++i) {
            col_true += truth.paths[i].alpha * ev_true[i]->column(col);
        }
        col_est.setZero();
        for (size_t i = 0; i < ev_est.size(); ++i) {
            col_est += est.paths[i].alpha * ev_est[i]->column(col);
        }
        denom += col_true.squaredNorm();
        num += (col_true - col_est).squaredNorm();
    }
    if (!(denom > 0.0)) {
        throw std::invalid_argument("nmse_streaming: true channel has zero Frobenius norm");
    }
    return num / denom;
}

double avg_paths(std::span<const int> counts) {
    if (counts.empty()) {
        throw std::invalid_argument("avg_paths: empty result set");
    }
    double sum = 0.0;
    for (int c : counts) sum += c;
    return sum / static_cast<double>(counts.size());
}

}  // namespace otfs
