#include "otfs/estimator.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace otfs {

void EstimatorConfig::validate() const {
    if (P_max < 1) throw std::invalid_argument("EstimatorConfig: P_max must be >= 1");
    if (s_max < 1) throw std::invalid_argument("EstimatorConfig: s_max must be >= 1");
    if (m_tau < 2 || n_nu < 2) {
        throw std::invalid_argument("EstimatorConfig: m_tau and n_nu must be >= 2");
    }
    if (!(lambda >= 0.0)) {
        throw std::invalid_argument("EstimatorConfig: lambda must be non-negative");
    }
    if (!(eps_tau > 0.0) || !(eps_nu > 0.0)) {
        throw std::invalid_argument("EstimatorConfig: eps_tau and eps_nu must be positive");
    }
    if (eps_stop && !(*eps_stop >= 0.0)) {
        throw std::invalid_argument("EstimatorConfig: eps_stop override must be >= 0");
    }
}

double EstimatorConfig::resolve_eps_stop(const OtfsConfig& cfg, double sigma2) const {
    if (eps_stop) return *eps_stop;
    if (!(sigma2 >= 0.0)) {
        throw std::invalid_argument("resolve_eps_stop: sigma2 must be non-negative");
    }
    return 3.0 * std::sqrt(cfg.grid_size() * sigma2);
}

CVec ColumnSource::column(const DdPair& pair) const {
    return columns(std::span<const DdPair>(&pair, 1)).col(0);
}

CMat ExactColumnSource::columns(std::span<const DdPair> pairs) const {
    CMat out(cfg_.grid_size(), static_cast<Eigen::Index>(pairs.size()));
    for (size_t j = 0; j < pairs.size(); ++j) {
        out.col(static_cast<Eigen::Index>(j)) =
            cddpm_column_exact(cfg_, pairs[j].tau, pairs[j].nu).values;
    }
    return out;
}

double residue_cost(const CVec& column, const CVec& residue) {
    const double norm2 = column.squaredNorm();
    if (!(norm2 > 0.0)) {
        throw std::invalid_argument("residue_cost: zero-norm column");
    }
    return std::norm(column.dot(residue)) / norm2;
}

CVec rls_gains(const CMat& r, const CVec& y, double lambda) {
    if (r.cols() == 0) throw std::invalid_argument("rls_gains: empty column set");
    if (r.rows() != y.size()) throw std::invalid_argument("rls_gains: dimension mismatch");
    if (!(lambda >= 0.0)) throw std::invalid_argument("rls_gains: lambda must be >= 0");

    CVec x;
    if (lambda == 0.0) {
        // Rank-revealing least squares; robust to (near-)duplicate columns.
        x = r.completeOrthogonalDecomposition().solve(y);
    } else {
        CMat g = r.adjoint() * r;
        g.diagonal().array() += lambda;
        const Eigen::LDLT<CMat> ldlt(g);
        if (ldlt.info() != Eigen::Success) {
            throw std::runtime_error("rls_gains: LDLT factorization failed");
        }
        x = ldlt.solve(r.adjoint() * y);
    }
    if (!x.allFinite()) {
        throw std::runtime_error("rls_gains: solve produced non-finite gains");
    }
    return x;
}

double observation_cost(const CMat& r, const CVec& y, double lambda) {
    if (r.cols() == 0) throw std::invalid_argument("observation_cost: empty column set");
    const CVec b = r.adjoint() * y;
    const CVec x = rls_gains(r, y, lambda);
    return std::real(b.dot(x));
}

namespace {

// Near-zero column guard: predicted columns below this energy get cost 0
// instead of dividing by a tiny norm.
inline double guarded_residue_cost(const Eigen::Ref<const CVec>& column,
                                   const CVec& residue, double pilot_energy) {
    const double norm2 = column.squaredNorm();
    if (norm2 < 1e-12 * pilot_energy) return 0.0;
    return std::norm(column.dot(residue)) / norm2;
}

struct BestIndex {
    int index = -1;
    double cost = -1.0;
};

BestIndex scan_residue_costs(const CMat& cols, const CVec& residue, double pilot_energy) {
    BestIndex best;
    for (Eigen::Index j = 0; j < cols.cols(); ++j) {
        const double c = guarded_residue_cost(cols.col(j), residue, pilot_energy);
        if (c > best.cost) best = {static_cast<int>(j), c};
    }
    return best;
}

std::vector<DdPair> integer_grid(const OtfsConfig& cfg) {
    const double dtau = cfg.delay_resolution();
    const double dnu = cfg.doppler_resolution();
    const int q_lo = -(cfg.N / 2);
    const int q_hi = (cfg.N + 1) / 2 - 1;
    std::vector<DdPair> pairs;
    pairs.reserve(static_cast<size_t>(cfg.M) * cfg.N);
    for (int l = 0; l < cfg.M; ++l) {
        for (int q = q_lo; q <= q_hi; ++q) {
            pairs.push_back({l * dtau, q * dnu});
        }
    }
    return pairs;
}

std::vector<DdPair> contraction_grid(const DdPair& center, double wt, double wv,
                                     int m_tau, int n_nu) {
    const int ht = m_tau / 2;
    const int hv = n_nu / 2;
    std::vector<DdPair> pairs;
    pairs.reserve(static_cast<size_t>(2 * ht + 1) * (2 * hv + 1));
    for (int i = -ht; i <= ht; ++i) {
        const double tau = std::max(0.0, center.tau + i * wt);
        for (int j = -hv; j <= hv; ++j) {
            pairs.push_back({tau, center.nu + j * wv});
        }
    }
    return pairs;
}

void sync_path_gains(EstimateState& st) {
    for (int j = 0; j < st.detected.count(); ++j) {
        st.detected.paths[j].alpha = st.gains[j];
    }
}

// Phi_y evaluation where every column except one is fixed; the fixed part of
// the Gram matrix is factor-ready so each candidate costs O(P MN + P^3).
class ObservationCostSwap {
public:
    ObservationCostSwap(const CMat& cols, int swap_index, const CVec& y, double lambda)
        : lambda_(lambda), y_(y) {
        const Eigen::Index p = cols.cols();
        others_.resize(cols.rows(), p - 1);
        Eigen::Index w = 0;
        for (Eigen::Index j = 0; j < p; ++j) {
            if (j != swap_index) others_.col(w++) = cols.col(j);
        }
        g_oo_ = others_.adjoint() * others_;
        b_o_ = others_.adjoint() * y;
    }

    double eval(const Eigen::Ref<const CVec>& cand) const {
        const Eigen::Index po = others_.cols();
        if (lambda_ == 0.0) {
            CMat r(others_.rows(), po + 1);
            r.leftCols(po) = others_;
            r.col(po) = cand;
            return observation_cost(r, y_, 0.0);
        }
        CMat g(po + 1, po + 1);
        g.topLeftCorner(po, po) = g_oo_;
        const CVec g_oc = others_.adjoint() * cand;
        g.topRightCorner(po, 1) = g_oc;
        g.bottomLeftCorner(1, po) = g_oc.adjoint();
        g(po, po) = cand.squaredNorm();
        g.diagonal().array() += lambda_;

        CVec b(po + 1);
        b.head(po) = b_o_;
        b[po] = cand.dot(y_);

        const Eigen::LDLT<CMat> ldlt(g);
        if (ldlt.info() != Eigen::Success) {
            throw std::runtime_error("observation_cost: LDLT factorization failed");
        }
        const CVec x = ldlt.solve(b);
        if (!x.allFinite()) {
            throw std::runtime_error("observation_cost: solve produced non-finite result");
        }
        return std::real(b.dot(x));
    }

private:
    double lambda_;
    const CVec& y_;
    CMat others_;
    CMat g_oo_;
    CVec b_o_;
};

DdPair refine_search_pair(int index, const CMat& cols, const DdPair& current,
                          const CVec& y, const OtfsConfig& cfg,
                          const EstimatorConfig& est, const ColumnSource& source) {
    const ObservationCostSwap workspace(cols, index, y, est.lambda);

    auto best_of = [&](const std::vector<DdPair>& pairs, DdPair fallback) -> DdPair {
        const CMat cand = source.columns(pairs);
        int best = -1;
        double best_cost = -1.0;
        for (Eigen::Index j = 0; j < cand.cols(); ++j) {
            const double c = workspace.eval(cand.col(j));
            if (c > best_cost) {
                best_cost = c;
                best = static_cast<int>(j);
            }
        }
        return best >= 0 ? pairs[static_cast<size_t>(best)] : fallback;
    };

    // Coarse stage: +-1-bin neighborhood of the current estimate (or the
    // full integer grid when configured).
    std::vector<DdPair> coarse;
    if (est.refine_full_grid) {
        coarse = integer_grid(cfg);
    } else {
        const double dtau = cfg.delay_resolution();
        const double dnu = cfg.doppler_resolution();
        for (int a = -1; a <= 1; ++a) {
            const double tau = std::max(0.0, current.tau + a * dtau);
            for (int b = -1; b <= 1; ++b) {
                coarse.push_back({tau, current.nu + b * dnu});
            }
        }
    }
    DdPair cur = best_of(coarse, current);

    // Fine stage: same contraction schedule as the search phase.
    for (int s = 1; s <= est.s_max; ++s) {
        const double wt = cfg.delay_resolution() / std::pow(est.m_tau, s - 1);
        const double wv = cfg.doppler_resolution() / std::pow(est.n_nu, s - 1);
        cur = best_of(contraction_grid(cur, wt, wv, est.m_tau, est.n_nu), cur);
        if (wt < est.eps_tau && wv < est.eps_nu) break;
    }
    return cur;
}

}  // namespace

DdPair coarse_search(const CVec& residue, const OtfsConfig& cfg,
                     const EstimatorConfig& est, const ColumnSource& source) {
    cfg.validate();
    est.validate();
    if (residue.size() != cfg.grid_size()) {
        throw std::invalid_argument("coarse_search: residue length mismatch");
    }
    if (!(residue.squaredNorm() > 0.0)) {
        throw std::invalid_argument("coarse_search: residue is identically zero");
    }
    const std::vector<DdPair> pairs = integer_grid(cfg);
    const CMat cols = source.columns(pairs);
    const BestIndex best = scan_residue_costs(cols, residue, cfg.E_p);
    return pairs[static_cast<size_t>(best.index)];
}

DdPair fine_search(DdPair coarse, const CVec& residue, const OtfsConfig& cfg,
                   const EstimatorConfig& est, const ColumnSource& source) {
    cfg.validate();
    est.validate();
    DdPair cur = coarse;
    for (int s = 1; s <= est.s_max; ++s) {
        const double wt = cfg.delay_resolution() / std::pow(est.m_tau, s - 1);
        const double wv = cfg.doppler_resolution() / std::pow(est.n_nu, s - 1);
        const std::vector<DdPair> pairs = contraction_grid(cur, wt, wv, est.m_tau, est.n_nu);
        const CMat cols = source.columns(pairs);
        const BestIndex best = scan_residue_costs(cols, residue, cfg.E_p);
        if (best.index >= 0) cur = pairs[static_cast<size_t>(best.index)];
        if (wt < est.eps_tau && wv < est.eps_nu) break;
    }
    return cur;
}

EstimateState search_phase(const Observation& obs, const OtfsConfig& cfg,
                           const EstimatorConfig& est, const ColumnSource& source) {
    cfg.validate();
    est.validate();
    if (obs.y.size() != cfg.grid_size()) {
        throw std::invalid_argument("search_phase: observation length mismatch");
    }
    if (source.frame_size() != cfg.grid_size()) {
        throw std::invalid_argument("search_phase: column source frame size mismatch");
    }
    const double eps = est.resolve_eps_stop(cfg, obs.sigma2);

    EstimateState st;
    st.columns.resize(cfg.grid_size(), 0);
    st.residue = obs.y;
    st.residue_norm = st.residue.norm();

    for (int i = 1; i <= est.P_max; ++i) {
        const DdPair coarse = coarse_search(st.residue, cfg, est, source);
        const DdPair fine = fine_search(coarse, st.residue, cfg, est, source);

        // The detected path's column is always computed exactly, whatever
        // the source used during the argmax loops.
        const CddpmColumn exact = cddpm_column_exact(cfg, fine.tau, fine.nu);
        ++st.diag.exact_column_evals;

        st.columns.conservativeResize(Eigen::NoChange, i);
        st.columns.col(i - 1) = exact.values;
        st.detected.paths.push_back({fine.tau, fine.nu, cplx(0.0, 0.0)});

        st.gains = rls_gains(st.columns, obs.y, est.lambda);
        st.residue = obs.y - st.columns * st.gains;
        st.residue_norm = st.residue.norm();
        st.diag.search_residue_norms.push_back(st.residue_norm);
        ++st.diag.search_iterations;

        if (st.residue_norm < eps) break;
    }
    sync_path_gains(st);
    return st;
}

EstimateState refinement_phase(EstimateState st, const Observation& obs,
                               const OtfsConfig& cfg, const EstimatorConfig& est,
                               const ColumnSource& source) {
    const int p_hat = st.detected.count();
    if (p_hat == 0) return st;
    const double eps = est.resolve_eps_stop(cfg, obs.sigma2);

    CMat cols = st.columns;
    std::vector<Path> paths = st.detected.paths;
    CVec gains;
    CVec residue;
    int kept = p_hat;

    for (int i = 0; i < p_hat; ++i) {
        const DdPair current{paths[i].tau, paths[i].nu};
        const DdPair refined = refine_search_pair(i, cols, current, obs.y, cfg, est, source);

        const CddpmColumn exact = cddpm_column_exact(cfg, refined.tau, refined.nu);
        ++st.diag.exact_column_evals;
        cols.col(i) = exact.values;
        paths[i].tau = refined.tau;
        paths[i].nu = refined.nu;

        const auto prefix = cols.leftCols(i + 1);
        gains = rls_gains(prefix, obs.y, est.lambda);
        residue = obs.y - prefix * gains;
        st.diag.refined_paths = i + 1;

        // Residue below threshold with paths still unrefined: the refined
        // prefix already explains the observation, the rest are false alarms.
        if (residue.norm() < eps && i + 1 < p_hat) {
            kept = i + 1;
            break;
        }
    }

    paths.resize(static_cast<size_t>(kept));
    st.detected.paths = std::move(paths);
    st.columns = cols.leftCols(kept).eval();
    st.gains = gains;
    st.residue = residue;
    st.residue_norm = st.residue.norm();
    sync_path_gains(st);
    return st;
}

EstimateState estimate(const Observation& obs, const OtfsConfig& cfg,
                       const EstimatorConfig& est, const ColumnSource& source) {
    EstimateState st = search_phase(obs, cfg, est, source);
    st = refinement_phase(std::move(st), obs, cfg, est, source);
#ifndef NDEBUG
    if (st.detected.count() > 0) {
        const CVec check = obs.y - st.columns * st.gains;
        assert((check - st.residue).norm() <= 1e-9 * (1.0 + obs.y.norm()));
    }
#endif
    return st;
}

EstimateState estimate(const Observation& obs, const OtfsConfig& cfg,
                       const EstimatorConfig& est) {
    const ExactColumnSource source(cfg);
    return estimate(obs, cfg, est, source);
}

}  // namespace otfs
