#include "otfs/kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace otfs {

namespace {

inline int wrap(int v, int period) {
    const int r = v % period;
    return r < 0 ? r + period : r;
}

void check_kernel_args(const OtfsConfig& cfg, double tau) {
    cfg.validate();
    if (!(tau >= 0.0)) {
        throw std::invalid_argument("upsilon: tau must be non-negative");
    }
}

void check_indices(const OtfsConfig& cfg, int k1, int l1, int k2, int l2) {
    if (l1 < 0 || l1 >= cfg.M || l2 < 0 || l2 >= cfg.M ||
        k1 < 0 || k1 >= cfg.N || k2 < 0 || k2 >= cfg.N) {
        throw std::out_of_range("upsilon: delay/Doppler index out of range");
    }
}

}  // namespace

CMat Cddpm::as_matrix() const {
    if (columns.empty()) return CMat(0, 0);
    const Eigen::Index rows = columns.front().values.size();
    CMat r(rows, static_cast<Eigen::Index>(columns.size()));
    for (Eigen::Index j = 0; j < r.cols(); ++j) {
        if (columns[j].values.size() != rows) {
            throw std::invalid_argument("Cddpm: columns have mismatched lengths");
        }
        r.col(j) = columns[j].values;
    }
    return r;
}

cplx upsilon_entry(const OtfsConfig& cfg, double tau, double nu,
                   int k1, int l1, int k2, int l2) {
    check_kernel_args(cfg, tau);
    check_indices(cfg, k1, l1, k2, l2);

    const int m_count = cfg.M;
    const int n_count = cfg.N;
    const double t_ratio = tau / cfg.T;            // tau / T
    const double nu_ratio = nu / cfg.delta_f;      // nu / delta_f
    const cplx ck2 = cis(-2.0 * kPi * k2 / n_count);

    cplx acc(0.0, 0.0);
    for (int n = 0; n < n_count; ++n) {
        for (int m = 0; m < m_count; ++m) {
            cplx f(0.0, 0.0);
            for (int s = -m; s <= m_count - 1 - m; ++s) {
                const double x = nu_ratio - s;
                const cplx term1 = (1.0 - t_ratio) *
                                   cis(kPi * (1.0 + t_ratio) * x) *
                                   sinc((1.0 - t_ratio) * x);
                const cplx term2 = t_ratio * ck2 *
                                   cis(kPi * t_ratio * x) *
                                   sinc(tau * (nu - s * cfg.delta_f));
                f += cis(2.0 * kPi * s * l1 / m_count) * (term1 + term2);
            }
            const double phase =
                2.0 * kPi * ((static_cast<double>(m) / m_count) * (l1 - l2 - m_count * t_ratio) -
                             (static_cast<double>(n) / n_count) * (k1 - k2 - n_count * nu_ratio));
            acc += f * cis(phase);
        }
    }
    return cis(-2.0 * kPi * tau * nu) / static_cast<double>(m_count * n_count) * acc;
}

UpsilonEvaluator::UpsilonEvaluator(const OtfsConfig& cfg, double tau, double nu)
    : cfg_(cfg), tau_(tau), nu_(nu) {
    check_kernel_args(cfg, tau);

    const int m_count = cfg.M;
    const int n_count = cfg.N;
    const double t_ratio = tau / cfg.T;
    const double nu_ratio = nu / cfg.delta_f;

    prefactor_ = cis(-2.0 * kPi * tau * nu) / static_cast<double>(m_count * n_count);

    roots_m_.resize(m_count);
    for (int r = 0; r < m_count; ++r) roots_m_[r] = cis(2.0 * kPi * r / m_count);
    roots_n_.resize(n_count);
    for (int r = 0; r < n_count; ++r) roots_n_[r] = cis(2.0 * kPi * r / n_count);

    delay_tw_.resize(m_count);
    for (int m = 0; m < m_count; ++m) delay_tw_[m] = cis(-2.0 * kPi * m * t_ratio);
    doppler_tw_.resize(n_count);
    for (int n = 0; n < n_count; ++n) doppler_tw_[n] = cis(2.0 * kPi * n * nu_ratio);

    // s-dependent path terms, s in [-(M-1), M-1], index s + M - 1.
    std::vector<cplx> t1(2 * m_count - 1), t2(2 * m_count - 1);
    for (int s = -(m_count - 1); s <= m_count - 1; ++s) {
        const double x = nu_ratio - s;
        t1[s + m_count - 1] = (1.0 - t_ratio) *
                              cis(kPi * (1.0 + t_ratio) * x) *
                              sinc((1.0 - t_ratio) * x);
        t2[s + m_count - 1] = t_ratio *
                              cis(kPi * t_ratio * x) *
                              sinc(tau * (nu - s * cfg.delta_f));
    }

    f1_.resize(m_count, m_count);
    f2_.resize(m_count, m_count);
    for (int l1 = 0; l1 < m_count; ++l1) {
        for (int m = 0; m < m_count; ++m) {
            cplx a(0.0, 0.0), b(0.0, 0.0);
            for (int s = -m; s <= m_count - 1 - m; ++s) {
                const cplx w = roots_m_[wrap(s * l1, m_count)];
                a += w * t1[s + m_count - 1];
                b += w * t2[s + m_count - 1];
            }
            f1_(l1, m) = a;
            f2_(l1, m) = b;
        }
    }
}

cplx UpsilonEvaluator::entry(int k1, int l1, int k2, int l2) const {
    check_indices(cfg_, k1, l1, k2, l2);
    const int m_count = cfg_.M;
    const int n_count = cfg_.N;
    const cplx ck2 = std::conj(roots_n_[k2]);

    cplx sm(0.0, 0.0);
    for (int m = 0; m < m_count; ++m) {
        sm += (f1_(l1, m) + ck2 * f2_(l1, m)) *
              roots_m_[wrap(m * (l1 - l2), m_count)] * delay_tw_[m];
    }
    cplx sn(0.0, 0.0);
    for (int n = 0; n < n_count; ++n) {
        sn += std::conj(roots_n_[wrap(n * (k1 - k2), n_count)]) * doppler_tw_[n];
    }
    return prefactor_ * sm * sn;
}

CVec UpsilonEvaluator::column(int k2, int l2) const {
    check_indices(cfg_, 0, 0, k2, l2);
    const int m_count = cfg_.M;
    const int n_count = cfg_.N;
    const cplx ck2 = std::conj(roots_n_[k2]);

    std::vector<cplx> sm(m_count);
    for (int l1 = 0; l1 < m_count; ++l1) {
        cplx acc(0.0, 0.0);
        for (int m = 0; m < m_count; ++m) {
            acc += (f1_(l1, m) + ck2 * f2_(l1, m)) *
                   roots_m_[wrap(m * (l1 - l2), m_count)] * delay_tw_[m];
        }
        sm[l1] = acc;
    }
    std::vector<cplx> sn(n_count);
    for (int k1 = 0; k1 < n_count; ++k1) {
        cplx acc(0.0, 0.0);
        for (int n = 0; n < n_count; ++n) {
            acc += std::conj(roots_n_[wrap(n * (k1 - k2), n_count)]) * doppler_tw_[n];
        }
        sn[k1] = acc;
    }

    CVec out(m_count * n_count);
    for (int k1 = 0; k1 < n_count; ++k1) {
        const cplx row_factor = prefactor_ * sn[k1];
        for (int l1 = 0; l1 < m_count; ++l1) {
            out[k1 * m_count + l1] = row_factor * sm[l1];
        }
    }
    return out;
}

CVec UpsilonEvaluator::column(int flat_col) const {
    return column(flat_col / cfg_.M, flat_col % cfg_.M);
}

CddpmColumn cddpm_column_exact(const OtfsConfig& cfg, double tau, double nu,
                               ColumnStrategy strategy) {
    check_kernel_args(cfg, tau);
    CddpmColumn col;
    col.tau = tau;
    col.nu = nu;

    if (strategy == ColumnStrategy::kPilotSparse) {
        const UpsilonEvaluator ev(cfg, tau, nu);
        col.values = std::sqrt(cfg.E_p) * ev.column(cfg.n_p, cfg.m_p);
        return col;
    }

    // Brute force: materialize the whole MN x MN kernel entry by entry, then
    // multiply by vec(X). This is the O(N^3 M^4) latency baseline.
    const int mn = cfg.grid_size();
    CMat ups(mn, mn);
    for (int k1 = 0; k1 < cfg.N; ++k1) {
        for (int l1 = 0; l1 < cfg.M; ++l1) {
            for (int k2 = 0; k2 < cfg.N; ++k2) {
                for (int l2 = 0; l2 < cfg.M; ++l2) {
                    ups(k1 * cfg.M + l1, k2 * cfg.M + l2) =
                        upsilon_entry(cfg, tau, nu, k1, l1, k2, l2);
                }
            }
        }
    }
    col.values = ups * vec(build_pilot_frame(cfg));
    return col;
}

}  // namespace otfs
