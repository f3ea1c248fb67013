#pragma once

#include <vector>

#include "otfs/common.hpp"
#include "otfs/config.hpp"
#include "otfs/grid.hpp"

namespace otfs {

// One column of the CDDPM matrix R: the received pilot response of a single
// path with delay tau and Doppler shift nu. Length M*N.
struct CddpmColumn {
    CVec values;
    double tau = 0.0;
    double nu = 0.0;
};

// Ordered set of CDDPM columns, one per hypothesized path (the MN x P matrix R).
struct Cddpm {
    std::vector<CddpmColumn> columns;

    int path_count() const { return static_cast<int>(columns.size()); }
    CMat as_matrix() const;
};

/**
 * Single entry of the DD kernel matrix Upsilon(tau, nu).
 *
 * Row index is k1*M + l1, column index k2*M + l2 (Doppler-major, matching
 * vec(X)[n*M + m]). Evaluates the literal triple sum over (n, m, s) with
 * both sinc terms and all phase factors, prefactor e^{-j 2 pi tau nu}/(MN).
 * Cost O(N M^2) per entry; materializing all of Upsilon this way is the
 * O(N^3 M^4) brute-force baseline.
 */
cplx upsilon_entry(const OtfsConfig& cfg, double tau, double nu,
                   int k1, int l1, int k2, int l2);

/**
 * Fast exact evaluator for Upsilon(tau, nu).
 *
 * Precomputes the per-(tau, nu) sinc/phase tables once and factorizes the
 * (n, m) double sum into an m-sum times an n-sum (an exact algebraic
 * identity: the exponent separates and the inner s-sum does not depend
 * on n). Entries agree with upsilon_entry to roundoff; columns cost
 * O(M^2 + N^2 + MN) instead of O(MN * N M^2).
 */
class UpsilonEvaluator {
public:
    UpsilonEvaluator(const OtfsConfig& cfg, double tau, double nu);

    cplx entry(int k1, int l1, int k2, int l2) const;
    // Column (k2*M + l2) of Upsilon, all MN rows.
    CVec column(int k2, int l2) const;
    CVec column(int flat_col) const;

    double tau() const { return tau_; }
    double nu() const { return nu_; }

private:
    cplx f_term(int l1, int m, const cplx& ck2) const;

    OtfsConfig cfg_;
    double tau_ = 0.0;
    double nu_ = 0.0;
    cplx prefactor_;
    std::vector<cplx> roots_m_;    // e^{j 2 pi r / M}
    std::vector<cplx> roots_n_;    // e^{j 2 pi r / N}
    std::vector<cplx> delay_tw_;   // e^{-j 2 pi m tau / T}, m in [0, M)
    std::vector<cplx> doppler_tw_; // e^{+j 2 pi n nu / (N delta_f) * N} = e^{j 2 pi n nu T}
    CMat f1_, f2_;                 // f-sum tables [l1][m], k2-independent parts
};

enum class ColumnStrategy {
    kFull,        // materialize Upsilon via upsilon_entry, multiply by vec(X)
    kPilotSparse, // sqrt(E_p) times column n_p*M + m_p of Upsilon
};

// r(tau, nu) = Upsilon(tau, nu) * vec(X) for the impulse pilot frame.
// Both strategies are exact and agree to roundoff; kFull exists as the
// brute-force latency baseline, estimators use kPilotSparse.
CddpmColumn cddpm_column_exact(const OtfsConfig& cfg, double tau, double nu,
                               ColumnStrategy strategy = ColumnStrategy::kPilotSparse);

}  // namespace otfs
