#pragma once

#include "otfs/common.hpp"

namespace otfs {

/**
 * OTFS frame geometry and pilot placement.
 *
 * M subcarriers with spacing delta_f, N time slots of duration T, with the
 * rectangular-pulse constraint T * delta_f = 1. The pilot is a single
 * impulse of energy E_p placed at delay-Doppler cell (m_p, n_p).
 */
struct OtfsConfig {
    int M = 16;              // subcarrier / delay-bin count
    int N = 16;              // time-slot / Doppler-bin count
    double delta_f = 25e3;   // subcarrier spacing [Hz]
    double T = 4e-5;         // slot duration [s]
    double f_c = 5.1e9;      // carrier frequency [Hz]
    int m_p = 0;             // pilot delay cell
    int n_p = 0;             // pilot Doppler cell
    double E_p = 1.0;        // pilot energy (linear)

    int grid_size() const { return M * N; }
    double delay_resolution() const { return 1.0 / (M * delta_f); }
    double doppler_resolution() const { return 1.0 / (N * T); }
    // Index of the pilot in vec(X), where vec(X)[n*M + m] = X[m, n].
    int pilot_index() const { return n_p * M + m_p; }

    // Throws std::invalid_argument on violated invariants.
    void validate() const;
};

}  // namespace otfs
