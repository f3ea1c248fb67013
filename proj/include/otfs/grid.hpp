#pragma once

#include "otfs/common.hpp"
#include "otfs/config.hpp"

namespace otfs {

// Delay-Doppler frame: M rows (delay index m) x N columns (Doppler index n).
using DdGrid = CMat;
// Time-frequency frame, same M x N storage.
using TfGrid = CMat;

// vec stacks columns: vec(X)[n*M + m] = X[m, n]. unvec is its exact inverse.
CVec vec(const CMat& x);
CMat unvec(const CVec& v, int rows, int cols);

// Pilot frame: sqrt(E_p) at cell (m_p, n_p), exactly zero elsewhere.
DdGrid build_pilot_frame(const OtfsConfig& cfg);

// Unitary K-point DFT matrix F_K[m, q] = exp(-j 2 pi m q / K) / sqrt(K).
CMat dft_matrix(int k);

// ISFFT maps a DD grid to the TF grid: F_M * X * F_N^H.
TfGrid isfft(const DdGrid& dd);
// SFFT is the exact inverse: F_M^H * X * F_N.
DdGrid sfft(const TfGrid& tf);

}  // namespace otfs
