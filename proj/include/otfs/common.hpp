#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace otfs {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

inline constexpr double kPi = std::numbers::pi;

// Normalized sinc: sin(pi x) / (pi x), sinc(0) = 1.
inline double sinc(double x) {
    if (x == 0.0) return 1.0;
    const double px = kPi * x;
    return std::sin(px) / px;
}

// e^{j phi}
inline cplx cis(double phi) { return {std::cos(phi), std::sin(phi)}; }

}  // namespace otfs
