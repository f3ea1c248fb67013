#include "otfs/config.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace otfs {

void OtfsConfig::validate() const {
    if (M < 2 || N < 2) {
        throw std::invalid_argument("OtfsConfig: M and N must both be >= 2");
    }
    if (!(delta_f > 0.0) || !(T > 0.0)) {
        throw std::invalid_argument("OtfsConfig: delta_f and T must be positive");
    }
    if (std::abs(T * delta_f - 1.0) > 1e-12) {
        throw std::invalid_argument("OtfsConfig: T * delta_f must equal 1 (got " +
                                    std::to_string(T * delta_f) + ")");
    }
    if (!(f_c > 0.0)) {
        throw std::invalid_argument("OtfsConfig: f_c must be positive");
    }
    if (m_p < 0 || m_p >= M || n_p < 0 || n_p >= N) {
        throw std::invalid_argument("OtfsConfig: pilot cell (m_p, n_p) outside the grid");
    }
    if (!(E_p > 0.0)) {
        throw std::invalid_argument("OtfsConfig: E_p must be positive");
    }
}

}  // namespace otfs
