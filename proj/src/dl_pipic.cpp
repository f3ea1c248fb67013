#include "otfs/dl_pipic.hpp"

#include <stdexcept>

namespace otfs {

EstimateState dl_estimate(const Observation& obs, const OtfsConfig& cfg,
                          const EstimatorConfig& est, const PredictorPair& pair) {
    pair.check_compatible(cfg);
    const FnnColumnSource source(pair);
    EstimateState st = estimate(obs, cfg, est, source);
    if (st.diag.exact_column_evals > 2 * est.P_max) {
        throw std::logic_error("dl_estimate: exact column evaluation budget exceeded");
    }
    return st;
}

}  // namespace otfs
