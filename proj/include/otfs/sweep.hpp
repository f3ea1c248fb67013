#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "otfs/channel.hpp"
#include "otfs/estimator.hpp"
#include "otfs/predictor.hpp"

namespace otfs {

enum class Method { kPipic, kDlPipic };

std::string method_name(Method m);
Method method_from_name(const std::string& name);

/**
 * Full experiment description: frame, scenario, estimator parameters, the
 * methods to run, the PSNR grid and output location. Serializable to/from a
 * JSON config file; the resolved config is echoed into the output directory.
 */
struct ExperimentConfig {
    OtfsConfig otfs;
    ScenarioConfig scenario;
    EstimatorConfig estimator;
    std::vector<Method> methods = {Method::kPipic};
    std::string model_path;  // required iff dl-pipic is selected
    std::vector<double> psnr_grid_db = {20, 22, 24, 26, 28, 30, 32, 34, 36};
    std::string output_dir = "out";
    std::uint64_t seed = 1;
    int workers = 0;  // 0: OTFS_WORKERS env var, else hardware concurrency

    void validate() const;
};

struct MethodPsnrResult {
    Method method = Method::kPipic;
    double psnr_db = 0.0;
    double nmse_linear = 0.0;  // mean over successful realizations
    double nmse_db = 0.0;
    double avg_paths = 0.0;
    int n_realizations = 0;
    int n_failures = 0;
};

struct LatencyRecord {
    std::string strategy;  // "full", "pilot-sparse", "fnn"
    long l1 = 0;           // 0 for the exact strategies
    long l2 = 0;
    double mean_us = 0.0;
    double p50_us = 0.0;
    double p95_us = 0.0;
    int n_calls = 0;
};

struct ExperimentResult {
    std::vector<MethodPsnrResult> rows;
    std::vector<LatencyRecord> latency;
};

// Runs the NMSE / path-count sweep; writes sweep.csv, the SVG plots and the
// resolved config into output_dir (unless it is empty). Per-realization
// estimator failures are logged to stderr and excluded with a count.
ExperimentResult run_sweep(const ExperimentConfig& exp);

// Times the exact strategies and (when a model is supplied) the FNN
// prediction path over the same random fractional DD pairs. One warmup call
// per strategy is excluded.
std::vector<LatencyRecord> latency_bench(const OtfsConfig& cfg, const PredictorPair* pair,
                                         int n_pairs, Rng& rng);

void write_sweep_csv(const std::vector<MethodPsnrResult>& rows, const std::string& path);
void write_latency_csv(const std::vector<LatencyRecord>& records, const std::string& path);
void write_sweep_plots(const std::vector<MethodPsnrResult>& rows,
                       const std::string& output_dir);

std::string experiment_config_to_json(const ExperimentConfig& exp);
ExperimentConfig experiment_config_from_json(const std::string& text);
ExperimentConfig load_experiment_config(const std::string& path);

// Deterministic worker pool: body(i) runs for i in [0, n); results must be
// written to per-index slots so aggregation order never matters.
void parallel_for(int n, int workers, const std::function<void(int)>& body);
int resolve_worker_count(int requested);

}  // namespace otfs
