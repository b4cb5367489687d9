#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kyleq/model.hpp"
#include "kyleq/solution.hpp"

namespace kyleq {

/// Request to record (Y_{t-h}, Y_t, Y_{t+h}) per path; t and h snap to the
/// simulation grid, with 0 < t-h and t+h < T after snapping.
struct AutocorrProbe {
    double t;
    double h;
};

struct SimConfig {
    int64_t n_paths = 100000;
    int64_t n_steps = 2000;
    uint64_t seed = 42;
    std::vector<double> checkpoint_times;        // in [0, T), snapped to grid
    bool record_increments = false;
    std::vector<AutocorrProbe> autocorr_probes;  // implies record_increments
    int threads = 0;                             // 0 = hardware concurrency
    double lambda_scale = 1.0;                   // test hook: mis-specified price impact
    std::optional<std::vector<double>> forced_dw;  // test hook: dW per step, all paths
    std::optional<double> forced_a;                // test hook: fixed target draw
    std::optional<double> forced_v;                // test hook: fixed dividend draw
};

/// Ensemble state at one grid time (recorded before the step away from it).
struct Checkpoint {
    double t = 0.0;
    int64_t step = 0;
    std::vector<double> theta, q, p, y;
};

struct IncrementRecord {
    double t = 0.0, h = 0.0;   // snapped values
    int64_t step_t = 0, step_h = 0;
    std::vector<double> y_before, y_at, y_after;
};

/// Simulated path ensemble.  Per-path arrays are indexed by path id, so the
/// contents are independent of block partitioning and thread count.
struct PathBatch {
    SimConfig config;  // with snapped checkpoint/probe times
    double T = 0.0;
    double dt = 0.0;
    std::string rng_id;

    std::vector<double> a, v;        // primitive draws
    std::vector<double> value;       // discretized insider value integral
    std::vector<double> theta_tm, q_tm, p_tm, dp_T;  // state at T- and the price jump
    std::vector<Checkpoint> checkpoints;
    std::vector<IncrementRecord> increments;

    double block_order(std::size_t i) const { return a[i] - theta_tm[i]; }
    double x_tm(std::size_t i) const { return a[i] - theta_tm[i] - q_tm[i]; }
    double p_T(std::size_t i) const { return p_tm[i] + dp_T[i]; }
};

/// Simulate the equilibrium SDE system on the uniform grid t_i = i*T/n_steps:
/// explicit Euler-Maruyama with left-endpoint coefficients for i < n_steps,
/// then the exact terminal block order and price rule.  Deterministic for
/// fixed (seed, n_paths, n_steps), independent of thread count and backend.
PathBatch run_batch(const EquilibriumSolution& sol, const SimConfig& config);

}  // namespace kyleq
