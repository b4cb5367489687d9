#include "kyleq/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

#include "kyleq/kernels.hpp"
#include "kyleq/rng.hpp"

namespace kyleq {

namespace {

constexpr std::size_t kBlockSize = 4096;

int64_t snap_step(double t, double dt, int64_t lo, int64_t hi) {
    const auto s = static_cast<int64_t>(std::llround(t / dt));
    return std::clamp(s, lo, hi);
}

struct StepPlan {
    std::vector<kernels::StepCoeffs> coeffs;  // one per step
    double lambda_T = 0.0;
    // step index -> records due before that step
    std::vector<std::vector<std::size_t>> checkpoint_at;          // checkpoint ids
    std::vector<std::vector<std::pair<std::size_t, int>>> y_at;   // (probe id, slot)
};

}  // namespace

PathBatch run_batch(const EquilibriumSolution& sol, const SimConfig& config) {
    const ModelParams& params = sol.params();
    const double T = params.T;

    if (config.n_paths < 1) throw domain_error("run_batch: n_paths must be >= 1");
    if (config.n_steps < 2) throw domain_error("run_batch: n_steps must be >= 2");
    if (config.forced_dw && static_cast<int64_t>(config.forced_dw->size()) != config.n_steps)
        throw domain_error("run_batch: forced_dw must have one entry per step");

    PathBatch batch;
    batch.config = config;
    batch.T = T;
    batch.dt = T / static_cast<double>(config.n_steps);
    batch.rng_id = std::string("philox4x32-10/box-muller/") +
                   kernels::backend_name(kernels::active_backend());
    const double dt = batch.dt;
    const int64_t n_steps = config.n_steps;
    const std::size_t n_paths = static_cast<std::size_t>(config.n_paths);

    StepPlan plan;
    plan.coeffs.resize(static_cast<std::size_t>(n_steps));
    plan.checkpoint_at.resize(static_cast<std::size_t>(n_steps));
    plan.y_at.resize(static_cast<std::size_t>(n_steps));
    const double sw_sdt = params.sigma_w * std::sqrt(dt);
    for (int64_t i = 0; i < n_steps; ++i) {
        const double t = dt * static_cast<double>(i);
        auto& c = plan.coeffs[static_cast<std::size_t>(i)];
        c.dt = dt;
        c.sw_sdt = sw_sdt;
        c.beta = sol.beta(t);
        c.alpha = sol.alpha(t);
        c.r = sol.r(t);
        c.s = sol.s(t);
        c.lambda = sol.lambda(t) * config.lambda_scale;
        c.mu = sol.mu(t);
    }
    plan.lambda_T = sol.lambda(T) * config.lambda_scale;

    // Snap checkpoints and autocorrelation probes onto the grid.
    for (double t : config.checkpoint_times) {
        if (!(t >= 0.0 && t < T))
            throw domain_error("run_batch: checkpoint times must lie in [0, T)");
        Checkpoint cp;
        cp.step = snap_step(t, dt, 0, n_steps - 1);
        cp.t = dt * static_cast<double>(cp.step);
        cp.theta.resize(n_paths);
        cp.q.resize(n_paths);
        cp.p.resize(n_paths);
        cp.y.resize(n_paths);
        plan.checkpoint_at[static_cast<std::size_t>(cp.step)].push_back(batch.checkpoints.size());
        batch.checkpoints.push_back(std::move(cp));
        batch.config.checkpoint_times[batch.checkpoints.size() - 1] = batch.checkpoints.back().t;
    }
    const bool want_increments = config.record_increments || !config.autocorr_probes.empty();
    if (want_increments) {
        for (const AutocorrProbe& probe : config.autocorr_probes) {
            IncrementRecord rec;
            rec.step_t = snap_step(probe.t, dt, 1, n_steps - 2);
            rec.step_h = std::max<int64_t>(1, static_cast<int64_t>(std::llround(probe.h / dt)));
            if (rec.step_t - rec.step_h < 1 || rec.step_t + rec.step_h > n_steps - 1)
                throw domain_error("run_batch: autocorr probe needs 0 < t-h and t+h < T");
            rec.t = dt * static_cast<double>(rec.step_t);
            rec.h = dt * static_cast<double>(rec.step_h);
            rec.y_before.resize(n_paths);
            rec.y_at.resize(n_paths);
            rec.y_after.resize(n_paths);
            const std::size_t id = batch.increments.size();
            plan.y_at[static_cast<std::size_t>(rec.step_t - rec.step_h)].push_back({id, 0});
            plan.y_at[static_cast<std::size_t>(rec.step_t)].push_back({id, 1});
            plan.y_at[static_cast<std::size_t>(rec.step_t + rec.step_h)].push_back({id, 2});
            batch.increments.push_back(std::move(rec));
        }
    }

    batch.a.resize(n_paths);
    batch.v.resize(n_paths);
    batch.value.resize(n_paths);
    batch.theta_tm.resize(n_paths);
    batch.q_tm.resize(n_paths);
    batch.p_tm.resize(n_paths);
    batch.dp_T.resize(n_paths);

    const double rho = params.rho;
    const double a_scale = params.sigma_a;
    const double v_shared = rho * params.sigma_v;
    const double v_indep = std::sqrt(1.0 - rho * rho) * params.sigma_v;

    auto run_block = [&](std::size_t p0, std::size_t bn) {
        std::vector<double> u1(bn), u2(bn), z0(bn), z1(bn);
        std::vector<double> a(bn), th(bn, 0.0), q(bn, 0.0), p(bn, 0.0), y(bn, 0.0),
            val(bn, 0.0);

        rng::fill_uniform_pairs(config.seed, p0, bn, rng::kPrimitivesPair, u1.data(), u2.data());
        kernels::normal_pairs(u1.data(), u2.data(), z0.data(), z1.data(), bn);
        for (std::size_t i = 0; i < bn; ++i) {
            a[i] = config.forced_a ? *config.forced_a : a_scale * z0[i];
            batch.v[p0 + i] =
                config.forced_v ? *config.forced_v : v_shared * z0[i] + v_indep * z1[i];
            batch.a[p0 + i] = a[i];
        }

        std::vector<double> zforced;
        if (config.forced_dw) zforced.resize(bn);

        for (int64_t step = 0; step < n_steps; ++step) {
            const auto si = static_cast<std::size_t>(step);
            for (std::size_t id : plan.checkpoint_at[si]) {
                Checkpoint& cp = batch.checkpoints[id];
                std::copy_n(th.data(), bn, cp.theta.data() + p0);
                std::copy_n(q.data(), bn, cp.q.data() + p0);
                std::copy_n(p.data(), bn, cp.p.data() + p0);
                std::copy_n(y.data(), bn, cp.y.data() + p0);
            }
            for (auto [id, slot] : plan.y_at[si]) {
                IncrementRecord& rec = batch.increments[id];
                double* dst = slot == 0   ? rec.y_before.data()
                              : slot == 1 ? rec.y_at.data()
                                          : rec.y_after.data();
                std::copy_n(y.data(), bn, dst + p0);
            }

            const double* z;
            if (config.forced_dw) {
                const double zf = (*config.forced_dw)[si] / sw_sdt;
                std::fill(zforced.begin(), zforced.end(), zf);
                z = zforced.data();
            } else {
                if (step % 2 == 0) {
                    rng::fill_uniform_pairs(config.seed, p0, bn, static_cast<uint64_t>(step / 2),
                                            u1.data(), u2.data());
                    kernels::normal_pairs(u1.data(), u2.data(), z0.data(), z1.data(), bn);
                }
                z = (step % 2 == 0) ? z0.data() : z1.data();
            }
            kernels::step_paths(plan.coeffs[si], bn, a.data(), z, th.data(), q.data(), p.data(),
                                y.data(), val.data());
        }

        for (std::size_t i = 0; i < bn; ++i) {
            const double x = a[i] - th[i] - q[i];
            const double dp = plan.lambda_T * x;
            val[i] += (a[i] - th[i]) * dp;
            batch.theta_tm[p0 + i] = th[i];
            batch.q_tm[p0 + i] = q[i];
            batch.p_tm[p0 + i] = p[i];
            batch.dp_T[p0 + i] = dp;
            batch.value[p0 + i] = val[i];
        }
    };

    const std::size_t n_blocks = (n_paths + kBlockSize - 1) / kBlockSize;
    unsigned n_threads = config.threads > 0
                             ? static_cast<unsigned>(config.threads)
                             : std::max(1u, std::thread::hardware_concurrency());
    n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(n_blocks));

    if (n_threads <= 1) {
        for (std::size_t b = 0; b < n_blocks; ++b) {
            const std::size_t p0 = b * kBlockSize;
            run_block(p0, std::min(kBlockSize, n_paths - p0));
        }
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(n_threads);
        for (unsigned k = 0; k < n_threads; ++k) {
            pool.emplace_back([&, k] {
                try {
                    for (std::size_t b = k; b < n_blocks; b += n_threads) {
                        const std::size_t p0 = b * kBlockSize;
                        run_block(p0, std::min(kBlockSize, n_paths - p0));
                    }
                } catch (...) {
                    errors[k] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        for (auto& err : errors)
            if (err) std::rethrow_exception(err);
    }

    return batch;
}

}  // namespace kyleq
