#include "kyleq/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kyleq/calibrate.hpp"

namespace kyleq {

double neumaier_sum(std::span<const double> xs) {
    double sum = 0.0, comp = 0.0;
    for (double x : xs) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    return sum + comp;
}

double mean_of(std::span<const double> xs) {
    if (xs.empty()) throw domain_error("mean_of: empty sample");
    return neumaier_sum(xs) / static_cast<double>(xs.size());
}

double stderr_of(std::span<const double> xs, double mean) {
    const std::size_t n = xs.size();
    if (n < 2) throw domain_error("stderr_of: need at least two samples");
    double sum = 0.0, comp = 0.0;
    for (double x : xs) {
        const double d = (x - mean) * (x - mean);
        const double t = sum + d;
        if (std::abs(sum) >= d)
            comp += (sum - t) + d;
        else
            comp += (d - t) + sum;
        sum = t;
    }
    const double var = (sum + comp) / static_cast<double>(n - 1);
    return std::sqrt(var / static_cast<double>(n));
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

MomentRow make_row(double t, std::string name, std::span<const double> sample, double target,
                   bool gated) {
    MomentRow row;
    row.t = t;
    row.name = std::move(name);
    row.estimate = mean_of(sample);
    row.std_error = stderr_of(sample, row.estimate);
    row.target = target;
    if (row.std_error > 0.0) {
        row.z = (row.estimate - target) / row.std_error;
    } else {
        // Deterministic ensemble (e.g. the t = 0 checkpoint).
        const bool match = std::abs(row.estimate - target) <= 1e-12 * std::max(1.0, std::abs(target));
        row.z = match ? 0.0 : std::numeric_limits<double>::infinity();
    }
    row.gated = gated;
    return row;
}

void push_row(MomentReport& report, MomentRow row) {
    if (row.gated) {
        const bool ok = std::isfinite(row.estimate) && std::isfinite(row.z) &&
                        std::abs(row.z) <= 3.0;
        if (!ok) report.pass = false;
    } else if (!std::isfinite(row.estimate)) {
        report.pass = false;
    }
    report.rows.push_back(std::move(row));
}

}  // namespace

MomentReport compare_moments(const PathBatch& batch, const EquilibriumSolution& sol,
                             const OdeSolution& sigma3_curve) {
    const std::size_t n = batch.a.size();
    MomentReport report;
    std::vector<double> w(n);

    for (const Checkpoint& cp : batch.checkpoints) {
        const double t = cp.t;

        for (std::size_t i = 0; i < n; ++i) {
            const double x = batch.a[i] - cp.theta[i] - cp.q[i];
            w[i] = x * x;
        }
        push_row(report, make_row(t, "Sigma1", w, sol.sigma1(t), true));

        for (std::size_t i = 0; i < n; ++i) {
            const double x = batch.a[i] - cp.theta[i] - cp.q[i];
            w[i] = (batch.v[i] - cp.p[i]) * x;
        }
        push_row(report, make_row(t, "Sigma2", w, sol.sigma2(t), true));

        for (std::size_t i = 0; i < n; ++i) w[i] = cp.q[i] * cp.q[i];
        push_row(report, make_row(t, "Sigma3", w, sigma3_curve.value_at(t, 0), true));

        for (std::size_t i = 0; i < n; ++i) {
            const double vp = batch.v[i] - cp.p[i];
            w[i] = vp * vp;
        }
        push_row(report, make_row(t, "Sigma4", w, sol.sigma4(t), true));

        for (std::size_t i = 0; i < n; ++i)
            w[i] = cp.q[i] * (batch.a[i] - cp.theta[i] - cp.q[i]);
        push_row(report, make_row(t, "QX", w, 0.0, true));

        push_row(report, make_row(t, "P_mean", cp.p, 0.0, true));

        for (std::size_t i = 0; i < n; ++i) w[i] = cp.theta[i] * cp.theta[i];
        push_row(report, make_row(t, "theta_sq", w, kNaN, false));
    }

    // Conditional means theta/a and Q/a over |a| > 0.1*sigma_a, against f, g.
    {
        const double cut = 0.1 * sol.params().sigma_a;
        for (const Checkpoint& cp : batch.checkpoints) {
            std::vector<double> fr, gr;
            fr.reserve(n);
            gr.reserve(n);
            for (std::size_t i = 0; i < n; ++i) {
                if (std::abs(batch.a[i]) <= cut) continue;
                fr.push_back(cp.theta[i] / batch.a[i]);
                gr.push_back(cp.q[i] / batch.a[i]);
            }
            if (fr.size() >= 2) {
                push_row(report, make_row(cp.t, "theta_over_a", fr, sol.f(cp.t), true));
                push_row(report, make_row(cp.t, "q_over_a", gr, sol.g(cp.t), true));
            }
        }
    }

    // Price increments are uncorrelated with the past price (martingale).
    for (std::size_t ci = 0; ci < batch.checkpoints.size(); ++ci) {
        for (std::size_t cj = ci + 1; cj < batch.checkpoints.size(); ++cj) {
            const Checkpoint& cs = batch.checkpoints[ci];
            const Checkpoint& ct = batch.checkpoints[cj];
            for (std::size_t i = 0; i < n; ++i) w[i] = (ct.p[i] - cs.p[i]) * cs.p[i];
            push_row(report, make_row(ct.t, "P_increment_cov(" + std::to_string(cs.t) + ")", w,
                                      0.0, true));
        }
    }

    // Final-state diagnostics and the insider value.
    for (std::size_t i = 0; i < n; ++i) {
        const double x = batch.x_tm(i);
        w[i] = x * x;
    }
    push_row(report, make_row(kNaN, "X_Tminus_sq", w, kNaN, false));
    for (std::size_t i = 0; i < n; ++i) w[i] = batch.dp_T[i] * batch.dp_T[i];
    push_row(report, make_row(kNaN, "dP_T_sq", w, kNaN, false));

    const double sa = sol.params().sigma_a;
    push_row(report, make_row(kNaN, "insider_value", batch.value,
                              sol.I() * sa * sa + sol.K(0.0), true));

    return report;
}

AutocorrEstimate estimate_autocorrelation(const PathBatch& batch, std::size_t probe_index,
                                          const EquilibriumSolution& sol,
                                          const OdeSolution& sigma3_curve) {
    if (probe_index >= batch.increments.size())
        throw domain_error("estimate_autocorrelation: no such increment record");
    const IncrementRecord& rec = batch.increments[probe_index];
    const std::size_t n = rec.y_at.size();
    if (n < 4) throw domain_error("estimate_autocorrelation: too few paths");

    std::vector<double> d1(n), d2(n), prod(n);
    for (std::size_t i = 0; i < n; ++i) {
        d1[i] = rec.y_at[i] - rec.y_before[i];
        d2[i] = rec.y_after[i] - rec.y_at[i];
        prod[i] = d1[i] * d2[i];
    }
    const double m1 = mean_of(d1), m2 = mean_of(d2);
    const double sd1 = stderr_of(d1, m1) * std::sqrt(static_cast<double>(n));
    const double sd2 = stderr_of(d2, m2) * std::sqrt(static_cast<double>(n));

    AutocorrEstimate est;
    est.t = rec.t;
    est.h = rec.h;
    est.raw = mean_of(prod);
    est.scaled = est.raw / (sd1 * sd2 * rec.h);

    // Standard error by batch means over contiguous path blocks.
    const std::size_t n_batches = std::min<std::size_t>(100, n / 2);
    const std::size_t m = n / n_batches;
    std::vector<double> bvals(n_batches);
    for (std::size_t b = 0; b < n_batches; ++b) {
        const std::span<const double> p1(d1.data() + b * m, m);
        const std::span<const double> p2(d2.data() + b * m, m);
        const std::span<const double> pp(prod.data() + b * m, m);
        const double bm1 = mean_of(p1), bm2 = mean_of(p2);
        const double bsd1 = stderr_of(p1, bm1) * std::sqrt(static_cast<double>(m));
        const double bsd2 = stderr_of(p2, bm2) * std::sqrt(static_cast<double>(m));
        bvals[b] = mean_of(pp) / (bsd1 * bsd2 * rec.h);
    }
    const double bmean = mean_of(bvals);
    est.std_error = stderr_of(bvals, bmean);

    est.target = sol.scaled_autocorrelation(rec.t, sigma3_curve.value_at(rec.t, 0));
    est.z = (est.scaled - est.target) / est.std_error;
    return est;
}

UShapeResult detect_u_shape(std::span<const double> times, std::span<const double> values) {
    if (times.size() != values.size())
        throw domain_error("detect_u_shape: mismatched lengths");
    if (times.size() < 10) throw domain_error("detect_u_shape: need at least 10 samples");

    double scale = 0.0;
    for (double v : values) scale = std::max(scale, std::abs(v));
    const double tol = 1e-12 * std::max(scale, 1.0);

    bool saw_down = false, saw_up = false;
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
        const double d = values[i + 1] - values[i];
        if (std::abs(d) <= tol) continue;
        if (d < 0.0) {
            if (saw_up) return {false, 0.0};  // slope turned negative again
            saw_down = true;
        } else {
            saw_up = true;
        }
    }
    if (!(saw_down && saw_up)) return {false, 0.0};

    const auto it = std::min_element(values.begin(), values.end());
    return {true, times[static_cast<std::size_t>(it - values.begin())]};
}

BlockFractionReport block_fraction_compare(const PathBatch& batch,
                                           const EquilibriumSolution& sol) {
    const double cut = 0.1 * sol.params().sigma_a;
    std::vector<double> ratios;
    ratios.reserve(batch.a.size());
    for (std::size_t i = 0; i < batch.a.size(); ++i) {
        if (std::abs(batch.a[i]) <= cut) continue;
        ratios.push_back(batch.block_order(i) / batch.a[i]);
    }
    if (ratios.size() < 2) throw domain_error("block_fraction_compare: too few usable paths");

    BlockFractionReport rep;
    rep.closed_form = sol.block_fraction();
    rep.estimate = mean_of(ratios);
    rep.std_error = stderr_of(ratios, rep.estimate);
    rep.z = (rep.estimate - rep.closed_form) / rep.std_error;
    rep.n_used = ratios.size();
    return rep;
}

FigureSet figure_series(const ModelParams& base, const std::vector<double>& sigma_a_list,
                        int n_grid) {
    if (sigma_a_list.empty()) throw domain_error("figure_series: sigma_a list is empty");
    if (n_grid < 2) throw domain_error("figure_series: n_grid must be >= 2");

    FigureSet set;
    set.sigma_a = sigma_a_list;
    const double T = base.T;
    const double t_cut = T * (1.0 - 1e-3);  // 1B and 1C stop short of T

    FigureSeries fa{"1A", {}, {}}, fb{"1B", {}, {}}, fc{"1C", {}, {}}, fd{"1D", {}, {}};
    for (int i = 0; i < n_grid; ++i) {
        const double w = static_cast<double>(i) / static_cast<double>(n_grid - 1);
        fa.t.push_back(w * T);
        fb.t.push_back(w * t_cut);
        fc.t.push_back(w * t_cut);
        fd.t.push_back(w * T);
    }

    for (double sa : sigma_a_list) {
        const ModelParams params(base.sigma_w, sa, base.sigma_v, base.rho, base.T);
        const EquilibriumSolution sol = build_solution(params);
        const OdeSolution sigma3 = integrate_sigma3(sol, std::max(10000, 10 * n_grid));

        std::vector<double> ca(n_grid), cb(n_grid), cc(n_grid), cd(n_grid);
        const double sw2 = params.sigma_w * params.sigma_w;
        for (int i = 0; i < n_grid; ++i) {
            ca[static_cast<std::size_t>(i)] = sol.lambda(fa.t[static_cast<std::size_t>(i)]);
            cb[static_cast<std::size_t>(i)] = sol.f_prime(fb.t[static_cast<std::size_t>(i)]);
            const double t = fc.t[static_cast<std::size_t>(i)];
            const double al = sol.alpha(t);
            cc[static_cast<std::size_t>(i)] =
                al * (al * sigma3.value_at(t, 0) / sw2 + sol.r(t));
            cd[static_cast<std::size_t>(i)] =
                sol.remaining_variance(fd.t[static_cast<std::size_t>(i)]);
        }
        fa.columns.push_back(std::move(ca));
        fb.columns.push_back(std::move(cb));
        fc.columns.push_back(std::move(cc));
        fd.columns.push_back(std::move(cd));
    }

    set.panels = {std::move(fa), std::move(fb), std::move(fc), std::move(fd)};
    return set;
}

}  // namespace kyleq
