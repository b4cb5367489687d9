// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one pass/fail line per criterion.  Exits nonzero if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "kyleq/analysis.hpp"
#include "kyleq/calibrate.hpp"
#include "kyleq/checks.hpp"
#include "kyleq/grid.hpp"
#include "kyleq/io.hpp"
#include "kyleq/ode.hpp"
#include "kyleq/simulate.hpp"
#include "kyleq/special.hpp"

namespace fs = std::filesystem;
using namespace kyleq;

namespace {

int g_failures = 0;

class Criterion {
public:
    explicit Criterion(int id) : id_(id), start_(std::chrono::steady_clock::now()) {}

    void expect(bool ok, const std::string& what) {
        if (!ok) {
            failed_.push_back(what);
        }
    }

    ~Criterion() {
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        if (failed_.empty()) {
            std::printf("PASS criterion %2d (%.1fs)\n", id_, secs);
        } else {
            ++g_failures;
            std::printf("FAIL criterion %2d (%.1fs):", id_, secs);
            for (const auto& f : failed_) std::printf(" [%s]", f.c_str());
            std::printf("\n");
        }
        std::fflush(stdout);
    }

private:
    int id_;
    std::chrono::steady_clock::time_point start_;
    std::vector<std::string> failed_;
};

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", x);
    return buf;
}

const Check& find_check(const std::vector<Check>& checks, const std::string& name) {
    for (const auto& c : checks)
        if (c.name == name) return c;
    throw std::runtime_error("missing check: " + name);
}

double mean_plain(const std::vector<double>& xs) {
    return mean_of(xs);
}

const ModelParams kFig1{1.0, 1.0, 1.0, 0.3, 1.0};

}  // namespace

int main() {
    const auto wall_start = std::chrono::steady_clock::now();
    auto elapsed = [&wall_start] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start)
            .count();
    };

    const EquilibriumSolution fig1 = build_solution(kFig1);
    const OdeSolution sigma3_fine = integrate_sigma3(fig1, 100000);

    // Criterion 1: calibration closed loop at the hand-derived tau(1).
    {
        Criterion c(1);
        const double pi = std::numbers::pi;
        const double tau1 =
            (4.0 * pi / 3.0 - 7.0 * std::sqrt(3.0) / 4.0 - (pi - 3.0)) /
            (3.0 * std::sqrt(3.0) / 4.0);
        const CalibrationResult cal = calibrate_r0({1.0, 1.0, 1.0, 0.3, tau1});
        c.expect(std::abs(cal.r0 - 1.0) <= 1e-10,
                 "r0 = " + fmt(cal.r0) + " not within 1e-10 of 1");
    }

    // Criterion 2: boundary conditions for 20 random parameter sets.
    {
        Criterion c(2);
        std::mt19937 gen(20260810);
        std::uniform_real_distribution<double> sig(0.2, 5.0), rho(0.05, 1.0),
            horizon(0.1, 5.0);
        for (int i = 0; i < 20; ++i) {
            const ModelParams params{sig(gen), sig(gen), sig(gen), rho(gen), horizon(gen)};
            const EquilibriumSolution sol = build_solution(params);
            c.expect(std::abs(sol.r(params.T)) <= 1e-8, "r(T) set " + std::to_string(i));
            c.expect(std::abs(sol.sigma1(params.T)) <= 1e-8 * params.sigma_a * params.sigma_a,
                     "Sigma1(T) set " + std::to_string(i));
        }
    }

    // Criteria 3-5: oracle equivalence with observed order, HJB residuals,
    // filtering identities -- all from the invariant suite at full size.
    {
        VerifyOptions opt;
        opt.grid_n = 1000;
        opt.oracle_steps = 100000;
        const double t0 = elapsed();
        const std::vector<Check> checks = run_invariant_suite(fig1, opt);
        std::printf("    [invariant suite: %.1fs]\n", elapsed() - t0);
        {
            Criterion c(3);
            for (const char* name : {"oracle_r", "oracle_sigma1", "oracle_sigma4", "oracle_f",
                                     "oracle_g", "oracle_K"}) {
                const Check& chk = find_check(checks, name);
                c.expect(chk.pass && chk.magnitude <= 1e-6,
                         std::string(name) + " gap " + fmt(chk.magnitude));
            }
            for (const char* name :
                 {"order_r", "order_sigma1", "order_sigma4", "order_f", "order_K"}) {
                const Check& chk = find_check(checks, name);
                c.expect(chk.pass, std::string(name) + " = " + fmt(chk.magnitude));
            }
        }
        {
            Criterion c(4);
            for (int k = 1; k <= 5; ++k) {
                const Check& chk = find_check(checks, "hjb_eq" + std::to_string(k));
                c.expect(chk.pass, chk.name + " residual " + fmt(chk.magnitude));
            }
        }
        {
            Criterion c(5);
            for (const char* name : {"filter_lambda", "filter_r", "filter_mu", "filter_s"}) {
                const Check& chk = find_check(checks, name);
                c.expect(chk.pass, std::string(name) + " rel " + fmt(chk.magnitude));
            }
        }
    }

    // Shared Monte Carlo runs for criteria 6, 7, 8(c) and 10.
    SimConfig cfg;
    cfg.n_paths = 100000;
    cfg.n_steps = 2000;
    cfg.seed = 42;
    cfg.checkpoint_times = {0.25, 0.5, 0.75};
    cfg.record_increments = true;
    cfg.autocorr_probes = {{0.5, 1.0 / 100.0}, {0.5, 1.0 / 200.0}, {0.5, 1.0 / 400.0}};

    double t0 = elapsed();
    const PathBatch batch2000 = run_batch(fig1, cfg);
    const MomentReport report2000 = compare_moments(batch2000, fig1, sigma3_fine);

    SimConfig cfg1000 = cfg;
    cfg1000.n_steps = 1000;
    cfg1000.autocorr_probes.clear();
    cfg1000.record_increments = false;
    const PathBatch batch1000 = run_batch(fig1, cfg1000);
    std::printf("    [MC batches 2000+1000 steps x 1e5 paths: %.1fs]\n", elapsed() - t0);

    // Criterion 6: filter moments within 3 standard errors; Euler bias shrinks.
    {
        Criterion c(6);
        int rows_checked = 0;
        for (const MomentRow& row : report2000.rows) {
            const bool listed = row.name == "Sigma1" || row.name == "Sigma2" ||
                                row.name == "Sigma3" || row.name == "Sigma4" ||
                                row.name == "QX";
            if (!listed) continue;
            ++rows_checked;
            c.expect(std::isfinite(row.z) && std::abs(row.z) <= 3.0,
                     row.name + "@t=" + fmt(row.t) + " z=" + fmt(row.z));
        }
        c.expect(rows_checked == 15, "expected 15 moment rows");

        std::vector<double> x2k(batch2000.a.size()), x1k(batch1000.a.size());
        std::vector<double> j2k(batch2000.a.size()), j1k(batch1000.a.size());
        for (std::size_t i = 0; i < batch2000.a.size(); ++i) {
            x2k[i] = batch2000.x_tm(i) * batch2000.x_tm(i);
            j2k[i] = batch2000.dp_T[i] * batch2000.dp_T[i];
        }
        for (std::size_t i = 0; i < batch1000.a.size(); ++i) {
            x1k[i] = batch1000.x_tm(i) * batch1000.x_tm(i);
            j1k[i] = batch1000.dp_T[i] * batch1000.dp_T[i];
        }
        const double shrink_x = mean_plain(x1k) / mean_plain(x2k);
        const double shrink_j = mean_plain(j1k) / mean_plain(j2k);
        c.expect(shrink_x >= 2.0, "E[X_{T-}^2] shrink " + fmt(shrink_x) + "x");
        c.expect(shrink_j >= 2.0, "E[(dP_T)^2] shrink " + fmt(shrink_j) + "x");
    }

    // Criterion 7: insider value against I*sigma_a^2 + K(0).
    {
        Criterion c(7);
        bool found = false;
        for (const MomentRow& row : report2000.rows) {
            if (row.name != "insider_value") continue;
            found = true;
            c.expect(std::abs(row.z) <= 3.0, "value z=" + fmt(row.z) + " est=" +
                                                 fmt(row.estimate) + " target=" +
                                                 fmt(row.target));
        }
        c.expect(found, "insider_value row missing");
    }

    // Criterion 8: the equilibrium-property reproductions.
    {
        Criterion c(8);

        // (a) lambda strictly decreasing.
        bool decreasing = true;
        double prev = fig1.lambda(0.0);
        for (int i = 1; i <= 1000; ++i) {
            const double cur = fig1.lambda(static_cast<double>(i) / 1000.0);
            decreasing = decreasing && cur < prev;
            prev = cur;
        }
        c.expect(decreasing, "(a) lambda not strictly decreasing");

        // (b) U-shaped expected order rate for the three scenarios.
        for (double sa : {5.0, 3.0, 1.0}) {
            const EquilibriumSolution sol = build_solution({1.0, sa, 1.0, 0.3, 1.0});
            std::vector<double> t, fp;
            for (int i = 0; i <= 800; ++i) {
                const double ti = (1.0 - 1e-3) * static_cast<double>(i) / 800.0;
                t.push_back(ti);
                fp.push_back(sol.f_prime(ti));
            }
            c.expect(detect_u_shape(t, fp).is_u, "(b) sigma_a=" + fmt(sa) + " not U-shaped");
        }

        // (c) block fraction: closed form in (0,1), MC ratio within 3 stderr,
        // and the r0 = 1 closed loop equals (sqrt(3)-1)/3.
        const BlockFractionReport bf = block_fraction_compare(batch2000, fig1);
        c.expect(bf.closed_form > 0.0 && bf.closed_form < 1.0, "(c) fraction outside (0,1)");
        c.expect(std::abs(bf.z) <= 3.0, "(c) MC z=" + fmt(bf.z));
        const double pi = std::numbers::pi;
        const double tau1 = (4.0 * pi / 3.0 - 7.0 * std::sqrt(3.0) / 4.0 - (pi - 3.0)) /
                            (3.0 * std::sqrt(3.0) / 4.0);
        const EquilibriumSolution unit = build_solution({1.0, 1.0, 1.0, 0.3, tau1});
        c.expect(std::abs(unit.block_fraction() - (std::sqrt(3.0) - 1.0) / 3.0) <= 1e-10,
                 "(c) r0=1 block fraction");

        // (d) autocorrelation: positive target curve; estimates consistent with
        // the target at every h in {T/100, T/200, T/400} (3 standard errors).
        // The increment estimator carries an O(dt/h) Euler bias, so this gate
        // runs on a finer time grid where dt << h for every probe.
        bool target_positive = true;
        for (int i = 1; i < 200; ++i) {
            const double t = static_cast<double>(i) / 200.0;
            target_positive =
                target_positive &&
                fig1.scaled_autocorrelation(t, sigma3_fine.value_at(t, 0)) > 0.0;
        }
        c.expect(target_positive, "(d) target not positive everywhere");

        SimConfig fine = cfg;
        fine.n_steps = 8000;
        fine.checkpoint_times.clear();
        const double t1 = elapsed();
        const PathBatch batch_fine = run_batch(fig1, fine);
        std::printf("    [autocorrelation batch 8000 steps x 1e5 paths: %.1fs]\n",
                    elapsed() - t1);
        for (std::size_t pi_ = 0; pi_ < batch_fine.increments.size(); ++pi_) {
            const AutocorrEstimate est =
                estimate_autocorrelation(batch_fine, pi_, fig1, sigma3_fine);
            c.expect(std::abs(est.z) <= 3.0,
                     "(d) h=" + fmt(est.h) + " z=" + fmt(est.z));
            std::printf("    autocorr h=%-8s est=%-10s stderr=%-10s target=%s z=%s\n",
                        fmt(est.h).c_str(), fmt(est.scaled).c_str(),
                        fmt(est.std_error).c_str(), fmt(est.target).c_str(),
                        fmt(est.z).c_str());
        }

        // (e) terminal remaining variance formula, and the 1D level at t = 0.
        const double r0 = fig1.r0();
        const double rv_formula =
            0.09 * std::sqrt(1.0 + 2.0 * r0) / ((1.0 + r0) * (1.0 + r0));
        c.expect(std::abs(fig1.remaining_variance(1.0) - rv_formula) <= 1e-12,
                 "(e) terminal remaining variance");
        c.expect(rv_formula > 0.0, "(e) terminal remaining variance not positive");
        c.expect(std::abs(fig1.remaining_variance(0.0) - 0.09) <= 1e-12,
                 "(e) remaining variance at 0 is not rho^2 sigma_v^2");
    }

    // Criterion 9: qualitative figure reproduction with the caption parameters.
    {
        Criterion c(9);
        const FigureSet set = figure_series(kFig1, {5.0, 3.0, 1.0}, 501);
        for (std::size_t col = 0; col < 3; ++col) {
            const auto& lam = set.panels[0].columns[col];
            bool dec = true;
            for (std::size_t i = 0; i + 1 < lam.size(); ++i) dec = dec && lam[i + 1] < lam[i];
            c.expect(dec, "1A column " + std::to_string(col));

            c.expect(detect_u_shape(set.panels[1].t, set.panels[1].columns[col]).is_u,
                     "1B column " + std::to_string(col));

            const auto& ac = set.panels[2].columns[col];
            bool pos = true;
            for (double v : ac) pos = pos && v > 0.0;
            c.expect(pos, "1C column " + std::to_string(col));

            const auto& rv = set.panels[3].columns[col];
            bool rvdec = true;
            for (std::size_t i = 0; i + 1 < rv.size(); ++i)
                rvdec = rvdec && rv[i + 1] < rv[i];
            c.expect(rvdec && rv.back() > 0.0, "1D column " + std::to_string(col));
        }
        // Scenario ordering at t = 0 is monotone in every panel (1D ties: the
        // level there is rho^2 sigma_v^2 for every sigma_a).
        auto monotone_at_0 = [&](int panel, double tol) {
            const auto& p = set.panels[static_cast<std::size_t>(panel)];
            const double d1 = p.columns[1][0] - p.columns[0][0];
            const double d2 = p.columns[2][0] - p.columns[1][0];
            return (d1 <= tol && d2 <= tol) || (d1 >= -tol && d2 >= -tol);
        };
        c.expect(monotone_at_0(0, 0.0), "1A ordering at t=0");
        c.expect(monotone_at_0(1, 0.0), "1B ordering at t=0");
        c.expect(monotone_at_0(2, 0.0), "1C ordering at t=0");
        c.expect(monotone_at_0(3, 1e-9), "1D ordering at t=0");
    }

    // Criterion 10: byte-identical reports for a repeated seed.
    {
        Criterion c(10);
        const fs::path dir = fs::temp_directory_path() / "kyleq_acceptance";
        fs::create_directories(dir);

        const PathBatch repeat = run_batch(fig1, cfg);
        const MomentReport report_repeat = compare_moments(repeat, fig1, sigma3_fine);
        io::write_moments_csv(dir / "moments_a.csv", report2000);
        io::write_moments_csv(dir / "moments_b.csv", report_repeat);

        std::vector<AutocorrEstimate> est_a, est_b;
        for (std::size_t i = 0; i < batch2000.increments.size(); ++i) {
            est_a.push_back(estimate_autocorrelation(batch2000, i, fig1, sigma3_fine));
            est_b.push_back(estimate_autocorrelation(repeat, i, fig1, sigma3_fine));
        }
        io::write_autocorr_csv(dir / "autocorr_a.csv", est_a);
        io::write_autocorr_csv(dir / "autocorr_b.csv", est_b);

        auto slurp = [](const fs::path& p) {
            std::ifstream in(p, std::ios::binary);
            std::stringstream ss;
            ss << in.rdbuf();
            return ss.str();
        };
        const std::string a = slurp(dir / "moments_a.csv");
        c.expect(!a.empty() && a == slurp(dir / "moments_b.csv"), "moments.csv differs");
        c.expect(slurp(dir / "autocorr_a.csv") == slurp(dir / "autocorr_b.csv"),
                 "autocorr.csv differs");
    }

    if (g_failures == 0) {
        std::printf("all acceptance criteria passed\n");
        return 0;
    }
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
}
