// kyleq: calibrate, export, simulate and verify the constrained-insider
// equilibrium.  Exit codes: 0 ok, 2 usage/invalid parameters, 3 calibration
// failure, 4 I/O failure, 5 verification/moment-check failure.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kyleq/analysis.hpp"
#include "kyleq/calibrate.hpp"
#include "kyleq/checks.hpp"
#include "kyleq/grid.hpp"
#include "kyleq/io.hpp"
#include "kyleq/kernels.hpp"
#include "kyleq/ode.hpp"
#include "kyleq/simulate.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct ParamFlags {
    double sigma_w = 1.0;
    double sigma_a = 1.0;
    double sigma_v = 1.0;
    double rho = 0.3;
    double T = 1.0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--sigma-w", sigma_w, "noise-trader volatility")->capture_default_str();
        cmd->add_option("--sigma-a", sigma_a, "target standard deviation")->capture_default_str();
        cmd->add_option("--sigma-v", sigma_v, "dividend standard deviation")->capture_default_str();
        cmd->add_option("--rho", rho, "target-dividend correlation, in (0,1]")->capture_default_str();
        cmd->add_option("--T", T, "trading horizon")->capture_default_str();
    }

    kyleq::ModelParams build() const { return {sigma_w, sigma_a, sigma_v, rho, T}; }

    json to_json() const {
        return {{"sigma_w", sigma_w}, {"sigma_a", sigma_a}, {"sigma_v", sigma_v},
                {"rho", rho}, {"T", T}};
    }
};

void write_json(const fs::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw kyleq::io::io_error("cannot open for writing: " + path.string());
    out << j.dump(2) << "\n";
    if (!out) throw kyleq::io::io_error("write failed: " + path.string());
}

void echo_config(const fs::path& dir, const std::string& command, const ParamFlags& pf,
                 json extra) {
    json config{{"command", command},
                {"params", pf.to_json()},
                {"rng", "philox4x32-10/box-muller"},
                {"kernel_backend", kyleq::kernels::backend_name(kyleq::kernels::active_backend())}};
    config.merge_patch(extra);
    write_json(dir / "run_config.json", config);
}

fs::path ensure_dir(const std::string& out) {
    fs::path dir(out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw kyleq::io::io_error("cannot create output directory: " + out);
    return dir;
}

int cmd_calibrate(const ParamFlags& pf, const std::string& format, const std::string& out) {
    const kyleq::ModelParams params = pf.build();
    const kyleq::CalibrationResult cal = kyleq::calibrate_r0(params);
    const kyleq::EquilibriumSolution sol(params, cal.r0);

    json result{{"r0", cal.r0},
                {"I", sol.I()},
                {"residual", cal.residual},
                {"iterations", cal.iterations},
                {"bracket", {cal.bracket.first, cal.bracket.second}}};
    if (format == "json") {
        std::cout << result.dump(2) << "\n";
    } else {
        std::printf("%-12s %s\n", "r0", kyleq::io::format_double(cal.r0).c_str());
        std::printf("%-12s %s\n", "I", kyleq::io::format_double(sol.I()).c_str());
        std::printf("%-12s %s\n", "residual", kyleq::io::format_double(cal.residual).c_str());
        std::printf("%-12s %d\n", "iterations", cal.iterations);
        std::printf("%-12s [%s, %s]\n", "bracket",
                    kyleq::io::format_double(cal.bracket.first).c_str(),
                    kyleq::io::format_double(cal.bracket.second).c_str());
    }
    if (!out.empty()) {
        const fs::path dir = ensure_dir(out);
        write_json(dir / "calibration.json", result);
        echo_config(dir, "calibrate", pf, {{"format", format}});
    }
    return 0;
}

int cmd_curves(const ParamFlags& pf, int64_t n_grid, const std::string& out) {
    const kyleq::EquilibriumSolution sol = kyleq::build_solution(pf.build());
    const kyleq::CoefficientGrid grid = kyleq::sample_grid(sol, n_grid);
    const fs::path dir = ensure_dir(out);
    kyleq::io::write_curves_csv(dir / "curves.csv", grid);
    echo_config(dir, "curves", pf, {{"grid", n_grid}});
    std::cout << "wrote " << (dir / "curves.csv").string() << " (" << grid.size() << " rows)\n";
    return 0;
}

int cmd_simulate(const ParamFlags& pf, kyleq::SimConfig config, bool autocorr, bool dump_paths,
                 const std::string& out) {
    const kyleq::ModelParams params = pf.build();
    const kyleq::EquilibriumSolution sol = kyleq::build_solution(params);

    if (config.checkpoint_times.empty())
        config.checkpoint_times = {0.25 * params.T, 0.5 * params.T, 0.75 * params.T};
    if (autocorr) {
        config.record_increments = true;
        config.autocorr_probes = {{0.5 * params.T, params.T / 100.0},
                                  {0.5 * params.T, params.T / 200.0},
                                  {0.5 * params.T, params.T / 400.0}};
    }

    const kyleq::PathBatch batch = kyleq::run_batch(sol, config);
    const kyleq::OdeSolution sigma3 = kyleq::integrate_sigma3(sol, 100000);
    const kyleq::MomentReport report = kyleq::compare_moments(batch, sol, sigma3);

    const fs::path dir = ensure_dir(out);
    kyleq::io::write_moments_csv(dir / "moments.csv", report);
    if (autocorr) {
        std::vector<kyleq::AutocorrEstimate> estimates;
        for (std::size_t i = 0; i < batch.increments.size(); ++i)
            estimates.push_back(kyleq::estimate_autocorrelation(batch, i, sol, sigma3));
        kyleq::io::write_autocorr_csv(dir / "autocorr.csv", estimates);
    }
    if (dump_paths) kyleq::io::write_paths_csv(dir / "paths.csv", batch);
    echo_config(dir, "simulate", pf,
                {{"paths", config.n_paths},
                 {"steps", config.n_steps},
                 {"seed", config.seed},
                 {"checkpoints", batch.config.checkpoint_times},
                 {"threads", config.threads},
                 {"autocorr", autocorr},
                 {"rng", batch.rng_id}});

    std::size_t gated = 0, failed = 0;
    for (const auto& row : report.rows) {
        if (!row.gated) continue;
        ++gated;
        if (!(std::isfinite(row.z) && std::abs(row.z) <= 3.0)) ++failed;
    }
    std::cout << "moment checks: " << (gated - failed) << "/" << gated
              << " within 3 standard errors\n";
    return report.pass ? 0 : 5;
}

int cmd_figures(const ParamFlags& pf, std::vector<double> sigma_a_list, int n_grid,
                const std::string& out) {
    if (sigma_a_list.empty()) sigma_a_list = {5.0, 3.0, 1.0};
    const kyleq::FigureSet set = kyleq::figure_series(pf.build(), sigma_a_list, n_grid);

    const fs::path dir = ensure_dir(out);
    for (const auto& panel : set.panels)
        kyleq::io::write_figure_csv(dir / ("fig" + panel.id + ".csv"), panel, set.sigma_a);
    echo_config(dir, "figures", pf, {{"sigma_a", sigma_a_list}, {"grid", n_grid}});

    // Per-panel shape assertions.
    bool ok = true;
    auto report = [&ok](const std::string& what, bool pass) {
        std::cout << (pass ? "pass" : "FAIL") << "  " << what << "\n";
        ok = ok && pass;
    };
    for (std::size_t c = 0; c < set.sigma_a.size(); ++c) {
        const std::string tag = " [sigma_a=" + kyleq::io::format_double(set.sigma_a[c]) + "]";
        const auto& lam = set.panels[0].columns[c];
        bool decreasing = true;
        for (std::size_t i = 0; i + 1 < lam.size(); ++i)
            decreasing = decreasing && lam[i + 1] < lam[i];
        report("fig1A decreasing" + tag, decreasing);

        const auto u = kyleq::detect_u_shape(set.panels[1].t, set.panels[1].columns[c]);
        report("fig1B U-shaped" + tag, u.is_u);

        const auto& ac = set.panels[2].columns[c];
        report("fig1C positive" + tag,
               std::all_of(ac.begin(), ac.end(), [](double v) { return v > 0.0; }));

        const auto& rv = set.panels[3].columns[c];
        bool rv_decreasing = true;
        for (std::size_t i = 0; i + 1 < rv.size(); ++i)
            rv_decreasing = rv_decreasing && rv[i + 1] < rv[i];
        report("fig1D decreasing to positive limit" + tag, rv_decreasing && rv.back() > 0.0);
    }
    return ok ? 0 : 5;
}

int cmd_verify(const ParamFlags& pf, const kyleq::VerifyOptions& opt, const std::string& out) {
    const kyleq::EquilibriumSolution sol = kyleq::build_solution(pf.build());
    const std::vector<kyleq::Check> checks = kyleq::run_invariant_suite(sol, opt);

    std::printf("%-28s %-14s %-14s %s\n", "check", "magnitude", "tolerance", "result");
    for (const auto& c : checks)
        std::printf("%-28s %-14.6g %-14.6g %s\n", c.name.c_str(), c.magnitude, c.tolerance,
                    c.pass ? "pass" : "FAIL");
    if (!out.empty()) {
        const fs::path dir = ensure_dir(out);
        kyleq::io::write_checks_csv(dir / "verify.csv", checks);
        echo_config(dir, "verify", pf,
                    {{"grid", opt.grid_n},
                     {"oracle_steps", opt.oracle_steps},
                     {"order_steps", opt.order_steps}});
    }
    return kyleq::all_pass(checks) ? 0 : 5;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Constrained-insider Kyle equilibrium: calibration, closed-form curves, "
                 "ODE cross-checks and Monte Carlo verification"};
    app.require_subcommand(1);

    ParamFlags pf;

    auto* calibrate = app.add_subcommand("calibrate", "solve for r0 and report I");
    pf.attach(calibrate);
    std::string format = "table";
    calibrate->add_option("--format", format, "table or json")
        ->check(CLI::IsMember({"table", "json"}))
        ->capture_default_str();
    std::string cal_out;
    calibrate->add_option("--out", cal_out, "output directory (optional)");

    auto* curves = app.add_subcommand("curves", "export coefficient curves as CSV");
    pf.attach(curves);
    int64_t n_grid = 1001;
    curves->add_option("--grid", n_grid, "grid points")->capture_default_str();
    std::string curves_out;
    curves->add_option("--out", curves_out, "output directory")->required();

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo moment verification");
    pf.attach(simulate);
    kyleq::SimConfig sim;
    simulate->add_option("--paths", sim.n_paths, "number of paths")->capture_default_str();
    simulate->add_option("--steps", sim.n_steps, "time steps")->capture_default_str();
    simulate->add_option("--seed", sim.seed, "RNG seed")->capture_default_str();
    simulate->add_option("--threads", sim.threads, "worker threads (0 = hardware)")
        ->capture_default_str();
    simulate->add_option("--checkpoints", sim.checkpoint_times, "checkpoint times")
        ->delimiter(',');
    bool autocorr = false;
    simulate->add_flag("--autocorr", autocorr,
                       "record Y increments at t = T/2 for h = T/100, T/200, T/400");
    bool dump_paths = false;
    simulate->add_flag("--dump-paths", dump_paths, "dump per-path checkpoint states");
    std::string sim_out;
    simulate->add_option("--out", sim_out, "output directory")->required();

    auto* figures = app.add_subcommand("figures", "reproduce the four figure panels as CSV");
    pf.attach(figures);
    std::vector<double> sigma_a_list;
    figures->add_option("--sigma-a-list", sigma_a_list, "sigma_a scenarios")->delimiter(',');
    int fig_grid = 501;
    figures->add_option("--grid", fig_grid, "grid points")->capture_default_str();
    std::string fig_out;
    figures->add_option("--out", fig_out, "output directory")->required();

    auto* verify = app.add_subcommand("verify", "run the full invariant suite");
    pf.attach(verify);
    kyleq::VerifyOptions vopt;
    verify->add_option("--grid", vopt.grid_n, "residual grid points")->capture_default_str();
    verify->add_option("--oracle-steps", vopt.oracle_steps, "RK4 steps for equivalence")
        ->capture_default_str();
    verify->add_option("--order-steps", vopt.order_steps, "coarsest RK4 steps for order check")
        ->capture_default_str();
    verify->add_option("--inject-j-perturb", vopt.j_perturb)->group("");  // test hook
    std::string verify_out;
    verify->add_option("--out", verify_out, "output directory (optional)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (calibrate->parsed()) return cmd_calibrate(pf, format, cal_out);
        if (curves->parsed()) return cmd_curves(pf, n_grid, curves_out);
        if (simulate->parsed()) return cmd_simulate(pf, sim, autocorr, dump_paths, sim_out);
        if (figures->parsed()) return cmd_figures(pf, sigma_a_list, fig_grid, fig_out);
        if (verify->parsed()) return cmd_verify(pf, vopt, verify_out);
    } catch (const kyleq::io::io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const kyleq::calibration_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const kyleq::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
