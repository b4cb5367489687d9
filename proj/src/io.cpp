#include "kyleq/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace kyleq {
namespace io {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open for writing: " + path.string());
    return out;
}

void write_header(std::ofstream& out, const std::vector<std::string>& header) {
    for (std::size_t i = 0; i < header.size(); ++i)
        out << (i ? "," : "") << header[i];
    out << "\n";
}

void write_cells(std::ofstream& out, const std::vector<double>& row) {
    for (std::size_t i = 0; i < row.size(); ++i)
        out << (i ? "," : "") << format_double(row[i]);
    out << "\n";
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw io_error("write failed: " + path.string());
}

}  // namespace

std::string format_double(double x) {
    if (std::isnan(x)) return "";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    auto out = open_out(path);
    write_header(out, header);
    for (const auto& row : rows) write_cells(out, row);
    finish(out, path);
}

void write_curves_csv(const std::filesystem::path& path, const CoefficientGrid& grid) {
    auto out = open_out(path);
    write_header(out, {"t", "r", "Sigma1", "Sigma2", "Sigma3", "Sigma4", "lambda", "mu",
                       "beta", "s", "alpha", "J", "K", "f", "g", "fprime",
                       "remaining_variance"});
    for (std::size_t i = 0; i < grid.size(); ++i)
        write_cells(out, {grid.t[i], grid.r[i], grid.sigma1[i], grid.sigma2[i], grid.sigma3[i],
                          grid.sigma4[i], grid.lambda[i], grid.mu[i], grid.beta[i], grid.s[i],
                          grid.alpha[i], grid.J[i], grid.K[i], grid.f[i], grid.g[i],
                          grid.f_prime[i], grid.remaining_variance[i]});
    finish(out, path);
}

void write_moments_csv(const std::filesystem::path& path, const MomentReport& report) {
    auto out = open_out(path);
    write_header(out, {"checkpoint", "moment", "estimate", "stderr", "target", "z", "gated"});
    for (const MomentRow& row : report.rows) {
        out << format_double(row.t) << "," << row.name << "," << format_double(row.estimate)
            << "," << format_double(row.std_error) << "," << format_double(row.target) << ","
            << format_double(row.z) << "," << (row.gated ? 1 : 0) << "\n";
    }
    finish(out, path);
}

void write_autocorr_csv(const std::filesystem::path& path,
                        const std::vector<AutocorrEstimate>& estimates) {
    auto out = open_out(path);
    write_header(out, {"t", "h", "raw", "scaled", "stderr", "target", "z"});
    for (const AutocorrEstimate& e : estimates)
        write_cells(out, {e.t, e.h, e.raw, e.scaled, e.std_error, e.target, e.z});
    finish(out, path);
}

void write_figure_csv(const std::filesystem::path& path, const FigureSeries& series,
                      const std::vector<double>& sigma_a) {
    auto out = open_out(path);
    std::vector<std::string> header{"t"};
    for (double sa : sigma_a) header.push_back("sigma_a=" + format_double(sa));
    write_header(out, header);
    for (std::size_t i = 0; i < series.t.size(); ++i) {
        std::vector<double> row{series.t[i]};
        for (const auto& col : series.columns) row.push_back(col[i]);
        write_cells(out, row);
    }
    finish(out, path);
}

void write_checks_csv(const std::filesystem::path& path, const std::vector<Check>& checks) {
    auto out = open_out(path);
    write_header(out, {"check", "magnitude", "tolerance", "pass"});
    for (const Check& c : checks)
        out << c.name << "," << format_double(c.magnitude) << ","
            << format_double(c.tolerance) << "," << (c.pass ? 1 : 0) << "\n";
    finish(out, path);
}

void write_paths_csv(const std::filesystem::path& path, const PathBatch& batch) {
    auto out = open_out(path);
    write_header(out, {"path", "t", "theta", "Q", "P", "Y"});
    for (std::size_t i = 0; i < batch.a.size(); ++i)
        for (const Checkpoint& cp : batch.checkpoints) {
            out << i << "," << format_double(cp.t) << "," << format_double(cp.theta[i]) << ","
                << format_double(cp.q[i]) << "," << format_double(cp.p[i]) << ","
                << format_double(cp.y[i]) << "\n";
        }
    finish(out, path);
}

}  // namespace io
}  // namespace kyleq
