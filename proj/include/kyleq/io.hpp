#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "kyleq/analysis.hpp"
#include "kyleq/calibrate.hpp"
#include "kyleq/checks.hpp"
#include "kyleq/grid.hpp"

namespace kyleq {
namespace io {

// CSV emitters with fixed headers and 17-significant-digit serialization so
// byte-identical configs give byte-identical files.

class io_error : public error {
public:
    using error::error;
};

std::string format_double(double x);  // %.17g; empty string for NaN

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

/// Columns: t,r,Sigma1,Sigma2,Sigma3,Sigma4,lambda,mu,beta,s,alpha,J,K,f,g,
/// fprime,remaining_variance.  beta is blank on the final row.
void write_curves_csv(const std::filesystem::path& path, const CoefficientGrid& grid);

/// Columns: checkpoint,moment,estimate,stderr,target,z,gated.
void write_moments_csv(const std::filesystem::path& path, const MomentReport& report);

/// Columns: t,h,raw,scaled,stderr,target,z.
void write_autocorr_csv(const std::filesystem::path& path,
                        const std::vector<AutocorrEstimate>& estimates);

/// Columns: t, then one column per sigma_a scenario ("sigma_a=<value>").
void write_figure_csv(const std::filesystem::path& path, const FigureSeries& series,
                      const std::vector<double>& sigma_a);

/// Columns: check,magnitude,tolerance,pass.
void write_checks_csv(const std::filesystem::path& path, const std::vector<Check>& checks);

/// Raw-path dump, one row per (path, checkpoint): path,t,theta,Q,P,Y.
void write_paths_csv(const std::filesystem::path& path, const PathBatch& batch);

}  // namespace io
}  // namespace kyleq
