#pragma once

#include <span>
#include <string>
#include <vector>

#include "kyleq/ode.hpp"
#include "kyleq/simulate.hpp"
#include "kyleq/solution.hpp"

namespace kyleq {

// Compensated (Neumaier) summation; all ensemble statistics reduce in path
// order so reports are bit-reproducible for a fixed seed.
double neumaier_sum(std::span<const double> xs);
double mean_of(std::span<const double> xs);
/// Sample standard error of the mean, sd / sqrt(n).
double stderr_of(std::span<const double> xs, double mean);

struct MomentRow {
    double t;           // checkpoint time (NaN for global rows)
    std::string name;
    double estimate;
    double std_error;
    double target;
    double z;
    bool gated;         // participates in the overall pass flag
};

struct MomentReport {
    std::vector<MomentRow> rows;
    bool pass = true;   // all gated rows finite with |z| <= 3
};

/// Compare checkpoint ensembles against the closed-form / oracle targets:
/// Sigma1..Sigma4, E[QX], price-martingale checks, the normalized conditional
/// means against f and g, E[theta^2] finiteness, and the insider value
/// against I*sigma_a^2 + K(0).
MomentReport compare_moments(const PathBatch& batch, const EquilibriumSolution& sol,
                             const OdeSolution& sigma3_curve);

struct AutocorrEstimate {
    double t, h;
    double raw;        // mean of (Y_t - Y_{t-h})(Y_{t+h} - Y_t)
    double scaled;     // raw / (sd1 * sd2 * h)
    double std_error;  // batch-means standard error of the scaled estimate
    double target;     // alpha*(alpha*Sigma3/sigma_w^2 + r) at the snapped t
    double z;
};

AutocorrEstimate estimate_autocorrelation(const PathBatch& batch, std::size_t probe_index,
                                          const EquilibriumSolution& sol,
                                          const OdeSolution& sigma3_curve);

struct UShapeResult {
    bool is_u = false;
    double argmin_t = 0.0;
};

/// Sign-pattern test on the slopes of a sampled curve: negative on an initial
/// segment, positive on a final segment, single sign change.
UShapeResult detect_u_shape(std::span<const double> times, std::span<const double> values);

struct BlockFractionReport {
    double closed_form;
    double estimate;   // mean of block / a over |a| > 0.1*sigma_a
    double std_error;
    double z;
    std::size_t n_used;
};

BlockFractionReport block_fraction_compare(const PathBatch& batch,
                                           const EquilibriumSolution& sol);

struct FigureSeries {
    std::string id;                            // "1A".."1D"
    std::vector<double> t;
    std::vector<std::vector<double>> columns;  // one per sigma_a scenario
};

struct FigureSet {
    std::vector<double> sigma_a;
    std::vector<FigureSeries> panels;  // 1A lambda, 1B f', 1C autocorr target, 1D remaining var
};

/// Figure panels for a list of sigma_a scenarios with the remaining
/// parameters from `base`.  1B and 1C stop at T - 1e-3*T.
FigureSet figure_series(const ModelParams& base, const std::vector<double>& sigma_a_list,
                        int n_grid);

}  // namespace kyleq
