#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "circacp/ingest.hpp"

namespace circacp {

/// Period of the circadian rhythm in minutes.
inline constexpr double kCircadianPeriod = 1440.0;

/// r(t) = mes + amp * cos(2*pi*(t - phi) / T), t in minutes from the start of the fitted series.
struct CosinorParams {
    double mes = 500.0;  ///< midline, count units
    double amp = 550.0;  ///< amplitude, count units
    double phi = 227.0;  ///< acrophase, minutes
};

/// amp >= 0 and phi in [0, T). A negative amplitude is folded into the phase.
CosinorParams canonicalize(CosinorParams p);

double eval_cosinor(const CosinorParams& p, double t);

struct FitOptions {
    double rel_rss_tol = 1e-9;
    double step_tol = 1e-7;
    int max_iterations = 200;
    std::size_t min_length = 2880;
};

struct CosinorFit {
    CosinorParams params;
    std::vector<double> fitted;
    double rss = 0.0;
    double initial_rss = 0.0;
    bool converged = false;
    int iterations = 0;
    /// False when the fitted curve is flat relative to the data level; such a fit
    /// has no usable phase and must not be dichotomized.
    bool identifiable = true;
};

/// Least-squares cosinor fit by Levenberg-Marquardt from `init`.
/// Throws InvalidInput when y is shorter than opts.min_length.
CosinorFit fit_cosinor(std::span<const double> y, const CosinorParams& init = {}, const FitOptions& opts = {});
/// Same, for a 60-second series.
CosinorFit fit_cosinor(const EpochSeries& s, const CosinorParams& init = {}, const FitOptions& opts = {});

struct CycleBoundaries {
    double threshold = 0.0;
    std::vector<int> binary;  ///< 1 = diurnal
    /// Index of the first sample of each new state.
    std::vector<std::size_t> boundaries;
    /// Boundaries where the state switches 0 -> 1 (night to day).
    std::vector<std::size_t> wake_edges;

    bool is_wake_edge(std::size_t boundary) const;
};

/// Thresholds the fitted curve at min + q * range; samples above it are diurnal.
/// Throws Degenerate for a flat or non-identifiable fit.
CycleBoundaries dichotomize(const CosinorFit& fit, double q = 0.18);

}  // namespace circacp
