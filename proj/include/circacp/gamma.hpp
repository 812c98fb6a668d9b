#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace circacp {

struct GammaParams {
    double shape = 1.0;  ///< xi, dimensionless
    double scale = 1.0;  ///< theta, count units
};

/// Smallest sample accepted by gamma_mle.
inline constexpr std::size_t kGammaMinSamples = 20;

/// Joint maximum-likelihood estimate of shape and scale.
///
/// Solves log(xi) - digamma(xi) = log(mean x) - mean(log x) by Newton iteration
/// started from Minka's closed-form approximation, then sets theta = mean / xi.
/// Throws InvalidInput for short or non-positive input and Degenerate when all
/// values are equal (the shape estimate diverges).
GammaParams gamma_mle(std::span<const double> x);

/// Sum of Gamma log-densities of x under p.
double gamma_loglik(std::span<const double> x, const GammaParams& p);

/// Default location penalty weight.
inline constexpr double kDefaultMicLambda = 50.0;

/// Modified information criterion for a single scale change after the first k
/// samples, with the shape fixed at `shape` and both scales at their profile MLEs:
///
///   -2 log L1(theta1, theta2) + 2 log n + lambda (2k/n - 1)^2 log n
///
/// Returns the full value including the k-independent terms. Requires 1 <= k <= n-1.
double mic(std::span<const double> x, std::size_t k, double shape, double lambda = kDefaultMicLambda);

struct CpSearchResult {
    /// Size of the first segment: x[0, k_hat) | x[k_hat, n).
    std::size_t k_hat = 0;
    /// k of mic_curve[0]; mic_curve[j] is MIC(first_k + j).
    std::size_t first_k = 0;
    std::vector<double> mic_curve;
    double mic_min = 0.0;
    double shape = 0.0;
    double theta1 = 0.0;
    double theta2 = 0.0;
};

/// Single change-point search by MIC minimisation in one pass over prefix sums.
/// The shape is estimated once on all of x and shared by both sides. k ranges over
/// [min_margin, n - min_margin]; ties go to the smaller k.
CpSearchResult find_single_cp(std::span<const double> x, double lambda = kDefaultMicLambda,
                              std::size_t min_margin = 1);

}  // namespace circacp
