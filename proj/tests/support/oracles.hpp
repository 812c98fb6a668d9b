#pragma once

// Independent reference implementations used only by tests. They re-evaluate
// quantities from their definitions, without the library's shortcuts.

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace oracle {

/// Gamma log-density written out term by term.
inline double gamma_logpdf(double x, double shape, double scale) {
    return (shape - 1.0) * std::log(x) - x / scale - shape * std::log(scale) - std::lgamma(shape);
}

/// MIC at split k: both scales re-estimated from their own segment by a direct
/// loop, likelihood summed sample by sample.
inline double mic(std::span<const double> x, std::size_t k, double shape, double lambda) {
    const std::size_t n = x.size();
    double s1 = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < k; ++i) s1 += x[i];
    for (std::size_t i = k; i < n; ++i) s2 += x[i];
    const double theta1 = s1 / static_cast<double>(k) / shape;
    const double theta2 = s2 / static_cast<double>(n - k) / shape;
    double ll = 0.0;
    for (std::size_t i = 0; i < n; ++i) ll += gamma_logpdf(x[i], shape, i < k ? theta1 : theta2);
    const double log_n = std::log(static_cast<double>(n));
    const double u = 2.0 * static_cast<double>(k) / static_cast<double>(n) - 1.0;
    return -2.0 * ll + 2.0 * log_n + lambda * u * u * log_n;
}

struct Argmin {
    std::size_t k = 0;
    std::vector<double> values;  ///< values[j] = MIC(first_k + j)
};

inline Argmin brute_force_cp(std::span<const double> x, double shape, double lambda, std::size_t margin) {
    Argmin out;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = margin; k <= x.size() - margin; ++k) {
        const double v = mic(x, k, shape, lambda);
        out.values.push_back(v);
        if (v < best) {
            best = v;
            out.k = k;
        }
    }
    return out;
}

/// Calinski-Harabasz for two clusters from the textbook definition.
inline double ch_two_clusters(std::span<const double> y, std::span<const int> states) {
    double sum[2] = {0, 0}, cnt[2] = {0, 0}, total = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        sum[states[i]] += y[i];
        cnt[states[i]] += 1;
        total += y[i];
    }
    const double grand = total / static_cast<double>(y.size());
    const double mean[2] = {sum[0] / cnt[0], sum[1] / cnt[1]};
    double ssb = 0, ssw = 0;
    for (int c = 0; c < 2; ++c) ssb += cnt[c] * (mean[c] - grand) * (mean[c] - grand);
    for (std::size_t i = 0; i < y.size(); ++i) ssw += (y[i] - mean[states[i]]) * (y[i] - mean[states[i]]);
    return ssb / ssw * static_cast<double>(y.size() - 2);
}

}  // namespace oracle
