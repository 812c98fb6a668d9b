#include "circacp/gamma.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>

#include "circacp/error.hpp"

namespace circacp {

namespace {

void require_positive(std::span<const double> x) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !std::isfinite(x[i]))
            throw InvalidInput("Gamma data must be positive and finite (index " + std::to_string(i) + ")");
    }
}

}  // namespace

GammaParams gamma_mle(std::span<const double> x) {
    if (x.size() < kGammaMinSamples)
        throw InvalidInput("gamma_mle needs at least " + std::to_string(kGammaMinSamples) + " samples, got " +
                           std::to_string(x.size()));
    require_positive(x);
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    if (*lo == *hi) throw Degenerate("all samples equal; Gamma shape is unbounded");

    const double n = static_cast<double>(x.size());
    double sum = 0.0, sum_log = 0.0;
    for (double v : x) {
        sum += v;
        sum_log += std::log(v);
    }
    const double mean = sum / n;
    const double s = std::log(mean) - sum_log / n;
    if (!(s > 1e-13)) throw Degenerate("sample dispersion too small; Gamma shape is unbounded");

    double shape = (3.0 - s + std::sqrt((s - 3.0) * (s - 3.0) + 24.0 * s)) / (12.0 * s);
    for (int iter = 0; iter < 100; ++iter) {
        const double f = std::log(shape) - boost::math::digamma(shape) - s;
        const double df = 1.0 / shape - boost::math::trigamma(shape);
        double next = shape - f / df;
        if (!(next > 0.0)) next = shape / 2.0;
        const double delta = std::abs(next - shape);
        shape = next;
        if (delta <= 1e-14 * shape) break;
    }
    return GammaParams{shape, mean / shape};
}

double gamma_loglik(std::span<const double> x, const GammaParams& p) {
    const double k = p.shape, theta = p.scale;
    const double norm = -k * std::log(theta) - std::lgamma(k);
    double acc = 0.0;
    for (double v : x) acc += (k - 1.0) * std::log(v) - v / theta + norm;
    return acc;
}

double mic(std::span<const double> x, std::size_t k, double shape, double lambda) {
    const std::size_t n = x.size();
    if (k < 1 || k >= n) throw InvalidInput("mic split must satisfy 1 <= k <= n-1");
    require_positive(x);

    double s1 = 0.0, s2 = 0.0, sum_log = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        (i < k ? s1 : s2) += x[i];
        sum_log += std::log(x[i]);
    }
    const double nd = static_cast<double>(n), kd = static_cast<double>(k);
    const double theta1 = s1 / (kd * shape);
    const double theta2 = s2 / ((nd - kd) * shape);
    // at the profile MLEs each exponential term contributes exactly -(side count) * shape
    const double loglik = (shape - 1.0) * sum_log - nd * std::lgamma(shape) - kd * shape * std::log(theta1) -
                          (nd - kd) * shape * std::log(theta2) - nd * shape;
    const double pos = 2.0 * kd / nd - 1.0;
    return -2.0 * loglik + 2.0 * std::log(nd) + lambda * pos * pos * std::log(nd);
}

CpSearchResult find_single_cp(std::span<const double> x, double lambda, std::size_t min_margin) {
    const std::size_t n = x.size();
    if (min_margin < 1) min_margin = 1;
    if (n < 2 * min_margin + 2)
        throw InvalidInput("change-point search needs at least " + std::to_string(2 * min_margin + 2) + " samples");
    const GammaParams fit = gamma_mle(x);  // validates positivity
    const double shape = fit.shape;

    std::vector<double> prefix(n + 1, 0.0), suffix(n + 1, 0.0);
    double sum_log = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        prefix[i + 1] = prefix[i] + x[i];
        sum_log += std::log(x[i]);
    }
    for (std::size_t i = n; i-- > 0;) suffix[i] = suffix[i + 1] + x[i];

    const double nd = static_cast<double>(n);
    const double log_n = std::log(nd);
    const double constant =
        -2.0 * (shape - 1.0) * sum_log + 2.0 * nd * std::lgamma(shape) + 2.0 * nd * shape + 2.0 * log_n;

    CpSearchResult out;
    out.shape = shape;
    out.first_k = min_margin;
    const std::size_t last_k = n - min_margin;
    out.mic_curve.reserve(last_k - min_margin + 1);
    for (std::size_t k = min_margin; k <= last_k; ++k) {
        const double kd = static_cast<double>(k);
        const double theta1 = prefix[k] / (kd * shape);
        const double theta2 = suffix[k] / ((nd - kd) * shape);
        const double pos = 2.0 * kd / nd - 1.0;
        const double value = 2.0 * kd * shape * std::log(theta1) + 2.0 * (nd - kd) * shape * std::log(theta2) +
                             constant + lambda * pos * pos * log_n;
        out.mic_curve.push_back(value);
        if (k == min_margin || value < out.mic_min) {
            out.mic_min = value;
            out.k_hat = k;
            out.theta1 = theta1;
            out.theta2 = theta2;
        }
    }
    return out;
}

}  // namespace circacp
