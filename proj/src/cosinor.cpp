#include "circacp/cosinor.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "circacp/error.hpp"

namespace circacp {

namespace {

constexpr double kOmega = 2.0 * std::numbers::pi / kCircadianPeriod;

double rss_of(std::span<const double> y, const CosinorParams& p) {
    double acc = 0.0;
    for (std::size_t t = 0; t < y.size(); ++t) {
        const double r = y[t] - eval_cosinor(p, static_cast<double>(t));
        acc += r * r;
    }
    return acc;
}

}  // namespace

CosinorParams canonicalize(CosinorParams p) {
    if (p.amp < 0.0) {
        p.amp = -p.amp;
        p.phi += kCircadianPeriod / 2.0;
    }
    p.phi = std::fmod(p.phi, kCircadianPeriod);
    if (p.phi < 0.0) p.phi += kCircadianPeriod;
    if (p.phi >= kCircadianPeriod) p.phi = 0.0;
    return p;
}

double eval_cosinor(const CosinorParams& p, double t) {
    return p.mes + p.amp * std::cos(kOmega * (t - p.phi));
}

CosinorFit fit_cosinor(std::span<const double> y, const CosinorParams& init, const FitOptions& opts) {
    if (y.size() < opts.min_length)
        throw InvalidInput("cosinor fit needs at least " + std::to_string(opts.min_length) + " samples, got " +
                           std::to_string(y.size()));

    const std::size_t n = y.size();
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(n);
    double centred_ss = 0.0;
    for (double v : y) centred_ss += (v - mean) * (v - mean);
    // rss values below this are at the rounding floor and count as no change
    const double rss_floor = 1e-14 * (centred_ss + mean * mean * static_cast<double>(n)) + 1e-300;

    CosinorFit fit;
    Eigen::Vector3d p(init.mes, init.amp, init.phi);
    auto as_params = [](const Eigen::Vector3d& v) { return CosinorParams{v[0], v[1], v[2]}; };

    double rss = rss_of(y, init);
    fit.initial_rss = rss;
    double damping = 1e-3;

    for (fit.iterations = 0; fit.iterations < opts.max_iterations; ++fit.iterations) {
        Eigen::Matrix3d jtj = Eigen::Matrix3d::Zero();
        Eigen::Vector3d jtr = Eigen::Vector3d::Zero();
        for (std::size_t t = 0; t < n; ++t) {
            const double arg = kOmega * (static_cast<double>(t) - p[2]);
            const double c = std::cos(arg);
            const double s = std::sin(arg);
            const Eigen::Vector3d grad(1.0, c, p[1] * kOmega * s);
            const double r = y[t] - (p[0] + p[1] * c);
            jtj.noalias() += grad * grad.transpose();
            jtr += grad * r;
        }

        bool accepted = false;
        Eigen::Vector3d step;
        double new_rss = rss;
        while (damping < 1e16) {
            Eigen::Matrix3d a = jtj;
            for (int d = 0; d < 3; ++d) a(d, d) += damping * std::max(jtj(d, d), 1e-12);
            step = a.ldlt().solve(jtr);
            const Eigen::Vector3d trial = p + step;
            new_rss = rss_of(y, as_params(trial));
            if (std::isfinite(new_rss) && new_rss < rss) {
                accepted = true;
                damping = std::max(damping / 10.0, 1e-15);
                break;
            }
            damping *= 10.0;
        }
        if (!accepted) {
            // no descent direction left at machine precision: stationary point
            fit.converged = true;
            break;
        }
        p += step;
        const double rel_change = (rss - new_rss) / std::max(rss, rss_floor);
        const bool small_change = rel_change < opts.rel_rss_tol || new_rss <= rss_floor;
        rss = new_rss;
        if (small_change && step.lpNorm<Eigen::Infinity>() < opts.step_tol) {
            fit.converged = true;
            ++fit.iterations;
            break;
        }
    }

    fit.params = canonicalize(as_params(p));
    fit.fitted.resize(n);
    double lo = 0.0, hi = 0.0;
    fit.rss = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        const double f = eval_cosinor(fit.params, static_cast<double>(t));
        fit.fitted[t] = f;
        fit.rss += (y[t] - f) * (y[t] - f);
        lo = t ? std::min(lo, f) : f;
        hi = t ? std::max(hi, f) : f;
    }
    fit.identifiable = (hi - lo) >= 1e-9 * std::max(std::abs(mean), 1e-12) && fit.params.amp > 0.0;
    return fit;
}

CosinorFit fit_cosinor(const EpochSeries& s, const CosinorParams& init, const FitOptions& opts) {
    if (s.epoch_seconds != 60) throw InvalidInput("cosinor fit expects 60-second epochs");
    return fit_cosinor(std::span<const double>(s.counts), init, opts);
}

bool CycleBoundaries::is_wake_edge(std::size_t boundary) const {
    return std::binary_search(wake_edges.begin(), wake_edges.end(), boundary);
}

CycleBoundaries dichotomize(const CosinorFit& fit, double q) {
    if (fit.fitted.size() < 2) throw InvalidInput("dichotomize needs at least two fitted samples");
    if (!(q > 0.0 && q < 1.0)) throw InvalidInput("dichotomize quantile must lie in (0, 1)");
    const auto [lo_it, hi_it] = std::minmax_element(fit.fitted.begin(), fit.fitted.end());
    const double lo = *lo_it, hi = *hi_it;
    if (!fit.identifiable || !(hi > lo)) throw Degenerate("cosinor fit is flat; rhythm not identifiable");

    CycleBoundaries out;
    out.threshold = lo + q * (hi - lo);
    out.binary.resize(fit.fitted.size());
    for (std::size_t i = 0; i < fit.fitted.size(); ++i) out.binary[i] = fit.fitted[i] > out.threshold ? 1 : 0;
    for (std::size_t i = 1; i < out.binary.size(); ++i) {
        if (out.binary[i] != out.binary[i - 1]) {
            out.boundaries.push_back(i);
            if (out.binary[i] == 1) out.wake_edges.push_back(i);
        }
    }
    return out;
}

}  // namespace circacp
