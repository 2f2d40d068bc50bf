#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "formopt/nbi.hpp"

namespace formopt {

struct DegenerateDataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// L1 distance between problem formulations.
inline double beta_distance(const Beta& a, const Beta& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("beta dimension mismatch");
    return (a - b).lpNorm<1>();
}

/// Squared-exponential GP over formulation space, with the L1 distance
/// inside the kernel: k(a,b) = sv * exp(-d(a,b)^2 / l^2).
struct GpModel {
    std::vector<Beta> inputs;
    Eigen::VectorXd targets;
    double length_scale = 1.0;
    double signal_variance = 1.0;
    double jitter = 1e-6;
    double prior_mean = 0.0;
    bool constant = false;  // degenerate fit: posterior is prior_mean, variance 0

    // Cached Cholesky factor of K and alpha = K^-1 (y - prior_mean).
    Eigen::LLT<Eigen::MatrixXd> llt;
    Eigen::VectorXd alpha;

    double kernel(const Beta& a, const Beta& b) const {
        double d = beta_distance(a, b);
        return signal_variance * std::exp(-d * d / (length_scale * length_scale));
    }

    void factorize() {
        const auto n = static_cast<Eigen::Index>(inputs.size());
        Eigen::MatrixXd k(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j <= i; ++j)
                k(i, j) = k(j, i) = kernel(inputs[static_cast<std::size_t>(i)],
                                           inputs[static_cast<std::size_t>(j)]);
        k.diagonal().array() += jitter;
        llt.compute(k);
        if (llt.info() != Eigen::Success)
            throw DegenerateDataError("kernel matrix is not positive definite");
        Eigen::VectorXd centered = targets.array() - prior_mean;
        alpha = llt.solve(centered);
    }
};

struct GpFitOptions {
    bool center_targets = true;  // subtract the target mean as the prior mean
    int grid_size = 25;
    double l_lo_factor = 1e-2;   // length-scale grid bounds, relative to the
    double l_hi_factor = 1e1;    // median pairwise distance
    double jitter_rel = 1e-6;
};

namespace detail {
inline double median_pairwise_distance(const std::vector<Beta>& inputs) {
    std::vector<double> d;
    for (std::size_t i = 0; i < inputs.size(); ++i)
        for (std::size_t j = i + 1; j < inputs.size(); ++j)
            d.push_back(beta_distance(inputs[i], inputs[j]));
    std::sort(d.begin(), d.end());
    double med = d[d.size() / 2];
    if (med > 0.0) return med;
    // Mostly-coincident inputs: fall back to the mean positive distance.
    double sum = 0.0;
    std::size_t cnt = 0;
    for (double v : d)
        if (v > 0.0) {
            sum += v;
            ++cnt;
        }
    if (cnt == 0)
        throw DegenerateDataError("all training inputs coincide");
    return sum / static_cast<double>(cnt);
}
}  // namespace detail

/// Fits length scale by exhaustive log-spaced grid search on the marginal
/// likelihood, with the signal variance profiled out in closed form.
inline GpModel fit_gp(const std::vector<Beta>& inputs, const Eigen::VectorXd& targets,
                      const GpFitOptions& opts = {}) {
    const auto n = static_cast<Eigen::Index>(inputs.size());
    if (n < 2 || targets.size() != n)
        throw std::invalid_argument("fit_gp needs >= 2 (input, target) pairs");

    GpModel model;
    model.inputs = inputs;
    model.targets = targets;
    model.prior_mean = opts.center_targets ? targets.mean() : 0.0;

    Eigen::VectorXd y = targets.array() - model.prior_mean;
    double y_scale = y.cwiseAbs().maxCoeff();
    if (y_scale < 1e-12) {
        // All targets equal (after centering): constant posterior.
        model.constant = true;
        model.signal_variance = 0.0;
        model.jitter = 0.0;
        return model;
    }

    double med = detail::median_pairwise_distance(inputs);
    Eigen::MatrixXd dist2(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j <= i; ++j) {
            double d = beta_distance(inputs[static_cast<std::size_t>(i)],
                                     inputs[static_cast<std::size_t>(j)]);
            dist2(i, j) = dist2(j, i) = d * d;
        }

    double best_ll = -std::numeric_limits<double>::infinity();
    double best_l = med, best_sv = 1.0;
    const double log_lo = std::log(opts.l_lo_factor * med);
    const double log_hi = std::log(opts.l_hi_factor * med);
    for (int g = 0; g < opts.grid_size; ++g) {
        double t = opts.grid_size == 1 ? 0.5
                                       : static_cast<double>(g) / (opts.grid_size - 1);
        double l = std::exp(log_lo + t * (log_hi - log_lo));
        Eigen::MatrixXd corr = (-dist2.array() / (l * l)).exp();
        corr.diagonal().array() += opts.jitter_rel;
        Eigen::LLT<Eigen::MatrixXd> llt(corr);
        if (llt.info() != Eigen::Success) continue;
        double quad = y.dot(llt.solve(y));
        if (!(quad > 0.0)) continue;
        double sv = quad / static_cast<double>(n);
        double log_det = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
        double ll = -0.5 * (static_cast<double>(n) * std::log(sv) + log_det +
                            static_cast<double>(n));
        if (ll > best_ll) {
            best_ll = ll;
            best_l = l;
            best_sv = sv;
        }
    }
    if (!std::isfinite(best_ll))
        throw DegenerateDataError("no usable length scale on the search grid");

    model.length_scale = best_l;
    model.signal_variance = best_sv;
    model.jitter = opts.jitter_rel * best_sv;
    model.factorize();
    return model;
}

/// Posterior mean and variance at a query formulation.
inline std::pair<double, double> gp_posterior(const GpModel& m, const Beta& p) {
    if (m.constant) return {m.prior_mean, 0.0};
    const auto n = static_cast<Eigen::Index>(m.inputs.size());
    Eigen::VectorXd k_star(n);
    for (Eigen::Index i = 0; i < n; ++i)
        k_star(i) = m.kernel(p, m.inputs[static_cast<std::size_t>(i)]);
    double mean = m.prior_mean + k_star.dot(m.alpha);
    Eigen::VectorXd v = m.llt.solve(k_star);
    double var = m.signal_variance - k_star.dot(v);
    var = std::clamp(var, 0.0, m.signal_variance + m.jitter);
    return {mean, var};
}

namespace detail {
inline double std_normal_pdf(double z) {
    constexpr double inv_sqrt_2pi = 0.3989422804014326779;
    return inv_sqrt_2pi * std::exp(-0.5 * z * z);
}
inline double std_normal_cdf(double z) {
    return 0.5 * std::erfc(-z / std::sqrt(2.0));
}
}  // namespace detail

/// Closed-form expected improvement for maximization.
inline double expected_improvement(double mean, double variance, double best) {
    if (variance < 0.0)
        throw std::invalid_argument("variance must be nonnegative");
    double sigma = std::sqrt(variance);
    if (sigma == 0.0) return std::max(mean - best, 0.0);
    double z = (mean - best) / sigma;
    double ei = (mean - best) * detail::std_normal_cdf(z) + sigma * detail::std_normal_pdf(z);
    return std::max(ei, 0.0);
}

/// GP regression on feasible/infeasible labels, thresholded into a
/// pass/fail filter. Optimistic (probability 1) until both classes
/// have been observed.
struct FeasibilityModel {
    std::vector<Beta> inputs;
    std::vector<int> labels;  // 1 feasible, 0 infeasible
    double threshold = 0.5;
    GpModel gp;
    bool fitted = false;

    std::size_t count(int label) const {
        std::size_t c = 0;
        for (int l : labels)
            if (l == label) ++c;
        return c;
    }

    void add(const Beta& b, int label) {
        inputs.push_back(b);
        labels.push_back(label);
        refit();
    }

    void refit() {
        fitted = false;
        if (count(0) == 0 || count(1) == 0) return;
        Eigen::VectorXd y(static_cast<Eigen::Index>(labels.size()));
        for (Eigen::Index i = 0; i < y.size(); ++i)
            y(i) = labels[static_cast<std::size_t>(i)];
        GpFitOptions opts;
        opts.center_targets = false;
        gp = fit_gp(inputs, y, opts);
        fitted = true;
    }
};

/// Posterior feasibility probability, clamped to [0,1].
inline double classify_feasible(const FeasibilityModel& fm, const Beta& p) {
    if (!fm.fitted) return 1.0;
    auto [mean, var] = gp_posterior(fm.gp, p);
    (void)var;
    return std::clamp(mean, 0.0, 1.0);
}

/// Per-objective admissible intervals for predicted intersection values.
struct QoiRangeFilter {
    Eigen::VectorXd low;
    Eigen::VectorXd high;

    /// Widens [lo, hi] by margin * width on each side.
    static QoiRangeFilter from_observed(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                                        double margin) {
        QoiRangeFilter f;
        Eigen::VectorXd width = hi - lo;
        f.low = lo - margin * width;
        f.high = hi + margin * width;
        return f;
    }
};

/// Pass iff every per-objective posterior mean lies inside its interval.
inline bool gpq_range_check(const std::vector<GpModel>& gpq, const Beta& p,
                            const QoiRangeFilter& filter) {
    for (std::size_t j = 0; j < gpq.size(); ++j) {
        auto [mean, var] = gp_posterior(gpq[j], p);
        (void)var;
        if (mean < filter.low(static_cast<Eigen::Index>(j)) ||
            mean > filter.high(static_cast<Eigen::Index>(j)))
            return false;
    }
    return true;
}

}  // namespace formopt
