#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "formopt/gp.hpp"
#include "formopt/nbi.hpp"

namespace formopt {

/// Reduced coordinates: drop the last component; it is reconstructed
/// from the unit-sum constraint.
inline Eigen::VectorXd beta_to_reduced(const Beta& b) {
    return b.head(b.size() - 1);
}

inline Beta beta_from_reduced(const Eigen::VectorXd& r) {
    Beta b(r.size() + 1);
    b.head(r.size()) = r;
    b(r.size()) = 1.0 - r.sum();
    return b;
}

/// Isotropic Gaussian KDE over the reduced formulation coordinates.
struct KdeModel {
    std::vector<Eigen::VectorXd> support;  // reduced coordinates
    double bandwidth = 0.0;

    Eigen::Index dim() const { return support.empty() ? 0 : support.front().size(); }
};

/// Scott's rule with a floor: h = n^{-1/(d+4)} * mean per-dimension
/// sample standard deviation.
inline KdeModel fit_kde(const std::vector<Beta>& betas, double bandwidth_floor = 1e-3) {
    if (betas.size() < 2)
        throw DegenerateDataError("fit_kde needs at least 2 support points");
    KdeModel kde;
    kde.support.reserve(betas.size());
    for (const Beta& b : betas) kde.support.push_back(beta_to_reduced(b));

    const auto n = static_cast<double>(kde.support.size());
    const Eigen::Index d = kde.dim();
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
    for (const auto& p : kde.support) mean += p;
    mean /= n;
    Eigen::VectorXd var = Eigen::VectorXd::Zero(d);
    for (const auto& p : kde.support) var += (p - mean).cwiseAbs2();
    var /= (n - 1.0);

    double sigma_bar = var.cwiseSqrt().mean();
    double h = std::pow(n, -1.0 / (static_cast<double>(d) + 4.0)) * sigma_bar;
    kde.bandwidth = std::max(h, bandwidth_floor);
    return kde;
}

/// Draws candidates: uniform support point plus h * standard-normal
/// perturbation per reduced dimension, reconstructed to unit sum.
inline std::vector<Beta> sample_candidates(const KdeModel& kde, std::size_t n,
                                           std::mt19937_64& rng) {
    if (kde.support.empty() || n == 0)
        throw std::invalid_argument("sample_candidates needs a fitted model and n >= 1");
    std::uniform_int_distribution<std::size_t> pick(0, kde.support.size() - 1);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<Beta> out;
    out.reserve(n);
    for (std::size_t s = 0; s < n; ++s) {
        Eigen::VectorXd r = kde.support[pick(rng)];
        for (Eigen::Index i = 0; i < r.size(); ++i) r(i) += kde.bandwidth * noise(rng);
        out.push_back(beta_from_reduced(r));
    }
    return out;
}

/// Mixture density in reduced coordinates.
inline double kde_density(const KdeModel& kde, const Beta& p) {
    if (kde.support.empty())
        throw std::invalid_argument("kde_density needs a fitted model");
    const Eigen::VectorXd r = beta_to_reduced(p);
    const double h2 = kde.bandwidth * kde.bandwidth;
    const auto d = static_cast<double>(kde.dim());
    const double norm =
        std::pow(2.0 * 3.14159265358979323846 * h2, -0.5 * d);
    double sum = 0.0;
    for (const auto& s : kde.support)
        sum += std::exp(-0.5 * (r - s).squaredNorm() / h2);
    return norm * sum / static_cast<double>(kde.support.size());
}

}  // namespace formopt
