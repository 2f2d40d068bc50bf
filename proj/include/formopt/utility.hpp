#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "formopt/oracle.hpp"

namespace formopt {

/// Relative importance of the four QoI utilities.
struct Weights {
    double cp = 1.5;
    double ys = 1.3;
    double density = 1.0;
    double sr = 1.0;

    double total() const { return cp + ys + density + sr; }
};

/// Parameters of the four single-QoI utility curves. Domain anchors
/// (cp_min/cp_max, dt_min/dt_max) come from the design-grid extremes.
struct CurveParams {
    double cp_min = 44.0;
    double cp_max = 104.0;
    double cp_knee = 70.0;
    double cp_knee_utility = 0.8;
    // Fraction of the exponential segment's own asymptote reached at the knee.
    double cp_plateau_frac = 0.95;

    double ys_midpoint = 150.0;
    double ys_cal_point = 200.0;
    double ys_cal_utility = 0.99;

    double rho_midpoint = 9.0;
    double rho_cal_point = 8.0;
    double rho_cal_utility = 0.99;

    double dt_min = 0.0;
    double dt_max = 105.0;
};

inline void validate_curve_params(const CurveParams& p) {
    if (!(p.cp_min < p.cp_knee && p.cp_knee < p.cp_max))
        throw std::invalid_argument("require cp_min < cp_knee < cp_max");
    if (!(p.cp_knee_utility > 0.0 && p.cp_knee_utility < 1.0))
        throw std::invalid_argument("cp_knee_utility must be in (0,1)");
    if (!(p.dt_min < p.dt_max))
        throw std::invalid_argument("require dt_min < dt_max");
    if (!(p.ys_cal_utility > 0.5 && p.ys_cal_utility < 1.0) ||
        !(p.rho_cal_utility > 0.5 && p.rho_cal_utility < 1.0))
        throw std::invalid_argument("calibration utilities must be in (0.5,1)");
    if (!(p.ys_cal_point > p.ys_midpoint))
        throw std::invalid_argument("ys calibration point must exceed the midpoint");
    if (!(p.rho_cal_point < p.rho_midpoint))
        throw std::invalid_argument("rho calibration point must lie below the midpoint");
}

namespace detail {
inline double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }
inline double logit(double u) { return std::log(u / (1.0 - u)); }
}  // namespace detail

/// Exponential rise to a knee, then a linear continuation reaching 1 at
/// cp_max. Monotone nondecreasing; clamped outside [cp_min, cp_max].
inline double u_cp(double cp, const CurveParams& p) {
    cp = std::clamp(cp, p.cp_min, p.cp_max);
    double kappa = -std::log(1.0 - p.cp_plateau_frac) / (p.cp_knee - p.cp_min);
    double amp = p.cp_knee_utility / p.cp_plateau_frac;
    if (cp <= p.cp_knee)
        return amp * (1.0 - std::exp(-kappa * (cp - p.cp_min)));
    double slope = (1.0 - p.cp_knee_utility) / (p.cp_max - p.cp_knee);
    return p.cp_knee_utility + slope * (cp - p.cp_knee);
}

/// Logistic activation: 0.5 at the midpoint, ys_cal_utility at the
/// calibration point, plateauing above it.
inline double u_ys(double ys, const CurveParams& p) {
    double scale = (p.ys_cal_point - p.ys_midpoint) / detail::logit(p.ys_cal_utility);
    return detail::logistic((ys - p.ys_midpoint) / scale);
}

/// Logistic deactivation: 0.5 at the midpoint, rho_cal_utility at the
/// low calibration point.
inline double u_density(double rho, const CurveParams& p) {
    double scale = (p.rho_midpoint - p.rho_cal_point) / detail::logit(p.rho_cal_utility);
    return 1.0 - detail::logistic((rho - p.rho_midpoint) / scale);
}

/// Linearly decreasing from 1 at dt_min to 0 at dt_max; clamped outside.
inline double u_sr(double dt, const CurveParams& p) {
    dt = std::clamp(dt, p.dt_min, p.dt_max);
    return (p.dt_max - dt) / (p.dt_max - p.dt_min);
}

/// Weighted sum of the four curve utilities over external-convention QoIs.
inline double aggregate_utility(const QoiVector& q_external, const Weights& w,
                                const CurveParams& p) {
    return w.cp * u_cp(q_external[kQoiCauchy], p) +
           w.ys * u_ys(q_external[kQoiYield], p) +
           w.density * u_density(q_external[kQoiDensity], p) +
           w.sr * u_sr(q_external[kQoiSolidRange], p);
}

}  // namespace formopt
