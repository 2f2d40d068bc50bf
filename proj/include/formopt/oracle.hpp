#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>

#include "formopt/composition.hpp"

namespace formopt {

inline constexpr std::size_t kNumQoi = 4;

/// QoI index convention, fixed project-wide.
enum QoiIndex : std::size_t {
    kQoiCauchy = 0,      // GPa, maximize
    kQoiYield = 1,       // MPa, maximize
    kQoiDensity = 2,     // g/cc, minimize
    kQoiSolidRange = 3,  // K, minimize
};

struct QoiSpec {
    const char* name;
    const char* units;
    bool maximize;
};

inline constexpr std::array<QoiSpec, kNumQoi> kQoiSpecs = {{
    {"cauchy_pressure", "GPa", true},
    {"yield_strength", "MPa", true},
    {"density", "g/cc", false},
    {"solidification_range", "K", false},
}};

/// K=4 QoI values in internal minimization convention
/// (maximize-sense entries negated).
using QoiVector = std::array<double, kNumQoi>;

using PairTable = std::array<std::array<double, kNumElements>, kNumElements>;

/// Coefficient tables for the closed-form property surrogates.
struct OracleConfig {
    std::array<double, kNumElements> molar_mass = {95.95, 92.906, 47.867, 50.942, 183.84};
    std::array<double, kNumElements> elem_density = {10.22, 8.57, 4.506, 6.11, 19.25};
    std::array<double, kNumElements> cauchy_coeff = {57.0, 104.0, 85.0, 76.0, 44.0};
    std::array<double, kNumElements> strength_coeff = {180.0, 80.0, 110.0, 130.0, 240.0};
    // Symmetric, zero diagonal. MPa.
    PairTable strength_pair = {{
        {0, 100, 120, 150, 100},
        {100, 0, 70, 110, 130},
        {120, 70, 0, 90, 140},
        {150, 110, 90, 0, 120},
        {100, 130, 140, 120, 0},
    }};
    // Symmetric, zero diagonal. K.
    PairTable solidification_pair = {{
        {0, 120, 350, 260, 90},
        {120, 0, 280, 200, 240},
        {350, 280, 0, 160, 420},
        {260, 200, 160, 0, 310},
        {90, 240, 420, 310, 0},
    }};
};

inline void validate_pair_table(const PairTable& t, const std::string& name) {
    for (std::size_t i = 0; i < kNumElements; ++i) {
        if (t[i][i] != 0.0)
            throw std::invalid_argument(name + ": diagonal must be zero");
        for (std::size_t j = 0; j < kNumElements; ++j)
            if (t[i][j] != t[j][i])
                throw std::invalid_argument(name + ": table must be symmetric");
    }
}

inline void validate_oracle_config(const OracleConfig& cfg) {
    validate_pair_table(cfg.strength_pair, "strength_pair");
    validate_pair_table(cfg.solidification_pair, "solidification_pair");
    for (std::size_t i = 0; i < kNumElements; ++i) {
        if (!(cfg.molar_mass[i] > 0.0) || !(cfg.elem_density[i] > 0.0))
            throw std::invalid_argument("molar masses and densities must be positive");
    }
}

/// Molar-volume rule of mixtures.
inline double eval_density(const Composition& c, const OracleConfig& cfg) {
    double mass = 0.0, volume = 0.0;
    for (std::size_t i = 0; i < kNumElements; ++i) {
        mass += c[i] * cfg.molar_mass[i];
        volume += c[i] * cfg.molar_mass[i] / cfg.elem_density[i];
    }
    return mass / volume;
}

/// Linear mixture of elemental Cauchy-pressure coefficients.
inline double eval_cauchy(const Composition& c, const OracleConfig& cfg) {
    double cp = 0.0;
    for (std::size_t i = 0; i < kNumElements; ++i) cp += c[i] * cfg.cauchy_coeff[i];
    return cp;
}

/// Linear mixture plus pairwise solution-strengthening term.
inline double eval_yield(const Composition& c, const OracleConfig& cfg) {
    double ys = 0.0;
    for (std::size_t i = 0; i < kNumElements; ++i) ys += c[i] * cfg.strength_coeff[i];
    for (std::size_t i = 0; i < kNumElements; ++i)
        for (std::size_t j = i + 1; j < kNumElements; ++j)
            ys += c[i] * c[j] * cfg.strength_pair[i][j];
    return ys;
}

/// Pairwise interaction surrogate; zero for pure elements.
inline double eval_solid_range(const Composition& c, const OracleConfig& cfg) {
    double dt = 0.0;
    for (std::size_t i = 0; i < kNumElements; ++i)
        for (std::size_t j = i + 1; j < kNumElements; ++j)
            dt += c[i] * c[j] * cfg.solidification_pair[i][j];
    return dt;
}

/// External-convention QoIs (physical signs).
inline QoiVector eval_external(const Composition& c, const OracleConfig& cfg) {
    return {eval_cauchy(c, cfg), eval_yield(c, cfg), eval_density(c, cfg),
            eval_solid_range(c, cfg)};
}

inline QoiVector internal_from_external(const QoiVector& ext) {
    QoiVector q = ext;
    for (std::size_t i = 0; i < kNumQoi; ++i)
        if (kQoiSpecs[i].maximize) q[i] = -q[i];
    return q;
}

inline QoiVector external_from_internal(const QoiVector& q) {
    // Negation is an involution, so the same map inverts itself.
    return internal_from_external(q);
}

/// Internal minimization convention: (-CP, -sigma_y, rho, dT).
inline QoiVector eval_all(const Composition& c, const OracleConfig& cfg) {
    return internal_from_external(eval_external(c, cfg));
}

}  // namespace formopt
