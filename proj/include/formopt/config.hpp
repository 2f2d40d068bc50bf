#pragma once

#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "formopt/oracle.hpp"
#include "formopt/utility.hpp"

namespace formopt {

/// Everything a campaign run needs, in one config.
struct CampaignConfig {
    double grid_step = 0.05;
    OracleConfig oracle;
    Weights weights;
    // Curve calibration knobs; grid-dependent anchors (cp_min/cp_max,
    // dt_min/dt_max) are recomputed from the grid extremes at setup.
    CurveParams curves;
    int n_init = 40;
    int n_iters = 40;
    int n_candidates = 500;
    double eps = 0.05;              // subproblem tolerance in scaled units
    double classifier_threshold = 0.5;
    int max_retries = 50;
    double qoi_margin = 0.10;       // relative widening of admissible QoI ranges
    std::uint64_t seed = 1;

    void validate() const {
        if (n_init < 1 || n_iters < 0 || n_candidates < 1 || max_retries < 1)
            throw std::invalid_argument("campaign counts must be >= 1 (iters >= 0)");
        if (!(eps > 0.0))
            throw std::invalid_argument("eps must be positive");
        if (!(classifier_threshold > 0.0 && classifier_threshold < 1.0))
            throw std::invalid_argument("classifier threshold must be in (0,1)");
        validate_oracle_config(oracle);
    }
};

namespace detail {

template <std::size_t N>
inline std::array<double, N> array_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != N)
        throw std::invalid_argument("expected a numeric array of length " + std::to_string(N));
    std::array<double, N> a{};
    for (std::size_t i = 0; i < N; ++i) a[i] = j[i].get<double>();
    return a;
}

inline PairTable pair_table_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != kNumElements)
        throw std::invalid_argument("expected a 5x5 matrix");
    PairTable t{};
    for (std::size_t i = 0; i < kNumElements; ++i)
        t[i] = array_from_json<kNumElements>(j[i]);
    return t;
}

inline nlohmann::json pair_table_to_json(const PairTable& t) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& row : t) j.push_back(row);
    return j;
}

}  // namespace detail

inline nlohmann::json oracle_config_to_json(const OracleConfig& cfg) {
    return {
        {"molar_mass", cfg.molar_mass},
        {"density", cfg.elem_density},
        {"cauchy", cfg.cauchy_coeff},
        {"strength", cfg.strength_coeff},
        {"strength_pair", detail::pair_table_to_json(cfg.strength_pair)},
        {"solidification_pair", detail::pair_table_to_json(cfg.solidification_pair)},
    };
}

inline OracleConfig oracle_config_from_json(const nlohmann::json& j) {
    OracleConfig cfg;
    if (j.contains("molar_mass")) cfg.molar_mass = detail::array_from_json<kNumElements>(j.at("molar_mass"));
    if (j.contains("density")) cfg.elem_density = detail::array_from_json<kNumElements>(j.at("density"));
    if (j.contains("cauchy")) cfg.cauchy_coeff = detail::array_from_json<kNumElements>(j.at("cauchy"));
    if (j.contains("strength")) cfg.strength_coeff = detail::array_from_json<kNumElements>(j.at("strength"));
    if (j.contains("strength_pair")) cfg.strength_pair = detail::pair_table_from_json(j.at("strength_pair"));
    if (j.contains("solidification_pair"))
        cfg.solidification_pair = detail::pair_table_from_json(j.at("solidification_pair"));
    validate_oracle_config(cfg);
    return cfg;
}

inline nlohmann::json campaign_config_to_json(const CampaignConfig& c) {
    return {
        {"grid_step", c.grid_step},
        {"oracle", oracle_config_to_json(c.oracle)},
        {"weights", {{"cp", c.weights.cp}, {"ys", c.weights.ys},
                     {"density", c.weights.density}, {"sr", c.weights.sr}}},
        {"curves", {{"cp_knee", c.curves.cp_knee},
                    {"cp_knee_utility", c.curves.cp_knee_utility},
                    {"cp_plateau_frac", c.curves.cp_plateau_frac},
                    {"ys_midpoint", c.curves.ys_midpoint},
                    {"ys_cal_point", c.curves.ys_cal_point},
                    {"ys_cal_utility", c.curves.ys_cal_utility},
                    {"rho_midpoint", c.curves.rho_midpoint},
                    {"rho_cal_point", c.curves.rho_cal_point},
                    {"rho_cal_utility", c.curves.rho_cal_utility}}},
        {"n_init", c.n_init},
        {"n_iters", c.n_iters},
        {"n_candidates", c.n_candidates},
        {"eps", c.eps},
        {"classifier_threshold", c.classifier_threshold},
        {"max_retries", c.max_retries},
        {"qoi_margin", c.qoi_margin},
        {"seed", c.seed},
    };
}

inline CampaignConfig campaign_config_from_json(const nlohmann::json& j) {
    CampaignConfig c;
    if (j.contains("grid_step")) c.grid_step = j.at("grid_step").get<double>();
    if (j.contains("oracle")) c.oracle = oracle_config_from_json(j.at("oracle"));
    if (j.contains("weights")) {
        const auto& w = j.at("weights");
        if (w.contains("cp")) c.weights.cp = w.at("cp").get<double>();
        if (w.contains("ys")) c.weights.ys = w.at("ys").get<double>();
        if (w.contains("density")) c.weights.density = w.at("density").get<double>();
        if (w.contains("sr")) c.weights.sr = w.at("sr").get<double>();
    }
    if (j.contains("curves")) {
        const auto& u = j.at("curves");
        auto get = [&](const char* key, double& into) {
            if (u.contains(key)) into = u.at(key).get<double>();
        };
        get("cp_knee", c.curves.cp_knee);
        get("cp_knee_utility", c.curves.cp_knee_utility);
        get("cp_plateau_frac", c.curves.cp_plateau_frac);
        get("ys_midpoint", c.curves.ys_midpoint);
        get("ys_cal_point", c.curves.ys_cal_point);
        get("ys_cal_utility", c.curves.ys_cal_utility);
        get("rho_midpoint", c.curves.rho_midpoint);
        get("rho_cal_point", c.curves.rho_cal_point);
        get("rho_cal_utility", c.curves.rho_cal_utility);
    }
    if (j.contains("n_init")) c.n_init = j.at("n_init").get<int>();
    if (j.contains("n_iters")) c.n_iters = j.at("n_iters").get<int>();
    if (j.contains("n_candidates")) c.n_candidates = j.at("n_candidates").get<int>();
    if (j.contains("eps")) c.eps = j.at("eps").get<double>();
    if (j.contains("classifier_threshold"))
        c.classifier_threshold = j.at("classifier_threshold").get<double>();
    if (j.contains("max_retries")) c.max_retries = j.at("max_retries").get<int>();
    if (j.contains("qoi_margin")) c.qoi_margin = j.at("qoi_margin").get<double>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    c.validate();
    return c;
}

inline CampaignConfig load_campaign_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config file: " + path);
    nlohmann::json j;
    in >> j;
    return campaign_config_from_json(j);
}

}  // namespace formopt
