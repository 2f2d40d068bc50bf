#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

namespace formopt {

/// Small analytic multi-objective fixture with known Pareto structure.
struct ToyProblem {
    std::string name;
    Eigen::MatrixXd designs;     // one design per row
    Eigen::MatrixXd objectives;  // one objective row per design, minimization
};

/// f1 = t^2, f2 = (1-t)^2 over an n-point grid on [0,1]. Convex front,
/// minima at the interval endpoints.
inline ToyProblem toy_biobjective(int n) {
    if (n < 3) throw std::invalid_argument("toy_biobjective needs n >= 3");
    ToyProblem p;
    p.name = "biobjective_quadratic";
    p.designs.resize(n, 1);
    p.objectives.resize(n, 2);
    for (int i = 0; i < n; ++i) {
        double t = static_cast<double>(i) / (n - 1);
        p.designs(i, 0) = t;
        p.objectives(i, 0) = t * t;
        p.objectives(i, 1) = (1.0 - t) * (1.0 - t);
    }
    return p;
}

/// Three quadratic bowls with minima at the corners of a triangle in a
/// 2D box, sampled on an n-by-n grid.
inline ToyProblem toy_triobjective(int n) {
    if (n < 3) throw std::invalid_argument("toy_triobjective needs n >= 3");
    ToyProblem p;
    p.name = "triobjective_quadratic";
    const double cx[3] = {0.0, 1.0, 0.5};
    const double cy[3] = {0.0, 0.0, 1.0};
    p.designs.resize(n * n, 2);
    p.objectives.resize(n * n, 3);
    int row = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j, ++row) {
            double x = static_cast<double>(i) / (n - 1);
            double y = static_cast<double>(j) / (n - 1);
            p.designs(row, 0) = x;
            p.designs(row, 1) = y;
            for (int k = 0; k < 3; ++k)
                p.objectives(row, k) =
                    (x - cx[k]) * (x - cx[k]) + (y - cy[k]) * (y - cy[k]);
        }
    return p;
}

inline bool dominates(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    bool strict = false;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (a(i) > b(i)) return false;
        if (a(i) < b(i)) strict = true;
    }
    return strict;
}

/// Exhaustive dominance filter; returns row indices of the nondominated set.
inline std::vector<Eigen::Index> pareto_brute_force(const Eigen::MatrixXd& objectives) {
    std::vector<Eigen::Index> front;
    for (Eigen::Index i = 0; i < objectives.rows(); ++i) {
        bool dominated = false;
        for (Eigen::Index j = 0; j < objectives.rows() && !dominated; ++j)
            if (j != i && dominates(objectives.row(j), objectives.row(i)))
                dominated = true;
        if (!dominated) front.push_back(i);
    }
    return front;
}

}  // namespace formopt
