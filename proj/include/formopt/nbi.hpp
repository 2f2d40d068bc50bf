#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

namespace formopt {

/// Thrown when the individual minima do not span a usable hull
/// (duplicate minimizers, singular projection system).
struct DegenerateGeometryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Problem-formulation coordinates: hull coefficients with unit sum.
/// Components may be negative; the space is the affine hull, not the
/// unit hypercube.
using Beta = Eigen::VectorXd;

inline bool is_valid_beta(const Beta& b, double tol = 1e-9) {
    return std::abs(b.sum() - 1.0) <= tol;
}

/// Hull geometry in (scaled) internal objective space: utopia point,
/// column matrix of shifted individual minima, quasi-normal direction.
struct Chim {
    Eigen::VectorXd utopia;            // K
    Eigen::MatrixXd phi;               // K x K, zero diagonal
    Eigen::VectorXd n_hat;             // unit norm, nonpositive components
    std::vector<Eigen::Index> minimizer_indices;

    Eigen::Index num_objectives() const { return utopia.size(); }
};

/// Solution of one boundary-intersection subproblem over a finite grid.
struct SubproblemSolution {
    Eigen::Index index = -1;           // grid index of the solving design
    double c = 0.0;                    // travel along n_hat
    Eigen::VectorXd q_shifted;         // objectives minus utopia
};

/// Per-objective argmin over the rows of the objective matrix,
/// ties broken by lowest row index.
inline std::pair<Eigen::VectorXd, std::vector<Eigen::Index>> find_individual_minima(
    const Eigen::MatrixXd& objectives) {
    if (objectives.rows() == 0)
        throw std::invalid_argument("empty objective matrix");
    const Eigen::Index k = objectives.cols();
    Eigen::VectorXd utopia(k);
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(k));
    for (Eigen::Index j = 0; j < k; ++j) {
        Eigen::Index best = 0;
        for (Eigen::Index i = 1; i < objectives.rows(); ++i)
            if (objectives(i, j) < objectives(best, j)) best = i;
        idx[static_cast<std::size_t>(j)] = best;
        utopia(j) = objectives(best, j);
    }
    return {utopia, idx};
}

/// Builds the hull from the individual minima. Column i of phi is the
/// shifted objective vector of minimizer i; n_hat = -phi*1 / ||phi*1||.
inline Chim build_chim(const Eigen::MatrixXd& objectives, const Eigen::VectorXd& utopia,
                       const std::vector<Eigen::Index>& minimizer_indices) {
    const Eigen::Index k = utopia.size();
    Chim chim;
    chim.utopia = utopia;
    chim.minimizer_indices = minimizer_indices;
    chim.phi.resize(k, k);
    for (Eigen::Index j = 0; j < k; ++j)
        chim.phi.col(j) =
            objectives.row(minimizer_indices[static_cast<std::size_t>(j)]).transpose() - utopia;

    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = i + 1; j < k; ++j)
            if (minimizer_indices[static_cast<std::size_t>(i)] ==
                minimizer_indices[static_cast<std::size_t>(j)])
                throw DegenerateGeometryError("two objectives share a minimizer");
    Eigen::FullPivLU<Eigen::MatrixXd> lu(chim.phi);
    lu.setThreshold(1e-10);
    if (lu.rank() < k)
        throw DegenerateGeometryError("individual minima do not span the hull");

    Eigen::VectorXd col_sum = chim.phi * Eigen::VectorXd::Ones(k);
    double norm = col_sum.norm();
    if (!(norm > 0.0))
        throw DegenerateGeometryError("zero quasi-normal vector");
    chim.n_hat = -col_sum / norm;
    return chim;
}

/// Convenience: minima + hull in one step.
inline Chim build_chim(const Eigen::MatrixXd& objectives) {
    auto [utopia, idx] = find_individual_minima(objectives);
    return build_chim(objectives, utopia, idx);
}

/// Solves phi*beta + c*n_hat = q - utopia with sum(beta) = 1; the unique
/// projection of an objective vector onto formulation coordinates.
inline std::pair<Beta, double> project_to_chim(const Chim& chim,
                                               const Eigen::VectorXd& q_internal) {
    const Eigen::Index k = chim.num_objectives();
    Eigen::MatrixXd a(k + 1, k + 1);
    a.setZero();
    a.topLeftCorner(k, k) = chim.phi;
    a.topRightCorner(k, 1) = chim.n_hat;
    a.bottomLeftCorner(1, k).setOnes();
    Eigen::VectorXd rhs(k + 1);
    rhs.head(k) = q_internal - chim.utopia;
    rhs(k) = 1.0;

    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    lu.setThreshold(1e-12);
    if (!lu.isInvertible())
        throw DegenerateGeometryError("singular projection system");
    Eigen::VectorXd sol = lu.solve(rhs);
    return {sol.head(k), sol(k)};
}

/// Euclidean distance from q_shifted to the line {phi*beta + c*n_hat}.
inline double line_distance(const Chim& chim, const Beta& beta,
                            const Eigen::VectorXd& q_shifted) {
    Eigen::VectorXd r = q_shifted - chim.phi * beta;
    // Perpendicular-component form avoids cancellation when r is nearly
    // parallel to n_hat.
    Eigen::VectorXd perp = r - r.dot(chim.n_hat) * chim.n_hat;
    return perp.norm();
}

/// Scans the rows of the objective matrix for the admissible point
/// (line distance <= eps) with maximal travel c; nullopt when no row is
/// admissible. Ties broken by lowest row index.
inline std::optional<SubproblemSolution> solve_subproblem(const Chim& chim, const Beta& beta,
                                                          const Eigen::MatrixXd& objectives,
                                                          double eps) {
    if (!(eps > 0.0))
        throw std::invalid_argument("subproblem tolerance must be positive");
    const Eigen::VectorXd anchor = chim.phi * beta;
    Eigen::Index best = -1;
    double best_c = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < objectives.rows(); ++i) {
        Eigen::VectorXd r = objectives.row(i).transpose() - chim.utopia - anchor;
        double along = r.dot(chim.n_hat);
        double d2 = r.squaredNorm() - along * along;
        if (d2 <= eps * eps && along > best_c) {
            best = i;
            best_c = along;
        }
    }
    if (best < 0) return std::nullopt;
    SubproblemSolution sol;
    sol.index = best;
    sol.c = best_c;
    sol.q_shifted = objectives.row(best).transpose() - chim.utopia;
    return sol;
}

/// Per-column affine rescale of internal objectives to [0,1] over the grid,
/// so tolerances and distances are unit-balanced.
struct ObjectiveScaling {
    Eigen::VectorXd low;    // per-objective grid minimum
    Eigen::VectorXd range;  // per-objective grid range, floored at tiny

    static ObjectiveScaling from_matrix(const Eigen::MatrixXd& objectives) {
        ObjectiveScaling s;
        s.low = objectives.colwise().minCoeff();
        s.range = objectives.colwise().maxCoeff().transpose() - s.low;
        for (Eigen::Index j = 0; j < s.range.size(); ++j)
            if (s.range(j) < 1e-12) s.range(j) = 1.0;
        return s;
    }

    Eigen::MatrixXd apply(const Eigen::MatrixXd& objectives) const {
        return (objectives.rowwise() - low.transpose()).array().rowwise() /
               range.transpose().array();
    }

    Eigen::VectorXd apply_row(const Eigen::VectorXd& q) const {
        return (q - low).cwiseQuotient(range);
    }
};

}  // namespace formopt
