#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "formopt/nbi.hpp"
#include "formopt/toy.hpp"

using namespace formopt;

namespace {

Chim toy_chim(int n = 101) {
    return build_chim(toy_biobjective(n).objectives);
}

Beta make_beta(std::initializer_list<double> v) {
    Beta b(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) b(i++) = x;
    return b;
}

}  // namespace

TEST_CASE("individual minima on the biobjective toy") {
    ToyProblem p = toy_biobjective(101);
    auto [utopia, idx] = find_individual_minima(p.objectives);
    CHECK(utopia(0) == 0.0);
    CHECK(utopia(1) == 0.0);
    CHECK(p.designs(idx[0], 0) == 0.0);
    CHECK(p.designs(idx[1], 0) == 1.0);
}

TEST_CASE("single-row matrix minimizes every objective") {
    Eigen::MatrixXd m(1, 3);
    m << 4.0, -1.0, 2.5;
    auto [utopia, idx] = find_individual_minima(m);
    CHECK(idx == std::vector<Eigen::Index>{0, 0, 0});
    CHECK(utopia(1) == -1.0);
}

TEST_CASE("toy hull geometry") {
    Chim chim = toy_chim();
    CHECK(chim.phi(0, 0) == doctest::Approx(0.0));
    CHECK(chim.phi(1, 0) == doctest::Approx(1.0));
    CHECK(chim.phi(0, 1) == doctest::Approx(1.0));
    CHECK(chim.phi(1, 1) == doctest::Approx(0.0));
    CHECK(chim.n_hat(0) == doctest::Approx(-1.0 / std::sqrt(2.0)));
    CHECK(chim.n_hat(1) == doctest::Approx(-1.0 / std::sqrt(2.0)));
}

TEST_CASE("hand-built 2D hull") {
    // Shifted minima (0,4) and (3,0).
    Eigen::MatrixXd m(2, 2);
    m << 0.0, 4.0, 3.0, 0.0;
    Chim chim = build_chim(m);
    CHECK(chim.phi(0, 0) == 0.0);
    CHECK(chim.phi(1, 0) == 4.0);
    CHECK(chim.phi(0, 1) == 3.0);
    CHECK(chim.phi(1, 1) == 0.0);
    CHECK(chim.n_hat(0) == doctest::Approx(-0.6));
    CHECK(chim.n_hat(1) == doctest::Approx(-0.8));
    // Zero diagonal by construction.
    CHECK(chim.phi(0, 0) == 0.0);
    CHECK(chim.phi(1, 1) == 0.0);
}

TEST_CASE("duplicate minimizers are degenerate") {
    Eigen::MatrixXd m(3, 2);
    m << 0.0, 0.0, 1.0, 2.0, 2.0, 1.0;  // row 0 minimizes both objectives
    CHECK_THROWS_AS(build_chim(m), DegenerateGeometryError);
}

TEST_CASE("projection round trips synthesized points") {
    Chim chim = toy_chim();
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> unif(-2.0, 3.0);
    for (int rep = 0; rep < 1000; ++rep) {
        double b0 = unif(rng);
        Beta beta = make_beta({b0, 1.0 - b0});
        double c = unif(rng);
        Eigen::VectorXd q = chim.utopia + chim.phi * beta + c * chim.n_hat;
        auto [beta2, c2] = project_to_chim(chim, q);
        CHECK((beta2 - beta).lpNorm<1>() < 1e-9);
        CHECK(c2 == doctest::Approx(c).epsilon(1e-9));
    }
}

TEST_CASE("hull vertex projects to a unit coefficient") {
    Chim chim = toy_chim();
    Eigen::VectorXd q = chim.utopia + chim.phi.col(0);
    auto [beta, c] = project_to_chim(chim, q);
    CHECK(beta(0) == doctest::Approx(1.0));
    CHECK(beta(1) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(c == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("projection residual vanishes in 4 objectives") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> unif(0.0, 5.0);
    // Random nondegenerate 4-objective minima: one near-zero entry per column.
    Eigen::MatrixXd m(4, 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) m(i, j) = (i == j) ? 0.0 : 1.0 + unif(rng);
    Chim chim = build_chim(m);
    for (int rep = 0; rep < 100; ++rep) {
        Eigen::VectorXd q(4);
        for (int i = 0; i < 4; ++i) q(i) = unif(rng);
        auto [beta, c] = project_to_chim(chim, q);
        CHECK(std::abs(beta.sum() - 1.0) < 1e-9);
        Eigen::VectorXd rebuilt = chim.phi * beta + c * chim.n_hat;
        CHECK((rebuilt - (q - chim.utopia)).norm() < 1e-9);
    }
}

TEST_CASE("line distance basics") {
    Chim chim = toy_chim();
    Beta beta = make_beta({1.0, 0.0});
    // On the line.
    Eigen::VectorXd on_line = chim.phi * beta + 0.7 * chim.n_hat;
    CHECK(line_distance(chim, beta, on_line) == doctest::Approx(0.0).epsilon(1e-12));
    // Unit offset orthogonal to n_hat.
    Eigen::VectorXd perp(2);
    perp << -chim.n_hat(1), chim.n_hat(0);
    CHECK(line_distance(chim, beta, chim.phi * beta + perp) == doctest::Approx(1.0));
    // Invariance under translation along n_hat.
    Eigen::VectorXd q = chim.phi * beta + perp;
    for (double t : {-3.0, 0.5, 10.0})
        CHECK(line_distance(chim, beta, q + t * chim.n_hat) ==
              doctest::Approx(line_distance(chim, beta, q)).epsilon(1e-9));
}

TEST_CASE("subproblem with infinite tolerance returns max-c point") {
    ToyProblem p = toy_biobjective(51);
    Chim chim = build_chim(p.objectives);
    Beta beta = make_beta({0.5, 0.5});
    auto sol = solve_subproblem(chim, beta, p.objectives, 1e9);
    REQUIRE(sol.has_value());
    // Exhaustive oracle over the grid.
    Eigen::Index best = -1;
    double best_c = -1e300;
    for (Eigen::Index i = 0; i < p.objectives.rows(); ++i) {
        Eigen::VectorXd r = p.objectives.row(i).transpose() - chim.utopia - chim.phi * beta;
        double c = r.dot(chim.n_hat);
        if (c > best_c) {
            best_c = c;
            best = i;
        }
    }
    CHECK(sol->index == best);
}

TEST_CASE("symmetric subproblem lands near the middle of the front") {
    ToyProblem p = toy_biobjective(101);
    Chim chim = build_chim(p.objectives);
    auto sol = solve_subproblem(chim, make_beta({0.5, 0.5}), p.objectives, 0.05);
    REQUIRE(sol.has_value());
    CHECK(p.designs(sol->index, 0) == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("tight tolerance far outside the hull is infeasible") {
    ToyProblem p = toy_biobjective(101);
    Chim chim = build_chim(p.objectives);
    auto sol = solve_subproblem(chim, make_beta({30.0, -29.0}), p.objectives, 1e-3);
    CHECK(!sol.has_value());
    // Exhaustive confirmation: no grid point lies within tolerance.
    Beta beta = make_beta({30.0, -29.0});
    for (Eigen::Index i = 0; i < p.objectives.rows(); ++i)
        CHECK(line_distance(chim, beta, p.objectives.row(i).transpose() - chim.utopia) > 1e-3);
}

TEST_CASE("c-maximality among admissible points") {
    ToyProblem p = toy_biobjective(41);
    Chim chim = build_chim(p.objectives);
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> unif(-0.5, 1.5);
    for (int rep = 0; rep < 50; ++rep) {
        double b0 = unif(rng);
        Beta beta = make_beta({b0, 1.0 - b0});
        auto sol = solve_subproblem(chim, beta, p.objectives, 0.1);
        if (!sol) continue;
        for (Eigen::Index i = 0; i < p.objectives.rows(); ++i) {
            Eigen::VectorXd qs = p.objectives.row(i).transpose() - chim.utopia;
            if (line_distance(chim, beta, qs) <= 0.1)
                CHECK((qs - chim.phi * beta).dot(chim.n_hat) <= sol->c + 1e-12);
        }
    }
}

TEST_CASE("solved subproblems recover their beta on reprojection") {
    ToyProblem p = toy_biobjective(101);
    Chim chim = build_chim(p.objectives);
    for (int i = 0; i <= 20; ++i) {
        double b0 = static_cast<double>(i) / 20.0;
        Beta beta = make_beta({b0, 1.0 - b0});
        auto sol = solve_subproblem(chim, beta, p.objectives, 0.05);
        if (!sol) continue;
        auto [beta2, c2] = project_to_chim(chim, chim.utopia + sol->q_shifted);
        // The solution sits within eps of the line, so the recovered beta
        // can differ by at most an eps-order amount.
        CHECK((beta2 - beta).lpNorm<1>() < 0.2);
    }
}

TEST_CASE("utopia touching after the shift") {
    ToyProblem p = toy_biobjective(101);
    Chim chim = build_chim(p.objectives);
    Eigen::MatrixXd shifted = p.objectives.rowwise() - chim.utopia.transpose();
    for (Eigen::Index j = 0; j < shifted.cols(); ++j)
        CHECK(shifted.col(j).minCoeff() == doctest::Approx(0.0));
}

TEST_CASE("beta sweep solutions are nondominated on the toy problems") {
    for (int problem = 0; problem < 2; ++problem) {
        ToyProblem p = problem == 0 ? toy_biobjective(101) : toy_triobjective(21);
        Chim chim = build_chim(p.objectives);
        auto front = pareto_brute_force(p.objectives);
        std::vector<bool> in_front(static_cast<std::size_t>(p.objectives.rows()), false);
        for (Eigen::Index i : front) in_front[static_cast<std::size_t>(i)] = true;

        const Eigen::Index k = p.objectives.cols();
        for (int i = 0; i <= 20; ++i) {
            double b0 = static_cast<double>(i) / 20.0;
            Beta beta(k);
            if (k == 2)
                beta << b0, 1.0 - b0;
            else
                beta << b0, (1.0 - b0) / 2.0, (1.0 - b0) / 2.0;
            auto sol = solve_subproblem(chim, beta, p.objectives, 0.05);
            if (!sol) continue;
            CHECK(in_front[static_cast<std::size_t>(sol->index)]);
        }
    }
}

TEST_CASE("objective scaling maps grid columns onto [0,1]") {
    ToyProblem p = toy_biobjective(51);
    auto scaling = ObjectiveScaling::from_matrix(p.objectives);
    Eigen::MatrixXd scaled = scaling.apply(p.objectives);
    for (Eigen::Index j = 0; j < scaled.cols(); ++j) {
        CHECK(scaled.col(j).minCoeff() == doctest::Approx(0.0));
        CHECK(scaled.col(j).maxCoeff() == doctest::Approx(1.0));
    }
    Eigen::VectorXd row = scaling.apply_row(p.objectives.row(7).transpose());
    CHECK((row - scaled.row(7).transpose()).norm() < 1e-12);
}
