#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <thread>
#include <vector>

#include "formopt/composition.hpp"
#include "formopt/config.hpp"
#include "formopt/gp.hpp"
#include "formopt/kde.hpp"
#include "formopt/nbi.hpp"
#include "formopt/oracle.hpp"
#include "formopt/utility.hpp"

namespace formopt {

/// Precomputed campaign environment: grid, ground-truth QoIs, scaled
/// objective space, hull geometry, and grid-anchored utility curves.
struct AlloyProblem {
    DesignGrid grid;
    OracleConfig oracle;
    Weights weights;
    CurveParams curves;
    Eigen::MatrixXd q_internal;  // N x K, raw internal convention
    ObjectiveScaling scaling;
    Eigen::MatrixXd q_scaled;    // N x K, per-column [0,1]
    Chim chim;

    static AlloyProblem build(const CampaignConfig& cfg) {
        AlloyProblem p;
        p.grid = generate_grid(cfg.grid_step);
        p.oracle = cfg.oracle;
        p.weights = cfg.weights;
        p.curves = cfg.curves;

        const auto n = static_cast<Eigen::Index>(p.grid.size());
        p.q_internal.resize(n, static_cast<Eigen::Index>(kNumQoi));
        for (Eigen::Index i = 0; i < n; ++i) {
            QoiVector q = eval_all(p.grid.points[static_cast<std::size_t>(i)], p.oracle);
            for (std::size_t j = 0; j < kNumQoi; ++j)
                p.q_internal(i, static_cast<Eigen::Index>(j)) = q[j];
        }

        // Curve domain anchors from the grid extremes (external units).
        p.curves.cp_min = -p.q_internal.col(kQoiCauchy).maxCoeff();
        p.curves.cp_max = -p.q_internal.col(kQoiCauchy).minCoeff();
        p.curves.dt_min = p.q_internal.col(kQoiSolidRange).minCoeff();
        p.curves.dt_max = p.q_internal.col(kQoiSolidRange).maxCoeff();
        validate_curve_params(p.curves);

        p.scaling = ObjectiveScaling::from_matrix(p.q_internal);
        p.q_scaled = p.scaling.apply(p.q_internal);
        p.chim = build_chim(p.q_scaled);
        return p;
    }

    double utility_at(Eigen::Index grid_index) const {
        QoiVector q_int;
        for (std::size_t j = 0; j < kNumQoi; ++j)
            q_int[j] = q_internal(grid_index, static_cast<Eigen::Index>(j));
        return aggregate_utility(external_from_internal(q_int), weights, curves);
    }
};

struct SolvedFormulation {
    Beta beta;
    Eigen::Index grid_index;
    double c;
    double utility;
};

struct IterationRecord {
    int iter = 0;
    Beta beta;                      // empty for the initialization record
    double ei = 0.0;
    int failed_attempts = 0;
    std::optional<double> utility;  // empty when retries were exhausted
    double best = 0.0;
    double wall_ms = 0.0;
};

struct KdeSnapshot {
    int iter = 0;
    KdeModel model;
};

struct CampaignState {
    CampaignConfig cfg;
    AlloyProblem problem;
    std::vector<SolvedFormulation> solved;
    FeasibilityModel classifier;
    GpModel gp_u;
    std::vector<GpModel> gp_q;
    KdeModel kde;
    QoiRangeFilter range_filter;
    double best_utility = 0.0;
    Eigen::Index best_index = -1;
    Beta best_beta;
    int iteration = 0;
    std::mt19937_64 rng;

    void refit_models() {
        std::vector<Beta> betas;
        Eigen::VectorXd utils(static_cast<Eigen::Index>(solved.size()));
        Eigen::MatrixXd targets(static_cast<Eigen::Index>(solved.size()),
                                static_cast<Eigen::Index>(kNumQoi));
        for (std::size_t i = 0; i < solved.size(); ++i) {
            betas.push_back(solved[i].beta);
            utils(static_cast<Eigen::Index>(i)) = solved[i].utility;
            targets.row(static_cast<Eigen::Index>(i)) =
                problem.q_scaled.row(solved[i].grid_index);
        }
        gp_u = fit_gp(betas, utils);

        GpFitOptions qopts;
        qopts.center_targets = false;
        gp_q.clear();
        for (std::size_t j = 0; j < kNumQoi; ++j)
            gp_q.push_back(fit_gp(betas, targets.col(static_cast<Eigen::Index>(j)), qopts));

        kde = fit_kde(betas);
    }
};

struct RunLog {
    CampaignConfig cfg;
    Chim chim;
    std::vector<IterationRecord> records;  // index 0 is the init record
    std::vector<KdeSnapshot> kde_snapshots;
    double best_utility = 0.0;
    Composition best_composition;
    Beta best_beta;
    std::size_t solved_count = 0;
    std::size_t classifier_labels = 0;
    int total_failed = 0;
};

/// Builds the grid and hull, seeds the solved set with random grid
/// designs, and fits the initial surrogates.
inline CampaignState initialize(const CampaignConfig& cfg) {
    cfg.validate();
    CampaignState st;
    st.cfg = cfg;
    st.problem = AlloyProblem::build(cfg);
    st.rng.seed(cfg.seed);

    // Shifted admissible ranges per objective: scaled grid spans [0,1].
    const auto k = static_cast<Eigen::Index>(kNumQoi);
    st.range_filter = QoiRangeFilter::from_observed(Eigen::VectorXd::Zero(k),
                                                    Eigen::VectorXd::Ones(k), cfg.qoi_margin);
    st.classifier.threshold = cfg.classifier_threshold;

    // Initial designs: distinct grid indices, uniform without replacement.
    const auto n_grid = st.problem.grid.size();
    std::vector<Eigen::Index> indices;
    {
        std::uniform_int_distribution<std::size_t> pick(0, n_grid - 1);
        std::vector<bool> used(n_grid, false);
        while (indices.size() < static_cast<std::size_t>(cfg.n_init)) {
            std::size_t i = pick(st.rng);
            if (used[i]) continue;
            used[i] = true;
            indices.push_back(static_cast<Eigen::Index>(i));
        }
    }

    st.best_utility = -std::numeric_limits<double>::infinity();
    for (Eigen::Index idx : indices) {
        auto [beta, c] = project_to_chim(st.problem.chim,
                                         st.problem.q_scaled.row(idx).transpose());
        SolvedFormulation s{beta, idx, c, st.problem.utility_at(idx)};
        st.solved.push_back(s);
        st.classifier.add(beta, 1);
        if (s.utility > st.best_utility) {
            st.best_utility = s.utility;
            st.best_index = idx;
            st.best_beta = s.beta;
        }
    }
    st.refit_models();
    return st;
}

/// One pass of the design loop: sample candidates, filter, rank by EI,
/// solve, feed failures back to the classifier.
inline IterationRecord run_iteration(CampaignState& st) {
    auto t0 = std::chrono::steady_clock::now();
    IterationRecord rec;
    rec.iter = ++st.iteration;
    rec.best = st.best_utility;

    auto admissible = [&](const Beta& b) {
        return classify_feasible(st.classifier, b) >= st.classifier.threshold &&
               gpq_range_check(st.gp_q, b, st.range_filter);
    };

    struct Candidate {
        Beta beta;
        double ei;
    };
    std::vector<Candidate> pool;
    auto refill = [&] {
        auto sampled = sample_candidates(st.kde, static_cast<std::size_t>(st.cfg.n_candidates),
                                         st.rng);
        std::vector<Beta> kept;
        for (const Beta& b : sampled)
            if (admissible(b)) kept.push_back(b);
        // If the filters reject everything, fall back to the raw batch so
        // the iteration can still propose a formulation.
        if (kept.empty()) kept = std::move(sampled);
        pool.clear();
        for (const Beta& b : kept) {
            auto [mean, var] = gp_posterior(st.gp_u, b);
            pool.push_back({b, expected_improvement(mean, var, st.best_utility)});
        }
    };
    refill();

    while (rec.failed_attempts < st.cfg.max_retries) {
        if (pool.empty()) refill();
        std::size_t top = 0;
        for (std::size_t i = 1; i < pool.size(); ++i)
            if (pool[i].ei > pool[top].ei) top = i;
        Beta beta = pool[top].beta;
        double ei = pool[top].ei;
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(top));

        auto sol = solve_subproblem(st.problem.chim, beta, st.problem.q_scaled, st.cfg.eps);
        if (!sol) {
            st.classifier.add(beta, 0);
            ++rec.failed_attempts;
            // Re-screen the survivors against the updated classifier.
            std::erase_if(pool, [&](const Candidate& c) { return !admissible(c.beta); });
            continue;
        }

        double utility = st.problem.utility_at(sol->index);
        st.classifier.add(beta, 1);
        st.solved.push_back({beta, sol->index, sol->c, utility});
        if (utility > st.best_utility) {
            st.best_utility = utility;
            st.best_index = sol->index;
            st.best_beta = beta;
        }
        st.refit_models();
        rec.beta = beta;
        rec.ei = ei;
        rec.utility = utility;
        break;
    }
    rec.best = st.best_utility;
    rec.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    return rec;
}

inline RunLog run_campaign(const CampaignConfig& cfg) {
    CampaignState st = initialize(cfg);
    RunLog log;
    log.cfg = cfg;
    log.chim = st.problem.chim;

    IterationRecord init_rec;
    init_rec.iter = 0;
    init_rec.best = st.best_utility;
    log.records.push_back(init_rec);
    log.kde_snapshots.push_back({0, st.kde});

    for (int it = 0; it < cfg.n_iters; ++it) {
        IterationRecord rec = run_iteration(st);
        log.total_failed += rec.failed_attempts;
        log.records.push_back(std::move(rec));
    }
    log.kde_snapshots.push_back({st.iteration, st.kde});

    log.best_utility = st.best_utility;
    log.best_composition = st.problem.grid.points[static_cast<std::size_t>(st.best_index)];
    log.best_beta = st.best_beta;
    log.solved_count = st.solved.size();
    log.classifier_labels = st.classifier.labels.size();
    return log;
}

/// Per-iteration aggregates over replications.
struct ReplicationSummary {
    std::vector<double> mean_best;
    std::vector<double> min_best;
    std::vector<double> max_best;
    std::vector<double> mean_failed;
};

inline ReplicationSummary summarize(const std::vector<RunLog>& logs) {
    ReplicationSummary s;
    if (logs.empty()) return s;
    const std::size_t rows = logs.front().records.size();
    s.mean_best.assign(rows, 0.0);
    s.min_best.assign(rows, std::numeric_limits<double>::infinity());
    s.max_best.assign(rows, -std::numeric_limits<double>::infinity());
    s.mean_failed.assign(rows, 0.0);
    for (const RunLog& log : logs)
        for (std::size_t r = 0; r < rows; ++r) {
            double b = log.records[r].best;
            s.mean_best[r] += b;
            s.min_best[r] = std::min(s.min_best[r], b);
            s.max_best[r] = std::max(s.max_best[r], b);
            s.mean_failed[r] += log.records[r].failed_attempts;
        }
    for (std::size_t r = 0; r < rows; ++r) {
        s.mean_best[r] /= static_cast<double>(logs.size());
        s.mean_failed[r] /= static_cast<double>(logs.size());
    }
    return s;
}

/// Runs n_reps campaigns with seeds base_seed + rep, optionally in
/// parallel; results are always reduced in rep order.
inline std::vector<RunLog> replicate(const CampaignConfig& cfg, int n_reps,
                                     std::uint64_t base_seed, unsigned max_threads = 0) {
    if (n_reps < 1) throw std::invalid_argument("n_reps must be >= 1");
    std::vector<RunLog> logs(static_cast<std::size_t>(n_reps));
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    unsigned threads = max_threads == 0 ? hw : std::min(hw, max_threads);
    threads = std::min<unsigned>(threads, static_cast<unsigned>(n_reps));

    std::atomic<int> next{0};
    auto worker = [&] {
        for (;;) {
            int rep = next.fetch_add(1);
            if (rep >= n_reps) return;
            CampaignConfig c = cfg;
            c.seed = base_seed + static_cast<std::uint64_t>(rep);
            logs[static_cast<std::size_t>(rep)] = run_campaign(c);
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return logs;
}

struct BruteForceResult {
    double max_utility = 0.0;
    Eigen::Index argmax = -1;
    std::vector<double> utilities;  // one per grid point
};

/// Full-factorial utility sweep; the exact ground truth the campaign is
/// measured against.
inline BruteForceResult brute_force_max_utility(const AlloyProblem& problem) {
    BruteForceResult r;
    const auto n = static_cast<Eigen::Index>(problem.grid.size());
    r.utilities.resize(static_cast<std::size_t>(n));
    r.max_utility = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
        double u = problem.utility_at(i);
        r.utilities[static_cast<std::size_t>(i)] = u;
        if (u > r.max_utility) {
            r.max_utility = u;
            r.argmax = i;
        }
    }
    return r;
}

}  // namespace formopt
