// Acceptance suite: end-to-end checks of the library and CLI at the
// shipped default configuration. Prints one PASS/FAIL line per
// criterion; exits nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "formopt/formopt.hpp"

namespace fs = std::filesystem;
using namespace formopt;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& what) {
    std::printf("%s criterion %2d: %s\n", pass ? "PASS" : "FAIL", criterion, what.c_str());
    if (!pass) ++g_failures;
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

#ifndef FORMOPT_CLI_PATH
#define FORMOPT_CLI_PATH "./formopt"
#endif

int run_cli(const std::string& args) {
    std::string cmd = std::string(FORMOPT_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    return std::system(cmd.c_str());
}

// 1. Grid cardinality through the CLI, under 5 seconds.
void criterion_grid(const fs::path& tmp) {
    auto t0 = Clock::now();
    fs::path csv = tmp / "space.csv";
    int rc = run_cli("gen-space --step 0.05 --out " + csv.string());
    double secs = seconds_since(t0);
    std::size_t rows = 0;
    std::ifstream in(csv);
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    bool pass = rc == 0 && rows == 10627 && secs < 5.0;  // header + 10626 data rows
    report(1, pass,
           "gen-space --step 0.05 yields 10626 compositions in < 5 s (rows=" +
               std::to_string(rows ? rows - 1 : 0) + ", " + std::to_string(secs) + " s)");
}

// 2. Utility calibration and monotonicity.
void criterion_utility() {
    CurveParams p;
    Weights w;
    bool pass = u_density(9.0, p) == 0.5;
    pass = pass && std::abs(u_ys(200.0, p) - 0.99) < 1e-9;
    pass = pass && std::abs(w.total() - 4.8) < 1e-12;
    const int n = 1000;
    double prev_cp = -1, prev_ys = -1, prev_rho = 2, prev_sr = 2;
    for (int i = 0; i < n && pass; ++i) {
        double t = double(i) / (n - 1);
        double vcp = u_cp(p.cp_min - 20 + t * 200, p);
        double vys = u_ys(-200 + t * 800, p);
        double vrho = u_density(t * 25, p);
        double vsr = u_sr(p.dt_min - 20 + t * 200, p);
        pass = vcp >= prev_cp && vys >= prev_ys && vrho <= prev_rho && vsr <= prev_sr;
        prev_cp = vcp;
        prev_ys = vys;
        prev_rho = vrho;
        prev_sr = vsr;
    }
    report(2, pass, "u_density(9)=0.5, u_ys(200)=0.99, max aggregate 4.8, monotone sweeps");
}

// 3. NBI geometry on the biobjective toy.
void criterion_nbi() {
    auto t0 = Clock::now();
    ToyProblem toy = toy_biobjective(101);
    Chim chim = build_chim(toy.objectives);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    bool pass = std::abs(chim.phi(0, 0)) < 1e-12 && std::abs(chim.phi(1, 1)) < 1e-12 &&
                std::abs(chim.phi(1, 0) - 1.0) < 1e-12 &&
                std::abs(chim.phi(0, 1) - 1.0) < 1e-12 &&
                std::abs(chim.n_hat(0) + inv_sqrt2) < 1e-12 &&
                std::abs(chim.n_hat(1) + inv_sqrt2) < 1e-12;
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> unif(-2.0, 3.0);
    for (int i = 0; i < 1000 && pass; ++i) {
        Beta beta(2);
        beta(0) = unif(rng);
        beta(1) = 1.0 - beta(0);
        double c = unif(rng);
        Eigen::VectorXd q = chim.utopia + chim.phi * beta + c * chim.n_hat;
        auto [b2, c2] = project_to_chim(chim, q);
        pass = (b2 - beta).lpNorm<1>() < 1e-9 && std::abs(c2 - c) < 1e-9;
    }
    double secs = seconds_since(t0);
    pass = pass && secs < 1.0;
    report(3, pass, "toy hull geometry exact; 1000 projection round trips < 1e-9 in < 1 s");
}

// 4. Non-domination of subproblem solutions over a 21-value sweep.
void criterion_nondomination() {
    int violations = 0;
    for (int which = 0; which < 2; ++which) {
        ToyProblem p = which == 0 ? toy_biobjective(101) : toy_triobjective(21);
        Chim chim = build_chim(p.objectives);
        auto front = pareto_brute_force(p.objectives);
        std::vector<bool> in_front(static_cast<std::size_t>(p.objectives.rows()), false);
        for (Eigen::Index i : front) in_front[static_cast<std::size_t>(i)] = true;
        const Eigen::Index k = p.objectives.cols();
        for (int i = 0; i <= 20; ++i) {
            double b0 = double(i) / 20.0;
            Beta beta(k);
            if (k == 2)
                beta << b0, 1.0 - b0;
            else
                beta << b0, (1.0 - b0) / 2.0, (1.0 - b0) / 2.0;
            auto sol = solve_subproblem(chim, beta, p.objectives, 0.05);
            if (sol && !in_front[static_cast<std::size_t>(sol->index)]) ++violations;
        }
    }
    report(4, violations == 0,
           "beta-sweep subproblem solutions all Pareto (violations=" +
               std::to_string(violations) + ")");
}

// 5. GP correctness: interpolation, prior reversion, EI vs Monte Carlo.
void criterion_gp() {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<Beta> x;
    for (int i = 0; i < 25; ++i) {
        Eigen::VectorXd r(3);
        for (int j = 0; j < 3; ++j) r(j) = noise(rng);
        x.push_back(beta_from_reduced(r));
    }
    Eigen::VectorXd y(25);
    for (int i = 0; i < 25; ++i) y(i) = std::sin(0.8 * i) + 0.1 * i;
    GpModel m = fit_gp(x, y);
    bool pass = true;
    for (std::size_t i = 0; i < x.size() && pass; ++i) {
        auto [mean, var] = gp_posterior(m, x[i]);
        pass = std::abs(mean - y(static_cast<Eigen::Index>(i))) < 1e-4 && var >= 0.0;
    }
    Beta far = x[0];
    far(0) += 200.0 * m.length_scale;
    far(3) -= 200.0 * m.length_scale;  // keep the unit sum
    auto [fmean, fvar] = gp_posterior(m, far);
    pass = pass && std::abs(fmean - m.prior_mean) < 1e-6 &&
           std::abs(fvar - m.signal_variance) < 1e-6 * m.signal_variance;

    std::uniform_real_distribution<double> um(-2.0, 2.0), us(0.1, 2.0);
    for (int trial = 0; trial < 20 && pass; ++trial) {
        double mean = um(rng), sigma = us(rng), best = um(rng);
        std::normal_distribution<double> v(mean, sigma);
        const int ns = 1000000;
        double sum = 0.0, sum2 = 0.0;
        for (int i = 0; i < ns; ++i) {
            double imp = std::max(v(rng) - best, 0.0);
            sum += imp;
            sum2 += imp * imp;
        }
        double mc = sum / ns;
        double se = std::sqrt((sum2 / ns - mc * mc) / ns);
        pass = std::abs(expected_improvement(mean, sigma * sigma, best) - mc) <= 3.0 * se + 1e-9;
    }
    report(5, pass, "GP interpolation 1e-4, prior reversion, EI matches Monte Carlo");
}

struct CampaignBundle {
    std::vector<RunLog> logs;
    double brute_max = 0.0;
    double secs = 0.0;
};

CampaignBundle run_default_replications() {
    CampaignConfig cfg;  // shipped defaults: 40 init, 40 iters, 500 candidates
    auto t0 = Clock::now();
    CampaignBundle b;
    b.logs = replicate(cfg, 30, cfg.seed);
    b.secs = seconds_since(t0);
    AlloyProblem problem = AlloyProblem::build(cfg);
    b.brute_max = brute_force_max_utility(problem).max_utility;
    return b;
}

// 6. Campaign convergence at the default configuration.
void criterion_convergence(const CampaignBundle& b) {
    int reached = 0;
    for (const RunLog& log : b.logs)
        if (log.best_utility >= 0.95 * b.brute_max) ++reached;
    ReplicationSummary s = summarize(b.logs);
    bool monotone = true;
    for (std::size_t i = 1; i < s.mean_best.size(); ++i)
        if (s.mean_best[i] < s.mean_best[i - 1] - 1e-12) monotone = false;
    bool pass = reached >= 24 && monotone && b.secs < 600.0;
    std::ostringstream msg;
    msg << "30 reps: " << reached << "/30 reach 95% of brute-force max, mean trace monotone, "
        << b.secs << " s";
    report(6, pass, msg.str());
}

// 7. Failure learning: later iterations fail no more than early ones.
void criterion_failure_trend(const CampaignBundle& b) {
    double early = 0.0, late = 0.0;
    for (const RunLog& log : b.logs) {
        for (int i = 1; i <= 10; ++i) early += log.records[static_cast<std::size_t>(i)].failed_attempts;
        for (int i = 31; i <= 40; ++i) late += log.records[static_cast<std::size_t>(i)].failed_attempts;
    }
    early /= 300.0;
    late /= 300.0;
    std::ostringstream msg;
    msg << "mean failed attempts iters 31-40 (" << late << ") <= iters 1-10 (" << early << ")";
    report(7, late <= early, msg.str());
}

// 8. KDE evolution: density mass moves toward the best formulation.
void criterion_kde_evolution(const CampaignBundle& b) {
    int improved = 0;
    for (const RunLog& log : b.logs) {
        const KdeModel& initial = log.kde_snapshots.front().model;
        const KdeModel& final_model = log.kde_snapshots.back().model;
        if (kde_density(final_model, log.best_beta) > kde_density(initial, log.best_beta))
            ++improved;
    }
    bool pass = improved >= 24;
    report(8, pass,
           "final KDE density at best beta exceeds initial in " + std::to_string(improved) +
               "/30 replications");
}

// 9. Determinism of the campaign CLI.
void criterion_determinism(const fs::path& tmp) {
    fs::path cfg_path = tmp / "cfg.json";
    {
        CampaignConfig cfg;
        cfg.grid_step = 0.1;  // 1001 points keeps this quick
        cfg.n_init = 15;
        cfg.n_iters = 5;
        cfg.n_candidates = 200;
        std::ofstream out(cfg_path);
        out << campaign_config_to_json(cfg).dump(2) << "\n";
    }
    fs::path out_a = tmp / "run_a", out_b = tmp / "run_b";
    int rc1 = run_cli("campaign --config " + cfg_path.string() + " --seed 9 --out " +
                      out_a.string());
    int rc2 = run_cli("campaign --config " + cfg_path.string() + " --seed 9 --out " +
                      out_b.string());
    std::string a = read_file(out_a / "run.jsonl");
    std::string b = read_file(out_b / "run.jsonl");
    bool pass = rc1 == 0 && rc2 == 0 && !a.empty() && a == b;
    report(9, pass, "two identical campaign invocations produce byte-identical run logs");
}

// 10. Bookkeeping conservation in every replication.
void criterion_bookkeeping(const CampaignBundle& b) {
    bool pass = true;
    for (const RunLog& log : b.logs) {
        int failed = 0;
        for (const IterationRecord& r : log.records) failed += r.failed_attempts;
        if (log.classifier_labels != log.solved_count + static_cast<std::size_t>(failed))
            pass = false;
        if (failed != log.total_failed) pass = false;
    }
    report(10, pass, "classifier labels = solved set + total failed attempts in every rep");
}

}  // namespace

int main() {
    fs::path tmp = fs::temp_directory_path() / "formopt_acceptance";
    fs::create_directories(tmp);

    criterion_grid(tmp);
    criterion_utility();
    criterion_nbi();
    criterion_nondomination();
    criterion_gp();

    CampaignBundle bundle = run_default_replications();
    criterion_convergence(bundle);
    criterion_failure_trend(bundle);
    criterion_kde_evolution(bundle);
    criterion_determinism(tmp);
    criterion_bookkeeping(bundle);

    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
