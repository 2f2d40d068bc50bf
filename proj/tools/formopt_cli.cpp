// Command-line front end: design-space generation, campaign runs,
// replication, brute-force utility sweeps, and report emission.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "formopt/formopt.hpp"

namespace fs = std::filesystem;
using namespace formopt;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

CampaignConfig load_config_or_default(const std::string& path) {
    if (path.empty()) return CampaignConfig{};
    return load_campaign_config(path);
}

unsigned thread_cap_from_env() {
    if (const char* env = std::getenv("FORMOPT_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return 0;  // hardware default
}

void print_best(const RunLog& log, const OracleConfig& oracle) {
    std::cout << "best utility: " << log.best_utility << "\n";
    std::cout << "best composition (at. frac):";
    for (std::size_t i = 0; i < kNumElements; ++i)
        std::cout << ' ' << kElementNames[i] << '=' << log.best_composition[i];
    std::cout << "\nbest composition (wt %):";
    auto wt = to_weight_percent(log.best_composition, oracle.molar_mass);
    for (std::size_t i = 0; i < kNumElements; ++i)
        std::cout << ' ' << kElementNames[i] << '=' << wt[i];
    std::cout << "\n";
}

int run_gen_space(const std::string& config_path, double step, const std::string& out_path) {
    CampaignConfig cfg = load_config_or_default(config_path);
    if (step > 0.0) cfg.grid_step = step;
    DesignGrid grid = generate_grid(cfg.grid_step);
    std::ofstream out(out_path);
    if (!out) {
        std::cerr << "error: cannot open output file " << out_path << "\n";
        return kExitInput;
    }
    write_qoi_csv(grid, cfg.oracle, out);
    std::cout << grid.size() << " grid points written to " << out_path << "\n";
    return kExitOk;
}

int run_campaign_cmd(const std::string& config_path, std::uint64_t seed, bool seed_set,
                     int iters, bool iters_set, const std::string& out_dir, bool timings) {
    CampaignConfig cfg = load_config_or_default(config_path);
    if (seed_set) cfg.seed = seed;
    if (iters_set) cfg.n_iters = iters;
    fs::create_directories(out_dir);

    RunLog log = run_campaign(cfg);
    write_run_log(log, (fs::path(out_dir) / "run.jsonl").string(), timings);
    ReplicationSummary summary = summarize({log});
    write_summary_csv(summary, (fs::path(out_dir) / "summary.csv").string());
    print_best(log, cfg.oracle);
    return kExitOk;
}

int run_replicate(const std::string& config_path, int reps, std::uint64_t base_seed,
                  bool seed_set, int iters, bool iters_set, const std::string& out_dir,
                  bool timings) {
    CampaignConfig cfg = load_config_or_default(config_path);
    if (iters_set) cfg.n_iters = iters;
    std::uint64_t seed0 = seed_set ? base_seed : cfg.seed;
    fs::create_directories(out_dir);

    auto logs = replicate(cfg, reps, seed0, thread_cap_from_env());
    for (std::size_t r = 0; r < logs.size(); ++r) {
        char name[32];
        std::snprintf(name, sizeof(name), "rep_%03zu.jsonl", r);
        write_run_log(logs[r], (fs::path(out_dir) / name).string(), timings);
    }
    write_summary_csv(summarize(logs), (fs::path(out_dir) / "summary.csv").string());
    double mean_final = 0.0;
    for (const auto& log : logs) mean_final += log.best_utility;
    std::cout << reps << " replications; mean final best utility: "
              << mean_final / static_cast<double>(reps) << "\n";
    return kExitOk;
}

int run_brute_force(const std::string& config_path, const std::string& out_path) {
    CampaignConfig cfg = load_config_or_default(config_path);
    AlloyProblem problem = AlloyProblem::build(cfg);
    BruteForceResult bf = brute_force_max_utility(problem);
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) {
            std::cerr << "error: cannot open output file " << out_path << "\n";
            return kExitInput;
        }
        out << "mo,nb,ti,v,w,utility\n";
        for (std::size_t i = 0; i < problem.grid.size(); ++i) {
            const Composition& c = problem.grid.points[i];
            for (std::size_t j = 0; j < kNumElements; ++j) out << c[j] << ',';
            out << bf.utilities[i] << '\n';
        }
    }
    const Composition& best = problem.grid.points[static_cast<std::size_t>(bf.argmax)];
    std::cout << "max utility: " << bf.max_utility << "\ncomposition (at. frac):";
    for (std::size_t i = 0; i < kNumElements; ++i)
        std::cout << ' ' << kElementNames[i] << '=' << best[i];
    std::cout << "\n";
    return kExitOk;
}

int run_report(const std::string& kind, const std::string& config_path,
               const std::string& summary_path, const std::string& runlog_path,
               const std::string& out_dir, int width, int height) {
    fs::create_directories(out_dir);
    auto out = [&](const std::string& name) { return (fs::path(out_dir) / name).string(); };

    auto load_summary = [&]() {
        std::ifstream in(summary_path);
        if (!in) throw std::runtime_error("cannot open summary CSV: " + summary_path);
        ReplicationSummary s;
        std::string line;
        std::getline(in, line);  // header
        while (std::getline(in, line)) {
            double iter, mb, mnb, mxb, mf;
            if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf", &iter, &mb, &mnb, &mxb,
                            &mf) != 5)
                throw std::runtime_error("malformed summary row: " + line);
            s.mean_best.push_back(mb);
            s.min_best.push_back(mnb);
            s.max_best.push_back(mxb);
            s.mean_failed.push_back(mf);
        }
        return s;
    };

    if (kind == "convergence") {
        report_convergence(load_summary(), out("convergence.svg"), out("convergence.csv"),
                           width, height);
    } else if (kind == "failed-attempts") {
        report_failed_attempts(load_summary(), out("failed_attempts.svg"),
                               out("failed_attempts.csv"), width, height);
    } else if (kind == "pentagon") {
        CampaignConfig cfg = load_config_or_default(config_path);
        AlloyProblem problem = AlloyProblem::build(cfg);
        BruteForceResult bf = brute_force_max_utility(problem);
        report_pentagon(problem, bf, out("pentagon.svg"), out("pentagon.csv"), width, height);
    } else if (kind == "kde") {
        ParsedRunLog log = parse_run_log(runlog_path);
        if (log.kde_snapshots.size() < 2)
            throw std::runtime_error("run log has fewer than two KDE snapshots");
        auto to_model = [](const nlohmann::json& j) {
            KdeModel m;
            m.bandwidth = j.at("bandwidth").get<double>();
            for (const auto& p : j.at("support")) {
                Eigen::VectorXd v(static_cast<Eigen::Index>(p.size()));
                for (Eigen::Index i = 0; i < v.size(); ++i)
                    v(i) = p[static_cast<std::size_t>(i)].get<double>();
                m.support.push_back(v);
            }
            return m;
        };
        report_kde(to_model(log.kde_snapshots.front()), to_model(log.kde_snapshots.back()),
                   out("kde.svg"), out("kde.csv"), 200, width, height);
    } else if (kind == "utility-curves") {
        CampaignConfig cfg = load_config_or_default(config_path);
        AlloyProblem problem = AlloyProblem::build(cfg);
        report_utility_curves(problem.curves, out("utility_curves.svg"),
                              out("utility_curves.csv"), 200, width, height);
    } else {
        std::cerr << "error: unknown report kind '" << kind << "'\n";
        return kExitInput;
    }
    std::cout << kind << " report written to " << out_dir << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bayesian optimization over problem-formulation space for alloy design"};
    app.require_subcommand(1);

    std::string config_path, out_path = "out", report_kind, summary_path, runlog_path;
    double step = 0.0;
    std::uint64_t seed = 0;
    int iters = 0, reps = 30, width = 640, height = 420;
    bool timings = false;

    auto* gen = app.add_subcommand("gen-space", "write the design grid with QoI values as CSV");
    gen->add_option("--step", step, "atomic-fraction grid step (reciprocal of an integer)");
    gen->add_option("--config", config_path, "campaign config JSON");
    gen->add_option("--out", out_path, "output CSV path");

    auto* camp = app.add_subcommand("campaign", "run one seeded discovery campaign");
    camp->add_option("--config", config_path, "campaign config JSON");
    auto* camp_seed = camp->add_option("--seed", seed, "random seed");
    auto* camp_iters = camp->add_option("--iters", iters, "iteration count");
    camp->add_option("--out", out_path, "output directory");
    camp->add_flag("--timings", timings, "record wall-clock times in the run log");

    auto* rep = app.add_subcommand("replicate", "run repeated campaigns and aggregate");
    rep->add_option("--config", config_path, "campaign config JSON");
    rep->add_option("--reps", reps, "number of replications");
    auto* rep_seed = rep->add_option("--seed", seed, "base seed (rep i uses seed + i)");
    auto* rep_iters = rep->add_option("--iters", iters, "iteration count");
    rep->add_option("--out", out_path, "output directory");
    rep->add_flag("--timings", timings, "record wall-clock times in the run logs");

    auto* bf = app.add_subcommand("brute-force", "full-factorial utility sweep");
    bf->add_option("--config", config_path, "campaign config JSON");
    bf->add_option("--out", out_path, "utility table CSV path (optional)");

    auto* rpt = app.add_subcommand("report", "emit CSV + SVG result figures");
    rpt->add_option("--report", report_kind,
                    "kind: convergence | failed-attempts | pentagon | kde | utility-curves")
        ->required();
    rpt->add_option("--config", config_path, "campaign config JSON");
    rpt->add_option("--summary", summary_path, "summary CSV (convergence, failed-attempts)");
    rpt->add_option("--runlog", runlog_path, "run log JSONL (kde)");
    rpt->add_option("--out", out_path, "output directory");
    rpt->add_option("--width", width, "image width");
    rpt->add_option("--height", height, "image height");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed())
            return run_gen_space(config_path, step, out_path == "out" ? "space.csv" : out_path);
        if (camp->parsed())
            return run_campaign_cmd(config_path, seed, camp_seed->count() > 0, iters,
                                    camp_iters->count() > 0, out_path, timings);
        if (rep->parsed())
            return run_replicate(config_path, reps, seed, rep_seed->count() > 0, iters,
                                 rep_iters->count() > 0, out_path, timings);
        if (bf->parsed()) return run_brute_force(config_path, out_path == "out" ? "" : out_path);
        if (rpt->parsed())
            return run_report(report_kind, config_path, summary_path, runlog_path, out_path,
                              width, height);
    } catch (const DegenerateGeometryError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const DegenerateDataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
