#pragma once

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "formopt/campaign.hpp"
#include "formopt/config.hpp"

namespace formopt {

namespace detail {

inline nlohmann::json vec_to_json(const Eigen::VectorXd& v) {
    nlohmann::json j = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v(i));
    return j;
}

inline nlohmann::json mat_to_json(const Eigen::MatrixXd& m) {
    nlohmann::json j = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        j.push_back(vec_to_json(m.row(i).transpose()));
    return j;
}

}  // namespace detail

inline nlohmann::json chim_to_json(const Chim& chim) {
    return {
        {"utopia", detail::vec_to_json(chim.utopia)},
        {"phi", detail::mat_to_json(chim.phi)},
        {"n_hat", detail::vec_to_json(chim.n_hat)},
        {"minimizer_indices", chim.minimizer_indices},
    };
}

/// Writes the run log as JSONL: a header record, one record per
/// iteration (index 0 is initialization), KDE snapshots, and a final
/// summary record. Timing values are written only when requested so
/// that identical seeded runs produce byte-identical logs.
inline void write_run_log(const RunLog& log, std::ostream& out, bool timings = false) {
    nlohmann::json header = {
        {"type", "header"},
        {"config", campaign_config_to_json(log.cfg)},
        {"chim", chim_to_json(log.chim)},
    };
    out << header.dump() << '\n';

    for (const IterationRecord& r : log.records) {
        nlohmann::json j = {
            {"type", "iter"},
            {"iter", r.iter},
            {"beta", r.beta.size() ? detail::vec_to_json(r.beta) : nlohmann::json()},
            {"ei", r.ei},
            {"failed_attempts", r.failed_attempts},
            {"utility", r.utility ? nlohmann::json(*r.utility) : nlohmann::json()},
            {"best", r.best},
            {"wall_ms", timings ? r.wall_ms : 0.0},
        };
        out << j.dump() << '\n';
    }

    for (const KdeSnapshot& s : log.kde_snapshots) {
        nlohmann::json support = nlohmann::json::array();
        for (const auto& p : s.model.support) support.push_back(detail::vec_to_json(p));
        nlohmann::json j = {
            {"type", "kde_snapshot"},
            {"iter", s.iter},
            {"bandwidth", s.model.bandwidth},
            {"support", support},
        };
        out << j.dump() << '\n';
    }

    nlohmann::json fin = {
        {"type", "final"},
        {"best_utility", log.best_utility},
        {"best_composition", log.best_composition.fractions},
        {"solved_count", log.solved_count},
        {"classifier_labels", log.classifier_labels},
        {"total_failed", log.total_failed},
    };
    out << fin.dump() << '\n';
}

inline void write_run_log(const RunLog& log, const std::string& path, bool timings = false) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open run log for writing: " + path);
    write_run_log(log, out, timings);
}

/// Summary CSV: one row per iteration including the init row.
inline void write_summary_csv(const ReplicationSummary& s, std::ostream& out) {
    out << "iter,mean_best,min_best,max_best,mean_failed\n";
    for (std::size_t r = 0; r < s.mean_best.size(); ++r)
        out << r << ',' << s.mean_best[r] << ',' << s.min_best[r] << ',' << s.max_best[r]
            << ',' << s.mean_failed[r] << '\n';
}

inline void write_summary_csv(const ReplicationSummary& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open summary for writing: " + path);
    write_summary_csv(s, out);
}

/// Grid export: atomic fractions at 6 decimal places.
inline void write_grid_csv(const DesignGrid& grid, std::ostream& out) {
    out << "mo,nb,ti,v,w\n";
    out << std::fixed << std::setprecision(6);
    for (const Composition& c : grid.points) {
        for (std::size_t i = 0; i < kNumElements; ++i)
            out << c[i] << (i + 1 < kNumElements ? ',' : '\n');
    }
}

/// Grid plus external-convention QoI values.
inline void write_qoi_csv(const DesignGrid& grid, const OracleConfig& oracle,
                          std::ostream& out) {
    out << "mo,nb,ti,v,w,cp_gpa,ys_mpa,rho_gcc,dt_k\n";
    out << std::fixed << std::setprecision(6);
    for (const Composition& c : grid.points) {
        for (std::size_t i = 0; i < kNumElements; ++i) out << c[i] << ',';
        QoiVector q = eval_external(c, oracle);
        out << q[0] << ',' << q[1] << ',' << q[2] << ',' << q[3] << '\n';
    }
}

/// Minimal parsed view of a run log, enough for reports and checks.
struct ParsedRunLog {
    nlohmann::json header;
    std::vector<nlohmann::json> iters;
    std::vector<nlohmann::json> kde_snapshots;
    nlohmann::json final_record;
};

inline ParsedRunLog parse_run_log(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open run log: " + path);
    ParsedRunLog log;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line);
        const std::string type = j.at("type").get<std::string>();
        if (type == "header")
            log.header = std::move(j);
        else if (type == "iter")
            log.iters.push_back(std::move(j));
        else if (type == "kde_snapshot")
            log.kde_snapshots.push_back(std::move(j));
        else if (type == "final")
            log.final_record = std::move(j);
    }
    return log;
}

}  // namespace formopt
