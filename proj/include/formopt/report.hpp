#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "formopt/campaign.hpp"
#include "formopt/composition.hpp"
#include "formopt/kde.hpp"
#include "formopt/runlog.hpp"
#include "formopt/utility.hpp"

namespace formopt {

/// Bare-bones SVG canvas: polylines, circles, text. Enough for the
/// result figures; no plotting dependency.
class SvgCanvas {
  public:
    SvgCanvas(int width, int height) : width_(width), height_(height) {
        body_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
              << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' ' << height
              << "\">\n";
        body_ << "<rect width=\"" << width << "\" height=\"" << height
              << "\" fill=\"white\"/>\n";
    }

    void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& color,
                  double stroke_width = 1.5) {
        body_ << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\""
              << stroke_width << "\" points=\"";
        for (const auto& [x, y] : pts) body_ << x << ',' << y << ' ';
        body_ << "\"/>\n";
    }

    void circle(double x, double y, double r, const std::string& color) {
        body_ << "<circle cx=\"" << x << "\" cy=\"" << y << "\" r=\"" << r << "\" fill=\""
              << color << "\"/>\n";
    }

    void line(double x1, double y1, double x2, double y2, const std::string& color,
              double stroke_width = 1.0) {
        body_ << "<line x1=\"" << x1 << "\" y1=\"" << y1 << "\" x2=\"" << x2 << "\" y2=\""
              << y2 << "\" stroke=\"" << color << "\" stroke-width=\"" << stroke_width
              << "\"/>\n";
    }

    void text(double x, double y, const std::string& s, int size = 12) {
        body_ << "<text x=\"" << x << "\" y=\"" << y << "\" font-size=\"" << size
              << "\" font-family=\"sans-serif\">" << s << "</text>\n";
    }

    std::string str() const { return body_.str() + "</svg>\n"; }

    void save(const std::string& path) const {
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot open SVG output: " + path);
        out << str();
    }

    int width() const { return width_; }
    int height() const { return height_; }

  private:
    int width_, height_;
    std::ostringstream body_;
};

namespace detail {

/// Maps data points into a margin-padded chart area and draws the frame.
struct ChartFrame {
    double x_lo, x_hi, y_lo, y_hi;
    double px_lo, px_hi, py_lo, py_hi;  // pixel bounds (py_lo is the top)

    ChartFrame(SvgCanvas& svg, double xl, double xh, double yl, double yh, int margin = 45)
        : x_lo(xl), x_hi(xh), y_lo(yl), y_hi(yh) {
        if (x_hi <= x_lo) x_hi = x_lo + 1.0;
        if (y_hi <= y_lo) y_hi = y_lo + 1.0;
        px_lo = margin;
        px_hi = svg.width() - margin / 3.0;
        py_lo = margin / 3.0;
        py_hi = svg.height() - margin;
        svg.line(px_lo, py_hi, px_hi, py_hi, "black");
        svg.line(px_lo, py_lo, px_lo, py_hi, "black");
    }

    std::pair<double, double> map(double x, double y) const {
        double fx = (x - x_lo) / (x_hi - x_lo);
        double fy = (y - y_lo) / (y_hi - y_lo);
        return {px_lo + fx * (px_hi - px_lo), py_hi - fy * (py_hi - py_lo)};
    }
};

inline std::string heat_color(double t) {
    t = std::clamp(t, 0.0, 1.0);
    int r = static_cast<int>(255.0 * t);
    int b = static_cast<int>(255.0 * (1.0 - t));
    int g = static_cast<int>(80.0 * (1.0 - std::abs(2.0 * t - 1.0)));
    std::ostringstream s;
    s << "rgb(" << r << ',' << g << ',' << b << ")";
    return s.str();
}

inline void line_chart(const std::string& svg_path, const std::string& title,
                       const std::vector<std::vector<double>>& series,
                       const std::vector<std::string>& colors, int w, int h) {
    SvgCanvas svg(w, h);
    double y_lo = std::numeric_limits<double>::infinity(), y_hi = -y_lo;
    std::size_t n = 0;
    for (const auto& s : series) {
        n = std::max(n, s.size());
        for (double v : s) {
            y_lo = std::min(y_lo, v);
            y_hi = std::max(y_hi, v);
        }
    }
    ChartFrame frame(svg, 0.0, static_cast<double>(n ? n - 1 : 1), y_lo, y_hi);
    for (std::size_t si = 0; si < series.size(); ++si) {
        std::vector<std::pair<double, double>> pts;
        for (std::size_t i = 0; i < series[si].size(); ++i)
            pts.push_back(frame.map(static_cast<double>(i), series[si][i]));
        svg.polyline(pts, colors[si % colors.size()]);
    }
    svg.text(frame.px_lo, frame.py_lo + 4, title);
    svg.save(svg_path);
}

}  // namespace detail

/// Convergence report: mean/min/max best-so-far per iteration.
inline void report_convergence(const ReplicationSummary& s, const std::string& svg_path,
                               const std::string& csv_path, int w = 640, int h = 420) {
    {
        std::ofstream csv(csv_path);
        if (!csv) throw std::runtime_error("cannot open CSV output: " + csv_path);
        csv << "iter,mean_best,min_best,max_best\n";
        for (std::size_t i = 0; i < s.mean_best.size(); ++i)
            csv << i << ',' << s.mean_best[i] << ',' << s.min_best[i] << ',' << s.max_best[i]
                << '\n';
    }
    detail::line_chart(svg_path, "best-so-far utility vs iteration",
                       {s.mean_best, s.min_best, s.max_best},
                       {"rgb(20,60,200)", "rgb(150,150,150)", "rgb(150,150,150)"}, w, h);
}

/// Failed-attempts report: mean failures per iteration.
inline void report_failed_attempts(const ReplicationSummary& s, const std::string& svg_path,
                                   const std::string& csv_path, int w = 640, int h = 420) {
    {
        std::ofstream csv(csv_path);
        if (!csv) throw std::runtime_error("cannot open CSV output: " + csv_path);
        csv << "iter,mean_failed\n";
        for (std::size_t i = 0; i < s.mean_failed.size(); ++i)
            csv << i << ',' << s.mean_failed[i] << '\n';
    }
    detail::line_chart(svg_path, "mean failed attempts vs iteration", {s.mean_failed},
                       {"rgb(200,60,20)"}, w, h);
}

/// Pentagon report: composition space projected into the regular
/// pentagon, colored by utility normalized to the brute-force maximum.
inline void report_pentagon(const AlloyProblem& problem, const BruteForceResult& bf,
                            const std::string& svg_path, const std::string& csv_path,
                            int w = 640, int h = 640) {
    {
        std::ofstream csv(csv_path);
        if (!csv) throw std::runtime_error("cannot open CSV output: " + csv_path);
        csv << "x,y,utility_norm\n";
        for (std::size_t i = 0; i < problem.grid.size(); ++i) {
            auto p = pentagon_project(problem.grid.points[i]);
            csv << p[0] << ',' << p[1] << ',' << bf.utilities[i] / bf.max_utility << '\n';
        }
    }
    SvgCanvas svg(w, h);
    auto map = [&](double x, double y) {
        double s = 0.42 * std::min(w, h);
        return std::pair<double, double>{w / 2.0 + s * x, h / 2.0 - s * y};
    };
    for (std::size_t i = 0; i < problem.grid.size(); ++i) {
        auto p = pentagon_project(problem.grid.points[i]);
        auto [x, y] = map(p[0], p[1]);
        svg.circle(x, y, 2.5, detail::heat_color(bf.utilities[i] / bf.max_utility));
    }
    auto verts = pentagon_vertices();
    for (std::size_t i = 0; i < kNumElements; ++i) {
        auto [x1, y1] = map(verts[i][0], verts[i][1]);
        auto [x2, y2] = map(verts[(i + 1) % kNumElements][0], verts[(i + 1) % kNumElements][1]);
        svg.line(x1, y1, x2, y2, "black");
        svg.text(x1 + 5, y1 - 5, kElementNames[i]);
    }
    svg.save(svg_path);
}

/// KDE report: per reduced-dimension marginal density curves at
/// iteration 0 and at the final iteration.
inline void report_kde(const KdeModel& initial, const KdeModel& final_model,
                       const std::string& svg_path, const std::string& csv_path,
                       int samples = 200, int w = 640, int h = 420) {
    const Eigen::Index d = initial.dim();
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto* m : {&initial, &final_model})
        for (const auto& p : m->support)
            for (Eigen::Index i = 0; i < d; ++i) {
                lo = std::min(lo, p(i));
                hi = std::max(hi, p(i));
            }
    double pad = 3.0 * std::max(initial.bandwidth, final_model.bandwidth);
    lo -= pad;
    hi += pad;

    auto marginal = [](const KdeModel& m, Eigen::Index dim, double x) {
        const double h2 = m.bandwidth * m.bandwidth;
        double sum = 0.0;
        for (const auto& s : m.support) {
            double dx = x - s(dim);
            sum += std::exp(-0.5 * dx * dx / h2);
        }
        return sum / (static_cast<double>(m.support.size()) *
                      std::sqrt(2.0 * 3.14159265358979323846 * h2));
    };

    std::ofstream csv(csv_path);
    if (!csv) throw std::runtime_error("cannot open CSV output: " + csv_path);
    csv << "dim,x,density_initial,density_final\n";
    std::vector<std::vector<double>> series;
    for (Eigen::Index dim = 0; dim < d; ++dim) {
        std::vector<double> init_curve, final_curve;
        for (int i = 0; i < samples; ++i) {
            double x = lo + (hi - lo) * i / (samples - 1);
            double di = marginal(initial, dim, x);
            double df = marginal(final_model, dim, x);
            csv << dim << ',' << x << ',' << di << ',' << df << '\n';
            init_curve.push_back(di);
            final_curve.push_back(df);
        }
        series.push_back(std::move(init_curve));
        series.push_back(std::move(final_curve));
    }
    detail::line_chart(svg_path, "formulation density: initial (blue) vs final (red)", series,
                       {"rgb(20,60,200)", "rgb(200,60,20)"}, w, h);
}

/// Utility-curves report: the four single-QoI curves sampled over their
/// calibrated domains.
inline void report_utility_curves(const CurveParams& p, const std::string& svg_path,
                                  const std::string& csv_path, int samples = 200,
                                  int w = 640, int h = 420) {
    struct CurveDef {
        const char* name;
        double lo, hi;
        double (*eval)(double, const CurveParams&);
    };
    const CurveDef defs[] = {
        {"u_cp", p.cp_min, p.cp_max, u_cp},
        {"u_ys", p.ys_midpoint - 100.0, p.ys_cal_point + 150.0, u_ys},
        {"u_density", p.rho_cal_point - 2.0, 2.0 * p.rho_midpoint - p.rho_cal_point + 2.0,
         u_density},
        {"u_sr", p.dt_min, p.dt_max, u_sr},
    };

    std::ofstream csv(csv_path);
    if (!csv) throw std::runtime_error("cannot open CSV output: " + csv_path);
    csv << "curve,x,u\n";
    std::vector<std::vector<double>> series;
    for (const auto& def : defs) {
        std::vector<double> ys;
        for (int i = 0; i < samples; ++i) {
            double x = def.lo + (def.hi - def.lo) * i / (samples - 1);
            double u = def.eval(x, p);
            csv << def.name << ',' << x << ',' << u << '\n';
            ys.push_back(u);
        }
        series.push_back(std::move(ys));
    }
    detail::line_chart(svg_path, "utility curves (x rescaled per curve)", series,
                       {"rgb(20,60,200)", "rgb(200,60,20)", "rgb(20,160,60)",
                        "rgb(160,20,160)"},
                       w, h);
}

}  // namespace formopt
