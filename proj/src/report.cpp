#include "priormc/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

namespace priormc {

namespace {

/// Shortest round-trip formatting keeps the CSV output byte-stable.
std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    // Prefer a shorter representation when it round-trips exactly.
    for (int prec = 1; prec <= 16; ++prec) {
        char cand[40];
        std::snprintf(cand, sizeof(cand), "%.*g", prec, x);
        if (std::strtod(cand, nullptr) == x) return cand;
    }
    return buf;
}

}  // namespace

std::string records_to_csv(const std::vector<TrialRecord>& records) {
    std::ostringstream out;
    out << "algorithm,param_name,param_value,n,r,sigma2,p_or_m,trial,seed,rel_error,success,"
           "iterations,wall_ms\n";
    for (const TrialRecord& r : records) {
        out << r.algorithm << ',' << r.param_name << ',' << fmt(r.param_value) << ',' << r.n
            << ',' << r.r << ',' << fmt(r.sigma2) << ',' << fmt(r.p_or_m) << ',' << r.trial
            << ',' << r.seed << ',' << fmt(r.rel_error) << ',' << (r.success ? 1 : 0) << ','
            << r.iterations << ',' << fmt(r.wall_ms) << '\n';
    }
    return out.str();
}

std::string curves_to_csv(const std::vector<CurvePoint>& curves) {
    std::ostringstream out;
    out << "algorithm,param_name,param_value,p_or_m,rate,lo,hi,trials\n";
    for (const CurvePoint& c : curves) {
        out << c.algorithm << ',' << c.param_name << ',' << fmt(c.param_value) << ','
            << fmt(c.p_or_m) << ',' << fmt(c.rate) << ',' << fmt(c.lo) << ',' << fmt(c.hi)
            << ',' << c.trials << '\n';
    }
    return out.str();
}

std::string certify_to_csv(const std::vector<CertifyRecord>& records) {
    std::ostringstream out;
    out << "seed,n,r,p,K,residual_frob,offsupport_spec,support_violation,decay_ok,passed,"
           "isometry\n";
    for (const CertifyRecord& r : records) {
        out << r.seed << ',' << r.n << ',' << r.r << ',' << fmt(r.p) << ',' << r.K << ','
            << fmt(r.residual_frob) << ',' << fmt(r.offsupport_spec) << ','
            << fmt(r.support_violation) << ',' << (r.decay_ok ? 1 : 0) << ','
            << (r.passed ? 1 : 0) << ',' << fmt(r.isometry) << '\n';
    }
    return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    require(out.good(), "write_text_file: cannot open " + path);
    out << content;
}

void write_matrix_csv(const Mat& M, const std::string& path) {
    std::ostringstream out;
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        for (Eigen::Index j = 0; j < M.cols(); ++j) {
            if (j) out << ',';
            out << fmt(M(i, j));
        }
        out << '\n';
    }
    write_text_file(path, out.str());
}

std::string curves_to_svg(const std::vector<CurvePoint>& curves, const std::string& title) {
    // Group the points into one polyline per (algorithm, parameter).
    std::map<std::pair<std::string, double>, std::vector<const CurvePoint*>> lines;
    double xmin = 1e300, xmax = -1e300;
    for (const CurvePoint& c : curves) {
        lines[{c.algorithm, c.param_value}].push_back(&c);
        xmin = std::min(xmin, c.p_or_m);
        xmax = std::max(xmax, c.p_or_m);
    }
    if (xmax <= xmin) xmax = xmin + 1.0;

    const int W = 640, H = 420;
    const int left = 60, right = 170, top = 40, bottom = 50;
    const double plot_w = W - left - right, plot_h = H - top - bottom;
    auto sx = [&](double x) { return left + (x - xmin) / (xmax - xmin) * plot_w; };
    auto sy = [&](double y) { return top + (1.0 - y) * plot_h; };

    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
                                    "#bcbd22", "#e377c2"};
    std::ostringstream svg;
    svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H
        << "' viewBox='0 0 " << W << ' ' << H << "'>\n";
    svg << "<rect width='" << W << "' height='" << H << "' fill='white'/>\n";
    svg << "<text x='" << W / 2 << "' y='22' text-anchor='middle' font-size='15'>" << title
        << "</text>\n";
    // Axes.
    svg << "<line x1='" << left << "' y1='" << top << "' x2='" << left << "' y2='"
        << top + plot_h << "' stroke='black'/>\n";
    svg << "<line x1='" << left << "' y1='" << top + plot_h << "' x2='" << left + plot_w
        << "' y2='" << top + plot_h << "' stroke='black'/>\n";
    for (int k = 0; k <= 5; ++k) {
        const double fy = k / 5.0;
        svg << "<text x='" << left - 8 << "' y='" << sy(fy) + 4
            << "' text-anchor='end' font-size='11'>" << fmt(fy) << "</text>\n";
        const double fx = xmin + (xmax - xmin) * k / 5.0;
        svg << "<text x='" << sx(fx) << "' y='" << top + plot_h + 18
            << "' text-anchor='middle' font-size='11'>" << fmt(std::round(fx * 100) / 100)
            << "</text>\n";
    }
    svg << "<text x='" << left + plot_w / 2 << "' y='" << H - 10
        << "' text-anchor='middle' font-size='12'>sampling rate / measurements</text>\n";
    svg << "<text x='16' y='" << top + plot_h / 2
        << "' text-anchor='middle' font-size='12' transform='rotate(-90 16 "
        << top + plot_h / 2 << ")'>success rate</text>\n";

    int color = 0, legend_y = top + 10;
    for (const auto& [key, pts] : lines) {
        std::vector<const CurvePoint*> sorted = pts;
        std::sort(sorted.begin(), sorted.end(),
                  [](const CurvePoint* a, const CurvePoint* b) { return a->p_or_m < b->p_or_m; });
        const char* col = palette[color % 10];
        svg << "<polyline fill='none' stroke='" << col << "' stroke-width='2' points='";
        for (const CurvePoint* pt : sorted) svg << sx(pt->p_or_m) << ',' << sy(pt->rate) << ' ';
        svg << "'/>\n";
        std::string label = key.first;
        if (key.second != 0.0) label += " (" + fmt(key.second) + ")";
        svg << "<line x1='" << left + plot_w + 12 << "' y1='" << legend_y << "' x2='"
            << left + plot_w + 32 << "' y2='" << legend_y << "' stroke='" << col
            << "' stroke-width='2'/>\n";
        svg << "<text x='" << left + plot_w + 38 << "' y='" << legend_y + 4
            << "' font-size='11'>" << label << "</text>\n";
        legend_y += 18;
        ++color;
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace priormc
