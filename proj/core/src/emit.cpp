#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "diffract/scan.hpp"

namespace diffract {

namespace {

constexpr double kRadToDeg = 180.0 / M_PI;
constexpr double kLogFloor = 1e-30;

std::string fmt_e(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12e", v);
    return buf;
}

std::string fmt_coord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

struct Curve {
    const char* label;
    const char* color;
    std::vector<double> values;
};

std::vector<Curve> collect_curves(const ScanResult& result) {
    std::vector<Curve> curves;
    auto add = [&](bool on, const char* label, const char* color, auto getter) {
        if (!on) return;
        Curve c{label, color, {}};
        c.values.reserve(result.rows.size());
        for (const PredictionPoint& row : result.rows) c.values.push_back(getter(row));
        curves.push_back(std::move(c));
    };
    add(result.theories.qm, "QM", "#1f77b4", [](const PredictionPoint& r) { return r.i_qm; });
    add(result.theories.fk, "FK", "#d62728", [](const PredictionPoint& r) { return r.i_fk; });
    add(result.theories.rs1, "RS1", "#2ca02c", [](const PredictionPoint& r) { return r.i_rs1; });
    add(result.theories.rs2, "RS2", "#9467bd", [](const PredictionPoint& r) { return r.i_rs2; });
    add(result.theories.sommerfeld, "Sommerfeld", "#8c564b",
        [](const PredictionPoint& r) { return r.i_sommerfeld; });
    return curves;
}

}  // namespace

void emit_csv(const ScanResult& result, std::ostream& out) {
    const bool with_sommerfeld = result.theories.sommerfeld;
    out << "theta_x_deg,theta_y_deg,T,L,Gamma,I_QM,I_FK,I_RS1,I_RS2";
    if (with_sommerfeld) out << ",I_Sommerfeld";
    out << "\n";
    for (const PredictionPoint& row : result.rows) {
        out << fmt_e(row.theta_x * kRadToDeg) << ',' << fmt_e(row.theta_y * kRadToDeg) << ','
            << fmt_e(row.transverse) << ',' << fmt_e(row.longitudinal) << ',' << fmt_e(row.gamma)
            << ',' << fmt_e(row.i_qm) << ',' << fmt_e(row.i_fk) << ',' << fmt_e(row.i_rs1) << ','
            << fmt_e(row.i_rs2);
        if (with_sommerfeld) out << ',' << fmt_e(row.i_sommerfeld);
        out << '\n';
    }
}

void emit_csv_file(const ScanResult& result, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    emit_csv(result, out);
    out.flush();
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

void emit_svg(const ScanResult& result, std::ostream& out, bool log_scale) {
    if (result.rows.empty()) throw std::invalid_argument("emit_svg: empty scan result");
    if (result.mode != ScanMode::in_plane)
        throw std::invalid_argument("emit_svg: only in-plane scans are plotted");

    const int width = 960, height = 640;
    const int ml = 70, mr = 170, mt = 30, mb = 50;
    const double plot_w = width - ml - mr;
    const double plot_h = height - mt - mb;

    const std::vector<Curve> curves = collect_curves(result);
    if (curves.empty()) throw std::invalid_argument("emit_svg: no theories selected");

    const double x_min = result.rows.front().theta_x * kRadToDeg;
    const double x_max = result.rows.back().theta_x * kRadToDeg;

    bool clamped = false;
    double y_min = 0.0, y_max = 1.0;
    if (log_scale) {
        double lo = 0.0;
        for (const Curve& c : curves)
            for (double v : c.values) {
                if (v < kLogFloor) clamped = true;
                lo = std::min(lo, std::log10(std::max(v, kLogFloor)));
            }
        y_min = std::max(lo, std::log10(kLogFloor));
        y_max = 0.0;
        for (const Curve& c : curves)
            for (double v : c.values) y_max = std::max(y_max, std::log10(std::max(v, kLogFloor)));
        y_max = std::ceil(y_max);
        y_min = std::floor(y_min);
        if (y_min == y_max) y_min = y_max - 1.0;
    } else {
        for (const Curve& c : curves)
            for (double v : c.values) y_max = std::max(y_max, v);
    }

    auto x_px = [&](double deg) { return ml + plot_w * (deg - x_min) / (x_max - x_min); };
    auto y_px = [&](double value) {
        const double t = log_scale ? (std::log10(std::max(value, kLogFloor)) - y_min) / (y_max - y_min)
                                   : (value - y_min) / (y_max - y_min);
        return mt + plot_h * (1.0 - t);
    };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    out << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";

    // frame
    out << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << fmt_coord(plot_w)
        << "\" height=\"" << fmt_coord(plot_h)
        << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";

    // x ticks every 10 degrees that fall inside the range
    for (int deg = -90; deg <= 90; deg += 10) {
        if (deg < x_min - 1e-9 || deg > x_max + 1e-9) continue;
        const double x = x_px(deg);
        out << "<line x1=\"" << fmt_coord(x) << "\" y1=\"" << fmt_coord(mt + plot_h) << "\" x2=\""
            << fmt_coord(x) << "\" y2=\"" << fmt_coord(mt + plot_h + 5)
            << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << fmt_coord(x) << "\" y=\"" << fmt_coord(mt + plot_h + 20)
            << "\" font-size=\"12\" text-anchor=\"middle\">" << deg << "</text>\n";
    }
    out << "<text x=\"" << fmt_coord(ml + plot_w / 2) << "\" y=\"" << height - 10
        << "\" font-size=\"13\" text-anchor=\"middle\">diffraction angle (deg)</text>\n";

    // y ticks: one per decade (log) or five linear divisions
    if (log_scale) {
        int step = 1;
        while ((y_max - y_min) / step > 12) ++step;
        for (double exp10 = y_max; exp10 >= y_min - 1e-9; exp10 -= step) {
            const double y = y_px(std::pow(10.0, exp10));
            out << "<line x1=\"" << ml - 5 << "\" y1=\"" << fmt_coord(y) << "\" x2=\"" << ml
                << "\" y2=\"" << fmt_coord(y) << "\" stroke=\"black\"/>\n";
            out << "<text x=\"" << ml - 8 << "\" y=\"" << fmt_coord(y + 4)
                << "\" font-size=\"12\" text-anchor=\"end\">1e" << static_cast<int>(exp10)
                << "</text>\n";
        }
    } else {
        for (int i = 0; i <= 5; ++i) {
            const double v = y_min + (y_max - y_min) * i / 5.0;
            const double y = y_px(v);
            out << "<line x1=\"" << ml - 5 << "\" y1=\"" << fmt_coord(y) << "\" x2=\"" << ml
                << "\" y2=\"" << fmt_coord(y) << "\" stroke=\"black\"/>\n";
            out << "<text x=\"" << ml - 8 << "\" y=\"" << fmt_coord(y + 4)
                << "\" font-size=\"12\" text-anchor=\"end\">" << fmt_coord(v) << "</text>\n";
        }
    }
    out << "<text x=\"18\" y=\"" << fmt_coord(mt + plot_h / 2)
        << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
        << fmt_coord(mt + plot_h / 2) << ")\">relative intensity"
        << (log_scale ? " (log)" : "") << "</text>\n";

    for (const Curve& c : curves) {
        out << "<polyline fill=\"none\" stroke=\"" << c.color << "\" stroke-width=\"1.2\" points=\"";
        for (std::size_t i = 0; i < result.rows.size(); ++i) {
            if (i) out << ' ';
            out << fmt_coord(x_px(result.rows[i].theta_x * kRadToDeg)) << ','
                << fmt_coord(y_px(c.values[i]));
        }
        out << "\"/>\n";
    }

    double legend_y = mt + 15;
    for (const Curve& c : curves) {
        out << "<line x1=\"" << width - mr + 15 << "\" y1=\"" << fmt_coord(legend_y - 4)
            << "\" x2=\"" << width - mr + 45 << "\" y2=\"" << fmt_coord(legend_y - 4)
            << "\" stroke=\"" << c.color << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << width - mr + 52 << "\" y=\"" << fmt_coord(legend_y)
            << "\" font-size=\"13\">" << c.label << "</text>\n";
        legend_y += 20;
    }
    if (log_scale && clamped)
        out << "<text x=\"" << width - mr + 15 << "\" y=\"" << fmt_coord(legend_y + 4)
            << "\" font-size=\"11\" fill=\"#555555\">values clamped at 1e-30</text>\n";

    out << "</svg>\n";
}

void emit_svg_file(const ScanResult& result, const std::string& path, bool log_scale) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    emit_svg(result, out, log_scale);
    out.flush();
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace diffract
