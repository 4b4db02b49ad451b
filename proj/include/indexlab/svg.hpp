#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "csv.hpp"

namespace indexlab {

namespace svg_detail {

inline std::string fixed(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

inline void text_at(std::string& out, double x, double y, const std::string& body,
                    const char* anchor = "middle") {
    out += "<text x=\"" + fixed(x) + "\" y=\"" + fixed(y) + "\" font-family=\"monospace\" " +
           "font-size=\"11\" text-anchor=\"" + std::string(anchor) + "\">" + body + "</text>\n";
}

inline std::string diverging_color(double v, double scale) {
    // blue below zero, white at zero, red above
    const double t = scale > 0 ? std::clamp(v / scale, -1.0, 1.0) : 0.0;
    const int other = static_cast<int>(std::lround(255.0 * (1.0 - std::abs(t))));
    const int r = t >= 0 ? 255 : other;
    const int b = t <= 0 ? 255 : other;
    return "rgb(" + std::to_string(r) + "," + std::to_string(other) + "," + std::to_string(b) +
           ")";
}

}  // namespace svg_detail

// Eigenvalue paths against the loop parameter inside the trusted window,
// with the zero level drawn solid, the window edges dashed, and every
// sign-changing segment marked at its interpolated zero.
inline std::string flow_diagram_svg(const RunRecord& r) {
    if (r.sample_params.empty() || r.sample_params.size() != r.eigenvalues.size())
        throw missing_data("record has no eigenvalue table to plot");
    const double w = 640, h = 400, x0 = 60, x1 = 620, y0 = 360, y1 = 20;
    const double lam_cap = r.window;
    auto sx = [&](double s) { return x0 + (x1 - x0) * s; };
    auto sy = [&](double lam) { return y0 + (y1 - y0) * (lam + lam_cap) / (2.0 * lam_cap); };

    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                      svg_detail::fixed(w) + "\" height=\"" + svg_detail::fixed(h) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    out += "<line x1=\"" + svg_detail::fixed(x0) + "\" y1=\"" + svg_detail::fixed(sy(0)) +
           "\" x2=\"" + svg_detail::fixed(x1) + "\" y2=\"" + svg_detail::fixed(sy(0)) +
           "\" stroke=\"#999999\" stroke-width=\"1\"/>\n";
    for (double edge : {-lam_cap, lam_cap}) {
        out += "<line x1=\"" + svg_detail::fixed(x0) + "\" y1=\"" + svg_detail::fixed(sy(edge)) +
               "\" x2=\"" + svg_detail::fixed(x1) + "\" y2=\"" + svg_detail::fixed(sy(edge)) +
               "\" stroke=\"#bbbbbb\" stroke-width=\"1\" stroke-dasharray=\"4 3\"/>\n";
    }

    std::string crossings;
    for (std::size_t k = 0; k + 1 < r.sample_params.size(); ++k) {
        const auto& a = r.eigenvalues[k];
        const auto& b = r.eigenvalues[k + 1];
        const std::size_t paired = std::min(a.size(), b.size());
        for (std::size_t j = 0; j < paired; ++j) {
            out += "<line x1=\"" + svg_detail::fixed(sx(r.sample_params[k])) + "\" y1=\"" +
                   svg_detail::fixed(sy(a[j])) + "\" x2=\"" +
                   svg_detail::fixed(sx(r.sample_params[k + 1])) + "\" y2=\"" +
                   svg_detail::fixed(sy(b[j])) + "\" stroke=\"#205080\" stroke-width=\"1.2\"/>\n";
            if ((a[j] < 0 && b[j] > 0) || (a[j] > 0 && b[j] < 0)) {
                const double t = a[j] / (a[j] - b[j]);
                const double s =
                    r.sample_params[k] + t * (r.sample_params[k + 1] - r.sample_params[k]);
                crossings += "<circle cx=\"" + svg_detail::fixed(sx(s)) + "\" cy=\"" +
                             svg_detail::fixed(sy(0)) +
                             "\" r=\"3.5\" fill=\"none\" stroke=\"#c03030\" "
                             "stroke-width=\"1.5\"/>\n";
            }
        }
    }
    for (std::size_t k = 0; k < r.sample_params.size(); ++k)
        for (double lam : r.eigenvalues[k])
            out += "<circle cx=\"" + svg_detail::fixed(sx(r.sample_params[k])) + "\" cy=\"" +
                   svg_detail::fixed(sy(lam)) + "\" r=\"1.6\" fill=\"#205080\"/>\n";
    out += crossings;

    svg_detail::text_at(out, (x0 + x1) / 2, h - 8, "loop parameter s");
    svg_detail::text_at(out, x0 - 8, sy(0) + 4, "0", "end");
    svg_detail::text_at(out, x0 - 8, sy(lam_cap) + 4, "+" + svg_detail::fixed(lam_cap), "end");
    svg_detail::text_at(out, x0 - 8, sy(-lam_cap) + 4, "-" + svg_detail::fixed(lam_cap), "end");
    svg_detail::text_at(out, (x0 + x1) / 2, 14,
                        r.scenario_name + ": flow " + std::to_string(r.ind_a));
    out += "</svg>\n";
    return out;
}

// Plaquette fluxes of the two boundary components as side-by-side lattices
// on a shared diverging scale.
inline std::string flux_heatmap_svg(const RunRecord& r) {
    const double w = 640, h = 360;
    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                      svg_detail::fixed(w) + "\" height=\"" + svg_detail::fixed(h) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    if (r.fluxes.empty()) {
        svg_detail::text_at(out, w / 2, h / 2, "no plaquette flux (rank zero subbundle)");
        out += "</svg>\n";
        return out;
    }

    double scale = 0.0;
    std::size_t ni = 0, nj = 0;
    for (const auto& f : r.fluxes) {
        scale = std::max(scale, std::abs(f.flux));
        ni = std::max(ni, f.i + 1);
        nj = std::max(nj, f.j + 1);
    }

    const double panel_w = 280, panel_h = 280, top = 50;
    for (int comp = 0; comp < 2; ++comp) {
        const double left = comp == 0 ? 30 : 340;
        const double cw = panel_w / static_cast<double>(ni);
        const double ch = panel_h / static_cast<double>(nj);
        svg_detail::text_at(out, left + panel_w / 2, top - 10,
                            "component " + std::to_string(comp));
        for (const auto& f : r.fluxes) {
            if (f.component != comp) continue;
            out += "<rect x=\"" + svg_detail::fixed(left + cw * static_cast<double>(f.i)) +
                   "\" y=\"" +
                   svg_detail::fixed(top + panel_h - ch * static_cast<double>(f.j + 1)) +
                   "\" width=\"" + svg_detail::fixed(cw) + "\" height=\"" +
                   svg_detail::fixed(ch) + "\" fill=\"" +
                   svg_detail::diverging_color(f.flux, scale) + "\"/>\n";
        }
    }
    svg_detail::text_at(out, w / 2, h - 10,
                        "plaquette flux, blue -" + svg_detail::fixed(scale) + " to red +" +
                            svg_detail::fixed(scale));
    out += "</svg>\n";
    return out;
}

// Writes the bulk CSVs and both plots; identical records produce identical
// bytes.  The record must carry its eigenvalue table.
inline std::vector<std::filesystem::path> emit_plots(const RunRecord& r,
                                                     const std::filesystem::path& out_dir) {
    if (r.sample_params.empty()) throw missing_data("record has no eigenvalue table");
    std::filesystem::create_directories(out_dir);
    std::vector<std::filesystem::path> written;
    auto drop = [&](const char* name, const std::string& body) {
        const auto path = out_dir / name;
        std::ofstream out(path, std::ios::binary);
        out << body;
        if (!out) throw error("cannot write " + path.string());
        written.push_back(path);
    };
    drop("eigenvalues.csv", eigenvalue_csv(r));
    drop("fluxes.csv", flux_csv(r));
    drop("spectral_flow.svg", flow_diagram_svg(r));
    drop("flux_heatmap.svg", flux_heatmap_svg(r));
    return written;
}

}  // namespace indexlab
