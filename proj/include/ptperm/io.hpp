#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>

#include <json.hpp>

#include "ptperm/invariance.hpp"
#include "ptperm/sweep.hpp"

namespace ptperm {

inline constexpr const char* kVersion = "0.1.0";

/// Shortest-round-trip-safe decimal rendering: 17 significant digits.
inline std::string fmt17(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string iso8601_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

/// Run provenance embedded in every output. The timestamp lives in its own
/// field / comment line so determinism checks can strip it.
struct RunManifest {
    std::string command;
    nlohmann::json params;
    std::optional<std::uint64_t> seed;
    std::string version{kVersion};
    std::string timestamp{iso8601_now()};
};

inline nlohmann::json to_json(const RunManifest& m) {
    nlohmann::json j{{"command", m.command},
                     {"params", m.params},
                     {"version", m.version},
                     {"timestamp", m.timestamp}};
    if (m.seed) {
        j["seed"] = *m.seed;
    } else {
        j["seed"] = nullptr;
    }
    return j;
}

inline void write_manifest_comments(std::ostream& os, const RunManifest& m) {
    os << "# command: " << m.command << "\n";
    os << "# params: " << m.params.dump() << "\n";
    if (m.seed) os << "# seed: " << *m.seed << "\n";
    os << "# version: " << m.version << "\n";
    os << "# timestamp: " << m.timestamp << "\n";
}

inline nlohmann::json to_json(const Cplx& z) {
    return {{"re", z.real()}, {"im", z.imag()}};
}

inline nlohmann::json to_json(const Mat2& m) {
    return {{"m11", to_json(m.m11)},
            {"m12", to_json(m.m12)},
            {"m21", to_json(m.m21)},
            {"m22", to_json(m.m22)}};
}

inline nlohmann::json to_json(const std::optional<double>& v) {
    if (!v) return nullptr;
    return *v;
}

inline nlohmann::json to_json(const InvarianceReport& r) {
    nlohmann::json counterexamples = nlohmann::json::array();
    for (const Counterexample& c : r.counterexamples) {
        nlohmann::json mats = nlohmann::json::array();
        for (const Mat2& m : c.matrices) mats.push_back(to_json(m));
        counterexamples.push_back(
            {{"trial", c.trial}, {"residual", c.residual}, {"matrices", mats}});
    }
    return {{"trials", r.trials},
            {"max_residual", r.max_residual},
            {"counterexamples", counterexamples}};
}

inline nlohmann::json to_json(const ThreeModeReport& r) {
    return {{"trials", r.trials},
            {"max_pmp_residual", r.max_pmp_residual},
            {"failed_pmp_trials", r.failed_pmp_trials},
            {"non_pmp_samples", r.non_pmp_samples},
            {"non_pmp_hit_trials", r.non_pmp_hit_trials}};
}

// ---------------------------------------------------------------------------
// CSV

inline void write_map_csv(std::ostream& os, const VisibilityGrid& grid, const RunManifest& m) {
    write_manifest_comments(os, m);
    os << "kl,gok_re,gok_im,visibility\n";
    std::size_t idx = 0;
    for (const Cplx& gok : grid.gok_axis) {
        for (double kl : grid.kl_axis) {
            const auto& v = grid.values[idx++];
            os << fmt17(kl) << ',' << fmt17(gok.real()) << ',' << fmt17(gok.imag()) << ','
               << (v ? fmt17(*v) : "nan") << "\n";
        }
    }
}

inline void write_curve_csv(std::ostream& os, const CurveSet& cs, std::size_t config_index,
                            const RunManifest& m) {
    write_manifest_comments(os, m);
    os << "length,visibility\n";
    const auto& curve = cs.values.at(config_index);
    for (std::size_t i = 0; i < cs.lengths.size(); ++i) {
        os << fmt17(cs.lengths[i]) << ',' << (curve[i] ? fmt17(*curve[i]) : "nan") << "\n";
    }
}

// ---------------------------------------------------------------------------
// JSON documents

inline nlohmann::json map_to_json(const VisibilityGrid& grid, const RunManifest& m) {
    nlohmann::json kl = nlohmann::json::array();
    for (double v : grid.kl_axis) kl.push_back(v);
    nlohmann::json gok = nlohmann::json::array();
    for (const Cplx& g : grid.gok_axis) gok.push_back(to_json(g));
    nlohmann::json values = nlohmann::json::array();
    for (const auto& v : grid.values) values.push_back(to_json(v));
    return {{"manifest", to_json(m)},
            {"geometry", std::string(geometry_name(grid.config))},
            {"kl_axis", kl},
            {"gok_axis", gok},
            {"values", values}};
}

inline nlohmann::json curves_to_json(const CurveSet& cs, const RunManifest& m) {
    nlohmann::json configs = nlohmann::json::array();
    for (std::size_t c = 0; c < cs.configs.size(); ++c) {
        nlohmann::json curve = nlohmann::json::array();
        for (const auto& v : cs.values[c]) curve.push_back(to_json(v));
        configs.push_back({{"geometry", std::string(geometry_name(cs.configs[c]))},
                           {"visibility", curve}});
    }
    nlohmann::json lengths = nlohmann::json::array();
    for (double l : cs.lengths) lengths.push_back(l);
    return {{"manifest", to_json(m)},
            {"gamma_over_kappa", to_json(cs.gamma_over_kappa)},
            {"kappa", cs.kappa},
            {"indistinguishability", cs.indistinguishability},
            {"lengths", lengths},
            {"curves", configs}};
}

// ---------------------------------------------------------------------------
// SVG

namespace detail {

/// Diverging map: blue at -1, white at 0, red at +1; clamped outside [-1,1].
inline std::string visibility_color(const std::optional<double>& v) {
    if (!v) return "#9e9e9e";
    const double x = std::clamp(*v, -1.0, 1.0);
    int r, g, b;
    if (x < 0.0) {
        const double t = -x;
        r = static_cast<int>(255 + t * (33 - 255));
        g = static_cast<int>(255 + t * (102 - 255));
        b = static_cast<int>(255 + t * (172 - 255));
    } else {
        const double t = x;
        r = static_cast<int>(255 + t * (178 - 255));
        g = static_cast<int>(255 + t * (24 - 255));
        b = static_cast<int>(255 + t * (43 - 255));
    }
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
    return buf;
}

inline std::string svg_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace detail

/// Self-contained heatmap, one <rect> per grid cell.
inline void write_map_svg(std::ostream& os, const VisibilityGrid& grid) {
    const int plot_w = 640, plot_h = 480;
    const int margin_l = 70, margin_b = 50, margin_t = 20, margin_r = 20;
    const int width = plot_w + margin_l + margin_r;
    const int height = plot_h + margin_t + margin_b;
    const std::size_t nx = grid.kl_axis.size();
    const std::size_t ny = grid.gok_axis.size();
    const double cw = static_cast<double>(plot_w) / static_cast<double>(nx);
    const double ch = static_cast<double>(plot_h) / static_cast<double>(ny);

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
       << height << "\">\n";
    os << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    std::size_t idx = 0;
    for (std::size_t j = 0; j < ny; ++j) {
        // gok increases upward
        const double y = margin_t + plot_h - static_cast<double>(j + 1) * ch;
        for (std::size_t i = 0; i < nx; ++i) {
            const double x = margin_l + static_cast<double>(i) * cw;
            os << "<rect x=\"" << detail::svg_num(x) << "\" y=\"" << detail::svg_num(y)
               << "\" width=\"" << detail::svg_num(cw + 0.5) << "\" height=\""
               << detail::svg_num(ch + 0.5) << "\" fill=\""
               << detail::visibility_color(grid.values[idx++]) << "\"/>\n";
        }
    }
    // Axis ticks: 5 per axis.
    for (int k = 0; k <= 4; ++k) {
        const double fx = static_cast<double>(k) / 4.0;
        const double xv = grid.kl_axis.front() + fx * (grid.kl_axis.back() - grid.kl_axis.front());
        const double xp = margin_l + fx * plot_w;
        os << "<text x=\"" << detail::svg_num(xp) << "\" y=\"" << (margin_t + plot_h + 18)
           << "\" font-size=\"11\" text-anchor=\"middle\">" << detail::svg_num(xv) << "</text>\n";
        const double gy0 = grid.gok_axis.front().real();
        const double gy1 = grid.gok_axis.back().real();
        const double yv = gy0 + fx * (gy1 - gy0);
        const double yp = margin_t + plot_h - fx * plot_h;
        os << "<text x=\"" << (margin_l - 8) << "\" y=\"" << detail::svg_num(yp + 4)
           << "\" font-size=\"11\" text-anchor=\"end\">" << detail::svg_num(yv) << "</text>\n";
    }
    os << "<text x=\"" << (margin_l + plot_w / 2) << "\" y=\"" << (height - 8)
       << "\" font-size=\"13\" text-anchor=\"middle\">kl</text>\n";
    os << "<text x=\"14\" y=\"" << (margin_t + plot_h / 2)
       << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
       << (margin_t + plot_h / 2) << ")\">gamma/kappa</text>\n";
    os << "</svg>\n";
}

/// Curve-mode plot: one polyline per geometry over physical length.
inline void write_curves_svg(std::ostream& os, const CurveSet& cs) {
    const int plot_w = 640, plot_h = 360;
    const int margin_l = 70, margin_b = 50, margin_t = 20, margin_r = 20;
    const int width = plot_w + margin_l + margin_r;
    const int height = plot_h + margin_t + margin_b;
    static const char* palette[] = {"#00b0b0", "#2ca02c", "#d4b000", "#c02080"};

    double vmin = -1.0, vmax = 1.0;
    for (const auto& curve : cs.values)
        for (const auto& v : curve)
            if (v) {
                vmin = std::min(vmin, *v);
                vmax = std::max(vmax, *v);
            }
    const double x0 = cs.lengths.front(), x1 = cs.lengths.back();

    auto px = [&](double l) { return margin_l + (l - x0) / (x1 - x0) * plot_w; };
    auto py = [&](double v) { return margin_t + (vmax - v) / (vmax - vmin) * plot_h; };

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
       << height << "\">\n";
    os << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    if (vmin < 0.0 && vmax > 0.0) {
        os << "<line x1=\"" << margin_l << "\" y1=\"" << detail::svg_num(py(0.0)) << "\" x2=\""
           << (margin_l + plot_w) << "\" y2=\"" << detail::svg_num(py(0.0))
           << "\" stroke=\"#cccccc\"/>\n";
    }
    for (std::size_t c = 0; c < cs.configs.size(); ++c) {
        os << "<polyline fill=\"none\" stroke=\"" << palette[c % 4] << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < cs.lengths.size(); ++i) {
            const auto& v = cs.values[c][i];
            if (!v) continue;
            os << detail::svg_num(px(cs.lengths[i])) << ',' << detail::svg_num(py(*v)) << ' ';
        }
        os << "\"/>\n";
    }
    for (int k = 0; k <= 4; ++k) {
        const double f = static_cast<double>(k) / 4.0;
        os << "<text x=\"" << detail::svg_num(margin_l + f * plot_w) << "\" y=\""
           << (margin_t + plot_h + 18) << "\" font-size=\"11\" text-anchor=\"middle\">"
           << detail::svg_num(x0 + f * (x1 - x0)) << "</text>\n";
        os << "<text x=\"" << (margin_l - 8) << "\" y=\""
           << detail::svg_num(margin_t + plot_h - f * plot_h + 4)
           << "\" font-size=\"11\" text-anchor=\"end\">" << detail::svg_num(vmin + f * (vmax - vmin))
           << "</text>\n";
    }
    os << "<text x=\"" << (margin_l + plot_w / 2) << "\" y=\"" << (height - 8)
       << "\" font-size=\"13\" text-anchor=\"middle\">length</text>\n";
    os << "<text x=\"14\" y=\"" << (margin_t + plot_h / 2)
       << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
       << (margin_t + plot_h / 2) << ")\">visibility</text>\n";
    os << "</svg>\n";
}

}  // namespace ptperm
