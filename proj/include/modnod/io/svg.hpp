#pragma once

#include "modnod/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

namespace modnod::io {

using Projection = std::function<double(const Vector&)>;

struct SvgOptions {
    int width = 800;
    int height = 500;
    std::string y_label = "<x, v_max>";
};

namespace detail {

inline std::string fixed(double v, int digits = 2) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

inline std::string escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

inline const char* event_fill(const BifurcationEvent& e) {
    const auto name = event_name(e);
    if (name == "SupercriticalPitchfork" || name == "Pitchfork") return "#1f4fd8";
    if (name == "SubcriticalPitchfork") return "white";
    if (name == "Transcritical") return "#f28c1b";
    if (name == "SaddleNode") return "#2ca02c";
    return "#888888";
}

inline const char* event_stroke(const BifurcationEvent& e) {
    return event_name(e) == "SubcriticalPitchfork" ? "#1f4fd8" : "none";
}

}  // namespace detail

/// Self-contained bifurcation diagram: thick lines for stable stretches,
/// thin for unstable ones, one circle per event coloured by kind.
inline void write_diagram_svg(std::ostream& os, const std::vector<Branch>& branches, double u_lo,
                              double u_hi, const Projection& project, const SvgOptions& opt = {}) {
    double y_lo = std::numeric_limits<double>::infinity();
    double y_hi = -y_lo;
    for (const auto& br : branches)
        for (const auto& p : br.points) {
            const double y = project(p.x);
            y_lo = std::min(y_lo, y);
            y_hi = std::max(y_hi, y);
        }
    if (!std::isfinite(y_lo)) y_lo = -1, y_hi = 1;
    if (y_hi - y_lo < 1e-9) y_lo -= 1, y_hi += 1;
    const double pad = 0.05 * (y_hi - y_lo);
    y_lo -= pad;
    y_hi += pad;

    const double left = 70, right = 20, top = 20, bottom = 50;
    const double pw = opt.width - left - right, ph = opt.height - top - bottom;
    const auto sx = [&](double u) { return left + (u - u_lo) / (u_hi - u_lo) * pw; };
    const auto sy = [&](double y) { return top + (y_hi - y) / (y_hi - y_lo) * ph; };
    using detail::fixed;

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.width << "\" height=\""
       << opt.height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<g stroke=\"black\" stroke-width=\"1\">\n"
       << "<line x1=\"" << fixed(left) << "\" y1=\"" << fixed(top + ph) << "\" x2=\"" << fixed(left + pw)
       << "\" y2=\"" << fixed(top + ph) << "\"/>\n"
       << "<line x1=\"" << fixed(left) << "\" y1=\"" << fixed(top) << "\" x2=\"" << fixed(left)
       << "\" y2=\"" << fixed(top + ph) << "\"/>\n</g>\n";
    for (int t = 0; t <= 5; ++t) {
        const double u = u_lo + (u_hi - u_lo) * t / 5.0;
        const double y = y_lo + (y_hi - y_lo) * t / 5.0;
        os << "<text x=\"" << fixed(sx(u)) << "\" y=\"" << fixed(top + ph + 18)
           << "\" text-anchor=\"middle\">" << fixed(u, 3) << "</text>\n";
        os << "<text x=\"" << fixed(left - 6) << "\" y=\"" << fixed(sy(y) + 4)
           << "\" text-anchor=\"end\">" << fixed(y, 3) << "</text>\n";
    }
    os << "<text x=\"" << fixed(left + pw / 2) << "\" y=\"" << fixed(opt.height - 8.0)
       << "\" text-anchor=\"middle\">u0</text>\n";
    os << "<text x=\"14\" y=\"" << fixed(top + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
       << fixed(top + ph / 2) << ")\">" << detail::escape(opt.y_label) << "</text>\n";

    for (const auto& br : branches) {
        os << "<g fill=\"none\" stroke=\"black\"><title>" << detail::escape(br.label) << "</title>\n";
        std::size_t i = 0;
        while (i + 1 < br.points.size()) {
            const bool stable = br.points[i].stable && br.points[i + 1].stable;
            std::size_t j = i + 1;
            while (j + 1 < br.points.size() &&
                   (br.points[j].stable && br.points[j + 1].stable) == stable)
                ++j;
            os << "<polyline stroke-width=\"" << (stable ? "2" : "0.75") << "\" points=\"";
            for (std::size_t k = i; k <= j; ++k)
                os << (k == i ? "" : " ") << fixed(sx(br.points[k].u0)) << ',' << fixed(sy(project(br.points[k].x)));
            os << "\"/>\n";
            i = j;
        }
        os << "</g>\n";
    }
    for (const auto& br : branches)
        for (const auto& e : br.events)
            os << "<circle cx=\"" << fixed(sx(e.u0)) << "\" cy=\"" << fixed(sy(project(e.x)))
               << "\" r=\"4\" fill=\"" << detail::event_fill(e) << "\" stroke=\""
               << detail::event_stroke(e) << "\" stroke-width=\"1.5\"><title>" << event_name(e)
               << " u0=" << fixed(e.u0, 6) << "</title></circle>\n";
    os << "</svg>\n";
}

}  // namespace modnod::io
