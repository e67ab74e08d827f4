#pragma once

// Figure export: the population path and the envelope strip as SVG, plus CSV
// tables of the underlying lattice data.  Every emitted coordinate is an
// integer (one lattice unit = 8 px), so output bytes are identical across
// runs and platforms.

#include "geometry.hpp"
#include "language.hpp"
#include "substitution.hpp"

#include <algorithm>
#include <sstream>
#include <string>

namespace submix {

inline constexpr int kFigureUnitPx = 8;    // pixels per lattice unit
inline constexpr int kFigureMarginPx = 40;
inline constexpr const char* kFigureBandFill = "#999999";  // 40% ink gray

struct FigureBundle {
    std::string svg;
    std::string path_csv;       // columns j,x,y
    std::string envelopes_csv;  // columns n,ax,ay,bx,by
};

inline std::string render_path_csv(const PopulationPath& path) {
    std::ostringstream out;
    out << "j,x,y\n";
    for (std::size_t j = 0; j < path.points.size(); ++j)
        out << j << ',' << path.points[j].x << ',' << path.points[j].y << '\n';
    return out.str();
}

inline std::string render_envelopes_csv(const ExcessProfile& profile) {
    std::ostringstream out;
    out << "n,ax,ay,bx,by\n";
    out << "0,0,0,0,0\n";
    for (int n = 1; n <= profile.N; ++n) {
        long long a = profile.a_at(n);
        long long b = profile.b_at(n);
        out << n << ',' << a << ',' << (n - a) << ',' << b << ',' << (n - b) << '\n';
    }
    return out.str();
}

inline std::string render_figure_svg(const PopulationPath& path, const ExcessProfile* profile) {
    long long max_x = 1, max_y = 1;
    for (const LatticePoint& p : path.points) {
        max_x = std::max(max_x, p.x);
        max_y = std::max(max_y, p.y);
    }
    if (profile) {
        for (int n = 1; n <= profile->N; ++n) {
            max_x = std::max(max_x, profile->b_at(n));
            max_y = std::max(max_y, static_cast<long long>(n) - profile->a_at(n));
        }
    }
    const long long w = max_x * kFigureUnitPx + 2 * kFigureMarginPx;
    const long long h = max_y * kFigureUnitPx + 2 * kFigureMarginPx;
    auto px = [&](long long x) { return kFigureMarginPx + x * kFigureUnitPx; };
    auto py = [&](long long y) { return kFigureMarginPx + (max_y - y) * kFigureUnitPx; };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << w
        << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << ' ' << h << "\">\n";
    out << "<rect x=\"0\" y=\"0\" width=\"" << w << "\" height=\"" << h << "\" fill=\"#ffffff\"/>\n";

    // Shaded strip between the envelopes (upper path out, lower path back).
    if (profile && profile->N >= 1) {
        out << "<polygon fill=\"" << kFigureBandFill << "\" stroke=\"none\" points=\"";
        out << px(0) << ',' << py(0);
        for (int n = 1; n <= profile->N; ++n) {
            long long a = profile->a_at(n);
            out << ' ' << px(a) << ',' << py(n - a);
        }
        for (int n = profile->N; n >= 1; --n) {
            long long b = profile->b_at(n);
            out << ' ' << px(b) << ',' << py(n - b);
        }
        out << "\"/>\n";
    }

    // Axes in lattice units with ticks every 8 units.
    out << "<g stroke=\"#000000\" stroke-width=\"1\">\n";
    out << "<line x1=\"" << px(0) << "\" y1=\"" << py(0) << "\" x2=\"" << px(max_x) << "\" y2=\""
        << py(0) << "\"/>\n";
    out << "<line x1=\"" << px(0) << "\" y1=\"" << py(0) << "\" x2=\"" << px(0) << "\" y2=\""
        << py(max_y) << "\"/>\n";
    for (long long x = 8; x <= max_x; x += 8)
        out << "<line x1=\"" << px(x) << "\" y1=\"" << py(0) << "\" x2=\"" << px(x) << "\" y2=\""
            << (py(0) + 4) << "\"/>\n";
    for (long long y = 8; y <= max_y; y += 8)
        out << "<line x1=\"" << px(0) << "\" y1=\"" << py(y) << "\" x2=\"" << (px(0) - 4)
            << "\" y2=\"" << py(y) << "\"/>\n";
    out << "</g>\n";

    // The population path, drawn thick.
    if (path.points.size() >= 2) {
        out << "<polyline fill=\"none\" stroke=\"#000000\" stroke-width=\"2\" points=\"";
        for (std::size_t j = 0; j < path.points.size(); ++j) {
            if (j) out << ' ';
            out << px(path.points[j].x) << ',' << py(path.points[j].y);
        }
        out << "\"/>\n";
    }
    out << "</svg>\n";
    return out.str();
}

// Path to horizon J plus the strip from the profile; either part may be
// trivial (J = 0 gives a bare axes frame).
inline FigureBundle export_figure(const Substitution& s, std::size_t J, const ExcessProfile* profile) {
    PopulationPath path = gamma_path(s, J);
    FigureBundle bundle;
    bundle.svg = render_figure_svg(path, profile && profile->N >= 1 ? profile : nullptr);
    bundle.path_csv = render_path_csv(path);
    if (profile && profile->N >= 1) bundle.envelopes_csv = render_envelopes_csv(*profile);
    return bundle;
}

}  // namespace submix
