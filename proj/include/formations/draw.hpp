#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "formations/coloring.hpp"
#include "formations/graph.hpp"

namespace formations {

// Plain neato-style DOT dump; edge strokes follow the coloring when given.
inline std::string to_dot(const CubicGraph& g, const EdgeColoring* c = nullptr) {
    auto stroke = [&](EdgeId e) -> const char* {
        if (!c) return "black";
        switch (c->colors[e]) {
            case Color::red: return "red";
            case Color::blue: return "blue";
            case Color::purple: return "purple";
            default: return "gray";
        }
    };
    std::ostringstream out;
    out << "graph \"" << g.label << "\" {\n  layout=neato;\n  node [shape=point];\n";
    for (const auto& e : g.edges)
        out << "  " << g.vertex_of(e.a) << " -- " << g.vertex_of(e.b)
            << " [color=" << stroke(e.id) << "];\n";
    out << "}\n";
    return out.str();
}

namespace detail {

struct Layout {
    std::vector<double> x, y;
};

// Tutte-style barycentric layout: the face with the most distinct vertices
// is pinned to a convex polygon as the unbounded face and everything else
// relaxes to the average of its neighbors. Faces are traced with the region
// on the right, so the chosen boundary runs counterclockwise when placed
// with increasing angle, which keeps the drawing's chirality equal to the
// rotation system's.
inline Layout plane_layout(const CubicGraph& g) {
    Layout ly;
    int n = g.vertex_count();
    ly.x.assign(n, 0.0);
    ly.y.assign(n, 0.0);
    if (n == 0) return ly;

    FaceSet fs = trace_faces(g);
    std::vector<VertexId> rim;
    for (const auto& face : fs.faces) {
        std::vector<VertexId> distinct;
        for (Dart d : face) {
            VertexId v = g.vertex_of(d);
            if (std::find(distinct.begin(), distinct.end(), v) == distinct.end())
                distinct.push_back(v);
        }
        if (distinct.size() > rim.size()) rim = distinct;
    }

    std::vector<bool> pinned(n, false);
    const double pi = 3.14159265358979323846;
    for (std::size_t i = 0; i < rim.size(); ++i) {
        double ang = 2.0 * pi * static_cast<double>(i) / static_cast<double>(rim.size());
        ly.x[rim[i]] = std::cos(ang);
        ly.y[rim[i]] = std::sin(ang);
        pinned[rim[i]] = true;
    }
    for (int round = 0; round < 600; ++round) {
        for (VertexId v = 0; v < n; ++v) {
            if (pinned[v]) continue;
            double sx = 0, sy = 0;
            int deg = 0;
            for (Dart d : g.vertices[v].darts) {
                VertexId w = g.vertex_of(g.mate(d));
                sx += ly.x[w];
                sy += ly.y[w];
                ++deg;
            }
            if (deg) {
                ly.x[v] = sx / deg;
                ly.y[v] = sy / deg;
            }
        }
    }
    return ly;
}

} // namespace detail

// Self-contained SVG rendering of the map, edges stroked by color (shared
// red/blue segments are exactly the purple strokes). Parallel edges bow
// apart, loops draw as small circles, empty edges dash.
inline std::string to_svg(const CubicGraph& g, const EdgeColoring* c = nullptr) {
    detail::Layout ly = detail::plane_layout(g);
    double lo_x = -1.2, hi_x = 1.2, lo_y = -1.2, hi_y = 1.2;
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        lo_x = std::min(lo_x, ly.x[v] - 0.2);
        hi_x = std::max(hi_x, ly.x[v] + 0.2);
        lo_y = std::min(lo_y, ly.y[v] - 0.2);
        hi_y = std::max(hi_y, ly.y[v] + 0.2);
    }
    const double size = 640.0;
    double scale = size / std::max(hi_x - lo_x, hi_y - lo_y);
    auto px = [&](double x) { return (x - lo_x) * scale; };
    // SVG's y axis points down; flip so the rotation chirality survives.
    auto py = [&](double y) { return (hi_y - y) * scale; };

    auto stroke = [&](EdgeId e) -> std::string {
        if (!c) return "#333333";
        switch (c->colors[e]) {
            case Color::red: return "#cc2222";
            case Color::blue: return "#2244cc";
            case Color::purple: return "#8833aa";
            default: return "#888888";
        }
    };
    auto dash = [&](EdgeId e) {
        return c && c->colors[e] == Color::none ? " stroke-dasharray=\"8 5\"" : "";
    };

    // Group parallel edges so they fan out; key by unordered endpoints.
    std::map<std::pair<VertexId, VertexId>, std::vector<EdgeId>> bundles;
    for (const auto& e : g.edges) {
        VertexId a = g.vertex_of(e.a), b = g.vertex_of(e.b);
        bundles[{std::min(a, b), std::max(a, b)}].push_back(e.id);
    }

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
        << "\" viewBox=\"0 0 " << size << ' ' << size << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<!-- " << g.label << " -->\n";
    for (const auto& [key, ids] : bundles) {
        auto [va, vb] = key;
        if (va == vb) {
            for (std::size_t k = 0; k < ids.size(); ++k) {
                double r = (12.0 + 10.0 * static_cast<double>(k));
                out << "<circle cx=\"" << px(ly.x[va]) + r << "\" cy=\"" << py(ly.y[va])
                    << "\" r=\"" << r << "\" fill=\"none\" stroke=\"" << stroke(ids[k])
                    << "\" stroke-width=\"3\"" << dash(ids[k]) << "/>\n";
            }
            continue;
        }
        double x0 = px(ly.x[va]), y0 = py(ly.y[va]);
        double x1 = px(ly.x[vb]), y1 = py(ly.y[vb]);
        double mx = (x0 + x1) / 2, my = (y0 + y1) / 2;
        double nx = -(y1 - y0), ny = x1 - x0;
        double len = std::hypot(nx, ny);
        if (len > 1e-9) {
            nx /= len;
            ny /= len;
        }
        for (std::size_t k = 0; k < ids.size(); ++k) {
            double t = (static_cast<double>(k) - (static_cast<double>(ids.size()) - 1) / 2) * 44.0;
            out << "<path d=\"M " << x0 << ' ' << y0 << " Q " << mx + nx * t << ' ' << my + ny * t
                << ' ' << x1 << ' ' << y1 << "\" fill=\"none\" stroke=\"" << stroke(ids[k])
                << "\" stroke-width=\"3\"" << dash(ids[k]) << "/>\n";
        }
    }
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        out << "<circle cx=\"" << px(ly.x[v]) << "\" cy=\"" << py(ly.y[v])
            << "\" r=\"5\" fill=\"black\"/>\n";
        out << "<text x=\"" << px(ly.x[v]) + 8 << "\" y=\"" << py(ly.y[v]) - 8
            << "\" font-size=\"14\" font-family=\"sans-serif\">" << v << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

} // namespace formations
