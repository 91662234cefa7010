#pragma once

#include <tuple>

#include "formations/trails.hpp"

namespace formations {

// Transcription of strip drawings: two closed horizontal lines, a tip on
// each joined by the empty edge, and closed curves weaving between them.
// A curve meets a line only along shared contact segments; each contact
// records its line, its horizontal extent, which end the curve enters at,
// and on which side of the line it enters and leaves. Crossing contacts
// switch sides, bouncing ones do not. The top line closes above the whole
// picture and the bottom line below, so a drawing that is planar on paper
// builds a genus-zero map, which the diagnostics of the result verify.
struct StripContact {
    char line = 'T';        // 'T' top or 'B' bottom
    int x_lo = 0, x_hi = 0;  // horizontal extent, x_lo < x_hi
    char enter_end = 'L';   // 'L' or 'R': end where the curve arrives
    char enter_side = 'a';  // 'a' above or 'b' below the line
    char exit_side = 'a';
};

struct StripDiagram {
    int tip_x = 0;           // both tips sit at this x, one per line
    Color line_color = Color::red;
    std::vector<std::vector<StripContact>> chains;  // each chain in curve order
    std::string label;
};

namespace detail {

// Angles order the darts counterclockwise at each strip vertex: east 0,
// north 1, west 2, south 3.
struct StripDartSlot {
    VertexId vertex;
    int angle;
};

} // namespace detail

// Build the cubic map and deficient coloring of a strip diagram. Vertices
// are the two tips then each contact's left and right ends in chain order;
// edges are the empty edge, the line arcs of both lines left to right with
// the closing arc last, the contact segments, and the curve arcs between
// consecutive contacts. Line arcs take the line color, contact segments
// the overlap color, and curve arcs the remaining color: red lines carry
// purple contacts and a blue curve.
inline DeficientFormation build_strip(const StripDiagram& sd) {
    struct Feature {
        int x;
        VertexId vertex;
        int chain = -1, contact = -1;  // -1 for a tip
        bool left_end = false;
    };
    if (sd.chains.empty()) throw ArgumentError("strip needs at least one curve");
    Color arc_color = sd.line_color;
    Color contact_color, curve_color;
    switch (sd.line_color) {
        case Color::red: contact_color = Color::purple, curve_color = Color::blue; break;
        case Color::blue: contact_color = Color::purple, curve_color = Color::red; break;
        case Color::purple: contact_color = Color::blue, curve_color = Color::red; break;
        default: throw ArgumentError("strip lines need a color");
    }

    std::vector<Feature> top{{sd.tip_x, 0}};
    std::vector<Feature> bottom{{sd.tip_x, 1}};
    std::vector<std::vector<std::pair<VertexId, VertexId>>> ends(sd.chains.size());
    VertexId next_vertex = 2;
    for (std::size_t ci = 0; ci < sd.chains.size(); ++ci) {
        if (sd.chains[ci].empty()) throw ArgumentError("strip curve has no contacts");
        for (std::size_t ki = 0; ki < sd.chains[ci].size(); ++ki) {
            const StripContact& k = sd.chains[ci][ki];
            if (k.x_lo >= k.x_hi) throw ArgumentError("strip contact extent is inverted");
            if ((k.line != 'T' && k.line != 'B') || (k.enter_end != 'L' && k.enter_end != 'R') ||
                (k.enter_side != 'a' && k.enter_side != 'b') ||
                (k.exit_side != 'a' && k.exit_side != 'b'))
                throw ArgumentError("strip contact fields out of range");
            VertexId l = next_vertex++, r = next_vertex++;
            auto& line = k.line == 'T' ? top : bottom;
            line.push_back({k.x_lo, l, static_cast<int>(ci), static_cast<int>(ki), true});
            line.push_back({k.x_hi, r, static_cast<int>(ci), static_cast<int>(ki), false});
            ends[ci].push_back({l, r});
        }
    }
    for (auto* line : {&top, &bottom}) {
        std::sort(line->begin(), line->end(),
                  [](const Feature& a, const Feature& b) { return a.x < b.x; });
        for (std::size_t i = 1; i < line->size(); ++i)
            if ((*line)[i].x == (*line)[i - 1].x)
                throw ArgumentError("strip features overlap at x=" +
                                    std::to_string((*line)[i].x));
    }

    // Dart slots per vertex are gathered with angles, then sorted
    // counterclockwise. Every edge contributes its two darts in order.
    std::vector<std::vector<std::pair<int, Dart>>> rotations(next_vertex);
    std::vector<EdgePairing> edges;
    std::vector<Color> colors;
    Dart next_dart = 0;
    auto add_edge = [&](VertexId u, int angle_u, VertexId v, int angle_v, Color c) {
        Dart a = next_dart++, b = next_dart++;
        edges.push_back({static_cast<EdgeId>(edges.size()), a, b});
        rotations[u].push_back({angle_u, a});
        rotations[v].push_back({angle_v, b});
        colors.push_back(c);
        return edges.back().id;
    };
    const int east = 0, north = 90, west = 180, south = 270;

    add_edge(0, south, 1, north, Color::none);  // the empty edge, id 0

    for (auto* line : {&top, &bottom}) {
        const auto& f = *line;
        for (std::size_t i = 0; i < f.size(); ++i) {
            const Feature& here = f[i];
            const Feature& to = f[(i + 1) % f.size()];
            if (here.contact >= 0 && to.contact == here.contact && to.chain == here.chain &&
                here.left_end)
                continue;  // interior of a contact, tied below by its segment
            add_edge(here.vertex, east, to.vertex, west, arc_color);
        }
    }
    for (std::size_t ci = 0; ci < sd.chains.size(); ++ci)
        for (std::size_t ki = 0; ki < sd.chains[ci].size(); ++ki)
            add_edge(ends[ci][ki].first, east, ends[ci][ki].second, west, contact_color);
    for (std::size_t ci = 0; ci < sd.chains.size(); ++ci) {
        const auto& chain = sd.chains[ci];
        for (std::size_t ki = 0; ki < chain.size(); ++ki) {
            const StripContact& from = chain[ki];
            const StripContact& to = chain[(ki + 1) % chain.size()];
            VertexId exit_vertex =
                from.enter_end == 'L' ? ends[ci][ki].second : ends[ci][ki].first;
            std::size_t kj = (ki + 1) % chain.size();
            VertexId enter_vertex = to.enter_end == 'L' ? ends[ci][kj].first : ends[ci][kj].second;
            int exit_angle = from.exit_side == 'a' ? north : south;
            int enter_angle = to.enter_side == 'a' ? north : south;
            add_edge(exit_vertex, exit_angle, enter_vertex, enter_angle, curve_color);
        }
    }

    std::vector<VertexRotation> vertices(next_vertex);
    for (VertexId v = 0; v < next_vertex; ++v) {
        auto& slots = rotations[v];
        if (slots.size() != 3)
            throw ArgumentError("strip vertex " + std::to_string(v) + " has " +
                                std::to_string(slots.size()) + " darts");
        std::sort(slots.begin(), slots.end());
        vertices[v].id = v;
        for (auto& [angle, dart] : slots) vertices[v].darts.push_back(dart);
    }
    DeficientFormation d;
    d.graph = build_graph(std::move(vertices), std::move(edges), sd.label);
    d.empty_edge = 0;
    d.coloring = EdgeColoring{std::move(colors)};
    require_deficient(d, "build_strip");
    return d;
}

// First culprit: one curve crossing the lines six times. Its five-region
// sits between the tips and the leftmost crossing pair.
inline DeficientFormation culprit_one() {
    StripDiagram sd;
    sd.tip_x = 42;
    sd.label = "culprit-one";
    sd.chains = {{
        {'T', 80, 121, 'L', 'a', 'b'},
        {'B', 121, 161, 'L', 'a', 'b'},
        {'B', 282, 322, 'R', 'b', 'a'},
        {'T', 241, 283, 'R', 'b', 'b'},
        {'B', 201, 241, 'R', 'a', 'a'},
        {'T', 200, 222, 'L', 'b', 'a'},
    }};
    return build_strip(sd);
}

// Second culprit: two curves, seventeen contacts. The five-region sits
// between the tips and the first contact pair on each line.
inline DeficientFormation culprit_two() {
    StripDiagram sd;
    sd.tip_x = 21;
    sd.label = "culprit-two";
    sd.chains = {
        {
            {'B', 245, 265, 'L', 'b', 'b'},
            {'B', 125, 142, 'R', 'b', 'a'},
            {'T', 125, 141, 'L', 'b', 'b'},
            {'B', 163, 185, 'L', 'a', 'a'},
            {'T', 163, 185, 'R', 'b', 'a'},
            {'T', 80, 106, 'L', 'a', 'b'},
            {'B', 63, 84, 'R', 'a', 'a'},
            {'T', 42, 63, 'R', 'b', 'a'},
            {'T', 420, 439, 'L', 'a', 'b'},
            {'T', 298, 319, 'R', 'b', 'b'},
            {'B', 294, 297, 'L', 'a', 'b'},
            {'B', 298, 318, 'L', 'b', 'b'},
            {'B', 98, 107, 'L', 'b', 'b'},
        },
        {
            {'T', 204, 231, 'L', 'a', 'b'},
            {'B', 207, 228, 'L', 'a', 'a'},
            {'T', 241, 265, 'R', 'b', 'a'},
            {'T', 366, 382, 'L', 'a', 'a'},
        },
    };
    return build_strip(sd);
}

} // namespace formations
