#pragma once

#include <functional>
#include <optional>

#include "formations/graph.hpp"

namespace formations {

// Total assignment edge id -> color. Color::none entries are representable
// so searches can hold partial states, but every analysis operation below
// rejects non-total or improper inputs explicitly.
struct EdgeColoring {
    std::vector<Color> colors;

    Color at(EdgeId e) const { return colors[e]; }
    void set(EdgeId e, Color c) { colors[e] = c; }
    bool total() const {
        for (Color c : colors)
            if (!is_colored(c)) return false;
        return true;
    }
    auto operator<=>(const EdgeColoring&) const = default;
};

// Unordered pair of distinct colors, normalized so a < b in the fixed order
// r < b < p. The two-color circuits of a pair are its Kempe chains.
struct ColorPair {
    Color a = Color::red;
    Color b = Color::blue;

    ColorPair() = default;
    ColorPair(Color x, Color y) {
        if (x == y || !is_colored(x) || !is_colored(y))
            throw ArgumentError("color pair needs two distinct colors");
        a = std::min(x, y);
        b = std::max(x, y);
    }
    bool contains(Color c) const { return c == a || c == b; }
    // The color a simple operation adds to every edge of an alternating
    // circuit of this pair; also the color such circuits avoid.
    Color swap_color() const { return a * b; }
    auto operator<=>(const ColorPair&) const = default;
};

inline std::vector<ColorPair> all_color_pairs() {
    return {ColorPair(Color::red, Color::blue), ColorPair(Color::red, Color::purple),
            ColorPair(Color::blue, Color::purple)};
}

// Closed dart walk alternating between the two colors of its pair;
// canonical: starts at the smallest contained edge id, oriented toward the
// smaller next edge (dart order breaks exact ties).
struct TwoColorCircuit {
    ColorPair pair;
    std::vector<Dart> walk;

    int length() const { return static_cast<int>(walk.size()); }
    auto operator<=>(const TwoColorCircuit&) const = default;
};

struct ParityReport {
    int delta = 0;
    int parity = 0;
};

namespace detail {

inline void require_cubic(const CubicGraph& g, const char* op) {
    if (!g.cubic()) throw ArgumentError(std::string(op) + " needs a cubic graph");
}

inline void require_total(const CubicGraph& g, const EdgeColoring& c, const char* op) {
    if (static_cast<int>(c.colors.size()) != g.edge_count() || !c.total())
        throw ArgumentError(std::string(op) + " needs a total coloring");
}

// Colors at v, one entry per incident dart (a loop contributes its color
// twice, so it can never look proper).
inline bool vertex_proper(const CubicGraph& g, const EdgeColoring& c, VertexId v) {
    const auto& ds = g.vertices[v].darts;
    Color x = c.at(g.edge_of(ds[0]));
    Color y = c.at(g.edge_of(ds[1]));
    Color z = c.at(g.edge_of(ds[2]));
    return x != y && y != z && x != z;
}

} // namespace detail

inline bool is_proper(const CubicGraph& g, const EdgeColoring& c) {
    detail::require_cubic(g, "is_proper");
    detail::require_total(g, c, "is_proper");
    for (VertexId v = 0; v < g.vertex_count(); ++v)
        if (!detail::vertex_proper(g, c, v)) return false;
    return true;
}

inline void require_proper(const CubicGraph& g, const EdgeColoring& c, const char* op) {
    if (!is_proper(g, c)) throw ArgumentError(std::string(op) + " needs a proper coloring");
}

namespace detail {

// Backtracking enumeration in edge id order with color order r < b < p,
// pruning on partial vertex properness; output order is therefore
// lexicographic. The callback returns false to stop the walk.
inline void for_each_coloring(const CubicGraph& g, const std::function<bool(const EdgeColoring&)>& fn) {
    require_cubic(g, "coloring enumeration");
    const int m = g.edge_count();
    EdgeColoring c;
    c.colors.assign(m, Color::none);

    auto vertex_feasible = [&](VertexId v) {
        const auto& ds = g.vertices[v].darts;
        Color x = c.at(g.edge_of(ds[0]));
        Color y = c.at(g.edge_of(ds[1]));
        Color z = c.at(g.edge_of(ds[2]));
        if (is_colored(x) && x == y) return false;
        if (is_colored(y) && y == z) return false;
        if (is_colored(x) && x == z) return false;
        return true;
    };

    bool stop = false;
    auto rec = [&](auto&& self, EdgeId e) -> void {
        if (stop) return;
        if (e == m) {
            if (!fn(c)) stop = true;
            return;
        }
        for (Color col : {Color::red, Color::blue, Color::purple}) {
            c.set(e, col);
            VertexId u = g.vertex_of(g.edges[e].a);
            VertexId v = g.vertex_of(g.edges[e].b);
            if (vertex_feasible(u) && (u == v || vertex_feasible(v))) self(self, e + 1);
            if (stop) break;
        }
        c.set(e, Color::none);
    };
    rec(rec, 0);
}

} // namespace detail

inline std::vector<EdgeColoring> enumerate_colorings(const CubicGraph& g,
                                                     std::optional<std::size_t> limit = {}) {
    std::vector<EdgeColoring> out;
    detail::for_each_coloring(g, [&](const EdgeColoring& c) {
        out.push_back(c);
        return !limit || out.size() < *limit;
    });
    return out;
}

inline long long count_colorings(const CubicGraph& g) {
    long long n = 0;
    detail::for_each_coloring(g, [&](const EdgeColoring&) {
        ++n;
        return true;
    });
    return n;
}

namespace detail {

// Rotate the cycle to its smallest edge, compare both orientations by edge
// sequence then dart sequence, keep the smaller.
inline std::vector<Dart> canonical_cycle(const CubicGraph& g, std::vector<Dart> walk) {
    auto rotate_to_min_edge = [&](std::vector<Dart> w) {
        auto best = w.begin();
        for (auto it = w.begin(); it != w.end(); ++it)
            if (g.edge_of(*it) < g.edge_of(*best)) best = it;
        std::rotate(w.begin(), best, w.end());
        return w;
    };
    std::vector<Dart> back(walk.size());
    for (std::size_t i = 0; i < walk.size(); ++i) back[i] = g.mate(walk[walk.size() - 1 - i]);
    std::vector<Dart> fw = rotate_to_min_edge(std::move(walk));
    std::vector<Dart> bw = rotate_to_min_edge(std::move(back));
    auto key = [&](const std::vector<Dart>& w) {
        std::vector<std::int64_t> k;
        k.reserve(2 * w.size());
        for (Dart d : w) k.push_back(g.edge_of(d));
        for (Dart d : w) k.push_back(d);
        return k;
    };
    return key(fw) <= key(bw) ? fw : bw;
}

} // namespace detail

// The pair-colored edges of a proper coloring form a 2-regular subgraph;
// its components are the alternating circuits, returned in canonical form
// ordered by smallest contained edge.
inline std::vector<TwoColorCircuit> two_color_circuits(const CubicGraph& g, const EdgeColoring& c,
                                                       ColorPair pair) {
    require_proper(g, c, "two_color_circuits");
    std::vector<TwoColorCircuit> out;
    std::vector<char> seen(g.edge_count(), 0);
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
        if (seen[e] || !pair.contains(c.at(e))) continue;
        std::vector<Dart> walk;
        Dart d = g.edges[e].a;
        do {
            seen[g.edge_of(d)] = 1;
            walk.push_back(d);
            Dart in = g.mate(d);
            Dart next = kNoDart;
            for (Dart x : g.vertices[g.vertex_of(in)].darts)
                if (x != in && pair.contains(c.at(g.edge_of(x)))) next = x;
            d = next;
        } while (g.edge_of(d) != e);
        TwoColorCircuit circ;
        circ.pair = pair;
        circ.walk = detail::canonical_cycle(g, std::move(walk));
        out.push_back(std::move(circ));
    }
    std::sort(out.begin(), out.end(), [&](const TwoColorCircuit& x, const TwoColorCircuit& y) {
        return g.edge_of(x.walk[0]) < g.edge_of(y.walk[0]);
    });
    return out;
}

inline ParityReport delta_and_parity(const CubicGraph& g, const EdgeColoring& c) {
    require_proper(g, c, "delta_and_parity");
    ParityReport r;
    for (ColorPair pair : all_color_pairs())
        r.delta += static_cast<int>(two_color_circuits(g, c, pair).size());
    r.parity = r.delta % 2;
    return r;
}

// Kempe swap: interchange the pair's two colors along one alternating
// circuit. Involution; properness is preserved because the circuit owns
// both pair-colored edges at each vertex it meets.
inline EdgeColoring simple_operation(const CubicGraph& g, const EdgeColoring& c,
                                     const TwoColorCircuit& circuit) {
    require_proper(g, c, "simple_operation");
    if (circuit.walk.empty()) throw ArgumentError("simple_operation needs a nonempty circuit");
    std::vector<char> used(g.edge_count(), 0);
    const auto& w = circuit.walk;
    for (std::size_t i = 0; i < w.size(); ++i) {
        EdgeId e = g.edge_of(w[i]);
        if (used[e]) throw ArgumentError("circuit repeats an edge");
        used[e] = 1;
        if (!circuit.pair.contains(c.at(e)))
            throw ArgumentError("circuit not alternating under the coloring");
        Dart nxt = w[(i + 1) % w.size()];
        if (g.vertex_of(nxt) != g.vertex_of(g.mate(w[i])))
            throw ArgumentError("circuit walk is not connected");
        if (c.at(g.edge_of(nxt)) == c.at(e))
            throw ArgumentError("circuit not alternating under the coloring");
    }
    EdgeColoring out = c;
    Color delta = circuit.pair.swap_color();
    for (Dart d : w) out.set(g.edge_of(d), out.at(g.edge_of(d)) * delta);
    return out;
}

// Coloring file format: lines `color <eid> <r|b|p>`, '#' comments, total on
// the edge set.
inline EdgeColoring parse_coloring(const std::string& text, const CubicGraph& g) {
    EdgeColoring c;
    c.colors.assign(g.edge_count(), Color::none);
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string kw;
        if (!(ls >> kw)) continue;
        auto fail = [&](const std::string& msg) -> void {
            throw ParseError("line " + std::to_string(line_no) + ": " + msg);
        };
        if (kw != "color") fail("unknown keyword '" + kw + "'");
        long long e;
        std::string col;
        if (!(ls >> e >> col) || col.size() != 1) fail("expected `color <eid> <r|b|p>`");
        if (e < 0 || e >= g.edge_count()) fail("edge " + std::to_string(e) + " not in the graph");
        if (is_colored(c.at(static_cast<EdgeId>(e))))
            fail("edge " + std::to_string(e) + " colored twice");
        c.set(static_cast<EdgeId>(e), parse_color(col[0]));
    }
    if (!c.total()) throw ParseError("coloring is not total on the edge set");
    return c;
}

inline std::string serialize_coloring(const EdgeColoring& c) {
    std::ostringstream out;
    for (std::size_t e = 0; e < c.colors.size(); ++e)
        out << "color " << e << ' ' << color_char(c.colors[e]) << '\n';
    return out.str();
}

} // namespace formations
