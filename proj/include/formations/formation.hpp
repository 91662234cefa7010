#pragma once

#include <map>
#include <utility>

#include "formations/coloring.hpp"

namespace formations {

// A formation's curves: red curves are the {r,p} circuits of the coloring,
// blue curves the {b,p} circuits; alternating curves ({r,b}) are derived on
// demand and never stored in a Formation.
enum class CurveKind : std::uint8_t { red, blue, alternating };

inline ColorPair kind_pair(CurveKind k) {
    switch (k) {
    case CurveKind::red: return ColorPair(Color::red, Color::purple);
    case CurveKind::blue: return ColorPair(Color::blue, Color::purple);
    default: return ColorPair(Color::red, Color::blue);
    }
}

inline const char* kind_name(CurveKind k) {
    switch (k) {
    case CurveKind::red: return "red";
    case CurveKind::blue: return "blue";
    default: return "alternating";
    }
}

struct Curve {
    CurveKind kind = CurveKind::red;
    std::vector<Dart> walk;

    bool contains_edge(const CubicGraph& g, EdgeId e) const {
        for (Dart d : walk)
            if (g.edge_of(d) == e) return true;
        return false;
    }
    bool touches_vertex(const CubicGraph& g, VertexId v) const {
        for (Dart d : walk)
            if (g.vertex_of(d) == v || g.vertex_of(g.mate(d)) == v) return true;
        return false;
    }
    auto operator<=>(const Curve&) const = default;
};

struct Formation {
    CubicGraph graph;
    EdgeColoring coloring;
    std::vector<Curve> curves;

    int red_count() const {
        int n = 0;
        for (const auto& c : curves) n += c.kind == CurveKind::red;
        return n;
    }
    int blue_count() const { return static_cast<int>(curves.size()) - red_count(); }
};

enum class SegmentKind : std::uint8_t { cross, bounce };

struct SegmentClass {
    std::map<EdgeId, SegmentKind> kinds;

    int cross_count() const {
        int n = 0;
        for (const auto& [e, k] : kinds) n += k == SegmentKind::cross;
        return n;
    }
};

struct CurveCounts {
    int red = 0;
    int blue = 0;
    int alternating = 0;

    int total() const { return red + blue + alternating; }
    auto operator<=>(const CurveCounts&) const = default;
};

// Crossing and bounce tallies of one same-colored curve pair, measured along
// a traversal of the first curve. The lemma value (|L|-|R|)/2 + |B| mod 2 is
// invariant under either curve's orientation and predicts the parity of the
// idemposed curve count.
struct InteractionCounts {
    int left = 0;
    int right = 0;
    int bounce = 0;

    int p_value() const {
        int half = (left - right) / 2;
        return ((half + bounce) % 2 + 2) % 2;
    }
};

inline std::vector<Curve> curves_of_kind(const CubicGraph& g, const EdgeColoring& c, CurveKind kind) {
    std::vector<Curve> out;
    for (auto& circ : two_color_circuits(g, c, kind_pair(kind)))
        out.push_back(Curve{kind, std::move(circ.walk)});
    return out;
}

inline Formation coloring_to_formation(const CubicGraph& g, const EdgeColoring& c) {
    require_proper(g, c, "coloring_to_formation");
    Formation f;
    f.graph = g;
    f.coloring = c;
    for (const auto& cv : curves_of_kind(g, c, CurveKind::red)) f.curves.push_back(cv);
    for (const auto& cv : curves_of_kind(g, c, CurveKind::blue)) f.curves.push_back(cv);
    return f;
}

// Rebuild the coloring from the curves alone: an edge on one red curve and
// one blue curve is purple, red-only red, blue-only blue. Rejects formations
// where same-colored curves overlap or an edge is uncovered.
inline std::pair<CubicGraph, EdgeColoring> formation_to_coloring(const Formation& f) {
    const CubicGraph& g = f.graph;
    std::vector<int> red_cover(g.edge_count(), 0), blue_cover(g.edge_count(), 0);
    for (const auto& cv : f.curves) {
        if (cv.kind == CurveKind::alternating)
            throw ArgumentError("formations store red and blue curves only");
        for (Dart d : cv.walk)
            ++(cv.kind == CurveKind::red ? red_cover : blue_cover)[g.edge_of(d)];
    }
    EdgeColoring c;
    c.colors.assign(g.edge_count(), Color::none);
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
        if (red_cover[e] > 1 || blue_cover[e] > 1)
            throw ArgumentError("two same-colored curves share edge " + std::to_string(e));
        if (red_cover[e] == 0 && blue_cover[e] == 0)
            throw ArgumentError("edge " + std::to_string(e) + " lies on no curve");
        c.set(e, red_cover[e] && blue_cover[e] ? Color::purple
                                               : (red_cover[e] ? Color::red : Color::blue));
    }
    return {g, c};
}

inline CurveCounts curve_counts(const CubicGraph& g, const EdgeColoring& c) {
    require_proper(g, c, "curve_counts");
    CurveCounts n;
    n.red = static_cast<int>(two_color_circuits(g, c, kind_pair(CurveKind::red)).size());
    n.blue = static_cast<int>(two_color_circuits(g, c, kind_pair(CurveKind::blue)).size());
    n.alternating =
        static_cast<int>(two_color_circuits(g, c, kind_pair(CurveKind::alternating)).size());
    return n;
}

// Cross/bounce of each purple edge. Orient the edge along dart d (at u,
// mate d2 at v): the red and blue strands sharing the segment separate at
// both ends, and "red leaves to the rotation successor" read at u and at v
// agrees exactly when the strands swap sides inside, i.e. cross. Requires a
// genus 0 rotation; on higher genus left/right of a traversal is not
// globally meaningful.
inline SegmentClass classify_purple_edges(const CubicGraph& g, const EdgeColoring& c) {
    require_proper(g, c, "classify_purple_edges");
    if (trace_faces(g).genus != 0)
        throw UnsupportedError("classify_purple_edges needs a genus 0 embedding");
    SegmentClass out;
    auto colored_dart = [&](VertexId v, Color col) {
        for (Dart x : g.vertices[v].darts)
            if (c.at(g.edge_of(x)) == col) return x;
        throw ArgumentError("vertex misses a color");
    };
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
        if (c.at(e) != Color::purple) continue;
        Dart d = g.edges[e].a;
        Dart d2 = g.edges[e].b;
        VertexId u = g.vertex_of(d), v = g.vertex_of(d2);
        bool red_succ_u = colored_dart(u, Color::red) == g.next(d);
        bool red_succ_v = colored_dart(v, Color::red) == g.next(d2);
        out.kinds[e] = (red_succ_u == red_succ_v) ? SegmentKind::cross : SegmentKind::bounce;
    }
    return out;
}

struct IdemposeResult {
    std::vector<Curve> curves;
    InteractionCounts counts;
};

// Mod-2 superposition of two same-colored curves: shared segments cancel
// and at each junction one curve's strand rejoins the other's. The counts
// classify every shared segment (via plane_data) and, for crossings, the
// side of the first curve from which the second arrives.
inline IdemposeResult idempose(const CubicGraph& g, const Curve& a, const Curve& b,
                               const SegmentClass& plane_data) {
    if (a.kind != b.kind) throw ArgumentError("idempose needs two same-colored curves");
    const std::vector<Dart>* walks[2] = {&a.walk, &b.walk};

    // edge -> walk index holding it, per curve
    std::map<EdgeId, int> pos_a, pos_b;
    for (int i = 0; i < static_cast<int>(a.walk.size()); ++i) pos_a[g.edge_of(a.walk[i])] = i;
    for (int i = 0; i < static_cast<int>(b.walk.size()); ++i) pos_b[g.edge_of(b.walk[i])] = i;
    auto shared = [&](EdgeId e) { return pos_a.count(e) && pos_b.count(e); };

    IdemposeResult res;
    for (const auto& [e, ia] : pos_a) {
        if (!pos_b.count(e)) continue;
        auto it = plane_data.kinds.find(e);
        if (it == plane_data.kinds.end())
            throw ArgumentError("shared segment " + std::to_string(e) + " is unclassified");
        if (it->second == SegmentKind::bounce) {
            ++res.counts.bounce;
            continue;
        }
        // Handedness: a walker traversing the first curve's dart d over e
        // first meets the second curve where the segment begins, at d's own
        // vertex u. The second curve's strand at u is the non-shared dart it
        // uses there; with counterclockwise rotations the walker leaving u
        // along d has the rotation successor of d on its left.
        Dart d = a.walk[ia];
        int ib = pos_b[e];
        Dart q = b.walk[ib];
        int nb = static_cast<int>(b.walk.size());
        Dart strand = q == d ? g.mate(b.walk[(ib + nb - 1) % nb])
                             : b.walk[(ib + 1) % nb];
        bool from_left = strand == g.next(d);
        ++(from_left ? res.counts.left : res.counts.right);
    }

    // Walk the rewired successor structure. A directed position (w, i, dir)
    // is about to traverse walk w's dart at index i (its mate when dir is
    // backward). Hitting a shared edge hops to the other curve's strand at
    // the junction, leaving the junction along that strand.
    struct Pos {
        int w;
        int i;
        bool fwd;
        bool operator==(const Pos&) const = default;
    };
    auto edge_at = [&](int w, int i) { return g.edge_of((*walks[w])[i]); };
    auto advance = [&](Pos p) -> Pos {
        const auto& wk = *walks[p.w];
        const int n = static_cast<int>(wk.size());
        Dart traversed = p.fwd ? wk[p.i] : g.mate(wk[p.i]);
        VertexId arrive = g.vertex_of(g.mate(traversed));
        int j = p.fwd ? (p.i + 1) % n : (p.i + n - 1) % n;
        if (!shared(edge_at(p.w, j))) return {p.w, j, p.fwd};
        // Junction: continue on the other curve, away from `arrive`.
        int ow = 1 - p.w;
        const auto& owk = *walks[ow];
        const int on = static_cast<int>(owk.size());
        EdgeId se = edge_at(p.w, j);
        int k = (ow == 0 ? pos_a : pos_b)[se];
        Dart oq = owk[k];
        if (g.vertex_of(oq) == arrive) {
            // Other curve leaves the junction over the shared edge; its
            // strand into the junction is the previous dart: walk backward.
            int kp = (k + on - 1) % on;
            if (shared(edge_at(ow, kp)))
                throw ArgumentError("adjacent shared segments are not supported");
            return {ow, kp, false};
        }
        // Other curve arrives at the junction over the shared edge; its
        // strand away is the next dart: walk forward.
        int kn = (k + 1) % on;
        if (shared(edge_at(ow, kn)))
            throw ArgumentError("adjacent shared segments are not supported");
        return {ow, kn, true};
    };

    std::vector<std::vector<char>> seen(2);
    seen[0].assign(a.walk.size(), 0);
    seen[1].assign(b.walk.size(), 0);
    for (int w = 0; w < 2; ++w) {
        for (int i = 0; i < static_cast<int>(walks[w]->size()); ++i) {
            if (seen[w][i] || shared(edge_at(w, i))) continue;
            std::vector<Dart> out_walk;
            Pos start{w, i, true};
            Pos p = start;
            do {
                seen[p.w][p.i] = 1;
                out_walk.push_back(p.fwd ? (*walks[p.w])[p.i] : g.mate((*walks[p.w])[p.i]));
                p = advance(p);
            } while (!(p == start));
            Curve cv;
            cv.kind = a.kind;
            cv.walk = detail::canonical_cycle(g, std::move(out_walk));
            res.curves.push_back(std::move(cv));
        }
    }
    std::sort(res.curves.begin(), res.curves.end(),
              [&](const Curve& x, const Curve& y) { return x.walk < y.walk; });
    return res;
}

// Smooth a bounce: delete the purple edge and both endpoints, splicing the
// red strands into one edge and the blue strands into another. The curve
// pair keeps its other interactions; its bounce count drops by one. Returns
// the rebuilt graph and coloring with dense ids.
inline std::pair<CubicGraph, EdgeColoring> smooth_bounce(const CubicGraph& g, const EdgeColoring& c,
                                                         EdgeId e) {
    require_proper(g, c, "smooth_bounce");
    if (c.at(e) != Color::purple) throw ArgumentError("smooth_bounce needs a purple edge");
    Dart d = g.edges[e].a, d2 = g.edges[e].b;
    VertexId u = g.vertex_of(d), v = g.vertex_of(d2);
    if (u == v) throw ArgumentError("smooth_bounce on a loop");
    auto colored_dart = [&](VertexId w, Color col) {
        for (Dart x : g.vertices[w].darts)
            if (c.at(g.edge_of(x)) == col) return x;
        throw ArgumentError("vertex misses a color");
    };
    Dart ru = colored_dart(u, Color::red), rv = colored_dart(v, Color::red);
    Dart bu = colored_dart(u, Color::blue), bv = colored_dart(v, Color::blue);
    if (g.edge_of(ru) == g.edge_of(rv) || g.edge_of(bu) == g.edge_of(bv))
        throw ArgumentError("smooth_bounce would create a free loop");

    // Surviving edges keep their relative order; the two merged strands are
    // appended. Old darts keep identity through a remap table.
    std::vector<EdgePairing> new_edges;
    std::vector<Color> new_colors;
    std::map<Dart, Dart> remap;
    Dart next_dart = 0;
    auto add_edge = [&](Dart x, Dart y, Color col) {
        EdgePairing ne;
        ne.id = static_cast<EdgeId>(new_edges.size());
        ne.a = next_dart++;
        ne.b = next_dart++;
        remap[x] = ne.a;
        remap[y] = ne.b;
        new_edges.push_back(ne);
        new_colors.push_back(col);
    };
    std::set<EdgeId> dropped = {e, g.edge_of(ru), g.edge_of(rv), g.edge_of(bu), g.edge_of(bv)};
    for (const auto& old : g.edges)
        if (!dropped.count(old.id)) add_edge(old.a, old.b, c.at(old.id));
    add_edge(g.mate(ru), g.mate(rv), Color::red);
    add_edge(g.mate(bu), g.mate(bv), Color::blue);

    std::vector<VertexRotation> new_vertices;
    for (const auto& vr : g.vertices) {
        if (vr.id == u || vr.id == v) continue;
        VertexRotation nv;
        nv.id = static_cast<VertexId>(new_vertices.size());
        for (Dart x : vr.darts) nv.darts.push_back(remap.at(x));
        new_vertices.push_back(std::move(nv));
    }
    CubicGraph ng = build_graph(std::move(new_vertices), std::move(new_edges), g.label);
    EdgeColoring nc;
    nc.colors = std::move(new_colors);
    return {std::move(ng), std::move(nc)};
}

// Formation file format: lines `curve <red|blue> <d1> ... <dk>`, '#'
// comments; walks must be closed and consistent on the graph.
inline Formation parse_formation(const std::string& text, const CubicGraph& g) {
    Formation f;
    f.graph = g;
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
        if (kw != "curve") fail("unknown keyword '" + kw + "'");
        std::string kind;
        if (!(ls >> kind) || (kind != "red" && kind != "blue")) fail("curve kind must be red or blue");
        Curve cv;
        cv.kind = kind == "red" ? CurveKind::red : CurveKind::blue;
        long long d;
        while (ls >> d) {
            if (d < 0 || d >= g.dart_count()) fail("dart " + std::to_string(d) + " out of range");
            cv.walk.push_back(static_cast<Dart>(d));
        }
        if (cv.walk.empty()) fail("empty curve");
        for (std::size_t i = 0; i < cv.walk.size(); ++i) {
            Dart here = cv.walk[i];
            Dart there = cv.walk[(i + 1) % cv.walk.size()];
            if (g.vertex_of(there) != g.vertex_of(g.mate(here))) fail("curve walk is not closed");
        }
        f.curves.push_back(std::move(cv));
    }
    f.coloring = formation_to_coloring(f).second;
    return f;
}

inline std::string serialize_formation(const Formation& f) {
    std::ostringstream out;
    for (const auto& cv : f.curves) {
        out << "curve " << kind_name(cv.kind);
        for (Dart d : cv.walk) out << ' ' << d;
        out << '\n';
    }
    return out.str();
}

} // namespace formations
