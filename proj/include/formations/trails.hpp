#pragma once

#include <set>

#include "formations/fixtures.hpp"
#include "formations/formation.hpp"

namespace formations {

// A coloring deficient at exactly one edge: that edge is empty, every other
// edge is colored, vertices away from the empty edge are proper, and the two
// colored edges at each empty-edge endpoint carry the same color. Equal tip
// colors are what idemposition of an open arrow demands: the contextual
// curve runs straight through the tip, so both stretches beside the tip lie
// on it and match.
struct DeficientFormation {
    CubicGraph graph;
    EdgeId empty_edge = -1;
    EdgeColoring coloring;
};

namespace detail {

inline std::pair<VertexId, VertexId> empty_ends(const CubicGraph& g, EdgeId e) {
    return {g.vertex_of(g.edges[e].a), g.vertex_of(g.edges[e].b)};
}

} // namespace detail

inline void require_deficient(const DeficientFormation& d, const char* op = "deficient formation") {
    const CubicGraph& g = d.graph;
    detail::require_cubic(g, op);
    if (d.empty_edge < 0 || d.empty_edge >= g.edge_count())
        throw ArgumentError(std::string(op) + ": empty edge " + std::to_string(d.empty_edge) +
                            " not in the graph");
    if (static_cast<int>(d.coloring.colors.size()) != g.edge_count())
        throw ArgumentError(std::string(op) + ": coloring size mismatch");
    auto [u, v] = detail::empty_ends(g, d.empty_edge);
    if (u == v) throw ArgumentError(std::string(op) + ": empty edge must join two vertices");
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
        bool colored = is_colored(d.coloring.at(e));
        if (e == d.empty_edge ? colored : !colored)
            throw ArgumentError(std::string(op) + ": exactly the empty edge may be uncolored");
    }
    for (VertexId w = 0; w < g.vertex_count(); ++w) {
        if (w == u || w == v) {
            Color seen = Color::none;
            for (Dart x : g.vertices[w].darts) {
                if (g.edge_of(x) == d.empty_edge) continue;
                Color c = d.coloring.at(g.edge_of(x));
                if (seen != Color::none && c != seen)
                    throw ArgumentError(std::string(op) + ": endpoint colors differ at vertex " +
                                        std::to_string(w));
                seen = c;
            }
        } else if (!detail::vertex_proper(g, d.coloring, w)) {
            throw ArgumentError(std::string(op) + ": vertex " + std::to_string(w) +
                                " is not proper");
        }
    }
}

// Shared color of the two colored darts at an empty-edge endpoint.
inline Color tip_color(const DeficientFormation& d, VertexId w) {
    for (Dart x : d.graph.vertices[w].darts)
        if (d.graph.edge_of(x) != d.empty_edge) return d.coloring.at(d.graph.edge_of(x));
    throw ArgumentError("tip_color: vertex has only empty darts");
}

// Two-color circuits of a deficient coloring. Same walk rule as the proper
// tracer; at a tip whose color lies in the pair the circuit passes straight
// through (both colored darts match, the empty dart never does), so the
// pair subgraph stays 2-regular and the walk closes. Circuits through a tip
// are not alternating there; the deficient operation below tolerates that.
inline std::vector<TwoColorCircuit> deficient_circuits(const DeficientFormation& d,
                                                       ColorPair pair) {
    require_deficient(d, "deficient_circuits");
    const CubicGraph& g = d.graph;
    const EdgeColoring& c = d.coloring;
    std::vector<TwoColorCircuit> out;
    std::vector<char> seen(g.edge_count(), 0);
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
        if (seen[e] || !pair.contains(c.at(e))) continue;
        std::vector<Dart> walk;
        Dart d0 = g.edges[e].a;
        do {
            seen[g.edge_of(d0)] = 1;
            walk.push_back(d0);
            Dart in = g.mate(d0);
            Dart next = kNoDart;
            for (Dart x : g.vertices[g.vertex_of(in)].darts)
                if (x != in && pair.contains(c.at(g.edge_of(x)))) next = x;
            if (next == kNoDart) throw ArgumentError("deficient_circuits: pair subgraph dead end");
            d0 = next;
        } while (g.edge_of(d0) != e);
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

// Kempe swap on a deficient coloring. A circuit through a tip flips both
// tip stretches by the same delta, so tip colors stay equal and the result
// is again deficient at the same edge.
inline DeficientFormation deficient_operation(const DeficientFormation& d,
                                              const TwoColorCircuit& circuit) {
    require_deficient(d, "deficient_operation");
    const CubicGraph& g = d.graph;
    if (circuit.walk.empty()) throw ArgumentError("deficient_operation needs a nonempty circuit");
    std::vector<char> used(g.edge_count(), 0);
    const auto& w = circuit.walk;
    for (std::size_t i = 0; i < w.size(); ++i) {
        EdgeId e = g.edge_of(w[i]);
        if (used[e]) throw ArgumentError("circuit repeats an edge");
        used[e] = 1;
        if (!circuit.pair.contains(d.coloring.at(e)))
            throw ArgumentError("circuit does not match the coloring");
        Dart nxt = w[(i + 1) % w.size()];
        if (g.vertex_of(nxt) != g.vertex_of(g.mate(w[i])))
            throw ArgumentError("circuit walk is not connected");
    }
    DeficientFormation out = d;
    Color delta = circuit.pair.swap_color();
    for (Dart x : w) out.coloring.set(g.edge_of(x), out.coloring.at(g.edge_of(x)) * delta);
    require_deficient(out, "deficient_operation result");
    return out;
}

// Suppression of the two empty-edge endpoints: drop the empty edge, splice
// each endpoint's two colored darts together, and merge the resulting chains
// into single edges. Equal tip colors make every chain monochromatic, and a
// valid deficiency leaves the reduced coloring proper. Chains that close
// without meeting a kept vertex become free loops.
struct ReducedTrail {
    CubicGraph graph;
    EdgeColoring coloring;
    std::vector<Color> loop_colors;
    // Reduced edge built over each endpoint of the empty edge (dart a end
    // first), -1 when that endpoint was absorbed into a free loop.
    EdgeId through_a = -1;
    EdgeId through_b = -1;
    // Reduced edge id -> the original edges it merged, in walk order.
    std::vector<std::vector<EdgeId>> lifts;
};

inline ReducedTrail reduce_trail(const DeficientFormation& d) {
    require_deficient(d, "reduce_trail");
    const CubicGraph& g = d.graph;
    auto [u, v] = detail::empty_ends(g, d.empty_edge);
    std::vector<Dart> link(g.dart_count(), kNoDart);
    for (VertexId w : {u, v}) {
        Dart t0 = kNoDart, t1 = kNoDart;
        for (Dart x : g.vertices[w].darts) {
            if (g.edge_of(x) == d.empty_edge) continue;
            (t0 == kNoDart ? t0 : t1) = x;
        }
        link[t0] = t1;
        link[t1] = t0;
    }
    auto kept = [&](Dart x) { return g.vertex_of(x) != u && g.vertex_of(x) != v; };

    struct Chain {
        std::vector<EdgeId> edges;
        Dart head = kNoDart, tail = kNoDart;
        bool through_u = false, through_v = false;
    };
    std::vector<Chain> chains;
    std::vector<char> seen(g.dart_count(), 0);
    for (Dart a = 0; a < g.dart_count(); ++a) {
        if (seen[a] || !kept(a)) continue;
        Chain ch;
        ch.head = a;
        Dart x = a;
        for (;;) {
            seen[x] = seen[g.mate(x)] = 1;
            ch.edges.push_back(g.edge_of(x));
            Dart m = g.mate(x);
            if (kept(m)) {
                ch.tail = m;
                break;
            }
            (g.vertex_of(m) == u ? ch.through_u : ch.through_v) = true;
            x = link[m];
        }
        chains.push_back(std::move(ch));
    }
    std::sort(chains.begin(), chains.end(), [](const Chain& x, const Chain& y) {
        return *std::min_element(x.edges.begin(), x.edges.end()) <
               *std::min_element(y.edges.begin(), y.edges.end());
    });

    ReducedTrail out;
    // Free loops: colored darts at the suppressed vertices no chain reached.
    for (Dart d0 = 0; d0 < g.dart_count(); ++d0) {
        if (seen[d0] || kept(d0) || g.edge_of(d0) == d.empty_edge) continue;
        Dart x = d0;
        do {
            seen[x] = seen[g.mate(x)] = 1;
            x = link[g.mate(x)];
        } while (x != d0);
        out.loop_colors.push_back(d.coloring.at(g.edge_of(d0)));
    }

    std::vector<VertexId> new_id(g.vertex_count(), -1);
    std::vector<VertexRotation> vs;
    for (VertexId w = 0; w < g.vertex_count(); ++w) {
        if (w == u || w == v) continue;
        new_id[w] = static_cast<VertexId>(vs.size());
        vs.push_back({new_id[w], {}});
    }
    std::vector<Dart> dart_map(g.dart_count(), kNoDart);
    std::vector<EdgePairing> es;
    for (std::size_t k = 0; k < chains.size(); ++k) {
        const Chain& ch = chains[k];
        EdgeId ne = static_cast<EdgeId>(k);
        dart_map[ch.head] = 2 * ne;
        dart_map[ch.tail] = 2 * ne + 1;
        es.push_back({ne, 2 * ne, 2 * ne + 1});
        out.coloring.colors.push_back(d.coloring.at(ch.edges.front()));
        out.lifts.push_back(ch.edges);
        if (ch.through_u) out.through_a = ne;
        if (ch.through_v) out.through_b = ne;
    }
    for (VertexId w = 0; w < g.vertex_count(); ++w) {
        if (new_id[w] < 0) continue;
        for (Dart x : g.vertices[w].darts) vs[new_id[w]].darts.push_back(dart_map[x]);
    }
    out.graph = build_graph(std::move(vs), std::move(es), g.label + "-reduced");
    return out;
}

// A trail: a deficient formation read as trail curves running between the
// two contextual curves that pass through the empty edge's endpoints.
struct Trail {
    DeficientFormation deficient;
};

inline Trail make_trail(DeficientFormation d) {
    require_deficient(d, "make_trail");
    return {std::move(d)};
}

// The two graphs a trail determines: G(T) is the reduced graph after
// suppressing the empty edge, G*(T) keeps the empty edge as a structural
// edge (so it is the original graph itself).
inline std::pair<CubicGraph, CubicGraph> trail_graphs(const Trail& t) {
    return {reduce_trail(t.deficient).graph, t.deficient.graph};
}

// Curves of the reduced formation plus the free loops: a purple loop is a
// red curve and a blue curve traveling together, any other loop is one
// curve.
inline int curve_count(const DeficientFormation& d) {
    ReducedTrail r = reduce_trail(d);
    int n = curve_counts(r.graph, r.coloring).total();
    for (Color c : r.loop_colors) n += c == Color::purple ? 2 : 1;
    return n;
}

struct FactorizationReport {
    bool factored = false;
    // Unequal tips: a curve of the deficient formation avoiding both
    // endpoints.
    std::optional<Curve> witness;
    // Equal tips: components of the trail after removing the contextual
    // curves; two or more factor the trail.
    int component_count = 0;
};

// Factored means the trail splits into parts exchangeable independently.
// With unequal tip colors the empty edge's ends sit on distinct curves, and
// any curve meeting neither endpoint is a separable piece. With equal tips
// the contextual curves are removed instead and the leftover trail structure
// must fall into at least two connected pieces. Removing a contextual curve
// of color c strips c from every edge on its footprint circuit, the {c,p}
// circuit through the tip; purple contextual curves use the {p,b} circuit,
// reading the covered stretches as blue, the same normalization a global
// red/blue swap makes available.
inline FactorizationReport is_factored(const DeficientFormation& d) {
    require_deficient(d, "is_factored");
    const CubicGraph& g = d.graph;
    auto [u, v] = detail::empty_ends(g, d.empty_edge);
    Color cu = tip_color(d, u), cv = tip_color(d, v);
    FactorizationReport rep;
    if (cu != cv) {
        for (CurveKind kind : {CurveKind::red, CurveKind::blue, CurveKind::alternating}) {
            for (auto& circ : deficient_circuits(d, kind_pair(kind))) {
                Curve curve{kind, std::move(circ.walk)};
                if (!curve.touches_vertex(g, u) && !curve.touches_vertex(g, v)) {
                    rep.factored = true;
                    rep.witness = std::move(curve);
                    return rep;
                }
            }
        }
        return rep;
    }
    ColorPair footprint = cu == Color::purple ? ColorPair(Color::purple, Color::blue)
                                              : ColorPair(cu, Color::purple);
    std::vector<TwoColorCircuit> circuits = deficient_circuits(d, footprint);
    std::vector<const TwoColorCircuit*> contextual;
    for (VertexId w : {u, v}) {
        for (const TwoColorCircuit& circ : circuits) {
            bool touches = false;
            for (Dart x : circ.walk)
                touches |= g.vertex_of(x) == w || g.vertex_of(g.mate(x)) == w;
            if (!touches) continue;
            if (std::find(contextual.begin(), contextual.end(), &circ) == contextual.end())
                contextual.push_back(&circ);
            break;
        }
    }
    EdgeColoring residue = d.coloring;
    for (const TwoColorCircuit* circ : contextual)
        for (Dart x : circ->walk) residue.set(g.edge_of(x), residue.at(g.edge_of(x)) * cu);

    std::vector<int> parent(g.vertex_count());
    for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (EdgeId e = 0; e < g.edge_count(); ++e)
        if (is_colored(residue.at(e)))
            parent[find(g.vertex_of(g.edges[e].a))] = find(g.vertex_of(g.edges[e].b));
    std::set<int> roots;
    for (EdgeId e = 0; e < g.edge_count(); ++e)
        if (is_colored(residue.at(e))) roots.insert(find(g.vertex_of(g.edges[e].a)));
    rep.component_count = static_cast<int>(roots.size());
    rep.factored = rep.component_count >= 2;
    return rep;
}

struct PrimalityResult {
    bool prime = true;
    std::optional<DeficientFormation> witness;
    long long colorings_tried = 0;
};

// Sweep every proper coloring of G(T) in canonical order, pull each back
// through the merged-edge lifts (loop-absorbed edges keep the given trail's
// colors), and report the first factored pullback. Prime means none is.
inline PrimalityResult primality_search(const Trail& t, int max_edges = 16) {
    ReducedTrail r = reduce_trail(t.deficient);
    if (r.graph.edge_count() > max_edges)
        throw ResourceError("primality_search: reduced graph has " +
                            std::to_string(r.graph.edge_count()) + " edges, bound is " +
                            std::to_string(max_edges));
    PrimalityResult res;
    detail::for_each_coloring(r.graph, [&](const EdgeColoring& cr) {
        ++res.colorings_tried;
        DeficientFormation cand = t.deficient;
        for (std::size_t k = 0; k < r.lifts.size(); ++k)
            for (EdgeId e : r.lifts[k]) cand.coloring.set(e, cr.at(static_cast<EdgeId>(k)));
        if (is_factored(cand).factored) {
            res.prime = false;
            res.witness = std::move(cand);
            return false;
        }
        return true;
    });
    return res;
}

// Deficient coloring file: `color <eid> <r|b|p>` lines for the colored
// edges plus one `empty <eid>` line.
inline DeficientFormation parse_deficient(const std::string& text, const CubicGraph& g) {
    DeficientFormation d;
    d.graph = g;
    d.coloring.colors.assign(g.edge_count(), Color::none);
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
        long long e;
        if (kw == "empty") {
            if (!(ls >> e)) fail("expected `empty <eid>`");
            if (e < 0 || e >= g.edge_count()) fail("edge " + std::to_string(e) + " not in the graph");
            if (d.empty_edge >= 0) fail("empty edge declared twice");
            d.empty_edge = static_cast<EdgeId>(e);
        } else if (kw == "color") {
            std::string col;
            if (!(ls >> e >> col) || col.size() != 1) fail("expected `color <eid> <r|b|p>`");
            if (e < 0 || e >= g.edge_count()) fail("edge " + std::to_string(e) + " not in the graph");
            if (is_colored(d.coloring.at(static_cast<EdgeId>(e))))
                fail("edge " + std::to_string(e) + " colored twice");
            d.coloring.set(static_cast<EdgeId>(e), parse_color(col[0]));
        } else {
            fail("unknown keyword '" + kw + "'");
        }
    }
    if (d.empty_edge < 0) throw ParseError("no `empty <eid>` line");
    require_deficient(d, "parse_deficient");
    return d;
}

inline std::string serialize_deficient(const DeficientFormation& d) {
    std::ostringstream out;
    for (std::size_t e = 0; e < d.coloring.colors.size(); ++e)
        if (is_colored(d.coloring.colors[e]))
            out << "color " << e << ' ' << color_char(d.coloring.colors[e]) << '\n';
    out << "empty " << d.empty_edge << '\n';
    return out.str();
}

// Theta with one empty edge and the survivors purple: the degenerate trail
// whose reduction is a single purple free loop, two curves total.
inline DeficientFormation theta_trail() {
    DeficientFormation d;
    d.graph = theta_graph();
    d.empty_edge = 0;
    d.coloring.colors = {Color::none, Color::purple, Color::purple};
    return d;
}

// A red ring crossing two disjoint blue curves, with the empty edge running
// between the blue curves left of the ring. Bottom blue curve E_b,A1..A4,
// top blue curve E_t,B1..B4; the ring crosses each blue curve twice, and
// every shared segment is a transversal crossing. Completable: swapping the
// two-color path E_b-A1-B1-E_t and coloring the empty edge purple extends
// it. Operating on the top blue contextual curve isolates the red digon
// between B2 and B3 from both endpoints, so the trail factors.
inline DeficientFormation ring_trail() {
    std::vector<VertexRotation> vs = {
        {0, {0, 28, 5}},   // E_b
        {1, {6, 10, 1}},   // A1
        {2, {2, 7, 12}},   // A2
        {3, {8, 3, 13}},   // A3
        {4, {4, 14, 9}},   // A4
        {5, {18, 27, 29}}, // E_t
        {6, {20, 19, 11}}, // B1
        {7, {22, 16, 21}}, // B2
        {8, {24, 17, 23}}, // B3
        {9, {26, 25, 15}}, // B4
    };
    std::vector<EdgePairing> es = {
        {0, 0, 1},   {1, 2, 3},   {2, 4, 5},   {3, 6, 7},   {4, 8, 9},
        {5, 10, 11}, {6, 12, 13}, {7, 14, 15}, {8, 16, 17}, {9, 18, 19},
        {10, 20, 21}, {11, 22, 23}, {12, 24, 25}, {13, 26, 27}, {14, 28, 29},
    };
    DeficientFormation d;
    d.graph = build_graph(std::move(vs), std::move(es), "ring-trail");
    d.empty_edge = 14;
    d.coloring.colors = {Color::blue,   Color::blue, Color::blue,   Color::purple, Color::purple,
                         Color::red,    Color::red,  Color::red,    Color::red,    Color::blue,
                         Color::purple, Color::blue, Color::purple, Color::blue,   Color::none};
    return d;
}

// The Petersen graph with outer edge 0 empty. The coloring is the first
// deficient coloring in canonical edge order whose contextual curves are
// both blue; the reduced formation has one red, two blue, and two
// alternating curves, and no coloring of the reduced graph pulls back to a
// factored or completable deficiency.
inline DeficientFormation petersen_trail() {
    DeficientFormation d;
    d.graph = petersen_graph();
    d.empty_edge = 0;
    d.coloring.colors = {Color::none, Color::blue,   Color::red,    Color::purple, Color::blue,
                         Color::blue, Color::blue,   Color::purple, Color::blue,   Color::red,
                         Color::red,  Color::red,    Color::blue,   Color::purple, Color::purple};
    return d;
}

// The Petersen trail with blue and purple interchanged: both contextual
// curves become purple, and removing them leaves the trail's red curve as
// one connected residue, so the trail does not factor. Exercises the
// purple-contextual removal reading recorded at is_factored.
inline DeficientFormation purple_contexts_trail() {
    DeficientFormation d = petersen_trail();
    for (Color& c : d.coloring.colors) {
        if (c == Color::blue) c = Color::purple;
        else if (c == Color::purple) c = Color::blue;
    }
    return d;
}

} // namespace formations
