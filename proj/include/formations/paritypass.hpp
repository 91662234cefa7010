#pragma once

#include <array>
#include <cctype>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "formations/trails.hpp"

namespace formations {

// A two-color path: a path between the empty edge's endpoints alternating
// in exactly two colors, so that swapping the pair along it and giving the
// empty edge the pair's third color extends the deficiency to a proper
// coloring. The completion curve enters each endpoint beside edges of the
// tip color, so the pair must contain both tip colors; a single-edge path
// uses only one color and does not qualify. From a given tip dart the
// alternating continuation is forced at every proper vertex, so at most
// four candidate walks exist; the canonical result is the shortest, ties
// broken by lexicographic edge sequence.
inline std::optional<std::vector<EdgeId>> find_two_color_path(const DeficientFormation& d) {
    require_deficient(d, "find_two_color_path");
    const CubicGraph& g = d.graph;
    auto [u, v] = detail::empty_ends(g, d.empty_edge);
    Color cu = tip_color(d, u), cv = tip_color(d, v);
    std::vector<ColorPair> pairs;
    for (ColorPair pair : all_color_pairs())
        if (pair.contains(cu) && pair.contains(cv)) pairs.push_back(pair);

    std::optional<std::vector<EdgeId>> best;
    for (ColorPair pair : pairs) {
        for (Dart d0 : g.vertices[u].darts) {
            if (g.edge_of(d0) == d.empty_edge) continue;
            std::vector<EdgeId> path{g.edge_of(d0)};
            Dart x = d0;
            Color cur = d.coloring.at(g.edge_of(x));
            bool reached = false;
            for (int steps = 0; steps <= g.edge_count(); ++steps) {
                VertexId w = g.vertex_of(g.mate(x));
                if (w == v) {
                    reached = true;
                    break;
                }
                if (w == u) break;
                Color want = pair.a == cur ? pair.b : pair.a;
                Dart next = kNoDart;
                for (Dart y : g.vertices[w].darts)
                    if (y != g.mate(x) && d.coloring.at(g.edge_of(y)) == want) next = y;
                if (next == kNoDart) break;
                x = next;
                cur = want;
                path.push_back(g.edge_of(x));
            }
            if (!reached || path.size() < 2) continue;
            if (!best || path.size() < best->size() ||
                (path.size() == best->size() && path < *best))
                best = std::move(path);
        }
    }
    return best;
}

// Complete the deficiency over its empty edge: swap the path's two colors
// along the path and color the empty edge with their third color. The path
// is revalidated against the current coloring first, so a path computed for
// an earlier coloring fails here instead of corrupting the result.
inline EdgeColoring complete_over_empty_edge(const DeficientFormation& d,
                                             const std::vector<EdgeId>& path) {
    require_deficient(d, "complete_over_empty_edge");
    const CubicGraph& g = d.graph;
    auto [u, v] = detail::empty_ends(g, d.empty_edge);
    if (path.size() < 2) throw ArgumentError("two-color path needs at least two edges");
    for (EdgeId e : path)
        if (e < 0 || e >= g.edge_count() || e == d.empty_edge)
            throw ArgumentError("two-color path leaves the colored graph");
    Color a = d.coloring.at(path[0]);
    Color b = d.coloring.at(path[1]);
    if (!is_colored(a) || !is_colored(b) || a == b)
        throw ArgumentError("two-color path is stale: colors no longer alternate");
    ColorPair pair(a, b);
    VertexId at = u;
    for (std::size_t i = 0; i < path.size(); ++i) {
        Color c = d.coloring.at(path[i]);
        if (c != (i % 2 ? b : a))
            throw ArgumentError("two-color path is stale: colors no longer alternate");
        VertexId pa = g.vertex_of(g.edges[path[i]].a);
        VertexId pb = g.vertex_of(g.edges[path[i]].b);
        if (pa == pb || (pa != at && pb != at))
            throw ArgumentError("two-color path is not connected");
        at = pa == at ? pb : pa;
    }
    if (at != v) throw ArgumentError("two-color path misses the far endpoint");
    EdgeColoring out = d.coloring;
    Color third = pair.swap_color();
    for (EdgeId e : path) out.set(e, out.at(e) * third);
    out.set(d.empty_edge, third);
    require_proper(g, out, "complete_over_empty_edge");
    return out;
}

// A coloring that is empty on one or two edges. One complex step of the
// parity pass empties a second edge before the next step recolors one, so
// the machinery below works on this slightly wider state; every vertex
// still meets at most one empty dart and carries equal colors beside it.
struct OpenState {
    CubicGraph graph;
    EdgeColoring coloring;
    std::vector<EdgeId> empty_edges;  // sorted, distinct
};

inline void require_open(const OpenState& s, const char* op = "open state") {
    const CubicGraph& g = s.graph;
    detail::require_cubic(g, op);
    if (static_cast<int>(s.coloring.colors.size()) != g.edge_count())
        throw ArgumentError(std::string(op) + ": coloring size mismatch");
    if (s.empty_edges.empty()) throw ArgumentError(std::string(op) + ": no empty edge");
    std::vector<char> empty(g.edge_count(), 0);
    EdgeId prev = -1;
    for (EdgeId e : s.empty_edges) {
        if (e < 0 || e >= g.edge_count())
            throw ArgumentError(std::string(op) + ": empty edge not in the graph");
        if (e <= prev) throw ArgumentError(std::string(op) + ": empty edges not sorted distinct");
        prev = e;
        empty[e] = 1;
        if (g.vertex_of(g.edges[e].a) == g.vertex_of(g.edges[e].b))
            throw ArgumentError(std::string(op) + ": empty edge must join two vertices");
    }
    for (EdgeId e = 0; e < g.edge_count(); ++e)
        if (empty[e] == is_colored(s.coloring.at(e)))
            throw ArgumentError(std::string(op) + ": exactly the listed edges may be uncolored");
    for (VertexId w = 0; w < g.vertex_count(); ++w) {
        int open_darts = 0;
        Color seen = Color::none;
        bool equal = true;
        for (Dart x : g.vertices[w].darts) {
            Color c = s.coloring.at(g.edge_of(x));
            if (!is_colored(c)) {
                ++open_darts;
                continue;
            }
            if (seen != Color::none && c != seen) equal = false;
            seen = c;
        }
        if (open_darts > 1)
            throw ArgumentError(std::string(op) + ": two empty edges meet at vertex " +
                                std::to_string(w));
        if (open_darts == 1 ? !equal : !detail::vertex_proper(g, s.coloring, w))
            throw ArgumentError(std::string(op) + ": vertex " + std::to_string(w) +
                                (open_darts ? " has unequal tip colors" : " is not proper"));
    }
}

inline OpenState make_open(const DeficientFormation& d) {
    require_deficient(d, "make_open");
    return {d.graph, d.coloring, {d.empty_edge}};
}

inline DeficientFormation as_deficient(const OpenState& s) {
    if (s.empty_edges.size() != 1)
        throw ArgumentError("as_deficient: state is empty on more than one edge");
    DeficientFormation d{s.graph, s.empty_edges[0], s.coloring};
    require_deficient(d, "as_deficient");
    return d;
}

// Shared color of the colored darts at a vertex beside an empty edge.
inline Color tip_color(const OpenState& s, VertexId w) {
    for (Dart x : s.graph.vertices[w].darts) {
        Color c = s.coloring.at(s.graph.edge_of(x));
        if (is_colored(c)) return c;
    }
    throw ArgumentError("tip_color: vertex has only empty darts");
}

// Two-color circuits of an open state: the tracer of deficient_circuits,
// tolerating a second empty edge. At any tip whose color lies in the pair
// the circuit runs straight through; empty edges never join a circuit.
inline std::vector<TwoColorCircuit> open_circuits(const OpenState& s, ColorPair pair) {
    require_open(s, "open_circuits");
    const CubicGraph& g = s.graph;
    const EdgeColoring& c = s.coloring;
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
            if (next == kNoDart) throw ArgumentError("open_circuits: pair subgraph dead end");
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

// Kempe swap of a circuit's pair on an open state; tips on the circuit flip
// both stretches together, so the result is open at the same edges.
inline OpenState open_operation(const OpenState& s, const TwoColorCircuit& circuit) {
    require_open(s, "open_operation");
    if (circuit.walk.empty()) throw ArgumentError("open_operation needs a nonempty circuit");
    const CubicGraph& g = s.graph;
    std::vector<char> used(g.edge_count(), 0);
    for (Dart x : circuit.walk) {
        EdgeId e = g.edge_of(x);
        if (used[e]) throw ArgumentError("open_operation: circuit repeats an edge");
        used[e] = 1;
        if (!circuit.pair.contains(s.coloring.at(e)))
            throw ArgumentError("open_operation: circuit edge outside the pair");
    }
    OpenState out = s;
    Color delta = circuit.pair.swap_color();
    for (Dart x : circuit.walk) {
        EdgeId e = g.edge_of(x);
        out.coloring.set(e, out.coloring.at(e) * delta);
    }
    require_open(out, "open_operation result");
    return out;
}

namespace detail {

// True when the edge set is nonempty, every touched vertex meets exactly
// two of its edges, and the touched edges form one connected piece: the
// route of a single closed curve.
inline bool route_is_single_cycle(const CubicGraph& g, const std::vector<EdgeId>& route) {
    if (route.empty()) return false;
    std::map<VertexId, int> degree;
    for (EdgeId e : route) {
        degree[g.vertex_of(g.edges[e].a)]++;
        degree[g.vertex_of(g.edges[e].b)]++;
    }
    for (const auto& [w, deg] : degree)
        if (deg != 2) return false;
    std::set<EdgeId> pending(route.begin(), route.end());
    if (pending.size() != route.size()) return false;
    std::deque<VertexId> frontier{g.vertex_of(g.edges[route[0]].a)};
    std::set<VertexId> reached{frontier.front()};
    while (!frontier.empty()) {
        VertexId w = frontier.front();
        frontier.pop_front();
        for (Dart x : g.vertices[w].darts) {
            if (!pending.count(g.edge_of(x))) continue;
            VertexId other = g.vertex_of(g.mate(x));
            if (reached.insert(other).second) frontier.push_back(other);
        }
    }
    return reached.size() == degree.size();
}

inline std::vector<EdgeId> walk_edges(const CubicGraph& g, const std::vector<Dart>& walk) {
    std::vector<EdgeId> out;
    out.reserve(walk.size());
    for (Dart x : walk) out.push_back(g.edge_of(x));
    std::sort(out.begin(), out.end());
    return out;
}

inline bool walk_touches(const CubicGraph& g, const std::vector<Dart>& walk, VertexId w) {
    for (Dart x : walk)
        if (g.vertex_of(x) == w || g.vertex_of(g.mate(x)) == w) return true;
    return false;
}

} // namespace detail

// Lay color x along a closed route: every route edge picks up x, so empty
// route edges become x, x-colored ones become empty, and others move to
// their remaining color. The route must be a single closed curve; what the
// result is good for is the caller's concern.
inline EdgeColoring idempose_route(const CubicGraph& g, const EdgeColoring& c,
                                   const std::vector<EdgeId>& route, Color x) {
    if (!is_colored(x)) throw ArgumentError("idempose_route needs a color");
    if (!detail::route_is_single_cycle(g, route))
        throw ArgumentError("idempose_route: route is not a single closed curve");
    EdgeColoring out = c;
    for (EdgeId e : route) out.set(e, out.at(e) * x);
    return out;
}

// A closed curve through every empty edge whose colored edges all avoid the
// fill color. Laying the fill along it colors each empty edge and moves the
// others inside their remaining pair, which keeps interior vertices proper
// and turns each tip into a proper vertex; such a cycle therefore completes
// the open state in one stroke.
struct CompletionCycle {
    Color fill = Color::none;
    std::vector<EdgeId> route;  // cycle order, starting with the first empty edge
};

namespace detail {

// Shortest path between the tips of a single empty edge avoiding the fill
// color, ties broken toward lexicographically least edge ids. Distances
// run from the far tip so the walk from the near tip can peel them off.
inline std::optional<std::vector<EdgeId>> completion_path(const OpenState& s, Color fill) {
    const CubicGraph& g = s.graph;
    EdgeId e0 = s.empty_edges[0];
    VertexId u = g.vertex_of(g.edges[e0].a);
    VertexId v = g.vertex_of(g.edges[e0].b);
    auto allowed = [&](EdgeId e) {
        Color c = s.coloring.at(e);
        return is_colored(c) && c != fill;
    };
    std::vector<int> dist(g.vertex_count(), -1);
    std::deque<VertexId> frontier{v};
    dist[v] = 0;
    while (!frontier.empty()) {
        VertexId w = frontier.front();
        frontier.pop_front();
        for (Dart x : g.vertices[w].darts) {
            if (!allowed(g.edge_of(x))) continue;
            VertexId other = g.vertex_of(g.mate(x));
            if (dist[other] < 0) {
                dist[other] = dist[w] + 1;
                frontier.push_back(other);
            }
        }
    }
    if (dist[u] < 0) return std::nullopt;
    std::vector<EdgeId> path;
    VertexId at = u;
    for (int left = dist[u]; left > 0; --left) {
        EdgeId pick = -1;
        VertexId to = -1;
        for (Dart x : g.vertices[at].darts) {
            EdgeId e = g.edge_of(x);
            if (!allowed(e)) continue;
            VertexId other = g.vertex_of(g.mate(x));
            if (dist[other] == left - 1 && (pick < 0 || e < pick)) {
                pick = e;
                to = other;
            }
        }
        path.push_back(pick);
        at = to;
    }
    return path;
}

// Depth-first hunt for a simple cycle through both empty edges with all
// colored edges off the fill color. The cycle is anchored as a path from
// the first empty edge's far end back to its near end that crosses the
// second empty edge exactly once; edges are tried in id order, so the
// first find is canonical. The step bound guards against blowup on inputs
// far larger than this engine targets.
inline std::optional<std::vector<EdgeId>> completion_path_two(const OpenState& s, Color fill,
                                                              std::uint64_t max_steps) {
    const CubicGraph& g = s.graph;
    EdgeId e0 = s.empty_edges[0], e1 = s.empty_edges[1];
    VertexId home = g.vertex_of(g.edges[e0].a);
    VertexId start = g.vertex_of(g.edges[e0].b);
    std::vector<char> visited(g.vertex_count(), 0);
    std::vector<EdgeId> path;
    std::uint64_t steps = 0;
    auto usable = [&](EdgeId e) {
        if (e == e0) return false;
        if (e == e1) return true;
        Color c = s.coloring.at(e);
        return is_colored(c) && c != fill;
    };
    std::function<bool(VertexId, bool)> extend = [&](VertexId at, bool crossed) -> bool {
        if (++steps > max_steps)
            throw ResourceError("completion cycle search exceeded its step bound");
        if (at == home) return crossed;
        visited[at] = 1;
        std::vector<Dart> darts(g.vertices[at].darts.begin(), g.vertices[at].darts.end());
        std::sort(darts.begin(), darts.end(),
                  [&](Dart a, Dart b) { return g.edge_of(a) < g.edge_of(b); });
        for (Dart x : darts) {
            EdgeId e = g.edge_of(x);
            if (!usable(e) || (e == e1 && crossed)) continue;
            VertexId other = g.vertex_of(g.mate(x));
            if (other != home && visited[other]) continue;
            path.push_back(e);
            if (extend(other, crossed || e == e1)) return true;
            path.pop_back();
        }
        visited[at] = 0;
        return false;
    };
    if (extend(start, false)) return path;
    return std::nullopt;
}

} // namespace detail

// Canonical completion cycle of an open state, if one exists: fill colors
// are tried red, blue, purple; for one empty edge the shortest then
// lexicographically least path wins, for two the depth-first order decides.
inline std::optional<CompletionCycle> find_completion_cycle(const OpenState& s) {
    require_open(s, "find_completion_cycle");
    if (s.empty_edges.size() > 2)
        throw UnsupportedError("completion cycles handle at most two empty edges");
    for (Color fill : {Color::red, Color::blue, Color::purple}) {
        std::optional<std::vector<EdgeId>> path;
        if (s.empty_edges.size() == 1)
            path = detail::completion_path(s, fill);
        else
            path = detail::completion_path_two(s, fill, std::uint64_t(1) << 22);
        if (path) {
            CompletionCycle cc;
            cc.fill = fill;
            cc.route.push_back(s.empty_edges[0]);
            cc.route.insert(cc.route.end(), path->begin(), path->end());
            return cc;
        }
    }
    return std::nullopt;
}

// Realize a completion cycle: lay the fill along the route and prove the
// result proper. The route is revalidated against the current state first.
inline EdgeColoring apply_completion(const OpenState& s, const CompletionCycle& cc) {
    require_open(s, "apply_completion");
    std::set<EdgeId> on_route(cc.route.begin(), cc.route.end());
    for (EdgeId e : s.empty_edges)
        if (!on_route.count(e))
            throw ArgumentError("apply_completion: route misses an empty edge");
    for (EdgeId e : cc.route) {
        Color c = s.coloring.at(e);
        if (is_colored(c) && c == cc.fill)
            throw ArgumentError("apply_completion: route is stale: fill color on the route");
    }
    EdgeColoring out = idempose_route(s.graph, s.coloring, cc.route, cc.fill);
    require_proper(s.graph, out, "apply_completion");
    return out;
}

// One recorded simple operation: the pair that was swapped and the operated
// circuit's edges in canonical cycle order.
struct SimpleOpRecord {
    ColorPair pair{Color::red, Color::blue};
    std::vector<EdgeId> circuit;
};

// Result of the breadth-first completion search. Exactly one of three
// things is true: a completion was found, the whole reachable orbit was
// seen without one, or the state budget ran out first; proven absence and
// an exhausted budget are reported apart on purpose.
struct CompletionSearch {
    bool completed = false;
    bool orbit_exhausted = false;
    std::vector<SimpleOpRecord> ops;       // operations leading to the completable state
    std::optional<CompletionCycle> cycle;  // the completing cycle itself
    EdgeColoring coloring;                 // checked proper coloring when completed
    std::uint64_t states_seen = 0;
};

namespace detail {

inline std::string coloring_key(const EdgeColoring& c) {
    std::string key(c.colors.size(), '-');
    for (std::size_t i = 0; i < c.colors.size(); ++i) key[i] = color_char(c.colors[i]);
    return key;
}

} // namespace detail

// Breadth-first search over the states reachable from s by simple
// operations, stopping at the first state a completion cycle finishes.
// Circuits of the suppressed coloring are exactly the contextual circuits
// traced here, so the walk order (pairs red-blue, red-purple, blue-purple;
// circuits by least edge) fixes the expansion and makes reruns identical.
// The budget caps how many distinct states may be seen.
inline CompletionSearch open_completion_search(const OpenState& s, std::uint64_t budget) {
    require_open(s, "open_completion_search");
    CompletionSearch out;
    if (budget == 0) budget = 1;

    struct Node {
        EdgeColoring coloring;
        std::size_t parent;
        SimpleOpRecord op;
    };
    std::vector<Node> nodes;
    std::map<std::string, std::size_t> seen;
    std::deque<std::size_t> frontier;

    auto finish = [&](std::size_t index, CompletionCycle cc) {
        OpenState at{s.graph, nodes[index].coloring, s.empty_edges};
        out.completed = true;
        out.coloring = apply_completion(at, cc);
        out.cycle = std::move(cc);
        for (std::size_t i = index; i != 0; i = nodes[i].parent) out.ops.push_back(nodes[i].op);
        std::reverse(out.ops.begin(), out.ops.end());
    };

    nodes.push_back({s.coloring, 0, {}});
    seen.emplace(detail::coloring_key(s.coloring), 0);
    frontier.push_back(0);
    out.states_seen = 1;
    if (auto cc = find_completion_cycle(s)) {
        finish(0, std::move(*cc));
        return out;
    }

    while (!frontier.empty()) {
        std::size_t index = frontier.front();
        frontier.pop_front();
        OpenState at{s.graph, nodes[index].coloring, s.empty_edges};
        for (ColorPair pair : all_color_pairs()) {
            for (const TwoColorCircuit& circ : open_circuits(at, pair)) {
                OpenState next = open_operation(at, circ);
                std::string key = detail::coloring_key(next.coloring);
                if (seen.count(key)) continue;
                if (out.states_seen == budget) return out;
                ++out.states_seen;
                std::size_t id = nodes.size();
                SimpleOpRecord op{pair, {}};
                for (Dart x : circ.walk) op.circuit.push_back(s.graph.edge_of(x));
                nodes.push_back({next.coloring, index, std::move(op)});
                seen.emplace(std::move(key), id);
                frontier.push_back(id);
                if (auto cc = find_completion_cycle(next)) {
                    finish(id, std::move(*cc));
                    return out;
                }
            }
        }
    }
    out.orbit_exhausted = true;
    return out;
}

// The search restricted to its usual habitat, a 1-deficient formation.
inline CompletionSearch simple_op_completion_search(const DeficientFormation& d,
                                                    std::uint64_t budget) {
    return open_completion_search(make_open(d), budget);
}

// Open-state files reuse the deficient-coloring line format with one empty
// line per empty edge, so 1-deficient files read back either way.
inline OpenState parse_open(const std::string& text, const CubicGraph& g) {
    OpenState s{g, EdgeColoring{std::vector<Color>(g.edge_count(), Color::none)}, {}};
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string body = line.substr(0, line.find('#'));
        std::istringstream ls(body);
        std::string word;
        if (!(ls >> word)) continue;
        if (word == "color") {
            EdgeId e;
            std::string c;
            if (!(ls >> e >> c) || c.size() != 1)
                throw ParseError("line " + std::to_string(lineno) + ": color needs edge and color");
            if (e < 0 || e >= g.edge_count())
                throw ParseError("line " + std::to_string(lineno) + ": edge out of range");
            s.coloring.set(e, parse_color(c[0]));
        } else if (word == "empty") {
            EdgeId e;
            if (!(ls >> e))
                throw ParseError("line " + std::to_string(lineno) + ": empty needs an edge");
            s.empty_edges.push_back(e);
        } else {
            throw ParseError("line " + std::to_string(lineno) + ": unknown directive " + word);
        }
    }
    std::sort(s.empty_edges.begin(), s.empty_edges.end());
    require_open(s, "parse_open");
    return s;
}

inline std::string serialize_open(const OpenState& s) {
    std::ostringstream out;
    for (EdgeId e = 0; e < s.graph.edge_count(); ++e)
        if (is_colored(s.coloring.at(e)))
            out << "color " << e << ' ' << color_char(s.coloring.at(e)) << '\n';
    for (EdgeId e : s.empty_edges) out << "empty " << e << '\n';
    return out.str();
}

// The five-region the pass works at. Slot 0 is the edge that is empty when
// a round begins; the other slots follow around the face. corners[i] joins
// slots[i] to slots[i+1 mod 5], so corners[0] and corners[4] are the tips
// of slot 0. The face itself never changes during a round; only the slot
// colors and the position of the empty edge move.
struct Pentagon {
    std::array<EdgeId, 5> slots{-1, -1, -1, -1, -1};
    std::array<VertexId, 5> corners{-1, -1, -1, -1, -1};
};

// Canonical entry pattern around the five-region: empty, red, purple,
// blue, red. With both tips red, a simple pentagon matches in exactly one
// reading direction, because the tip slots are forced red and properness
// at the inner corners forces the remaining two colors apart.
inline constexpr std::array<Color, 5> kPentagonStartPattern{
    Color::none, Color::red, Color::purple, Color::blue, Color::red};

// Find the canonical five-region of a 1-deficient open state: a simple
// five-sided face beside the empty edge whose slots read the entry pattern
// in one of the two directions. Faces and directions are tried in a fixed
// order, so the result is deterministic.
inline std::optional<Pentagon> detect_pentagon(const OpenState& s) {
    require_open(s, "detect_pentagon");
    if (s.empty_edges.size() != 1) return std::nullopt;
    const CubicGraph& g = s.graph;
    EdgeId hole = s.empty_edges[0];
    FaceSet fs = trace_faces(g);
    for (const auto& face : fs.faces) {
        if (face.size() != 5) continue;
        int at = -1;
        for (int i = 0; i < 5; ++i)
            if (g.edge_of(face[i]) == hole) at = i;
        if (at < 0) continue;
        std::array<EdgeId, 5> fwd_e;
        std::array<VertexId, 5> fwd_v;
        for (int j = 0; j < 5; ++j) {
            fwd_e[j] = g.edge_of(face[(at + j) % 5]);
            fwd_v[j] = g.vertex_of(g.mate(face[(at + j) % 5]));
        }
        std::set<EdgeId> edges(fwd_e.begin(), fwd_e.end());
        std::set<VertexId> verts(fwd_v.begin(), fwd_v.end());
        if (edges.size() != 5 || verts.size() != 5) continue;
        for (int dir = 0; dir < 2; ++dir) {
            Pentagon p;
            if (dir == 0) {
                p.slots = fwd_e;
                p.corners = fwd_v;
            } else {
                p.slots = {fwd_e[0], fwd_e[4], fwd_e[3], fwd_e[2], fwd_e[1]};
                p.corners = {fwd_v[4], fwd_v[3], fwd_v[2], fwd_v[1], fwd_v[0]};
            }
            bool match = true;
            for (int j = 0; j < 5; ++j)
                if (s.coloring.at(p.slots[j]) != kPentagonStartPattern[j]) match = false;
            if (match) return p;
        }
    }
    return std::nullopt;
}

enum class PassStage { start, after_a, after_b, after_c, after_d, after_e };

inline const char* stage_name(PassStage s) {
    switch (s) {
        case PassStage::start: return "start";
        case PassStage::after_a: return "after-A";
        case PassStage::after_b: return "after-B";
        case PassStage::after_c: return "after-C";
        case PassStage::after_d: return "after-D";
        case PassStage::after_e: return "after-E";
    }
    return "?";
}

struct PassLogEntry {
    std::string kind;  // search, normalize, recolor, step, note, completion
    std::string text;
};

inline std::string render_pass_log(const std::vector<PassLogEntry>& log) {
    std::ostringstream out;
    for (const auto& entry : log) out << "kind=" << entry.kind << ' ' << entry.text << '\n';
    return out.str();
}

namespace detail {

inline std::string edge_list_str(const std::vector<EdgeId>& edges) {
    std::ostringstream out;
    for (std::size_t i = 0; i < edges.size(); ++i) out << (i ? "," : "") << edges[i];
    return out.str();
}

inline std::string open_curve_summary(const OpenState& s) {
    auto count = [&](Color a, Color b) {
        return open_circuits(s, ColorPair(a, b)).size();
    };
    std::ostringstream out;
    out << "curves=red:" << count(Color::red, Color::purple)
        << ",blue:" << count(Color::blue, Color::purple)
        << ",alt:" << count(Color::red, Color::blue);
    return out.str();
}

inline std::optional<TwoColorCircuit> circuit_through(const CubicGraph& g,
                                                      const std::vector<TwoColorCircuit>& circs,
                                                      VertexId w) {
    for (const auto& circ : circs)
        if (walk_touches(g, circ.walk, w)) return circ;
    return std::nullopt;
}

inline std::optional<TwoColorCircuit> circuit_with_edge(const CubicGraph& g,
                                                        const std::vector<TwoColorCircuit>& circs,
                                                        EdgeId e) {
    for (const auto& circ : circs)
        for (Dart x : circ.walk)
            if (g.edge_of(x) == e) return circ;
    return std::nullopt;
}

// Arc of the pair subgraph from one vertex to another, entering along a
// chosen first edge. Returns the edge sequence and the arrival edge; the
// continuation is forced at every vertex, including straight runs through
// tips, so the arc is well defined.
inline std::pair<std::vector<EdgeId>, EdgeId> trace_arc(const OpenState& s, ColorPair pair,
                                                        VertexId from, EdgeId first,
                                                        VertexId target) {
    const CubicGraph& g = s.graph;
    Dart x = kNoDart;
    for (Dart d0 : g.vertices[from].darts)
        if (g.edge_of(d0) == first) x = d0;
    if (x == kNoDart) throw ArgumentError("trace_arc: first edge misses the start vertex");
    std::vector<EdgeId> arc;
    for (int steps = 0; steps <= g.edge_count(); ++steps) {
        arc.push_back(g.edge_of(x));
        Dart in = g.mate(x);
        VertexId w = g.vertex_of(in);
        if (w == target) return {arc, g.edge_of(x)};
        Dart next = kNoDart;
        for (Dart y : g.vertices[w].darts)
            if (y != in && pair.contains(s.coloring.at(g.edge_of(y)))) next = y;
        if (next == kNoDart) throw ArgumentError("trace_arc: pair subgraph dead end");
        x = next;
    }
    throw ArgumentError("trace_arc: walk does not reach the target");
}

inline std::vector<EdgeId> symmetric_difference(std::vector<EdgeId> a, std::vector<EdgeId> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::vector<EdgeId> out;
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                  std::back_inserter(out));
    return out;
}

inline EdgeColoring swap_colors_globally(const EdgeColoring& c, Color a, Color b) {
    EdgeColoring out = c;
    for (auto& col : out.colors) {
        if (col == a)
            col = b;
        else if (col == b)
            col = a;
    }
    return out;
}

} // namespace detail

// State the pass carries across steps: the open coloring, the five-region
// it is working at, how far the current round has come, and the log.
struct PassState {
    OpenState current;
    Pentagon pentagon;
    PassStage stage = PassStage::start;
    std::vector<PassLogEntry> log;
};

// A step either advances the state or reports why its existence condition
// failed; the latter is the success signal that the state is completable
// by simple operations.
struct StepOutcome {
    bool applicable = false;
    std::string reason;
    PassState state;
};

namespace detail {

inline PassState advance(const PassState& s, OpenState next, PassStage stage, char step,
                         const std::vector<EdgeId>& route, Color laid) {
    require_open(next, "parity pass step result");
    PassState out{std::move(next), s.pentagon, stage, s.log};
    std::ostringstream text;
    text << "step=" << step << " idemposition=" << color_name(laid)
         << " route=" << edge_list_str(route) << ' ' << open_curve_summary(out.current);
    out.log.push_back({"step", text.str()});
    return out;
}

} // namespace detail

// One parity pass step. A, C and D are complex: each lays a color along a
// single closed route built from a curve of the formation and parts of the
// five-region, moving the empty position; C leaves both its empties open
// until D or a completion closes one. B and E are simple operations. The
// required stage must match the step; a failed existence condition comes
// back as applicable=false with the reason spelled out.
inline StepOutcome parity_pass_step(const PassState& s, char step) {
    const CubicGraph& g = s.current.graph;
    const auto& slots = s.pentagon.slots;
    const auto& corners = s.pentagon.corners;
    VertexId t_top = corners[0], t_bot = corners[4];
    const ColorPair red_pair(Color::red, Color::purple);
    const ColorPair blue_pair(Color::blue, Color::purple);
    const ColorPair alt_pair(Color::red, Color::blue);
    StepOutcome out;

    auto expect_stage = [&](PassStage want) {
        if (s.stage != want)
            throw ArgumentError(std::string("parity pass step ") + step + " expects stage " +
                                stage_name(want) + ", got " + stage_name(s.stage));
    };

    switch (step) {
        case 'A': {
            expect_stage(PassStage::start);
            auto reds = open_circuits(s.current, red_pair);
            auto top = detail::circuit_through(g, reds, t_top);
            auto bot = detail::circuit_through(g, reds, t_bot);
            if (!top || !bot) throw Error("parity pass step A: missing red curve at a tip");
            if (top->walk == bot->walk) {
                out.reason = "the red curves through the two tips coincide";
                return out;
            }
            std::vector<EdgeId> curve = detail::walk_edges(g, top->walk);
            for (int j : {1, 2})
                if (!std::binary_search(curve.begin(), curve.end(), slots[j]))
                    throw Error("parity pass step A: top red curve leaves the template");
            for (int j : {0, 3, 4})
                if (std::binary_search(curve.begin(), curve.end(), slots[j]))
                    throw Error("parity pass step A: top red curve leaves the template");
            std::vector<EdgeId> route = detail::symmetric_difference(
                curve, {slots.begin(), slots.end()});
            OpenState next = s.current;
            next.coloring = idempose_route(g, s.current.coloring, route, Color::blue);
            next.empty_edges = {slots[3]};
            out.applicable = true;
            out.state = detail::advance(s, std::move(next), PassStage::after_a, 'A', route,
                                        Color::blue);
            return out;
        }
        case 'B': {
            expect_stage(PassStage::after_a);
            auto blues = open_circuits(s.current, blue_pair);
            auto at_z = detail::circuit_through(g, blues, corners[3]);
            auto at_y = detail::circuit_through(g, blues, corners[2]);
            if (!at_z || !at_y) throw Error("parity pass step B: missing blue curve at a tip");
            if (at_z->walk == at_y->walk) {
                out.reason = "the blue curves through the empty edge's tips coincide";
                return out;
            }
            OpenState next = open_operation(s.current, *at_z);
            out.applicable = true;
            out.state = detail::advance(s, std::move(next), PassStage::after_b, 'B',
                                        detail::walk_edges(g, at_z->walk), Color::red);
            return out;
        }
        case 'C': {
            expect_stage(PassStage::after_b);
            auto alts = open_circuits(s.current, alt_pair);
            auto top = detail::circuit_through(g, alts, t_top);
            auto bot = detail::circuit_through(g, alts, t_bot);
            if (!top || !bot) throw Error("parity pass step C: missing alternator at a tip");
            if (top->walk != bot->walk) {
                out.reason = "the alternators through the two tips are distinct curves";
                return out;
            }
            auto [arc, arrival] =
                detail::trace_arc(s.current, alt_pair, t_top, slots[1], t_bot);
            if (arrival != slots[4]) {
                out.reason = "the alternator arc from the top tip arrives off the template";
                return out;
            }
            std::vector<EdgeId> route = arc;
            route.push_back(slots[0]);
            std::sort(route.begin(), route.end());
            OpenState next = s.current;
            next.coloring = idempose_route(g, s.current.coloring, route, Color::purple);
            next.empty_edges = {slots[0], slots[3]};
            std::sort(next.empty_edges.begin(), next.empty_edges.end());
            out.applicable = true;
            out.state = detail::advance(s, std::move(next), PassStage::after_c, 'C', route,
                                        Color::purple);
            return out;
        }
        case 'D': {
            expect_stage(PassStage::after_c);
            auto reds = open_circuits(s.current, red_pair);
            auto via_s3 = detail::circuit_with_edge(g, reds, slots[2]);
            auto via_s5 = detail::circuit_with_edge(g, reds, slots[4]);
            if (!via_s3 || !via_s5)
                throw Error("parity pass step D: missing red curve on a template slot");
            if (via_s3->walk != via_s5->walk) {
                out.reason = "the two local red stretches lie on two distinct curves";
                return out;
            }
            std::vector<EdgeId> route = detail::symmetric_difference(
                detail::walk_edges(g, via_s3->walk), {slots.begin(), slots.end()});
            if (!detail::route_is_single_cycle(g, route)) {
                out.reason = "the rerouted red curve splits into two closed curves";
                return out;
            }
            OpenState next = s.current;
            next.coloring = idempose_route(g, s.current.coloring, route, Color::blue);
            next.empty_edges = {slots[1]};
            out.applicable = true;
            out.state = detail::advance(s, std::move(next), PassStage::after_d, 'D', route,
                                        Color::blue);
            return out;
        }
        case 'E': {
            expect_stage(PassStage::after_d);
            auto alts = open_circuits(s.current, alt_pair);
            auto at_top = detail::circuit_through(g, alts, t_top);
            auto at_far = detail::circuit_through(g, alts, corners[1]);
            if (!at_top && !at_far) {
                out.reason = "no alternator meets the empty edge's tips";
                return out;
            }
            if (at_top && at_far && at_top->walk == at_far->walk) {
                out.reason = "the alternators through the empty edge's tips coincide";
                return out;
            }
            const TwoColorCircuit& pick = at_top ? *at_top : *at_far;
            OpenState next = open_operation(s.current, pick);
            out.applicable = true;
            out.state = detail::advance(s, std::move(next), PassStage::after_e, 'E',
                                        detail::walk_edges(g, pick.walk), Color::purple);
            return out;
        }
        default:
            throw ArgumentError("parity pass step must be one of A, B, C, D, E");
    }
}

struct PassOptions {
    int max_rounds = 32;
    std::uint64_t shallow_budget = 64;        // search between steps
    std::uint64_t full_budget = 1u << 20;     // search backing an inapplicable step
    std::string falsifier_dir = ".";          // where falsifying instances are preserved
    bool write_falsifiers = true;
};

// Outcome of a pass run. completed means the deficiency was closed by
// simple operations plus one completion cycle, with the checked proper
// coloring attached; otherwise the pass ran its round limit (or lost its
// template) and reports how far it got. A step whose failure is *not*
// backed by a completion is a falsifying instance: it is preserved to disk
// and raised as an error, never massaged into a result.
struct PassOutcome {
    bool completed = false;
    PassStage stage = PassStage::start;    // stage of the state that completed
    int rounds = 0;                        // rounds entered (completed) or finished (exhausted)
    std::vector<PassLogEntry> log;
    std::vector<SimpleOpRecord> ops;       // simple operations of the completing search
    std::optional<CompletionCycle> cycle;  // the closing cycle
    EdgeColoring coloring;                 // proper coloring when completed
    std::string note;
};

namespace detail {

inline std::string safe_label(const std::string& label) {
    std::string out = label.empty() ? "instance" : label;
    for (char& c : out)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') c = '-';
    return out;
}

inline std::string preserve_open_state(const OpenState& s, const std::string& dir,
                                       const std::string& tag) {
    namespace fs = std::filesystem;
    fs::path base(dir.empty() ? "." : dir);
    fs::create_directories(base);
    std::string stem = safe_label(s.graph.label) + "-" + tag;
    fs::path gp = base / (stem + ".graph");
    fs::path sp = base / (stem + ".state");
    std::ofstream(gp) << serialize_graph(s.graph);
    std::ofstream(sp) << serialize_open(s);
    return gp.string() + " and " + sp.string();
}

} // namespace detail

// The parity pass. Entry demands a 1-deficient formation with a five-sided
// face beside the empty edge. Each round: search shallowly for a completion
// by simple operations, canonicalize the entry pattern (equalize unequal
// tips with one contextual swap, rename the tip color to red), read the
// five-region template, then interleave steps A..E with shallow searches.
// An inapplicable step must be backed by a completion under the full
// budget; when the backing search also fails the instance falsifies the
// claim the pass embodies, so it is written out and raised. Identical
// inputs and budgets produce identical logs.
inline PassOutcome run_parity_pass(const DeficientFormation& d, const PassOptions& opts = {}) {
    require_deficient(d, "run_parity_pass");
    const CubicGraph& g = d.graph;
    {
        FaceSet fs = trace_faces(g);
        bool pentagon_side = false;
        for (const auto& face : fs.faces) {
            if (face.size() != 5) continue;
            for (Dart x : face)
                if (g.edge_of(x) == d.empty_edge) pentagon_side = true;
        }
        if (!pentagon_side)
            throw ArgumentError("run_parity_pass: no five-sided region beside the empty edge");
    }

    PassOutcome out;
    OpenState state = make_open(d);
    std::uint64_t shallow = opts.shallow_budget ? opts.shallow_budget : 1;

    auto log_search = [&](PassStage stage, const CompletionSearch& res, std::uint64_t budget) {
        std::ostringstream text;
        text << "stage=" << stage_name(stage) << " budget=" << budget
             << " states=" << res.states_seen << " result="
             << (res.completed ? "completed" : res.orbit_exhausted ? "orbit-exhausted"
                                                                   : "budget-exhausted");
        out.log.push_back({"search", text.str()});
    };

    auto complete_with = [&](PassStage stage, int round, CompletionSearch res) {
        out.completed = true;
        out.stage = stage;
        out.rounds = round;
        out.ops = std::move(res.ops);
        out.cycle = std::move(res.cycle);
        out.coloring = std::move(res.coloring);
        std::ostringstream text;
        text << "stage=" << stage_name(stage) << " ops=" << out.ops.size() << " fill="
             << color_name(out.cycle->fill) << " route=" << detail::edge_list_str(out.cycle->route);
        out.log.push_back({"completion", text.str()});
        return out;
    };

    for (int round = 1; round <= opts.max_rounds; ++round) {
        CompletionSearch entry = open_completion_search(state, shallow);
        log_search(PassStage::start, entry, shallow);
        if (entry.completed) return complete_with(PassStage::start, round, std::move(entry));

        // Entry canonicalization. The equalizing circuit cannot reach the
        // far tip: a pair circuit through both tips contains a completing
        // path, and the search above has just ruled a completion out.
        auto [end_a, end_b] = detail::empty_ends(g, state.empty_edges[0]);
        VertexId near = std::min(end_a, end_b), far = std::max(end_a, end_b);
        Color c_near = tip_color(state, near), c_far = tip_color(state, far);
        if (c_near != c_far) {
            ColorPair pair(c_near, c_far);
            auto circ = detail::circuit_through(g, open_circuits(state, pair), near);
            if (!circ || detail::walk_touches(g, circ->walk, far))
                throw Error("run_parity_pass: tip-equalizing circuit is not tip-local");
            state = open_operation(state, *circ);
            std::ostringstream text;
            text << "pair=" << color_name(pair.a) << '/' << color_name(pair.b)
                 << " circuit=" << detail::edge_list_str(detail::walk_edges(g, circ->walk))
                 << ' ' << detail::open_curve_summary(state);
            out.log.push_back({"normalize", text.str()});
            c_near = c_far;
        }
        if (c_near != Color::red) {
            state.coloring = detail::swap_colors_globally(state.coloring, c_near, Color::red);
            require_open(state, "run_parity_pass recolor");
            out.log.push_back(
                {"recolor", std::string("swap=") + color_name(c_near) + "/" + color_name(Color::red)});
        }

        std::optional<Pentagon> pent = detect_pentagon(state);
        if (!pent) {
            CompletionSearch backing = open_completion_search(state, opts.full_budget);
            log_search(PassStage::start, backing, opts.full_budget);
            if (backing.completed)
                return complete_with(PassStage::start, round, std::move(backing));
            out.note = "no canonical five-region template at the empty edge";
            if (opts.write_falsifiers)
                out.note += "; state preserved at " + detail::preserve_open_state(
                                                          state, opts.falsifier_dir, "no-template");
            out.log.push_back({"note", out.note});
            out.rounds = round - 1;
            return out;
        }

        PassState ps{state, *pent, PassStage::start, {}};
        for (char step : {'A', 'B', 'C', 'D', 'E'}) {
            StepOutcome so = parity_pass_step(ps, step);
            if (!so.applicable) {
                std::ostringstream text;
                text << "step=" << step << " applicable=false reason=\"" << so.reason << '"';
                out.log.push_back({"step", text.str()});
                CompletionSearch backing = open_completion_search(ps.current, opts.full_budget);
                log_search(ps.stage, backing, opts.full_budget);
                if (backing.completed)
                    return complete_with(ps.stage, round, std::move(backing));
                std::string where;
                if (opts.write_falsifiers)
                    where = "; preserved at " + detail::preserve_open_state(
                                                    ps.current, opts.falsifier_dir, "falsifier");
                throw Error(std::string("run_parity_pass: step ") + step +
                            " is inapplicable but no completion by simple operations exists" +
                            where);
            }
            for (std::size_t i = ps.log.size(); i < so.state.log.size(); ++i)
                out.log.push_back(so.state.log[i]);
            ps = std::move(so.state);
            CompletionSearch mid = open_completion_search(ps.current, shallow);
            log_search(ps.stage, mid, shallow);
            if (mid.completed) return complete_with(ps.stage, round, std::move(mid));
        }
        state = ps.current;
        out.rounds = round;
    }
    out.note = "round limit reached";
    out.log.push_back({"note", out.note});
    return out;
}

} // namespace formations
