#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "formations/core.hpp"

namespace formations {

// A vertex with its counterclockwise dart rotation. Three darts at an
// ordinary vertex; four at a crossing node (used by the bracket recursion),
// where opposite rotation positions are the through-strands.
struct VertexRotation {
    VertexId id = -1;
    std::vector<Dart> darts;

    bool is_cross() const { return darts.size() == 4; }
};

struct EdgePairing {
    EdgeId id = -1;
    Dart a = kNoDart;
    Dart b = kNoDart;

    Dart other(Dart d) const { return d == a ? b : a; }
};

// Cubic multigraph with an explicit rotation system. Loops and parallel
// edges are first class. Immutable after build_graph; the dart_* tables are
// derived indexes (mate is the edge involution, next/prev the rotation).
// Ids are required to be dense: vertices 0..V-1, edges 0..E-1, darts
// 0..2E-1 (counting a crossing node as carrying 4 darts).
struct CubicGraph {
    std::vector<VertexRotation> vertices;
    std::vector<EdgePairing> edges;
    std::string label;

    std::vector<VertexId> dart_vertex;
    std::vector<EdgeId> dart_edge;
    std::vector<Dart> dart_mate;
    std::vector<Dart> dart_next;
    std::vector<Dart> dart_prev;

    int vertex_count() const { return static_cast<int>(vertices.size()); }
    int edge_count() const { return static_cast<int>(edges.size()); }
    int dart_count() const { return static_cast<int>(dart_mate.size()); }

    Dart mate(Dart d) const { return dart_mate[d]; }
    Dart next(Dart d) const { return dart_next[d]; }
    Dart prev(Dart d) const { return dart_prev[d]; }
    VertexId vertex_of(Dart d) const { return dart_vertex[d]; }
    EdgeId edge_of(Dart d) const { return dart_edge[d]; }

    bool cubic() const {
        for (const auto& v : vertices)
            if (v.darts.size() != 3) return false;
        return true;
    }

    bool has_cross_nodes() const {
        for (const auto& v : vertices)
            if (v.is_cross()) return true;
        return false;
    }
};

struct FaceSet {
    // Each face is a dart cycle of the face permutation, rotated to start at
    // its smallest dart; faces sorted by that dart. Faces are traced lying to
    // the right of each traversed dart.
    std::vector<std::vector<Dart>> faces;
    int genus = 0;

    int face_count() const { return static_cast<int>(faces.size()); }
};

struct Diagnostics {
    bool is_cubic = false;
    bool is_connected = false;
    std::vector<EdgeId> loops;
    std::vector<EdgeId> bridges;
    int genus = 0;

    // A graph the downstream theory applies to without caveats.
    bool plane_bridgeless_cubic() const {
        return is_cubic && is_connected && bridges.empty() && genus == 0;
    }
};

namespace detail {

inline void index_check(const CubicGraph& g) {
    int vid = 0;
    for (const auto& v : g.vertices) {
        if (v.id != vid++) throw ArgumentError("vertex ids must be dense and ordered");
        if (v.darts.size() != 3 && v.darts.size() != 4)
            throw ArgumentError("vertex " + std::to_string(v.id) + " lists " +
                                std::to_string(v.darts.size()) + " darts");
    }
    int eid = 0;
    for (const auto& e : g.edges) {
        if (e.id != eid++) throw ArgumentError("edge ids must be dense and ordered");
        if (e.a == e.b) throw ArgumentError("edge " + std::to_string(e.id) + " pairs a dart with itself");
    }
}

} // namespace detail

// Builds the derived dart tables and checks the map axioms: every dart id in
// 0..2E-1 appears in exactly one rotation and one pairing.
inline CubicGraph build_graph(std::vector<VertexRotation> vertices, std::vector<EdgePairing> edges,
                              std::string label = {}) {
    CubicGraph g;
    g.vertices = std::move(vertices);
    g.edges = std::move(edges);
    g.label = std::move(label);
    detail::index_check(g);

    const int n_darts = 2 * g.edge_count();
    g.dart_vertex.assign(n_darts, -1);
    g.dart_edge.assign(n_darts, -1);
    g.dart_mate.assign(n_darts, kNoDart);
    g.dart_next.assign(n_darts, kNoDart);
    g.dart_prev.assign(n_darts, kNoDart);

    auto check_dart = [&](Dart d) {
        if (d < 0 || d >= n_darts)
            throw ArgumentError("dart " + std::to_string(d) + " out of range 0.." +
                                std::to_string(n_darts - 1));
    };

    for (const auto& v : g.vertices) {
        const int k = static_cast<int>(v.darts.size());
        for (int i = 0; i < k; ++i) {
            Dart d = v.darts[i];
            check_dart(d);
            if (g.dart_vertex[d] != -1)
                throw ArgumentError("dart " + std::to_string(d) + " appears in two rotations");
            g.dart_vertex[d] = v.id;
            g.dart_next[d] = v.darts[(i + 1) % k];
            g.dart_prev[d] = v.darts[(i + k - 1) % k];
        }
    }
    for (const auto& e : g.edges) {
        check_dart(e.a);
        check_dart(e.b);
        if (g.dart_edge[e.a] != -1 || g.dart_edge[e.b] != -1)
            throw ArgumentError("edge " + std::to_string(e.id) + " reuses a paired dart");
        g.dart_edge[e.a] = e.id;
        g.dart_edge[e.b] = e.id;
        g.dart_mate[e.a] = e.b;
        g.dart_mate[e.b] = e.a;
    }
    for (Dart d = 0; d < n_darts; ++d) {
        if (g.dart_vertex[d] == -1)
            throw ArgumentError("dart " + std::to_string(d) + " missing from every rotation");
        if (g.dart_edge[d] == -1)
            throw ArgumentError("dart " + std::to_string(d) + " missing from every pairing");
    }
    return g;
}

// Line-oriented graph file: '#' comments, `vertex <vid> <d1> <d2> <d3>`,
// `cross <vid> <d1> <d2> <d3> <d4>`, `edge <eid> <dA> <dB>`. Rotations are
// counterclockwise. Errors name the offending line.
inline CubicGraph parse_graph(const std::string& text) {
    std::vector<VertexRotation> vertices;
    std::vector<EdgePairing> edges;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;

    auto fail = [&](const std::string& msg) -> void {
        throw ParseError("line " + std::to_string(line_no) + ": " + msg);
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string kw;
        if (!(ls >> kw)) continue;

        auto read_int = [&](const char* what) {
            long long x;
            if (!(ls >> x) || x < 0) fail(std::string("expected non-negative integer for ") + what);
            return static_cast<std::int32_t>(x);
        };
        auto expect_end = [&]() {
            std::string extra;
            if (ls >> extra) fail("trailing token '" + extra + "'");
        };

        if (kw == "vertex" || kw == "cross") {
            VertexRotation v;
            v.id = read_int("vertex id");
            const int k = (kw == "cross") ? 4 : 3;
            for (int i = 0; i < k; ++i) v.darts.push_back(read_int("dart id"));
            if (kw == "vertex") {
                std::string extra;
                if (ls >> extra) fail("non-cubic vertex " + std::to_string(v.id) + " lists extra darts");
            } else {
                expect_end();
            }
            std::set<Dart> seen(v.darts.begin(), v.darts.end());
            if (seen.size() != v.darts.size())
                fail("vertex " + std::to_string(v.id) + " repeats a dart");
            vertices.push_back(std::move(v));
        } else if (kw == "edge") {
            EdgePairing e;
            e.id = read_int("edge id");
            e.a = read_int("dart id");
            e.b = read_int("dart id");
            expect_end();
            if (e.a == e.b) fail("edge " + std::to_string(e.id) + " pairs a dart with itself");
            edges.push_back(e);
        } else {
            fail("unknown keyword '" + kw + "'");
        }
    }

    std::sort(vertices.begin(), vertices.end(),
              [](const VertexRotation& x, const VertexRotation& y) { return x.id < y.id; });
    std::sort(edges.begin(), edges.end(),
              [](const EdgePairing& x, const EdgePairing& y) { return x.id < y.id; });
    try {
        return build_graph(std::move(vertices), std::move(edges));
    } catch (const ArgumentError& e) {
        throw ParseError(e.what());
    }
}

inline std::string serialize_graph(const CubicGraph& g) {
    std::ostringstream out;
    for (const auto& v : g.vertices) {
        out << (v.is_cross() ? "cross" : "vertex") << ' ' << v.id;
        for (Dart d : v.darts) out << ' ' << d;
        out << '\n';
    }
    for (const auto& e : g.edges) out << "edge " << e.id << ' ' << e.a << ' ' << e.b << '\n';
    return out.str();
}

// Face permutation: the dart after d is the rotation successor of its mate.
// With counterclockwise rotations this traces each face lying to the right
// of the traversal, and every dart lies on exactly one face.
inline FaceSet trace_faces(const CubicGraph& g) {
    FaceSet fs;
    const int n = g.dart_count();
    std::vector<char> done(n, 0);
    for (Dart start = 0; start < n; ++start) {
        if (done[start]) continue;
        std::vector<Dart> cycle;
        Dart d = start;
        do {
            cycle.push_back(d);
            done[d] = 1;
            d = g.next(g.mate(d));
        } while (d != start);
        fs.faces.push_back(std::move(cycle));
    }

    // Euler formula per connected component: V - E + F = 2c - 2g in total.
    std::vector<int> comp(g.vertex_count(), -1);
    int n_comp = 0;
    for (VertexId s = 0; s < g.vertex_count(); ++s) {
        if (comp[s] != -1) continue;
        std::vector<VertexId> stack{s};
        comp[s] = n_comp;
        while (!stack.empty()) {
            VertexId v = stack.back();
            stack.pop_back();
            for (Dart d : g.vertices[v].darts) {
                VertexId u = g.vertex_of(g.mate(d));
                if (comp[u] == -1) {
                    comp[u] = n_comp;
                    stack.push_back(u);
                }
            }
        }
        ++n_comp;
    }
    const int euler = g.vertex_count() - g.edge_count() + fs.face_count();
    fs.genus = (2 * n_comp - euler) / 2;
    return fs;
}

namespace detail {

struct BridgeFinder {
    const CubicGraph& g;
    std::vector<int> disc, low;
    std::vector<EdgeId> bridges;
    int timer = 0;

    explicit BridgeFinder(const CubicGraph& graph)
        : g(graph), disc(graph.vertex_count(), -1), low(graph.vertex_count(), -1) {}

    void dfs(VertexId v, EdgeId enter_edge) {
        disc[v] = low[v] = timer++;
        for (Dart d : g.vertices[v].darts) {
            EdgeId e = g.edge_of(d);
            if (e == enter_edge) continue;
            VertexId u = g.vertex_of(g.mate(d));
            if (u == v) continue;
            if (disc[u] == -1) {
                dfs(u, e);
                low[v] = std::min(low[v], low[u]);
                if (low[u] > disc[v]) bridges.push_back(e);
            } else {
                low[v] = std::min(low[v], disc[u]);
            }
        }
    }
};

} // namespace detail

inline Diagnostics validate(const CubicGraph& g) {
    Diagnostics d;
    d.is_cubic = g.cubic();

    for (const auto& e : g.edges)
        if (g.vertex_of(e.a) == g.vertex_of(e.b)) d.loops.push_back(e.id);

    detail::BridgeFinder bf(g);
    if (g.vertex_count() > 0) {
        bf.dfs(0, -1);
        d.is_connected = std::count(bf.disc.begin(), bf.disc.end(), -1) == 0;
        if (!d.is_connected)
            for (VertexId v = 0; v < g.vertex_count(); ++v)
                if (bf.disc[v] == -1) bf.dfs(v, -1);
    }
    std::sort(bf.bridges.begin(), bf.bridges.end());
    d.bridges = std::move(bf.bridges);

    d.genus = trace_faces(g).genus;
    return d;
}

// The smallest bridgeless cubic graph: two vertices joined by three parallel
// edges. Drawn with vertex 0 on the left, edges 0/1/2 top to bottom; the
// rotations below give three faces, hence genus 0.
inline CubicGraph theta_graph() {
    std::vector<VertexRotation> vs = {{0, {0, 4, 2}}, {1, {1, 3, 5}}};
    std::vector<EdgePairing> es = {{0, 0, 1}, {1, 2, 3}, {2, 4, 5}};
    return build_graph(std::move(vs), std::move(es), "theta");
}

// Two loops joined by a connecting edge: the simplest uncolorable cubic
// graph. The connector is a bridge and both loops are loops.
inline CubicGraph dumbbell_graph() {
    std::vector<VertexRotation> vs = {{0, {0, 1, 2}}, {1, {3, 4, 5}}};
    std::vector<EdgePairing> es = {{0, 0, 1}, {1, 3, 4}, {2, 2, 5}};
    return build_graph(std::move(vs), std::move(es), "dumbbell");
}

} // namespace formations
