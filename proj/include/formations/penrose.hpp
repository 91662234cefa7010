#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <tuple>
#include <vector>

#include "formations/coloring.hpp"
#include "formations/graph.hpp"

namespace formations {

// A strand diagram: epsilon nodes (3 darts), crossing nodes (4 darts,
// opposite darts are through-strands), plus closed strands touching no
// node at all. Crossing nodes identify colors across the crossing and
// carry no sign; each free loop multiplies the bracket by 3.
struct PenroseDiagram {
    CubicGraph graph;
    int free_loops = 0;
};

struct BracketValue {
    long long value = 0;
    // Residue mod 4 of unabsorbed sqrt(-1) factors; always 0 for diagrams
    // that build, since their epsilon node count is even.
    int i_power = 0;
    auto operator<=>(const BracketValue&) const = default;
};

struct VertexSign {
    // Coefficient of sqrt(-1) at an epsilon node: +1 when the
    // counterclockwise colors read an even permutation of (red, blue, purple).
    int sign = 0;
};

namespace detail {

// Color indices 1,2,3; zero on a repeat, sign of the permutation otherwise.
inline int epsilon(int a, int b, int c) {
    if (a == b || b == c || a == c) return 0;
    return b == a % 3 + 1 ? 1 : -1;
}

// Sum over all 3^E assignments of the product of node tensors, without the
// sqrt(-1) factors. Oracle-grade: no pruning beyond a zero product.
inline long long bracket_plain(const CubicGraph& g) {
    const int E = g.edge_count();
    std::vector<int> col(static_cast<std::size_t>(E), 1);
    long long sum = 0;
    for (;;) {
        int prod = 1;
        for (const auto& v : g.vertices) {
            auto c = [&](int i) { return col[g.edge_of(v.darts[static_cast<std::size_t>(i)])]; };
            prod *= v.is_cross() ? (c(0) == c(2) && c(1) == c(3) ? 1 : 0)
                                 : epsilon(c(0), c(1), c(2));
            if (!prod) break;
        }
        sum += prod;
        int k = 0;
        while (k < E && col[k] == 3) col[k++] = 1;
        if (k == E) break;
        ++col[k];
    }
    return sum;
}

// Same sum by edge-by-edge contraction. States are the colors seen so far
// at partially assigned vertices (two bits per rotation slot); a breadth
// first edge order keeps that frontier small. Exact integer weights.
inline long long bracket_contracted(const CubicGraph& g) {
    const int E = g.edge_count();
    if (E == 0) return 1;
    const int V = g.vertex_count();

    std::vector<int> order(static_cast<std::size_t>(V), -1);
    {
        int next_ord = 0;
        std::vector<VertexId> queue;
        for (VertexId s = 0; s < V; ++s) {
            if (order[s] != -1) continue;
            order[s] = next_ord++;
            queue.push_back(s);
            for (std::size_t qi = queue.size() - 1; qi < queue.size(); ++qi)
                for (Dart d : g.vertices[queue[qi]].darts) {
                    VertexId t = g.vertex_of(g.mate(d));
                    if (order[t] == -1) {
                        order[t] = next_ord++;
                        queue.push_back(t);
                    }
                }
        }
    }
    std::vector<EdgeId> eorder(static_cast<std::size_t>(E));
    std::iota(eorder.begin(), eorder.end(), 0);
    std::sort(eorder.begin(), eorder.end(), [&](EdgeId a, EdgeId b) {
        auto key = [&](EdgeId e) {
            int x = order[g.vertex_of(g.edges[e].a)];
            int y = order[g.vertex_of(g.edges[e].b)];
            return std::tuple(std::max(x, y), std::min(x, y), e);
        };
        return key(a) < key(b);
    });

    std::vector<int> slot(static_cast<std::size_t>(2 * E), 0);
    std::vector<int> deg(static_cast<std::size_t>(V), 0);
    for (const auto& v : g.vertices) {
        deg[v.id] = static_cast<int>(v.darts.size());
        for (std::size_t i = 0; i < v.darts.size(); ++i)
            slot[v.darts[i]] = static_cast<int>(i);
    }

    auto code_color = [](std::uint16_t code, int s) { return (code >> (2 * s)) & 3; };
    auto tensor_of = [&](VertexId w, std::uint16_t code) -> int {
        if (deg[w] == 3) return epsilon(code_color(code, 0), code_color(code, 1), code_color(code, 2));
        return code_color(code, 0) == code_color(code, 2) &&
                       code_color(code, 1) == code_color(code, 3)
                   ? 1
                   : 0;
    };

    std::vector<int> cnt(static_cast<std::size_t>(V), 0);
    std::vector<VertexId> front;
    std::map<std::vector<std::uint16_t>, long long> cur;
    cur[{}] = 1;

    for (int k = 0; k < E; ++k) {
        EdgeId e = eorder[k];
        Dart da = g.edges[e].a, db = g.edges[e].b;
        VertexId x = g.vertex_of(da), y = g.vertex_of(db);

        std::vector<int> add(static_cast<std::size_t>(V), 0);
        ++add[x];
        ++add[y];
        std::vector<VertexId> nfront;
        for (VertexId w = 0; w < V; ++w)
            if (cnt[w] + add[w] > 0 && cnt[w] + add[w] < deg[w]) nfront.push_back(w);

        auto pos_in = [](const std::vector<VertexId>& f, VertexId t) -> int {
            auto it = std::lower_bound(f.begin(), f.end(), t);
            return it != f.end() && *it == t ? static_cast<int>(it - f.begin()) : -1;
        };
        bool x_done = cnt[x] + add[x] == deg[x];
        bool y_done = cnt[y] + add[y] == deg[y];

        std::map<std::vector<std::uint16_t>, long long> nxt;
        for (const auto& [key, weight] : cur) {
            auto old_code = [&](VertexId t) -> std::uint16_t {
                int p = pos_in(front, t);
                return p < 0 ? 0 : key[static_cast<std::size_t>(p)];
            };
            for (std::uint16_t c = 1; c <= 3; ++c) {
                std::uint16_t cx = old_code(x);
                cx = static_cast<std::uint16_t>(cx | (c << (2 * slot[da])));
                std::uint16_t cy;
                if (x == y) {
                    cx = static_cast<std::uint16_t>(cx | (c << (2 * slot[db])));
                    cy = cx;
                } else {
                    cy = static_cast<std::uint16_t>(old_code(y) | (c << (2 * slot[db])));
                }
                long long mult = 1;
                if (x_done) mult *= tensor_of(x, cx);
                if (y_done && y != x) mult *= tensor_of(y, cy);
                if (!mult) continue;
                std::vector<std::uint16_t> nkey(nfront.size());
                for (std::size_t i = 0; i < nfront.size(); ++i) {
                    VertexId t = nfront[i];
                    nkey[i] = t == x ? cx : t == y ? cy : old_code(t);
                }
                nxt[std::move(nkey)] += weight * mult;
            }
        }
        cur = std::move(nxt);
        front = std::move(nfront);
        ++cnt[x];
        ++cnt[y];
    }

    long long total = 0;
    for (const auto& [key, weight] : cur) total += weight;
    return total;
}

} // namespace detail

// The bracket: sum over all edge colorings of the product of node tensors,
// an epsilon node contributing sqrt(-1) times the sign of its
// counterclockwise colors and a crossing node the swap tensor. The
// accumulated i factors collapse to a sign because the node count is even.
inline BracketValue bracket_state_sum(const PenroseDiagram& d) {
    const CubicGraph& g = d.graph;
    int epsilon_nodes = 0;
    for (const auto& v : g.vertices)
        if (!v.is_cross()) ++epsilon_nodes;
    if (epsilon_nodes % 2)
        throw ArgumentError("diagram has an odd number of epsilon nodes");
    long long s = g.edge_count() <= 12 ? detail::bracket_plain(g) : detail::bracket_contracted(g);
    long long value = epsilon_nodes % 4 == 0 ? s : -s;
    for (int i = 0; i < d.free_loops; ++i) value *= 3;
    return {value, 0};
}

inline VertexSign vertex_sign(const CubicGraph& g, const EdgeColoring& c, VertexId v) {
    if (v < 0 || v >= g.vertex_count()) throw ArgumentError("no such vertex");
    const auto& rot = g.vertices[static_cast<std::size_t>(v)];
    if (rot.is_cross()) throw ArgumentError("vertex_sign needs an epsilon node");
    require_proper(g, c, "vertex_sign");
    auto idx = [&](Dart d) { return static_cast<int>(c.at(g.edge_of(d))); };
    return {detail::epsilon(idx(rot.darts[0]), idx(rot.darts[1]), idx(rot.darts[2]))};
}

// Product of the full node tensors over one proper coloring: +1 or -1 once
// the paired-up i factors are folded in.
inline int sign_product(const CubicGraph& g, const EdgeColoring& c) {
    require_proper(g, c, "sign_product");
    int prod = 1, nodes = 0;
    for (const auto& v : g.vertices) {
        if (v.is_cross()) throw ArgumentError("sign_product needs epsilon nodes only");
        auto idx = [&](Dart d) { return static_cast<int>(c.at(g.edge_of(d))); };
        prod *= detail::epsilon(idx(v.darts[0]), idx(v.darts[1]), idx(v.darts[2]));
        ++nodes;
    }
    if (nodes % 2) throw ArgumentError("odd epsilon node count");
    return nodes % 4 == 0 ? prod : -prod;
}

inline bool check_penrose(const CubicGraph& g) {
    if (!g.cubic()) throw ArgumentError("check_penrose needs a cubic graph");
    if (validate(g).genus != 0)
        throw UnsupportedError("the bracket counts colorings only at genus 0");
    return bracket_state_sum({g, 0}).value == count_colorings(g);
}

namespace detail {

struct SmoothingEnds {
    Dart du, dv;
    VertexId u, v;
    Dart a1, a2, b1, b2;
};

// With the smoothed edge drawn from u upward to v, a1/a2 are u's other
// strands on the left/right and b2/b1 are v's (counterclockwise rotation
// puts v's left strand two steps after the edge dart).
inline SmoothingEnds smoothing_ends(const CubicGraph& g, EdgeId e) {
    if (e < 0 || e >= g.edge_count()) throw ArgumentError("no such edge");
    SmoothingEnds s;
    s.du = g.edges[e].a;
    s.dv = g.edges[e].b;
    s.u = g.vertex_of(s.du);
    s.v = g.vertex_of(s.dv);
    if (s.u == s.v) throw ArgumentError("cannot smooth a loop");
    if (g.vertices[s.u].is_cross() || g.vertices[s.v].is_cross())
        throw ArgumentError("smoothing needs epsilon nodes at both ends");
    s.a1 = g.next(s.du);
    s.a2 = g.next(s.a1);
    s.b1 = g.next(s.dv);
    s.b2 = g.next(s.b1);
    return s;
}

struct Rebuild {
    std::vector<VertexRotation> vertices;
    std::vector<EdgePairing> edges;
    std::map<Dart, Dart> dart_map;

    // Registers one new edge over old anchor darts, smaller anchor first.
    void add_edge(Dart x, Dart y) {
        Dart lo = std::min(x, y), hi = std::max(x, y);
        EdgeId id = static_cast<EdgeId>(edges.size());
        dart_map[lo] = 2 * id;
        dart_map[hi] = 2 * id + 1;
        edges.push_back({id, 2 * id, 2 * id + 1});
    }
};

} // namespace detail

// Replaces edge e and its two epsilon endpoints by two parallel strands,
// joining left to left and right to right. Strand chains that close up
// count as free loops.
inline PenroseDiagram parallel_smoothing(const CubicGraph& g, EdgeId e) {
    detail::SmoothingEnds s = detail::smoothing_ends(g, e);
    std::map<Dart, Dart> link = {{s.a1, s.b2}, {s.b2, s.a1}, {s.a2, s.b1}, {s.b1, s.a2}};
    auto at_ends = [&](Dart d) {
        VertexId w = g.vertex_of(d);
        return w == s.u || w == s.v;
    };

    // Chase each strand from an anchor (a dart at a surviving vertex)
    // through the junction links; key new edges by the smallest old edge id
    // they absorb so the rebuild is deterministic.
    struct Chain {
        EdgeId key;
        Dart x, y;
    };
    std::vector<Chain> chains;
    std::map<Dart, bool> used_end;
    std::vector<char> seen(static_cast<std::size_t>(2 * g.edge_count()), 0);
    for (Dart d = 0; d < 2 * g.edge_count(); ++d) {
        if (seen[d] || g.edge_of(d) == e || at_ends(d)) continue;
        EdgeId key = g.edge_of(d);
        Dart o = g.mate(d);
        while (at_ends(o)) {
            used_end[o] = true;
            Dart hop = link.at(o);
            used_end[hop] = true;
            key = std::min(key, g.edge_of(hop));
            o = g.mate(hop);
        }
        seen[d] = seen[o] = 1;
        chains.push_back({key, d, o});
    }
    int free_loops = 0;
    for (const auto& [dart, flag] : link) {
        (void)flag;
        if (used_end.count(dart) || g.edge_of(dart) == e) continue;
        Dart o = dart;
        do {
            used_end[o] = true;
            Dart hop = link.at(o);
            used_end[hop] = true;
            o = g.mate(hop);
        } while (o != dart);
        ++free_loops;
    }
    std::sort(chains.begin(), chains.end(),
              [](const Chain& a, const Chain& b) { return a.key < b.key; });

    detail::Rebuild rb;
    for (const auto& ch : chains) rb.add_edge(ch.x, ch.y);
    for (const auto& v : g.vertices) {
        if (v.id == s.u || v.id == s.v) continue;
        VertexRotation nv;
        nv.id = static_cast<VertexId>(rb.vertices.size());
        for (Dart d : v.darts) nv.darts.push_back(rb.dart_map.at(d));
        rb.vertices.push_back(std::move(nv));
    }
    return {build_graph(std::move(rb.vertices), std::move(rb.edges), g.label), free_loops};
}

// Replaces edge e and its two epsilon endpoints by a crossing node whose
// through-strands join u's left to v's right and u's right to v's left.
inline CubicGraph cross_smoothing(const CubicGraph& g, EdgeId e) {
    detail::SmoothingEnds s = detail::smoothing_ends(g, e);
    detail::Rebuild rb;
    for (const auto& old : g.edges) {
        if (old.id == e) continue;
        rb.add_edge(old.a, old.b);
    }
    for (const auto& v : g.vertices) {
        if (v.id == s.u || v.id == s.v) continue;
        VertexRotation nv;
        nv.id = static_cast<VertexId>(rb.vertices.size());
        for (Dart d : v.darts) nv.darts.push_back(rb.dart_map.at(d));
        rb.vertices.push_back(std::move(nv));
    }
    VertexRotation cross;
    cross.id = static_cast<VertexId>(rb.vertices.size());
    for (Dart d : {s.a1, s.a2, s.b1, s.b2}) cross.darts.push_back(rb.dart_map.at(d));
    rb.vertices.push_back(std::move(cross));
    return build_graph(std::move(rb.vertices), std::move(rb.edges), g.label);
}

// The recursion of the bracket: an edge between two epsilon nodes equals
// the parallel smoothing minus the crossing smoothing.
inline bool recursion_check(const PenroseDiagram& d, EdgeId e) {
    PenroseDiagram par = parallel_smoothing(d.graph, e);
    par.free_loops += d.free_loops;
    PenroseDiagram crs{cross_smoothing(d.graph, e), d.free_loops};
    return bracket_state_sum(d).value ==
           bracket_state_sum(par).value - bracket_state_sum(crs).value;
}

} // namespace formations
