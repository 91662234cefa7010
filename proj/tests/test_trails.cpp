#include <catch2/catch_amalgamated.hpp>

#include "formations/generator.hpp"
#include "formations/paritypass.hpp"
#include "formations/trails.hpp"

using namespace formations;

namespace {

// Oracle: enumerate every deficient coloring of (g, empty_edge) directly on
// the unsuppressed graph by backtracking over the non-empty edges, with the
// equal-tip rule enforced locally. Independent of reduce_trail and of the
// pullback machinery.
std::vector<DeficientFormation> oracle_deficiencies(const CubicGraph& g, EdgeId empty_edge) {
    std::vector<Color> cols(g.edge_count(), Color::none);
    VertexId u = g.vertex_of(g.edges[empty_edge].a);
    VertexId v = g.vertex_of(g.edges[empty_edge].b);
    auto feasible = [&](VertexId w) {
        Color x[3];
        int k = 0;
        bool tip = w == u || w == v;
        for (Dart t : g.vertices[w].darts) {
            if (g.edge_of(t) == empty_edge) continue;
            x[k++] = cols[g.edge_of(t)];
        }
        if (tip) return !(k == 2 && is_colored(x[0]) && is_colored(x[1]) && x[0] != x[1]);
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j)
                if (is_colored(x[i]) && x[i] == x[j]) return false;
        return true;
    };
    std::vector<DeficientFormation> out;
    auto rec = [&](auto&& self, EdgeId e) -> void {
        if (e == g.edge_count()) {
            DeficientFormation d;
            d.graph = g;
            d.empty_edge = empty_edge;
            d.coloring.colors = cols;
            out.push_back(std::move(d));
            return;
        }
        if (e == empty_edge) {
            self(self, e + 1);
            return;
        }
        for (Color c : {Color::red, Color::blue, Color::purple}) {
            cols[e] = c;
            VertexId a = g.vertex_of(g.edges[e].a), b = g.vertex_of(g.edges[e].b);
            if (feasible(a) && feasible(b)) self(self, e + 1);
        }
        cols[e] = Color::none;
    };
    if (u != v) rec(rec, 0);
    return out;
}

// Oracle: all simple alternating two-color paths between the empty edge's
// endpoints, by depth-first search over edge sequences rather than forced
// walks. Returns the shortest path, ties broken lexicographically.
std::optional<std::vector<EdgeId>> oracle_path(const DeficientFormation& d) {
    const CubicGraph& g = d.graph;
    VertexId u = g.vertex_of(g.edges[d.empty_edge].a);
    VertexId v = g.vertex_of(g.edges[d.empty_edge].b);
    std::optional<std::vector<EdgeId>> best;
    std::vector<char> used(g.edge_count(), 0);
    std::vector<EdgeId> path;
    auto rec = [&](auto&& self, VertexId at, Color prev) -> void {
        if (at == v) {
            if (path.size() >= 2 &&
                (!best || path.size() < best->size() ||
                 (path.size() == best->size() && path < *best)))
                best = path;
            return;
        }
        for (Dart x : g.vertices[at].darts) {
            EdgeId e = g.edge_of(x);
            if (e == d.empty_edge || used[e]) continue;
            Color c = d.coloring.at(e);
            if (!path.empty() &&
                (c == prev || (path.size() >= 2 && c != d.coloring.at(path[path.size() - 2]))))
                continue;
            VertexId to = g.vertex_of(g.mate(x));
            if (to == u) continue;
            used[e] = 1;
            path.push_back(e);
            self(self, to, c);
            path.pop_back();
            used[e] = 0;
        }
    };
    rec(rec, u, Color::none);
    return best;
}

EdgeColoring colors_of(std::initializer_list<char> cs) {
    EdgeColoring c;
    for (char ch : cs) c.colors.push_back(ch == '-' ? Color::none : parse_color(ch));
    return c;
}

// Disjoint union with vertex, edge, and dart ids of b offset past a.
CubicGraph offset_union(const CubicGraph& a, const CubicGraph& b, const std::string& label) {
    std::vector<VertexRotation> vs;
    std::vector<EdgePairing> es;
    for (VertexId w = 0; w < a.vertex_count(); ++w) vs.push_back({w, a.vertices[w].darts});
    for (EdgeId e = 0; e < a.edge_count(); ++e) es.push_back({e, a.edges[e].a, a.edges[e].b});
    int dv = a.vertex_count(), de = a.edge_count(), dd = a.dart_count();
    for (VertexId w = 0; w < b.vertex_count(); ++w) {
        VertexRotation r{w + dv, b.vertices[w].darts};
        for (Dart& x : r.darts) x += dd;
        vs.push_back(std::move(r));
    }
    for (EdgeId e = 0; e < b.edge_count(); ++e)
        es.push_back({e + de, b.edges[e].a + dd, b.edges[e].b + dd});
    return build_graph(std::move(vs), std::move(es), label);
}

} // namespace

TEST_CASE("deficiency validation enforces the tip rule") {
    DeficientFormation d = theta_trail();
    REQUIRE_NOTHROW(require_deficient(d));
    REQUIRE(tip_color(d, 0) == Color::purple);
    REQUIRE(tip_color(d, 1) == Color::purple);

    SECTION("the empty edge must be the only uncolored edge") {
        DeficientFormation bad = d;
        bad.coloring.set(0, Color::red);
        REQUIRE_THROWS_AS(require_deficient(bad), ArgumentError);
        bad = d;
        bad.coloring.set(1, Color::none);
        REQUIRE_THROWS_AS(require_deficient(bad), ArgumentError);
    }
    SECTION("tip colors must agree") {
        DeficientFormation bad = d;
        bad.coloring.set(2, Color::red);
        REQUIRE_THROWS_AS(require_deficient(bad), ArgumentError);
    }
    SECTION("vertices away from the empty edge must be proper") {
        DeficientFormation bad = ring_trail();
        bad.coloring.set(3, Color::blue);
        REQUIRE_THROWS_AS(require_deficient(bad), ArgumentError);
    }
    SECTION("a loop cannot be the empty edge") {
        DeficientFormation bad;
        bad.graph = dumbbell_graph();
        bad.empty_edge = 0;
        bad.coloring.colors = {Color::none, Color::red, Color::red};
        REQUIRE(bad.graph.vertex_of(bad.graph.edges[0].a) ==
                bad.graph.vertex_of(bad.graph.edges[0].b));
        REQUIRE_THROWS_AS(require_deficient(bad), ArgumentError);
    }
    SECTION("coloring size must match the edge set") {
        DeficientFormation bad = d;
        bad.coloring.colors.pop_back();
        REQUIRE_THROWS_AS(require_deficient(bad), ArgumentError);
    }
}

TEST_CASE("degenerate two-curve trails") {
    SECTION("theta minus an edge is a purple free loop") {
        DeficientFormation d = theta_trail();
        ReducedTrail r = reduce_trail(d);
        REQUIRE(r.graph.vertex_count() == 0);
        REQUIRE(r.graph.edge_count() == 0);
        REQUIRE(r.loop_colors == std::vector<Color>{Color::purple});
        REQUIRE(r.through_a == -1);
        REQUIRE(r.through_b == -1);
        REQUIRE(curve_count(d) == 2);

        auto [g_of_t, g_star] = trail_graphs(make_trail(d));
        REQUIRE(g_of_t.vertex_count() == 0);
        REQUIRE(serialize_graph(g_star) == serialize_graph(theta_graph()));

        PrimalityResult pr = primality_search(make_trail(d));
        REQUIRE(pr.prime);
        REQUIRE(pr.colorings_tried == 1);
        REQUIRE_FALSE(is_factored(d).factored);
        REQUIRE_FALSE(find_two_color_path(d).has_value());
    }
    SECTION("dumbbell minus the bridge is two one-color loops") {
        DeficientFormation d;
        d.graph = dumbbell_graph();
        d.empty_edge = 2;
        d.coloring.colors = {Color::red, Color::blue, Color::none};
        REQUIRE_NOTHROW(require_deficient(d));
        ReducedTrail r = reduce_trail(d);
        REQUIRE(r.graph.edge_count() == 0);
        REQUIRE(r.loop_colors == std::vector<Color>{Color::red, Color::blue});
        REQUIRE(curve_count(d) == 2);
        REQUIRE_FALSE(is_factored(d).factored);
        REQUIRE(primality_search(make_trail(d)).prime);
        // the two curves live in different components, so no pathway joins them
        REQUIRE_FALSE(find_two_color_path(d).has_value());
    }
}

TEST_CASE("ring trail: a red ring crossing two blue curves") {
    DeficientFormation d = ring_trail();
    REQUIRE_NOTHROW(require_deficient(d));
    REQUIRE(validate(d.graph).genus == 0);
    REQUIRE(d.graph.vertex_count() == 10);
    REQUIRE(d.graph.edge_count() == 15);
    REQUIRE(tip_color(d, 0) == Color::blue);
    REQUIRE(tip_color(d, 5) == Color::blue);

    ReducedTrail r = reduce_trail(d);
    REQUIRE(r.graph.vertex_count() == 8);
    REQUIRE(r.graph.edge_count() == 12);
    REQUIRE(r.loop_colors.empty());
    REQUIRE(r.through_a == 0);
    REQUIRE(r.through_b == 8);
    REQUIRE_NOTHROW(require_proper(r.graph, r.coloring, "reduced ring"));

    CurveCounts cc = curve_counts(r.graph, r.coloring);
    REQUIRE(cc.red == 1);
    REQUIRE(cc.blue == 2);
    REQUIRE(cc.alternating == 3);
    REQUIRE(curve_count(d) == 6);

    SECTION("removing both blue contextual curves leaves the connected ring") {
        FactorizationReport rep = is_factored(d);
        REQUIRE_FALSE(rep.factored);
        REQUIRE(rep.component_count == 1);
    }
    SECTION("operating on the top blue curve isolates a red digon") {
        auto circs = deficient_circuits(d, ColorPair(Color::blue, Color::purple));
        REQUIRE(circs.size() == 2);
        const TwoColorCircuit* top = nullptr;
        for (const auto& c : circs)
            for (Dart x : c.walk)
                if (d.graph.vertex_of(x) == 5) top = &c;
        REQUIRE(top != nullptr);
        DeficientFormation after = deficient_operation(d, *top);
        REQUIRE(tip_color(after, 0) == Color::blue);
        REQUIRE(tip_color(after, 5) == Color::purple);
        FactorizationReport rep = is_factored(after);
        REQUIRE(rep.factored);
        REQUIRE(rep.witness.has_value());
        REQUIRE(rep.witness->kind == CurveKind::red);
        REQUIRE(rep.witness->walk.size() == 2);
        REQUIRE_FALSE(rep.witness->touches_vertex(after.graph, 0));
        REQUIRE_FALSE(rep.witness->touches_vertex(after.graph, 5));

        // the swap is an involution on deficient colorings
        DeficientFormation back = deficient_operation(after, *top);
        REQUIRE(back.coloring == d.coloring);
    }
    SECTION("the trail factorizes: some coloring of G(T) pulls back factored") {
        PrimalityResult pr = primality_search(make_trail(d));
        REQUIRE_FALSE(pr.prime);
        REQUIRE(pr.colorings_tried == 2);
        REQUIRE(pr.witness.has_value());
        REQUIRE_NOTHROW(require_deficient(*pr.witness));
        REQUIRE(is_factored(*pr.witness).factored);
    }
}

TEST_CASE("two-color paths and completion") {
    SECTION("the ring trail completes over a blue/red path") {
        DeficientFormation d = ring_trail();
        auto path = find_two_color_path(d);
        REQUIRE(path.has_value());
        REQUIRE(*path == std::vector<EdgeId>{0, 5, 9});
        EdgeColoring done = complete_over_empty_edge(d, *path);
        REQUIRE(done.colors == colors_of({'r', 'b', 'b', 'p', 'p', 'b', 'r', 'r', 'r', 'r', 'p',
                                          'b', 'p', 'b', 'p'}).colors);
        REQUIRE(is_proper(d.graph, done));
        REQUIRE(done.at(d.empty_edge) == Color::purple);
    }
    SECTION("a stale path is rejected") {
        DeficientFormation d = ring_trail();
        auto path = find_two_color_path(d);
        REQUIRE(path.has_value());
        auto circs = deficient_circuits(d, ColorPair(Color::blue, Color::purple));
        const TwoColorCircuit* top = nullptr;
        for (const auto& c : circs)
            for (Dart x : c.walk)
                if (d.graph.vertex_of(x) == 5) top = &c;
        DeficientFormation after = deficient_operation(d, *top);
        REQUIRE_THROWS_AS(complete_over_empty_edge(after, *path), ArgumentError);
    }
    SECTION("malformed paths are rejected") {
        DeficientFormation d = ring_trail();
        REQUIRE_THROWS_AS(complete_over_empty_edge(d, {0}), ArgumentError);
        REQUIRE_THROWS_AS(complete_over_empty_edge(d, {0, 7}), ArgumentError);
        REQUIRE_THROWS_AS(complete_over_empty_edge(d, {0, 14}), ArgumentError);
        REQUIRE_THROWS_AS(complete_over_empty_edge(d, {0, 1}), ArgumentError);
        REQUIRE_THROWS_AS(complete_over_empty_edge(d, {2, 7, 13, 13}), ArgumentError);
    }
    SECTION("forced walks agree with an exhaustive path oracle") {
        int compared = 0;
        for (std::uint64_t seed = 1; seed <= 6; ++seed) {
            CubicGraph g = generate_planar_cubic(seed, 6 + 2 * (seed % 3));
            EdgeId e = static_cast<EdgeId>(seed % g.edge_count());
            if (g.vertex_of(g.edges[e].a) == g.vertex_of(g.edges[e].b)) continue;
            for (const DeficientFormation& cand : oracle_deficiencies(g, e)) {
                auto got = find_two_color_path(cand);
                auto want = oracle_path(cand);
                REQUIRE(got.has_value() == want.has_value());
                if (got) {
                    REQUIRE(*got == *want);
                    REQUIRE(is_proper(g, complete_over_empty_edge(cand, *got)));
                }
                ++compared;
            }
        }
        REQUIRE(compared >= 30);
    }
}

TEST_CASE("petersen trail is prime with curve count five") {
    DeficientFormation d = petersen_trail();
    REQUIRE_NOTHROW(require_deficient(d));
    VertexId u = d.graph.vertex_of(d.graph.edges[0].a);
    VertexId v = d.graph.vertex_of(d.graph.edges[0].b);
    REQUIRE(tip_color(d, u) == Color::blue);
    REQUIRE(tip_color(d, v) == Color::blue);

    auto [g_of_t, g_star] = trail_graphs(make_trail(d));
    REQUIRE(serialize_graph(g_star) == serialize_graph(petersen_graph()));
    REQUIRE(count_colorings(g_star) == 0);
    REQUIRE(g_of_t.vertex_count() == 8);
    REQUIRE(g_of_t.edge_count() == 12);

    ReducedTrail r = reduce_trail(d);
    CurveCounts cc = curve_counts(r.graph, r.coloring);
    REQUIRE(cc.red == 1);
    REQUIRE(cc.blue == 2);
    REQUIRE(cc.alternating == 2);
    REQUIRE(curve_count(d) == 5);

    FactorizationReport rep = is_factored(d);
    REQUIRE_FALSE(rep.factored);
    REQUIRE(rep.component_count == 1);

    PrimalityResult pr = primality_search(make_trail(d));
    REQUIRE(pr.prime);
    REQUIRE(pr.colorings_tried == 18);

    SECTION("one contextual operation drops the count to four") {
        auto circs = deficient_circuits(d, ColorPair(Color::blue, Color::purple));
        const TwoColorCircuit* through_u = nullptr;
        bool also_through_v = false;
        for (const auto& c : circs) {
            bool tu = false, tv = false;
            for (Dart x : c.walk) {
                tu |= d.graph.vertex_of(x) == u || d.graph.vertex_of(d.graph.mate(x)) == u;
                tv |= d.graph.vertex_of(x) == v || d.graph.vertex_of(d.graph.mate(x)) == v;
            }
            if (tu) {
                through_u = &c;
                also_through_v = tv;
            }
        }
        REQUIRE(through_u != nullptr);
        REQUIRE_FALSE(also_through_v);
        DeficientFormation after = deficient_operation(d, *through_u);
        REQUIRE(tip_color(after, u) != tip_color(after, v));
        REQUIRE(curve_count(after) == 4);
        // still prime territory: every curve passes an endpoint
        REQUIRE_FALSE(is_factored(after).factored);
    }
    SECTION("no deficiency of the petersen trail is completable") {
        auto all = oracle_deficiencies(d.graph, d.empty_edge);
        REQUIRE(all.size() == 18);
        for (const auto& cand : all) REQUIRE_FALSE(find_two_color_path(cand).has_value());
    }
}

TEST_CASE("purple contextual curves: removal leaves one component") {
    DeficientFormation d = purple_contexts_trail();
    REQUIRE_NOTHROW(require_deficient(d));
    VertexId u = d.graph.vertex_of(d.graph.edges[0].a);
    VertexId v = d.graph.vertex_of(d.graph.edges[0].b);
    REQUIRE(tip_color(d, u) == Color::purple);
    REQUIRE(tip_color(d, v) == Color::purple);
    FactorizationReport rep = is_factored(d);
    REQUIRE_FALSE(rep.factored);
    REQUIRE(rep.component_count == 1);
    REQUIRE(curve_count(d) == 5);
}

TEST_CASE("equal tips factor when a component avoids the contexts") {
    // A properly colored theta disjoint from the purple-context trail is an
    // exchangeable part: the residue after contextual removal has two
    // components.
    DeficientFormation base = purple_contexts_trail();
    CubicGraph joined = offset_union(base.graph, theta_graph(), "purple-contexts-plus-theta");
    DeficientFormation d;
    d.graph = joined;
    d.empty_edge = base.empty_edge;
    d.coloring = base.coloring;
    d.coloring.colors.push_back(Color::red);
    d.coloring.colors.push_back(Color::blue);
    d.coloring.colors.push_back(Color::purple);
    REQUIRE_NOTHROW(require_deficient(d));
    FactorizationReport rep = is_factored(d);
    REQUIRE(rep.factored);
    REQUIRE(rep.component_count == 2);
}

TEST_CASE("suppression structure over fixtures and corpus") {
    auto check = [](const DeficientFormation& d) {
        ReducedTrail r = reduce_trail(d);
        REQUIRE_NOTHROW(require_proper(r.graph, r.coloring, "reduced"));
        // lifts and loops partition the colored edges
        std::vector<int> cover(d.graph.edge_count(), 0);
        cover[d.empty_edge] = 1;
        for (const auto& lift : r.lifts)
            for (EdgeId e : lift) ++cover[e];
        int loop_edges = 0;
        for (int x : cover) loop_edges += x == 0;
        for (EdgeId e = 0; e < d.graph.edge_count(); ++e) REQUIRE(cover[e] <= 1);
        if (r.loop_colors.empty()) REQUIRE(loop_edges == 0);
        // merged colors match their lifted edges
        for (std::size_t k = 0; k < r.lifts.size(); ++k)
            for (EdgeId e : r.lifts[k])
                REQUIRE(d.coloring.at(e) == r.coloring.at(static_cast<EdgeId>(k)));
        // the through edges carry the tip colors
        VertexId u = d.graph.vertex_of(d.graph.edges[d.empty_edge].a);
        VertexId v = d.graph.vertex_of(d.graph.edges[d.empty_edge].b);
        if (r.through_a >= 0) REQUIRE(r.coloring.at(r.through_a) == tip_color(d, u));
        if (r.through_b >= 0) REQUIRE(r.coloring.at(r.through_b) == tip_color(d, v));
    };
    check(theta_trail());
    check(ring_trail());
    check(petersen_trail());
    check(purple_contexts_trail());

    int graphs_checked = 0;
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        CubicGraph g = generate_planar_cubic(seed, 6 + 2 * (seed % 3));
        EdgeId e = static_cast<EdgeId>((seed * 5) % g.edge_count());
        if (g.vertex_of(g.edges[e].a) == g.vertex_of(g.edges[e].b)) continue;
        auto all = oracle_deficiencies(g, e);
        if (all.empty()) continue;
        ++graphs_checked;
        check(all.front());
        // every deficiency is a pullback times free-loop recolorings
        ReducedTrail r = reduce_trail(all.front());
        long long expect = count_colorings(r.graph);
        for (std::size_t i = 0; i < r.loop_colors.size(); ++i) expect *= 3;
        REQUIRE(static_cast<long long>(all.size()) == expect);
    }
    REQUIRE(graphs_checked >= 5);
}

TEST_CASE("primality search agrees with the independent sweep") {
    // The oracle enumerates deficient colorings on the unsuppressed graph and
    // applies is_factored directly; primality_search sweeps colorings of the
    // reduced graph and pulls them back. With no free loops the two state
    // spaces are in bijection.
    auto compare = [](const CubicGraph& g, EdgeId e) -> bool {
        auto all = oracle_deficiencies(g, e);
        if (all.empty()) return false;
        ReducedTrail r = reduce_trail(all.front());
        if (!r.loop_colors.empty() || r.graph.edge_count() > 16) return false;
        bool oracle_factored = false;
        for (const auto& cand : all) oracle_factored |= is_factored(cand).factored;
        PrimalityResult pr = primality_search(make_trail(all.front()));
        REQUIRE(pr.prime == !oracle_factored);
        REQUIRE(pr.colorings_tried >= 1);
        if (!pr.prime) {
            REQUIRE(pr.witness.has_value());
            REQUIRE(is_factored(*pr.witness).factored);
        }
        return true;
    };
    REQUIRE(compare(petersen_graph(), 0));
    REQUIRE(compare(ring_trail().graph, 14));
    int compared = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        CubicGraph g = generate_planar_cubic(seed, 6 + 2 * (seed % 2));
        EdgeId e = static_cast<EdgeId>(seed % g.edge_count());
        if (g.vertex_of(g.edges[e].a) == g.vertex_of(g.edges[e].b)) continue;
        compared += compare(g, e);
    }
    REQUIRE(compared >= 6);
}

TEST_CASE("deficient circuits away from the tips match the reduced circuits") {
    for (const DeficientFormation& d : {ring_trail(), petersen_trail()}) {
        ReducedTrail r = reduce_trail(d);
        Color tip_u = tip_color(d, d.graph.vertex_of(d.graph.edges[d.empty_edge].a));
        Color tip_v = tip_color(d, d.graph.vertex_of(d.graph.edges[d.empty_edge].b));
        for (ColorPair pair : all_color_pairs()) {
            if (pair.contains(tip_u) || pair.contains(tip_v)) continue;
            REQUIRE(deficient_circuits(d, pair).size() ==
                    two_color_circuits(r.graph, r.coloring, pair).size());
        }
    }
}

TEST_CASE("deficient coloring files round trip") {
    for (const DeficientFormation& d :
         {theta_trail(), ring_trail(), petersen_trail(), purple_contexts_trail()}) {
        std::string text = serialize_deficient(d);
        DeficientFormation back = parse_deficient(text, d.graph);
        REQUIRE(back.empty_edge == d.empty_edge);
        REQUIRE(back.coloring == d.coloring);
    }
    CubicGraph g = theta_graph();
    REQUIRE_THROWS_AS(parse_deficient("color 1 p\ncolor 2 p\n", g), ParseError);
    REQUIRE_THROWS_AS(parse_deficient("empty 0\nempty 1\ncolor 2 p\n", g), ParseError);
    REQUIRE_THROWS_AS(parse_deficient("empty 9\ncolor 1 p\ncolor 2 p\n", g), ParseError);
    REQUIRE_THROWS_AS(parse_deficient("empty 0\ncolor 1 q\ncolor 2 p\n", g), ParseError);
    REQUIRE_THROWS_AS(parse_deficient("empty 0\ncolor 1 p\ncolor 1 p\n", g), ParseError);
    // colors parse but break the tip rule
    REQUIRE_THROWS_AS(parse_deficient("empty 0\ncolor 1 r\ncolor 2 p\n", g), ArgumentError);
}

TEST_CASE("primality search respects its size bound") {
    REQUIRE_THROWS_AS(primality_search(make_trail(ring_trail()), 4), ResourceError);
}
