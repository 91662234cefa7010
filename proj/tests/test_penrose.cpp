#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "formations/fixtures.hpp"
#include "formations/formation.hpp"
#include "formations/generator.hpp"
#include "formations/penrose.hpp"

using namespace formations;

namespace {

// Independent evaluator used to freeze expected brackets: literal complex
// arithmetic per node, recursive assignment enumeration, inversion-count
// permutation signs. Shares no code path with the library summations.
struct Gauss {
    long long re = 0;
    long long im = 0;
};

Gauss gmul(Gauss a, Gauss b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }

int inversion_sign(int a, int b, int c) {
    if (a == b || a == c || b == c) return 0;
    int inversions = (a > b) + (a > c) + (b > c);
    return inversions % 2 ? -1 : 1;
}

Gauss node_factor(const CubicGraph& g, const VertexRotation& v, const std::vector<int>& col) {
    auto c = [&](int i) { return col[g.edge_of(v.darts[static_cast<std::size_t>(i)])]; };
    if (v.is_cross()) return {c(0) == c(2) && c(1) == c(3) ? 1LL : 0LL, 0};
    return {0, inversion_sign(c(0), c(1), c(2))};
}

void oracle_rec(const CubicGraph& g, std::vector<int>& col, std::size_t e, Gauss& sum) {
    if (e == col.size()) {
        Gauss acc{1, 0};
        for (const auto& v : g.vertices) acc = gmul(acc, node_factor(g, v, col));
        sum.re += acc.re;
        sum.im += acc.im;
        return;
    }
    for (int c = 1; c <= 3; ++c) {
        col[e] = c;
        oracle_rec(g, col, e + 1, sum);
    }
}

long long oracle_bracket(const PenroseDiagram& d) {
    std::vector<int> col(static_cast<std::size_t>(d.graph.edge_count()), 0);
    Gauss sum;
    oracle_rec(d.graph, col, 0, sum);
    REQUIRE(sum.im == 0);
    long long v = sum.re;
    for (int i = 0; i < d.free_loops; ++i) v *= 3;
    return v;
}

PenroseDiagram diagram(const CubicGraph& g) { return {g, 0}; }

} // namespace

TEST_CASE("bracket values are frozen against an independent evaluator") {
    struct Row {
        CubicGraph g;
        long long expect;
    };
    const Row rows[] = {
        {theta_graph(), 6},
        {k4_graph(), 6},
        {prism_graph(), 6},
        {dumbbell_graph(), 0},
        {generate_planar_cubic(3, 8), 24},
    };
    for (const auto& row : rows) {
        INFO(row.g.label);
        CHECK(oracle_bracket(diagram(row.g)) == row.expect);
        CHECK(bracket_state_sum(diagram(row.g)) == BracketValue{row.expect, 0});
    }
    // nonplanar: the state sum still evaluates, and this graph has no colorings
    CHECK(oracle_bracket(diagram(petersen_graph())) == 0);
    CHECK(bracket_state_sum(diagram(petersen_graph())).value == 0);
}

TEST_CASE("a free loop is worth three") {
    CubicGraph empty = build_graph({}, {}, "strands");
    CHECK(bracket_state_sum({empty, 0}).value == 1);
    CHECK(bracket_state_sum({empty, 1}).value == 3);
    CHECK(bracket_state_sum({empty, 2}).value == 9);
    CHECK(oracle_bracket({empty, 1}) == 3);
}

TEST_CASE("plain and contracted summations agree across a corpus") {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        CubicGraph g = generate_planar_cubic(seed, 6 + 2 * static_cast<int>(seed % 2));
        INFO(g.label);
        CHECK(detail::bracket_plain(g) == detail::bracket_contracted(g));
        CHECK(bracket_state_sum(diagram(g)).value == oracle_bracket(diagram(g)));
    }
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        CubicGraph g = generate_planar_cubic(seed, 10);
        INFO(g.label);
        CHECK(detail::bracket_plain(g) == detail::bracket_contracted(g));
    }
    // the contracted path restarts its breadth-first order on disconnected input
    std::vector<VertexRotation> vs = {
        {0, {0, 4, 2}}, {1, {1, 3, 5}}, {2, {6, 10, 8}}, {3, {7, 9, 11}}};
    std::vector<EdgePairing> es = {{0, 0, 1}, {1, 2, 3}, {2, 4, 5},
                                   {3, 6, 7}, {4, 8, 9}, {5, 10, 11}};
    CubicGraph pair = build_graph(std::move(vs), std::move(es), "two-thetas");
    CHECK(oracle_bracket(diagram(pair)) == 36);
    CHECK(detail::bracket_contracted(pair) == 36);
    CHECK(bracket_state_sum(diagram(pair)).value == 36);
}

TEST_CASE("the bracket counts proper colorings at genus zero") {
    CHECK(check_penrose(theta_graph()));
    CHECK(check_penrose(k4_graph()));
    CHECK(check_penrose(prism_graph()));
    CHECK(check_penrose(dumbbell_graph()));
    CHECK(check_penrose(hex_prism_graph()));
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        CubicGraph g = generate_planar_cubic(seed, 6 + 2 * static_cast<int>(seed % 5));
        INFO(g.label);
        CHECK(check_penrose(g));
    }
}

TEST_CASE("smoothing an edge rewires it both ways") {
    CubicGraph theta = theta_graph();

    PenroseDiagram par = parallel_smoothing(theta, 0);
    CHECK(par.graph.vertex_count() == 0);
    CHECK(par.graph.edge_count() == 0);
    CHECK(par.free_loops == 2);
    CHECK(bracket_state_sum(par).value == 9);

    CubicGraph crs = cross_smoothing(theta, 0);
    REQUIRE(crs.vertex_count() == 1);
    CHECK(crs.vertices[0].is_cross());
    CHECK(crs.edge_count() == 2);
    CHECK(bracket_state_sum(diagram(crs)).value == 3);
    CHECK(oracle_bracket(diagram(crs)) == 3);

    // crossing nodes survive a serialization round trip
    CubicGraph kc = cross_smoothing(k4_graph(), 0);
    CHECK(oracle_bracket(diagram(kc)) == -6);
    CHECK(bracket_state_sum(diagram(kc)).value == -6);
    std::string text = serialize_graph(kc);
    CHECK(text.find("cross ") != std::string::npos);
    CubicGraph back = parse_graph(text);
    CHECK(bracket_state_sum(diagram(back)).value == -6);
}

TEST_CASE("deleting an edge satisfies the bracket recursion") {
    for (EdgeId e = 0; e < 3; ++e) CHECK(recursion_check(diagram(theta_graph()), e));
    for (EdgeId e = 0; e < 6; ++e) CHECK(recursion_check(diagram(k4_graph()), e));
    for (EdgeId e = 0; e < 9; ++e) CHECK(recursion_check(diagram(prism_graph()), e));

    int checked = 0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        CubicGraph g = generate_planar_cubic(seed, 6 + 2 * static_cast<int>(seed % 4));
        EdgeId e = static_cast<EdgeId>(seed % g.edge_count());
        INFO(g.label << " edge " << e);
        CHECK(recursion_check(diagram(g), e));
        ++checked;
    }
    CHECK(checked == 50);
}

TEST_CASE("epsilon node signs calibrate the orientation convention") {
    CubicGraph theta = theta_graph();
    EdgeColoring c{{Color::red, Color::blue, Color::purple}};
    // vertex 0 reads (red, purple, blue) counterclockwise: odd, sign -1;
    // vertex 1 reads (red, blue, purple): even, sign +1
    CHECK(vertex_sign(theta, c, 0).sign == -1);
    CHECK(vertex_sign(theta, c, 1).sign == 1);
    CHECK(sign_product(theta, c) == 1);

    // exchanging two colors flips every vertex sign
    EdgeColoring swapped{{Color::blue, Color::red, Color::purple}};
    CHECK(vertex_sign(theta, swapped, 0).sign == 1);
    CHECK(vertex_sign(theta, swapped, 1).sign == -1);
    CHECK(sign_product(theta, swapped) == 1);
}

TEST_CASE("every coloring contributes plus one at genus zero") {
    int colorings_checked = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        CubicGraph g = generate_planar_cubic(seed, 6 + 2 * static_cast<int>(seed % 4));
        for (const auto& c : enumerate_colorings(g, std::optional<std::size_t>(50))) {
            INFO(g.label);
            REQUIRE(sign_product(g, c) == 1);
            // the sign is the crossing parity of the induced formation
            int crossings = classify_purple_edges(g, c).cross_count();
            REQUIRE(sign_product(g, c) == (crossings % 2 ? -1 : 1));
            ++colorings_checked;
        }
    }
    CHECK(colorings_checked >= 60);

    // frozen instance: the theta formation bounces at its purple edge
    CubicGraph theta = theta_graph();
    EdgeColoring c{{Color::red, Color::blue, Color::purple}};
    CHECK(classify_purple_edges(theta, c).cross_count() == 0);
}

TEST_CASE("bracket and smoothing preconditions reject bad input") {
    CubicGraph db = dumbbell_graph();
    CHECK_THROWS_AS(parallel_smoothing(db, 0), ArgumentError);
    CHECK_THROWS_AS(cross_smoothing(db, 0), ArgumentError);
    CHECK_THROWS_AS(parallel_smoothing(db, 7), ArgumentError);

    // edges into a crossing node cannot be smoothed again
    CubicGraph kc = cross_smoothing(k4_graph(), 0);
    EdgeId at_cross = -1;
    for (const auto& v : kc.vertices)
        if (v.is_cross()) at_cross = kc.edge_of(v.darts[0]);
    REQUIRE(at_cross >= 0);
    CHECK_THROWS_AS(parallel_smoothing(kc, at_cross), ArgumentError);
    CHECK_THROWS_AS(cross_smoothing(kc, at_cross), ArgumentError);

    CHECK_THROWS_AS(check_penrose(petersen_graph()), UnsupportedError);
    CHECK_THROWS_AS(check_penrose(kc), ArgumentError);

    EdgeColoring c{{Color::red, Color::blue, Color::purple}};
    CHECK_THROWS_AS(vertex_sign(theta_graph(), c, 5), ArgumentError);
    CubicGraph tc = cross_smoothing(theta_graph(), 0);
    EdgeColoring tcc{{Color::red, Color::red}};
    CHECK_THROWS_AS(vertex_sign(tc, tcc, 0), ArgumentError);
}
