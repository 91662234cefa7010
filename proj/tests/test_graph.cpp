#include <catch2/catch_amalgamated.hpp>

#include "formations/fixtures.hpp"
#include "formations/generator.hpp"
#include "formations/graph.hpp"

using namespace formations;

TEST_CASE("theta graph structure and faces") {
    CubicGraph g = theta_graph();
    REQUIRE(g.vertex_count() == 2);
    REQUIRE(g.edge_count() == 3);
    REQUIRE(g.cubic());

    FaceSet fs = trace_faces(g);
    REQUIRE(fs.face_count() == 3);
    REQUIRE(fs.genus == 0);
    // Canonical faces: each cycle starts at its smallest dart, sorted.
    REQUIRE(fs.faces == std::vector<std::vector<Dart>>{{0, 3}, {1, 4}, {2, 5}});

    Diagnostics d = validate(g);
    REQUIRE(d.is_cubic);
    REQUIRE(d.is_connected);
    REQUIRE(d.loops.empty());
    REQUIRE(d.bridges.empty());
    REQUIRE(d.genus == 0);
    REQUIRE(d.plane_bridgeless_cubic());
}

TEST_CASE("dumbbell diagnostics: loops and a bridge") {
    CubicGraph g = dumbbell_graph();
    Diagnostics d = validate(g);
    REQUIRE(d.is_cubic);
    REQUIRE(d.is_connected);
    REQUIRE(d.loops == std::vector<EdgeId>{0, 1});
    REQUIRE(d.bridges == std::vector<EdgeId>{2});
    REQUIRE(d.genus == 0);
    REQUIRE_FALSE(d.plane_bridgeless_cubic());
}

TEST_CASE("parse and serialize round trip") {
    CubicGraph g = theta_graph();
    std::string text = serialize_graph(g);
    CubicGraph h = parse_graph(text);
    REQUIRE(serialize_graph(h) == text);
    REQUIRE(h.vertex_count() == 2);
    REQUIRE(h.edge_count() == 3);

    std::string commented = "# a theta with noise\n\n" + text + "  # tail comment is fine\n";
    REQUIRE(serialize_graph(parse_graph(commented)) == text);
}

TEST_CASE("parse errors name the offending line") {
    REQUIRE_THROWS_AS(parse_graph("vertex 0 0 1 2 3\n"), ParseError);
    REQUIRE_THROWS_WITH(parse_graph("vertex 0 0 1 2 3\n"),
                        Catch::Matchers::ContainsSubstring("non-cubic vertex"));
    REQUIRE_THROWS_WITH(parse_graph("frob 0 1 2\n"), Catch::Matchers::ContainsSubstring("line 1"));
    REQUIRE_THROWS_AS(parse_graph("vertex 0 0 1 1\n"), ParseError);
    REQUIRE_THROWS_AS(parse_graph("edge 0 1 1\n"), ParseError);
    // dart 2 is in a rotation but paired nowhere
    REQUIRE_THROWS_AS(parse_graph("vertex 0 0 1 2\nvertex 1 3 4 5\n"
                                  "edge 0 0 1\nedge 1 3 4\nedge 2 5 5\n"),
                      ParseError);
    // dart 0 appears in two rotations
    REQUIRE_THROWS_AS(parse_graph("vertex 0 0 1 2\nvertex 1 0 4 5\n"
                                  "edge 0 0 1\nedge 1 2 4\nedge 2 3 5\n"),
                      ParseError);
}

TEST_CASE("K4 from a theta expansion: faces and reversal") {
    CubicGraph theta = theta_graph();
    FaceSet fs = trace_faces(theta);
    CubicGraph k4 = expand_in_face(theta, fs.faces[0], 0, 1);
    REQUIRE(k4.vertex_count() == 4);
    REQUIRE(k4.edge_count() == 6);
    Diagnostics d = validate(k4);
    REQUIRE(d.plane_bridgeless_cubic());
    REQUIRE(trace_faces(k4).face_count() == 4);

    // Every pair of vertices adjacent: it really is K4.
    std::set<std::pair<VertexId, VertexId>> adj;
    for (const auto& e : k4.edges) {
        VertexId u = k4.vertex_of(e.a), v = k4.vertex_of(e.b);
        adj.insert({std::min(u, v), std::max(u, v)});
    }
    REQUIRE(adj.size() == 6);

    CubicGraph fixed = k4_graph();
    REQUIRE(trace_faces(fixed).face_count() == 4);
    REQUIRE(validate(fixed).plane_bridgeless_cubic());

    // Reversing one rotation makes the embedding toroidal.
    std::vector<VertexRotation> vs = fixed.vertices;
    std::reverse(vs[0].darts.begin(), vs[0].darts.end());
    CubicGraph twisted = build_graph(std::move(vs), fixed.edges);
    REQUIRE(trace_faces(twisted).genus == 1);
}

TEST_CASE("prism fixture is plane and bridgeless") {
    CubicGraph g = prism_graph();
    Diagnostics d = validate(g);
    REQUIRE(d.plane_bridgeless_cubic());
    REQUIRE(trace_faces(g).face_count() == 5);
}

TEST_CASE("petersen fixture: cubic, bridgeless, never genus 0") {
    CubicGraph g = petersen_graph();
    Diagnostics d = validate(g);
    REQUIRE(d.is_cubic);
    REQUIRE(d.is_connected);
    REQUIRE(d.loops.empty());
    REQUIRE(d.bridges.empty());
    REQUIRE(d.genus >= 1);
}

TEST_CASE("generator base case and small targets") {
    CubicGraph g2 = generate_planar_cubic(1, 2);
    REQUIRE(g2.vertex_count() == 2);
    REQUIRE(g2.edge_count() == 3);

    CubicGraph g4 = generate_planar_cubic(1, 4);
    REQUIRE(g4.vertex_count() == 4);
    REQUIRE(validate(g4).plane_bridgeless_cubic());

    CubicGraph g20 = generate_planar_cubic(7, 20);
    REQUIRE(g20.vertex_count() == 20);
    REQUIRE(validate(g20).plane_bridgeless_cubic());

    REQUIRE_THROWS_AS(generate_planar_cubic(1, 5), ArgumentError);
    REQUIRE_THROWS_AS(generate_planar_cubic(1, 0), ArgumentError);
}

TEST_CASE("generator sweep: Euler, handshake, diagnostics, determinism") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        int target = 4 + 2 * static_cast<int>(seed % 7);
        CubicGraph g = generate_planar_cubic(seed, target);
        REQUIRE(g.vertex_count() == target);
        REQUIRE(3 * g.vertex_count() == 2 * g.edge_count());
        FaceSet fs = trace_faces(g);
        REQUIRE(g.vertex_count() - g.edge_count() + fs.face_count() == 2);
        REQUIRE(validate(g).plane_bridgeless_cubic());

        CubicGraph again = generate_planar_cubic(seed, target);
        REQUIRE(serialize_graph(again) == serialize_graph(g));
    }
}

TEST_CASE("face tracing covers every dart exactly once") {
    CubicGraph g = generate_planar_cubic(3, 12);
    FaceSet fs = trace_faces(g);
    std::vector<int> hits(g.dart_count(), 0);
    for (const auto& f : fs.faces)
        for (Dart d : f) ++hits[d];
    REQUIRE(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
}
