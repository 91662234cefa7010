#pragma once

#include <random>

#include "formations/graph.hpp"

namespace formations {

namespace detail {

// Subdivision bookkeeping for one face-respecting expansion. Splitting the
// edge under dart d inserts a new vertex m between d's vertex and the far
// end; walking in d's direction the chosen face lies to the right, so the
// counterclockwise rotation at m is (continuation, back, into-face).
struct SplitPoint {
    Dart toward;     // dart whose edge is split, anchored at the near end
    Dart back;       // new dart at m pointing back toward d's vertex
    Dart cont;       // new dart at m continuing toward the far end
    Dart join;       // new dart at m entering the face
};

} // namespace detail

// One expansion: pick two distinct dart positions on one face, subdivide
// both edges, and join the two new vertices by an edge inside the face.
// Adds 2 vertices, 3 edges, 1 face; preserves genus, connectivity, and
// bridgelessness.
inline CubicGraph expand_in_face(const CubicGraph& g, const std::vector<Dart>& face, int pos_a,
                                 int pos_b) {
    if (pos_a == pos_b) throw ArgumentError("expansion needs two distinct face positions");
    Dart da = face[pos_a];
    Dart db = face[pos_b];
    if (g.edge_of(da) == g.edge_of(db))
        throw ArgumentError("expansion darts lie on one edge (bridge-like face)");

    std::vector<VertexRotation> vs = g.vertices;
    std::vector<EdgePairing> es = g.edges;
    Dart next_dart = static_cast<Dart>(g.dart_count());
    VertexId next_vertex = g.vertex_count();
    EdgeId next_edge = g.edge_count();

    auto split = [&](Dart toward) {
        detail::SplitPoint s;
        s.toward = toward;
        s.back = next_dart++;
        s.cont = next_dart++;
        s.join = next_dart++;
        Dart far = g.mate(toward);
        // Old edge keeps its id on the near half; far half becomes a new edge.
        es[g.edge_of(toward)] = {g.edge_of(toward), toward, s.back};
        es.push_back({next_edge++, s.cont, far});
        vs.push_back({next_vertex++, {s.cont, s.back, s.join}});
        return s;
    };

    detail::SplitPoint sa = split(da);
    detail::SplitPoint sb = split(db);
    es.push_back({next_edge++, sa.join, sb.join});
    return build_graph(std::move(vs), std::move(es), g.label);
}

// Deterministic planar cubic instance generator: theta plus seeded
// face-respecting expansions until the vertex target is met. Sampling uses
// raw mt19937_64 draws (mod bound) so results are identical across
// platforms.
inline CubicGraph generate_planar_cubic(std::uint64_t seed, int target_vertices) {
    if (target_vertices < 2 || target_vertices % 2 != 0)
        throw ArgumentError("target vertex count must be even and at least 2");
    std::mt19937_64 rng(seed);
    CubicGraph g = theta_graph();
    g.label = "gen-s" + std::to_string(seed) + "-n" + std::to_string(target_vertices);
    while (g.vertex_count() < target_vertices) {
        FaceSet fs = trace_faces(g);
        const auto& face = fs.faces[rng() % fs.faces.size()];
        const int len = static_cast<int>(face.size());
        int pos_a = static_cast<int>(rng() % len);
        int pos_b = static_cast<int>(rng() % (len - 1));
        if (pos_b >= pos_a) ++pos_b;
        g = expand_in_face(g, face, pos_a, pos_b);
    }
    return g;
}

} // namespace formations
