#pragma once

#include "formations/graph.hpp"

namespace formations {

// K4 drawn with vertex 0 in the center of the triangle 1,2,3. Edges
// 0:(0,1) 1:(0,2) 2:(0,3) 3:(1,2) 4:(2,3) 5:(3,1); dart 2k sits at the
// first endpoint. Rotations read counterclockwise off that drawing, giving
// four triangular faces and genus 0.
inline CubicGraph k4_graph() {
    std::vector<VertexRotation> vs = {
        {0, {0, 2, 4}},
        {1, {6, 1, 11}},
        {2, {8, 3, 7}},
        {3, {10, 5, 9}},
    };
    std::vector<EdgePairing> es = {{0, 0, 1}, {1, 2, 3},  {2, 4, 5},
                                   {3, 6, 7}, {4, 8, 9},  {5, 10, 11}};
    return build_graph(std::move(vs), std::move(es), "k4");
}

// Triangular prism: outer triangle 0,1,2, inner triangle 3,4,5, spokes
// i-(3+i). Edges 0..2 outer, 3..5 inner, 6..8 spokes; rotations from the
// nested drawing (genus 0, five faces).
inline CubicGraph prism_graph() {
    std::vector<VertexRotation> vs = {
        {0, {0, 12, 5}}, {1, {2, 14, 1}},  {2, {4, 16, 3}},
        {3, {13, 6, 11}}, {4, {15, 8, 7}}, {5, {17, 10, 9}},
    };
    std::vector<EdgePairing> es = {{0, 0, 1},   {1, 2, 3},   {2, 4, 5},
                                   {3, 6, 7},   {4, 8, 9},   {5, 10, 11},
                                   {6, 12, 13}, {7, 14, 15}, {8, 16, 17}};
    return build_graph(std::move(vs), std::move(es), "prism");
}

// Hexagonal prism: outer hexagon 0..5, inner hexagon 6..11, spokes
// i-(6+i). Edges 0..5 outer, 6..11 inner, 12..17 spokes; dart 2k at the
// first endpoint. Rotations from the nested drawing (genus 0, eight faces).
// Coloring both hexagons alternately and the spokes purple splits the
// formation into three red squares and three blue squares, so it carries
// edge-disjoint curve pairs of opposite colors.
inline CubicGraph hex_prism_graph() {
    std::vector<VertexRotation> vs;
    std::vector<EdgePairing> es;
    for (int i = 0; i < 6; ++i) es.push_back({i, 2 * i, 2 * i + 1});
    for (int i = 0; i < 6; ++i) es.push_back({6 + i, 12 + 2 * i, 13 + 2 * i});
    for (int i = 0; i < 6; ++i) es.push_back({12 + i, 24 + 2 * i, 25 + 2 * i});
    for (int i = 0; i < 6; ++i)
        vs.push_back({i, {2 * i, 24 + 2 * i, 2 * ((i + 5) % 6) + 1}});
    for (int i = 0; i < 6; ++i)
        vs.push_back({6 + i, {25 + 2 * i, 12 + 2 * i, 13 + 2 * ((i + 5) % 6)}});
    return build_graph(std::move(vs), std::move(es), "hex-prism");
}

// Petersen graph: outer pentagon 0..4, inner pentagram 5..9, spokes
// i-(5+i). Edges: i:(i,i+1 mod 5), 5+i:(i,5+i), 10+i:(5+i, 5+((i+2) mod 5));
// dart 2k at the first endpoint. The rotation below is one fixed choice;
// no rotation of the Petersen graph has genus 0.
inline CubicGraph petersen_graph() {
    std::vector<VertexRotation> vs;
    std::vector<EdgePairing> es;
    for (int i = 0; i < 5; ++i) es.push_back({i, 2 * i, 2 * i + 1});
    for (int i = 0; i < 5; ++i) es.push_back({5 + i, 10 + 2 * i, 11 + 2 * i});
    for (int i = 0; i < 5; ++i) es.push_back({10 + i, 20 + 2 * i, 21 + 2 * i});
    for (int i = 0; i < 5; ++i)
        vs.push_back({i, {2 * ((i + 4) % 5) + 1, 2 * i, 10 + 2 * i}});
    for (int i = 0; i < 5; ++i)
        vs.push_back({5 + i, {11 + 2 * i, 20 + 2 * i, 21 + 2 * ((i + 3) % 5)}});
    return build_graph(std::move(vs), std::move(es), "petersen");
}

} // namespace formations
