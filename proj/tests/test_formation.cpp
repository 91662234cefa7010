#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "formations/fixtures.hpp"
#include "formations/formation.hpp"
#include "formations/generator.hpp"

using namespace formations;

namespace {

EdgeColoring theta_rbp() {
    return EdgeColoring{{Color::red, Color::blue, Color::purple}};
}

// All red x blue curve pairs of a coloring, second curve relabeled so the
// pair is same-colored for idemposition.
std::vector<std::pair<Curve, Curve>> same_color_pairs(const CubicGraph& g, const EdgeColoring& c) {
    std::vector<std::pair<Curve, Curve>> out;
    for (const auto& r : curves_of_kind(g, c, CurveKind::red)) {
        for (auto b : curves_of_kind(g, c, CurveKind::blue)) {
            b.kind = CurveKind::red;
            out.push_back({r, b});
        }
    }
    return out;
}

} // namespace

TEST_CASE("theta formation: one red and one blue curve sharing the purple edge") {
    CubicGraph g = theta_graph();
    Formation f = coloring_to_formation(g, theta_rbp());
    REQUIRE(f.curves.size() == 2);
    REQUIRE(f.red_count() == 1);
    REQUIRE(f.blue_count() == 1);
    REQUIRE(f.curves[0].contains_edge(g, 0));
    REQUIRE(f.curves[0].contains_edge(g, 2));
    REQUIRE(f.curves[1].contains_edge(g, 1));
    REQUIRE(f.curves[1].contains_edge(g, 2));

    auto [g2, c2] = formation_to_coloring(f);
    REQUIRE(c2 == f.coloring);
    REQUIRE(serialize_graph(g2) == serialize_graph(g));
}

TEST_CASE("round trip identity and bijection on a module corpus") {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        CubicGraph g = generate_planar_cubic(seed, 4 + 2 * static_cast<int>(seed % 4));
        auto colorings = enumerate_colorings(g, 120);
        std::set<std::string> formation_keys;
        for (const auto& c : colorings) {
            Formation f = coloring_to_formation(g, c);
            formation_keys.insert(serialize_formation(f));
            REQUIRE(formation_to_coloring(f).second == c);
        }
        REQUIRE(formation_keys.size() == colorings.size());
    }
}

TEST_CASE("formation validity errors") {
    CubicGraph g = theta_graph();
    Formation f = coloring_to_formation(g, theta_rbp());

    Formation doubled = f;
    doubled.curves.push_back(f.curves[0]);
    REQUIRE_THROWS_WITH(formation_to_coloring(doubled),
                        Catch::Matchers::ContainsSubstring("share edge"));

    Formation missing = f;
    missing.curves.pop_back();
    REQUIRE_THROWS_WITH(formation_to_coloring(missing),
                        Catch::Matchers::ContainsSubstring("no curve"));
}

TEST_CASE("formation file round trip") {
    CubicGraph g = generate_planar_cubic(4, 8);
    auto colorings = enumerate_colorings(g, 5);
    REQUIRE_FALSE(colorings.empty());
    Formation f = coloring_to_formation(g, colorings[0]);
    std::string text = serialize_formation(f);
    Formation h = parse_formation(text, g);
    REQUIRE(serialize_formation(h) == text);
    REQUIRE(h.coloring == f.coloring);

    REQUIRE_THROWS_AS(parse_formation("curve green 0 1\n", g), ParseError);
    REQUIRE_THROWS_AS(parse_formation("curve red 0 2\n", g), ParseError);
    REQUIRE_THROWS_AS(parse_formation("loop red 0 1\n", g), ParseError);
}

TEST_CASE("theta purple edge is a bounce") {
    CubicGraph g = theta_graph();
    SegmentClass seg = classify_purple_edges(g, theta_rbp());
    REQUIRE(seg.kinds.size() == 1);
    REQUIRE(seg.kinds.at(2) == SegmentKind::bounce);
    REQUIRE(seg.cross_count() == 0);
}

TEST_CASE("genus 0 colorings have an even number of crossings") {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        CubicGraph g = generate_planar_cubic(seed, 4 + 2 * static_cast<int>(seed % 5));
        for (const auto& c : enumerate_colorings(g, 60)) {
            SegmentClass seg = classify_purple_edges(g, c);
            REQUIRE(seg.cross_count() % 2 == 0);
        }
    }
}

TEST_CASE("classify refuses higher genus embeddings") {
    CubicGraph k4 = k4_graph();
    std::vector<VertexRotation> vs = k4.vertices;
    std::reverse(vs[0].darts.begin(), vs[0].darts.end());
    CubicGraph twisted = build_graph(std::move(vs), k4.edges);
    EdgeColoring c = enumerate_colorings(twisted, 1).at(0);
    REQUIRE_THROWS_AS(classify_purple_edges(twisted, c), UnsupportedError);
}

TEST_CASE("curve counts: theta, K4, prism all (1,1,1); total equals delta") {
    REQUIRE(curve_counts(theta_graph(), theta_rbp()) == CurveCounts{1, 1, 1});
    CubicGraph k4 = k4_graph();
    for (const auto& c : enumerate_colorings(k4))
        REQUIRE(curve_counts(k4, c) == CurveCounts{1, 1, 1});
    CubicGraph prism = prism_graph();
    for (const auto& c : enumerate_colorings(prism))
        REQUIRE(curve_counts(prism, c) == CurveCounts{1, 1, 1});

    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        CubicGraph g = generate_planar_cubic(seed, 4 + 2 * static_cast<int>(seed % 5));
        for (const auto& c : enumerate_colorings(g, 80)) {
            CurveCounts n = curve_counts(g, c);
            REQUIRE(n.total() == delta_and_parity(g, c).delta);
        }
    }
}

TEST_CASE("idempose on theta: bounce cancellation leaves one curve") {
    CubicGraph g = theta_graph();
    EdgeColoring c = theta_rbp();
    auto pairs = same_color_pairs(g, c);
    REQUIRE(pairs.size() == 1);
    IdemposeResult r = idempose(g, pairs[0].first, pairs[0].second, classify_purple_edges(g, c));
    REQUIRE(r.counts.left == 0);
    REQUIRE(r.counts.right == 0);
    REQUIRE(r.counts.bounce == 1);
    REQUIRE(r.counts.p_value() == 1);
    REQUIRE(r.curves.size() == 1);
    // The mod-2 sum runs over the red and blue edges only.
    REQUIRE(r.curves[0].contains_edge(g, 0));
    REQUIRE(r.curves[0].contains_edge(g, 1));
    REQUIRE_FALSE(r.curves[0].contains_edge(g, 2));

    Curve blue_as_blue = pairs[0].second;
    blue_as_blue.kind = CurveKind::blue;
    REQUIRE_THROWS_AS(idempose(g, pairs[0].first, blue_as_blue, classify_purple_edges(g, c)),
                      ArgumentError);
}

TEST_CASE("idemposition lemma across a module corpus") {
    int disjoint_seen = 0, crossing_seen = 0, bounce_seen = 0;

    // Alternating hexagons with purple spokes: three red squares and three
    // blue squares, so some opposite-colored pairs never meet at all.
    {
        CubicGraph g = hex_prism_graph();
        EdgeColoring c{std::vector<Color>(18, Color::purple)};
        for (int i = 0; i < 6; ++i) {
            c.colors[i] = i % 2 ? Color::blue : Color::red;
            c.colors[6 + i] = i % 2 ? Color::blue : Color::red;
        }
        require_proper(g, c, "hex prism coloring");
        SegmentClass seg = classify_purple_edges(g, c);
        for (const auto& [a, b] : same_color_pairs(g, c)) {
            IdemposeResult r = idempose(g, a, b, seg);
            REQUIRE(static_cast<int>(r.curves.size()) % 2 == r.counts.p_value());
            if (r.counts.left + r.counts.right + r.counts.bounce == 0) {
                ++disjoint_seen;
                REQUIRE(r.curves.size() == 2);
                REQUIRE(std::set<Curve>{r.curves.begin(), r.curves.end()} ==
                        std::set<Curve>{a, b});
            }
        }
        // Each red square shares a spoke with two blue squares and misses one.
        REQUIRE(disjoint_seen == 3);
    }

    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        CubicGraph g = generate_planar_cubic(seed, 6 + 2 * static_cast<int>(seed % 5));
        for (const auto& c : enumerate_colorings(g, 40)) {
            SegmentClass seg = classify_purple_edges(g, c);
            for (const auto& [a, b] : same_color_pairs(g, c)) {
                IdemposeResult r = idempose(g, a, b, seg);
                REQUIRE((r.counts.left - r.counts.right) % 2 == 0);
                REQUIRE(static_cast<int>(r.curves.size()) % 2 == r.counts.p_value());
                if (r.counts.left + r.counts.right + r.counts.bounce == 0) {
                    ++disjoint_seen;
                    REQUIRE(r.curves.size() == 2);
                    REQUIRE(std::set<Curve>{r.curves.begin(), r.curves.end()} ==
                            std::set<Curve>{a, b});
                }
                if (r.counts.left + r.counts.right > 0) ++crossing_seen;
                if (r.counts.bounce > 0) ++bounce_seen;
            }
        }
    }
    REQUIRE(disjoint_seen > 0);
    REQUIRE(crossing_seen > 0);
    REQUIRE(bounce_seen > 0);
}

TEST_CASE("smoothing a bounce flips the idemposed curve parity") {
    int exercised = 0;
    for (std::uint64_t seed = 1; seed <= 12 && exercised < 8; ++seed) {
        CubicGraph g = generate_planar_cubic(seed, 8 + 2 * static_cast<int>(seed % 4));
        for (const auto& c : enumerate_colorings(g, 30)) {
            SegmentClass seg = classify_purple_edges(g, c);
            for (const auto& [e, kind] : seg.kinds) {
                if (kind != SegmentKind::bounce) continue;
                auto before_pair = [&]() -> std::optional<std::size_t> {
                    // The red and blue curve through e, idemposed.
                    for (const auto& [a, b] : same_color_pairs(g, c))
                        if (a.contains_edge(g, e) && b.contains_edge(g, e))
                            return idempose(g, a, b, seg).curves.size();
                    return {};
                }();
                REQUIRE(before_pair.has_value());

                std::pair<CubicGraph, EdgeColoring> smoothed;
                try {
                    smoothed = smooth_bounce(g, c, e);
                } catch (const ArgumentError&) {
                    continue;  // strand splice would close a free loop
                }
                const auto& [g2, c2] = smoothed;
                REQUIRE(is_proper(g2, c2));
                REQUIRE(trace_faces(g2).genus == 0);
                EdgeId red_merged = g2.edge_count() - 2;
                EdgeId blue_merged = g2.edge_count() - 1;
                SegmentClass seg2 = classify_purple_edges(g2, c2);
                std::optional<IdemposeResult> after;
                for (const auto& [a, b] : same_color_pairs(g2, c2))
                    if (a.contains_edge(g2, red_merged) && b.contains_edge(g2, blue_merged))
                        after = idempose(g2, a, b, seg2);
                REQUIRE(after.has_value());
                REQUIRE((after->curves.size() + *before_pair) % 2 == 1);
                ++exercised;
            }
            if (exercised >= 8) break;
        }
    }
    REQUIRE(exercised >= 8);
}
