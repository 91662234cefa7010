// formlab: one executable exposing the library's operations over the plain
// text graph/coloring/formation formats, plus fixture management and the
// corpus harnesses. Reports are line-oriented key=value, deterministic for a
// given config so runs can be diffed. Exit codes: 0 pass, 1 check failure,
// 2 usage or parse error, 3 resource bound hit.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "formations/coloring.hpp"
#include "formations/draw.hpp"
#include "formations/fixtures.hpp"
#include "formations/formation.hpp"
#include "formations/generator.hpp"
#include "formations/graph.hpp"
#include "formations/paritypass.hpp"
#include "formations/penrose.hpp"
#include "formations/trails.hpp"

namespace fs = std::filesystem;
using namespace formations;

namespace {

constexpr int kPass = 0;
constexpr int kCheckFail = 1;
constexpr int kUsage = 2;

std::string read_file(const fs::path& p) {
    if (p == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(p, std::ios::binary);
    if (!in) throw ArgumentError("cannot open " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw ArgumentError("cannot write " + p.string());
    out << text;
}

fs::path fixture_dir() {
    if (const char* env = std::getenv("FORMATION_LAB_FIXTURES")) return env;
    return "fixtures";
}

const std::map<std::string, CubicGraph (*)()>& builtin_fixtures() {
    static const std::map<std::string, CubicGraph (*)()> m = {
        {"theta", theta_graph},   {"dumbbell", dumbbell_graph},
        {"k4", k4_graph},         {"prism", prism_graph},
        {"hex-prism", hex_prism_graph}, {"petersen", petersen_graph},
    };
    return m;
}

// Fixture files override builtins of the same name so transcriptions can be
// shipped as data; builtins keep the basic graphs available with no data dir.
CubicGraph load_fixture_graph(const std::string& name) {
    fs::path file = fixture_dir() / (name + ".graph");
    if (fs::exists(file)) {
        CubicGraph g = parse_graph(read_file(file));
        g.label = name;
        return g;
    }
    const auto& b = builtin_fixtures();
    if (auto it = b.find(name); it != b.end()) return it->second();
    throw ArgumentError("unknown fixture '" + name + "' (no " + file.string() + ", no builtin)");
}

std::optional<EdgeColoring> load_fixture_coloring(const std::string& name, const CubicGraph& g) {
    fs::path file = fixture_dir() / (name + ".coloring");
    if (!fs::exists(file)) return std::nullopt;
    return parse_coloring(read_file(file), g);
}

const std::map<std::string, DeficientFormation (*)()>& builtin_trails() {
    static const std::map<std::string, DeficientFormation (*)()> m = {
        {"theta-trail", theta_trail},
        {"ring-trail", ring_trail},
        {"petersen-trail", petersen_trail},
        {"purple-contexts", purple_contexts_trail},
    };
    return m;
}

DeficientFormation load_trail_fixture(const std::string& name) {
    fs::path file = fixture_dir() / (name + ".deficient");
    if (fs::exists(file)) return parse_deficient(read_file(file), load_fixture_graph(name));
    const auto& b = builtin_trails();
    if (auto it = b.find(name); it != b.end()) return it->second();
    throw ArgumentError("unknown trail fixture '" + name + "' (no " + file.string() +
                        ", no builtin)");
}

std::optional<TwoColorCircuit> load_fixture_circuit(const std::string& name, const CubicGraph& g,
                                                    const EdgeColoring& c) {
    fs::path file = fixture_dir() / (name + ".circuit");
    if (!fs::exists(file)) return std::nullopt;
    TwoColorCircuit circ;
    std::istringstream in(read_file(file));
    std::string tok;
    std::vector<Dart> walk;
    while (in >> tok) {
        if (tok == "circuit" || tok[0] == '#') continue;
        walk.push_back(static_cast<Dart>(std::stol(tok)));
    }
    if (walk.size() < 2) throw ParseError("circuit file " + file.string() + " is too short");
    Color a = c.at(g.edge_of(walk[0])), b = c.at(g.edge_of(walk[1]));
    circ.pair = ColorPair(a, b);
    circ.walk = std::move(walk);
    return circ;
}

struct GraphArgs {
    std::string file;
    std::string fixture;

    void attach(CLI::App* cmd) {
        cmd->add_option("graph", file, "graph file to read ('-' for stdin)");
        cmd->add_option("--fixture", fixture, "named fixture instead of a file");
    }
    CubicGraph load() const {
        if (!fixture.empty() && !file.empty())
            throw ArgumentError("give either a graph file or --fixture, not both");
        if (!fixture.empty()) return load_fixture_graph(fixture);
        if (!file.empty()) {
            CubicGraph g = parse_graph(read_file(file));
            if (g.label.empty())
                g.label = file == "-" ? "stdin" : fs::path(file).stem().string();
            return g;
        }
        throw ArgumentError("a graph file or --fixture is required");
    }
};

struct EmitArgs {
    std::string mode = "none";
    std::string out_dir = ".";
    bool out_given = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--emit", mode, "drawing emission: dot, svg, or none")
            ->check(CLI::IsMember({"dot", "svg", "none"}));
        cmd->add_option("--out", out_dir, "output directory for artifacts")
            ->each([this](const std::string&) { out_given = true; });
    }
    void emit(const CubicGraph& g, const EdgeColoring* c, const std::string& stem) const {
        if (mode == "none") return;
        fs::path p = fs::path(out_dir) / (stem + "." + mode);
        write_file(p, mode == "dot" ? to_dot(g, c) : to_svg(g, c));
        std::cout << "emitted=" << p.string() << '\n';
    }
};

void print_diagnostics(const CubicGraph& g) {
    Diagnostics d = validate(g);
    FaceSet fs = trace_faces(g);
    std::cout << "graph=" << g.label << '\n'
              << "vertices=" << g.vertex_count() << '\n'
              << "edges=" << g.edge_count() << '\n'
              << "faces=" << fs.faces.size() << '\n'
              << "genus=" << d.genus << '\n'
              << "cubic=" << (d.is_cubic ? "true" : "false") << '\n'
              << "connected=" << (d.is_connected ? "true" : "false") << '\n'
              << "cross_nodes=" << (g.has_cross_nodes() ? "true" : "false") << '\n';
    std::cout << "loops=" << d.loops.size();
    for (std::size_t i = 0; i < d.loops.size(); ++i)
        std::cout << (i ? "," : " ids=") << d.loops[i];
    std::cout << '\n';
    std::cout << "bridges=" << d.bridges.size();
    for (std::size_t i = 0; i < d.bridges.size(); ++i)
        std::cout << (i ? "," : " ids=") << d.bridges[i];
    std::cout << '\n';
    std::cout << "plane_bridgeless_cubic=" << (d.plane_bridgeless_cubic() ? "true" : "false")
              << '\n';
}

int cmd_validate(const GraphArgs& ga, const EmitArgs& ea) {
    CubicGraph g = ga.load();
    print_diagnostics(g);
    ea.emit(g, nullptr, g.label.empty() ? "graph" : g.label);
    std::cout << "ok=true\n";
    return kPass;
}

int cmd_color(const GraphArgs& ga, const std::string& coloring_file, std::uint64_t limit,
              const EmitArgs& ea) {
    CubicGraph g = ga.load();
    std::cout << "graph=" << g.label << '\n';
    if (!coloring_file.empty()) {
        EdgeColoring c = parse_coloring(read_file(coloring_file), g);
        bool ok = is_proper(g, c);
        std::cout << "proper=" << (ok ? "true" : "false") << '\n';
        if (!ok) return kCheckFail;
        ParityReport pr = delta_and_parity(g, c);
        std::cout << "delta=" << pr.delta << '\n' << "parity=" << pr.parity << '\n';
        ea.emit(g, &c, g.label + "-colored");
        return kPass;
    }
    auto all = enumerate_colorings(g, limit ? std::optional<std::size_t>(limit) : std::nullopt);
    bool hit = limit && all.size() == limit;
    std::cout << "colorings=" << all.size() << '\n'
              << "limit_hit=" << (hit ? "true" : "false") << '\n'
              << "colorable=" << (all.empty() ? "false" : "true") << '\n';
    if (!all.empty()) ea.emit(g, &all.front(), g.label + "-first");
    return kPass;
}

int cmd_formation(const GraphArgs& ga, const std::string& coloring_file,
                  const std::string& formation_file, const EmitArgs& ea) {
    CubicGraph g = ga.load();
    std::cout << "graph=" << g.label << '\n';

    Formation f;
    if (!formation_file.empty()) {
        f = parse_formation(read_file(formation_file), g);
        std::cout << "coloring_source=formation-file\n";
    } else {
        EdgeColoring c;
        if (!coloring_file.empty()) {
            c = parse_coloring(read_file(coloring_file), g);
            std::cout << "coloring_source=file\n";
        } else if (auto fc = ga.fixture.empty() ? std::nullopt : load_fixture_coloring(ga.fixture, g)) {
            c = *fc;
            std::cout << "coloring_source=fixture\n";
        } else {
            auto all = enumerate_colorings(g, 1);
            if (all.empty()) {
                std::cout << "colorable=false\n";
                return kCheckFail;
            }
            c = all.front();
            std::cout << "coloring_source=enumerated-first\n";
        }
        f = coloring_to_formation(g, c);
    }

    CurveCounts n = curve_counts(g, f.coloring);
    ParityReport pr = delta_and_parity(g, f.coloring);
    std::cout << "red=" << n.red << '\n'
              << "blue=" << n.blue << '\n'
              << "alternating=" << n.alternating << '\n'
              << "delta=" << pr.delta << '\n'
              << "parity=" << pr.parity << '\n';
    Diagnostics d = validate(g);
    if (d.genus == 0) {
        SegmentClass seg = classify_purple_edges(g, f.coloring);
        int bounces = 0;
        for (const auto& [e, kind] : seg.kinds)
            if (kind == SegmentKind::bounce) ++bounces;
        std::cout << "cross=" << seg.cross_count() << '\n' << "bounce=" << bounces << '\n';
    }
    if (ea.out_given) {
        fs::path p = fs::path(ea.out_dir) / (g.label + ".formation");
        write_file(p, serialize_formation(f));
        std::cout << "formation_file=" << p.string() << '\n';
    }
    ea.emit(g, &f.coloring, g.label + "-formation");
    std::cout << "ok=true\n";
    return kPass;
}

// Writes graph+coloring(+circuit) so a reported violation can be replayed.
void write_parity_falsifier(const fs::path& dir, int n, const CubicGraph& g,
                            const EdgeColoring& c, const TwoColorCircuit& circ) {
    std::string stem = "parity-falsifier-" + std::to_string(n);
    write_file(dir / (stem + ".graph"), serialize_graph(g));
    write_file(dir / (stem + ".coloring"), serialize_coloring(c));
    std::ostringstream cs;
    cs << "circuit";
    for (Dart d : circ.walk) cs << ' ' << d;
    cs << '\n';
    write_file(dir / (stem + ".circuit"), cs.str());
    std::cout << "falsifier=" << (dir / (stem + ".graph")).string() << '\n';
}

int cmd_parity(const GraphArgs& ga, int corpus, std::uint64_t seed, int max_vertices,
               std::uint64_t cap, const EmitArgs& ea) {
    // Fixture mode with a recorded circuit demonstrates one operation;
    // otherwise every circuit of every coloring is swapped and checked.
    std::vector<CubicGraph> graphs;
    if (!ga.fixture.empty() || !ga.file.empty()) {
        std::cout << "mode=fixture\n";
        graphs.push_back(ga.load());
    } else {
        std::cout << "mode=corpus\n";
        if (max_vertices < 6) throw ArgumentError("--max-vertices must be at least 6");
        int sizes = (max_vertices - 6) / 2 + 1;
        for (int k = 0; k < corpus; ++k)
            graphs.push_back(generate_planar_cubic(seed + static_cast<std::uint64_t>(k),
                                                   6 + 2 * (k % sizes)));
    }

    long long colorings = 0, operations = 0, violations = 0;
    for (const auto& g : graphs) {
        if (!ga.fixture.empty()) {
            // A shipped coloring plus circuit is a recorded demonstration:
            // report the before/after counts instead of sweeping.
            if (auto c = load_fixture_coloring(ga.fixture, g)) {
                if (auto circ = load_fixture_circuit(ga.fixture, g, *c)) {
                    ParityReport before = delta_and_parity(g, *c);
                    CurveCounts nb = curve_counts(g, *c);
                    EdgeColoring after = simple_operation(g, *c, *circ);
                    ParityReport afterp = delta_and_parity(g, after);
                    CurveCounts na = curve_counts(g, after);
                    std::cout << "graph=" << g.label << '\n'
                              << "curves_before=" << nb.total() << '\n'
                              << "curves_after=" << na.total() << '\n'
                              << "delta_before=" << before.delta << '\n'
                              << "delta_after=" << afterp.delta << '\n'
                              << "parity_flip="
                              << (before.parity != afterp.parity ? "true" : "false") << '\n';
                    ea.emit(g, &after, g.label + "-after");
                    std::cout << "ok=true\n";
                    return kPass;
                }
            }
        }
        for (const auto& c :
             enumerate_colorings(g, cap ? std::optional<std::size_t>(cap) : std::nullopt)) {
            ++colorings;
            ParityReport before = delta_and_parity(g, c);
            if (curve_counts(g, c).total() != before.delta) {
                ++violations;
                continue;
            }
            for (ColorPair pair : all_color_pairs()) {
                for (const auto& circ : two_color_circuits(g, c, pair)) {
                    ++operations;
                    EdgeColoring after = simple_operation(g, c, circ);
                    bool bad = !is_proper(g, after) ||
                               delta_and_parity(g, after).parity != before.parity;
                    if (bad) {
                        write_parity_falsifier(ea.out_dir, static_cast<int>(violations), g, c,
                                               circ);
                        ++violations;
                    }
                }
            }
        }
    }
    std::cout << "graphs=" << graphs.size() << '\n'
              << "colorings=" << colorings << '\n'
              << "operations=" << operations << '\n'
              << "violations=" << violations << '\n';
    if (violations) return kCheckFail;
    std::cout << "ok=true\n";
    return kPass;
}

int cmd_penrose(const GraphArgs& ga, int free_loops, int recursion_edge, const EmitArgs& ea) {
    CubicGraph g = ga.load();
    PenroseDiagram d{g, free_loops};
    std::cout << "graph=" << g.label << '\n';
    if (free_loops) std::cout << "free_loops=" << free_loops << '\n';
    BracketValue b = bracket_state_sum(d);
    std::cout << "bracket=" << b.value << '\n';

    int rc = kPass;
    if (g.cubic()) {
        long long n = count_colorings(g);
        std::cout << "count=" << n << '\n';
        if (validate(g).genus == 0) {
            bool equal = check_penrose(g);
            std::cout << "equal=" << (equal ? "true" : "false") << '\n';
            if (!equal) rc = kCheckFail;
        } else {
            std::cout << "theorem=out-of-scope\n";
        }
    }
    if (recursion_edge >= 0) {
        PenroseDiagram par = parallel_smoothing(g, recursion_edge);
        par.free_loops += free_loops;
        PenroseDiagram crs{cross_smoothing(g, recursion_edge), free_loops};
        long long pv = bracket_state_sum(par).value;
        long long cv = bracket_state_sum(crs).value;
        bool ok = b.value == pv - cv;
        std::cout << "parallel_bracket=" << pv << '\n'
                  << "cross_bracket=" << cv << '\n'
                  << "recursion=" << (ok ? "true" : "false") << '\n';
        if (!ok) rc = kCheckFail;
    }
    ea.emit(g, nullptr, g.label + "-diagram");
    return rc;
}

int cmd_trail(const GraphArgs& ga, const std::string& deficient_file, int budget,
              const EmitArgs& ea) {
    DeficientFormation d;
    if (!deficient_file.empty()) {
        CubicGraph g = ga.load();
        d = parse_deficient(read_file(deficient_file), g);
    } else if (!ga.fixture.empty()) {
        d = load_trail_fixture(ga.fixture);
    } else {
        throw ArgumentError("trail needs --fixture or a graph plus --deficient");
    }
    const CubicGraph& g = d.graph;
    VertexId u = g.vertex_of(g.edges[d.empty_edge].a);
    VertexId v = g.vertex_of(g.edges[d.empty_edge].b);
    std::cout << "graph=" << g.label << '\n'
              << "empty_edge=" << d.empty_edge << '\n'
              << "tips=" << color_char(tip_color(d, u)) << ',' << color_char(tip_color(d, v))
              << '\n';
    ReducedTrail r = reduce_trail(d);
    std::cout << "reduced_vertices=" << r.graph.vertex_count() << '\n'
              << "reduced_edges=" << r.graph.edge_count() << '\n'
              << "free_loops=" << r.loop_colors.size() << '\n'
              << "curves=" << curve_count(d) << '\n';
    FactorizationReport rep = is_factored(d);
    std::cout << "factored=" << (rep.factored ? "true" : "false") << '\n';
    if (rep.witness) std::cout << "witness_kind=" << kind_name(rep.witness->kind) << '\n';
    if (tip_color(d, u) == tip_color(d, v))
        std::cout << "residue_components=" << rep.component_count << '\n';
    PrimalityResult pr = primality_search(make_trail(d), budget);
    std::cout << "prime=" << (pr.prime ? "true" : "false") << '\n'
              << "colorings_tried=" << pr.colorings_tried << '\n';
    if (pr.witness && ea.out_given) {
        fs::path p = fs::path(ea.out_dir) / (g.label + "-factored.deficient");
        write_file(p, serialize_deficient(*pr.witness));
        std::cout << "witness_file=" << p.string() << '\n';
    }
    auto path = find_two_color_path(d);
    if (path) {
        std::cout << "path=";
        for (std::size_t i = 0; i < path->size(); ++i)
            std::cout << (i ? " " : "") << (*path)[i];
        std::cout << '\n';
        EdgeColoring done = complete_over_empty_edge(d, *path);
        std::cout << "completed=" << (is_proper(g, done) ? "true" : "false") << '\n';
        if (ea.out_given) {
            fs::path p = fs::path(ea.out_dir) / (g.label + "-completed.coloring");
            write_file(p, serialize_coloring(done));
            std::cout << "completion_file=" << p.string() << '\n';
        }
    } else {
        std::cout << "path=none\n";
    }
    ea.emit(g, &d.coloring, g.label + "-trail");
    std::cout << "ok=true\n";
    return kPass;
}

struct FixtureCheck {
    std::string name;
    std::function<bool()> run;
};

std::vector<FixtureCheck> fixture_checks() {
    auto count = [](const CubicGraph& g) { return count_colorings(g); };
    return {
        {"theta.colorings-6", [=] { return count(theta_graph()) == 6; }},
        {"theta.genus-0", [] { return validate(theta_graph()).genus == 0; }},
        {"theta.faces-3", [] { return trace_faces(theta_graph()).faces.size() == 3; }},
        {"dumbbell.colorings-0", [=] { return count(dumbbell_graph()) == 0; }},
        {"dumbbell.loops-2", [] { return validate(dumbbell_graph()).loops.size() == 2; }},
        {"dumbbell.bridge-1", [] { return validate(dumbbell_graph()).bridges.size() == 1; }},
        {"k4.colorings-6", [=] { return count(k4_graph()) == 6; }},
        {"k4.genus-0", [] { return validate(k4_graph()).genus == 0; }},
        {"prism.colorings-6", [=] { return count(prism_graph()) == 6; }},
        {"prism.faces-5", [] { return trace_faces(prism_graph()).faces.size() == 5; }},
        {"hex-prism.faces-8", [] { return trace_faces(hex_prism_graph()).faces.size() == 8; }},
        {"hex-prism.genus-0", [] { return validate(hex_prism_graph()).genus == 0; }},
        {"petersen.colorings-0", [=] { return count(petersen_graph()) == 0; }},
        {"petersen.nonplanar", [] { return validate(petersen_graph()).genus > 0; }},
        {"theta-trail.curves-2", [] { return curve_count(theta_trail()) == 2; }},
        {"theta-trail.g-star-theta",
         [] {
             auto [g_of_t, g_star] = trail_graphs(make_trail(theta_trail()));
             return g_of_t.vertex_count() == 0 &&
                    serialize_graph(g_star) == serialize_graph(theta_graph());
         }},
        {"ring-trail.genus-0", [] { return validate(ring_trail().graph).genus == 0; }},
        {"ring-trail.completable",
         [] {
             DeficientFormation d = ring_trail();
             auto path = find_two_color_path(d);
             return path && is_proper(d.graph, complete_over_empty_edge(d, *path));
         }},
        {"ring-trail.factorizes",
         [] { return !primality_search(make_trail(ring_trail())).prime; }},
        {"ring-trail.top-curve-op-isolates-red",
         [] {
             DeficientFormation d = ring_trail();
             for (const auto& circ : deficient_circuits(d, ColorPair(Color::blue, Color::purple)))
                 for (Dart x : circ.walk)
                     if (d.graph.vertex_of(x) == 5) {
                         FactorizationReport rep = is_factored(deficient_operation(d, circ));
                         return rep.factored && rep.witness &&
                                rep.witness->kind == CurveKind::red;
                     }
             return false;
         }},
        {"petersen-trail.g-star-petersen",
         [] {
             return serialize_graph(trail_graphs(make_trail(petersen_trail())).second) ==
                    serialize_graph(petersen_graph());
         }},
        {"petersen-trail.curves-5", [] { return curve_count(petersen_trail()) == 5; }},
        {"petersen-trail.prime",
         [] {
             PrimalityResult pr = primality_search(make_trail(petersen_trail()));
             return pr.prime && pr.colorings_tried == 18;
         }},
        {"petersen-trail.op-curves-4",
         [] {
             DeficientFormation d = petersen_trail();
             VertexId u = d.graph.vertex_of(d.graph.edges[0].a);
             for (const auto& circ : deficient_circuits(d, ColorPair(Color::blue, Color::purple)))
                 for (Dart x : circ.walk)
                     if (d.graph.vertex_of(x) == u)
                         return curve_count(deficient_operation(d, circ)) == 4;
             return false;
         }},
        {"petersen-trail.incompletable",
         [] { return !find_two_color_path(petersen_trail()).has_value(); }},
        {"purple-contexts.residue-connected",
         [] {
             FactorizationReport rep = is_factored(purple_contexts_trail());
             return !rep.factored && rep.component_count == 1;
         }},
    };
}

int cmd_fixtures(const std::string& action, const EmitArgs& ea) {
    if (action == "list") {
        std::vector<std::string> names;
        for (const auto& [name, make] : builtin_fixtures()) names.push_back(name);
        if (fs::is_directory(fixture_dir()))
            for (const auto& entry : fs::directory_iterator(fixture_dir()))
                if (entry.path().extension() == ".graph") {
                    std::string n = entry.path().stem().string();
                    if (!builtin_fixtures().count(n)) names.push_back(n);
                }
        std::sort(names.begin(), names.end());
        for (const auto& n : names) {
            CubicGraph g = load_fixture_graph(n);
            Diagnostics d = validate(g);
            std::cout << "fixture=" << n << " vertices=" << g.vertex_count()
                      << " edges=" << g.edge_count() << " genus=" << d.genus << '\n';
        }
        std::vector<std::string> trail_names;
        for (const auto& [name, make] : builtin_trails()) trail_names.push_back(name);
        if (fs::is_directory(fixture_dir()))
            for (const auto& entry : fs::directory_iterator(fixture_dir()))
                if (entry.path().extension() == ".deficient") {
                    std::string n = entry.path().stem().string();
                    if (!builtin_trails().count(n)) trail_names.push_back(n);
                }
        std::sort(trail_names.begin(), trail_names.end());
        for (const auto& n : trail_names) {
            DeficientFormation d = load_trail_fixture(n);
            std::cout << "trail=" << n << " vertices=" << d.graph.vertex_count()
                      << " edges=" << d.graph.edge_count() << " empty_edge=" << d.empty_edge
                      << '\n';
        }
        return kPass;
    }
    if (action == "verify") {
        int failures = 0;
        auto checks = fixture_checks();
        for (const auto& chk : checks) {
            bool ok = chk.run();
            std::cout << "check=" << chk.name << " status=" << (ok ? "pass" : "fail") << '\n';
            if (!ok) ++failures;
        }
        std::cout << "checks=" << checks.size() << '\n' << "failures=" << failures << '\n';
        return failures ? kCheckFail : kPass;
    }
    if (action == "emit") {
        fs::path dir = ea.out_given ? fs::path(ea.out_dir) : fixture_dir();
        for (const auto& [name, make] : builtin_fixtures()) {
            fs::path p = dir / (name + ".graph");
            write_file(p, serialize_graph(make()));
            std::cout << "wrote=" << p.string() << '\n';
        }
        write_file(dir / "theta.coloring", serialize_coloring(EdgeColoring{
                                               {Color::red, Color::blue, Color::purple}}));
        std::cout << "wrote=" << (dir / "theta.coloring").string() << '\n';
        for (const auto& [name, make] : builtin_trails()) {
            DeficientFormation d = make();
            fs::path gp = dir / (name + ".graph");
            fs::path dp = dir / (name + ".deficient");
            write_file(gp, serialize_graph(d.graph));
            write_file(dp, serialize_deficient(d));
            std::cout << "wrote=" << gp.string() << '\n' << "wrote=" << dp.string() << '\n';
        }
        return kPass;
    }
    throw ArgumentError("fixtures action must be list, verify, or emit");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"formlab: edge colorings of cubic maps as systems of plane curves"};
    app.require_subcommand(1);

    GraphArgs va_g;
    EmitArgs va_e;
    auto* validate_cmd = app.add_subcommand("validate", "structure and genus of a cubic map");
    va_g.attach(validate_cmd);
    va_e.attach(validate_cmd);

    GraphArgs co_g;
    EmitArgs co_e;
    std::string co_coloring;
    std::uint64_t co_limit = 0;
    auto* color_cmd = app.add_subcommand("color", "count or check edge 3-colorings");
    co_g.attach(color_cmd);
    co_e.attach(color_cmd);
    color_cmd->add_option("--coloring", co_coloring, "coloring file to check");
    color_cmd->add_option("--limit", co_limit, "stop enumeration after this many");

    GraphArgs fo_g;
    EmitArgs fo_e;
    std::string fo_coloring, fo_formation;
    auto* formation_cmd = app.add_subcommand("formation", "curves of a coloring, or the reverse");
    fo_g.attach(formation_cmd);
    fo_e.attach(formation_cmd);
    formation_cmd->add_option("--coloring", fo_coloring, "coloring file");
    formation_cmd->add_option("--formation", fo_formation, "formation file to read back");

    GraphArgs pa_g;
    EmitArgs pa_e;
    int pa_corpus = 20;
    std::uint64_t pa_seed = 1;
    int pa_max_vertices = 14;
    std::uint64_t pa_cap = 500;
    auto* parity_cmd = app.add_subcommand("parity", "parity invariance under simple operations");
    pa_g.attach(parity_cmd);
    pa_e.attach(parity_cmd);
    parity_cmd->add_option("--corpus", pa_corpus, "number of generated graphs");
    parity_cmd->add_option("--seed", pa_seed, "base seed for the corpus");
    parity_cmd->add_option("--max-vertices", pa_max_vertices, "largest generated size");
    parity_cmd->add_option("--cap", pa_cap, "colorings checked per graph");

    GraphArgs pe_g;
    EmitArgs pe_e;
    int pe_loops = 0;
    int pe_recursion = -1;
    auto* penrose_cmd = app.add_subcommand("penrose", "bracket state sum of a strand diagram");
    pe_g.attach(penrose_cmd);
    pe_e.attach(penrose_cmd);
    penrose_cmd->add_option("--free-loops", pe_loops, "closed strands touching no node");
    penrose_cmd->add_option("--recursion", pe_recursion,
                            "also check both smoothings of this edge");

    GraphArgs tr_g;
    EmitArgs tr_e;
    std::string tr_deficient;
    int tr_budget = 16;
    auto* trail_cmd = app.add_subcommand("trail", "suppression, factoring, and completion of a "
                                                  "deficient coloring");
    tr_g.attach(trail_cmd);
    tr_e.attach(trail_cmd);
    trail_cmd->add_option("--deficient", tr_deficient, "deficient coloring file");
    trail_cmd->add_option("--budget", tr_budget, "largest reduced size searched for factors");

    EmitArgs fx_e;
    std::string fx_action = "list";
    auto* fixtures_cmd = app.add_subcommand("fixtures", "list, verify, or emit shipped fixtures");
    fixtures_cmd->add_option("action", fx_action, "list, verify, or emit")
        ->check(CLI::IsMember({"list", "verify", "emit"}));
    fx_e.attach(fixtures_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kPass : kUsage;
    }

    try {
        if (app.got_subcommand(validate_cmd)) return cmd_validate(va_g, va_e);
        if (app.got_subcommand(color_cmd)) return cmd_color(co_g, co_coloring, co_limit, co_e);
        if (app.got_subcommand(formation_cmd))
            return cmd_formation(fo_g, fo_coloring, fo_formation, fo_e);
        if (app.got_subcommand(parity_cmd))
            return cmd_parity(pa_g, pa_corpus, pa_seed, pa_max_vertices, pa_cap, pa_e);
        if (app.got_subcommand(penrose_cmd)) return cmd_penrose(pe_g, pe_loops, pe_recursion, pe_e);
        if (app.got_subcommand(trail_cmd)) return cmd_trail(tr_g, tr_deficient, tr_budget, tr_e);
        if (app.got_subcommand(fixtures_cmd)) return cmd_fixtures(fx_action, fx_e);
    } catch (const ResourceError& e) {
        std::cerr << "resource bound: " << e.what() << '\n';
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}
