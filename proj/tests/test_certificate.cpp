#include <random>
#include <string>

#include "cemb/certificate.hpp"
#include "cemb/pipeline.hpp"
#include "doctest.h"

using namespace cemb;

namespace {

SimplicialComplex2 tetrahedron() {
    SimplicialComplex2 c;
    for (int i = 0; i < 4; ++i) c.add_node("t" + std::to_string(i));
    c.add_triangle(0, 1, 2);
    c.add_triangle(0, 1, 3);
    c.add_triangle(0, 2, 3);
    c.add_triangle(1, 2, 3);
    return c;
}

SimplicialComplex2 torus7() {
    SimplicialComplex2 c;
    for (int i = 0; i < 7; ++i) c.add_node("v" + std::to_string(i));
    for (int i = 0; i < 7; ++i) {
        c.add_triangle(i, (i + 1) % 7, (i + 3) % 7);
        c.add_triangle(i, (i + 2) % 7, (i + 3) % 7);
    }
    return c;
}

MultiGraph complete_graph(int n) {
    MultiGraph g;
    for (int i = 0; i < n; ++i) g.add_vertex("u" + std::to_string(i));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            g.add_edge(i, j, "e" + std::to_string(i) + "_" + std::to_string(j));
    return g;
}

}  // namespace

TEST_CASE("map text survives a serialization round trip") {
    PipelineRun run = run_pipeline(complete_graph(5), torus7());
    REQUIRE(run.answer == Answer::YES);
    CombMap back = parse_combmap_text(run.final_map.to_text());
    back.check();
    CHECK(maps_equivalent(back, run.final_map));
}

TEST_CASE("witnesses for explicit embeddings verify after a round trip") {
    auto g = complete_graph(5);
    auto c = torus7();
    PipelineRun run = run_pipeline(g, c);
    REQUIRE(run.answer == Answer::YES);
    Certificate cert = make_certificate(run);
    CHECK(cert.kind == Certificate::Kind::MAP);
    CHECK(verify_certificate(g, c, cert));
    Certificate back = parse_certificate_text(certificate_to_text(cert));
    CHECK(verify_certificate(g, c, back));
    SUBCASE("the same witness fails against other instances") {
        CHECK_FALSE(verify_certificate(complete_graph(6), c, back));
        CHECK_FALSE(verify_certificate(g, tetrahedron(), back));
    }
}

TEST_CASE("witnesses by fat segment verify") {
    SimplicialComplex2 c;
    c.add_node("a");
    c.add_node("b");
    for (int i = 0; i < 3; ++i) c.add_node("w" + std::to_string(i));
    c.add_triangle(0, 1, 2);
    c.add_triangle(0, 1, 3);
    c.add_triangle(0, 1, 4);
    auto g = complete_graph(8);
    PipelineRun run = run_pipeline(g, c);
    REQUIRE(run.answer == Answer::YES);
    Certificate cert = make_certificate(run);
    CHECK(cert.kind == Certificate::Kind::BOOK);
    Certificate back = parse_certificate_text(certificate_to_text(cert));
    CHECK(verify_certificate(g, c, back));
    SUBCASE("two sheets are not enough for the claim") {
        SimplicialComplex2 thin;
        thin.add_node("a");
        thin.add_node("b");
        thin.add_node("w0");
        thin.add_node("w1");
        thin.add_triangle(0, 1, 2);
        thin.add_triangle(0, 1, 3);
        CHECK_FALSE(verify_certificate(g, thin, back));
    }
}

TEST_CASE("witnesses for fully rewritten instances verify") {
    SimplicialComplex2 c;
    c.add_node("a");
    c.add_node("b");
    c.add_segment(0, 1);
    MultiGraph g;
    g.add_vertex("x");
    g.add_vertex("y");
    g.add_edge(0, 1, "e");
    PipelineRun run = run_pipeline(g, c);
    REQUIRE(run.answer == Answer::YES);
    Certificate cert = make_certificate(run);
    CHECK(cert.kind == Certificate::Kind::EMPTY);
    Certificate back = parse_certificate_text(certificate_to_text(cert));
    CHECK(verify_certificate(g, c, back));
    SUBCASE("the recorded branch must really vanish") {
        // a cycle cannot hide in a lone segment
        MultiGraph g2 = g;
        g2.add_vertex("z");
        g2.add_edge(1, 2, "f");
        g2.add_edge(2, 0, "h");
        CHECK_FALSE(verify_certificate(g2, c, back));
    }
}

TEST_CASE("random corruption of a witness is caught") {
    auto g = complete_graph(5);
    auto c = torus7();
    PipelineRun run = run_pipeline(g, c);
    REQUIRE(run.answer == Answer::YES);
    std::string text = certificate_to_text(make_certificate(run));
    const std::string alphabet =
        " 0123456789abcdefghijklmnopqrstuvwxyz_+-'[]{}=";
    std::mt19937 rng(20240901);
    int rejected = 0;
    const int trials = 1000;
    for (int t = 0; t < trials; ++t) {
        std::string mut = text;
        std::uniform_int_distribution<size_t> pos(0, mut.size() - 1);
        std::uniform_int_distribution<size_t> sym(0, alphabet.size() - 1);
        switch (rng() % 3) {
            case 0: {  // replace one character
                size_t p = pos(rng);
                char ch = alphabet[sym(rng)];
                while (ch == mut[p]) ch = alphabet[sym(rng)];
                mut[p] = ch;
                break;
            }
            case 1:  // delete one character
                mut.erase(pos(rng), 1);
                break;
            default:  // insert one character
                mut.insert(pos(rng), 1, alphabet[sym(rng)]);
                break;
        }
        bool accepted = false;
        try {
            accepted = verify_certificate(g, c, parse_certificate_text(mut));
        } catch (const std::exception&) {
            accepted = false;
        }
        if (!accepted) ++rejected;
    }
    // a rare mutation lands in redundant slack of the format; almost all
    // must be caught
    CHECK(rejected >= trials * 99 / 100);
}
