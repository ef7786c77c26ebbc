// Acceptance gate: one line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "cemb/certificate.hpp"
#include "cemb/gadget.hpp"
#include "cemb/oracle.hpp"
#include "cemb/pipeline.hpp"
#include "cemb/surface.hpp"

using namespace cemb;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

// ---------------------------------------------------------------- graphs

MultiGraph complete_graph(int n, const std::string& tag = "") {
    MultiGraph g;
    for (int i = 0; i < n; ++i) g.add_vertex("u" + tag + std::to_string(i));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            g.add_edge(i, j,
                       "e" + tag + std::to_string(i) + "_" + std::to_string(j));
    return g;
}

MultiGraph complete_bipartite(int a, int b) {
    MultiGraph g;
    for (int i = 0; i < a + b; ++i) g.add_vertex("u" + std::to_string(i));
    for (int i = 0; i < a; ++i)
        for (int j = 0; j < b; ++j)
            g.add_edge(i, a + j,
                       "e" + std::to_string(i) + "_" + std::to_string(j));
    return g;
}

MultiGraph cycle_graph(int n) {
    MultiGraph g;
    for (int i = 0; i < n; ++i) g.add_vertex("c" + std::to_string(i));
    for (int i = 0; i < n; ++i)
        g.add_edge(i, (i + 1) % n, "e" + std::to_string(i));
    return g;
}

MultiGraph path_graph(int n) {
    MultiGraph g;
    for (int i = 0; i < n; ++i) g.add_vertex("p" + std::to_string(i));
    for (int i = 0; i + 1 < n; ++i)
        g.add_edge(i, i + 1, "e" + std::to_string(i));
    return g;
}

MultiGraph star_graph(int leaves) {
    MultiGraph g;
    g.add_vertex("m");
    for (int i = 0; i < leaves; ++i) {
        int x = g.add_vertex("l" + std::to_string(i));
        g.add_edge(0, x, "e" + std::to_string(i));
    }
    return g;
}

MultiGraph disjoint_union(const MultiGraph& a, const MultiGraph& b,
                          const std::string& tag) {
    MultiGraph g = a;
    std::vector<int> nid;
    for (const auto& vn : b.vertex_names) nid.push_back(g.add_vertex(vn + tag));
    for (const auto& e : b.edges)
        g.add_edge(nid[e.u], nid[e.v], e.name + tag);
    return g;
}

// -------------------------------------------------------------- complexes

SimplicialComplex2 disjoint_complex(const std::vector<SimplicialComplex2>& xs) {
    SimplicialComplex2 out;
    for (size_t i = 0; i < xs.size(); ++i) {
        std::vector<int> nid;
        for (const auto& n : xs[i].node_names)
            nid.push_back(out.add_node("c" + std::to_string(i) + "_" + n));
        for (const auto& s : xs[i].segments)
            out.add_segment(nid[s[0]], nid[s[1]]);
        for (const auto& t : xs[i].triangles)
            out.add_triangle(nid[t[0]], nid[t[1]], nid[t[2]]);
    }
    return out;
}

/// Two complexes identified at one node (their node 0).
SimplicialComplex2 wedge(const SimplicialComplex2& a,
                         const SimplicialComplex2& b) {
    SimplicialComplex2 out = a;
    std::vector<int> nid;
    for (int p = 0; p < b.num_nodes(); ++p)
        nid.push_back(p == 0 ? 0 : out.add_node("w_" + b.node_names[p]));
    for (const auto& s : b.segments) out.add_segment(nid[s[0]], nid[s[1]]);
    for (const auto& t : b.triangles)
        out.add_triangle(nid[t[0]], nid[t[1]], nid[t[2]]);
    return out;
}

/// Closed surface with one triangle punched out.
SimplicialComplex2 punctured(SimplicialComplex2 c) {
    SimplicialComplex2 out;
    for (const auto& n : c.node_names) out.add_node(n);
    for (size_t t = 1; t < c.triangles.size(); ++t)
        out.add_triangle(c.triangles[t][0], c.triangles[t][1],
                         c.triangles[t][2]);
    for (const auto& s : c.segments) out.add_segment(s[0], s[1]);
    return out;
}

/// Triangulated disk: a fan of `n` triangles around one hub.
SimplicialComplex2 disk_fan(int n) {
    SimplicialComplex2 c;
    c.add_node("h");
    for (int i = 0; i <= n; ++i) c.add_node("r" + std::to_string(i));
    for (int i = 0; i < n; ++i) c.add_triangle(0, 1 + i, 2 + i);
    return c;
}

/// Triangulated annulus between two squares.
SimplicialComplex2 annulus4() {
    SimplicialComplex2 c;
    for (int i = 0; i < 4; ++i) c.add_node("o" + std::to_string(i));
    for (int i = 0; i < 4; ++i) c.add_node("i" + std::to_string(i));
    for (int j = 0; j < 4; ++j) {
        c.add_triangle(j, (j + 1) % 4, 4 + j);
        c.add_triangle((j + 1) % 4, 4 + j, 4 + (j + 1) % 4);
    }
    return c;
}

/// 5-vertex Moebius band: triangles {i, i+1, i+2} mod 5.
SimplicialComplex2 moebius5() {
    SimplicialComplex2 c;
    for (int i = 0; i < 5; ++i) c.add_node("m" + std::to_string(i));
    for (int i = 0; i < 5; ++i)
        c.add_triangle(i, (i + 1) % 5, (i + 2) % 5);
    return c;
}

/// Criterion 3: two triangulated tori joined by a segment.
SimplicialComplex2 two_tori_segment() {
    SimplicialComplex2 c;
    auto tor = [&](const char* p) {
        int base = c.num_nodes();
        for (int i = 0; i < 7; ++i) c.add_node(p + std::to_string(i));
        for (int i = 0; i < 7; ++i) {
            c.add_triangle(base + i, base + (i + 1) % 7, base + (i + 3) % 7);
            c.add_triangle(base + i, base + (i + 2) % 7, base + (i + 3) % 7);
        }
        return base;
    };
    int a = tor("A"), b = tor("B");
    c.add_segment(a, b);
    return c;
}

MultiGraph two_k5_edge() {
    MultiGraph g;
    for (int s = 0; s < 2; ++s)
        for (int i = 0; i < 5; ++i)
            g.add_vertex(std::string(s ? "b" : "a") + std::to_string(i));
    for (int s = 0; s < 2; ++s)
        for (int i = 0; i < 5; ++i)
            for (int j = i + 1; j < 5; ++j)
                g.add_edge(s * 5 + i, s * 5 + j,
                           "k" + std::to_string(s) + "_" + std::to_string(i) +
                               "_" + std::to_string(j));
    g.add_edge(0, 5, "bridge");
    return g;
}

MultiGraph two_k5_shared_vertex() {
    MultiGraph g;
    g.add_vertex("w");
    for (int s = 0; s < 2; ++s)
        for (int i = 1; i < 5; ++i)
            g.add_vertex(std::string(s ? "b" : "a") + std::to_string(i));
    auto vid = [&](int s, int i) { return i == 0 ? 0 : s * 4 + i; };
    for (int s = 0; s < 2; ++s)
        for (int i = 0; i < 5; ++i)
            for (int j = i + 1; j < 5; ++j)
                g.add_edge(vid(s, i), vid(s, j),
                           "k" + std::to_string(s) + "_" + std::to_string(i) +
                               "_" + std::to_string(j));
    return g;
}

Answer decide(const MultiGraph& g, const SimplicialComplex2& c,
              long long steps = -1) {
    BudgetLimits lim;
    lim.steps = steps;
    return run_pipeline(g, c, lim).answer;
}

// ----------------------------------------------- small-graph enumeration

/// Canonical key of a connected multigraph (<= 7 vertices): minimum
/// sorted edge list over all vertex permutations.
std::vector<std::pair<int, int>> connected_canon(
    int n, const std::vector<std::pair<int, int>>& edges) {
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    std::vector<std::pair<int, int>> best;
    do {
        std::vector<std::pair<int, int>> cur;
        for (auto [a, b] : edges) {
            int x = perm[a], y = perm[b];
            cur.emplace_back(std::min(x, y), std::max(x, y));
        }
        std::sort(cur.begin(), cur.end());
        if (best.empty() || cur < best) best = cur;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

/// Canonical key of a multigraph: sorted canonical keys of its components.
std::vector<long long> graph_canon(int n,
                                   const std::vector<std::pair<int, int>>& es) {
    std::vector<int> comp(n, -1);
    int nc = 0;
    std::vector<std::vector<int>> adj(n);
    for (auto [a, b] : es) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    for (int v = 0; v < n; ++v) {
        if (comp[v] >= 0) continue;
        std::vector<int> st{v};
        comp[v] = nc;
        while (!st.empty()) {
            int x = st.back();
            st.pop_back();
            for (int y : adj[x])
                if (comp[y] < 0) {
                    comp[y] = nc;
                    st.push_back(y);
                }
        }
        ++nc;
    }
    std::vector<std::vector<long long>> parts;
    for (int ci = 0; ci < nc; ++ci) {
        std::vector<int> vid(n, -1);
        int k = 0;
        for (int v = 0; v < n; ++v)
            if (comp[v] == ci) vid[v] = k++;
        std::vector<std::pair<int, int>> ces;
        for (auto [a, b] : es)
            if (comp[a] == ci) ces.emplace_back(vid[a], vid[b]);
        auto canon = connected_canon(k, ces);
        std::vector<long long> flat{k};
        for (auto [a, b] : canon) flat.push_back(a * 16 + b);
        parts.push_back(std::move(flat));
    }
    std::sort(parts.begin(), parts.end());
    std::vector<long long> key;
    for (auto& p : parts) {
        key.push_back(-1);
        key.insert(key.end(), p.begin(), p.end());
    }
    return key;
}

/// Every multigraph with at most `max_edges` edges and no isolated
/// vertices, one per isomorphism class (loops and parallel edges
/// included).  Generated as lexicographically sorted edge lists where new
/// vertices enter in order, then deduplicated exactly.
std::vector<MultiGraph> all_small_graphs(int max_edges) {
    std::vector<MultiGraph> out;
    std::set<std::vector<long long>> seen;
    std::vector<std::pair<int, int>> edges;
    std::function<void(int)> emit_and_extend = [&](int used) {
        if (!edges.empty() && seen.insert(graph_canon(used, edges)).second) {
            MultiGraph g;
            for (int v = 0; v < used; ++v)
                g.add_vertex("v" + std::to_string(v));
            for (size_t i = 0; i < edges.size(); ++i)
                g.add_edge(edges[i].first, edges[i].second,
                           "e" + std::to_string(i));
            out.push_back(std::move(g));
        }
        if (static_cast<int>(edges.size()) == max_edges) return;
        std::pair<int, int> lo =
            edges.empty() ? std::pair<int, int>{0, 0} : edges.back();
        for (int a = 0; a <= used; ++a)
            for (int b = a; b <= used + (a == used ? 1 : 0); ++b) {
                if (b > used + 1) continue;
                std::pair<int, int> e{a, b};
                if (e < lo) continue;
                edges.push_back(e);
                emit_and_extend(std::max(used, std::max(a, b) + 1));
                edges.pop_back();
            }
    };
    emit_and_extend(0);
    return out;
}

/// Brute-force answer for a disjoint union of closed surfaces: every
/// graph component picks one surface, and each surface must then carry
/// the union it received.
bool multi_surface_oracle(const MultiGraph& g,
                          const std::vector<SurfaceClass>& surfs) {
    auto comp = g.components();
    int nc = g.num_components();
    if (nc == 0) return true;
    int ns = static_cast<int>(surfs.size());
    std::vector<int> pick(nc, 0);
    while (true) {
        bool ok = true;
        for (int s = 0; s < ns && ok; ++s) {
            MultiGraph sub;
            std::vector<int> vid(g.num_vertices(), -1);
            for (int v = 0; v < g.num_vertices(); ++v)
                if (pick[comp[v]] == s)
                    vid[v] = sub.add_vertex(g.vertex_names[v]);
            for (const auto& e : g.edges)
                if (vid[e.u] >= 0)
                    sub.add_edge(vid[e.u], vid[e.v], e.name);
            if (sub.num_edges() + sub.num_vertices() == 0) continue;
            if (!brute_force_surface_embed(sub, surfs[s])) ok = false;
        }
        if (ok) return true;
        int i = 0;
        while (i < nc && ++pick[i] == ns) pick[i++] = 0;
        if (i == nc) return false;
    }
}

// ------------------------------------------------------------- criteria

bool crit1() {
    std::vector<SimplicialComplex2> hosts;
    hosts.push_back(book_gadget(3));
    hosts.push_back(book_gadget(4));
    hosts.push_back(book_gadget(9));
    {
        SimplicialComplex2 c = surface_gadget(1, true);  // torus + fat segment
        int w1 = c.add_node("x1"), w2 = c.add_node("x2");
        c.add_triangle(0, 1, w1);
        c.add_triangle(0, 1, w2);
        hosts.push_back(c);
    }
    hosts.push_back(wedge(book_gadget(5), surface_gadget(0, true)));
    std::mt19937 rng(7);
    bool ok = true;
    for (int t = 0; t < 25; ++t) {
        int n = 2 + static_cast<int>(rng() % 7);
        int m = 1 + static_cast<int>(rng() % 20);
        MultiGraph g;
        for (int i = 0; i < n; ++i) g.add_vertex("v" + std::to_string(i));
        for (int i = 0; i < m; ++i)
            g.add_edge(static_cast<int>(rng() % n), static_cast<int>(rng() % n),
                       "e" + std::to_string(i));
        for (const auto& c : hosts) {
            auto t0 = std::chrono::steady_clock::now();
            Answer a = decide(g, c);
            double dt = seconds_since(t0);
            if (a != Answer::YES || dt >= 1.0) ok = false;
        }
    }
    return ok;
}

std::vector<CombMap> g_final_maps;  // collected for criterion 7

bool crit2() {
    auto sphere = surface_gadget(0, true);
    auto torus = surface_gadget(1, true);
    auto proj = surface_gadget(1, false);
    struct Case {
        MultiGraph g;
        const SimplicialComplex2* c;
        Answer want;
    };
    std::vector<Case> cases = {
        {complete_graph(4), &sphere, Answer::YES},
        {complete_graph(5), &sphere, Answer::NO},
        {complete_bipartite(3, 3), &sphere, Answer::NO},
        {complete_graph(5), &torus, Answer::YES},
        {complete_graph(6), &torus, Answer::YES},
        {complete_graph(8), &torus, Answer::NO},
        {complete_graph(5), &proj, Answer::YES},
        {complete_bipartite(3, 3), &proj, Answer::YES},
    };
    bool ok = true;
    for (auto& cs : cases) {
        auto t0 = std::chrono::steady_clock::now();
        PipelineRun run = run_pipeline(cs.g, *cs.c);
        if (run.answer != cs.want || seconds_since(t0) >= 60.0) ok = false;
        if (run.answer == Answer::YES) g_final_maps.push_back(run.final_map);
    }
    return ok;
}

bool crit3() {
    auto c = two_tori_segment();
    PipelineRun yes = run_pipeline(two_k5_edge(), c, {10000000, -1});
    PipelineRun no = run_pipeline(two_k5_shared_vertex(), c, {10000000, -1});
    if (yes.answer == Answer::YES) g_final_maps.push_back(yes.final_map);
    return yes.answer == Answer::YES && no.answer == Answer::NO;
}

bool crit4() {
    auto open = crossing_gadget(1, 0);
    auto shut = crossing_gadget(0, 0);
    return decide(complete_graph(5), open) == Answer::YES &&
           decide(complete_bipartite(3, 3), open) == Answer::YES &&
           decide(complete_graph(5), shut) == Answer::NO &&
           decide(complete_bipartite(3, 3), shut) == Answer::NO;
}

bool crit5() {
    struct Host {
        SimplicialComplex2 c;
        SurfaceClass cls;
    };
    std::vector<Host> hosts = {
        {surface_gadget(0, true), {0, true}},
        {surface_gadget(1, true), {2, true}},
        {surface_gadget(1, false), {1, false}},
        {surface_gadget(2, false), {2, false}},
    };
    auto graphs = all_small_graphs(6);
    for (const auto& g : graphs)
        for (const auto& h : hosts) {
            bool want = brute_force_surface_embed(g, h.cls);
            Answer got = decide(g, h.c);
            if (got != (want ? Answer::YES : Answer::NO)) {
                std::printf("  disagreement: %d vertices %d edges on %s\n",
                            g.num_vertices(), g.num_edges(),
                            surface_name(h.cls).c_str());
                return false;
            }
        }
    return true;
}

/// Non-cellular starting instances for the surgery criteria.
std::vector<ConInstance> surgery_corpus() {
    std::vector<ConInstance> out;
    auto floated = [](int genus, bool ori, const MultiGraph& g) {
        CombMap pi;
        pi.faces.push_back(FaceRec{genus, ori, {}, {}});
        pi = add_float_vertex(pi, 0, g.vertex_names[0]);
        return ConInstance{g, pi};
    };
    out.push_back(floated(2, true, cycle_graph(3)));
    out.push_back(floated(2, true, complete_graph(4)));
    out.push_back(floated(1, false, cycle_graph(3)));
    out.push_back(floated(2, false, complete_graph(4)));
    {
        MultiGraph g;
        g.add_vertex("u");
        g.add_edge(0, 0, "l0");
        g.add_edge(0, 0, "l1");
        out.push_back(floated(2, true, g));
    }
    return out;
}

bool crit6_and_7_and_9(bool* euler_ok, bool* bounds_ok) {
    bool mono_ok = true;
    *euler_ok = true;
    *bounds_ok = true;
    // respecting-map stream sizes against (kn+1)^k
    {
        std::vector<SimplicialComplex2> cs = {
            two_tori_segment(), wedge(surface_gadget(0, true),
                                      surface_gadget(1, true))};
        for (const auto& c : cs) {
            GuessStream gs = respecting_maps(complete_graph(3), c);
            long long k = static_cast<long long>(gs.nodes.size());
            long long n = gs.prepared.num_vertices();
            long long bound = 1;
            for (long long i = 0; i < k; ++i) bound *= k * n + 1;
            if (gs.total() > bound) *bounds_ok = false;
        }
    }
    std::function<void(const ConInstance&, int)> walk = [&](const ConInstance&
                                                                inst,
                                                            int defect) {
        auto kids = cellularize_step(inst);
        size_t nn = inst.g.num_vertices() + inst.g.num_edges() + 1;
        if (kids.size() > 4 * nn * nn * nn * nn) *bounds_ok = false;
        for (const auto& k : kids) {
            try {
                k.pi.check();
            } catch (const std::exception&) {
                *euler_ok = false;
            }
            int d = 0;
            for (const auto& f : k.pi.faces) d += f.cellularity_defect();
            if (d >= defect || defect - d > 2) mono_ok = false;
            if (d > 0) walk(k, d);
        }
    };
    for (const auto& inst : surgery_corpus()) {
        int d = 0;
        for (const auto& f : inst.pi.faces) d += f.cellularity_defect();
        walk(inst, d);
    }
    for (const auto& m : g_final_maps) {
        try {
            m.check();
        } catch (const std::exception&) {
            *euler_ok = false;
        }
    }
    return mono_ok;
}

bool crit8() {
    struct Inst {
        MultiGraph g;
        SimplicialComplex2 c;
    };
    std::vector<Inst> insts = {
        {complete_graph(4), surface_gadget(0, true)},
        {complete_graph(5), surface_gadget(1, true)},
        {complete_graph(5), surface_gadget(1, false)},
        {complete_bipartite(3, 3), surface_gadget(1, false)},
        {complete_graph(8), book_gadget(3)},
    };
    for (size_t i = 0; i < insts.size(); ++i) {
        auto& in = insts[i];
        PipelineRun run = run_pipeline(in.g, in.c);
        if (run.answer != Answer::YES) {
            std::printf("  witness instance %zu: pipeline said no\n", i);
            return false;
        }
        Certificate cert = make_certificate(run);
        bool ok = false;
        try {
            Certificate back =
                parse_certificate_text(certificate_to_text(cert));
            ok = verify_certificate(in.g, in.c, back);
        } catch (const std::exception& ex) {
            std::printf("  witness instance %zu: %s\n", i, ex.what());
            return false;
        }
        if (!ok) {
            std::printf("  witness instance %zu: verification failed\n", i);
            return false;
        }
    }
    // mutation sweep on one explicit-map witness
    auto g = complete_graph(5);
    auto c = surface_gadget(1, true);
    std::string text = certificate_to_text(make_certificate(run_pipeline(g, c)));
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
            case 0: {
                size_t p = pos(rng);
                char ch = alphabet[sym(rng)];
                while (ch == mut[p]) ch = alphabet[sym(rng)];
                mut[p] = ch;
                break;
            }
            case 1:
                mut.erase(pos(rng), 1);
                break;
            default:
                mut.insert(pos(rng), 1, alphabet[sym(rng)]);
                break;
        }
        bool accepted = false;
        try {
            accepted = verify_certificate(g, c, parse_certificate_text(mut));
        } catch (const std::exception&) {
        }
        if (!accepted) ++rejected;
    }
    return rejected >= trials * 99 / 100;
}

bool crit10() {
    int bad = 0, total = 0;
    auto expect = [&](const MultiGraph& g, const SimplicialComplex2& c,
                      bool want) {
        ++total;
        if (decide(g, c) != (want ? Answer::YES : Answer::NO)) {
            ++bad;
            std::printf(
                "  fixture %d: %d vertices %d edges on %d-node complex, "
                "expected %s\n",
                total, g.num_vertices(), g.num_edges(), c.num_nodes(),
                want ? "yes" : "no");
        }
    };
    // --- stage: rewriting against 1-dimensional complexes (no surface)
    {
        SimplicialComplex2 seg;
        seg.add_node("a");
        seg.add_node("b");
        seg.add_segment(0, 1);
        for (int n = 1; n <= 10; ++n) expect(path_graph(n), seg, true);
        for (int n = 3; n <= 10; ++n) expect(cycle_graph(n), seg, false);
        for (int l = 3; l <= 6; ++l) expect(star_graph(l), seg, false);
        expect(disjoint_union(path_graph(2), path_graph(3), "_b"), seg, true);
        expect(disjoint_union(path_graph(4), path_graph(4), "_b"), seg, true);
        expect(disjoint_union(path_graph(2), cycle_graph(3), "_b"), seg,
               false);
        {
            MultiGraph g;  // two parallel edges form a cycle
            g.add_vertex("x");
            g.add_vertex("y");
            g.add_edge(0, 1, "p0");
            g.add_edge(0, 1, "p1");
            expect(g, seg, false);
        }
        {
            MultiGraph g;
            g.add_vertex("x");
            g.add_edge(0, 0, "loop");
            expect(g, seg, false);
        }
        {
            MultiGraph g;  // triangle with a tail
            g = cycle_graph(3);
            int t = g.add_vertex("t");
            g.add_edge(0, t, "tail");
            expect(g, seg, false);
        }
        for (int n = 1; n <= 3; ++n) {
            MultiGraph g;  // isolated vertices always fit
            for (int i = 0; i < n; ++i) g.add_vertex("z" + std::to_string(i));
            expect(g, seg, true);
        }
    }
    // --- stage: withdrawing a touching point (wedges of closed surfaces)
    {
        std::vector<std::pair<SimplicialComplex2, std::array<SurfaceClass, 2>>>
            hosts;
        auto sph = surface_gadget(0, true);
        auto tor = surface_gadget(1, true);
        auto prj = surface_gadget(1, false);
        hosts.push_back({wedge(sph, sph),
                         {SurfaceClass{0, true}, SurfaceClass{0, true}}});
        hosts.push_back({wedge(tor, sph),
                         {SurfaceClass{2, true}, SurfaceClass{0, true}}});
        hosts.push_back({wedge(prj, sph),
                         {SurfaceClass{1, false}, SurfaceClass{0, true}}});
        hosts.push_back({wedge(tor, prj),
                         {SurfaceClass{2, true}, SurfaceClass{1, false}}});
        hosts.push_back({wedge(prj, prj),
                         {SurfaceClass{1, false}, SurfaceClass{1, false}}});
        // 2-connected probes: such a graph must fit on one side whole
        std::vector<MultiGraph> probes = {
            cycle_graph(4), complete_graph(4), complete_bipartite(3, 3),
            complete_bipartite(2, 3),
            [] {
                MultiGraph g = cycle_graph(3);  // doubled triangle edge
                g.add_edge(0, 1, "extra");
                return g;
            }(),
            [] {
                MultiGraph g;  // theta: three parallel paths
                g.add_vertex("x");
                g.add_vertex("y");
                for (int i = 0; i < 3; ++i) {
                    int m = g.add_vertex("m" + std::to_string(i));
                    g.add_edge(0, m, "a" + std::to_string(i));
                    g.add_edge(m, 1, "b" + std::to_string(i));
                }
                return g;
            }(),
        };
        for (const auto& [c, classes] : hosts)
            for (const auto& g : probes)
                expect(g, c,
                       brute_force_surface_embed(g, classes[0]) ||
                           brute_force_surface_embed(g, classes[1]));
    }
    // --- stage: capping bordered surfaces
    {
        std::vector<std::pair<SimplicialComplex2, SurfaceClass>> hosts = {
            {disk_fan(4), {0, true}},
            {annulus4(), {0, true}},
            {moebius5(), {1, false}},
            {punctured(surface_gadget(1, true)), {2, true}},
            {punctured(surface_gadget(1, false)), {1, false}},
        };
        std::vector<MultiGraph> probes = {
            complete_graph(4),        cycle_graph(5),
            complete_bipartite(3, 3), complete_bipartite(2, 3),
            star_graph(4),
            [] {
                MultiGraph g = complete_graph(4);
                g.add_edge(0, 1, "extra");
                return g;
            }(),
        };
        for (const auto& [c, cls] : hosts)
            for (const auto& g : probes)
                expect(g, c, brute_force_surface_embed(g, cls));
    }
    // --- stage: splitting across disconnected surfaces
    {
        auto sph = surface_gadget(0, true);
        auto tor = surface_gadget(1, true);
        auto prj = surface_gadget(1, false);
        auto kln = surface_gadget(2, false);
        std::vector<std::pair<SimplicialComplex2, std::vector<SurfaceClass>>>
            hosts = {
                {disjoint_complex({sph, sph}),
                 {SurfaceClass{0, true}, SurfaceClass{0, true}}},
                {disjoint_complex({sph, tor}),
                 {SurfaceClass{0, true}, SurfaceClass{2, true}}},
                {disjoint_complex({tor, tor}),
                 {SurfaceClass{2, true}, SurfaceClass{2, true}}},
                {disjoint_complex({prj, sph}),
                 {SurfaceClass{1, false}, SurfaceClass{0, true}}},
                {disjoint_complex({kln, sph}),
                 {SurfaceClass{2, false}, SurfaceClass{0, true}}},
            };
        std::vector<MultiGraph> probes = {
            disjoint_union(cycle_graph(3), cycle_graph(3), "_b"),
            disjoint_union(cycle_graph(3), cycle_graph(4), "_b"),
            disjoint_union(complete_graph(4), cycle_graph(3), "_b"),
            disjoint_union(disjoint_union(cycle_graph(3), cycle_graph(3),
                                          "_b"),
                           cycle_graph(3), "_c"),
            complete_bipartite(3, 3),
            complete_graph(4),
        };
        for (const auto& [c, classes] : hosts)
            for (const auto& g : probes)
                expect(g, c, multi_surface_oracle(g, classes));
    }
    if (bad) std::printf("  %d of %d stage fixtures disagree\n", bad, total);
    return bad == 0;
}

}  // namespace

int main(int argc, char** argv) {
    // optional argument: run only the criterion with this number
    const char* only = argc > 1 ? argv[1] : nullptr;
    struct Row {
        const char* what;
        std::function<bool()> run;
    };
    bool euler_ok = false, bounds_ok = false;
    std::vector<Row> rows = {
        {"1 book complexes accept everything fast", crit1},
        {"2 surface corpus", crit2},
        {"3 joined tori vs contracted amalgam", crit3},
        {"4 crossing gadgets", crit4},
        {"5 oracle equivalence on all small graphs", crit5},
        {"6 surgery lowers the defect monotonically",
         [&] { return crit6_and_7_and_9(&euler_ok, &bounds_ok); }},
        {"7 Euler arithmetic of every constructed map",
         [&] { return euler_ok; }},
        {"8 certificate round-trip and mutation sweep", crit8},
        {"9 enumeration width bounds", [&] { return bounds_ok; }},
        {"10 stage fixtures match the oracle", crit10},
    };
    int failures = 0;
    for (auto& r : rows) {
        std::string label(r.what);
        if (only && label.substr(0, label.find(' ')) != only) continue;
        auto t0 = std::chrono::steady_clock::now();
        bool ok = r.run();
        std::printf("criterion %s: %s (%.1fs)\n", r.what,
                    ok ? "PASS" : "FAIL", seconds_since(t0));
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
