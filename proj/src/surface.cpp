#include "cemb/surface.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <utility>

namespace cemb {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error(msg); }

int other_end(const MultiGraph::Edge& e, int v) { return e.u == v ? e.v : e.u; }

/// Dart of edge e with tail `from`; endpoints must be distinct.
int dart_from(const MultiGraph& g, int e, int from) {
    const auto& ed = g.edges[e];
    if (ed.u == ed.v) fail("dart_from: loop edge needs an explicit side");
    if (ed.u == from) return 2 * e;
    if (ed.v == from) return 2 * e + 1;
    fail("dart_from: vertex not an endpoint");
}

/// Decomposes a 2-regular set of edges (no loops) into closed dart walks.
/// Deterministic: each circuit starts at its smallest vertex and leaves it
/// through its smallest incident circuit edge.
std::vector<std::vector<int>> walk_circuits(const MultiGraph& g,
                                            const std::vector<int>& edge_ids) {
    std::map<int, std::vector<int>> inc;
    for (int e : edge_ids) {
        if (g.edges[e].u == g.edges[e].v) fail("walk_circuits: loop edge");
        inc[g.edges[e].u].push_back(e);
        inc[g.edges[e].v].push_back(e);
    }
    for (auto& [v, l] : inc) {
        if (l.size() != 2) fail("walk_circuits: boundary is not 2-regular");
        std::sort(l.begin(), l.end());
    }
    std::set<int> unused(edge_ids.begin(), edge_ids.end());
    std::vector<std::vector<int>> circuits;
    for (auto& [start, l] : inc) {
        int first = -1;
        for (int e : l)
            if (unused.count(e)) first = first < 0 ? e : first;
        if (first < 0) continue;
        std::vector<int> walk;
        int v = start, e = first;
        while (true) {
            unused.erase(e);
            walk.push_back(dart_from(g, e, v));
            v = other_end(g.edges[e], v);
            int nxt = -1;
            for (int cand : inc[v])
                if (unused.count(cand)) nxt = nxt < 0 ? cand : nxt;
            if (nxt < 0) break;
            e = nxt;
        }
        if (v != start) fail("walk_circuits: open chain");
        circuits.push_back(std::move(walk));
    }
    return circuits;
}

/// Canonical comparison key of a closed dart walk: sorted dart multiset or
/// its mate image, whichever is lexicographically smaller (a boundary walk
/// and its reversal use mate darts).
std::vector<int> walk_key(std::vector<int> darts) {
    std::vector<int> mates(darts.size());
    for (std::size_t i = 0; i < darts.size(); ++i) mates[i] = darts[i] ^ 1;
    std::sort(darts.begin(), darts.end());
    std::sort(mates.begin(), mates.end());
    return std::min(darts, mates);
}

}  // namespace

CombMap map_from_polygons(const MultiGraph& g,
                          const std::vector<std::vector<int>>& polygons) {
    const int ne = g.num_edges();
    const int nd = 2 * ne;
    auto tail = [&](int d) {
        const auto& e = g.edges[d / 2];
        return (d & 1) ? e.v : e.u;
    };
    auto head = [&](int d) { return tail(d ^ 1); };

    std::vector<int> appearances(nd, 0);
    for (const auto& walk : polygons) {
        if (walk.empty()) fail("map_from_polygons: empty polygon");
        for (std::size_t i = 0; i < walk.size(); ++i) {
            int d = walk[i];
            if (d < 0 || d >= nd) fail("map_from_polygons: dart out of range");
            ++appearances[d];
            if (head(d) != tail(walk[(i + 1) % walk.size()]))
                fail("map_from_polygons: polygon walk is not closed");
        }
    }
    for (int e = 0; e < ne; ++e)
        if (appearances[2 * e] + appearances[2 * e + 1] != 2)
            fail("map_from_polygons: edge not traversed exactly twice");

    // One corner per traversed walk position: the pair of darts leaving
    // head(d_i) that flank the face there.
    struct Corner {
        int a, b;
    };
    std::vector<std::vector<Corner>> corners(g.num_vertices());
    for (const auto& walk : polygons)
        for (std::size_t i = 0; i < walk.size(); ++i) {
            int d = walk[i];
            int nxt = walk[(i + 1) % walk.size()];
            corners[head(d)].push_back({d ^ 1, nxt});
        }

    // Chain the corners around every vertex into a single rotation cycle.
    std::vector<std::vector<int>> rot(g.num_vertices());
    for (int v = 0; v < g.num_vertices(); ++v) {
        std::vector<int> slots;
        for (int d = 0; d < nd; ++d)
            if (tail(d) == v) slots.push_back(d);
        if (slots.empty()) {
            if (!corners[v].empty()) fail("map_from_polygons: corner at isolated vertex");
            fail("map_from_polygons: isolated vertex");
        }
        if (corners[v].size() != slots.size())
            fail("map_from_polygons: corner count does not match degree");
        std::map<int, std::vector<int>> at;  // slot -> corner indices
        for (int i = 0; i < static_cast<int>(corners[v].size()); ++i) {
            at[corners[v][i].a].push_back(i);
            at[corners[v][i].b].push_back(i);
        }
        if (static_cast<int>(at.size()) != static_cast<int>(slots.size()))
            fail("map_from_polygons: corner uses a foreign dart");
        for (int s : slots) {
            auto it = at.find(s);
            if (it == at.end() || it->second.size() != 2)
                fail("map_from_polygons: dart is not flanked by exactly two corners");
        }
        std::vector<char> cused(corners[v].size(), 0);
        std::vector<int> cyc;
        int start = slots.front();
        int cur = start;
        int exitc = at[start][0];
        while (true) {
            cyc.push_back(cur);
            if (cused[exitc]) fail("map_from_polygons: corner reuse while chaining");
            cused[exitc] = 1;
            const Corner& c = corners[v][exitc];
            int nxt = (c.a == cur) ? c.b : c.a;
            if (nxt == start) break;
            const auto& lst = at[nxt];
            exitc = (lst[0] == exitc) ? lst[1] : lst[0];
            cur = nxt;
        }
        if (cyc.size() != slots.size())
            fail("map_from_polygons: vertex rotation is not a single cycle");
        rot[v] = cyc;
    }

    // Edge signs: traversing dart d_i on side s, the side after the edge is
    // s ^ lambda(e_i) and must match how d_{i+1} follows mate(d_i) in the
    // rotation (successor on side +1, predecessor on side -1).  Unknowns:
    // one bit per edge (set = sign -1) and one starting-side bit per walk.
    const int nvars = ne + static_cast<int>(polygons.size());
    const int words = (nvars + 63) / 64;
    auto flip = [&](std::vector<std::uint64_t>& row, int var) {
        row[var >> 6] ^= (std::uint64_t{1} << (var & 63));
    };
    std::vector<std::vector<std::uint64_t>> rows;
    std::vector<char> rhs;
    // Side expression of each edge traversal (dart, s0-bit plus the lambda
    // prefix), used below to force the two traversals onto opposite sides.
    struct Traversal {
        int dart;
        std::vector<std::uint64_t> side;
    };
    std::vector<std::vector<Traversal>> traversals(ne);
    for (int w = 0; w < static_cast<int>(polygons.size()); ++w) {
        const auto& walk = polygons[w];
        std::vector<std::uint64_t> prefix(words, 0);
        for (std::size_t i = 0; i < walk.size(); ++i) {
            int d = walk[i];
            {
                auto side = prefix;
                flip(side, ne + w);
                traversals[d / 2].push_back({d, std::move(side)});
            }
            flip(prefix, d / 2);
            int nxtd = walk[(i + 1) % walk.size()];
            const auto& r = rot[head(d)];
            int m = d ^ 1;
            int pos = -1;
            for (int j = 0; j < static_cast<int>(r.size()); ++j)
                if (r[j] == m) pos = j;
            if (pos < 0) fail("map_from_polygons: dart missing from rotation");
            int succ = r[(pos + 1) % r.size()];
            int pred = r[(pos + r.size() - 1) % r.size()];
            bool can_fwd = (succ == nxtd);
            bool can_bwd = (pred == nxtd);
            if (!can_fwd && !can_bwd)
                fail("map_from_polygons: walk breaks the derived rotation");
            if (can_fwd != can_bwd) {
                auto row = prefix;
                flip(row, ne + w);
                rows.push_back(std::move(row));
                rhs.push_back(can_bwd ? 1 : 0);
            }
        }
        // Side returns to itself after a full trip around the polygon.
        bool nonzero = false;
        for (auto x : prefix) nonzero = nonzero || x != 0;
        if (nonzero) {
            rows.push_back(prefix);
            rhs.push_back(0);
        }
    }
    // The two traversals of an edge are its two sides: equal darts must use
    // opposite trace signs, mate darts signs differing by the edge sign.
    for (int e = 0; e < ne; ++e) {
        const auto& tr = traversals[e];
        if (tr.size() != 2) fail("map_from_polygons: edge traversal bookkeeping");
        auto row = tr[0].side;
        for (int wd = 0; wd < words; ++wd) row[wd] ^= tr[1].side[wd];
        if (tr[0].dart == tr[1].dart) {
            rows.push_back(std::move(row));
            rhs.push_back(1);
        } else {
            flip(row, e);
            rows.push_back(std::move(row));
            rhs.push_back(0);
        }
    }

    // Gaussian elimination over GF(2); free variables default to 0 (+1).
    std::vector<std::vector<std::uint64_t>> basis;
    std::vector<char> brhs;
    std::vector<int> bpiv;
    auto low_bit = [&](const std::vector<std::uint64_t>& row) {
        for (int wd = 0; wd < words; ++wd)
            if (row[wd]) {
                for (int b = 0; b < 64; ++b)
                    if (row[wd] >> b & 1) return wd * 64 + b;
            }
        return -1;
    };
    auto get_bit = [&](const std::vector<std::uint64_t>& row, int var) {
        return (row[var >> 6] >> (var & 63)) & 1;
    };
    for (std::size_t i = 0; i < rows.size(); ++i) {
        auto row = rows[i];
        char b = rhs[i];
        for (std::size_t j = 0; j < basis.size(); ++j)
            if (get_bit(row, bpiv[j])) {
                for (int wd = 0; wd < words; ++wd) row[wd] ^= basis[j][wd];
                b ^= brhs[j];
            }
        int piv = low_bit(row);
        if (piv < 0) {
            if (b) fail("map_from_polygons: inconsistent side constraints");
            continue;
        }
        basis.push_back(std::move(row));
        brhs.push_back(b);
        bpiv.push_back(piv);
    }
    std::vector<char> val(nvars, 0);
    std::vector<std::size_t> order(basis.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return bpiv[x] > bpiv[y]; });
    for (std::size_t i : order) {
        char b = brhs[i];
        for (int var = bpiv[i] + 1; var < nvars; ++var)
            if (get_bit(basis[i], var)) b ^= val[var];
        val[bpiv[i]] = b;
    }
    std::vector<int> sign(ne, +1);
    for (int e = 0; e < ne; ++e) sign[e] = val[e] ? -1 : +1;

    CombMap m = cellular_map(g, rot, sign);
    if (m.faces.size() != polygons.size())
        fail("map_from_polygons: traced face count differs from the polygons");
    std::multiset<std::vector<int>> want, got;
    for (const auto& walk : polygons) want.insert(walk_key(walk));
    for (const auto& f : m.faces) {
        std::vector<int> ds;
        for (const auto& s : f.walls[0].states) ds.push_back(s.dart);
        got.insert(walk_key(std::move(ds)));
    }
    if (want != got) fail("map_from_polygons: traced faces differ from the polygons");
    return m;
}

std::vector<SurfaceReport> classify_surface(const SimplicialComplex2& c) {
    if (c.empty()) return {};
    if (contains_3book(c))
        fail("classify_surface: a segment lies in three or more triangles");
    std::vector<int> tcnt(c.segments.size(), 0);
    for (const auto& t : c.triangles) {
        ++tcnt[*c.find_segment(t[0], t[1])];
        ++tcnt[*c.find_segment(t[0], t[2])];
        ++tcnt[*c.find_segment(t[1], t[2])];
    }
    for (std::size_t s = 0; s < c.segments.size(); ++s)
        if (tcnt[s] == 0) fail("classify_surface: segment lies in no triangle");
    for (int p = 0; p < c.num_nodes(); ++p) {
        NodeLink l = node_link(c, p);
        if (l.num_parts() == 0) fail("classify_surface: isolated node");
        if (l.num_parts() != 1 || !l.isolated_segments.empty())
            fail("classify_surface: singular node");
    }

    MultiGraph mg;
    for (const auto& n : c.node_names) mg.add_vertex(n);
    for (std::size_t s = 0; s < c.segments.size(); ++s)
        mg.add_edge(c.segments[s][0], c.segments[s][1],
                    "s" + std::to_string(s));

    std::vector<std::vector<int>> polys;
    for (const auto& t : c.triangles)
        polys.push_back({dart_from(mg, *c.find_segment(t[0], t[1]), t[0]),
                         dart_from(mg, *c.find_segment(t[1], t[2]), t[1]),
                         dart_from(mg, *c.find_segment(t[0], t[2]), t[2])});
    std::vector<int> boundary;
    for (std::size_t s = 0; s < c.segments.size(); ++s)
        if (tcnt[s] == 1) boundary.push_back(static_cast<int>(s));
    auto circles = walk_circuits(mg, boundary);
    for (const auto& circ : circles) polys.push_back(circ);

    CombMap m = map_from_polygons(mg, polys);
    auto comps = surface_components(m);
    std::vector<int> comp_of(mg.num_vertices(), -1);
    for (std::size_t i = 0; i < comps.size(); ++i)
        for (int v : comps[i].vertices) comp_of[v] = static_cast<int>(i);
    std::vector<SurfaceReport> out;
    for (const auto& comp : comps) {
        SurfaceReport rep;
        rep.cls = comp.cls;
        rep.nodes = comp.vertices;
        std::sort(rep.nodes.begin(), rep.nodes.end());
        out.push_back(std::move(rep));
    }
    for (const auto& circ : circles) {
        int v = mg.edges[circ[0] / 2].u;
        v = (circ[0] & 1) ? mg.edges[circ[0] / 2].v : v;
        ++out[comp_of[v]].boundaries;
    }
    return out;
}

SimplicialComplex2 barycentric_subdivision(const SimplicialComplex2& c) {
    SimplicialComplex2 d;
    std::set<std::string> used(c.node_names.begin(), c.node_names.end());
    auto fresh = [&](std::string base) {
        while (used.count(base)) base += "'";
        used.insert(base);
        return base;
    };
    for (const auto& n : c.node_names) d.add_node(n);
    std::vector<int> segmid(c.segments.size());
    for (std::size_t s = 0; s < c.segments.size(); ++s)
        segmid[s] = d.add_node(fresh("(" + c.node_names[c.segments[s][0]] + "|" +
                                     c.node_names[c.segments[s][1]] + ")"));
    std::vector<int> trimid(c.triangles.size());
    for (std::size_t t = 0; t < c.triangles.size(); ++t)
        trimid[t] = d.add_node(fresh("(" + c.node_names[c.triangles[t][0]] + "|" +
                                     c.node_names[c.triangles[t][1]] + "|" +
                                     c.node_names[c.triangles[t][2]] + ")"));
    std::vector<int> tcnt(c.segments.size(), 0);
    for (std::size_t t = 0; t < c.triangles.size(); ++t) {
        const auto& tr = c.triangles[t];
        int tm = trimid[t];
        const std::array<std::array<int, 2>, 3> sides = {
            {{tr[0], tr[1]}, {tr[0], tr[2]}, {tr[1], tr[2]}}};
        for (const auto& sd : sides) {
            int s = *c.find_segment(sd[0], sd[1]);
            ++tcnt[s];
            d.add_triangle(sd[0], segmid[s], tm);
            d.add_triangle(segmid[s], sd[1], tm);
        }
    }
    for (std::size_t s = 0; s < c.segments.size(); ++s)
        if (tcnt[s] == 0) {
            d.add_segment(c.segments[s][0], segmid[s]);
            d.add_segment(segmid[s], c.segments[s][1]);
        }
    return d;
}

WithdrawResult withdraw_nodes(const SimplicialComplex2& c,
                              const std::vector<std::string>& nodes) {
    std::map<int, NodeLink> links;
    for (const auto& name : nodes) {
        auto id = c.find_node(name);
        if (!id) fail("withdraw_nodes: unknown node " + name);
        if (links.count(*id)) fail("withdraw_nodes: duplicate node " + name);
        links.emplace(*id, node_link(c, *id));
    }
    WithdrawResult out;
    SimplicialComplex2& d = out.complex;
    std::set<std::string> used(c.node_names.begin(), c.node_names.end());
    auto fresh = [&](std::string base) {
        while (used.count(base)) base += "'";
        used.insert(base);
        return base;
    };
    std::vector<int> newid(c.num_nodes(), -1);
    for (int v = 0; v < c.num_nodes(); ++v)
        if (!links.count(v)) newid[v] = d.add_node(c.node_names[v]);
    std::map<int, std::vector<int>> copy_ids;
    std::map<std::pair<int, int>, int> tri_part;  // (node, triangle) -> part
    std::map<std::pair<int, int>, int> seg_part;  // (node, segment) -> part
    for (const auto& [p, link] : links) {
        auto& names = out.copies[c.node_names[p]];
        auto& ids = copy_ids[p];
        auto mkcopy = [&]() {
            std::string nm =
                fresh(c.node_names[p] + "@" + std::to_string(ids.size()));
            names.push_back(nm);
            ids.push_back(d.add_node(nm));
        };
        for (const auto& cone : link.cones) {
            for (int t : cone) tri_part[{p, t}] = static_cast<int>(ids.size());
            mkcopy();
        }
        for (const auto& cor : link.corners) {
            for (int t : cor) tri_part[{p, t}] = static_cast<int>(ids.size());
            mkcopy();
        }
        for (int s : link.isolated_segments) {
            seg_part[{p, s}] = static_cast<int>(ids.size());
            mkcopy();
        }
    }
    auto tri_node = [&](int v, int t) {
        auto it = tri_part.find({v, t});
        return it == tri_part.end() ? newid[v] : copy_ids[v][it->second];
    };
    for (std::size_t t = 0; t < c.triangles.size(); ++t) {
        const auto& tr = c.triangles[t];
        d.add_triangle(tri_node(tr[0], static_cast<int>(t)),
                       tri_node(tr[1], static_cast<int>(t)),
                       tri_node(tr[2], static_cast<int>(t)));
    }
    std::vector<int> tcnt(c.segments.size(), 0);
    for (const auto& t : c.triangles) {
        ++tcnt[*c.find_segment(t[0], t[1])];
        ++tcnt[*c.find_segment(t[0], t[2])];
        ++tcnt[*c.find_segment(t[1], t[2])];
    }
    auto seg_node = [&](int v, int s) {
        auto it = seg_part.find({v, s});
        return it == seg_part.end() ? newid[v] : copy_ids[v][it->second];
    };
    for (std::size_t s = 0; s < c.segments.size(); ++s)
        if (tcnt[s] == 0)
            d.add_segment(seg_node(c.segments[s][0], static_cast<int>(s)),
                          seg_node(c.segments[s][1], static_cast<int>(s)));
    return out;
}

ThickenResult thicken_and_cap(const SimplicialComplex2& c,
                              const std::map<std::string, std::string>& pins,
                              const MultiGraph& g0) {
    if (contains_3book(c)) fail("thicken_and_cap: complex contains a 3-book");
    if (!is_pure(c)) fail("thicken_and_cap: complex is not pure");
    std::set<std::string> pinned_vertices;
    for (const auto& [node, vert] : pins) {
        if (!c.find_node(node)) fail("thicken_and_cap: unknown pinned node " + node);
        if (!g0.find_vertex(vert))
            fail("thicken_and_cap: unknown pinned vertex " + vert);
        if (!pinned_vertices.insert(vert).second)
            fail("thicken_and_cap: pins are not injective");
    }
    ThickenResult out;
    out.g = g0;
    if (c.empty()) return out;

    auto sing = singular_nodes(c);
    std::vector<std::string> sing_names;
    std::map<std::string, int> num_cones;  // per singular node
    for (int p : sing) {
        const std::string& nm = c.node_names[p];
        if (!pins.count(nm))
            fail("thicken_and_cap: singular node " + nm + " is not pinned");
        sing_names.push_back(nm);
        num_cones[nm] = static_cast<int>(node_link(c, p).cones.size());
    }

    auto wd = withdraw_nodes(c, sing_names);
    SimplicialComplex2 D = barycentric_subdivision(wd.complex);

    struct CopyInfo {
        std::string pnode;
        int petal;
        bool cone;
        int node;  // id in D
    };
    std::vector<CopyInfo> copies;
    std::map<int, int> copy_at_node;
    for (const auto& pname : sing_names) {
        const auto& cps = wd.copies.at(pname);
        for (std::size_t i = 0; i < cps.size(); ++i) {
            auto id = D.find_node(cps[i]);
            if (!id) fail("thicken_and_cap: lost copy node");
            copy_at_node[*id] = static_cast<int>(copies.size());
            copies.push_back({pname, static_cast<int>(i),
                              static_cast<int>(i) < num_cones[pname], *id});
        }
    }

    // Fresh user-facing names.
    std::set<std::string> used_v(g0.vertex_names.begin(), g0.vertex_names.end());
    std::set<std::string> used_e;
    for (const auto& e : g0.edges) used_e.insert(e.name);
    auto fresh_v = [&](std::string b) {
        while (used_v.count(b)) b += "'";
        used_v.insert(b);
        return b;
    };
    auto fresh_e = [&](std::string b) {
        while (used_e.count(b)) b += "'";
        used_e.insert(b);
        return b;
    };

    MultiGraph mg;
    std::vector<int> mgv(D.num_nodes(), -1);
    for (int x = 0; x < D.num_nodes(); ++x) {
        if (copy_at_node.count(x)) continue;
        auto pin = pins.find(D.node_names[x]);
        std::string nm =
            pin != pins.end() ? pin->second : "~" + D.node_names[x];
        mgv[x] = mg.add_vertex(nm);
    }
    std::map<std::string, int> vp;  // singular node -> pinned mg vertex
    for (const auto& pname : sing_names)
        vp[pname] = mg.add_vertex(pins.at(pname));

    std::vector<int> h_vertex_ids, h_edge_ids;
    std::vector<std::string> new_vertices;               // names added to g0
    std::vector<std::array<int, 2>> new_edge_ends;       // mg vertex ids
    std::vector<std::string> new_edge_names;
    auto mark_hv = [&](int id) { h_vertex_ids.push_back(id); };
    auto add_h_edge = [&](int u, int v, const std::string& nm) {
        int e = mg.add_edge(u, v, nm);
        h_edge_ids.push_back(e);
        new_edge_ends.push_back({u, v});
        new_edge_names.push_back(nm);
        return e;
    };
    for (const auto& pname : sing_names) mark_hv(vp[pname]);
    for (int x = 0; x < D.num_nodes(); ++x)
        if (mgv[x] >= 0 && pins.count(D.node_names[x])) mark_hv(mgv[x]);

    // Scaffold edges: subdivided segments away from the copies.
    std::vector<int> seg_edge(D.segments.size(), -1);
    for (std::size_t s = 0; s < D.segments.size(); ++s) {
        int a = D.segments[s][0], b = D.segments[s][1];
        if (copy_at_node.count(a) || copy_at_node.count(b)) continue;
        seg_edge[s] = mg.add_edge(mgv[a], mgv[b], "~s" + std::to_string(s));
    }
    auto seg_of = [&](int a, int b) {
        auto s = D.find_segment(a, b);
        if (!s) fail("thicken_and_cap: missing segment");
        return *s;
    };

    std::vector<std::vector<int>> polys;
    for (const auto& t : D.triangles) {
        if (copy_at_node.count(t[0]) || copy_at_node.count(t[1]) ||
            copy_at_node.count(t[2]))
            continue;  // consumed by a petal below
        polys.push_back(
            {dart_from(mg, seg_edge[seg_of(t[0], t[1])], mgv[t[0]]),
             dart_from(mg, seg_edge[seg_of(t[1], t[2])], mgv[t[1]]),
             dart_from(mg, seg_edge[seg_of(t[0], t[2])], mgv[t[2]])});
    }
    std::map<std::string, std::vector<int>> petal_loops;
    struct TipInfo {
        int tip, dta, dtb;
    };
    std::map<int, TipInfo> tip_at;  // copy node in D -> tip data
    std::set<int> marker_ids;       // tips + pinned surviving boundary nodes

    for (const auto& ci : copies) {
        NodeLink l = node_link(D, ci.node);
        int pv = vp[ci.pnode];
        int loop = add_h_edge(
            pv, pv, fresh_e("loop:" + ci.pnode + ":" + std::to_string(ci.petal)));
        petal_loops[ci.pnode].push_back(loop);
        std::vector<int> w;
        if (ci.cone) {
            if (l.cones.size() != 1 || !l.corners.empty())
                fail("thicken_and_cap: copy link is not a single cone");
            const auto& tris = l.cones[0];
            int m = static_cast<int>(tris.size());
            auto common = [&](int t1, int t2) {
                for (int a : D.triangles[t1])
                    for (int b : D.triangles[t2])
                        if (a == b && a != ci.node) return a;
                fail("thicken_and_cap: cone triangles do not chain");
            };
            std::vector<int> y(m);
            for (int j = 0; j < m; ++j)
                y[j] = common(tris[(j + m - 1) % m], tris[j]);
            int best = 0;
            for (int j = 1; j < m; ++j)
                if (y[j] < y[best]) best = j;
            std::rotate(y.begin(), y.begin() + best, y.end());
            int aedge = mg.add_edge(pv, mgv[y[0]], "~a" + std::to_string(polys.size()));
            w.push_back(dart_from(mg, aedge, pv));
            for (int j = 0; j < m; ++j)
                w.push_back(dart_from(mg, seg_edge[seg_of(y[j], y[(j + 1) % m])],
                                      mgv[y[j]]));
            w.push_back(dart_from(mg, aedge, mgv[y[0]]));
            w.push_back(2 * loop);
        } else {
            if (l.corners.size() != 1 || !l.cones.empty())
                fail("thicken_and_cap: copy link is not a single corner");
            const auto& tris = l.corners[0];
            int k = static_cast<int>(tris.size());
            std::vector<int> y;
            if (k == 1) {
                for (int a : D.triangles[tris[0]])
                    if (a != ci.node) y.push_back(a);
                std::sort(y.begin(), y.end());
            } else {
                auto in_tri = [&](int v, int t) {
                    const auto& tr = D.triangles[t];
                    return tr[0] == v || tr[1] == v || tr[2] == v;
                };
                for (int a : D.triangles[tris[0]])
                    if (a != ci.node && !in_tri(a, tris[1])) y.push_back(a);
                for (int j = 0; j + 1 < k; ++j)
                    for (int a : D.triangles[tris[j]])
                        if (a != ci.node && in_tri(a, tris[j + 1])) y.push_back(a);
                for (int a : D.triangles[tris[k - 1]])
                    if (a != ci.node && !in_tri(a, tris[k - 2])) y.push_back(a);
            }
            int tip = mg.add_vertex(
                fresh_v("tip:" + ci.pnode + ":" + std::to_string(ci.petal)));
            mark_hv(tip);
            new_vertices.push_back(mg.vertex_names[tip]);
            marker_ids.insert(tip);
            int dta = mg.add_edge(mgv[y.front()], tip,
                                  "~d" + std::to_string(polys.size()) + "a");
            int dtb = mg.add_edge(tip, mgv[y.back()],
                                  "~d" + std::to_string(polys.size()) + "b");
            tip_at[ci.node] = {tip, dta, dtb};
            int pend = add_h_edge(pv, tip,
                                  fresh_e("stem:" + ci.pnode + ":" +
                                          std::to_string(ci.petal)));
            w.push_back(dart_from(mg, pend, pv));
            w.push_back(dart_from(mg, dta, tip));
            for (std::size_t j = 0; j + 1 < y.size(); ++j)
                w.push_back(
                    dart_from(mg, seg_edge[seg_of(y[j], y[j + 1])], mgv[y[j]]));
            w.push_back(dart_from(mg, dtb, mgv[y.back()]));
            w.push_back(dart_from(mg, pend, tip));
            w.push_back(2 * loop);
        }
        polys.push_back(std::move(w));
    }
    // Central disk of each singular-node sphere, one side per loop.
    for (const auto& pname : sing_names) {
        std::vector<int> w;
        for (int loop : petal_loops.at(pname)) w.push_back(2 * loop + 1);
        polys.push_back(std::move(w));
    }

    // Boundary circles: boundary halves away from the copies plus the two
    // detour edges replacing each corner copy.
    std::vector<int> tcnt(D.segments.size(), 0);
    for (const auto& t : D.triangles) {
        ++tcnt[*D.find_segment(t[0], t[1])];
        ++tcnt[*D.find_segment(t[0], t[2])];
        ++tcnt[*D.find_segment(t[1], t[2])];
    }
    std::vector<int> circ_edges;
    for (std::size_t s = 0; s < D.segments.size(); ++s) {
        if (tcnt[s] != 1) continue;
        int a = D.segments[s][0], b = D.segments[s][1];
        if (copy_at_node.count(a) || copy_at_node.count(b)) {
            int q = copy_at_node.count(a) ? a : b;
            if (!tip_at.count(q))
                fail("thicken_and_cap: boundary segment at a cone copy");
            continue;  // replaced by that copy's detours
        }
        circ_edges.push_back(seg_edge[s]);
    }
    for (const auto& [node, ti] : tip_at) {
        circ_edges.push_back(ti.dta);
        circ_edges.push_back(ti.dtb);
    }
    for (int x = 0; x < D.num_nodes(); ++x)
        if (mgv[x] >= 0 && pins.count(D.node_names[x])) marker_ids.insert(mgv[x]);

    int hub_count = 0;
    for (const auto& circle : walk_circuits(mg, circ_edges)) {
        const int L = static_cast<int>(circle.size());
        auto dtail = [&](int d) {
            const auto& e = mg.edges[d / 2];
            return (d & 1) ? e.v : e.u;
        };
        std::vector<std::pair<int, int>> marks;  // (position, vertex)
        for (int i = 0; i < L; ++i)
            if (marker_ids.count(dtail(circle[i]))) marks.push_back({i, dtail(circle[i])});
        if (marks.empty()) {
            polys.push_back(circle);
            continue;
        }
        int hub = mg.add_vertex(fresh_v("hub:" + std::to_string(hub_count++)));
        mark_hv(hub);
        new_vertices.push_back(mg.vertex_names[hub]);
        std::vector<int> spokes;
        for (std::size_t j = 0; j < marks.size(); ++j)
            spokes.push_back(add_h_edge(
                hub, marks[j].second,
                fresh_e("spoke:" + mg.vertex_names[hub] + ":" + std::to_string(j))));
        for (std::size_t j = 0; j < marks.size(); ++j) {
            std::size_t jn = (j + 1) % marks.size();
            int count = (marks[jn].first - marks[j].first + L) % L;
            if (count == 0) count = L;
            std::vector<int> w;
            w.push_back(dart_from(mg, spokes[j], hub));
            for (int i = 0; i < count; ++i)
                w.push_back(circle[(marks[j].first + i) % L]);
            w.push_back(dart_from(mg, spokes[jn], marks[jn].second));
            polys.push_back(std::move(w));
        }
    }

    CombMap full = map_from_polygons(mg, polys);

    std::vector<char> keep_vertex(mg.num_vertices(), 0);
    std::vector<char> keep_edge(mg.num_edges(), 0);
    for (int v : h_vertex_ids) keep_vertex[v] = 1;
    for (int e : h_edge_ids) keep_edge[e] = 1;
    for (const auto& comp : surface_components(full)) {
        bool has_h = false;
        for (int v : comp.vertices) has_h = has_h || keep_vertex[v];
        if (!has_h) out.bare.push_back(comp.cls);
    }
    CombMap pi = restriction(full, keep_edge, keep_vertex);
    std::vector<FaceRec> kept_faces;
    int empties = 0;
    for (auto& f : pi.faces) {
        if (f.walls.empty() && f.floats.empty())
            ++empties;
        else
            kept_faces.push_back(std::move(f));
    }
    if (empties != static_cast<int>(out.bare.size()))
        fail("thicken_and_cap: graph-free component mismatch");
    pi.faces = std::move(kept_faces);
    pi.check();
    out.pi = std::move(pi);

    for (const auto& nm : new_vertices) out.g.add_vertex(nm);
    for (std::size_t i = 0; i < new_edge_names.size(); ++i)
        out.g.add_edge(*out.g.find_vertex(mg.vertex_names[new_edge_ends[i][0]]),
                       *out.g.find_vertex(mg.vertex_names[new_edge_ends[i][1]]),
                       new_edge_names[i]);
    for (int v : h_vertex_ids) out.h_vertices.push_back(mg.vertex_names[v]);
    for (int e : h_edge_ids) out.h_edges.push_back(mg.edges[e].name);
    return out;
}

}  // namespace cemb
