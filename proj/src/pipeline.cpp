#include "cemb/pipeline.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

namespace cemb {

void BudgetMeter::tick() {
    ++used;
    if (max_steps >= 0 && used > max_steps) throw BudgetExceeded{};
    if (max_seconds >= 0 && (used & 0xff) == 0) {
        std::chrono::duration<double> el =
            std::chrono::steady_clock::now() - started;
        if (el.count() > max_seconds) throw BudgetExceeded{};
    }
}

namespace {

long long sat_pow(long long base, int exp) {
    long long r = 1;
    const long long cap = std::numeric_limits<long long>::max();
    for (int i = 0; i < exp; ++i) {
        if (base != 0 && r > cap / base) return cap;
        r *= base;
    }
    return r;
}

/// Inserts k fresh vertices into every edge, so that the drawing of any one
/// edge may pass through up to k prescribed points of the target space.
MultiGraph subdivide_each(const MultiGraph& g, int k) {
    if (k <= 0) return g;
    MultiGraph out;
    out.vertex_names = g.vertex_names;
    for (int ei = 0; ei < g.num_edges(); ++ei) {
        const auto& e = g.edges[ei];
        int prev = e.u;
        for (int j = 1; j <= k; ++j) {
            int m = out.add_vertex("_d" + std::to_string(ei) + "_" +
                                   std::to_string(j) + "_" + e.name);
            out.add_edge(prev, m, e.name + "." + std::to_string(j));
            prev = m;
        }
        out.add_edge(prev, e.v, e.name + "." + std::to_string(k + 1));
    }
    return out;
}

MultiGraph drop_edges(const MultiGraph& g, const std::set<int>& del) {
    MultiGraph out;
    out.vertex_names = g.vertex_names;
    for (int i = 0; i < g.num_edges(); ++i)
        if (!del.count(i)) out.edges.push_back(g.edges[i]);
    return out;
}

/// Vertices to drop must be isolated.
MultiGraph drop_vertices(const MultiGraph& g, const std::set<int>& del) {
    MultiGraph out;
    std::vector<int> nid(g.num_vertices(), -1);
    for (int v = 0; v < g.num_vertices(); ++v)
        if (!del.count(v)) nid[v] = out.add_vertex(g.vertex_names[v]);
    for (const auto& e : g.edges) {
        if (nid[e.u] < 0 || nid[e.v] < 0)
            throw std::logic_error("drop_vertices: vertex still has edges");
        out.add_edge(nid[e.u], nid[e.v], e.name);
    }
    return out;
}

MultiGraph induced_subgraph(const MultiGraph& g, const std::vector<char>& in) {
    MultiGraph out;
    std::vector<int> nid(g.num_vertices(), -1);
    for (int v = 0; v < g.num_vertices(); ++v)
        if (in[v]) nid[v] = out.add_vertex(g.vertex_names[v]);
    for (const auto& e : g.edges)
        if (in[e.u] && in[e.v]) out.add_edge(nid[e.u], nid[e.v], e.name);
    return out;
}

SimplicialComplex2 rebuild_complex(const SimplicialComplex2& c,
                                   const std::set<int>& del_nodes,
                                   const std::set<int>& del_segments) {
    SimplicialComplex2 out;
    std::vector<int> nid(c.num_nodes(), -1);
    for (int p = 0; p < c.num_nodes(); ++p)
        if (!del_nodes.count(p)) nid[p] = out.add_node(c.node_names[p]);
    for (int si = 0; si < static_cast<int>(c.segments.size()); ++si) {
        if (del_segments.count(si)) continue;
        const auto& s = c.segments[si];
        if (nid[s[0]] < 0 || nid[s[1]] < 0)
            throw std::logic_error("rebuild_complex: endpoint deleted");
        out.add_segment(nid[s[0]], nid[s[1]]);
    }
    for (const auto& t : c.triangles)
        out.add_triangle(nid[t[0]], nid[t[1]], nid[t[2]]);
    return out;
}

/// Segment indices that lie in at least one triangle.
std::set<int> segments_in_triangles(const SimplicialComplex2& c) {
    std::set<int> used;
    for (const auto& t : c.triangles)
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j)
                if (auto si = c.find_segment(t[i], t[j])) used.insert(*si);
    return used;
}

int segment_count_at(const SimplicialComplex2& c, int p) {
    int n = 0;
    for (const auto& s : c.segments)
        if (s[0] == p || s[1] == p) ++n;
    return n;
}

std::string fresh_node_name(const SimplicialComplex2& c, std::string base) {
    while (c.find_node(base)) base += "'";
    return base;
}

std::string fresh_edge_name(const MultiGraph& g, std::string base) {
    auto taken = [&](const std::string& n) {
        for (const auto& e : g.edges)
            if (e.name == n) return true;
        return false;
    };
    while (taken(base)) base += "'";
    return base;
}

int total_defect(const CombMap& m) {
    int d = 0;
    for (const auto& f : m.faces) d += f.cellularity_defect();
    return d;
}

}  // namespace

GuessStream respecting_maps(const MultiGraph& g, const SimplicialComplex2& c) {
    GuessStream s;
    auto sing = singular_nodes(c);
    s.prepared = subdivide_each(g, static_cast<int>(sing.size()));
    for (int p : sing) s.nodes.push_back(c.node_names[p]);
    s.values.push_back("");
    for (const auto& vn : s.prepared.vertex_names) s.values.push_back(vn);
    return s;
}

long long GuessStream::total() const {
    return sat_pow(static_cast<long long>(values.size()),
                   static_cast<int>(nodes.size()));
}

bool GuessStream::assignment_at(long long index,
                                std::map<std::string, std::string>* out) const {
    out->clear();
    std::set<std::string> taken;
    long long rest = index;
    for (const auto& node : nodes) {
        int digit = static_cast<int>(rest % values.size());
        rest /= static_cast<long long>(values.size());
        const std::string& val = values[digit];
        if (!val.empty() && !taken.insert(val).second) return false;
        (*out)[node] = val;
    }
    return true;
}

ReduceOutcome reduce_to_pure(const SimplicialComplex2& c0, const MultiGraph& g0,
                             const std::map<std::string, std::string>& assign) {
    SimplicialComplex2 c = c0;
    MultiGraph g = g0;
    std::map<std::string, std::string> f = assign;

    for (int p : singular_nodes(c))
        if (!f.count(c.node_names[p]))
            throw std::invalid_argument("reduce_to_pure: unassigned node " +
                                        c.node_names[p]);

    auto fval = [&](int p) -> std::optional<std::string> {
        auto it = f.find(c.node_names[p]);
        if (it == f.end()) return std::nullopt;
        return it->second;
    };
    auto image_names = [&] {
        std::set<std::string> img;
        for (const auto& kv : f)
            if (!kv.second.empty()) img.insert(kv.second);
        return img;
    };
    auto vertex_of = [&](const std::string& name) {
        auto v = g.find_vertex(name);
        if (!v)
            throw std::logic_error("reduce_to_pure: assigned vertex vanished");
        return *v;
    };
    // Removes one edge ux where x is a leaf outside the image, if any.
    auto shed_leaf_edge = [&](int u) {
        auto img = image_names();
        for (int ei = 0; ei < g.num_edges(); ++ei) {
            const auto& e = g.edges[ei];
            int x = -1;
            if (e.u == u && e.v != u) x = e.v;
            if (e.v == u && e.u != u) x = e.u;
            if (x < 0) continue;
            if (g.degree(x) == 1 && !img.count(g.vertex_names[x])) {
                g = drop_edges(g, {ei});
                return;
            }
        }
    };

    // Interior vertices of the graph that were not promised to any node can
    // be smoothed away.
    {
        std::set<int> keep;
        for (const auto& nm : image_names())
            if (auto v = g.find_vertex(nm)) keep.insert(*v);
        g = dissolve_degree2(g, keep);
    }

    // Unused singular nodes with at least two incident segments are split
    // into one copy per cone, corner, or stray segment; an embedding can
    // always be pushed off such a node.
    {
        std::vector<std::string> split;
        for (int p = 0; p < c.num_nodes(); ++p) {
            auto v = fval(p);
            if (v && v->empty() && segment_count_at(c, p) >= 2)
                split.push_back(c.node_names[p]);
        }
        if (!split.empty()) {
            auto wr = withdraw_nodes(c, split);
            c = wr.complex;
            for (const auto& nm : split) {
                f.erase(nm);
                for (const auto& cp : wr.copies.at(nm)) f[cp] = "";
            }
        }
    }

    // A stray segment whose two endpoints are promised to u and v can carry
    // exactly one uv edge and nothing else: trade them off against each
    // other.
    for (bool again = true; again;) {
        again = false;
        auto used = segments_in_triangles(c);
        for (int si = 0; si < static_cast<int>(c.segments.size()); ++si) {
            if (used.count(si)) continue;
            auto fp = fval(c.segments[si][0]), fq = fval(c.segments[si][1]);
            if (!fp || !fq || fp->empty() || fq->empty()) continue;
            int u = vertex_of(*fp), v = vertex_of(*fq);
            int ei = -1;
            for (int i = 0; i < g.num_edges() && ei < 0; ++i) {
                const auto& e = g.edges[i];
                if ((e.u == u && e.v == v) || (e.u == v && e.v == u)) ei = i;
            }
            if (ei < 0) continue;
            c = rebuild_complex(c, {}, {si});
            g = drop_edges(g, {ei});
            again = true;
            break;
        }
    }

    // Same situation but with no uv edge available: the segment can only
    // carry a leaf edge from each side, so replace it by an unclaimed one
    // and shed one leaf per endpoint.
    for (bool again = true; again;) {
        again = false;
        auto used = segments_in_triangles(c);
        for (int si = 0; si < static_cast<int>(c.segments.size()); ++si) {
            if (used.count(si)) continue;
            int p = c.segments[si][0], q = c.segments[si][1];
            auto fp = fval(p), fq = fval(q);
            if (!fp || !fq || fp->empty() || fq->empty()) continue;
            int u = vertex_of(*fp), v = vertex_of(*fq);
            std::string pn = fresh_node_name(c, c.node_names[p] + "'");
            c = rebuild_complex(c, {}, {si});
            std::string qn = fresh_node_name(c, c.node_names[q] + "'");
            int a = c.add_node(pn);
            int b = c.add_node(qn);
            c.add_segment(a, b);
            f[pn] = "";
            f[qn] = "";
            shed_leaf_edge(u);
            shed_leaf_edge(v);
            again = true;
            break;
        }
    }

    // Stray segment with one promised and one free endpoint: only a leaf
    // edge at u can use it.
    for (bool again = true; again;) {
        again = false;
        auto used = segments_in_triangles(c);
        for (int si = 0; si < static_cast<int>(c.segments.size()); ++si) {
            if (used.count(si)) continue;
            int p = c.segments[si][0], q = c.segments[si][1];
            auto fp = fval(p), fq = fval(q);
            if (!fp || !fq) continue;
            if (fp->empty() && !fq->empty()) {
                std::swap(p, q);
                std::swap(fp, fq);
            }
            if (fp->empty() || !fq->empty()) continue;
            int u = vertex_of(*fp);
            std::string pn = fresh_node_name(c, c.node_names[p] + "'");
            c = rebuild_complex(c, {}, {si});
            std::string qn = fresh_node_name(c, c.node_names[q] + "'");
            int a = c.add_node(pn);
            int b = c.add_node(qn);
            c.add_segment(a, b);
            f[pn] = "";
            f[qn] = "";
            shed_leaf_edge(u);
            again = true;
            break;
        }
    }

    // Whole components that are a single unclaimed segment absorb exactly
    // the free-floating edges of the graph, in any combination, so both
    // kinds can be discarded together.
    {
        auto used = segments_in_triangles(c);
        std::set<int> del_segs, del_nodes;
        for (int si = 0; si < static_cast<int>(c.segments.size()); ++si) {
            if (used.count(si)) continue;
            int p = c.segments[si][0], q = c.segments[si][1];
            auto fp = fval(p), fq = fval(q);
            if (fp && !fp->empty()) continue;
            if (fq && !fq->empty()) continue;
            if (segment_count_at(c, p) != 1 || segment_count_at(c, q) != 1)
                continue;
            del_segs.insert(si);
            del_nodes.insert(p);
            del_nodes.insert(q);
        }
        if (!del_segs.empty()) {
            for (int p : del_nodes) f.erase(c.node_names[p]);
            c = rebuild_complex(c, del_nodes, del_segs);
            auto img = image_names();
            std::set<int> del_edges;
            for (int ei = 0; ei < g.num_edges(); ++ei) {
                const auto& e = g.edges[ei];
                if (img.count(g.vertex_names[e.u]) ||
                    img.count(g.vertex_names[e.v]))
                    continue;
                // a free loop needs a cycle in the host, which an
                // unclaimed segment cannot offer
                bool lone = e.u != e.v && g.degree(e.u) == 1 &&
                            g.degree(e.v) == 1;
                if (lone) del_edges.insert(ei);
            }
            g = drop_edges(g, del_edges);
        }
    }

    // Nodes that are now isolated points: a promised vertex must sit there
    // with no room for any edge; a free point can absorb one isolated
    // vertex of the graph.
    ReduceOutcome out;
    for (bool again = true; again;) {
        again = false;
        for (int p = 0; p < c.num_nodes(); ++p) {
            if (segment_count_at(c, p) != 0) continue;
            auto fp = fval(p);
            if (!fp || fp->empty()) continue;
            int u = vertex_of(*fp);
            if (g.degree(u) != 0) {
                out.decided = true;
                out.answer = Answer::NO;
                return out;
            }
            f.erase(c.node_names[p]);
            c = rebuild_complex(c, {p}, {});
            g = drop_vertices(g, {u});
            again = true;
            break;
        }
    }
    for (bool again = true; again;) {
        again = false;
        for (int p = 0; p < c.num_nodes(); ++p) {
            if (segment_count_at(c, p) != 0) continue;
            auto fp = fval(p);
            if (!fp || !fp->empty()) continue;
            f.erase(c.node_names[p]);
            c = rebuild_complex(c, {p}, {});
            auto img = image_names();
            for (int v = 0; v < g.num_vertices(); ++v) {
                if (g.degree(v) == 0 && !img.count(g.vertex_names[v])) {
                    g = drop_vertices(g, {v});
                    break;
                }
            }
            again = true;
            break;
        }
    }

    // Leftover isolated vertices fit anywhere inside a segment of the
    // input complex: embedded edges never need to cover a segment whole,
    // so interior points are always left over for them.
    if (!c0.segments.empty()) {
        auto img = image_names();
        std::set<int> del;
        for (int v = 0; v < g.num_vertices(); ++v)
            if (g.degree(v) == 0 && !img.count(g.vertex_names[v]))
                del.insert(v);
        g = drop_vertices(g, del);
    }

    out.complex = std::move(c);
    out.g = std::move(g);
    for (const auto& kv : f)
        if (!kv.second.empty() && out.complex.find_node(kv.first))
            out.pins[kv.first] = kv.second;
    return out;
}

SurfInstance make_surf_instance(const ThickenResult& t) {
    SurfInstance s;
    s.pi = t.pi;
    s.bare = t.bare;
    std::set<std::string> hv(t.h_vertices.begin(), t.h_vertices.end());
    auto comp = t.g.components();
    int nc = t.g.num_components();
    std::vector<char> anchored(nc, 0);
    for (int v = 0; v < t.g.num_vertices(); ++v)
        if (hv.count(t.g.vertex_names[v])) anchored[comp[v]] = 1;
    std::vector<char> planar_free(nc, 0);
    for (int ci = 0; ci < nc; ++ci) {
        if (anchored[ci]) continue;
        std::vector<char> in(t.g.num_vertices(), 0);
        for (int v = 0; v < t.g.num_vertices(); ++v) in[v] = comp[v] == ci;
        if (is_planar(induced_subgraph(t.g, in))) planar_free[ci] = 1;
    }
    std::vector<char> keep(t.g.num_vertices(), 0), gone(t.g.num_vertices(), 0);
    for (int v = 0; v < t.g.num_vertices(); ++v) {
        keep[v] = !planar_free[comp[v]];
        gone[v] = planar_free[comp[v]];
    }
    s.g = induced_subgraph(t.g, keep);
    s.dropped = induced_subgraph(t.g, gone);
    auto comp2 = s.g.components();
    std::set<int> seeded;
    for (int v = 0; v < s.g.num_vertices(); ++v) {
        if (hv.count(s.g.vertex_names[v])) seeded.insert(comp2[v]);
    }
    for (int v = 0; v < s.g.num_vertices(); ++v)
        if (seeded.insert(comp2[v]).second) s.seeds.push_back(v);
    return s;
}

long long num_placements(const SurfInstance& s) {
    if (s.seeds.empty()) return 1;
    long long slots = static_cast<long long>(s.pi.faces.size() +
                                             s.bare.size());
    if (slots == 0) return 0;
    long long genus = 0;
    for (const auto& mc : surface_components(s.pi))
        genus += mc.cls.euler_genus;
    for (const auto& b : s.bare) genus += b.euler_genus;
    if (static_cast<long long>(s.seeds.size()) > genus) return 0;
    return sat_pow(slots, static_cast<int>(s.seeds.size()));
}

ConInstance placement_at(const SurfInstance& s, long long index) {
    ConInstance ci{s.g, s.pi};
    long long nf = static_cast<long long>(s.pi.faces.size());
    long long slots = nf + static_cast<long long>(s.bare.size());
    std::vector<int> opened(s.bare.size(), -1);
    long long rest = index;
    for (int seed : s.seeds) {
        int digit = static_cast<int>(rest % slots);
        rest /= slots;
        int face;
        if (digit < nf) {
            face = digit;
        } else {
            int bi = digit - static_cast<int>(nf);
            if (opened[bi] < 0) {
                ci.pi.faces.push_back(FaceRec{s.bare[bi].euler_genus,
                                              s.bare[bi].orientable,
                                              {},
                                              {}});
                opened[bi] = static_cast<int>(ci.pi.faces.size()) - 1;
            }
            face = opened[bi];
        }
        ci.pi = add_float_vertex(ci.pi, face, s.g.vertex_names[seed]);
    }
    return ci;
}

namespace {

/// Durable handle on a face corner: the two darts flanking the gap in the
/// rotation at the vertex.  Surviving splices elsewhere leave it intact;
/// a splice into the gap itself is healed by falling back to the corner
/// still flanked by one of the remembered darts.
struct CornerRef {
    bool is_float = false;
    int face = -1;
    int vertex = -1;  // id in the map's graph
    int before = -1, after = -1;
};

State state_at(const CombMap& m, const Occurrence& o) {
    return m.faces[o.face].walls[o.wall].states[o.index];
}

CornerRef corner_of(const CombMap& m, const Occurrence& o) {
    CornerRef c;
    c.face = o.face;
    State s = state_at(m, o);
    int v = m.tail(s.dart);
    c.vertex = v;
    const auto& r = m.rot[v];
    int n = static_cast<int>(r.size());
    int k = 0;
    while (k < n && r[k] != s.dart) ++k;
    if (k == n) throw std::logic_error("corner_of: dart not at its vertex");
    if (s.sign > 0) {
        c.after = s.dart;
        c.before = r[(k + n - 1) % n];
    } else {
        c.before = s.dart;
        c.after = r[(k + 1) % n];
    }
    return c;
}

Occurrence resolve_corner(const CombMap& m, const CornerRef& c) {
    auto occ = occurrences_in_face(m, c.face);
    std::vector<CornerRef> at;
    at.reserve(occ.size());
    for (const auto& o : occ) at.push_back(corner_of(m, o));
    for (size_t i = 0; i < occ.size(); ++i)
        if (at[i].vertex == c.vertex && at[i].before == c.before &&
            at[i].after == c.after)
            return occ[i];
    for (size_t i = 0; i < occ.size(); ++i)
        if (at[i].vertex == c.vertex && at[i].after == c.after) return occ[i];
    for (size_t i = 0; i < occ.size(); ++i)
        if (at[i].vertex == c.vertex && at[i].before == c.before)
            return occ[i];
    throw std::logic_error("resolve_corner: corner left the face");
}

Occurrence first_occ_in_face(const CombMap& m, int face, int v) {
    for (const auto& o : occurrences_in_face(m, face))
        if (m.tail(state_at(m, o).dart) == v) return o;
    throw std::logic_error("first_occ_in_face: vertex not on the boundary");
}

std::vector<int> path_from_root(const SpanningForest& forest, int x) {
    std::vector<int> p;
    for (int v = x; v >= 0; v = forest.parent_vertex[v]) p.push_back(v);
    std::reverse(p.begin(), p.end());
    return p;
}

struct ArrivalPoint {
    bool is_float = false;
    int vertex = -1;  // map graph id, for floats
    Occurrence occ;
};

}  // namespace

std::vector<ConInstance> cellularize_step(const ConInstance& inst) {
    const CombMap& pi = inst.pi;
    int fi = -1;
    for (int i = 0; i < static_cast<int>(pi.faces.size()) && fi < 0; ++i)
        if (pi.faces[i].cellularity_defect() > 0) fi = i;
    if (fi < 0) return {};
    const FaceRec& face = pi.faces[fi];
    int base_defect = total_defect(pi);

    std::set<std::string> drawn_edges;
    for (const auto& e : pi.g.edges) drawn_edges.insert(e.name);
    MultiGraph rem;
    rem.vertex_names = inst.g.vertex_names;
    for (const auto& e : inst.g.edges)
        if (!drawn_edges.count(e.name)) rem.edges.push_back(e);
    std::vector<int> roots;
    for (int v = 0; v < inst.g.num_vertices(); ++v)
        if (pi.g.find_vertex(inst.g.vertex_names[v])) roots.push_back(v);
    auto forest = rooted_spanning_forest(rem, roots);
    std::vector<std::string> tree_edge_name(inst.g.num_vertices());
    for (int v = 0; v < inst.g.num_vertices(); ++v)
        if (forest.parent_edge[v] >= 0)
            tree_edge_name[v] = rem.edges[forest.parent_edge[v]].name;

    // Corner candidates of every embedded vertex on the witness face,
    // labelled with the boundary piece (wall or float) they lie on.
    struct Cand {
        CornerRef corner;
        int piece = -1;
    };
    std::map<int, std::vector<Cand>> cand;  // key: inst.g id of a root
    for (int r : roots) {
        int pid = *pi.g.find_vertex(inst.g.vertex_names[r]);
        std::vector<Cand> list;
        for (const auto& o : occurrences_in_face(pi, fi))
            if (pi.tail(state_at(pi, o).dart) == pid)
                list.push_back({corner_of(pi, o), o.wall});
        for (int i = 0; i < static_cast<int>(face.floats.size()); ++i)
            if (face.floats[i] == pid) {
                CornerRef c;
                c.is_float = true;
                c.face = fi;
                c.vertex = pid;
                list.push_back(
                    {c, static_cast<int>(face.walls.size()) + i});
            }
        if (!list.empty()) cand[r] = std::move(list);
    }

    auto draw_chain = [&](CombMap& cur, const std::vector<int>& path,
                          const CornerRef& c0) {
        for (size_t i = 1; i < path.size(); ++i) {
            const std::string& bn = inst.g.vertex_names[path[i]];
            if (cur.g.find_vertex(bn)) continue;  // shared stretch
            const std::string& an = inst.g.vertex_names[path[i - 1]];
            int aid = *cur.g.find_vertex(an);
            const std::string& en = tree_edge_name[path[i]];
            if (float_face_of(cur, aid) == std::optional<int>(fi)) {
                cur = pendant_at_float(cur, fi, aid, bn, en);
            } else {
                Occurrence at = (i == 1 && !c0.is_float)
                                    ? resolve_corner(cur, c0)
                                    : first_occ_in_face(cur, fi, aid);
                cur = add_pendant(cur, at, bn, en);
            }
        }
    };
    auto arrival = [&](CombMap& cur, int x, const std::vector<int>& path,
                       const CornerRef& c0) {
        ArrivalPoint a;
        int xid = *cur.g.find_vertex(inst.g.vertex_names[x]);
        if (path.size() == 1) {
            if (float_face_of(cur, xid) == std::optional<int>(fi)) {
                a.is_float = true;
                a.vertex = xid;
                return a;
            }
            a.occ = c0.is_float ? first_occ_in_face(cur, fi, xid)
                                : resolve_corner(cur, c0);
            return a;
        }
        auto occ = occurrences_of_vertex(cur, xid);
        for (const auto& o : occ)
            if (o.face == fi) {
                a.occ = o;
                return a;
            }
        throw std::logic_error("cellularize_step: drawn tip left the face");
    };

    std::vector<ConInstance> out;
    auto realize = [&](int u, int v, const CornerRef& cu,
                       const CornerRef& cv) {
        CombMap cur = pi;
        auto pu = path_from_root(forest, u);
        auto pv = path_from_root(forest, v);
        draw_chain(cur, pu, cu);
        if (v != u) draw_chain(cur, pv, cv);
        ArrivalPoint au = arrival(cur, u, pu, cu);
        ArrivalPoint av = (u == v && pu.size() > 1)
                              ? au
                              : arrival(cur, v, pv, cv);
        std::string en = fresh_edge_name(
            inst.g, inst.g.vertex_names[u] + ":" + inst.g.vertex_names[v]);
        auto emit = [&](CombMap m2) {
            if (total_defect(m2) != base_defect - 1)
                throw std::logic_error(
                    "cellularize_step: defect did not drop by one");
            MultiGraph g2 = inst.g;
            g2.add_edge(u, v, en);
            out.push_back({std::move(g2), std::move(m2)});
        };
        if (au.is_float && av.is_float) {
            if (u == v) {
                for (const auto& [lam, fc] :
                     float_loop_options(cur, fi, au.vertex))
                    if (auto m2 =
                            loop_at_float(cur, fi, au.vertex, lam, fc, en))
                        emit(std::move(*m2));
            } else {
                emit(connect_floats(cur, fi, au.vertex, av.vertex, en));
            }
        } else if (au.is_float) {
            emit(connect_float(cur, av.occ, au.vertex, en));
        } else if (av.is_float) {
            emit(connect_float(cur, au.occ, av.vertex, en));
        } else {
            for (const auto& [lam, fc] : chord_options(cur, au.occ, av.occ))
                if (auto m2 = insert_chord(cur, au.occ, av.occ, lam, fc, en))
                    emit(std::move(*m2));
        }
    };

    // Paths from two vertices to a shared root, compared beyond the root.
    auto paths_meet = [&](int u, int v) {
        auto pu = path_from_root(forest, u);
        auto pv = path_from_root(forest, v);
        std::set<int> su(pu.begin() + 1, pu.end());
        for (size_t i = 1; i < pv.size(); ++i)
            if (su.count(pv[i])) return true;
        return false;
    };

    int n = inst.g.num_vertices();
    if (face.num_boundaries() >= 2) {
        // The new edge must join two different boundary pieces of the face.
        for (int u = 0; u < n; ++u) {
            if (forest.root_of[u] < 0) continue;
            auto iu = cand.find(forest.root_of[u]);
            if (iu == cand.end()) continue;
            for (int v = u; v < n; ++v) {
                if (forest.root_of[v] < 0) continue;
                auto iv = cand.find(forest.root_of[v]);
                if (iv == cand.end()) continue;
                if (u == v) {
                    // A loop joining two pieces needs both ends at an
                    // already-embedded vertex occurring on both.
                    if (forest.root_of[u] != u) continue;
                    const auto& cs = iu->second;
                    for (size_t i = 0; i < cs.size(); ++i)
                        for (size_t j = i + 1; j < cs.size(); ++j)
                            if (cs[i].piece != cs[j].piece)
                                realize(u, u, cs[i].corner, cs[j].corner);
                    continue;
                }
                if (forest.root_of[u] == forest.root_of[v] && paths_meet(u, v))
                    continue;
                for (const auto& a : iu->second)
                    for (const auto& b : iv->second)
                        if (a.piece != b.piece)
                            realize(u, v, a.corner, b.corner);
            }
        }
    } else if (face.euler_genus > 0) {
        // Single boundary piece: the new edge must cut into the genus.
        for (int u = 0; u < n; ++u) {
            if (forest.root_of[u] < 0) continue;
            auto iu = cand.find(forest.root_of[u]);
            if (iu == cand.end()) continue;
            for (int v = u; v < n; ++v) {
                if (forest.root_of[v] < 0) continue;
                auto iv = cand.find(forest.root_of[v]);
                if (iv == cand.end()) continue;
                if (u == v) {
                    if (forest.root_of[u] == u) {
                        const auto& cs = iu->second;
                        for (size_t i = 0; i < cs.size(); ++i)
                            for (size_t j = i; j < cs.size(); ++j)
                                realize(u, u, cs[i].corner, cs[j].corner);
                    } else {
                        for (const auto& a : iu->second)
                            realize(u, u, a.corner, a.corner);
                    }
                    continue;
                }
                if (forest.root_of[u] == forest.root_of[v] &&
                    paths_meet(u, v)) {
                    // The two tails share their first stretch; the second
                    // one branches off inside the face, so only the shared
                    // anchor is a free choice.
                    for (const auto& a : iu->second)
                        realize(u, v, a.corner, a.corner);
                    continue;
                }
                for (const auto& a : iu->second)
                    for (const auto& b : iv->second)
                        realize(u, v, a.corner, b.corner);
            }
        }
    }
    return out;
}

namespace {

/// Vertex permutations of g preserving the adjacency multiset, capped so
/// heavily symmetric inputs don't dominate the run time.  Used purely to
/// generate candidate renamings for duplicate detection.
std::vector<std::vector<int>> vertex_autos(const MultiGraph& g, size_t cap) {
    int n = g.num_vertices();
    std::map<std::pair<int, int>, int> mult;
    std::vector<int> loops(n, 0), deg(n, 0);
    for (const auto& e : g.edges) {
        if (e.u == e.v) {
            ++loops[e.u];
            deg[e.u] += 2;
            continue;
        }
        ++mult[{std::min(e.u, e.v), std::max(e.u, e.v)}];
        ++deg[e.u];
        ++deg[e.v];
    }
    auto m_of = [&](int a, int b) {
        auto it = mult.find({std::min(a, b), std::max(a, b)});
        return it == mult.end() ? 0 : it->second;
    };
    std::vector<std::vector<int>> out;
    std::vector<int> perm(n, -1);
    std::vector<char> used(n, 0);
    std::function<void(int)> go = [&](int i) {
        if (out.size() >= cap) return;
        if (i == n) {
            out.push_back(perm);
            return;
        }
        for (int c = 0; c < n; ++c) {
            if (used[c] || deg[c] != deg[i] || loops[c] != loops[i]) continue;
            bool ok = true;
            for (int j = 0; j < i && ok; ++j)
                if (m_of(i, j) != m_of(c, perm[j])) ok = false;
            if (!ok) continue;
            perm[i] = c;
            used[c] = 1;
            go(i + 1);
            used[c] = 0;
            perm[i] = -1;
        }
    };
    go(0);
    return out;
}

/// Edge renaming induced by a vertex permutation of g: parallel bundles
/// map onto parallel bundles positionally in sorted-name order.  Returns
/// edge id -> edge id.
std::vector<int> edge_perm(const MultiGraph& g, const std::vector<int>& vp) {
    std::map<std::pair<int, int>, std::vector<int>> bundle;
    for (int e = 0; e < g.num_edges(); ++e) {
        const auto& ed = g.edges[e];
        bundle[{std::min(ed.u, ed.v), std::max(ed.u, ed.v)}].push_back(e);
    }
    for (auto& [k, ids] : bundle)
        std::sort(ids.begin(), ids.end(), [&](int a, int b) {
            return g.edges[a].name < g.edges[b].name;
        });
    std::vector<int> out(g.num_edges(), -1);
    for (const auto& [k, ids] : bundle) {
        const auto& img = bundle.at(
            {std::min(vp[k.first], vp[k.second]),
             std::max(vp[k.first], vp[k.second])});
        for (size_t i = 0; i < ids.size(); ++i) out[ids[i]] = img[i];
    }
    return out;
}

/// Iterated degree refinement of g seeded with per-vertex roles.  The
/// returned color of a vertex depends only on the isomorphism type of
/// (g, role), so equal-colored vertices of two isomorphic inputs
/// correspond under some isomorphism-respecting relabeling.
std::vector<int> wl_colors(const MultiGraph& g, const std::vector<int>& role) {
    int n = g.num_vertices();
    std::vector<std::vector<int>> adj(n);
    for (const auto& e : g.edges) {
        adj[e.u].push_back(e.v);
        adj[e.v].push_back(e.u);
    }
    std::vector<long long> col(role.begin(), role.end());
    for (int round = 0; round < n; ++round) {
        std::vector<std::vector<long long>> sig(n);
        for (int v = 0; v < n; ++v) {
            sig[v].push_back(col[v]);
            std::vector<long long> ns;
            for (int u : adj[v]) ns.push_back(col[u]);
            std::sort(ns.begin(), ns.end());
            sig[v].insert(sig[v].end(), ns.begin(), ns.end());
        }
        auto uniq = sig;
        std::sort(uniq.begin(), uniq.end());
        uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
        bool changed = false;
        for (int v = 0; v < n; ++v) {
            long long r = std::lower_bound(uniq.begin(), uniq.end(), sig[v]) -
                          uniq.begin();
            if (r != col[v]) changed = true;
            col[v] = r;
        }
        if (!changed) break;
    }
    return std::vector<int>(col.begin(), col.end());
}

/// All bijections onto canonical positions 0..n-1 that keep each color
/// class together, capped.  Unlike vertex_autos these need not preserve
/// adjacency; they only generate candidate codes, and minimizing a full
/// structural key over them yields the same canonical value for any two
/// isomorphic inputs (an isomorphism preserves the colors, so the two
/// families of relabelings coincide up to composition with it).
std::vector<std::vector<int>> code_perms(const std::vector<int>& col,
                                         size_t cap) {
    int n = static_cast<int>(col.size());
    std::map<int, std::vector<int>> cls;
    for (int v = 0; v < n; ++v) cls[col[v]].push_back(v);
    std::vector<std::vector<int>> blocks;
    for (auto& [c, ids] : cls) blocks.push_back(ids);
    std::vector<std::vector<int>> out;
    std::vector<int> vp(n, -1);
    std::function<void(size_t, int)> go = [&](size_t bi, int off) {
        if (out.size() >= cap) return;
        if (bi == blocks.size()) {
            out.push_back(vp);
            return;
        }
        auto ids = blocks[bi];
        std::sort(ids.begin(), ids.end());
        do {
            for (size_t i = 0; i < ids.size(); ++i)
                vp[ids[i]] = off + static_cast<int>(i);
            go(bi + 1, off + static_cast<int>(ids.size()));
            if (out.size() >= cap) return;
        } while (std::next_permutation(ids.begin(), ids.end()));
    };
    go(0, 0);
    return out;
}

/// One comparable unit of an instance key.
using Tok = std::pair<long long, long long>;

/// Token serialization of a map with the given vertex and edge codes.
/// With injective codes the tokens determine the map up to relabeling, so
/// equal keys mean the instances decide identically.
std::vector<Tok> map_key(const CombMap& m, const std::vector<long long>& vc,
                         const std::vector<long long>& ec) {
    int nv = m.g.num_vertices();
    auto dart_tok = [&](int d, int sgn) -> Tok {
        int e = d / 2;
        return {ec[e], vc[m.tail(d)] * 16 + (d & 1) * 8 +
                           (m.sign[e] < 0 ? 4 : 0) + (sgn < 0 ? 1 : 0)};
    };
    auto min_rotation = [](std::vector<Tok> seq) {
        if (seq.empty()) return seq;
        std::vector<Tok> best = seq;
        size_t L = seq.size();
        for (size_t r = 1; r < L; ++r) {
            std::rotate(seq.begin(), seq.begin() + 1, seq.end());
            if (seq < best) best = seq;
        }
        return best;
    };
    std::vector<Tok> key;
    // Rotation system, vertices in a name-independent order.
    std::vector<std::vector<Tok>> vparts;
    for (int v = 0; v < nv; ++v) {
        std::vector<Tok> seq;
        for (int d : m.rot[v]) seq.push_back(dart_tok(d, +1));
        auto cyc = min_rotation(std::move(seq));
        std::vector<Tok> part{{-10, vc[v]}};
        part.insert(part.end(), cyc.begin(), cyc.end());
        vparts.push_back(std::move(part));
    }
    std::sort(vparts.begin(), vparts.end());
    for (auto& p : vparts) key.insert(key.end(), p.begin(), p.end());
    // Faces: genus and orientation, walls canonicalized over rotation and
    // mirror in token space, floats by vertex code.
    std::vector<std::vector<Tok>> fparts;
    for (const auto& f : m.faces) {
        std::vector<Tok> part{
            {-20, f.euler_genus * 2 + (f.orientable ? 1 : 0)}};
        std::vector<std::vector<Tok>> wparts;
        for (const auto& w : f.walls) {
            std::vector<Tok> fwdseq, revseq;
            for (const auto& st : w.states)
                fwdseq.push_back(dart_tok(st.dart, st.sign));
            for (auto it = w.states.rbegin(); it != w.states.rend(); ++it) {
                State ms = m.mirror(*it);
                revseq.push_back(dart_tok(ms.dart, ms.sign));
            }
            auto a = min_rotation(std::move(fwdseq));
            auto b = min_rotation(std::move(revseq));
            bool use_rev = b < a;
            std::vector<Tok> wp{{-21, (use_rev ? !w.fwd : w.fwd) ? 1 : 0}};
            const auto& seq = use_rev ? b : a;
            wp.insert(wp.end(), seq.begin(), seq.end());
            wparts.push_back(std::move(wp));
        }
        std::sort(wparts.begin(), wparts.end());
        for (auto& wp : wparts) part.insert(part.end(), wp.begin(), wp.end());
        std::vector<long long> fl;
        for (int x : f.floats) fl.push_back(vc[x]);
        std::sort(fl.begin(), fl.end());
        for (long long x : fl) part.push_back({-22, x});
        fparts.push_back(std::move(part));
    }
    std::sort(fparts.begin(), fparts.end());
    for (auto& p : fparts) key.insert(key.end(), p.begin(), p.end());
    return key;
}

/// Structural key of a branch's map under one renaming of the base graph.
/// Surgery edges absent from the base graph are identified by their
/// renamed endpoints instead of their made-up names.
std::vector<Tok> instance_key(const CombMap& m, const std::vector<int>& bv,
                              const std::vector<int>& be,
                              const std::vector<int>& vp,
                              const std::vector<int>& ep) {
    int nv = m.g.num_vertices(), ne = m.g.num_edges();
    // Vertex code: renamed base id.
    std::vector<long long> vc(nv);
    for (int v = 0; v < nv; ++v) vc[v] = vp[bv[v]];
    // Edge code: renamed base id, or a composite of renamed endpoints and
    // a positional index for edges added by surgery.
    std::vector<long long> ec(ne);
    std::map<std::pair<long long, long long>, std::vector<int>> added;
    for (int e = 0; e < ne; ++e) {
        if (be[e] >= 0) {
            ec[e] = ep[be[e]];
            continue;
        }
        long long a = vc[m.g.edges[e].u], b = vc[m.g.edges[e].v];
        if (b < a) std::swap(a, b);
        added[{a, b}].push_back(e);
    }
    for (auto& [pr, ids] : added) {
        std::sort(ids.begin(), ids.end(), [&](int a, int b) {
            return m.g.edges[a].name < m.g.edges[b].name;
        });
        for (size_t i = 0; i < ids.size(); ++i)
            ec[ids[i]] = 1000000000LL +
                         (pr.first * 100000 + pr.second) * 64 +
                         static_cast<long long>(i);
    }
    return map_key(m, vc, ec);
}

}  // namespace

Answer solve_placed(const ConInstance& inst, BudgetMeter& budget,
                    CombMap* final_map, SolveCache* cache) {
    // Every component must live on a single surface component, and that
    // component must have enough genus for it.
    auto comp = inst.g.components();
    int nc = inst.g.num_components();
    auto scomp = surface_components(inst.pi);
    std::vector<int> sc_of(inst.pi.g.num_vertices(), -1);
    for (int i = 0; i < static_cast<int>(scomp.size()); ++i)
        for (int v : scomp[i].vertices) sc_of[v] = i;
    for (int ci = 0; ci < nc; ++ci) {
        std::set<int> lands;
        for (int v = 0; v < inst.g.num_vertices(); ++v) {
            if (comp[v] != ci) continue;
            if (auto pid = inst.pi.g.find_vertex(inst.g.vertex_names[v]))
                lands.insert(sc_of[*pid]);
        }
        if (lands.size() > 1) return Answer::NO;
        if (lands.empty())
            throw std::logic_error("solve_placed: component never placed");
        std::vector<char> in(inst.g.num_vertices(), 0);
        for (int v = 0; v < inst.g.num_vertices(); ++v) in[v] = comp[v] == ci;
        if (euler_genus_lower_bound(induced_subgraph(inst.g, in)) >
            scomp[*lands.begin()].cls.euler_genus)
            return Answer::NO;
    }

    // Branches that are relabelings of one another (by a symmetry of the
    // graph, or by the arbitrary naming of surgery edges) decide
    // identically; key each instance canonically and skip repeats.
    auto autos = vertex_autos(inst.g, 2000);
    std::vector<std::vector<int>> eperms;
    eperms.reserve(autos.size());
    for (const auto& vp : autos) eperms.push_back(edge_perm(inst.g, vp));
    std::set<std::vector<Tok>> seen;

    // Whole-instance key for the cross-placement cache: the map key plus
    // the graph's structure, so instances over different reduced graphs
    // never collide.  Minimized over every relabeling that respects the
    // refinement colors, so isomorphic instances arriving under different
    // vertex names (different guesses, mirrored placements) get the same
    // key -- automorphisms of one labeling alone would not close that gap.
    std::vector<Tok> cache_key;
    if (cache) {
        const CombMap& m = inst.pi;
        int nmv = m.g.num_vertices(), nme = m.g.num_edges();
        std::vector<int> bv(nmv);
        for (int v = 0; v < nmv; ++v)
            bv[v] = *inst.g.find_vertex(m.g.vertex_names[v]);
        // Seed colors by how the map touches a vertex; finer seeds split
        // the color classes and shrink the relabeling family.
        std::vector<int> role(inst.g.num_vertices(), 0);
        for (int v = 0; v < nmv; ++v) {
            int r = 1;
            if (auto fi = float_face_of(m, v)) {
                const auto& f = m.faces[*fi];
                r = 10 + f.euler_genus * 2 + (f.orientable ? 1 : 0);
            }
            role[bv[v]] = r;
        }
        auto perms = code_perms(wl_colors(inst.g, role), 50000);
        // Map edges get structural codes: endpoints in inst.g plus a
        // positional index within their parallel bundle, so the codes
        // carry over between isomorphic instances.
        std::map<std::tuple<int, int, int>, std::vector<int>> bundle;
        for (int e = 0; e < nme; ++e) {
            int ru = bv[m.g.edges[e].u], rv = bv[m.g.edges[e].v];
            int base = inst.g.find_edge(m.g.edges[e].name) ? 1 : 0;
            bundle[{std::min(ru, rv), std::max(ru, rv), base}].push_back(e);
        }
        struct EInfo { int ru, rv, base, idx; };
        std::vector<EInfo> einfo(nme);
        for (auto& [bk, ids] : bundle) {
            std::sort(ids.begin(), ids.end(), [&](int a, int b) {
                return m.g.edges[a].name < m.g.edges[b].name;
            });
            for (size_t i = 0; i < ids.size(); ++i)
                einfo[ids[i]] = {std::get<0>(bk), std::get<1>(bk),
                                 std::get<2>(bk), static_cast<int>(i)};
        }
        for (const auto& p : perms) {
            std::vector<long long> vc(nmv);
            for (int v = 0; v < nmv; ++v) vc[v] = p[bv[v]];
            std::vector<long long> ec(nme);
            for (int e = 0; e < nme; ++e) {
                long long a = p[einfo[e].ru], b = p[einfo[e].rv];
                if (b < a) std::swap(a, b);
                ec[e] = 2000000000LL +
                        ((a * 100000 + b) * 2 + einfo[e].base) * 64 +
                        einfo[e].idx;
            }
            auto k = map_key(m, vc, ec);
            k.push_back({-30, inst.g.num_vertices()});
            std::vector<Tok> gt;
            for (const auto& e : inst.g.edges) {
                long long a = p[e.u], b = p[e.v];
                if (b < a) std::swap(a, b);
                gt.push_back({-31, a * 200000 + b});
            }
            std::sort(gt.begin(), gt.end());
            k.insert(k.end(), gt.begin(), gt.end());
            if (cache_key.empty() || k < cache_key) cache_key = std::move(k);
        }
        if (cache->no.count(cache_key)) return Answer::NO;
    }

    std::function<Answer(const ConInstance&)> rec =
        [&](const ConInstance& cur) -> Answer {
        budget.tick();
        {
            const CombMap& m = cur.pi;
            std::vector<int> bv(m.g.num_vertices()), bem(m.g.num_edges());
            for (int v = 0; v < m.g.num_vertices(); ++v)
                bv[v] = *inst.g.find_vertex(m.g.vertex_names[v]);
            for (int e = 0; e < m.g.num_edges(); ++e) {
                auto id = inst.g.find_edge(m.g.edges[e].name);
                bem[e] = id ? *id : -1;
            }
            std::vector<Tok> best;
            for (size_t i = 0; i < autos.size(); ++i) {
                auto k = instance_key(m, bv, bem, autos[i], eperms[i]);
                if (best.empty() || k < best) best = std::move(k);
            }
            if (!seen.insert(std::move(best)).second) return Answer::NO;
        }
        if (total_defect(cur.pi) == 0)
            return solve_cellular(cur, budget, final_map);
        for (const auto& child : cellularize_step(cur))
            if (rec(child) == Answer::YES) return Answer::YES;
        return Answer::NO;
    };
    Answer a = rec(inst);
    if (cache && a == Answer::NO) cache->no.insert(std::move(cache_key));
    return a;
}

PipelineRun run_pipeline(const MultiGraph& g, const SimplicialComplex2& c,
                         const BudgetLimits& limits) {
    g.validate();
    c.validate();
    {
        std::set<std::string> vn(g.vertex_names.begin(), g.vertex_names.end());
        if (static_cast<int>(vn.size()) != g.num_vertices())
            throw std::runtime_error("run_pipeline: duplicate vertex name");
        std::set<std::string> en;
        for (const auto& e : g.edges)
            if (!en.insert(e.name).second)
                throw std::runtime_error("run_pipeline: duplicate edge name");
    }

    PipelineRun run;
    BudgetMeter meter{limits.steps, limits.seconds};
    SolveCache cache;

    if (auto bw = find_3book_segment(c)) {
        // Three sheets along one segment swallow any graph whatsoever.
        run.answer = Answer::YES;
        run.three_book = true;
        run.book_witness =
            c.node_names[(*bw)[0]] + " " + c.node_names[(*bw)[1]];
        return run;
    }

    GuessStream gs = respecting_maps(g, c);
    try {
        for (long long gi = 0; gi < gs.total(); ++gi) {
            meter.tick();
            std::map<std::string, std::string> assign;
            if (!gs.assignment_at(gi, &assign)) continue;
            auto ro = reduce_to_pure(c, gs.prepared, assign);
            if (ro.decided) continue;  // only forced negatives occur
            if (ro.complex.triangles.empty()) {
                // Nothing two-dimensional survived; with no surface there
                // is no room for anything left of the graph.
                if (ro.g.num_vertices() == 0) {
                    run.answer = Answer::YES;
                    run.guess_index = gi;
                    run.placement_index = 0;
                    run.assignment = assign;
                    run.steps_used = meter.used;
                    return run;
                }
                continue;
            }
            auto t = thicken_and_cap(ro.complex, ro.pins, ro.g);
            auto s = make_surf_instance(t);
            long long np = num_placements(s);
            for (long long pj = 0; pj < np; ++pj) {
                meter.tick();
                auto ci = placement_at(s, pj);
                CombMap fm;
                if (solve_placed(ci, meter, &fm, &cache) == Answer::YES) {
                    run.answer = Answer::YES;
                    run.guess_index = gi;
                    run.placement_index = pj;
                    run.assignment = assign;
                    run.branch = s;
                    run.final_map = std::move(fm);
                    run.steps_used = meter.used;
                    return run;
                }
            }
        }
        run.answer = Answer::NO;
    } catch (const BudgetExceeded&) {
        run.answer = Answer::BUDGET_EXCEEDED;
    }
    run.steps_used = meter.used;
    return run;
}

}  // namespace cemb
