#include <functional>
#include <set>
#include <stdexcept>
#include <string>

#include "cemb/pipeline.hpp"

namespace cemb {

namespace {

/// Draws a loop at a vertex sitting alone on a sphere component, cutting
/// the component into two disks.  The only faces with floating vertices
/// at the all-disks stage have this exact shape.
CombMap split_float_loop(const CombMap& m, int face, int fv,
                         const std::string& edge_name) {
    const FaceRec& f = m.faces[face];
    if (f.euler_genus != 0 || !f.walls.empty() || f.floats.size() != 1 ||
        f.floats[0] != fv)
        throw std::logic_error("split_float_loop: not a lone sphere vertex");
    CombMap m2 = m;
    m2.faces[face].floats.clear();
    int e = m2.g.add_edge(fv, fv, edge_name);
    m2.sign.push_back(+1);
    m2.rot[fv] = {2 * e, 2 * e + 1};
    for (int side = 0; side < 2; ++side) {
        bool flipped = false;
        auto walk = canonical_walk(m2, {State{2 * e + side, +1}}, &flipped);
        Wall w{std::move(walk), !flipped};
        if (side == 0)
            m2.faces[face].walls.push_back(std::move(w));
        else
            m2.faces.push_back(FaceRec{0, true, {std::move(w)}, {}});
    }
    return m2;
}

}  // namespace

Answer solve_cellular(const ConInstance& inst, BudgetMeter& budget,
                      CombMap* final_map) {
    std::function<Answer(const CombMap&)> rec =
        [&](const CombMap& cur) -> Answer {
        budget.tick();
        std::set<std::string> drawn;
        for (const auto& e : cur.g.edges) drawn.insert(e.name);
        auto vid = [&](int x) {
            return cur.g.find_vertex(inst.g.vertex_names[x]);
        };
        std::map<int, std::vector<Occurrence>> occ_cache;
        auto occs = [&](int x) -> const std::vector<Occurrence>& {
            auto it = occ_cache.find(x);
            if (it == occ_cache.end())
                it = occ_cache.emplace(x, occurrences_of_vertex(cur, x)).first;
            return it->second;
        };

        // Bridge screening: a connected chunk of the undrawn graph hangs
        // inside a single disk face, so (a) its attachment vertices must
        // share a face, and (b) the chunk plus one apex joined to every
        // attachment must be planar (collapse the disk boundary to a
        // point).  Both fail long before edge-by-edge search would.
        int n = inst.g.num_vertices();
        std::vector<int> uf(n);
        for (int i = 0; i < n; ++i) uf[i] = i;
        std::function<int(int)> find = [&](int x) {
            return uf[x] == x ? x : uf[x] = find(uf[x]);
        };
        std::vector<char> placed(n, 0);
        for (int x = 0; x < n; ++x) placed[x] = vid(x).has_value();
        for (const auto& e : inst.g.edges) {
            if (drawn.count(e.name)) continue;
            if (!placed[e.u] && !placed[e.v]) uf[find(e.u)] = find(e.v);
        }
        struct Bridge {
            std::vector<int> edges;       // undrawn edge ids
            std::set<int> attachments;    // embedded endpoints, inst ids
        };
        std::map<int, Bridge> bridges;
        for (int ei = 0; ei < inst.g.num_edges(); ++ei) {
            const auto& e = inst.g.edges[ei];
            if (drawn.count(e.name)) continue;
            if (placed[e.u] && placed[e.v]) continue;  // handled below
            int root = find(placed[e.u] ? e.v : e.u);
            auto& b = bridges[root];
            b.edges.push_back(ei);
            if (placed[e.u]) b.attachments.insert(e.u);
            if (placed[e.v]) b.attachments.insert(e.v);
        }
        // Faces a bridge can still land in: the intersection of its
        // attachments' face sets.  Roots without attachments stay
        // unconstrained (the caller guarantees they never occur at the
        // top, and recursion only shrinks bridges).
        std::map<int, std::set<int>> allowed_faces;
        for (const auto& [root, b] : bridges) {
            if (!b.attachments.empty()) {
                std::set<int> shared;
                bool first = true;
                for (int a : b.attachments) {
                    std::set<int> fs;
                    int aid = *vid(a);
                    if (auto ff = float_face_of(cur, aid)) {
                        fs.insert(*ff);
                    } else {
                        for (const auto& o : occs(aid)) fs.insert(o.face);
                    }
                    if (first) {
                        shared = std::move(fs);
                        first = false;
                    } else {
                        std::set<int> keep;
                        for (int f : fs)
                            if (shared.count(f)) keep.insert(f);
                        shared = std::move(keep);
                    }
                    if (shared.empty()) return Answer::NO;
                }
                allowed_faces.emplace(root, std::move(shared));
            }
            MultiGraph probe;
            int apex = probe.add_vertex("*");
            std::map<int, int> pid;
            auto node = [&](int x) {
                auto it = pid.find(x);
                if (it == pid.end())
                    it = pid.emplace(x,
                                     probe.add_vertex(inst.g.vertex_names[x]))
                             .first;
                return it->second;
            };
            for (int ei : b.edges) {
                const auto& e = inst.g.edges[ei];
                int pu = placed[e.u] ? apex : node(e.u);
                int pv = placed[e.v] ? apex : node(e.v);
                probe.add_edge(pu, pv, inst.g.edges[ei].name);
            }
            if (!is_planar(probe)) return Answer::NO;
        }

        // Pick the undrawn edge with the fewest ways to draw it (ties by
        // id): an edge with no way left kills the branch immediately, and
        // tight edges first keeps the tree narrow.  Edges with both ends
        // placed are preferred over half-placed ones, which only grow.
        // Along the way, remember which edges and bridges are forced into
        // a single face: those feed the interleaving screen below.
        int both = -1, one = -1;
        long long both_width = 0, one_width = 0;
        bool pending = false;
        std::map<int, std::vector<int>> forced_edges;    // face -> edge ids
        std::map<int, std::vector<int>> forced_bridges;  // face -> roots
        for (const auto& [root, fs] : allowed_faces)
            if (fs.size() == 1) forced_bridges[*fs.begin()].push_back(root);
        for (int ei = 0; ei < inst.g.num_edges(); ++ei) {
            const auto& e = inst.g.edges[ei];
            if (drawn.count(e.name)) continue;
            pending = true;
            auto iu = vid(e.u), iv = vid(e.v);
            if (iu && iv) {
                long long w = 0;
                if (float_face_of(cur, *iu) || float_face_of(cur, *iv)) {
                    // floats sit alone on their own sphere; only a loop
                    // can close onto one
                    w = (e.u == e.v) ? 1 : 0;
                } else if (e.u == e.v) {
                    const auto& ox = occs(*iu);
                    for (size_t i = 0; i < ox.size(); ++i)
                        for (size_t j = i; j < ox.size(); ++j)
                            if (ox[i].face == ox[j].face) ++w;
                } else {
                    std::set<int> cf;
                    for (const auto& a : occs(*iu))
                        for (const auto& b : occs(*iv))
                            if (a.face == b.face) {
                                ++w;
                                cf.insert(a.face);
                            }
                    if (cf.size() == 1)
                        forced_edges[*cf.begin()].push_back(ei);
                }
                if (w == 0) return Answer::NO;
                if (both < 0 || w < both_width) {
                    both = ei;
                    both_width = w;
                }
            } else if (iu || iv) {
                int x = iu ? *iu : *iv;
                long long w;
                if (float_face_of(cur, x)) {
                    w = 1;
                } else {
                    auto it = allowed_faces.find(find(iu ? e.v : e.u));
                    const std::set<int>* allow =
                        it == allowed_faces.end() ? nullptr : &it->second;
                    w = 0;
                    for (const auto& o : occs(x))
                        if (!allow || allow->count(o.face)) ++w;
                }
                if (w == 0) return Answer::NO;
                if (one < 0 || w < one_width) {
                    one = ei;
                    one_width = w;
                }
            }
        }

        // Interleaving screen: everything forced into one disk face must
        // sit there without crossings.  Model the face boundary as a cycle
        // pinned facial by an apex wheel; forced edges between uniquely
        // occurring endpoints become chords, forced bridges attach at
        // their uniquely occurring attachments.  Two interleaved chords
        // make the model non-planar, killing the branch at once.
        {
            std::set<int> hot;
            for (const auto& [f, _] : forced_edges) hot.insert(f);
            for (const auto& [f, _] : forced_bridges) hot.insert(f);
            for (int f : hot) {
                if (cur.faces[f].walls.empty()) continue;  // lone float
                auto seq = occurrences_in_face(cur, f);
                int L = static_cast<int>(seq.size());
                std::map<int, std::vector<int>> pos;  // cur vid -> slots
                for (int i = 0; i < L; ++i)
                    pos[occurrence_vertex(cur, seq[i])].push_back(i);
                auto unique_pos = [&](int instv, int* out) {
                    auto it = pos.find(*vid(instv));
                    if (it == pos.end() || it->second.size() != 1)
                        return false;
                    *out = it->second[0];
                    return true;
                };
                MultiGraph t;
                std::vector<int> cyc(L);
                for (int i = 0; i < L; ++i)
                    t.add_vertex("b" + std::to_string(i));
                for (int i = 0; i < L; ++i) cyc[i] = i;
                int apex = t.add_vertex("*");
                for (int i = 0; i < L; ++i) {
                    t.add_edge(cyc[i], cyc[(i + 1) % L],
                               "c" + std::to_string(i));
                    t.add_edge(apex, cyc[i], "a" + std::to_string(i));
                }
                int tag = 0;
                if (auto it = forced_edges.find(f); it != forced_edges.end())
                    for (int ei : it->second) {
                        const auto& e = inst.g.edges[ei];
                        int pu, pv;
                        if (unique_pos(e.u, &pu) && unique_pos(e.v, &pv))
                            t.add_edge(cyc[pu], cyc[pv],
                                       "x" + std::to_string(tag++));
                    }
                if (auto it = forced_bridges.find(f);
                    it != forced_bridges.end())
                    for (int root : it->second) {
                        std::map<int, int> bid;
                        auto node = [&](int x) {
                            auto bit = bid.find(x);
                            if (bit == bid.end())
                                bit = bid.emplace(
                                             x, t.add_vertex(
                                                    inst.g.vertex_names[x]))
                                          .first;
                            return bit->second;
                        };
                        for (int ei : bridges[root].edges) {
                            const auto& e = inst.g.edges[ei];
                            if (!placed[e.u] && !placed[e.v]) {
                                t.add_edge(node(e.u), node(e.v),
                                           "y" + std::to_string(tag++));
                                continue;
                            }
                            int a = placed[e.u] ? e.u : e.v;
                            int in = placed[e.u] ? e.v : e.u;
                            int p;
                            if (unique_pos(a, &p))
                                t.add_edge(node(in), cyc[p],
                                           "y" + std::to_string(tag++));
                        }
                    }
                if (!is_planar(t)) return Answer::NO;
            }
        }
        if (both < 0 && one < 0) {
            if (pending)
                throw std::logic_error(
                    "solve_cellular: edges out of reach of the anchor");
            for (const auto& vn : inst.g.vertex_names)
                if (!cur.g.find_vertex(vn))
                    throw std::logic_error(
                        "solve_cellular: stray vertex never placed");
            *final_map = cur;
            return Answer::YES;
        }

        if (both >= 0) {
            const auto& e = inst.g.edges[both];
            int x = *vid(e.u), y = *vid(e.v);
            auto fx = float_face_of(cur, x), fy = float_face_of(cur, y);
            if (fx || fy) {
                // A floating vertex here sits alone on its own sphere, so
                // only a loop back to itself can reach it.
                if (e.u == e.v && fx)
                    return rec(split_float_loop(cur, *fx, x, e.name));
                return Answer::NO;
            }
            auto ox = occurrences_of_vertex(cur, x);
            if (e.u == e.v) {
                for (size_t i = 0; i < ox.size(); ++i)
                    for (size_t j = i; j < ox.size(); ++j) {
                        if (ox[i].face != ox[j].face) continue;
                        if (rec(split_disk_face(cur, ox[i], ox[j], e.name)) ==
                            Answer::YES)
                            return Answer::YES;
                    }
            } else {
                auto oy = occurrences_of_vertex(cur, y);
                for (const auto& a : ox)
                    for (const auto& b : oy) {
                        if (a.face != b.face) continue;
                        if (rec(split_disk_face(cur, a, b, e.name)) ==
                            Answer::YES)
                            return Answer::YES;
                    }
            }
            return Answer::NO;
        }

        const auto& e = inst.g.edges[one];
        bool from_v = !vid(e.u).has_value();
        int x = from_v ? *vid(e.v) : *vid(e.u);
        const std::string& yn = inst.g.vertex_names[from_v ? e.u : e.v];
        if (auto ff = float_face_of(cur, x))
            return rec(pendant_at_float(cur, *ff, x, yn, e.name));
        // Only try corners in faces the edge's bridge can still land in.
        const std::set<int>* allow = nullptr;
        if (auto it = allowed_faces.find(find(from_v ? e.u : e.v));
            it != allowed_faces.end())
            allow = &it->second;
        for (const auto& o : occurrences_of_vertex(cur, x)) {
            if (allow && !allow->count(o.face)) continue;
            if (rec(add_pendant(cur, o, yn, e.name)) == Answer::YES)
                return Answer::YES;
        }
        return Answer::NO;
    };
    return rec(inst.pi);
}

}  // namespace cemb
