#include "cemb/combmap.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace cemb {

State CombMap::step(const State& x) const {
    int e = edge_of(x.dart);
    int s2 = x.sign * sign[e];
    int md = mate(x.dart);
    int v = tail(md);  // head of x.dart
    const auto& r = rot[v];
    int n = static_cast<int>(r.size());
    int idx = -1;
    for (int i = 0; i < n; ++i)
        if (r[i] == md) { idx = i; break; }
    if (idx < 0) throw std::runtime_error("combmap: dart missing from rotation");
    int nxt = r[(idx + (s2 > 0 ? 1 : n - 1)) % n];
    return {nxt, s2};
}

State CombMap::mirror(const State& x) const {
    return {mate(x.dart), -x.sign * sign[edge_of(x.dart)]};
}

namespace {

std::vector<State> orbit(const CombMap& m, const State& start) {
    std::vector<State> out{start};
    for (State cur = m.step(start); !(cur == start); cur = m.step(cur)) {
        out.push_back(cur);
        if (static_cast<int>(out.size()) > 2 * m.num_darts() + 4)
            throw std::runtime_error("combmap: non-closing trace orbit");
    }
    return out;
}

std::vector<State> mirror_orbit(const CombMap& m, const std::vector<State>& w) {
    std::vector<State> out;
    out.push_back(m.mirror(w[0]));
    for (int i = static_cast<int>(w.size()) - 1; i >= 1; --i)
        out.push_back(m.mirror(w[i]));
    return out;
}

void rotate_to_min(std::vector<State>& w) {
    auto it = std::min_element(w.begin(), w.end());
    std::rotate(w.begin(), it, w.end());
}

// Which stored wall covers each state: dir=+1 for the stored orbit itself,
// dir=-1 for its mirror.
struct Owner {
    int face = -1;
    int wall = -1;
    int index = -1;
    int dir = 0;
};

std::vector<Owner> ownership(const CombMap& m) {
    std::vector<Owner> own(2 * m.num_darts());
    for (int f = 0; f < static_cast<int>(m.faces.size()); ++f)
        for (int w = 0; w < static_cast<int>(m.faces[f].walls.size()); ++w) {
            const auto& wall = m.faces[f].walls[w];
            for (int i = 0; i < static_cast<int>(wall.states.size()); ++i) {
                const State& s = wall.states[i];
                own[s.key()] = {f, w, i, +1};
                own[m.mirror(s).key()] = {f, w, i, -1};
            }
        }
    return own;
}

// Traced walls covering exactly the given target states (which must be
// closed under the trace and mirror), one canonical wall per mirror pair.
std::vector<std::vector<State>> trace_targets(const CombMap& m,
                                              const std::vector<State>& targets) {
    std::vector<char> covered(2 * m.num_darts(), 0);
    std::vector<std::vector<State>> out;
    for (const State& t : targets) {
        if (covered[t.key()]) continue;
        auto w = orbit(m, t);
        auto mw = mirror_orbit(m, w);
        for (const State& s : w) covered[s.key()] = 1;
        for (const State& s : mw) covered[s.key()] = 1;
        State w_min = *std::min_element(w.begin(), w.end());
        State mw_min = *std::min_element(mw.begin(), mw.end());
        std::vector<State> rep = (w_min < mw_min) ? w : mw;
        rotate_to_min(rep);
        out.push_back(std::move(rep));
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a[0] < b[0]; });
    return out;
}

int wall_of_occurrence(const CombMap& m, const Occurrence& o) {
    return o.wall;
}

State state_at(const CombMap& m, const Occurrence& o) {
    return m.faces[o.face].walls[o.wall].states[o.index];
}

// Inserts `nd` into the rotation of v next to anchor dart d: before it for
// sign +1 occurrences, after it for sign -1 occurrences.
void splice(std::vector<int>& r, int anchor, int s, int nd) {
    auto it = std::find(r.begin(), r.end(), anchor);
    if (it == r.end()) throw std::runtime_error("combmap: splice anchor missing");
    if (s > 0)
        r.insert(it, nd);
    else
        r.insert(it + 1, nd);
}

// Direction of each old wall's piece(s) inside each new wall.  Key is
// (old face, old wall); value is the set of directions seen ({+1}, {-1},
// or both for a twisted reassembly).
using PieceDirs = std::map<std::pair<int, int>, std::set<int>>;

PieceDirs piece_dirs(const std::vector<State>& wall,
                     const std::vector<Owner>& own, int old_dart_limit) {
    PieceDirs out;
    for (const State& s : wall) {
        if (s.dart >= old_dart_limit) continue;  // a freshly added edge
        const Owner& o = own[s.key()];
        if (o.face < 0) continue;
        out[{o.face, o.wall}].insert(o.dir);
    }
    return out;
}

int sole_dir(const PieceDirs& p, int face, int wall) {
    auto it = p.find({face, wall});
    if (it == p.end() || it->second.size() != 1)
        throw std::runtime_error("combmap: wall piece has no single direction");
    return *it->second.begin();
}

bool valid_class(const FaceClass& c) {
    if (c.euler_genus < 0) return false;
    if (c.orientable && c.euler_genus % 2 != 0) return false;
    if (!c.orientable && c.euler_genus < 1) return false;
    return true;
}

}  // namespace

std::vector<std::vector<State>> trace_walls(const CombMap& m) {
    std::vector<State> targets;
    for (int d = 0; d < m.num_darts(); ++d) {
        targets.push_back({d, +1});
        targets.push_back({d, -1});
    }
    return trace_targets(m, targets);
}

std::vector<State> canonical_walk(const CombMap& m, std::vector<State> walk,
                                  bool* flipped) {
    auto mw = mirror_orbit(m, walk);
    State a = *std::min_element(walk.begin(), walk.end());
    State b = *std::min_element(mw.begin(), mw.end());
    bool flip = b < a;
    std::vector<State> rep = flip ? mw : walk;
    rotate_to_min(rep);
    if (flipped) *flipped = flip;
    return rep;
}

CombMap cellular_map(const MultiGraph& g,
                     const std::vector<std::vector<int>>& rot,
                     const std::vector<int>& sign) {
    CombMap m;
    m.g = g;
    m.rot = rot;
    m.sign = sign;
    for (auto& walk : trace_walls(m)) {
        FaceRec f;
        f.euler_genus = 0;
        f.orientable = true;
        f.walls.push_back({std::move(walk), true});
        m.faces.push_back(std::move(f));
    }
    return m;
}

std::vector<std::vector<int>> darts_from_rotations(
    const MultiGraph& g, const std::vector<std::vector<EdgeOcc>>& rot) {
    std::vector<std::vector<int>> out(g.num_vertices());
    for (int v = 0; v < g.num_vertices(); ++v)
        for (const EdgeOcc& o : rot[v]) {
            const auto& e = g.edges[o.edge];
            int d;
            if (e.u == e.v)
                d = 2 * o.edge + (o.second_end ? 1 : 0);
            else
                d = 2 * o.edge + (e.u == v ? 0 : 1);
            out[v].push_back(d);
        }
    return out;
}

std::string surface_name(const SurfaceClass& c) {
    if (c.euler_genus == 0) return "sphere";
    std::ostringstream os;
    if (c.orientable)
        os << "orientable genus " << c.euler_genus / 2;
    else
        os << "non-orientable genus " << c.euler_genus;
    return os.str();
}

std::vector<MapComponent> surface_components(const CombMap& m) {
    int n = m.g.num_vertices();
    int nf = static_cast<int>(m.faces.size());
    std::vector<int> parent(n + nf);
    for (int i = 0; i < n + nf; ++i) parent[i] = i;
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    auto unite = [&](int a, int b) { parent[find(a)] = find(b); };
    for (const auto& e : m.g.edges) unite(e.u, e.v);
    for (int f = 0; f < nf; ++f) {
        for (const auto& w : m.faces[f].walls)
            for (const State& s : w.states) unite(n + f, m.tail(s.dart));
        for (int v : m.faces[f].floats) unite(n + f, v);
    }
    std::map<int, MapComponent> comps;
    for (int v = 0; v < n; ++v) comps[find(v)].vertices.push_back(v);
    for (int e = 0; e < m.g.num_edges(); ++e)
        comps[find(m.g.edges[e].u)].edges.push_back(e);
    for (int f = 0; f < nf; ++f) comps[find(n + f)].faces.push_back(f);

    for (auto& [root, c] : comps) {
        int chi = static_cast<int>(c.vertices.size()) -
                  static_cast<int>(c.edges.size());
        for (int f : c.faces) chi += m.faces[f].chi_term();
        c.cls.euler_genus = 2 - chi;
        if (c.cls.euler_genus < 0)
            throw std::runtime_error("combmap: negative component genus");

        // Orientable iff all faces are, the signs reduce to +1 by vertex
        // flips, and each face's walls are coherently directed.
        bool ok = true;
        for (int f : c.faces)
            if (!m.faces[f].orientable) ok = false;
        std::map<int, int> tau;
        if (ok) {
            for (int v : c.vertices)
                if (!tau.count(v)) {
                    tau[v] = +1;
                    std::deque<int> q{v};
                    while (!q.empty() && ok) {
                        int x = q.front();
                        q.pop_front();
                        for (int e : m.g.incident_edges(x)) {
                            const auto& ed = m.g.edges[e];
                            if (ed.u == ed.v) {
                                if (m.sign[e] < 0) ok = false;
                                continue;
                            }
                            int y = ed.u == x ? ed.v : ed.u;
                            int want = tau[x] * m.sign[e];
                            auto it = tau.find(y);
                            if (it == tau.end()) {
                                tau[y] = want;
                                q.push_back(y);
                            } else if (it->second != want) {
                                ok = false;
                            }
                        }
                    }
                }
        }
        if (ok) {
            for (int f : c.faces) {
                std::set<bool> seen;
                for (const auto& w : m.faces[f].walls) {
                    std::set<int> types;
                    for (const State& s : w.states)
                        types.insert(s.sign * tau[m.tail(s.dart)]);
                    if (types.size() != 1) {
                        ok = false;
                        break;
                    }
                    seen.insert((*types.begin() > 0) == w.fwd);
                }
                if (seen.size() > 1) ok = false;
                if (!ok) break;
            }
        }
        c.cls.orientable = ok;
        if (ok && c.cls.euler_genus % 2 != 0)
            throw std::runtime_error("combmap: odd genus on orientable component");
    }
    std::vector<MapComponent> out;
    for (auto& [root, c] : comps) out.push_back(std::move(c));
    return out;
}

int occurrence_vertex(const CombMap& m, const Occurrence& o) {
    return m.tail(state_at(m, o).dart);
}

std::vector<Occurrence> occurrences_of_vertex(const CombMap& m, int v) {
    std::vector<Occurrence> out;
    for (int f = 0; f < static_cast<int>(m.faces.size()); ++f)
        for (int w = 0; w < static_cast<int>(m.faces[f].walls.size()); ++w) {
            const auto& wall = m.faces[f].walls[w];
            for (int i = 0; i < static_cast<int>(wall.states.size()); ++i)
                if (m.tail(wall.states[i].dart) == v) out.push_back({f, w, i});
        }
    return out;
}

std::vector<Occurrence> occurrences_in_face(const CombMap& m, int f) {
    std::vector<Occurrence> out;
    for (int w = 0; w < static_cast<int>(m.faces[f].walls.size()); ++w)
        for (int i = 0; i < static_cast<int>(m.faces[f].walls[w].states.size()); ++i)
            out.push_back({f, w, i});
    return out;
}

std::optional<int> float_face_of(const CombMap& m, int v) {
    for (int f = 0; f < static_cast<int>(m.faces.size()); ++f)
        for (int x : m.faces[f].floats)
            if (x == v) return f;
    return std::nullopt;
}

namespace {

// Shared machinery of insert_chord: splice the new edge, re-trace the
// affected face, and report the structure of the cut.
struct ChordTrace {
    CombMap m2;              // spliced map, face records still stale
    int new_edge = -1;
    std::vector<std::vector<State>> new_walls;
    std::vector<PieceDirs> pieces;          // per new wall
    std::vector<int> walls_with_new_edge;   // indices into new_walls
    bool same_wall = false;
};

ChordTrace chord_trace(const CombMap& m, const Occurrence& o1,
                       const Occurrence& o2, int lambda,
                       const std::string& edge_name) {
    if (o1.face != o2.face)
        throw std::runtime_error("combmap: bad chord occurrences");
    ChordTrace ct;
    ct.m2 = m;
    State x1 = state_at(m, o1), x2 = state_at(m, o2);
    int v1 = m.tail(x1.dart), v2 = m.tail(x2.dart);
    ct.new_edge = ct.m2.g.add_edge(v1, v2, edge_name);
    ct.m2.sign.push_back(lambda);
    int nd1 = 2 * ct.new_edge, nd2 = nd1 + 1;
    // Equal occurrences make a loop based at that corner: both new darts
    // are spliced side by side at the same anchor.
    splice(ct.m2.rot[v1], x1.dart, x1.sign, nd1);
    splice(ct.m2.rot[v2], x2.dart, x2.sign, nd2);
    ct.same_wall = (o1.wall == o2.wall);

    auto own = ownership(m);  // old map ownership; darts unchanged by splice
    std::vector<State> targets;
    for (const auto& w : m.faces[o1.face].walls)
        for (const State& s : w.states) targets.push_back(s);
    targets.push_back({nd1, +1});
    targets.push_back({nd1, -1});
    ct.new_walls = trace_targets(ct.m2, targets);
    int old_limit = m.num_darts();
    for (int i = 0; i < static_cast<int>(ct.new_walls.size()); ++i) {
        ct.pieces.push_back(piece_dirs(ct.new_walls[i], own, old_limit));
        bool has_new = false;
        for (const State& s : ct.new_walls[i])
            if (s.dart >= old_limit) has_new = true;
        if (has_new) ct.walls_with_new_edge.push_back(i);
    }
    return ct;
}

bool wall_coherent_dir(const CombMap& m, int face, int wall,
                       const PieceDirs& p) {
    // Effective forward flag of an old wall's piece inside a new wall.
    int dir = sole_dir(p, face, wall);
    bool fwd = m.faces[face].walls[wall].fwd;
    return dir > 0 ? fwd : !fwd;
}

}  // namespace

std::optional<CombMap> insert_chord(const CombMap& m, const Occurrence& o1,
                                    const Occurrence& o2, int lambda,
                                    const FaceClass& target,
                                    const std::string& edge_name) {
    if (!valid_class(target)) return std::nullopt;
    const FaceRec& f = m.faces[o1.face];
    ChordTrace ct = chord_trace(m, o1, o2, lambda, edge_name);

    // Genus is forced by the chi bookkeeping: the new face's term must
    // exceed the old one by exactly 1 (one new edge, same surface).
    int b_new = static_cast<int>(ct.new_walls.size() + f.floats.size());
    int forced_genus = 2 - b_new - (f.chi_term() + 1);
    if (target.euler_genus != forced_genus) return std::nullopt;

    FaceRec nf;
    nf.euler_genus = target.euler_genus;
    nf.orientable = target.orientable;
    nf.floats = f.floats;

    int touched = static_cast<int>(ct.walls_with_new_edge.size());
    if (!ct.same_wall) {
        // Cut along an arc joining two distinct boundaries: they merge.
        if (touched != 1)
            throw std::runtime_error("combmap: unexpected chord trace shape");
        if (f.orientable) {
            if (!target.orientable) return std::nullopt;
            const auto& p = ct.pieces[ct.walls_with_new_edge[0]];
            bool c1 = wall_coherent_dir(m, o1.face, o1.wall, p);
            bool c2 = wall_coherent_dir(m, o1.face, o2.wall, p);
            if (c1 != c2) return std::nullopt;  // wrong lambda for this face
        } else {
            if (target.orientable) return std::nullopt;
        }
    } else if (touched == 2) {
        // Two-sided arc on one boundary: the wall splits.
        if (f.orientable && !target.orientable) return std::nullopt;
        if (!f.orientable && target.orientable &&
            !(f.walls.size() == 1))
            return std::nullopt;  // other walls carry unknowable orientations
        if (!f.orientable && !target.orientable && target.euler_genus < 1)
            return std::nullopt;
    } else if (touched == 1) {
        // One-sided arc: only a non-orientable interior admits one.
        if (f.orientable) return std::nullopt;
        if (target.orientable && !(f.walls.size() == 1)) return std::nullopt;
    } else {
        throw std::runtime_error("combmap: unexpected chord trace shape");
    }

    for (int i = 0; i < static_cast<int>(ct.new_walls.size()); ++i) {
        Wall w;
        w.states = ct.new_walls[i];
        w.fwd = true;
        if (nf.orientable && f.orientable) {
            // Carry each surviving boundary's direction through the cut.
            const auto& p = ct.pieces[i];
            std::optional<bool> val;
            for (const auto& [key, dirs] : p) {
                if (dirs.size() != 1) return std::nullopt;
                bool c = wall_coherent_dir(m, key.first, key.second, p);
                if (val && *val != c) return std::nullopt;
                val = c;
            }
            w.fwd = val.value_or(true);
        } else if (nf.orientable && !f.orientable && touched == 2) {
            // The cut face is orientable but came from a non-orientable
            // interior: the two new boundaries must be incoherently
            // directed across the chord (re-gluing it must give back a
            // non-orientable face).
            w.fwd = true;  // first wall anchors the orientation
        }
        nf.walls.push_back(std::move(w));
    }
    if (nf.orientable && f.orientable && touched == 2) {
        // A split side carrying no old darts (a monogon side of a loop
        // chord) has no piece to inherit a direction from; it is fixed by
        // the coherent re-gluing of the chord instead.
        int wa = ct.walls_with_new_edge[0], wb = ct.walls_with_new_edge[1];
        auto side_state = [&](int wi) {
            for (const State& s : ct.new_walls[wi])
                if (CombMap::edge_of(s.dart) == ct.new_edge) return s;
            throw std::runtime_error("combmap: chord side missing");
        };
        auto fix = [&](int self, int other) {
            if (!ct.pieces[self].empty()) return;
            State so = side_state(other), ss = side_state(self);
            State eo = nf.walls[other].fwd ? so : ct.m2.mirror(so);
            nf.walls[self].fwd = (ss.dart == CombMap::mate(eo.dart));
        };
        fix(wa, wb);
        fix(wb, wa);
    }
    if (nf.orientable && !f.orientable && touched == 2) {
        // Fix the second new boundary relative to the first: the chord's
        // two sides must be traversed the same way (incoherent gluing).
        int wa = ct.walls_with_new_edge[0], wb = ct.walls_with_new_edge[1];
        int nd = 2 * ct.new_edge;
        auto side_state = [&](int wi) {
            for (const State& s : ct.new_walls[wi])
                if (CombMap::edge_of(s.dart) == ct.new_edge) return s;
            throw std::runtime_error("combmap: chord side missing");
        };
        State sa = side_state(wa), sb = side_state(wb);
        State ea = nf.walls[wa].fwd ? sa : ct.m2.mirror(sa);
        // Want dart(eff_b) == dart(eff_a) mate-rule to FAIL.
        State eb_true = sb, eb_false = ct.m2.mirror(sb);
        bool fwd_b = (eb_true.dart == CombMap::mate(ea.dart)) ? false : true;
        nf.walls[wb].fwd = fwd_b;
        (void)nd;
    }

    CombMap out = ct.m2;
    out.faces = m.faces;
    out.faces[o1.face] = std::move(nf);
    return out;
}

std::vector<std::pair<int, FaceClass>> chord_options(const CombMap& m,
                                                     const Occurrence& o1,
                                                     const Occurrence& o2) {
    std::vector<std::pair<int, FaceClass>> out;
    const FaceRec& f = m.faces[o1.face];
    for (int lambda : {+1, -1}) {
        ChordTrace ct = chord_trace(m, o1, o2, lambda, "_probe");
        int b_new = static_cast<int>(ct.new_walls.size() + f.floats.size());
        int g = 2 - b_new - (f.chi_term() + 1);
        for (bool o : {true, false}) {
            FaceClass cls{g, o};
            if (!valid_class(cls)) continue;
            if (insert_chord(m, o1, o2, lambda, cls, "_probe"))
                out.push_back({lambda, cls});
        }
    }
    return out;
}

CombMap split_disk_face(const CombMap& m, const Occurrence& o1,
                        const Occurrence& o2, const std::string& edge_name) {
    const FaceRec& f = m.faces[o1.face];
    if (!f.is_disk() || !f.floats.empty())
        throw std::runtime_error("combmap: split target is not a disk");
    for (int lambda : {+1, -1}) {
        ChordTrace ct = chord_trace(m, o1, o2, lambda, edge_name);
        if (ct.new_walls.size() != 2) continue;
        std::vector<FaceRec> halves;
        bool ok = true;
        for (int i = 0; i < 2 && ok; ++i) {
            FaceRec nf;
            nf.euler_genus = 0;
            nf.orientable = true;
            Wall w;
            w.states = ct.new_walls[i];
            std::optional<bool> val;
            for (const auto& [key, dirs] : ct.pieces[i]) {
                if (dirs.size() != 1) { ok = false; break; }
                bool c = wall_coherent_dir(m, key.first, key.second,
                                           ct.pieces[i]);
                if (val && *val != c) { ok = false; break; }
                val = c;
            }
            if (!ok) break;
            w.fwd = val.value_or(true);
            nf.walls.push_back(std::move(w));
            halves.push_back(std::move(nf));
        }
        if (!ok) continue;
        // A monogon side of a loop chord carries no old darts; its direction
        // is fixed by coherent re-gluing against the other side.
        auto side_state = [&](int wi) {
            for (const State& s : ct.new_walls[wi])
                if (CombMap::edge_of(s.dart) == ct.new_edge) return s;
            throw std::runtime_error("combmap: chord side missing");
        };
        auto fix = [&](int self, int other) {
            if (!ct.pieces[self].empty()) return;
            State so = side_state(other), ss = side_state(self);
            State eo = halves[other].walls[0].fwd ? so : ct.m2.mirror(so);
            halves[self].walls[0].fwd = (ss.dart == CombMap::mate(eo.dart));
        };
        fix(0, 1);
        fix(1, 0);
        CombMap out = ct.m2;
        out.faces = m.faces;
        out.faces[o1.face] = std::move(halves[0]);
        out.faces.push_back(std::move(halves[1]));
        return out;
    }
    throw std::runtime_error("combmap: chord does not split the disk");
}

CombMap pendant_at_float(const CombMap& m, int face, int float_vertex,
                         const std::string& vertex_name,
                         const std::string& edge_name, int* new_vertex) {
    CombMap m2 = m;
    auto& fl = m2.faces[face].floats;
    auto it = std::find(fl.begin(), fl.end(), float_vertex);
    if (it == fl.end())
        throw std::runtime_error("combmap: vertex is not a float of the face");
    fl.erase(it);
    int z = m2.g.add_vertex(vertex_name);
    m2.rot.push_back({});
    int e = m2.g.add_edge(float_vertex, z, edge_name);
    m2.sign.push_back(+1);
    m2.rot[float_vertex].push_back(2 * e);
    m2.rot[z].push_back(2 * e + 1);
    if (new_vertex) *new_vertex = z;
    auto walls = trace_targets(m2, {{2 * e, +1}, {2 * e, -1}});
    if (walls.size() != 1)
        throw std::runtime_error("combmap: pendant edge traced oddly");
    m2.faces[face].walls.push_back({std::move(walls[0]), true});
    return m2;
}

std::optional<CombMap> loop_at_float(const CombMap& m, int face,
                                     int float_vertex, int lambda,
                                     const FaceClass& target,
                                     const std::string& edge_name) {
    if (!valid_class(target)) return std::nullopt;
    const FaceRec& f = m.faces[face];
    CombMap m2 = m;
    auto& fl = m2.faces[face].floats;
    auto it = std::find(fl.begin(), fl.end(), float_vertex);
    if (it == fl.end())
        throw std::runtime_error("combmap: vertex is not a float of the face");
    fl.erase(it);
    int e = m2.g.add_edge(float_vertex, float_vertex, edge_name);
    m2.sign.push_back(lambda);
    m2.rot[float_vertex] = {2 * e, 2 * e + 1};
    auto walls = trace_targets(m2, {{2 * e, +1}, {2 * e, -1}});

    // The face's term must grow by exactly 1: one new edge, same surface.
    int b_new = static_cast<int>(f.walls.size() + walls.size() +
                                 f.floats.size() - 1);
    int forced_genus = 2 - b_new - (f.chi_term() + 1);
    if (target.euler_genus != forced_genus) return std::nullopt;

    if (walls.size() == 2) {
        // Two-sided loop around the vertex: an annular neighbourhood.
        if (f.orientable && !target.orientable) return std::nullopt;
        if (!f.orientable && target.orientable && !f.walls.empty())
            return std::nullopt;  // other walls carry unknowable orientations
        if (!f.orientable && !target.orientable && target.euler_genus < 1)
            return std::nullopt;
    } else {
        // One-sided loop: a Moebius neighbourhood, so the old interior
        // must have been non-orientable.
        if (f.orientable) return std::nullopt;
        if (target.orientable && !f.walls.empty()) return std::nullopt;
    }

    FaceRec& nf = m2.faces[face];
    nf.euler_genus = target.euler_genus;
    nf.orientable = target.orientable;
    for (size_t i = 0; i < walls.size(); ++i)
        nf.walls.push_back({walls[i], true});
    if (target.orientable && walls.size() == 2) {
        // Both new boundaries consist of the loop's darts only.  Re-gluing
        // them must give back the old interior: coherently directed if it
        // was orientable, incoherently if not.
        int wa = static_cast<int>(nf.walls.size()) - 2;
        int wb = wa + 1;
        State sa = nf.walls[wa].states[0], sb = nf.walls[wb].states[0];
        State ea = nf.walls[wa].fwd ? sa : m2.mirror(sa);
        bool coherent = (sb.dart == CombMap::mate(ea.dart));
        nf.walls[wb].fwd = f.orientable ? coherent : !coherent;
    }
    return m2;
}

std::vector<std::pair<int, FaceClass>> float_loop_options(const CombMap& m,
                                                          int face,
                                                          int float_vertex) {
    std::vector<std::pair<int, FaceClass>> out;
    const FaceRec& f = m.faces[face];
    for (int lambda : {+1, -1}) {
        // Wall count is 2 for an untwisted loop, 1 for a twisted one.
        int nwalls = lambda > 0 ? 2 : 1;
        int b_new = static_cast<int>(f.walls.size() + nwalls +
                                     f.floats.size() - 1);
        int g = 2 - b_new - (f.chi_term() + 1);
        for (bool o : {true, false}) {
            FaceClass cls{g, o};
            if (!valid_class(cls)) continue;
            if (loop_at_float(m, face, float_vertex, lambda, cls, "_probe"))
                out.push_back({lambda, cls});
        }
    }
    return out;
}

CombMap add_pendant(const CombMap& m, const Occurrence& at,
                    const std::string& vertex_name,
                    const std::string& edge_name, int* new_vertex) {
    CombMap m2 = m;
    State x = state_at(m, at);
    int v = m.tail(x.dart);
    int z = m2.g.add_vertex(vertex_name);
    m2.rot.push_back({});
    int e = m2.g.add_edge(v, z, edge_name);
    m2.sign.push_back(+1);
    splice(m2.rot[v], x.dart, x.sign, 2 * e);
    m2.rot[z].push_back(2 * e + 1);
    if (new_vertex) *new_vertex = z;

    const FaceRec& f = m.faces[at.face];
    auto own = ownership(m);
    std::vector<State> targets;
    for (const auto& w : f.walls)
        for (const State& s : w.states) targets.push_back(s);
    auto new_walls = trace_targets(m2, targets);
    if (new_walls.size() != f.walls.size())
        throw std::runtime_error("combmap: pendant changed wall count");
    FaceRec nf = f;
    nf.walls.clear();
    for (auto& wstates : new_walls) {
        Wall w;
        bool fwd = true;
        if (f.orientable) {
            auto p = piece_dirs(wstates, own, m.num_darts());
            std::optional<bool> val;
            for (const auto& [key, dirs] : p) {
                if (dirs.size() != 1)
                    throw std::runtime_error("combmap: pendant twisted a wall");
                bool c = wall_coherent_dir(m, key.first, key.second, p);
                if (val && *val != c)
                    throw std::runtime_error("combmap: pendant broke coherence");
                val = c;
            }
            fwd = val.value_or(true);
        }
        w.states = std::move(wstates);
        w.fwd = fwd;
        nf.walls.push_back(std::move(w));
    }
    m2.faces[at.face] = std::move(nf);
    return m2;
}

CombMap connect_float(const CombMap& m, const Occurrence& at, int float_vertex,
                      const std::string& edge_name) {
    CombMap m2 = m;
    auto& fl = m2.faces[at.face].floats;
    auto it = std::find(fl.begin(), fl.end(), float_vertex);
    if (it == fl.end())
        throw std::runtime_error("combmap: vertex is not a float of the face");
    fl.erase(it);
    State x = state_at(m, at);
    int v = m.tail(x.dart);
    int e = m2.g.add_edge(v, float_vertex, edge_name);
    m2.sign.push_back(+1);
    splice(m2.rot[v], x.dart, x.sign, 2 * e);
    m2.rot[float_vertex].push_back(2 * e + 1);

    const FaceRec& f = m.faces[at.face];
    auto own = ownership(m);
    std::vector<State> targets;
    for (const auto& w : f.walls)
        for (const State& s : w.states) targets.push_back(s);
    auto new_walls = trace_targets(m2, targets);
    FaceRec& nf = m2.faces[at.face];
    nf.walls.clear();
    for (auto& wstates : new_walls) {
        Wall w;
        bool fwd = true;
        if (f.orientable) {
            auto p = piece_dirs(wstates, own, m.num_darts());
            std::optional<bool> val;
            for (const auto& [key, dirs] : p) {
                if (dirs.size() != 1)
                    throw std::runtime_error("combmap: float join twisted a wall");
                val = wall_coherent_dir(m, key.first, key.second, p);
            }
            fwd = val.value_or(true);
        }
        w.states = std::move(wstates);
        w.fwd = fwd;
        nf.walls.push_back(std::move(w));
    }
    return m2;
}

CombMap connect_floats(const CombMap& m, int face, int v1, int v2,
                       const std::string& edge_name) {
    CombMap m2 = m;
    auto& fl = m2.faces[face].floats;
    for (int v : {v1, v2}) {
        auto it = std::find(fl.begin(), fl.end(), v);
        if (it == fl.end())
            throw std::runtime_error("combmap: vertex is not a float of the face");
        fl.erase(it);
    }
    int e = m2.g.add_edge(v1, v2, edge_name);
    m2.sign.push_back(+1);
    m2.rot[v1].push_back(2 * e);
    m2.rot[v2].push_back(2 * e + 1);
    auto walls = trace_targets(m2, {{2 * e, +1}, {2 * e, -1}});
    if (walls.size() != 1)
        throw std::runtime_error("combmap: isolated edge traced oddly");
    m2.faces[face].walls.push_back({std::move(walls[0]), true});
    return m2;
}

CombMap add_float(const CombMap& m, int face, int vertex) {
    if (m.g.degree(vertex) != 0)
        throw std::runtime_error("combmap: float vertex is not isolated");
    if (float_face_of(m, vertex))
        throw std::runtime_error("combmap: vertex already floats somewhere");
    CombMap m2 = m;
    m2.faces[face].floats.push_back(vertex);
    return m2;
}

CombMap add_float_vertex(const CombMap& m, int face,
                         const std::string& vertex_name, int* new_vertex) {
    CombMap m2 = m;
    int v = m2.g.add_vertex(vertex_name);
    m2.rot.push_back({});
    m2.faces[face].floats.push_back(v);
    if (new_vertex) *new_vertex = v;
    return m2;
}

namespace {

State remap_state(const State& s, int removed_edge) {
    int e = CombMap::edge_of(s.dart);
    if (e < removed_edge) return s;
    return {s.dart - 2, s.sign};
}

}  // namespace

CombMap delete_edge(const CombMap& m, int e) {
    auto own = ownership(m);
    Owner s1 = own[State{2 * e, +1}.key()];
    Owner s2 = own[State{2 * e, -1}.key()];
    if (s1.face < 0 || s2.face < 0)
        throw std::runtime_error("combmap: edge side not covered by any face");
    int f1 = s1.face, f2 = s2.face;
    const FaceRec& F1 = m.faces[f1];
    const FaceRec& F2 = m.faces[f2];

    CombMap m2;
    m2.g.vertex_names = m.g.vertex_names;
    for (int i = 0; i < m.g.num_edges(); ++i)
        if (i != e) m2.g.edges.push_back(m.g.edges[i]);
    m2.sign = m.sign;
    m2.sign.erase(m2.sign.begin() + e);
    m2.rot = m.rot;
    for (auto& r : m2.rot) {
        r.erase(std::remove_if(r.begin(), r.end(),
                               [&](int d) { return CombMap::edge_of(d) == e; }),
                r.end());
        for (int& d : r)
            if (CombMap::edge_of(d) > e) d -= 2;
    }

    // Ownership keyed by the new dart numbering, old edge's sides dropped.
    std::vector<Owner> own2(2 * m2.num_darts());
    for (int d = 0; d < m.num_darts(); ++d) {
        if (CombMap::edge_of(d) == e) continue;
        for (int sg : {+1, -1}) {
            State olds{d, sg};
            State news = remap_state(olds, e);
            own2[news.key()] = own[olds.key()];
        }
    }

    bool same_face = (f1 == f2);
    bool same_wall = same_face && (s1.wall == s2.wall);

    // Re-trace everything the affected face(s) used to cover.
    std::vector<State> targets;
    auto add_targets = [&](const FaceRec& F) {
        for (const auto& w : F.walls)
            for (const State& s : w.states)
                if (CombMap::edge_of(s.dart) != e)
                    targets.push_back(remap_state(s, e));
    };
    add_targets(F1);
    if (!same_face) add_targets(F2);
    auto new_walls = trace_targets(m2, targets);
    std::vector<PieceDirs> pieces;
    for (const auto& w : new_walls)
        pieces.push_back(piece_dirs(w, own2, m2.num_darts()));

    FaceRec nf;
    nf.floats = F1.floats;
    if (!same_face)
        nf.floats.insert(nf.floats.end(), F2.floats.begin(), F2.floats.end());
    int u = m.g.edges[e].u, v = m.g.edges[e].v;
    for (int z : {u, v})
        if (m2.g.degree(z) == 0 &&
            std::find(nf.floats.begin(), nf.floats.end(), z) == nf.floats.end())
            nf.floats.push_back(z);
    if (u == v && m2.g.degree(u) == 0) { /* already added once above */ }

    int old_terms = same_face ? F1.chi_term() : F1.chi_term() + F2.chi_term();
    int b_new = static_cast<int>(new_walls.size() + nf.floats.size());
    nf.euler_genus = 2 - b_new - (old_terms - 1);
    if (nf.euler_genus < 0)
        throw std::runtime_error("combmap: deletion produced negative genus");

    // The side's state as traversed in the face-coherent direction.
    auto eff_side = [&](const Owner& s, int raw_sign) {
        State raw{2 * e, raw_sign};
        bool fwd = m.faces[s.face].walls[s.wall].fwd;
        return ((s.dir > 0) == fwd) ? raw : m.mirror(raw);
    };

    bool flip_f2 = false;
    if (!same_face) {
        nf.orientable = F1.orientable && F2.orientable;
        if (nf.orientable) {
            State e1 = eff_side(s1, +1), e2 = eff_side(s2, -1);
            flip_f2 = !(e1.dart == CombMap::mate(e2.dart));
        }
    } else if (!same_wall) {
        State e1 = eff_side(s1, +1), e2 = eff_side(s2, -1);
        nf.orientable = F1.orientable && (e1.dart == CombMap::mate(e2.dart));
    } else {
        // Same wall: twisted iff both sides run through the same dart.
        State a1 = s1.dir > 0 ? State{2 * e, +1} : m.mirror({2 * e, +1});
        State a2 = s2.dir > 0 ? State{2 * e, -1} : m.mirror({2 * e, -1});
        bool twisted = (a1.dart == a2.dart);
        nf.orientable = F1.orientable && !twisted;
    }

    for (int i = 0; i < static_cast<int>(new_walls.size()); ++i) {
        Wall w;
        w.states = new_walls[i];
        w.fwd = true;
        if (nf.orientable) {
            std::optional<bool> val;
            for (const auto& [key, dirs] : pieces[i]) {
                if (dirs.size() != 1)
                    throw std::runtime_error("combmap: twisted piece in "
                                             "orientable deletion");
                bool c = wall_coherent_dir(m, key.first, key.second, pieces[i]);
                if (key.first == f2 && !same_face && flip_f2) c = !c;
                if (val && *val != c)
                    throw std::runtime_error("combmap: incoherent deletion merge");
                val = c;
            }
            w.fwd = val.value_or(true);
        }
        nf.walls.push_back(std::move(w));
    }

    // Assemble the face list: untouched faces keep their records with darts
    // renumbered; the affected one or two are replaced by nf.
    for (int f = 0; f < static_cast<int>(m.faces.size()); ++f) {
        if (f == f1 || f == f2) {
            if (f == f1) m2.faces.push_back(std::move(nf));
            continue;
        }
        FaceRec copy = m.faces[f];
        for (auto& w : copy.walls)
            for (State& s : w.states) s = remap_state(s, e);
        m2.faces.push_back(std::move(copy));
    }
    return m2;
}

CombMap delete_isolated_vertex(const CombMap& m, int v) {
    if (m.g.degree(v) != 0)
        throw std::runtime_error("combmap: vertex to delete is not isolated");
    CombMap m2 = m;
    m2.g.vertex_names.erase(m2.g.vertex_names.begin() + v);
    for (auto& e : m2.g.edges) {
        if (e.u > v) --e.u;
        if (e.v > v) --e.v;
    }
    m2.rot.erase(m2.rot.begin() + v);
    bool found = false;
    for (auto& f : m2.faces) {
        auto it = std::find(f.floats.begin(), f.floats.end(), v);
        if (it != f.floats.end()) {
            f.floats.erase(it);
            found = true;
        }
        for (int& x : f.floats)
            if (x > v) --x;
    }
    if (!found)
        throw std::runtime_error("combmap: isolated vertex was not a float");
    return m2;
}

CombMap restriction(const CombMap& m, const std::vector<char>& keep_edge,
                    const std::vector<char>& keep_vertex) {
    CombMap cur = m;
    for (int e = m.g.num_edges() - 1; e >= 0; --e)
        if (!keep_edge[e]) cur = delete_edge(cur, e);
    for (int v = m.g.num_vertices() - 1; v >= 0; --v)
        if (!keep_vertex[v]) cur = delete_isolated_vertex(cur, v);
    return cur;
}

CombMap flip_vertex(const CombMap& m, int v) {
    CombMap m2 = m;
    std::reverse(m2.rot[v].begin(), m2.rot[v].end());
    for (int e = 0; e < m.g.num_edges(); ++e) {
        const auto& ed = m.g.edges[e];
        if ((ed.u == v) != (ed.v == v)) m2.sign[e] = -m.sign[e];
    }
    for (auto& f : m2.faces)
        for (auto& w : f.walls) {
            for (State& s : w.states)
                if (m.tail(s.dart) == v) s.sign = -s.sign;
            bool flipped = false;
            w.states = canonical_walk(m2, w.states, &flipped);
            if (flipped && f.orientable) w.fwd = !w.fwd;
        }
    return m2;
}

namespace {

// Relabels a loop's two darts (2e <-> 2e+1) everywhere.  The two ends of a
// loop are interchangeable, so this encodes the same embedding.
CombMap swap_loop_darts(const CombMap& m, int e) {
    CombMap m2 = m;
    int v = m.g.edges[e].u;
    for (int& d : m2.rot[v])
        if (CombMap::edge_of(d) == e) d ^= 1;
    for (auto& f : m2.faces)
        for (auto& w : f.walls) {
            for (State& s : w.states)
                if (CombMap::edge_of(s.dart) == e) s.dart ^= 1;
            bool flipped = false;
            w.states = canonical_walk(m2, w.states, &flipped);
            if (flipped && f.orientable) w.fwd = !w.fwd;
        }
    return m2;
}

std::string walk_sig(const std::vector<State>& w) {
    std::ostringstream os;
    for (const State& s : w) os << s.dart << (s.sign > 0 ? "+" : "-");
    return os.str();
}

// Face signature, invariant under wall order and (for orientable faces)
// reflection of the whole face.
std::string face_sig(const CombMap& m, const FaceRec& f) {
    std::ostringstream os;
    os << "g" << f.euler_genus << (f.orientable ? "o" : "n");
    std::vector<std::string> fl;
    for (int x : f.floats) fl.push_back(m.g.vertex_names[x]);
    std::sort(fl.begin(), fl.end());
    for (const auto& s : fl) os << "{" << s << "}";
    if (!f.orientable) {
        std::vector<std::string> ws;
        for (const auto& w : f.walls) ws.push_back(walk_sig(w.states));
        std::sort(ws.begin(), ws.end());
        for (const auto& s : ws) os << "[" << s << "]";
        return os.str();
    }
    std::string best;
    for (bool toggle : {false, true}) {
        std::vector<std::string> ws;
        for (const auto& w : f.walls) {
            std::vector<State> eff =
                (w.fwd != toggle) ? w.states : mirror_orbit(m, w.states);
            rotate_to_min(eff);
            ws.push_back(walk_sig(eff));
        }
        std::sort(ws.begin(), ws.end());
        std::string var;
        for (const auto& s : ws) var += "[" + s + "]";
        if (best.empty() || var < best) best = var;
    }
    return os.str() + best;
}

bool cyclic_equal(const std::vector<int>& x, const std::vector<int>& y) {
    if (x.size() != y.size()) return false;
    if (x.empty()) return true;
    auto it = std::find(y.begin(), y.end(), x[0]);
    if (it == y.end()) return false;
    size_t off = it - y.begin();
    for (size_t i = 0; i < x.size(); ++i)
        if (x[i] != y[(off + i) % y.size()]) return false;
    return true;
}

bool maps_identical(const CombMap& a, const CombMap& b) {
    if (a.sign != b.sign) return false;
    for (int v = 0; v < a.g.num_vertices(); ++v)
        if (!cyclic_equal(a.rot[v], b.rot[v])) return false;
    std::vector<std::string> fa, fb;
    for (const auto& f : a.faces) fa.push_back(face_sig(a, f));
    for (const auto& f : b.faces) fb.push_back(face_sig(b, f));
    std::sort(fa.begin(), fa.end());
    std::sort(fb.begin(), fb.end());
    return fa == fb;
}

}  // namespace

bool maps_equivalent(const CombMap& a, const CombMap& b) {
    // Match the two graphs by vertex and edge names.
    if (a.g.num_vertices() != b.g.num_vertices() ||
        a.g.num_edges() != b.g.num_edges())
        return false;
    std::map<std::string, int> bvert, bedge;
    for (int v = 0; v < b.g.num_vertices(); ++v) {
        if (!bvert.emplace(b.g.vertex_names[v], v).second) return false;
        }
    for (int e = 0; e < b.g.num_edges(); ++e)
        if (!bedge.emplace(b.g.edges[e].name, e).second)
            throw std::runtime_error("combmap: ambiguous edge names");
    std::set<std::string> averts(a.g.vertex_names.begin(),
                                 a.g.vertex_names.end());
    if (averts.size() != a.g.vertex_names.size()) return false;

    // Translate b into a's vertex, edge, and dart numbering.
    std::vector<int> dart_map(2 * b.g.num_edges(), -1);
    std::vector<int> loops;
    CombMap b2;
    b2.g = a.g;
    b2.sign.resize(a.g.num_edges());
    for (int e = 0; e < a.g.num_edges(); ++e) {
        const auto& ae = a.g.edges[e];
        auto it = bedge.find(ae.name);
        if (it == bedge.end()) return false;
        const auto& be = b.g.edges[it->second];
        const std::string& au = a.g.vertex_names[ae.u];
        const std::string& av = a.g.vertex_names[ae.v];
        const std::string& bu = b.g.vertex_names[be.u];
        const std::string& bv = b.g.vertex_names[be.v];
        if (au == bu && av == bv) {
            dart_map[2 * it->second] = 2 * e;
            dart_map[2 * it->second + 1] = 2 * e + 1;
        } else if (au == bv && av == bu) {
            dart_map[2 * it->second] = 2 * e + 1;
            dart_map[2 * it->second + 1] = 2 * e;
        } else {
            return false;
        }
        if (ae.u == ae.v) loops.push_back(e);
        b2.sign[e] = b.sign[it->second];
    }
    b2.rot.assign(a.g.num_vertices(), {});
    for (int v = 0; v < a.g.num_vertices(); ++v) {
        auto it = bvert.find(a.g.vertex_names[v]);
        if (it == bvert.end()) return false;
        for (int d : b.rot[it->second]) b2.rot[v].push_back(dart_map[d]);
    }
    for (const auto& f : b.faces) {
        FaceRec nf;
        nf.euler_genus = f.euler_genus;
        nf.orientable = f.orientable;
        for (int x : f.floats) {
            auto name = b.g.vertex_names[x];
            nf.floats.push_back(
                static_cast<int>(std::find(a.g.vertex_names.begin(),
                                           a.g.vertex_names.end(), name) -
                                 a.g.vertex_names.begin()));
        }
        for (const auto& w : f.walls) {
            Wall nw;
            nw.fwd = w.fwd;
            for (const State& s : w.states)
                nw.states.push_back({dart_map[s.dart], s.sign});
            bool flipped = false;
            nw.states = canonical_walk(b2, nw.states, &flipped);
            if (flipped && nf.orientable) nw.fwd = !nw.fwd;
            nf.walls.push_back(std::move(nw));
        }
        b2.faces.push_back(std::move(nf));
    }

    // Remaining freedom: flipping vertices and relabelling loop ends.  Signs
    // pin the flips down to at most two choices per connected component.
    std::vector<std::vector<std::vector<int>>> options;  // per component
    std::vector<char> visited(a.g.num_vertices(), 0);
    for (int e : loops)
        if (a.sign[e] != b2.sign[e]) return false;
    for (int r = 0; r < a.g.num_vertices(); ++r) {
        if (visited[r]) continue;
        std::vector<int> comp;
        std::deque<int> q{r};
        visited[r] = 1;
        while (!q.empty()) {
            int x = q.front();
            q.pop_front();
            comp.push_back(x);
            for (int e : a.g.incident_edges(x)) {
                const auto& ed = a.g.edges[e];
                int y = ed.u == x ? ed.v : ed.u;
                if (!visited[y]) {
                    visited[y] = 1;
                    q.push_back(y);
                }
            }
        }
        std::vector<std::vector<int>> comp_opts;
        for (int root_flip : {0, 1}) {
            std::map<int, int> flip{{comp[0], root_flip}};
            std::deque<int> bfs{comp[0]};
            bool ok = true;
            while (!bfs.empty() && ok) {
                int x = bfs.front();
                bfs.pop_front();
                for (int e : a.g.incident_edges(x)) {
                    const auto& ed = a.g.edges[e];
                    if (ed.u == ed.v) continue;
                    int y = ed.u == x ? ed.v : ed.u;
                    int want = flip[x] ^ (a.sign[e] != b2.sign[e] ? 1 : 0);
                    auto it = flip.find(y);
                    if (it == flip.end()) {
                        flip[y] = want;
                        bfs.push_back(y);
                    } else if (it->second != want) {
                        ok = false;
                        break;
                    }
                }
            }
            if (!ok) continue;
            std::vector<int> chosen;
            for (auto& [v, fl] : flip)
                if (fl) chosen.push_back(v);
            comp_opts.push_back(std::move(chosen));
            if (comp.size() == 1 && a.g.incident_edges(comp[0]).empty())
                break;  // a bare vertex: flipping it changes nothing
        }
        if (comp_opts.empty()) return false;
        options.push_back(std::move(comp_opts));
    }

    if (options.size() + loops.size() > 20)
        throw std::runtime_error("combmap: equivalence search too large");
    std::vector<size_t> pick(options.size(), 0);
    while (true) {
        CombMap cand = b2;
        for (size_t i = 0; i < options.size(); ++i)
            for (int v : options[i][pick[i]]) cand = flip_vertex(cand, v);
        for (size_t mask = 0; mask < (size_t{1} << loops.size()); ++mask) {
            CombMap c2 = cand;
            for (size_t i = 0; i < loops.size(); ++i)
                if (mask & (size_t{1} << i)) c2 = swap_loop_darts(c2, loops[i]);
            if (maps_identical(a, c2)) return true;
        }
        size_t i = 0;
        for (; i < options.size(); ++i) {
            if (++pick[i] < options[i].size()) break;
            pick[i] = 0;
        }
        if (i == options.size()) break;
    }
    return false;
}

void CombMap::check() const {
    g.validate();
    if (static_cast<int>(rot.size()) != g.num_vertices())
        throw std::runtime_error("combmap: rotation count mismatch");
    if (static_cast<int>(sign.size()) != g.num_edges())
        throw std::runtime_error("combmap: sign count mismatch");
    std::vector<int> seen(num_darts(), 0);
    for (int v = 0; v < g.num_vertices(); ++v)
        for (int d : rot[v]) {
            if (d < 0 || d >= num_darts() || tail(d) != v)
                throw std::runtime_error("combmap: dart in wrong rotation");
            ++seen[d];
        }
    for (int d = 0; d < num_darts(); ++d)
        if (seen[d] != 1)
            throw std::runtime_error("combmap: darts do not partition");
    for (int s : sign)
        if (s != 1 && s != -1) throw std::runtime_error("combmap: bad sign");

    auto traced = trace_walls(*this);
    std::vector<std::vector<State>> stored;
    for (const auto& f : faces) {
        if (f.euler_genus < 0 || (f.orientable && f.euler_genus % 2 != 0))
            throw std::runtime_error("combmap: bad face genus");
        for (const auto& w : f.walls) {
            if (w.states.empty())
                throw std::runtime_error("combmap: empty stored wall");
            stored.push_back(w.states);
        }
    }
    std::sort(stored.begin(), stored.end(),
              [](const auto& a, const auto& b) { return a[0] < b[0]; });
    if (stored != traced)
        throw std::runtime_error("combmap: stored walls disagree with trace");

    std::vector<int> float_count(g.num_vertices(), 0);
    for (const auto& f : faces)
        for (int x : f.floats) ++float_count[x];
    for (int v = 0; v < g.num_vertices(); ++v) {
        bool isolated = g.degree(v) == 0;
        if (isolated && float_count[v] != 1)
            throw std::runtime_error("combmap: isolated vertex not floating once");
        if (!isolated && float_count[v] != 0)
            throw std::runtime_error("combmap: non-isolated vertex floats");
    }
    surface_components(*this);  // throws on genus arithmetic violations
}

std::string CombMap::to_text() const {
    std::ostringstream os;
    os << g.to_text();
    for (int v = 0; v < g.num_vertices(); ++v) {
        os << "rot " << g.vertex_names[v];
        for (int d : rot[v]) os << " " << d;
        os << "\n";
    }
    os << "sign";
    for (int s : sign) os << " " << (s > 0 ? "+" : "-");
    os << "\n";
    for (const auto& f : faces) {
        os << "face g=" << f.euler_genus << " o=" << (f.orientable ? 1 : 0);
        for (const auto& w : f.walls) {
            os << " [" << (w.fwd ? "+" : "-");
            for (const State& s : w.states)
                os << " " << s.dart << (s.sign > 0 ? "" : "'");
            os << "]";
        }
        for (int x : f.floats) os << " {" << g.vertex_names[x] << "}";
        os << "\n";
    }
    return os.str();
}

}  // namespace cemb
