#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cemb/graph.hpp"

namespace cemb {

/// One traversal step of a face boundary: a dart together with the side
/// (+1/-1) it is traversed on.  Darts are 2e (tail = edges[e].u) and 2e+1
/// (tail = edges[e].v).
struct State {
    int dart = -1;
    int sign = +1;

    int key() const { return dart * 2 + (sign < 0 ? 1 : 0); }
    bool operator==(const State&) const = default;
    bool operator<(const State& o) const { return key() < o.key(); }
};

/// A closed boundary walk of a face, stored as a trace orbit.  `fwd` says
/// whether the stored direction agrees with the orientation the face record
/// assigns to the face; it is meaningful only for orientable faces.
struct Wall {
    std::vector<State> states;
    bool fwd = true;
};

/// A face of the map: a bordered surface of the given Euler genus glued to
/// the graph along its boundary walks.  Isolated vertices lying in the face
/// interior are listed in `floats` and count as degenerate boundary
/// components.  A face with no walls and no floats is a whole closed
/// surface component carrying no graph.
struct FaceRec {
    int euler_genus = 0;
    bool orientable = true;
    std::vector<Wall> walls;
    std::vector<int> floats;

    int num_boundaries() const {
        return static_cast<int>(walls.size() + floats.size());
    }
    /// chi contribution 2 - g - b of the face to its surface component.
    int chi_term() const { return 2 - euler_genus - num_boundaries(); }
    /// How far the face is from an open disk.
    int cellularity_defect() const { return euler_genus + num_boundaries() - 1; }
    bool is_disk() const { return cellularity_defect() == 0 && floats.empty(); }
};

/// Graph embedded in a (possibly disconnected) closed surface given by a
/// signed rotation system plus face records partitioning the boundary walks.
struct CombMap {
    MultiGraph g;
    std::vector<std::vector<int>> rot;  // darts with tail v, in cyclic order
    std::vector<int> sign;              // +1 / -1 per edge
    std::vector<FaceRec> faces;

    int num_darts() const { return 2 * g.num_edges(); }
    static int edge_of(int dart) { return dart / 2; }
    static int mate(int dart) { return dart ^ 1; }
    int tail(int dart) const {
        const auto& e = g.edges[dart / 2];
        return (dart & 1) ? e.v : e.u;
    }
    int head(int dart) const { return tail(mate(dart)); }

    State step(const State& x) const;    // face-tracing successor
    State mirror(const State& x) const;  // same edge side, reversed walk

    /// Full structural validation: rotations partition the darts, stored
    /// walls are exactly the trace orbits (one per mirror pair, in canonical
    /// form), floats are the isolated vertices, genus arithmetic is sane.
    /// Throws std::runtime_error on violation.
    void check() const;

    std::string to_text() const;
};

/// All boundary walks of the rotation system, one canonical representative
/// per mirror pair, sorted by their smallest state.
std::vector<std::vector<State>> trace_walls(const CombMap& m);

/// Canonical form of a walk: of the orbit and its mirror, the one holding
/// the globally smallest state, rotated to start there.  `flipped` reports
/// whether the mirror was chosen.
std::vector<State> canonical_walk(const CombMap& m, std::vector<State> walk,
                                  bool* flipped = nullptr);

/// Builds a map whose faces are exactly the boundary walks (all disks).
/// Use for cellular embeddings given as a signed rotation system.
CombMap cellular_map(const MultiGraph& g,
                     const std::vector<std::vector<int>>& rot,
                     const std::vector<int>& sign);

/// Converts per-vertex edge-occurrence rotations (as produced by
/// planar_rotations) into dart rotations.
std::vector<std::vector<int>> darts_from_rotations(
    const MultiGraph& g, const std::vector<std::vector<EdgeOcc>>& rot);

/// Homeomorphism type of a closed surface.
struct SurfaceClass {
    int euler_genus = 0;
    bool orientable = true;
    bool operator==(const SurfaceClass&) const = default;
};

std::string surface_name(const SurfaceClass& c);

/// A connected piece of the underlying surface.
struct MapComponent {
    std::vector<int> vertices;
    std::vector<int> edges;
    std::vector<int> faces;
    SurfaceClass cls;
};

std::vector<MapComponent> surface_components(const CombMap& m);

/// Position of a vertex occurrence on a face boundary:
/// faces[face].walls[wall].states[index] has its tail at the vertex.
struct Occurrence {
    int face = -1;
    int wall = -1;
    int index = -1;
    bool operator==(const Occurrence&) const = default;
};

int occurrence_vertex(const CombMap& m, const Occurrence& o);
std::vector<Occurrence> occurrences_of_vertex(const CombMap& m, int v);
std::vector<Occurrence> occurrences_in_face(const CombMap& m, int f);
/// Face holding v as a floating vertex, if any.
std::optional<int> float_face_of(const CombMap& m, int v);

/// Homeomorphism type of a face interior after cutting along a chord.
struct FaceClass {
    int euler_genus = 0;
    bool orientable = true;
    bool operator==(const FaceClass&) const = default;
};

/// Adds an edge between the tail vertices of two occurrences of the same
/// face, drawn inside that face, cutting it along the new arc.  Equal
/// occurrences give a loop based at that corner.  `target` prescribes the
/// interior type of the cut face; returns nothing if the combination
/// (lambda, target) is not realizable.  The new edge is appended to the
/// graph (id num_edges() of the input).
std::optional<CombMap> insert_chord(const CombMap& m, const Occurrence& o1,
                                    const Occurrence& o2, int lambda,
                                    const FaceClass& target,
                                    const std::string& edge_name);

/// All realizable (lambda, resulting interior type) pairs for a chord.
std::vector<std::pair<int, FaceClass>> chord_options(const CombMap& m,
                                                     const Occurrence& o1,
                                                     const Occurrence& o2);

/// Splits a disk face into two disk faces along a chord between two of its
/// boundary occurrences; equal occurrences cut off a disk by a loop.  The
/// first new face replaces the old record, the second is appended.
CombMap split_disk_face(const CombMap& m, const Occurrence& o1,
                        const Occurrence& o2, const std::string& edge_name);

/// Joins a floating vertex of a face to a fresh pendant vertex; the pair
/// becomes a new boundary walk of the face, whose type is unchanged.
CombMap pendant_at_float(const CombMap& m, int face, int float_vertex,
                         const std::string& vertex_name,
                         const std::string& edge_name,
                         int* new_vertex = nullptr);

/// Adds a loop at a floating vertex of the face, drawn along an essential
/// curve; `target` prescribes the interior type of the cut face as in
/// insert_chord.
std::optional<CombMap> loop_at_float(const CombMap& m, int face,
                                     int float_vertex, int lambda,
                                     const FaceClass& target,
                                     const std::string& edge_name);

/// All realizable (lambda, interior type) pairs for a loop at a float.
std::vector<std::pair<int, FaceClass>> float_loop_options(const CombMap& m,
                                                          int face,
                                                          int float_vertex);

/// True iff the maps describe the same embedding: graphs match by names and
/// the structures agree up to vertex flips and face orientation choices.
bool maps_equivalent(const CombMap& a, const CombMap& b);

/// Adds a fresh vertex inside the face, joined by a pendant edge at the
/// given occurrence.  Face type is unchanged.
CombMap add_pendant(const CombMap& m, const Occurrence& at,
                    const std::string& vertex_name,
                    const std::string& edge_name, int* new_vertex = nullptr);

/// Joins a floating vertex of the face to a boundary occurrence.
CombMap connect_float(const CombMap& m, const Occurrence& at, int float_vertex,
                      const std::string& edge_name);

/// Joins two floating vertices of the same face by an edge.
CombMap connect_floats(const CombMap& m, int face, int v1, int v2,
                       const std::string& edge_name);

/// Declares an isolated vertex of the graph to lie inside the given face.
CombMap add_float(const CombMap& m, int face, int vertex);

/// Adds a fresh isolated vertex floating inside the face.
CombMap add_float_vertex(const CombMap& m, int face,
                         const std::string& vertex_name,
                         int* new_vertex = nullptr);

/// Removes edge e, merging or reshaping the adjacent face(s); endpoints
/// left isolated become floating vertices of the resulting face.  Edge ids
/// above e shift down by one.
CombMap delete_edge(const CombMap& m, int e);

/// Removes an isolated (floating) vertex.  Vertex ids above v shift down.
CombMap delete_isolated_vertex(const CombMap& m, int v);

/// Sub-map induced by keeping the flagged edges and vertices.  Dropped
/// vertices must end up isolated once the dropped edges are gone; kept
/// vertices that end up isolated become floats.
CombMap restriction(const CombMap& m, const std::vector<char>& keep_edge,
                    const std::vector<char>& keep_vertex);

/// Reverses the rotation at v and negates the signs of its non-loop edges;
/// the embedding (and all face records) is unchanged up to renaming of
/// stored walks.  Used to normalize and to test convention invariance.
CombMap flip_vertex(const CombMap& m, int v);

}  // namespace cemb
