#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace cemb {

/// Abstract simplicial complex of dimension at most two.  Nodes are dense
/// integer ids; external string names are kept for I/O.  Segments and
/// triangles are stored with sorted node ids and no duplicates.
struct SimplicialComplex2 {
    std::vector<std::string> node_names;
    std::vector<std::array<int, 2>> segments;
    std::vector<std::array<int, 3>> triangles;

    int num_nodes() const { return static_cast<int>(node_names.size()); }
    int num_simplices() const {
        return num_nodes() + static_cast<int>(segments.size()) +
               static_cast<int>(triangles.size());
    }
    bool empty() const { return num_nodes() == 0; }

    int add_node(const std::string& name);
    /// Adds a segment if absent; returns its index.
    int add_segment(int a, int b);
    /// Adds a triangle and its three boundary segments if absent.
    int add_triangle(int a, int b, int c);

    std::optional<int> find_node(const std::string& name) const;
    std::optional<int> find_segment(int a, int b) const;

    /// Checks all structural invariants (endpoint membership, closure of
    /// triangles under taking 2-subsets, no duplicates).  Throws
    /// std::runtime_error on violation.
    void validate() const;

    /// Renumbers nodes with the given permutation out of place.
    SimplicialComplex2 renumbered(const std::vector<int>& new_id_of) const;

    std::string to_text() const;
};

/// The partition of the simplices around a node of a 3-book-free complex.
/// Cones are cyclic triangle sequences, corners maximal open chains; both
/// are stored as lists of triangle indices into the parent complex.
struct NodeLink {
    int node = -1;
    std::vector<std::vector<int>> cones;
    std::vector<std::vector<int>> corners;
    std::vector<int> isolated_segments;  // segment indices

    int num_parts() const {
        return static_cast<int>(cones.size() + corners.size() +
                                isolated_segments.size());
    }
};

/// True iff some segment lies in at least three triangles.
bool contains_3book(const SimplicialComplex2& c);

/// Witness segment of a 3-book, if any.
std::optional<std::array<int, 2>> find_3book_segment(const SimplicialComplex2& c);

/// Partitions the simplices incident to p into cones, corners, and isolated
/// segments.  Requires that no 3-book touches p.
NodeLink node_link(const SimplicialComplex2& c, int p);

/// A node is regular iff its incident simplices form exactly one cone or
/// exactly one corner (and nothing else).
bool is_singular(const NodeLink& link);

std::vector<int> singular_nodes(const SimplicialComplex2& c);

/// No isolated segments and every node incident to at least one segment.
bool is_pure(const SimplicialComplex2& c);

struct ComplexParseResult {
    SimplicialComplex2 complex;
    std::vector<std::string> warnings;  // e.g. implied segments auto-added
};

/// Text format, one declaration per line:
///   node <id> | segment <id> <id> | triangle <id> <id> <id>
/// '#' starts a comment.  Unknown node ids are created on first use in a
/// segment or triangle with a warning; implied segments of triangles are
/// auto-added with a warning.
ComplexParseResult parse_complex(std::istream& in);
ComplexParseResult parse_complex_text(const std::string& text);

}  // namespace cemb
