#pragma once

#include <string>

#include "cemb/combmap.hpp"
#include "cemb/complex.hpp"
#include "cemb/graph.hpp"
#include "cemb/pipeline.hpp"

namespace cemb {

/// Checkable witness of a positive answer.  Three shapes occur:
///   BOOK   - a segment of the complex carries three or more triangles, so
///            every graph embeds into a neighborhood of it;
///   EMPTY  - under the recorded assignment the instance rewrites away
///            completely, nothing is left to embed;
///   MAP    - an explicit embedding into the surface built from the
///            recorded assignment and placement, plus a planar embedding
///            of the components that were set aside as trivially placeable.
struct Certificate {
    enum class Kind { BOOK, EMPTY, MAP };

    Kind kind = Kind::MAP;
    std::string book_witness;       // "<node> <node>" of a fat segment
    long long guess_index = 0;      // raw index into the assignment stream
    long long placement_index = 0;  // raw index into the placements
    CombMap map;                    // embedding extending the anchor
    CombMap dropped_map;            // planar embedding of set-aside parts
};

/// Builds a certificate out of a positive pipeline run.  Throws
/// std::runtime_error if the run does not hold a positive answer.
Certificate make_certificate(const PipelineRun& run);

std::string certificate_to_text(const Certificate& cert);

/// Inverse of certificate_to_text.  Throws std::runtime_error on malformed
/// input.
Certificate parse_certificate_text(const std::string& text);

/// Re-derives the branch the certificate points at and checks the witness
/// against it.  Returns false on any mismatch; never throws for structural
/// defects of the certificate itself.
bool verify_certificate(const MultiGraph& g, const SimplicialComplex2& c,
                        const Certificate& cert);

/// Serialization round-trip for embedded maps, exposed for the certificate
/// format: parses the output of CombMap::to_text.  Throws on malformed
/// input.
CombMap parse_combmap_text(const std::string& text);

}  // namespace cemb
