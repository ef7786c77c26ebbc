#pragma once

#include <chrono>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cemb/combmap.hpp"
#include "cemb/complex.hpp"
#include "cemb/graph.hpp"
#include "cemb/surface.hpp"

namespace cemb {

enum class Answer { YES, NO, BUDGET_EXCEEDED };

/// Thrown by BudgetMeter::tick when a limit is hit; caught at the top of
/// the search, never exposed to callers of run_pipeline.
struct BudgetExceeded {};

/// Shared step/time budget threaded through the search.  A step is one
/// search node (an emitted instance or a solver branch).  Negative limits
/// mean unlimited.
struct BudgetMeter {
    long long max_steps = -1;
    double max_seconds = -1;
    long long used = 0;
    std::chrono::steady_clock::time_point started =
        std::chrono::steady_clock::now();

    void tick();
};

/// Stream of candidate assignments of the singular nodes of the complex to
/// vertices of the prepared graph, or to no vertex at all (the empty
/// string).  Assignments are indexed by a plain mixed-radix counter so a
/// recorded index can be replayed exactly; indices whose assignment reuses
/// a vertex are skipped by the caller.
struct GuessStream {
    /// Input graph with every edge subdivided once per singular node, so
    /// that a subdivision-respecting embedding may route any edge through
    /// any subset of the singular nodes.
    MultiGraph prepared;
    std::vector<std::string> nodes;   // singular node names, in id order
    std::vector<std::string> values;  // "" first, then vertices of prepared

    /// values^|nodes| raw combinations (saturating).
    long long total() const;
    /// Decodes the assignment at a raw index (nodes[0] is the least
    /// significant digit).  Returns false if a vertex is assigned twice.
    bool assignment_at(long long index,
                       std::map<std::string, std::string>* out) const;
};

GuessStream respecting_maps(const MultiGraph& g, const SimplicialComplex2& c);

/// Result of rewriting one assignment into an instance over a pure complex
/// (every segment in a triangle): isolated segments are traded against
/// graph edges, unused singular nodes are withdrawn, and stranded nodes
/// either disappear or force a negative answer.
struct ReduceOutcome {
    bool decided = false;        // answer forced before any surface is built
    Answer answer = Answer::NO;  // meaningful only when decided
    SimplicialComplex2 complex;  // pure (possibly empty)
    MultiGraph g;                // rewritten graph
    /// Surviving node -> vertex pins; covers every singular node of
    /// `complex` and possibly some regular ones.
    std::map<std::string, std::string> pins;
};

ReduceOutcome reduce_to_pure(const SimplicialComplex2& c, const MultiGraph& g,
                             const std::map<std::string, std::string>& assign);

/// A reduced instance carried onto the closed surface obtained by
/// thickening and capping: the graph to embed, the anchored subgraph
/// already drawn, and the surface components not yet carrying anything.
/// Planar components of the graph disjoint from the anchored subgraph are
/// set aside in `dropped` (they embed in any leftover disk) and restored
/// when a witness embedding is written out.
struct SurfInstance {
    MultiGraph g;
    CombMap pi;
    std::vector<SurfaceClass> bare;
    MultiGraph dropped;
    /// One delegate vertex (id into g) per non-planar component of g that
    /// shares nothing with the anchored subgraph; each must be placed into
    /// some face or bare component before solving.
    std::vector<int> seeds;
};

SurfInstance make_surf_instance(const ThickenResult& t);

/// Instance whose placement guesses have all been made: every component of
/// g has at least one vertex already on the surface described by pi.
struct ConInstance {
    MultiGraph g;
    CombMap pi;
};

/// Number of ways to drop the seed vertices into faces or bare components:
/// (faces + bare)^|seeds|, or 0 when there are more seeds than the total
/// Euler genus of the surface can support.
long long num_placements(const SurfInstance& s);

/// Materializes one placement: seeds are floated into the face or bare
/// component selected by the mixed-radix index (seeds[0] least
/// significant; digits 0..F-1 are faces of pi, F.. are bare components).
ConInstance placement_at(const SurfInstance& s, long long index);

/// All ways of drawing one more graph edge (together with the tree path
/// leading to its endpoints) across the first non-disk face of the
/// instance.  Every child has cellularity defect exactly one lower.
std::vector<ConInstance> cellularize_step(const ConInstance& inst);

/// Backtracking search for an embedding extension once every face is a
/// disk: edges are drawn one at a time as chords of disk faces or pendant
/// hops.  On YES, *final_map holds a cellular embedding of all of inst.g.
Answer solve_cellular(const ConInstance& inst, BudgetMeter& budget,
                      CombMap* final_map);

/// Negative answers already established, keyed by a renaming-independent
/// encoding of the instance.  Shared across placements and guesses, so
/// symmetric branches of the outer enumeration are refuted once.
struct SolveCache {
    std::set<std::vector<std::pair<long long, long long>>> no;
};

/// Full search below one placement: component/genus screening, repeated
/// face surgery until every face is a disk, then solve_cellular.
Answer solve_placed(const ConInstance& inst, BudgetMeter& budget,
                    CombMap* final_map, SolveCache* cache = nullptr);

struct BudgetLimits {
    long long steps = -1;
    double seconds = -1;
};

/// Everything a caller (or a certificate writer) needs about one run.
struct PipelineRun {
    Answer answer = Answer::NO;
    /// Some segment carries three or more triangles, so every graph embeds
    /// in a neighborhood of it; `book_witness` names such a segment.
    bool three_book = false;
    std::string book_witness;
    long long guess_index = -1;
    long long placement_index = -1;
    std::map<std::string, std::string> assignment;  // decoded guess
    SurfInstance branch;  // populated on a positive non-book answer
    /// Cellular embedding of branch.g plus the edges added by the search;
    /// empty when the answer is negative or by short-circuit.
    CombMap final_map;
    long long steps_used = 0;
};

/// Decides whether g embeds topologically into the complex c.
PipelineRun run_pipeline(const MultiGraph& g, const SimplicialComplex2& c,
                         const BudgetLimits& limits = {});

}  // namespace cemb
