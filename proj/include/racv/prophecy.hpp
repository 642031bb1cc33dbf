#ifndef RACV_PROPHECY_HPP
#define RACV_PROPHECY_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "racv/probability.hpp"
#include "racv/reach.hpp"

namespace racv {

// ── Branching classification ─────────────────────────────────────────────────

enum class BranchTag { Stochastic, Nondeterministic, Mixed };

enum class MixedCase { IA, IB, IC, II };

struct BranchClass {
    BranchTag tag = BranchTag::Stochastic;
    std::optional<MixedCase> mixed_case;  // present iff tag == Mixed

    bool mixed() const { return tag == BranchTag::Mixed; }
    std::string to_string() const;
};

struct ClassifyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One outgoing edge of a branching as the classifier sees it.
struct BranchEdge {
    ProphecyRegion region;
    bool stochastic = false;  // stutter edges count as nonstochastic
};

/// Classify a branching from its positive-probability edges and the region
/// annotating the incoming edge of the node. All comparisons are up to null
/// sets. Exactly one of the three classes applies whenever the filtered edge
/// list is nonempty; otherwise ClassifyError.
BranchClass classify(const std::vector<BranchEdge>& positive_edges,
                     const ProphecyRegion& incoming);

// ── Enabling regions on a reach tree ─────────────────────────────────────────

/// Set of random clocks that expired along the path from the root to each node
/// (the events of the stochastic jumps taken).
std::map<std::size_t, std::set<std::size_t>> expired_along_paths(const RacModel& model,
                                                                 const ReachTree& tree);

/// Enabling prophecies of one tree edge: project the guard-restricted state
/// set of the source node onto the random-clock coordinates, then up-close
/// every clock that is neither expired on the path nor expiring at this jump.
ProphecyRegion enabling_region(const RacModel& model, const ReachTree& tree,
                               const ReachEdge& edge,
                               const std::set<std::size_t>& expired);

/// Enabling region per edge index of the tree (parallel to tree.edges).
std::vector<ProphecyRegion> annotate_tree(const RacModel& model, const ReachTree& tree);

/// Children whose edge region is not a null set.
std::vector<std::size_t> positive_children(const ReachTree& tree,
                                           const std::vector<ProphecyRegion>& regions,
                                           std::size_t node);

/// Projection of a state polytope onto the random-clock coordinates.
ProphecyRegion project_to_clocks(const RacModel& model, const ConvexPolytope& states);

}  // namespace racv

#endif  // RACV_PROPHECY_HPP
