#ifndef RACV_TRANSFORM_HPP
#define RACV_TRANSFORM_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "racv/prophecy.hpp"
#include "racv/reach.hpp"

namespace racv {

// ── Modified reach tree ──────────────────────────────────────────────────────
// Nodes are copies of reach-tree nodes, re-identified by (id_R, id_T); edges
// carry a prophecy region and either a jump reference or a stutter label.
// Rewrites remove subtrees; removed nodes stay in the arena with alive=false.

struct ModNode {
    std::size_t id_r = 0;  // origin node id in the reach tree
    std::size_t id_t = 0;  // copy index
    std::size_t location = 0;
    std::set<std::size_t> expired;  // random clocks occurred on the path here
    bool alive = true;
    bool exposed = false;  // a stay child has been attached
    bool settled = false;  // degenerate mixed branching kept as a free choice
};

struct ModEdge {
    std::size_t parent = 0;                // index into ModifiedReachTree::nodes
    std::size_t child = 0;
    std::optional<std::size_t> jump;       // nullopt = stutter (tau / stay)
    ProphecyRegion region;
    bool alive = true;

    bool stutter() const { return !jump.has_value(); }
};

struct SplitTrace {
    std::size_t node = 0;  // node index the split happened at
    std::vector<ProphecyRegion> child_regions;  // regions of ch+ before the split
    std::vector<ProphecyRegion> cells;          // surviving cell regions K^I
    std::vector<std::vector<std::size_t>> members;  // per cell: ch+ positions in I
};

class ModifiedReachTree {
public:
    ModifiedReachTree(const RacModel& model, const ReachTree& origin);

    const RacModel& model() const { return *model_; }
    const ReachTree& origin() const { return *origin_; }

    const std::vector<ModNode>& nodes() const { return nodes_; }
    const std::vector<ModEdge>& edges() const { return edges_; }
    std::size_t root() const { return root_; }

    const ConvexPolytope& states_of(std::size_t node) const;
    std::vector<std::size_t> child_edges(std::size_t node) const;  // alive edges
    std::optional<std::size_t> incoming_edge(std::size_t node) const;
    /// Region of the incoming edge; the full prophecy space for the root.
    ProphecyRegion incoming_region(std::size_t node) const;
    std::size_t alive_node_count() const;

    /// Alive child edges whose region is not null.
    std::vector<std::size_t> positive_child_edges(std::size_t node) const;

    // See transform operations below; these mutate the tree in place.
    friend ModifiedReachTree initial_transform(const RacModel&, const ReachTree&,
                                               const std::vector<ProphecyRegion>&);
    friend bool expose(ModifiedReachTree&, std::size_t, double);
    friend bool split(ModifiedReachTree&, std::size_t, std::size_t, SplitTrace*);
    friend void separate(ModifiedReachTree&, std::size_t);
    friend std::size_t valid_copy(ModifiedReachTree&, std::size_t, const ProphecyRegion&);
    friend void fully_modify(ModifiedReachTree&, double, std::size_t);

    std::size_t add_node(ModNode n);
    std::size_t add_edge(ModEdge e);
    void remove_subtree(std::size_t node);
    std::size_t fresh_copy_index(std::size_t id_r);

    const std::vector<SplitTrace>& split_log() const { return split_log_; }

private:
    const RacModel* model_;
    const ReachTree* origin_;
    std::vector<ModNode> nodes_;
    std::vector<ModEdge> edges_;
    std::size_t root_ = 0;
    std::map<std::size_t, std::size_t> next_copy_;  // id_r -> next free id_t
    std::vector<SplitTrace> split_log_;
};

struct TransformError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ── Operations ───────────────────────────────────────────────────────────────

/// One copy per reach-tree node (id_t = 0), one edge per reach-tree edge
/// carrying its enabling region.
ModifiedReachTree initial_transform(const RacModel& model, const ReachTree& tree,
                                    const std::vector<ProphecyRegion>& regions);

/// Expose the choice to stay in `node` until the time bound: attach an
/// absorbing stutter child whose region is the up-closed clock projection of
/// the t = t_max slice, intersected with the incoming region. Returns false
/// (and leaves the tree unchanged) when that region is null or the slice is
/// empty.
bool expose(ModifiedReachTree& t, std::size_t node, double t_max);

/// Split the branching at `node` into prophecy cells with a constant enabled
/// child set. Each surviving cell gets a stutter layer node carrying valid
/// copies of its member subtrees; the original children are removed. Returns
/// false without modification when the split is degenerate (a single cell
/// containing every child: the choice is free on the whole region).
bool split(ModifiedReachTree& t, std::size_t node, std::size_t subset_cap = 12,
           SplitTrace* trace = nullptr);

/// Separate >= 2 competing random events at a mixed branching: one layer node
/// per event, restricted to the prophecies where that event expires first.
void separate(ModifiedReachTree& t, std::size_t node);

/// Valid copy of the subtree rooted at `node`, with every copied edge region
/// intersected with `restriction`. Returns the new root index.
std::size_t valid_copy(ModifiedReachTree& t, std::size_t node,
                       const ProphecyRegion& restriction);

/// Worklist rewriting until every branching is stochastic, nondeterministic,
/// or a settled free choice; stay choices are exposed at single-child mixed
/// branchings (case ii).
void fully_modify(ModifiedReachTree& t, double t_max, std::size_t node_cap = 200000);

/// Root-to-leaf jump-label sequences with stutter steps removed, sorted.
std::vector<std::vector<std::size_t>> project_paths(const ModifiedReachTree& t);

/// Same path set for the underlying reach tree.
std::vector<std::vector<std::size_t>> reach_paths(const ReachTree& tree);

/// Graphviz export; stutter edges dashed, regions printed as interval lists
/// when the prophecy space is one-dimensional.
std::string modified_tree_dot(const ModifiedReachTree& t);

}  // namespace racv

#endif  // RACV_TRANSFORM_HPP
