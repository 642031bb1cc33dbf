#ifndef RACV_REACH_HPP
#define RACV_REACH_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "racv/geometry.hpp"
#include "racv/model.hpp"

namespace racv {

// ── Reach tree ───────────────────────────────────────────────────────────────

struct ReachNode {
    std::size_t id = 0;
    std::size_t location = 0;
    ConvexPolytope states;  // over R^d, time-closed, within invariant and t <= t_max
    std::size_t depth = 0;  // jumps from the root
};

struct ReachEdge {
    std::size_t parent = 0;
    std::size_t jump = 0;  // index into RacModel::jumps
    std::size_t child = 0;
};

struct ReachTree {
    std::vector<ReachNode> nodes;  // indexed by id
    std::vector<ReachEdge> edges;
    std::size_t root = 0;

    std::vector<std::size_t> children_of(std::size_t id) const;
    std::optional<std::size_t> parent_of(std::size_t id) const;
    /// Jump index labelling the incoming edge of `id` (nullopt for root).
    std::optional<std::size_t> incoming_jump(std::size_t id) const;
};

struct ReachError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ── Successor computation ────────────────────────────────────────────────────
// Relaxed semantics: expiration-time conditions are dropped; random clocks
// still measure durations of enabledness.

/// Bounded time closure within the location: all states reachable by letting
/// time elapse with rates from the flow rectangle, staying inside the
/// invariant, with the global time capped at t_max.
ConvexPolytope time_successor(const RacModel& model, std::size_t location,
                              const ConvexPolytope& states, double t_max);

/// Discrete successor through one jump: guard intersection, resets, target
/// invariant. May be empty.
ConvexPolytope jump_successor(const RacModel& model, std::size_t jump,
                              const ConvexPolytope& states);

/// Breadth-first bounded reach tree. Nodes in goal locations and nodes at
/// depth j_max are leaves; every other node gets one child per jump with a
/// nonempty time-closed successor. Ids are assigned in creation order.
ReachTree build_reach_tree(const RacModel& model, const QuerySpec& query);

/// Graphviz export (node label "id: location", edge label jump name/event).
std::string reach_tree_dot(const RacModel& model, const ReachTree& tree);

}  // namespace racv

#endif  // RACV_REACH_HPP
