#include "racv/prophecy.hpp"

namespace racv {

std::string BranchClass::to_string() const {
    switch (tag) {
        case BranchTag::Stochastic: return "stochastic";
        case BranchTag::Nondeterministic: return "nondeterministic";
        case BranchTag::Mixed:
            switch (*mixed_case) {
                case MixedCase::IA: return "mixed(i)(a)";
                case MixedCase::IB: return "mixed(i)(b)";
                case MixedCase::IC: return "mixed(i)(c)";
                case MixedCase::II: return "mixed(ii)";
            }
    }
    return "?";
}

BranchClass classify(const std::vector<BranchEdge>& positive_edges,
                     const ProphecyRegion& incoming) {
    const std::size_t n = positive_edges.size();
    if (n == 0) throw ClassifyError("classify: no positive-probability children");

    if (n == 1) {
        const auto& e = positive_edges.front();
        if (e.stochastic) return {BranchTag::Stochastic, std::nullopt};
        if (prophecy_equal(e.region, incoming))
            return {BranchTag::Nondeterministic, std::nullopt};
        if (prophecy_subset(e.region, incoming))
            return {BranchTag::Mixed, MixedCase::II};
        throw ClassifyError("classify: single child region exceeds incoming region");
    }

    bool all_disjoint = true;
    bool any_overlap = false;
    bool all_pairs_equal = true;
    for (std::size_t i = 0; i < n && (all_disjoint || all_pairs_equal); ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool disjoint =
                prophecy_disjoint(positive_edges[i].region, positive_edges[j].region);
            if (!disjoint) {
                all_disjoint = false;
                any_overlap = true;
            }
            if (!prophecy_equal(positive_edges[i].region, positive_edges[j].region))
                all_pairs_equal = false;
        }
    }
    if (all_disjoint) return {BranchTag::Stochastic, std::nullopt};

    bool any_stochastic = false;
    bool all_nonstochastic = true;
    for (const auto& e : positive_edges) {
        if (e.stochastic) {
            any_stochastic = true;
            all_nonstochastic = false;
        }
    }
    bool all_equal_incoming = true;
    bool all_proper_subsets = true;
    for (const auto& e : positive_edges) {
        if (!prophecy_equal(e.region, incoming)) all_equal_incoming = false;
        if (!(prophecy_subset(e.region, incoming) && !prophecy_equal(e.region, incoming)))
            all_proper_subsets = false;
    }

    if (all_nonstochastic && all_equal_incoming)
        return {BranchTag::Nondeterministic, std::nullopt};

    if (any_overlap) {
        if (!all_pairs_equal) return {BranchTag::Mixed, MixedCase::IA};
        if (all_equal_incoming && any_stochastic) return {BranchTag::Mixed, MixedCase::IB};
        if (all_proper_subsets) return {BranchTag::Mixed, MixedCase::IC};
        throw ClassifyError("classify: overlapping branching matches no mixed sub-case");
    }
    throw ClassifyError("classify: branching matches no definition");
}

std::map<std::size_t, std::set<std::size_t>> expired_along_paths(const RacModel& model,
                                                                 const ReachTree& tree) {
    std::map<std::size_t, std::set<std::size_t>> expired;
    expired[tree.root] = {};
    // Ids increase from parents to children, so a single pass suffices.
    std::vector<const ReachEdge*> by_child(tree.nodes.size(), nullptr);
    for (const auto& e : tree.edges) by_child[e.child] = &e;
    for (const auto& node : tree.nodes) {
        if (node.id == tree.root) continue;
        const ReachEdge* in = by_child[node.id];
        auto set = expired.at(in->parent);
        if (const auto ev = model.jumps[in->jump].event) set.insert(*ev);
        expired[node.id] = std::move(set);
    }
    return expired;
}

ProphecyRegion project_to_clocks(const RacModel& model, const ConvexPolytope& states) {
    std::set<std::size_t> drop;
    for (std::size_t i = 0; i < model.variables.dim(); ++i)
        if (!model.variables.is_random(i)) drop.insert(i);
    ConvexPolytope proj = eliminate(states, drop);
    if (is_empty(proj)) return ProphecyRegion::empty(model.variables.random_dim());
    return ProphecyRegion(Region(proj));
}

ProphecyRegion enabling_region(const RacModel& model, const ReachTree& tree,
                               const ReachEdge& edge,
                               const std::set<std::size_t>& expired) {
    const Jump& jump = model.jumps[edge.jump];
    ConvexPolytope guard(model.variables.dim());
    for (std::size_t i = 0; i < model.variables.dim(); ++i)
        guard.add_interval(i, jump.guard[i].lower, jump.guard[i].upper);
    ConvexPolytope w = intersect(tree.nodes[edge.parent].states, guard);
    if (is_empty(w)) return ProphecyRegion::empty(model.variables.random_dim());

    ProphecyRegion proj = project_to_clocks(model, w);

    // Pinned clocks: those already expired plus the one expiring here.
    // Every other clock only bounds the prophecy from below.
    std::set<std::size_t> pinned = expired;
    if (jump.event) pinned.insert(*jump.event);
    std::set<std::size_t> open_slots;
    for (std::size_t slot = 0; slot < model.variables.random_dim(); ++slot)
        if (!pinned.count(model.variables.random_indices[slot])) open_slots.insert(slot);
    if (open_slots.empty() || !proj.region.has_parts()) return proj;

    Region out(proj.dimension());
    for (const auto& part : proj.region.parts())
        out.add_part(canonicalize(up_closure(part, open_slots)));
    return ProphecyRegion(std::move(out));
}

std::vector<ProphecyRegion> annotate_tree(const RacModel& model, const ReachTree& tree) {
    const auto expired = expired_along_paths(model, tree);
    std::vector<ProphecyRegion> regions;
    regions.reserve(tree.edges.size());
    for (const auto& e : tree.edges)
        regions.push_back(enabling_region(model, tree, e, expired.at(e.parent)));
    return regions;
}

std::vector<std::size_t> positive_children(const ReachTree& tree,
                                           const std::vector<ProphecyRegion>& regions,
                                           std::size_t node) {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < tree.edges.size(); ++k)
        if (tree.edges[k].parent == node && !regions[k].is_null())
            out.push_back(tree.edges[k].child);
    return out;
}

}  // namespace racv
