#include "racv/collect.hpp"

namespace racv {

namespace {

ProphecyRegion collect_node(const ModifiedReachTree& t, const QuerySpec& query,
                            CollectionMode mode, std::size_t node) {
    const std::size_t d_r = t.model().variables.random_dim();
    const auto pos = t.positive_child_edges(node);

    if (pos.empty()) {
        if (query.is_goal(t.nodes()[node].location)) return t.incoming_region(node);
        return ProphecyRegion::empty(d_r);
    }

    std::vector<BranchEdge> edges;
    edges.reserve(pos.size());
    for (std::size_t k : pos) {
        const auto& e = t.edges()[k];
        const bool stoch = e.jump && t.model().jumps[*e.jump].event.has_value();
        edges.push_back({e.region, stoch});
    }
    const BranchClass cls = classify(edges, t.incoming_region(node));
    if (cls.mixed() && !t.nodes()[node].settled)
        throw CollectError("tree not fully modified: mixed branching at node (" +
                           std::to_string(t.nodes()[node].id_r) + "," +
                           std::to_string(t.nodes()[node].id_t) + ")");

    const bool use_union =
        mode == CollectionMode::AllowingMax || cls.tag == BranchTag::Stochastic;

    ProphecyRegion acc = collect_node(t, query, mode, t.edges()[pos.front()].child);
    for (std::size_t i = 1; i < pos.size(); ++i) {
        const ProphecyRegion sub = collect_node(t, query, mode, t.edges()[pos[i]].child);
        acc = use_union ? prophecy_union(acc, sub) : prophecy_intersect(acc, sub);
    }
    return acc;
}

}  // namespace

ProphecyRegion collect(const ModifiedReachTree& tstar, const QuerySpec& query,
                       CollectionMode mode) {
    return collect_node(tstar, query, mode, tstar.root());
}

bool check_subset(const ProphecyRegion& min_region, const ProphecyRegion& max_region) {
    return prophecy_subset(min_region, max_region);
}

}  // namespace racv
