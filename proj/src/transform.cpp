#include "racv/transform.hpp"

#include <algorithm>
#include <sstream>

namespace racv {

// ── ModifiedReachTree basics ─────────────────────────────────────────────────

ModifiedReachTree::ModifiedReachTree(const RacModel& model, const ReachTree& origin)
    : model_(&model), origin_(&origin) {}

const ConvexPolytope& ModifiedReachTree::states_of(std::size_t node) const {
    return origin_->nodes[nodes_[node].id_r].states;
}

std::vector<std::size_t> ModifiedReachTree::child_edges(std::size_t node) const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < edges_.size(); ++k)
        if (edges_[k].alive && edges_[k].parent == node && nodes_[edges_[k].child].alive)
            out.push_back(k);
    return out;
}

std::optional<std::size_t> ModifiedReachTree::incoming_edge(std::size_t node) const {
    for (std::size_t k = 0; k < edges_.size(); ++k)
        if (edges_[k].alive && edges_[k].child == node) return k;
    return std::nullopt;
}

ProphecyRegion ModifiedReachTree::incoming_region(std::size_t node) const {
    const auto in = incoming_edge(node);
    if (!in) return ProphecyRegion::full(model_->variables.random_dim());
    return edges_[*in].region;
}

std::size_t ModifiedReachTree::alive_node_count() const {
    std::size_t n = 0;
    for (const auto& node : nodes_)
        if (node.alive) ++n;
    return n;
}

std::vector<std::size_t> ModifiedReachTree::positive_child_edges(std::size_t node) const {
    std::vector<std::size_t> out;
    for (std::size_t k : child_edges(node))
        if (!edges_[k].region.is_null()) out.push_back(k);
    return out;
}

std::size_t ModifiedReachTree::add_node(ModNode n) {
    nodes_.push_back(std::move(n));
    return nodes_.size() - 1;
}

std::size_t ModifiedReachTree::add_edge(ModEdge e) {
    edges_.push_back(std::move(e));
    return edges_.size() - 1;
}

std::size_t ModifiedReachTree::fresh_copy_index(std::size_t id_r) {
    auto it = next_copy_.find(id_r);
    if (it == next_copy_.end()) it = next_copy_.emplace(id_r, 0).first;
    return it->second++;
}

void ModifiedReachTree::remove_subtree(std::size_t node) {
    nodes_[node].alive = false;
    for (std::size_t k = 0; k < edges_.size(); ++k) {
        if (!edges_[k].alive) continue;
        if (edges_[k].child == node) edges_[k].alive = false;
        if (edges_[k].parent == node) {
            edges_[k].alive = false;
            remove_subtree(edges_[k].child);
        }
    }
}

// ── Initial transformation ───────────────────────────────────────────────────

ModifiedReachTree initial_transform(const RacModel& model, const ReachTree& tree,
                                    const std::vector<ProphecyRegion>& regions) {
    if (regions.size() != tree.edges.size())
        throw TransformError("initial_transform: every edge needs a region annotation");
    ModifiedReachTree t(model, tree);
    const auto expired = expired_along_paths(model, tree);
    std::vector<std::size_t> index_of(tree.nodes.size());
    for (const auto& n : tree.nodes) {
        ModNode mn;
        mn.id_r = n.id;
        mn.id_t = t.fresh_copy_index(n.id);
        mn.location = n.location;
        mn.expired = expired.at(n.id);
        index_of[n.id] = t.add_node(std::move(mn));
    }
    t.root_ = index_of[tree.root];
    for (std::size_t k = 0; k < tree.edges.size(); ++k) {
        ModEdge e;
        e.parent = index_of[tree.edges[k].parent];
        e.child = index_of[tree.edges[k].child];
        e.jump = tree.edges[k].jump;
        e.region = regions[k];
        t.add_edge(std::move(e));
    }
    return t;
}

// ── Valid copies ─────────────────────────────────────────────────────────────

std::size_t valid_copy(ModifiedReachTree& t, std::size_t node,
                       const ProphecyRegion& restriction) {
    const ModNode& src = t.nodes_[node];
    ModNode copy;
    copy.id_r = src.id_r;
    copy.id_t = t.fresh_copy_index(src.id_r);
    copy.location = src.location;
    copy.expired = src.expired;
    copy.exposed = src.exposed;
    copy.settled = src.settled;
    const std::size_t new_index = t.add_node(std::move(copy));
    for (std::size_t k : t.child_edges(node)) {
        const ModEdge edge = t.edges_[k];  // copy: recursion appends to edges_
        const std::size_t child_copy = valid_copy(t, edge.child, restriction);
        ModEdge e;
        e.parent = new_index;
        e.child = child_copy;
        e.jump = edge.jump;
        e.region = prophecy_intersect(edge.region, restriction);
        t.add_edge(std::move(e));
    }
    return new_index;
}

// ── Exposing ─────────────────────────────────────────────────────────────────

bool expose(ModifiedReachTree& t, std::size_t node, double t_max) {
    const RacModel& model = t.model();
    const std::size_t d = model.variables.dim();
    ConvexPolytope slice = t.states_of(node);
    {
        std::vector<double> c(d, 0.0);
        c[model.variables.time_index] = -1.0;
        slice.add(std::move(c), -t_max);  // t >= t_max (t <= t_max already holds)
    }
    if (is_empty(slice)) return false;

    ProphecyRegion stay = project_to_clocks(model, slice);
    std::set<std::size_t> open_slots;
    for (std::size_t slot = 0; slot < model.variables.random_dim(); ++slot)
        if (!t.nodes_[node].expired.count(model.variables.random_indices[slot]))
            open_slots.insert(slot);
    if (!open_slots.empty() && stay.region.has_parts()) {
        Region up(stay.dimension());
        for (const auto& part : stay.region.parts())
            up.add_part(canonicalize(up_closure(part, open_slots)));
        stay = ProphecyRegion(std::move(up));
    }
    stay = prophecy_intersect(stay, t.incoming_region(node));
    if (stay.is_null()) return false;

    const ModNode& src = t.nodes_[node];
    ModNode mn;
    mn.id_r = src.id_r;
    mn.id_t = t.fresh_copy_index(src.id_r);
    mn.location = src.location;
    mn.expired = src.expired;
    const std::size_t stay_index = t.add_node(std::move(mn));
    ModEdge e;
    e.parent = node;
    e.child = stay_index;
    e.jump = std::nullopt;
    e.region = std::move(stay);
    t.add_edge(std::move(e));
    t.nodes_[node].exposed = true;
    return true;
}

// ── Splitting ────────────────────────────────────────────────────────────────

bool split(ModifiedReachTree& t, std::size_t node, std::size_t subset_cap,
           SplitTrace* trace) {
    const std::vector<std::size_t> pos = t.positive_child_edges(node);
    const std::size_t n = pos.size();
    if (n == 0) throw TransformError("split: branching has no positive children");
    if (n > subset_cap)
        throw TransformError("split: " + std::to_string(n) +
                             " children exceed the subset enumeration cap");

    const std::size_t d_r = t.model().variables.random_dim();
    std::vector<ProphecyRegion> child_regions;
    child_regions.reserve(n);
    for (std::size_t k : pos) child_regions.push_back(t.edges_[k].region);

    // Cells ordered by increasing cardinality, then by bitmask value.
    std::vector<std::uint32_t> masks;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) masks.push_back(mask);
    std::stable_sort(masks.begin(), masks.end(), [](std::uint32_t a, std::uint32_t b) {
        return __builtin_popcount(a) < __builtin_popcount(b);
    });

    struct Cell {
        std::uint32_t mask;
        ProphecyRegion region;
    };
    std::vector<Cell> cells;
    for (std::uint32_t mask : masks) {
        ProphecyRegion cell = ProphecyRegion::full(d_r);
        for (std::size_t j = 0; j < n; ++j)
            if (mask & (1u << j)) cell = prophecy_intersect(cell, child_regions[j]);
        for (std::size_t j = 0; j < n; ++j)
            if (!(mask & (1u << j))) cell = prophecy_difference(cell, child_regions[j]);
        if (!cell.is_null()) cells.push_back({mask, std::move(cell)});
    }

    const std::uint32_t all = (1u << n) - 1;
    if (cells.size() == 1 && cells.front().mask == all) {
        // Every child is enabled on the whole region: the split would only
        // insert a stutter layer around the same branching.
        return false;
    }

    if (trace) {
        trace->node = node;
        trace->child_regions = child_regions;
        for (const auto& cell : cells) {
            trace->cells.push_back(cell.region);
            std::vector<std::size_t> members;
            for (std::size_t j = 0; j < n; ++j)
                if (cell.mask & (1u << j)) members.push_back(j);
            trace->members.push_back(std::move(members));
        }
    }

    const ModNode proto = t.nodes_[node];
    for (const auto& cell : cells) {
        ModNode layer;
        layer.id_r = proto.id_r;
        layer.id_t = t.fresh_copy_index(proto.id_r);
        layer.location = proto.location;
        layer.expired = proto.expired;
        const std::size_t layer_index = t.add_node(std::move(layer));
        ModEdge tau;
        tau.parent = node;
        tau.child = layer_index;
        tau.jump = std::nullopt;
        tau.region = cell.region;
        t.add_edge(std::move(tau));
        for (std::size_t j = 0; j < n; ++j) {
            if (!(cell.mask & (1u << j))) continue;
            const ModEdge original = t.edges_[pos[j]];
            const std::size_t copy_root = valid_copy(t, original.child, cell.region);
            ModEdge e;
            e.parent = layer_index;
            e.child = copy_root;
            e.jump = original.jump;
            e.region = prophecy_intersect(original.region, cell.region);
            t.add_edge(std::move(e));
        }
    }
    for (std::size_t k : pos) {
        t.edges_[k].alive = false;
        t.remove_subtree(t.edges_[k].child);
    }
    return true;
}

// ── Separating ───────────────────────────────────────────────────────────────

void separate(ModifiedReachTree& t, std::size_t node) {
    const RacModel& model = t.model();
    const std::vector<std::size_t> pos = t.positive_child_edges(node);
    std::vector<std::size_t> events;  // random-clock variable indices, ordered
    for (std::size_t k : pos) {
        const auto& e = t.edges_[k];
        if (!e.jump) continue;
        const auto ev = model.jumps[*e.jump].event;
        if (ev && std::find(events.begin(), events.end(), *ev) == events.end())
            events.push_back(*ev);
    }
    std::sort(events.begin(), events.end());
    if (events.size() < 2)
        throw TransformError("separate: needs at least two competing random events");

    const std::size_t d_r = model.variables.random_dim();
    const ModNode proto = t.nodes_[node];
    const ProphecyRegion incoming = t.incoming_region(node);

    for (std::size_t winner : events) {
        // {p | p(winner) <= p(r') for every other competing event r'}
        ConvexPolytope order(d_r);
        const std::size_t wslot = model.clock_slot(winner);
        for (std::size_t other : events) {
            if (other == winner) continue;
            std::vector<double> c(d_r, 0.0);
            c[wslot] = 1.0;
            c[model.clock_slot(other)] = -1.0;
            order.add(std::move(c), 0.0);
        }
        const ProphecyRegion winner_region{Region(order)};

        ModNode layer;
        layer.id_r = proto.id_r;
        layer.id_t = t.fresh_copy_index(proto.id_r);
        layer.location = proto.location;
        layer.expired = proto.expired;
        const std::size_t layer_index = t.add_node(std::move(layer));
        ModEdge tau;
        tau.parent = node;
        tau.child = layer_index;
        tau.jump = std::nullopt;
        tau.region = prophecy_intersect(incoming, winner_region);
        t.add_edge(std::move(tau));

        for (std::size_t k : pos) {
            const ModEdge original = t.edges_[k];
            const std::size_t copy_root = valid_copy(t, original.child, winner_region);
            ModEdge e;
            e.parent = layer_index;
            e.child = copy_root;
            e.jump = original.jump;
            e.region = prophecy_intersect(original.region, winner_region);
            t.add_edge(std::move(e));
        }
    }
    for (std::size_t k : pos) {
        t.edges_[k].alive = false;
        t.remove_subtree(t.edges_[k].child);
    }
}

// ── Full modification ────────────────────────────────────────────────────────

namespace {

std::vector<BranchEdge> branch_edges(const ModifiedReachTree& t, std::size_t node,
                                     const std::vector<std::size_t>& pos) {
    std::vector<BranchEdge> out;
    out.reserve(pos.size());
    for (std::size_t k : pos) {
        const auto& e = t.edges()[k];
        const bool stoch = e.jump && t.model().jumps[*e.jump].event.has_value();
        out.push_back({e.region, stoch});
    }
    return out;
}

std::size_t competing_event_count(const ModifiedReachTree& t, std::size_t node,
                                  const std::vector<std::size_t>& pos) {
    std::set<std::size_t> events;
    for (std::size_t k : pos) {
        const auto& e = t.edges()[k];
        if (!e.jump) continue;
        if (const auto ev = t.model().jumps[*e.jump].event) events.insert(*ev);
    }
    return events.size();
}

}  // namespace

void fully_modify(ModifiedReachTree& t, double t_max, std::size_t node_cap) {
    t.split_log_.clear();
    // Worklist keyed by (id_r, id_t): deterministic processing order; fresh
    // copies are enqueued as they appear.
    std::set<std::pair<std::size_t, std::size_t>> work;
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> index_of;
    auto enqueue_all = [&](std::size_t from) {
        for (std::size_t i = from; i < t.nodes_.size(); ++i) {
            if (!t.nodes_[i].alive) continue;
            const auto key = std::make_pair(t.nodes_[i].id_r, t.nodes_[i].id_t);
            index_of[key] = i;
            work.insert(key);
        }
    };
    enqueue_all(0);

    while (!work.empty()) {
        if (t.nodes_.size() > node_cap)
            throw TransformError("modified reach tree exceeds node cap (" +
                                 std::to_string(node_cap) + ")");
        const auto key = *work.begin();
        work.erase(work.begin());
        const std::size_t node = index_of.at(key);
        if (!t.nodes_[node].alive) continue;

        const std::size_t watermark = t.nodes_.size();
        std::vector<std::size_t> pos = t.positive_child_edges(node);
        if (pos.empty()) continue;

        ProphecyRegion incoming = t.incoming_region(node);
        BranchClass cls = classify(branch_edges(t, node, pos), incoming);

        // The stay choice matters exactly where a single restricted child
        // leaves the scheduler the alternative of waiting out the horizon.
        if (cls.mixed() && cls.mixed_case == MixedCase::II && !t.nodes_[node].exposed) {
            if (expose(t, node, t_max)) {
                pos = t.positive_child_edges(node);
                cls = classify(branch_edges(t, node, pos), incoming);
            }
        }

        if (cls.mixed()) {
            if (competing_event_count(t, node, pos) >= 2) {
                separate(t, node);
            } else {
                SplitTrace trace;
                if (split(t, node, 12, &trace)) {
                    t.split_log_.push_back(std::move(trace));
                } else {
                    // Degenerate: every child is enabled on the whole incoming
                    // region, so the choice between them is free.
                    t.nodes_[node].settled = true;
                }
            }
        }
        enqueue_all(watermark);
    }
}

// ── Path projection ──────────────────────────────────────────────────────────

namespace {

void collect_paths(const ModifiedReachTree& t, std::size_t node,
                   std::vector<std::size_t>& prefix,
                   std::vector<std::vector<std::size_t>>& out) {
    const auto kids = t.child_edges(node);
    if (kids.empty()) {
        out.push_back(prefix);
        return;
    }
    for (std::size_t k : kids) {
        const auto& e = t.edges()[k];
        if (e.jump) prefix.push_back(*e.jump);
        collect_paths(t, e.child, prefix, out);
        if (e.jump) prefix.pop_back();
    }
}

}  // namespace

std::vector<std::vector<std::size_t>> project_paths(const ModifiedReachTree& t) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> prefix;
    collect_paths(t, t.root(), prefix, out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

void collect_reach_paths(const ReachTree& tree, std::size_t node,
                         std::vector<std::size_t>& prefix,
                         std::vector<std::vector<std::size_t>>& out) {
    bool leaf = true;
    for (const auto& e : tree.edges) {
        if (e.parent != node) continue;
        leaf = false;
        prefix.push_back(e.jump);
        collect_reach_paths(tree, e.child, prefix, out);
        prefix.pop_back();
    }
    if (leaf) out.push_back(prefix);
}

}  // namespace

std::vector<std::vector<std::size_t>> reach_paths(const ReachTree& tree) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> prefix;
    collect_reach_paths(tree, tree.root, prefix, out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::string modified_tree_dot(const ModifiedReachTree& t) {
    const RacModel& model = t.model();
    std::ostringstream os;
    os << "digraph modtree {\n  node [shape=box];\n";
    for (std::size_t i = 0; i < t.nodes().size(); ++i) {
        const auto& n = t.nodes()[i];
        if (!n.alive) continue;
        os << "  n" << i << " [label=\"(" << n.id_r << "," << n.id_t << ") "
           << model.locations[n.location].name << "\"];\n";
    }
    for (const auto& e : t.edges()) {
        if (!e.alive || !t.nodes()[e.parent].alive || !t.nodes()[e.child].alive) continue;
        os << "  n" << e.parent << " -> n" << e.child << " [label=\"";
        if (e.jump) os << model.jumps[*e.jump].label;
        else os << "stay";
        os << "\\n" << prophecy_to_string(e.region) << "\"";
        if (e.stutter()) os << ", style=dashed";
        os << "];\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace racv
