#include "racv/reach.hpp"

#include <deque>
#include <sstream>

namespace racv {

std::vector<std::size_t> ReachTree::children_of(std::size_t id) const {
    std::vector<std::size_t> out;
    for (const auto& e : edges)
        if (e.parent == id) out.push_back(e.child);
    return out;
}

std::optional<std::size_t> ReachTree::parent_of(std::size_t id) const {
    for (const auto& e : edges)
        if (e.child == id) return e.parent;
    return std::nullopt;
}

std::optional<std::size_t> ReachTree::incoming_jump(std::size_t id) const {
    for (const auto& e : edges)
        if (e.child == id) return e.jump;
    return std::nullopt;
}

namespace {

ConvexPolytope rectangle_polytope(const Rectangle& rect) {
    ConvexPolytope p(rect.size());
    for (std::size_t i = 0; i < rect.size(); ++i)
        p.add_interval(i, rect[i].lower, rect[i].upper);
    return p;
}

}  // namespace

ConvexPolytope time_successor(const RacModel& model, std::size_t location,
                              const ConvexPolytope& states, double t_max) {
    const std::size_t d = model.variables.dim();
    const std::size_t t = model.variables.time_index;
    const Location& loc = model.locations[location];

    // Coordinates 0..d-1 are the pre state, d..2d-1 the post state. Since the
    // flow of t is [1,1], the elapsed time equals t' - t, which turns each
    // rectangular rate bound into a linear constraint.
    ConvexPolytope sys(2 * d);
    for (const auto& h : states.constraints()) {
        std::vector<double> c = h.coeffs;
        c.resize(2 * d, 0.0);
        sys.add(std::move(c), h.bound);
    }
    {
        std::vector<double> c(2 * d, 0.0);  // t' >= t
        c[t] = 1.0;
        c[d + t] = -1.0;
        sys.add(std::move(c), 0.0);
    }
    for (std::size_t i = 0; i < d; ++i) {
        if (i == t) continue;
        const IntervalBound rate = loc.flow[i];
        if (rate.upper < kPosInf) {
            // x'_i - x_i <= b * (t' - t)
            std::vector<double> c(2 * d, 0.0);
            c[d + i] = 1.0;
            c[i] = -1.0;
            c[d + t] = -rate.upper;
            c[t] = rate.upper;
            sys.add(std::move(c), 0.0);
        }
        if (rate.lower > kNegInf) {
            // a * (t' - t) <= x'_i - x_i
            std::vector<double> c(2 * d, 0.0);
            c[d + i] = -1.0;
            c[i] = 1.0;
            c[d + t] = rate.lower;
            c[t] = -rate.lower;
            sys.add(std::move(c), 0.0);
        }
    }
    for (std::size_t i = 0; i < d; ++i) {
        std::vector<double> c(2 * d, 0.0);
        if (loc.invariant[i].upper < kPosInf) {
            c[d + i] = 1.0;
            sys.add(c, loc.invariant[i].upper);
            c[d + i] = 0.0;
        }
        if (loc.invariant[i].lower > kNegInf) {
            c[d + i] = -1.0;
            sys.add(c, -loc.invariant[i].lower);
        }
    }
    {
        std::vector<double> c(2 * d, 0.0);
        c[d + t] = 1.0;
        sys.add(std::move(c), t_max);
    }

    std::set<std::size_t> pre;
    for (std::size_t i = 0; i < d; ++i) pre.insert(i);
    return canonicalize(eliminate(sys, pre));
}

ConvexPolytope jump_successor(const RacModel& model, std::size_t jump,
                              const ConvexPolytope& states) {
    const std::size_t d = model.variables.dim();
    const Jump& j = model.jumps[jump];

    ConvexPolytope v = intersect(states, rectangle_polytope(j.guard));
    if (is_empty(v)) return v;

    std::set<std::size_t> reset_dims;
    for (std::size_t i = 0; i < d; ++i)
        if (!j.reset[i].identity) reset_dims.insert(i);
    if (!reset_dims.empty()) {
        // Drop the reset coordinates and re-pin them to their reset interval.
        ConvexPolytope projected = eliminate(v, reset_dims);
        ConvexPolytope out(d);
        std::vector<std::size_t> survivors;
        for (std::size_t i = 0; i < d; ++i)
            if (!reset_dims.count(i)) survivors.push_back(i);
        for (const auto& h : projected.constraints()) {
            std::vector<double> c(d, 0.0);
            for (std::size_t k = 0; k < survivors.size(); ++k) c[survivors[k]] = h.coeffs[k];
            out.add(std::move(c), h.bound);
        }
        for (std::size_t i : reset_dims)
            out.add_interval(i, j.reset[i].interval.lower, j.reset[i].interval.upper);
        v = out;
    }
    v = intersect(v, rectangle_polytope(model.locations[j.target].invariant));
    return v;
}

ReachTree build_reach_tree(const RacModel& model, const QuerySpec& query) {
    ReachTree tree;
    const Location& init_loc = model.locations[model.initial_location];
    if (!init_loc.init) throw ReachError("initial location has no initial states");

    ConvexPolytope init = rectangle_polytope(*init_loc.init);
    ReachNode root;
    root.id = 0;
    root.location = model.initial_location;
    root.states = time_successor(model, root.location, init, query.time_bound);
    root.depth = 0;
    tree.nodes.push_back(root);
    tree.root = 0;

    std::deque<std::size_t> frontier{0};
    while (!frontier.empty()) {
        const std::size_t id = frontier.front();
        frontier.pop_front();
        const ReachNode node = tree.nodes[id];
        if (query.is_goal(node.location) || node.depth == query.jump_bound) continue;
        for (std::size_t jk = 0; jk < model.jumps.size(); ++jk) {
            const Jump& jump = model.jumps[jk];
            if (jump.source != node.location) continue;
            ConvexPolytope post = jump_successor(model, jk, node.states);
            if (is_empty(post)) continue;
            ConvexPolytope closed = time_successor(model, jump.target, post, query.time_bound);
            if (is_empty(closed)) continue;
            if (tree.nodes.size() >= query.node_cap)
                throw ReachError("reach tree exceeds node cap (" +
                                 std::to_string(query.node_cap) + ")");
            ReachNode child;
            child.id = tree.nodes.size();
            child.location = jump.target;
            child.states = std::move(closed);
            child.depth = node.depth + 1;
            tree.edges.push_back({id, jk, child.id});
            tree.nodes.push_back(std::move(child));
            frontier.push_back(tree.nodes.size() - 1);
        }
    }
    return tree;
}

std::string reach_tree_dot(const RacModel& model, const ReachTree& tree) {
    std::ostringstream os;
    os << "digraph reachtree {\n  node [shape=box];\n";
    for (const auto& n : tree.nodes)
        os << "  n" << n.id << " [label=\"" << n.id << ": "
           << model.locations[n.location].name << "\"];\n";
    for (const auto& e : tree.edges)
        os << "  n" << e.parent << " -> n" << e.child << " [label=\""
           << model.jumps[e.jump].label << "\"];\n";
    os << "}\n";
    return os.str();
}

}  // namespace racv
