#include "racv/pipeline.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "racv/reach.hpp"

namespace racv {

using nlohmann::ordered_json;

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

const char* mode_name(QueryMode m) {
    switch (m) {
        case QueryMode::Min: return "min";
        case QueryMode::Max: return "max";
        case QueryMode::Both: return "both";
    }
    return "?";
}

}  // namespace

QueryOutcome run_query(const RacModel& model, const QuerySpec& query) {
    QueryOutcome out;

    auto t0 = Clock::now();
    const ReachTree tree = build_reach_tree(model, query);
    const double reach_ms = ms_since(t0);
    out.reach_nodes = tree.nodes.size();

    t0 = Clock::now();
    const auto regions = annotate_tree(model, tree);
    ModifiedReachTree tstar = initial_transform(model, tree, regions);
    fully_modify(tstar, query.time_bound, query.node_cap);
    const double classify_ms = ms_since(t0);
    out.modified_nodes = tstar.alive_node_count();

    std::vector<QueryMode> modes;
    if (query.mode == QueryMode::Both) modes = {QueryMode::Min, QueryMode::Max};
    else modes = {query.mode};

    for (QueryMode mode : modes) {
        ModeResult res;
        res.mode = mode;
        res.timings.reachability_ms = reach_ms;
        res.timings.classification_ms = classify_ms;

        t0 = Clock::now();
        res.region = collect(tstar, query,
                             mode == QueryMode::Min ? CollectionMode::EnforcingMin
                                                    : CollectionMode::AllowingMax);
        res.timings.collection_ms = ms_since(t0);

        t0 = Clock::now();
        res.probability = integrate(res.region, model.distributions, query.samples,
                                    query.seed);
        res.timings.integration_ms = ms_since(t0);
        out.results.push_back(std::move(res));
    }
    return out;
}

std::string file_hash(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return "";
    std::uint64_t h = 1469598103934665603ULL;
    char c;
    while (in.get(c)) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

std::string result_document(const RacModel& model, const std::string& model_path,
                            const QuerySpec& query,
                            const std::vector<std::string>& goal_names,
                            const QueryOutcome& outcome) {
    ordered_json doc;
    doc["model"] = {{"path", model_path}, {"hash", file_hash(model_path)}};
    doc["query"] = {{"goal", goal_names},
                    {"tmax", query.time_bound},
                    {"jmax", query.jump_bound},
                    {"mode", mode_name(query.mode)},
                    {"samples", query.samples},
                    {"seed", query.seed}};
    doc["results"] = ordered_json::array();
    for (const auto& r : outcome.results) {
        ordered_json rj;
        rj["mode"] = mode_name(r.mode);
        rj["probability"] = r.probability.value;
        rj["stat_error"] = r.probability.stat_error;
        rj["method"] =
            r.probability.method == IntegrationMethod::Exact ? "exact" : "monte_carlo";
        if (r.probability.method == IntegrationMethod::MonteCarlo)
            rj["samples_used"] = r.probability.samples_used;
        rj["region"] = prophecy_to_string(r.region);
        rj["region_parts"] = r.region.region.parts().size();
        rj["tree"] = {{"reach_nodes", outcome.reach_nodes},
                      {"modified_nodes", outcome.modified_nodes}};
        rj["timings_ms"] = {{"reachability", r.timings.reachability_ms},
                            {"classification", r.timings.classification_ms},
                            {"collection", r.timings.collection_ms},
                            {"integration", r.timings.integration_ms}};
        doc["results"].push_back(rj);
    }
    (void)model;
    return doc.dump(2);
}

std::string result_text(const RacModel& model, const QuerySpec& query,
                        const std::vector<std::string>& goal_names,
                        const QueryOutcome& outcome) {
    std::ostringstream os;
    os << "goal:";
    for (const auto& g : goal_names) os << " " << g;
    os << "  tmax=" << query.time_bound << "  jmax=" << query.jump_bound << "\n";
    os << "reach tree: " << outcome.reach_nodes
       << " nodes, modified tree: " << outcome.modified_nodes << " nodes\n";
    for (const auto& r : outcome.results) {
        os << mode_name(r.mode) << " probability = " << r.probability.value;
        if (r.probability.method == IntegrationMethod::MonteCarlo)
            os << " +- " << r.probability.stat_error << " (monte carlo, "
               << r.probability.samples_used << " samples)";
        else
            os << " (exact)";
        os << "\n  region: " << prophecy_to_string(r.region) << "\n";
    }
    (void)model;
    return os.str();
}

std::string tree_dot(const RacModel& model, const QuerySpec& query, TreeStage stage) {
    const ReachTree tree = build_reach_tree(model, query);
    if (stage == TreeStage::Raw) return reach_tree_dot(model, tree);
    const auto regions = annotate_tree(model, tree);
    ModifiedReachTree t = initial_transform(model, tree, regions);
    if (stage == TreeStage::Full) fully_modify(t, query.time_bound, query.node_cap);
    return modified_tree_dot(t);
}

}  // namespace racv
