#ifndef RACV_PIPELINE_HPP
#define RACV_PIPELINE_HPP

#include <string>

#include "racv/collect.hpp"
#include "racv/model.hpp"
#include "racv/probability.hpp"
#include "racv/transform.hpp"

namespace racv {

// ── End-to-end query ─────────────────────────────────────────────────────────

struct PhaseTimings {
    double reachability_ms = 0.0;
    double classification_ms = 0.0;
    double collection_ms = 0.0;
    double integration_ms = 0.0;
};

struct ModeResult {
    QueryMode mode = QueryMode::Min;
    ProbabilityResult probability;
    ProphecyRegion region;
    PhaseTimings timings;
};

struct QueryOutcome {
    std::size_t reach_nodes = 0;
    std::size_t modified_nodes = 0;
    std::vector<ModeResult> results;  // one per requested mode
};

/// Reach tree -> enabling regions -> initial transformation -> full
/// modification -> collection -> integration.
QueryOutcome run_query(const RacModel& model, const QuerySpec& query);

/// Result document as JSON text (keys: model, query, results[...]).
std::string result_document(const RacModel& model, const std::string& model_path,
                            const QuerySpec& query,
                            const std::vector<std::string>& goal_names,
                            const QueryOutcome& outcome);

/// Plain-text rendering of the same information.
std::string result_text(const RacModel& model, const QuerySpec& query,
                        const std::vector<std::string>& goal_names,
                        const QueryOutcome& outcome);

/// FNV-1a hash of a file's bytes, hex-encoded ("" if unreadable).
std::string file_hash(const std::string& path);

enum class TreeStage { Raw, Initial, Full };

/// DOT export of the requested pipeline stage.
std::string tree_dot(const RacModel& model, const QuerySpec& query, TreeStage stage);

}  // namespace racv

#endif  // RACV_PIPELINE_HPP
