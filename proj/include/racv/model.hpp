#ifndef RACV_MODEL_HPP
#define RACV_MODEL_HPP

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace racv {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kPosInf = std::numeric_limits<double>::infinity();

// ── Intervals and rectangles ─────────────────────────────────────────────────

struct IntervalBound {
    double lower = kNegInf;
    double upper = kPosInf;

    static IntervalBound all() { return {}; }
    static IntervalBound point(double v) { return {v, v}; }
    static IntervalBound of(double lo, double hi) { return {lo, hi}; }

    bool is_full() const { return lower == kNegInf && upper == kPosInf; }
    bool is_point() const { return lower == upper; }
    bool is_empty() const { return lower > upper; }
    bool contains(double v) const { return v >= lower && v <= upper; }
};

/// Axis-aligned rectangle: one interval per variable.
using Rectangle = std::vector<IntervalBound>;

// ── Variable space ───────────────────────────────────────────────────────────
// Ordered variables; a subset are random clocks; the distinguished global time
// variable t sits at time_index (injected by the parser, always last).

struct VariableSpace {
    std::vector<std::string> names;
    std::vector<std::size_t> random_indices;
    std::size_t time_index = 0;

    std::size_t dim() const { return names.size(); }
    std::size_t random_dim() const { return random_indices.size(); }
    bool is_random(std::size_t i) const;
    std::optional<std::size_t> index_of(const std::string& name) const;
};

// ── Distributions ────────────────────────────────────────────────────────────

enum class DistKind { Uniform, FoldedNormal, Exponential };

struct DistributionSpec {
    DistKind kind = DistKind::Uniform;
    double a = 0.0, b = 1.0;  // uniform [a, b]
    double mu = 0.0, sigma = 1.0;
    double lambda = 1.0;

    static DistributionSpec uniform(double a, double b);
    static DistributionSpec folded_normal(double mu, double sigma);
    static DistributionSpec exponential(double lambda);

    double density(double x) const;
    double cdf(double x) const;
    /// Inverse CDF; u in [0, 1).
    double quantile(double u) const;
    IntervalBound support() const;
    std::string to_string() const;
};

// ── Automaton pieces ─────────────────────────────────────────────────────────

struct Location {
    std::string name;
    Rectangle invariant;
    Rectangle flow;
    std::optional<Rectangle> init;
};

struct ResetEntry {
    bool identity = true;
    IntervalBound interval;  // used when identity == false
};

struct Jump {
    std::size_t source = 0;
    std::size_t target = 0;
    Rectangle guard;
    std::vector<ResetEntry> reset;
    std::optional<std::size_t> event;  // random-clock variable index; nullopt = nonstochastic
    std::string label;                 // display name ("e0", "e1", ... or event name)

    bool stochastic() const { return event.has_value(); }
};

struct RacModel {
    VariableSpace variables;
    std::vector<Location> locations;
    std::vector<Jump> jumps;
    std::vector<DistributionSpec> distributions;  // indexed like random_indices
    std::size_t initial_location = 0;

    std::optional<std::size_t> location_index(const std::string& name) const;
    const DistributionSpec& distribution_of_clock(std::size_t var_index) const;
    /// Position of var_index within random_indices.
    std::size_t clock_slot(std::size_t var_index) const;
};

// ── Queries ──────────────────────────────────────────────────────────────────

enum class QueryMode { Min, Max, Both };

struct QuerySpec {
    std::vector<std::size_t> goal_locations;
    double time_bound = 0.0;
    std::size_t jump_bound = 0;
    QueryMode mode = QueryMode::Min;
    std::size_t samples = 100000;
    std::uint64_t seed = 1;
    std::size_t node_cap = 200000;

    bool is_goal(std::size_t loc) const;
};

// ── Parsing / validation ─────────────────────────────────────────────────────

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parse a model document (see README for the schema). The global time
/// variable is injected as the last coordinate; omitted invariants and guards
/// default to the full space, omitted resets to identity, omitted flows to
/// [0,0]. Random-clock flows may be omitted entirely; they are derived from
/// the jump structure.
RacModel parse_model(const std::string& text);
RacModel load_model(const std::string& path);

/// Normalized model back to document form (round-trips through parse_model).
std::string serialize_model(const RacModel& model);

struct Finding {
    std::string code;
    std::string message;
};

struct ValidationReport {
    std::vector<Finding> findings;
    std::vector<std::string> notes;

    bool clean() const { return findings.empty(); }
};

/// Structural well-formedness checks. The nonblocking condition is not
/// checked (reported as a note).
ValidationReport validate(const RacModel& model);

}  // namespace racv

#endif  // RACV_MODEL_HPP
