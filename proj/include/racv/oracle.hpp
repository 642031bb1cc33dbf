#ifndef RACV_ORACLE_HPP
#define RACV_ORACLE_HPP

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "racv/model.hpp"

namespace racv {

// ── Discretized reference search ─────────────────────────────────────────────
// Decides goal avoidability/reachability for a fixed prophecy by exhaustive
// search over a discretized action space, directly on the operational
// semantics (expiration conditions included). Approximate by construction;
// refine by raising the discretization parameters.

struct DiscretizationSpec {
    std::size_t time_steps_per_unit = 20;
    std::size_t rate_samples_per_dim = 1;  // interior rates; corners always included
    std::size_t prophecy_grid_per_dim = 200;
    std::size_t state_cap = 4000000;
};

struct OracleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// true iff some discretized scheduler keeps every visited location outside
/// the goal set within the (t_max, j_max) bounds, given the prophecy.
bool can_avoid(const RacModel& model, const QuerySpec& query,
               const std::vector<double>& prophecy, const DiscretizationSpec& disc);

/// true iff some discretized scheduler reaches the goal set within bounds.
bool can_reach(const RacModel& model, const QuerySpec& query,
               const std::vector<double>& prophecy, const DiscretizationSpec& disc);

struct OracleEstimate {
    double value = 0.0;
    double grid_error = 0.0;  // mass of cells at decision boundaries + tail mass
    std::size_t cells = 0;
};

/// Midpoint-grid quadrature of the joint density weighted by the pointwise
/// decision (cannot-avoid in min mode, can-reach in max mode). Guarded to
/// prophecy dimension <= 2.
OracleEstimate oracle_probability(const RacModel& model, const QuerySpec& query,
                                  QueryMode mode, const DiscretizationSpec& disc);

}  // namespace racv

#endif  // RACV_ORACLE_HPP
