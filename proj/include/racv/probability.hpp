#ifndef RACV_PROBABILITY_HPP
#define RACV_PROBABILITY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "racv/geometry.hpp"
#include "racv/model.hpp"

namespace racv {

// ── ProphecyRegion ───────────────────────────────────────────────────────────
// A region over the random-clock coordinates (in VariableSpace order),
// contained in the nonnegative orthant.

struct ProphecyRegion {
    Region region;

    ProphecyRegion() = default;
    explicit ProphecyRegion(Region r) : region(std::move(r)) {}

    static ProphecyRegion empty(std::size_t d_r) { return ProphecyRegion(Region::empty(d_r)); }
    static ProphecyRegion full(std::size_t d_r) { return ProphecyRegion(Region::full(d_r)); }

    std::size_t dimension() const { return region.dimension(); }
    bool is_null() const { return region_is_null(region); }
};

ProphecyRegion prophecy_intersect(const ProphecyRegion& a, const ProphecyRegion& b);
ProphecyRegion prophecy_union(const ProphecyRegion& a, const ProphecyRegion& b);
ProphecyRegion prophecy_difference(const ProphecyRegion& a, const ProphecyRegion& b);
bool prophecy_equal(const ProphecyRegion& a, const ProphecyRegion& b);
bool prophecy_disjoint(const ProphecyRegion& a, const ProphecyRegion& b);
bool prophecy_subset(const ProphecyRegion& a, const ProphecyRegion& b);

/// Human-readable dump: merged interval list when 1-D, constraint lists above.
std::string prophecy_to_string(const ProphecyRegion& r);

// ── Integration ──────────────────────────────────────────────────────────────

enum class IntegrationMethod { Exact, MonteCarlo };

struct ProbabilityResult {
    double value = 0.0;
    double stat_error = 0.0;
    std::size_t samples_used = 0;
    IntegrationMethod method = IntegrationMethod::Exact;
};

/// Joint density G at a prophecy point (product of the marginals).
double density(const std::vector<DistributionSpec>& distrs,
               const std::vector<double>& point);

/// k-th i.i.d. joint sample for the given seed. Counter-based: the value for
/// a given (seed, k) never depends on how samples are chunked across workers.
std::vector<double> sample_point(const std::vector<DistributionSpec>& distrs,
                                 std::uint64_t seed, std::uint64_t k);

/// Probability mass of the region. 1-D regions that reduce to an interval
/// union are integrated exactly through the CDF; otherwise seeded Monte Carlo
/// with the binomial standard error.
ProbabilityResult integrate(const ProphecyRegion& region,
                            const std::vector<DistributionSpec>& distrs,
                            std::size_t samples, std::uint64_t seed);

/// Integral over the full nonnegative orthant (normalization self-test).
ProbabilityResult full_space_check(const std::vector<DistributionSpec>& distrs,
                                   std::size_t samples, std::uint64_t seed);

}  // namespace racv

#endif  // RACV_PROBABILITY_HPP
