#ifndef RACV_COLLECT_HPP
#define RACV_COLLECT_HPP

#include "racv/transform.hpp"

namespace racv {

enum class CollectionMode { EnforcingMin, AllowingMax };

struct CollectError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Bottom-up collection over a fully modified tree. Minimum mode: union at
/// stochastic branchings, intersection at nondeterministic ones (settled free
/// choices included); leaves in goal locations return their incoming region,
/// all other leaves the empty region. Maximum mode replaces every
/// intersection with a union.
ProphecyRegion collect(const ModifiedReachTree& tstar, const QuerySpec& query,
                       CollectionMode mode);

/// true iff the minimum region is contained in the maximum region up to null.
bool check_subset(const ProphecyRegion& min_region, const ProphecyRegion& max_region);

}  // namespace racv

#endif  // RACV_COLLECT_HPP
