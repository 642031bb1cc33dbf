#ifndef RACV_GEOMETRY_HPP
#define RACV_GEOMETRY_HPP

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace racv {

// Global tolerances. Constraint satisfaction and redundancy use eps_geo;
// full-dimensionality uses the Chebyshev radius threshold eps_dim.
inline constexpr double kEpsGeo = 1e-9;
inline constexpr double kEpsDim = 1e-7;
inline constexpr double kEpsMem = 1e-9;

// ── Halfspace ────────────────────────────────────────────────────────────────
// A single constraint a·x <= b.

struct Halfspace {
    std::vector<double> coeffs;
    double bound = 0.0;
};

// ── ConvexPolytope ───────────────────────────────────────────────────────────
// Closed convex set in H-representation over a fixed dimension. The empty
// constraint list denotes the full space.

class ConvexPolytope {
public:
    ConvexPolytope() = default;
    explicit ConvexPolytope(std::size_t dimension) : dim_(dimension) {}

    static ConvexPolytope full(std::size_t dimension) { return ConvexPolytope(dimension); }

    /// Axis-aligned box; unbounded sides passed as +-infinity.
    static ConvexPolytope box(const std::vector<double>& lower,
                              const std::vector<double>& upper);

    std::size_t dimension() const { return dim_; }
    const std::vector<Halfspace>& constraints() const { return rows_; }

    /// Add a·x <= b (normalized internally).
    void add(std::vector<double> coeffs, double bound);
    /// Add lower <= x_i <= upper (infinite sides skipped).
    void add_interval(std::size_t index, double lower, double upper);

    bool contains(const std::vector<double>& point, double eps = kEpsMem) const;

    std::string to_string() const;

private:
    std::size_t dim_ = 0;
    std::vector<Halfspace> rows_;
};

// ── Polytope operations ──────────────────────────────────────────────────────

ConvexPolytope intersect(const ConvexPolytope& p, const ConvexPolytope& q);
bool is_empty(const ConvexPolytope& p);
bool is_full_dimensional(const ConvexPolytope& p);

/// Chebyshev radius (largest inscribed ball); +inf when unbounded in a
/// direction that admits arbitrarily large balls, -inf when empty.
double chebyshev_radius(const ConvexPolytope& p);

/// Exact existential projection: removes the given coordinates via
/// Fourier-Motzkin elimination with redundancy pruning. Remaining coordinates
/// keep their relative order.
ConvexPolytope eliminate(const ConvexPolytope& p, const std::set<std::size_t>& dims);

/// {y | exists x in p: y_i >= x_i for i in dims, y_j = x_j otherwise}.
ConvexPolytope up_closure(const ConvexPolytope& p, const std::set<std::size_t>& dims);

/// Remove constraints implied by the others; drops trivially true rows.
ConvexPolytope canonicalize(const ConvexPolytope& p);

/// max c·x over p; nullopt when empty, +inf when unbounded.
std::optional<double> support(const ConvexPolytope& p, const std::vector<double>& c);

/// Bounds of coordinate i over p: [min, max] with infinities; nullopt if empty.
std::optional<std::pair<double, double>> coordinate_range(const ConvexPolytope& p,
                                                          std::size_t index);

// ── Region ───────────────────────────────────────────────────────────────────
// Finite union of convex polytopes of one dimension. The empty part set is the
// empty region. Operations are exact up to boundaries (closed semantics,
// boundary overlaps are null sets).

class Region {
public:
    Region() = default;
    explicit Region(std::size_t dimension) : dim_(dimension) {}
    explicit Region(ConvexPolytope part);

    static Region empty(std::size_t dimension) { return Region(dimension); }
    static Region full(std::size_t dimension) { return Region(ConvexPolytope::full(dimension)); }

    std::size_t dimension() const { return dim_; }
    const std::vector<ConvexPolytope>& parts() const { return parts_; }
    bool has_parts() const { return !parts_.empty(); }

    /// Appends a part unless provably empty.
    void add_part(ConvexPolytope part);

    std::string to_string() const;

private:
    std::size_t dim_ = 0;
    std::vector<ConvexPolytope> parts_;
};

Region region_intersect(const Region& a, const Region& b);
Region region_union(const Region& a, const Region& b);

/// a \ b as a finite union; parts that end up empty or not full-dimensional
/// are pruned (they are null sets under the closed-set semantics).
Region region_difference(const Region& a, const Region& b);

bool region_is_null(const Region& a);
bool region_equal_up_to_null(const Region& a, const Region& b);
bool region_disjoint_up_to_null(const Region& a, const Region& b);
bool contains_point(const Region& a, const std::vector<double>& x, double eps = kEpsMem);

/// true iff a \ b is a null set.
bool region_subset_up_to_null(const Region& a, const Region& b);

/// For 1-D regions: the part intervals merged into disjoint [lo, hi] pairs
/// (infinite endpoints allowed), sorted by lo. Empty parts are dropped.
std::vector<std::pair<double, double>> region_intervals(const Region& a);

}  // namespace racv

#endif  // RACV_GEOMETRY_HPP
