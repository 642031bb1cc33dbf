#include "racv/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "racv/lp.hpp"

namespace racv {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double norm2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

std::vector<std::vector<double>> matrix_of(const ConvexPolytope& p) {
    std::vector<std::vector<double>> a;
    a.reserve(p.constraints().size());
    for (const auto& h : p.constraints()) a.push_back(h.coeffs);
    return a;
}

std::vector<double> rhs_of(const ConvexPolytope& p) {
    std::vector<double> b;
    b.reserve(p.constraints().size());
    for (const auto& h : p.constraints()) b.push_back(h.bound);
    return b;
}

}  // namespace

// ── ConvexPolytope ───────────────────────────────────────────────────────────

ConvexPolytope ConvexPolytope::box(const std::vector<double>& lower,
                                   const std::vector<double>& upper) {
    if (lower.size() != upper.size())
        throw std::invalid_argument("box: bound size mismatch");
    ConvexPolytope p(lower.size());
    for (std::size_t i = 0; i < lower.size(); ++i)
        p.add_interval(i, lower[i], upper[i]);
    return p;
}

void ConvexPolytope::add(std::vector<double> coeffs, double bound) {
    if (coeffs.size() != dim_)
        throw std::invalid_argument("constraint dimension mismatch");
    const double n = norm2(coeffs);
    if (n <= kEpsGeo) {
        if (bound < -kEpsGeo) {
            // 0 <= negative: encode an explicitly infeasible row.
            rows_.push_back({std::vector<double>(dim_, 0.0), -1.0});
        }
        return;  // trivially true
    }
    for (double& c : coeffs) c /= n;
    rows_.push_back({std::move(coeffs), bound / n});
}

void ConvexPolytope::add_interval(std::size_t index, double lower, double upper) {
    if (index >= dim_) throw std::invalid_argument("interval index out of range");
    if (upper < kInf) {
        std::vector<double> c(dim_, 0.0);
        c[index] = 1.0;
        add(std::move(c), upper);
    }
    if (lower > -kInf) {
        std::vector<double> c(dim_, 0.0);
        c[index] = -1.0;
        add(std::move(c), -lower);
    }
}

bool ConvexPolytope::contains(const std::vector<double>& point, double eps) const {
    if (point.size() != dim_) throw std::invalid_argument("point dimension mismatch");
    for (const auto& h : rows_) {
        double dot = 0.0;
        for (std::size_t i = 0; i < dim_; ++i) dot += h.coeffs[i] * point[i];
        if (dot > h.bound + eps) return false;
    }
    return true;
}

std::string ConvexPolytope::to_string() const {
    std::ostringstream os;
    os << "{";
    for (std::size_t k = 0; k < rows_.size(); ++k) {
        if (k) os << ", ";
        bool first = true;
        for (std::size_t i = 0; i < dim_; ++i) {
            const double c = rows_[k].coeffs[i];
            if (std::abs(c) <= kEpsGeo) continue;
            if (!first) os << (c >= 0 ? " + " : " - ");
            else if (c < 0) os << "-";
            os << std::abs(c) << "*x" << i;
            first = false;
        }
        if (first) os << "0";
        os << " <= " << rows_[k].bound;
    }
    os << "}";
    return os.str();
}

// ── Polytope operations ──────────────────────────────────────────────────────

ConvexPolytope intersect(const ConvexPolytope& p, const ConvexPolytope& q) {
    if (p.dimension() != q.dimension())
        throw std::invalid_argument("intersect: dimension mismatch");
    ConvexPolytope r(p.dimension());
    for (const auto& h : p.constraints()) r.add(h.coeffs, h.bound);
    for (const auto& h : q.constraints()) r.add(h.coeffs, h.bound);
    return canonicalize(r);
}

bool is_empty(const ConvexPolytope& p) {
    if (p.constraints().empty()) return false;
    return !lp_feasible(matrix_of(p), rhs_of(p));
}

double chebyshev_radius(const ConvexPolytope& p) {
    const std::size_t d = p.dimension();
    if (p.constraints().empty()) return kInf;
    // Variables (x, rho): maximize rho s.t. a·x + |a| rho <= b, rho >= 0.
    std::vector<std::vector<double>> a;
    std::vector<double> b;
    for (const auto& h : p.constraints()) {
        std::vector<double> row = h.coeffs;
        row.push_back(norm2(h.coeffs));
        a.push_back(std::move(row));
        b.push_back(h.bound);
    }
    std::vector<double> nonneg(d + 1, 0.0);
    nonneg[d] = -1.0;
    a.push_back(std::move(nonneg));
    b.push_back(0.0);
    std::vector<double> c(d + 1, 0.0);
    c[d] = 1.0;
    const LpResult res = lp_maximize(a, b, c);
    switch (res.status) {
        case LpStatus::Infeasible: return -kInf;
        case LpStatus::Unbounded: return kInf;
        case LpStatus::Optimal: return res.objective;
    }
    return -kInf;
}

bool is_full_dimensional(const ConvexPolytope& p) {
    return chebyshev_radius(p) > kEpsDim;
}

std::optional<double> support(const ConvexPolytope& p, const std::vector<double>& c) {
    if (p.constraints().empty()) {
        for (double ci : c)
            if (std::abs(ci) > kEpsGeo) return kInf;
        return 0.0;
    }
    const LpResult res = lp_maximize(matrix_of(p), rhs_of(p), c);
    switch (res.status) {
        case LpStatus::Infeasible: return std::nullopt;
        case LpStatus::Unbounded: return kInf;
        case LpStatus::Optimal: return res.objective;
    }
    return std::nullopt;
}

std::optional<std::pair<double, double>> coordinate_range(const ConvexPolytope& p,
                                                          std::size_t index) {
    std::vector<double> c(p.dimension(), 0.0);
    c[index] = 1.0;
    const auto hi = support(p, c);
    if (!hi) return std::nullopt;
    c[index] = -1.0;
    const auto lo = support(p, c);
    if (!lo) return std::nullopt;
    return std::make_pair(-*lo, *hi);
}

ConvexPolytope canonicalize(const ConvexPolytope& p) {
    if (p.constraints().empty()) return p;
    const std::size_t d = p.dimension();

    // Deduplicate parallel rows, keeping the tighter bound.
    std::vector<Halfspace> rows;
    for (const auto& h : p.constraints()) {
        bool merged = false;
        for (auto& kept : rows) {
            double dot = 0.0;
            for (std::size_t i = 0; i < d; ++i) dot += kept.coeffs[i] * h.coeffs[i];
            bool same = dot > 1.0 - kEpsGeo;
            if (same) {
                double diff = 0.0;
                for (std::size_t i = 0; i < d; ++i)
                    diff = std::max(diff, std::abs(kept.coeffs[i] - h.coeffs[i]));
                if (diff < 1e-7) {
                    kept.bound = std::min(kept.bound, h.bound);
                    merged = true;
                    break;
                }
            }
        }
        if (!merged) rows.push_back(h);
    }

    ConvexPolytope dedup(d);
    for (auto& h : rows) dedup.add(h.coeffs, h.bound);
    if (is_empty(dedup)) {
        ConvexPolytope e(d);
        e.add(std::vector<double>(d, 0.0), -1.0);
        // add() turns an all-zero row with negative bound into the empty marker
        return e;
    }

    // Drop rows implied by the remaining ones.
    std::vector<bool> keep(rows.size(), true);
    for (std::size_t k = 0; k < rows.size(); ++k) {
        std::vector<std::vector<double>> a;
        std::vector<double> b;
        for (std::size_t j = 0; j < rows.size(); ++j) {
            if (j == k || !keep[j]) continue;
            a.push_back(rows[j].coeffs);
            b.push_back(rows[j].bound);
        }
        // Bound the objective by the row itself, relaxed by 1, so an
        // unbounded max only occurs when the row is genuinely not implied.
        a.push_back(rows[k].coeffs);
        b.push_back(rows[k].bound + 1.0);
        const LpResult res = lp_maximize(a, b, rows[k].coeffs);
        if (res.status == LpStatus::Optimal && res.objective <= rows[k].bound + kEpsGeo)
            keep[k] = false;
    }
    ConvexPolytope out(d);
    for (std::size_t k = 0; k < rows.size(); ++k)
        if (keep[k]) out.add(rows[k].coeffs, rows[k].bound);
    return out;
}

ConvexPolytope eliminate(const ConvexPolytope& p, const std::set<std::size_t>& dims) {
    const std::size_t d = p.dimension();
    for (std::size_t k : dims)
        if (k >= d) throw std::invalid_argument("eliminate: index out of range");
    if (dims.empty()) return p;

    // Work on raw rows; eliminate one coordinate at a time (descending, so
    // earlier indices stay valid).
    std::vector<Halfspace> rows(p.constraints());
    std::size_t cur_dim = d;
    std::vector<std::size_t> order(dims.rbegin(), dims.rend());
    for (std::size_t target : order) {
        std::vector<Halfspace> pos, neg, zero;
        for (auto& h : rows) {
            const double c = h.coeffs[target];
            if (c > kEpsGeo) pos.push_back(h);
            else if (c < -kEpsGeo) neg.push_back(h);
            else zero.push_back(h);
        }
        std::vector<Halfspace> next = std::move(zero);
        for (const auto& hp : pos) {
            for (const auto& hn : neg) {
                // hp: cp*x_t + ap·y <= bp (cp>0); hn: cn*x_t + an·y <= bn (cn<0)
                const double cp = hp.coeffs[target];
                const double cn = -hn.coeffs[target];
                Halfspace h;
                h.coeffs.assign(cur_dim, 0.0);
                for (std::size_t i = 0; i < cur_dim; ++i)
                    h.coeffs[i] = hp.coeffs[i] / cp + hn.coeffs[i] / cn;
                h.coeffs[target] = 0.0;
                h.bound = hp.bound / cp + hn.bound / cn;
                next.push_back(std::move(h));
            }
        }
        // Drop the eliminated coordinate from every row.
        for (auto& h : next) h.coeffs.erase(h.coeffs.begin() + static_cast<long>(target));
        rows = std::move(next);
        --cur_dim;

        // Prune after each stage to avoid quadratic blowup across stages.
        ConvexPolytope stage(cur_dim);
        for (auto& h : rows) stage.add(h.coeffs, h.bound);
        stage = canonicalize(stage);
        rows.assign(stage.constraints().begin(), stage.constraints().end());
    }
    ConvexPolytope out(cur_dim);
    for (auto& h : rows) out.add(h.coeffs, h.bound);
    return out;
}

ConvexPolytope up_closure(const ConvexPolytope& p, const std::set<std::size_t>& dims) {
    if (dims.empty()) return p;
    const std::size_t d = p.dimension();
    // Variables (x_0..x_{d-1}, y_k for k in dims): constrain x in p,
    // y_k >= x_k, then eliminate the original coordinates of dims and move
    // each fresh coordinate back into its slot.
    const std::size_t extra = dims.size();
    ConvexPolytope lifted(d + extra);
    for (const auto& h : p.constraints()) {
        std::vector<double> c = h.coeffs;
        c.resize(d + extra, 0.0);
        lifted.add(std::move(c), h.bound);
    }
    std::size_t slot = 0;
    for (std::size_t k : dims) {
        std::vector<double> c(d + extra, 0.0);
        c[k] = 1.0;
        c[d + slot] = -1.0;  // x_k - y_k <= 0
        lifted.add(std::move(c), 0.0);
        ++slot;
    }
    ConvexPolytope projected = eliminate(lifted, dims);
    // Coordinates now: the surviving originals in order, then the fresh ones
    // in dims order. Permute the fresh ones back into their original slots.
    std::vector<std::size_t> perm;  // new index -> final index
    for (std::size_t i = 0; i < d; ++i)
        if (!dims.count(i)) perm.push_back(i);
    for (std::size_t k : dims) perm.push_back(k);
    ConvexPolytope out(d);
    for (const auto& h : projected.constraints()) {
        std::vector<double> c(d, 0.0);
        for (std::size_t i = 0; i < h.coeffs.size(); ++i) c[perm[i]] = h.coeffs[i];
        out.add(std::move(c), h.bound);
    }
    return out;
}

// ── Region ───────────────────────────────────────────────────────────────────

Region::Region(ConvexPolytope part) : dim_(part.dimension()) {
    add_part(std::move(part));
}

void Region::add_part(ConvexPolytope part) {
    if (part.dimension() != dim_)
        throw std::invalid_argument("region part dimension mismatch");
    if (is_empty(part)) return;
    parts_.push_back(std::move(part));
}

std::string Region::to_string() const {
    if (parts_.empty()) return "{}";
    std::ostringstream os;
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (i) os << " U ";
        os << parts_[i].to_string();
    }
    return os.str();
}

Region region_intersect(const Region& a, const Region& b) {
    if (a.dimension() != b.dimension())
        throw std::invalid_argument("region_intersect: dimension mismatch");
    Region out(a.dimension());
    for (const auto& pa : a.parts())
        for (const auto& pb : b.parts())
            out.add_part(intersect(pa, pb));
    return out;
}

Region region_union(const Region& a, const Region& b) {
    if (a.dimension() != b.dimension())
        throw std::invalid_argument("region_union: dimension mismatch");
    Region out(a.dimension());
    for (const auto& p : a.parts()) out.add_part(p);
    for (const auto& p : b.parts()) out.add_part(p);
    return out;
}

Region region_difference(const Region& a, const Region& b) {
    if (a.dimension() != b.dimension())
        throw std::invalid_argument("region_difference: dimension mismatch");
    if (!b.has_parts()) return a;
    std::vector<ConvexPolytope> pieces(a.parts());
    for (const auto& pb : b.parts()) {
        if (pieces.empty()) break;
        const auto sub = canonicalize(pb);
        std::vector<ConvexPolytope> next;
        for (const auto& piece : pieces) {
            // piece \ sub = union over constraints c of sub of
            //   piece ∧ (c_1 ... c_{k-1}) ∧ not c_k   (disjoint up to boundary)
            ConvexPolytope carry = piece;
            for (const auto& h : sub.constraints()) {
                ConvexPolytope outside = carry;
                std::vector<double> flipped = h.coeffs;
                for (double& c : flipped) c = -c;
                outside.add(std::move(flipped), -h.bound);
                outside = canonicalize(outside);
                if (!is_empty(outside) && is_full_dimensional(outside))
                    next.push_back(std::move(outside));
                carry.add(h.coeffs, h.bound);
                if (is_empty(carry)) break;
            }
        }
        pieces = std::move(next);
    }
    Region out(a.dimension());
    for (auto& p : pieces) out.add_part(std::move(p));
    return out;
}

bool region_is_null(const Region& a) {
    for (const auto& p : a.parts())
        if (is_full_dimensional(p)) return false;
    return true;
}

bool region_subset_up_to_null(const Region& a, const Region& b) {
    return region_is_null(region_difference(a, b));
}

bool region_equal_up_to_null(const Region& a, const Region& b) {
    return region_subset_up_to_null(a, b) && region_subset_up_to_null(b, a);
}

bool region_disjoint_up_to_null(const Region& a, const Region& b) {
    return region_is_null(region_intersect(a, b));
}

bool contains_point(const Region& a, const std::vector<double>& x, double eps) {
    for (const auto& p : a.parts())
        if (p.contains(x, eps)) return true;
    return false;
}

std::vector<std::pair<double, double>> region_intervals(const Region& a) {
    if (a.dimension() != 1)
        throw std::invalid_argument("region_intervals: 1-D regions only");
    std::vector<std::pair<double, double>> raw;
    for (const auto& p : a.parts()) {
        const auto range = coordinate_range(p, 0);
        if (range) raw.push_back(*range);
    }
    std::sort(raw.begin(), raw.end());
    std::vector<std::pair<double, double>> merged;
    for (const auto& iv : raw) {
        if (!merged.empty() && iv.first <= merged.back().second + kEpsGeo)
            merged.back().second = std::max(merged.back().second, iv.second);
        else
            merged.push_back(iv);
    }
    return merged;
}

}  // namespace racv
