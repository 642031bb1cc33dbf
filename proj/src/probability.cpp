#include "racv/probability.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <thread>

namespace racv {

ProphecyRegion prophecy_intersect(const ProphecyRegion& a, const ProphecyRegion& b) {
    return ProphecyRegion(region_intersect(a.region, b.region));
}

ProphecyRegion prophecy_union(const ProphecyRegion& a, const ProphecyRegion& b) {
    return ProphecyRegion(region_union(a.region, b.region));
}

ProphecyRegion prophecy_difference(const ProphecyRegion& a, const ProphecyRegion& b) {
    return ProphecyRegion(region_difference(a.region, b.region));
}

bool prophecy_equal(const ProphecyRegion& a, const ProphecyRegion& b) {
    return region_equal_up_to_null(a.region, b.region);
}

bool prophecy_disjoint(const ProphecyRegion& a, const ProphecyRegion& b) {
    return region_disjoint_up_to_null(a.region, b.region);
}

bool prophecy_subset(const ProphecyRegion& a, const ProphecyRegion& b) {
    return region_subset_up_to_null(a.region, b.region);
}

std::string prophecy_to_string(const ProphecyRegion& r) {
    if (!r.region.has_parts()) return "empty";
    if (r.dimension() == 1) {
        std::ostringstream os;
        const auto ivs = region_intervals(r.region);
        for (std::size_t i = 0; i < ivs.size(); ++i) {
            if (i) os << " U ";
            os << "[" << ivs[i].first << ", ";
            if (ivs[i].second == kPosInf) os << "inf)";
            else os << ivs[i].second << "]";
        }
        return os.str();
    }
    return r.region.to_string();
}

// ── Sampling ─────────────────────────────────────────────────────────────────

namespace {

// SplitMix64; the per-sample stream key mixes seed, sample index and
// coordinate so chunking never changes a drawn value.
std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double uniform01(std::uint64_t seed, std::uint64_t k, std::uint64_t coord) {
    std::uint64_t key = splitmix64(seed ^ splitmix64(k + 0x632be59bd9b4e019ULL));
    key = splitmix64(key ^ splitmix64(coord + 0x9e3779b97f4a7c15ULL));
    // 53-bit mantissa in [0, 1)
    return static_cast<double>(key >> 11) * 0x1.0p-53;
}

std::size_t worker_count() {
    if (const char* env = std::getenv("RACV_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<std::size_t>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

}  // namespace

double density(const std::vector<DistributionSpec>& distrs,
               const std::vector<double>& point) {
    double g = 1.0;
    for (std::size_t i = 0; i < distrs.size(); ++i) g *= distrs[i].density(point[i]);
    return g;
}

std::vector<double> sample_point(const std::vector<DistributionSpec>& distrs,
                                 std::uint64_t seed, std::uint64_t k) {
    std::vector<double> p(distrs.size());
    for (std::size_t i = 0; i < distrs.size(); ++i)
        p[i] = distrs[i].quantile(uniform01(seed, k, i));
    return p;
}

namespace {

ProbabilityResult exact_1d(const ProphecyRegion& region, const DistributionSpec& d) {
    ProbabilityResult res;
    res.method = IntegrationMethod::Exact;
    double mass = 0.0;
    for (const auto& [lo, hi] : region_intervals(region.region))
        mass += d.cdf(hi) - d.cdf(std::max(lo, 0.0));
    res.value = std::clamp(mass, 0.0, 1.0);
    return res;
}

}  // namespace

ProbabilityResult integrate(const ProphecyRegion& region,
                            const std::vector<DistributionSpec>& distrs,
                            std::size_t samples, std::uint64_t seed) {
    if (region.dimension() != distrs.size())
        throw std::invalid_argument("integrate: region/distribution dimension mismatch");
    if (!region.region.has_parts()) {
        ProbabilityResult res;
        res.method = IntegrationMethod::Exact;
        return res;
    }
    if (distrs.size() == 1) return exact_1d(region, distrs.front());

    const std::size_t n = std::max<std::size_t>(samples, 1);
    const std::size_t workers = std::min(worker_count(), n);
    std::vector<std::uint64_t> hits(workers, 0);
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            const std::size_t begin = w * chunk;
            const std::size_t end = std::min(n, begin + chunk);
            std::uint64_t h = 0;
            for (std::size_t k = begin; k < end; ++k) {
                const auto p = sample_point(distrs, seed, k);
                if (contains_point(region.region, p, kEpsMem)) ++h;
            }
            hits[w] = h;
        });
    }
    for (auto& th : pool) th.join();
    std::uint64_t total = 0;
    for (std::uint64_t h : hits) total += h;

    ProbabilityResult res;
    res.method = IntegrationMethod::MonteCarlo;
    res.samples_used = n;
    res.value = static_cast<double>(total) / static_cast<double>(n);
    res.stat_error = std::sqrt(res.value * (1.0 - res.value) / static_cast<double>(n));
    return res;
}

ProbabilityResult full_space_check(const std::vector<DistributionSpec>& distrs,
                                   std::size_t samples, std::uint64_t seed) {
    const std::size_t d = distrs.size();
    ConvexPolytope orthant(d);
    for (std::size_t i = 0; i < d; ++i) orthant.add_interval(i, 0.0, kPosInf);
    return integrate(ProphecyRegion(Region(orthant)), distrs, samples, seed);
}

}  // namespace racv
