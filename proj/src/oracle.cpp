#include "racv/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>

namespace racv {

namespace {

struct Search {
    const RacModel& model;
    const QuerySpec& query;
    const std::vector<double>& prophecy;  // by clock slot
    const DiscretizationSpec& disc;
    bool avoid_mode;  // true: searching for an avoiding strategy
    double quantum;
    double tol;
    std::unordered_map<std::uint64_t, bool> memo;
    std::vector<std::vector<std::vector<double>>> rate_menu;  // per location

    Search(const RacModel& m, const QuerySpec& q, const std::vector<double>& p,
           const DiscretizationSpec& d, bool avoid)
        : model(m), query(q), prophecy(p), disc(d), avoid_mode(avoid) {
        quantum = 1.0 / static_cast<double>(disc.time_steps_per_unit);
        tol = quantum * 1e-6;
        build_rate_menus();
    }

    void build_rate_menus() {
        const std::size_t d = model.variables.dim();
        rate_menu.resize(model.locations.size());
        for (std::size_t li = 0; li < model.locations.size(); ++li) {
            const Location& loc = model.locations[li];
            std::vector<std::vector<double>> per_dim(d);
            for (std::size_t i = 0; i < d; ++i) {
                const IntervalBound f = loc.flow[i];
                if (f.is_point()) {
                    per_dim[i] = {f.lower};
                    continue;
                }
                const double lo = f.lower == kNegInf ? -1e6 : f.lower;
                const double hi = f.upper == kPosInf ? 1e6 : f.upper;
                std::vector<double> vals{lo, hi};
                for (std::size_t k = 1; k <= disc.rate_samples_per_dim; ++k)
                    vals.push_back(lo + (hi - lo) * static_cast<double>(k) /
                                            static_cast<double>(disc.rate_samples_per_dim + 1));
                std::sort(vals.begin(), vals.end());
                vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
                per_dim[i] = std::move(vals);
            }
            // Cartesian product over the non-singleton dimensions.
            std::vector<std::vector<double>> combos{{}};
            for (std::size_t i = 0; i < d; ++i) {
                std::vector<std::vector<double>> next;
                for (const auto& c : combos)
                    for (double v : per_dim[i]) {
                        auto ext = c;
                        ext.push_back(v);
                        next.push_back(std::move(ext));
                    }
                combos = std::move(next);
            }
            rate_menu[li] = std::move(combos);
        }
    }

    std::uint64_t state_key(std::size_t loc, const std::vector<double>& v,
                            std::size_t jumps, std::uint32_t expired) const {
        std::uint64_t h = 1469598103934665603ULL;
        auto mix = [&h](std::uint64_t x) {
            h ^= x;
            h *= 1099511628211ULL;
        };
        mix(loc);
        mix(jumps);
        mix(expired);
        for (double x : v)
            mix(static_cast<std::uint64_t>(
                static_cast<std::int64_t>(std::llround(x / (quantum * 0.25)))));
        return h;
    }

    bool in_rect(const Rectangle& rect, const std::vector<double>& v) const {
        for (std::size_t i = 0; i < v.size(); ++i)
            if (v[i] < rect[i].lower - tol || v[i] > rect[i].upper + tol) return false;
        return true;
    }

    bool clock_caps_ok(const std::vector<double>& v, std::uint32_t expired) const {
        for (std::size_t slot = 0; slot < model.variables.random_dim(); ++slot) {
            if (expired & (1u << slot)) continue;
            const std::size_t r = model.variables.random_indices[slot];
            if (v[r] > prophecy[slot] + tol) return false;
        }
        return true;
    }

    // delta candidates for one rate choice: the quantum plus every wall
    // (invariant faces, guard faces, clock expirations, the time bound).
    std::vector<double> delta_candidates(std::size_t loc, const std::vector<double>& v,
                                         const std::vector<double>& rate,
                                         std::uint32_t expired) const {
        const std::size_t d = model.variables.dim();
        const std::size_t t = model.variables.time_index;
        std::vector<double> ds{quantum};
        auto push = [&ds, this](double delta) {
            if (delta > tol) ds.push_back(delta);
        };
        const Location& location = model.locations[loc];
        for (std::size_t i = 0; i < d; ++i) {
            if (std::abs(rate[i]) < 1e-12) continue;
            const auto face = [&](double bound) {
                if (bound == kNegInf || bound == kPosInf) return;
                push((bound - v[i]) / rate[i]);
            };
            face(location.invariant[i].lower);
            face(location.invariant[i].upper);
            for (const auto& j : model.jumps) {
                if (j.source != loc) continue;
                face(j.guard[i].lower);
                face(j.guard[i].upper);
            }
        }
        for (std::size_t slot = 0; slot < model.variables.random_dim(); ++slot) {
            if (expired & (1u << slot)) continue;
            const std::size_t r = model.variables.random_indices[slot];
            if (rate[r] > 1e-12) push((prophecy[slot] - v[r]) / rate[r]);
        }
        push(query.time_bound - v[t]);
        std::sort(ds.begin(), ds.end());
        ds.erase(std::unique(ds.begin(), ds.end(),
                             [this](double a, double b) { return std::abs(a - b) < tol; }),
                 ds.end());
        return ds;
    }

    // Search for a winning strategy: avoidance keeps the run outside the goal
    // set until the bounds expire, reachability hits a goal location in time.
    bool search(std::size_t loc, std::vector<double> v, std::size_t jumps,
                std::uint32_t expired) {
        const std::size_t t = model.variables.time_index;
        const bool in_goal = query.is_goal(loc);
        if (avoid_mode) {
            if (in_goal) return false;
            if (v[t] >= query.time_bound - tol) return true;
            if (jumps >= query.jump_bound) return true;
        } else {
            if (in_goal) return true;
            if (jumps >= query.jump_bound) return false;
        }
        if (memo.size() > disc.state_cap) throw OracleError("oracle state cap exceeded");
        const std::uint64_t key = state_key(loc, v, jumps, expired);
        if (const auto it = memo.find(key); it != memo.end()) return it->second;
        // Jumps strictly consume budget and time moves strictly advance t, so
        // there are no cycles to close and no in-progress marker is needed.
        bool win = false;
        bool any_move = false;

        // Discrete moves.
        for (std::size_t jk = 0; jk < model.jumps.size() && !win; ++jk) {
            const Jump& jump = model.jumps[jk];
            if (jump.source != loc) continue;
            if (jump.event) {
                const std::size_t slot = model.clock_slot(*jump.event);
                if (expired & (1u << slot)) continue;
                const std::size_t r = *jump.event;
                if (std::abs(v[r] - prophecy[slot]) > tol) continue;
            } else if (!in_rect(jump.guard, v))
                continue;
            const std::uint32_t expired2 =
                jump.event ? (expired | (1u << model.clock_slot(*jump.event))) : expired;
            // Reset choices: corners and midpoint of each reset interval.
            std::vector<std::vector<double>> targets{v};
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (jump.reset[i].identity) continue;
                const IntervalBound iv = jump.reset[i].interval;
                std::vector<double> picks{iv.lower, iv.upper, (iv.lower + iv.upper) / 2};
                picks.erase(std::unique(picks.begin(), picks.end()), picks.end());
                std::vector<std::vector<double>> next;
                for (const auto& base : targets)
                    for (double val : picks) {
                        auto w = base;
                        w[i] = val;
                        next.push_back(std::move(w));
                    }
                targets = std::move(next);
            }
            for (auto& w : targets) {
                if (!in_rect(model.locations[jump.target].invariant, w)) continue;
                any_move = true;
                if (search(jump.target, w, jumps + 1, expired2)) {
                    win = true;
                    break;
                }
            }
        }

        // Time moves.
        const Location& location = model.locations[loc];
        for (const auto& rate : rate_menu[loc]) {
            if (win) break;
            for (double delta : delta_candidates(loc, v, rate, expired)) {
                std::vector<double> w(v.size());
                for (std::size_t i = 0; i < v.size(); ++i) w[i] = v[i] + delta * rate[i];
                if (w[t] > query.time_bound + tol) continue;
                if (!in_rect(location.invariant, w)) continue;
                if (!clock_caps_ok(w, expired)) continue;
                any_move = true;
                if (search(loc, std::move(w), jumps, expired)) {
                    win = true;
                    break;
                }
            }
        }

        // A frozen run with no enabled jump cannot be extended: it never
        // reaches the goal, which counts as successful avoidance.
        if (!any_move && !win) win = avoid_mode;

        memo[key] = win;
        return win;
    }

    std::vector<std::vector<double>> initial_valuations() const {
        const Location& loc = model.locations[model.initial_location];
        const Rectangle& init = *loc.init;
        std::vector<std::vector<double>> vals{{}};
        for (std::size_t i = 0; i < model.variables.dim(); ++i) {
            std::vector<double> picks;
            if (init[i].is_point()) picks = {init[i].lower};
            else {
                picks = {init[i].lower, init[i].upper};
                for (std::size_t k = 1; k <= disc.rate_samples_per_dim; ++k)
                    picks.push_back(init[i].lower +
                                    (init[i].upper - init[i].lower) * static_cast<double>(k) /
                                        static_cast<double>(disc.rate_samples_per_dim + 1));
                std::sort(picks.begin(), picks.end());
                picks.erase(std::unique(picks.begin(), picks.end()), picks.end());
            }
            std::vector<std::vector<double>> next;
            for (const auto& base : vals)
                for (double val : picks) {
                    auto w = base;
                    w.push_back(val);
                    next.push_back(std::move(w));
                }
            vals = std::move(next);
        }
        return vals;
    }
};

bool run_search(const RacModel& model, const QuerySpec& query,
                const std::vector<double>& prophecy, const DiscretizationSpec& disc,
                bool avoid) {
    if (prophecy.size() != model.variables.random_dim())
        throw OracleError("prophecy dimension mismatch");
    Search s(model, query, prophecy, disc, avoid);
    for (const auto& v : s.initial_valuations())
        if (s.search(model.initial_location, v, 0, 0)) return true;
    return false;
}

}  // namespace

bool can_avoid(const RacModel& model, const QuerySpec& query,
               const std::vector<double>& prophecy, const DiscretizationSpec& disc) {
    if (query.goal_locations.empty()) return true;
    return run_search(model, query, prophecy, disc, true);
}

bool can_reach(const RacModel& model, const QuerySpec& query,
               const std::vector<double>& prophecy, const DiscretizationSpec& disc) {
    return run_search(model, query, prophecy, disc, false);
}

OracleEstimate oracle_probability(const RacModel& model, const QuerySpec& query,
                                  QueryMode mode, const DiscretizationSpec& disc) {
    const std::size_t d_r = model.variables.random_dim();
    if (d_r == 0 || d_r > 2)
        throw OracleError("oracle_probability supports 1 or 2 random clocks");
    if (mode == QueryMode::Both)
        throw OracleError("oracle_probability takes a single mode");

    const std::size_t n = disc.prophecy_grid_per_dim;
    std::vector<double> caps(d_r);
    double tail = 0.0;
    for (std::size_t i = 0; i < d_r; ++i) {
        const auto& dist = model.distributions[i];
        caps[i] = dist.quantile(1.0 - 1e-6);
        tail += 1.0 - dist.cdf(caps[i]);
    }

    auto decide = [&](const std::vector<double>& p) {
        return mode == QueryMode::Min ? !can_avoid(model, query, p, disc)
                                      : can_reach(model, query, p, disc);
    };

    OracleEstimate est;
    if (d_r == 1) {
        const auto& dist = model.distributions[0];
        std::vector<bool> hit(n);
        std::vector<double> mass(n);
        for (std::size_t k = 0; k < n; ++k) {
            const double lo = caps[0] * static_cast<double>(k) / static_cast<double>(n);
            const double hi = caps[0] * static_cast<double>(k + 1) / static_cast<double>(n);
            mass[k] = dist.cdf(hi) - dist.cdf(lo);
            hit[k] = decide({(lo + hi) / 2});
            if (hit[k]) est.value += mass[k];
        }
        for (std::size_t k = 0; k < n; ++k) {
            const bool boundary = (k > 0 && hit[k] != hit[k - 1]) ||
                                  (k + 1 < n && hit[k] != hit[k + 1]);
            if (boundary) est.grid_error += mass[k];
        }
        est.cells = n;
    } else {
        const auto& d0 = model.distributions[0];
        const auto& d1 = model.distributions[1];
        std::vector<std::vector<bool>> hit(n, std::vector<bool>(n));
        std::vector<double> mass0(n), mass1(n);
        for (std::size_t k = 0; k < n; ++k) {
            mass0[k] = d0.cdf(caps[0] * (k + 1.0) / n) - d0.cdf(caps[0] * k / static_cast<double>(n));
            mass1[k] = d1.cdf(caps[1] * (k + 1.0) / n) - d1.cdf(caps[1] * k / static_cast<double>(n));
        }
        for (std::size_t k0 = 0; k0 < n; ++k0)
            for (std::size_t k1 = 0; k1 < n; ++k1) {
                const double p0 = caps[0] * (k0 + 0.5) / static_cast<double>(n);
                const double p1 = caps[1] * (k1 + 0.5) / static_cast<double>(n);
                hit[k0][k1] = decide({p0, p1});
                if (hit[k0][k1]) est.value += mass0[k0] * mass1[k1];
            }
        for (std::size_t k0 = 0; k0 < n; ++k0)
            for (std::size_t k1 = 0; k1 < n; ++k1) {
                const bool h = hit[k0][k1];
                const bool boundary = (k0 > 0 && hit[k0 - 1][k1] != h) ||
                                      (k0 + 1 < n && hit[k0 + 1][k1] != h) ||
                                      (k1 > 0 && hit[k0][k1 - 1] != h) ||
                                      (k1 + 1 < n && hit[k0][k1 + 1] != h);
                if (boundary) est.grid_error += mass0[k0] * mass1[k1];
            }
        est.cells = n * n;
    }
    est.grid_error += tail;
    return est;
}

}  // namespace racv
