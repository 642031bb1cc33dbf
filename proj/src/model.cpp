#include "racv/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace racv {

using nlohmann::ordered_json;

// ── VariableSpace ────────────────────────────────────────────────────────────

bool VariableSpace::is_random(std::size_t i) const {
    return std::find(random_indices.begin(), random_indices.end(), i) !=
           random_indices.end();
}

std::optional<std::size_t> VariableSpace::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return i;
    return std::nullopt;
}

// ── DistributionSpec ─────────────────────────────────────────────────────────

DistributionSpec DistributionSpec::uniform(double a, double b) {
    DistributionSpec d;
    d.kind = DistKind::Uniform;
    d.a = a;
    d.b = b;
    return d;
}

DistributionSpec DistributionSpec::folded_normal(double mu, double sigma) {
    DistributionSpec d;
    d.kind = DistKind::FoldedNormal;
    d.mu = mu;
    d.sigma = sigma;
    return d;
}

DistributionSpec DistributionSpec::exponential(double lambda) {
    DistributionSpec d;
    d.kind = DistKind::Exponential;
    d.lambda = lambda;
    return d;
}

namespace {

double std_normal_pdf(double z) {
    static const double kInvSqrt2Pi = 0.3989422804014327;
    return kInvSqrt2Pi * std::exp(-0.5 * z * z);
}

double std_normal_cdf(double z) {
    return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

// Acklam's rational approximation for the standard normal quantile,
// polished with one Halley step against erfc.
double std_normal_quantile(double p) {
    if (p <= 0.0) return -kPosInf;
    if (p >= 1.0) return kPosInf;
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double e = std_normal_cdf(x) - p;
    const double u = e / std_normal_pdf(x);
    x = x - u / (1.0 + 0.5 * x * u);
    return x;
}

}  // namespace

double DistributionSpec::density(double x) const {
    if (x < 0.0) return 0.0;
    switch (kind) {
        case DistKind::Uniform:
            return (x >= a && x <= b) ? 1.0 / (b - a) : 0.0;
        case DistKind::FoldedNormal:
            return std_normal_pdf((x - mu) / sigma) / sigma +
                   std_normal_pdf((x + mu) / sigma) / sigma;
        case DistKind::Exponential:
            return lambda * std::exp(-lambda * x);
    }
    return 0.0;
}

double DistributionSpec::cdf(double x) const {
    if (x <= 0.0) return 0.0;
    switch (kind) {
        case DistKind::Uniform:
            if (x <= a) return 0.0;
            if (x >= b) return 1.0;
            return (x - a) / (b - a);
        case DistKind::FoldedNormal:
            if (x == kPosInf) return 1.0;
            return std_normal_cdf((x - mu) / sigma) + std_normal_cdf((x + mu) / sigma) - 1.0;
        case DistKind::Exponential:
            if (x == kPosInf) return 1.0;
            return 1.0 - std::exp(-lambda * x);
    }
    return 0.0;
}

double DistributionSpec::quantile(double u) const {
    switch (kind) {
        case DistKind::Uniform:
            return a + (b - a) * u;
        case DistKind::FoldedNormal:
            // |X| for X ~ N(mu, sigma^2): draw X by inverse CDF, fold.
            return std::abs(mu + sigma * std_normal_quantile(u));
        case DistKind::Exponential:
            return -std::log1p(-u) / lambda;
    }
    return 0.0;
}

IntervalBound DistributionSpec::support() const {
    switch (kind) {
        case DistKind::Uniform: return IntervalBound::of(a, b);
        case DistKind::FoldedNormal: return IntervalBound::of(0.0, kPosInf);
        case DistKind::Exponential: return IntervalBound::of(0.0, kPosInf);
    }
    return IntervalBound::all();
}

std::string DistributionSpec::to_string() const {
    std::ostringstream os;
    switch (kind) {
        case DistKind::Uniform: os << "uniform(" << a << "," << b << ")"; break;
        case DistKind::FoldedNormal: os << "folded_normal(" << mu << "," << sigma << ")"; break;
        case DistKind::Exponential: os << "exponential(" << lambda << ")"; break;
    }
    return os.str();
}

// ── RacModel ─────────────────────────────────────────────────────────────────

std::optional<std::size_t> RacModel::location_index(const std::string& name) const {
    for (std::size_t i = 0; i < locations.size(); ++i)
        if (locations[i].name == name) return i;
    return std::nullopt;
}

const DistributionSpec& RacModel::distribution_of_clock(std::size_t var_index) const {
    return distributions[clock_slot(var_index)];
}

std::size_t RacModel::clock_slot(std::size_t var_index) const {
    const auto& idx = variables.random_indices;
    const auto it = std::find(idx.begin(), idx.end(), var_index);
    if (it == idx.end()) throw std::out_of_range("not a random clock");
    return static_cast<std::size_t>(it - idx.begin());
}

bool QuerySpec::is_goal(std::size_t loc) const {
    return std::find(goal_locations.begin(), goal_locations.end(), loc) !=
           goal_locations.end();
}

// ── Parsing ──────────────────────────────────────────────────────────────────

namespace {

double bound_from_json(const ordered_json& j, bool lower) {
    if (j.is_null()) return lower ? kNegInf : kPosInf;
    if (!j.is_number()) throw ParseError("interval endpoint must be a number or null");
    return j.get<double>();
}

IntervalBound interval_from_json(const ordered_json& j) {
    if (!j.is_array() || j.size() != 2)
        throw ParseError("interval must be a two-element array [lo, hi]");
    IntervalBound iv;
    iv.lower = bound_from_json(j[0], true);
    iv.upper = bound_from_json(j[1], false);
    if (iv.lower > iv.upper) throw ParseError("interval with lower > upper");
    return iv;
}

Rectangle rectangle_from_json(const ordered_json& j, const VariableSpace& vars,
                              const Rectangle& defaults, const std::string& where) {
    Rectangle rect = defaults;
    for (const auto& [key, value] : j.items()) {
        const auto idx = vars.index_of(key);
        if (!idx) throw ParseError(where + ": unknown variable '" + key + "'");
        rect[*idx] = interval_from_json(value);
    }
    return rect;
}

DistributionSpec distribution_from_json(const ordered_json& j) {
    if (!j.contains("kind")) throw ParseError("distribution without kind");
    const std::string kind = j.at("kind").get<std::string>();
    const auto& params = j.at("params");
    if (!params.is_array()) throw ParseError("distribution params must be an array");
    if (kind == "uniform") {
        if (params.size() != 2) throw ParseError("uniform expects [a, b]");
        const double a = params[0].get<double>();
        const double b = params[1].get<double>();
        if (!(a < b)) throw ParseError("uniform requires a < b");
        return DistributionSpec::uniform(a, b);
    }
    if (kind == "normal") {
        if (params.size() != 2) throw ParseError("normal expects [mu, sigma]");
        const double mu = params[0].get<double>();
        const double sigma = params[1].get<double>();
        if (!(sigma > 0)) throw ParseError("normal requires sigma > 0");
        return DistributionSpec::folded_normal(mu, sigma);
    }
    if (kind == "exponential") {
        if (params.size() != 1) throw ParseError("exponential expects [lambda]");
        const double lambda = params[0].get<double>();
        if (!(lambda > 0)) throw ParseError("exponential requires lambda > 0");
        return DistributionSpec::exponential(lambda);
    }
    throw ParseError("unknown distribution kind '" + kind + "'");
}

ordered_json interval_to_json(const IntervalBound& iv) {
    ordered_json j = ordered_json::array();
    if (iv.lower == kNegInf) j.push_back(nullptr);
    else j.push_back(iv.lower);
    if (iv.upper == kPosInf) j.push_back(nullptr);
    else j.push_back(iv.upper);
    return j;
}

}  // namespace

RacModel parse_model(const std::string& text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("model syntax error: ") + e.what());
    }

    RacModel m;
    if (!doc.contains("variables") || !doc["variables"].is_array() ||
        doc["variables"].empty())
        throw ParseError("model requires a nonempty 'variables' array");

    for (const auto& v : doc["variables"]) {
        const std::string name = v.at("name").get<std::string>();
        if (name == "t") throw ParseError("variable name 't' is reserved");
        if (m.variables.index_of(name))
            throw ParseError("duplicate variable '" + name + "'");
        m.variables.names.push_back(name);
        if (v.value("random", false)) {
            m.variables.random_indices.push_back(m.variables.names.size() - 1);
            if (!v.contains("distribution"))
                throw ParseError("random clock '" + name + "' needs a distribution");
            m.distributions.push_back(distribution_from_json(v["distribution"]));
        } else if (v.contains("distribution")) {
            throw ParseError("non-random variable '" + name + "' carries a distribution");
        }
    }
    // Inject the global time variable as the last coordinate.
    m.variables.names.push_back("t");
    m.variables.time_index = m.variables.names.size() - 1;

    const std::size_t d = m.variables.dim();
    const std::size_t t = m.variables.time_index;

    if (!doc.contains("locations") || !doc["locations"].is_array() ||
        doc["locations"].empty())
        throw ParseError("model requires a nonempty 'locations' array");

    Rectangle full_rect(d, IntervalBound::all());
    Rectangle zero_flow(d, IntervalBound::point(0.0));

    for (const auto& lj : doc["locations"]) {
        Location loc;
        loc.name = lj.at("name").get<std::string>();
        if (m.location_index(loc.name))
            throw ParseError("duplicate location '" + loc.name + "'");
        loc.invariant = lj.contains("invariant")
                            ? rectangle_from_json(lj["invariant"], m.variables, full_rect,
                                                  "location " + loc.name)
                            : full_rect;
        loc.flow = lj.contains("flow")
                       ? rectangle_from_json(lj["flow"], m.variables, zero_flow,
                                             "location " + loc.name)
                       : zero_flow;
        loc.flow[t] = IntervalBound::point(1.0);
        loc.invariant[t] = IntervalBound::all();
        if (lj.contains("init")) {
            Rectangle init = rectangle_from_json(lj["init"], m.variables, full_rect,
                                                 "location " + loc.name);
            for (std::size_t i = 0; i < d; ++i)
                if (init[i].is_full() && i != t && !m.variables.is_random(i))
                    init[i] = IntervalBound::point(0.0);
            init[t] = IntervalBound::point(0.0);
            for (std::size_t r : m.variables.random_indices)
                init[r] = IntervalBound::point(0.0);
            loc.init = init;
        }
        m.locations.push_back(std::move(loc));
    }

    if (doc.contains("jumps")) {
        if (!doc["jumps"].is_array()) throw ParseError("'jumps' must be an array");
        std::size_t k = 0;
        for (const auto& jj : doc["jumps"]) {
            Jump jump;
            const std::string src = jj.at("source").get<std::string>();
            const std::string tgt = jj.at("target").get<std::string>();
            const auto si = m.location_index(src);
            const auto ti = m.location_index(tgt);
            if (!si) throw ParseError("jump source '" + src + "' is not a location");
            if (!ti) throw ParseError("jump target '" + tgt + "' is not a location");
            jump.source = *si;
            jump.target = *ti;
            jump.guard = jj.contains("guard")
                             ? rectangle_from_json(jj["guard"], m.variables, full_rect,
                                                   "jump " + src + "->" + tgt)
                             : full_rect;
            jump.reset.assign(d, ResetEntry{});
            if (jj.contains("reset")) {
                for (const auto& [key, value] : jj["reset"].items()) {
                    const auto idx = m.variables.index_of(key);
                    if (!idx) throw ParseError("reset of unknown variable '" + key + "'");
                    jump.reset[*idx] = ResetEntry{false, interval_from_json(value)};
                }
            }
            if (jj.contains("event") && !jj["event"].is_null()) {
                const std::string ev = jj["event"].get<std::string>();
                const auto idx = m.variables.index_of(ev);
                if (!idx || !m.variables.is_random(*idx))
                    throw ParseError("jump event '" + ev + "' is not a random clock");
                jump.event = *idx;
                jump.label = ev;
            } else {
                jump.label = "e" + std::to_string(k);
            }
            // The time variable is never guarded or reset.
            jump.guard[t] = IntervalBound::all();
            jump.reset[t] = ResetEntry{};
            m.jumps.push_back(std::move(jump));
            ++k;
        }
    }

    // Derive random-clock flows from the jump structure when not given:
    // rate 1 where a stochastic jump with that event leaves the location.
    for (std::size_t li = 0; li < m.locations.size(); ++li) {
        for (std::size_t r : m.variables.random_indices) {
            bool leaves = false;
            for (const auto& j : m.jumps)
                if (j.source == li && j.event && *j.event == r) leaves = true;
            auto& fl = m.locations[li].flow[r];
            if (fl.is_point() && fl.lower == 0.0 && leaves)
                fl = IntervalBound::point(1.0);
            m.locations[li].invariant[r] = IntervalBound::all();
        }
    }

    // Initial location: the unique location with nonempty init.
    std::vector<std::size_t> inits;
    for (std::size_t i = 0; i < m.locations.size(); ++i)
        if (m.locations[i].init) inits.push_back(i);
    if (inits.empty()) throw ParseError("no location declares initial states");
    if (inits.size() > 1)
        throw ParseError("multiple locations declare initial states; exactly one is supported");
    m.initial_location = inits.front();

    return m;
}

RacModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open model file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_model(ss.str());
}

std::string serialize_model(const RacModel& m) {
    const std::size_t t = m.variables.time_index;
    ordered_json doc;
    doc["variables"] = ordered_json::array();
    for (std::size_t i = 0; i < m.variables.dim(); ++i) {
        if (i == t) continue;
        ordered_json v;
        v["name"] = m.variables.names[i];
        v["random"] = m.variables.is_random(i);
        if (m.variables.is_random(i)) {
            const auto& dist = m.distribution_of_clock(i);
            ordered_json dj;
            switch (dist.kind) {
                case DistKind::Uniform:
                    dj["kind"] = "uniform";
                    dj["params"] = {dist.a, dist.b};
                    break;
                case DistKind::FoldedNormal:
                    dj["kind"] = "normal";
                    dj["params"] = {dist.mu, dist.sigma};
                    break;
                case DistKind::Exponential:
                    dj["kind"] = "exponential";
                    dj["params"] = {dist.lambda};
                    break;
            }
            v["distribution"] = dj;
        }
        doc["variables"].push_back(v);
    }
    doc["locations"] = ordered_json::array();
    for (const auto& loc : m.locations) {
        ordered_json lj;
        lj["name"] = loc.name;
        ordered_json inv, flow;
        for (std::size_t i = 0; i < m.variables.dim(); ++i) {
            if (i == t) continue;
            if (!loc.invariant[i].is_full() && !m.variables.is_random(i))
                inv[m.variables.names[i]] = interval_to_json(loc.invariant[i]);
            const auto& f = loc.flow[i];
            if (!(f.is_point() && f.lower == 0.0))
                flow[m.variables.names[i]] = interval_to_json(f);
        }
        if (!inv.is_null()) lj["invariant"] = inv;
        if (!flow.is_null()) lj["flow"] = flow;
        if (loc.init) {
            ordered_json init;
            for (std::size_t i = 0; i < m.variables.dim(); ++i) {
                if (i == t || m.variables.is_random(i)) continue;
                init[m.variables.names[i]] = interval_to_json((*loc.init)[i]);
            }
            lj["init"] = init.is_null() ? ordered_json::object() : init;
        }
        doc["locations"].push_back(lj);
    }
    doc["jumps"] = ordered_json::array();
    for (const auto& j : m.jumps) {
        ordered_json jj;
        jj["source"] = m.locations[j.source].name;
        jj["target"] = m.locations[j.target].name;
        ordered_json guard, reset;
        for (std::size_t i = 0; i < m.variables.dim(); ++i) {
            if (i == t) continue;
            if (!j.guard[i].is_full())
                guard[m.variables.names[i]] = interval_to_json(j.guard[i]);
            if (!j.reset[i].identity)
                reset[m.variables.names[i]] = interval_to_json(j.reset[i].interval);
        }
        if (!guard.is_null()) jj["guard"] = guard;
        if (!reset.is_null()) jj["reset"] = reset;
        if (j.event) jj["event"] = m.variables.names[*j.event];
        doc["jumps"].push_back(jj);
    }
    return doc.dump(2);
}

// ── Validation ───────────────────────────────────────────────────────────────

namespace {

bool interval_subset(const IntervalBound& a, const IntervalBound& b) {
    return a.lower >= b.lower && a.upper <= b.upper;
}

}  // namespace

ValidationReport validate(const RacModel& m) {
    ValidationReport rep;
    const auto& vars = m.variables;
    const std::size_t t = vars.time_index;
    auto flag = [&rep](std::string code, std::string msg) {
        rep.findings.push_back({std::move(code), std::move(msg)});
    };

    if (vars.dim() < 2)
        flag("variable-space", "model needs at least one variable besides t");

    for (const auto& loc : m.locations) {
        for (std::size_t i = 0; i < vars.dim(); ++i) {
            if (loc.flow[i].is_empty())
                flag("flow-empty", "location " + loc.name + ": empty flow for " + vars.names[i]);
        }
        if (!(loc.flow[t].is_point() && loc.flow[t].lower == 1.0))
            flag("time-flow", "location " + loc.name + ": flow of t must be [1,1]");
        if (loc.init) {
            for (std::size_t i = 0; i < vars.dim(); ++i)
                if (!interval_subset((*loc.init)[i], loc.invariant[i]))
                    flag("init-outside-invariant",
                         "location " + loc.name + ": init exceeds invariant for " + vars.names[i]);
            if (!((*loc.init)[t].is_point() && (*loc.init)[t].lower == 0.0))
                flag("time-init", "location " + loc.name + ": init of t must be 0");
        }
        for (std::size_t r : vars.random_indices) {
            bool leaves = false;
            for (const auto& j : m.jumps)
                if (j.source == m.location_index(loc.name).value() && j.event && *j.event == r)
                    leaves = true;
            const auto& fl = loc.flow[r];
            const bool rate1 = fl.is_point() && fl.lower == 1.0;
            const bool rate0 = fl.is_point() && fl.lower == 0.0;
            if (!(rate0 || rate1))
                flag("random-clock-flow",
                     "location " + loc.name + ": flow of clock " + vars.names[r] +
                         " must be 0 or 1");
            else if (rate1 != leaves)
                flag("random-clock-flow-inconsistent",
                     "location " + loc.name + ": random-clock flow inconsistent for " +
                         vars.names[r]);
            if (!loc.invariant[r].is_full())
                flag("random-clock-invariant",
                     "location " + loc.name + ": invariant restricts clock " + vars.names[r]);
            if (loc.init && !((*loc.init)[r].is_point() && (*loc.init)[r].lower == 0.0))
                flag("random-clock-init",
                     "location " + loc.name + ": init of clock " + vars.names[r] + " must be 0");
        }
    }

    for (std::size_t k = 0; k < m.jumps.size(); ++k) {
        const auto& j = m.jumps[k];
        const std::string where = "jump " + j.label + " (" + m.locations[j.source].name +
                                  " -> " + m.locations[j.target].name + ")";
        if (j.stochastic()) {
            for (std::size_t i = 0; i < vars.dim(); ++i)
                if (!j.guard[i].is_full()) {
                    flag("stochastic-jump-guarded", where + ": stochastic jumps must be nonguarded");
                    break;
                }
        }
        for (std::size_t r : vars.random_indices) {
            if (!j.guard[r].is_full())
                flag("random-clock-guarded", where + ": guard restricts clock " + vars.names[r]);
            if (!j.reset[r].identity)
                flag("random-clock-reset", where + ": clock " + vars.names[r] + " must not be reset");
        }
        // Reset compatibility with the target invariant.
        const auto& target_inv = m.locations[j.target].invariant;
        const auto& source_inv = m.locations[j.source].invariant;
        for (std::size_t i = 0; i < vars.dim(); ++i) {
            if (j.reset[i].identity) {
                IntervalBound passed{std::max(source_inv[i].lower, j.guard[i].lower),
                                     std::min(source_inv[i].upper, j.guard[i].upper)};
                if (!passed.is_empty() && !interval_subset(passed, target_inv[i]))
                    flag("reset-compatibility",
                         where + ": identity-passed values of " + vars.names[i] +
                             " exceed target invariant");
            } else if (!interval_subset(j.reset[i].interval, target_inv[i])) {
                flag("reset-compatibility",
                     where + ": reset of " + vars.names[i] + " exceeds target invariant");
            }
        }
    }

    // Once-per-path: an event occurring on a jump e2 reachable from the target
    // of a same-event jump e1 yields a path with two occurrences.
    const std::size_t n = m.locations.size();
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) reach[i][i] = true;
    for (const auto& j : m.jumps) reach[j.source][j.target] = true;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t l = 0; l < n; ++l)
                if (reach[i][k] && reach[k][l]) reach[i][l] = true;
    for (const auto& e1 : m.jumps) {
        if (!e1.event) continue;
        for (const auto& e2 : m.jumps) {
            if (!e2.event || *e2.event != *e1.event) continue;
            if (reach[e1.target][e2.source]) {
                flag("event-twice-on-path",
                     "random event " + vars.names[*e1.event] + " occurs twice on a path (" +
                         m.locations[e1.source].name + " ... " + m.locations[e2.source].name + ")");
            }
        }
    }

    rep.notes.push_back("nonblocking condition: not checked");
    return rep;
}

}  // namespace racv
