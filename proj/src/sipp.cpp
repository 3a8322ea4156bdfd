#include "mapfr/sipp.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <stdexcept>

namespace mapfr {

namespace {

const std::vector<TimeInterval>& always_safe() {
    static const std::vector<TimeInterval> all{TimeInterval::half_open(0.0, Time::unbounded())};
    return all;
}

void widen_horizon(double& horizon, const TimeInterval& iv) {
    horizon = std::max(horizon, iv.lo());
    if (iv.hi().is_finite()) horizon = std::max(horizon, iv.hi().value());
}

/// Index of the safe interval holding t, if any.
std::optional<std::size_t> interval_at(const std::vector<TimeInterval>& safe, double t) {
    for (std::size_t k = 0; k < safe.size(); ++k)
        if (safe[k].contains(t)) return k;
    return std::nullopt;
}

/// Does one safe interval cover the closed window [a, b]?
bool covered(const std::vector<TimeInterval>& safe, double a, Time b) {
    const auto k = interval_at(safe, a);
    if (!k) return false;
    const TimeInterval& iv = safe[*k];
    if (b.is_unbounded()) return iv.hi().is_unbounded();
    return iv.contains(b.value());
}

constexpr double kGoldenFraction = 0.6180339887498949;

}  // namespace

const std::vector<TimeInterval>& SafeIntervalTable::departures(VertexId u, VertexId v) const {
    auto it = edge.find({u, v});
    return it == edge.end() ? always_safe() : it->second;
}

std::vector<TimeInterval> SafeIntervalTable::terminal_starts(VertexId v) const {
    std::vector<TimeInterval> forbidden;
    for (const MotionConstraint& c : terminal_waits)
        if (c.motion.from == v) forbidden.push_back(c.forbidden);
    return complement(std::move(forbidden));
}

bool SafeIntervalTable::wait_forbidden(VertexId v, double start, Time duration) const {
    auto hit = [&](const MotionConstraint& c) { return c.motion.from == v && c.forbidden.contains(start); };
    if (duration.is_unbounded()) return std::any_of(terminal_waits.begin(), terminal_waits.end(), hit);
    // finite_waits is sorted by duration, so only the matching band is scanned
    const double d = duration.value();
    auto it = std::lower_bound(finite_waits.begin(), finite_waits.end(), d - kEpsilon,
                               [](const MotionConstraint& c, double x) { return c.motion.wait_duration.value() < x; });
    for (; it != finite_waits.end() && it->motion.wait_duration.value() <= d + kEpsilon; ++it)
        if (hit(*it)) return true;
    return false;
}

SafeIntervalTable build_safe_intervals(const Instance& inst, AgentId agent,
                                       const std::vector<Constraint>& constraints) {
    SafeIntervalTable table;
    std::vector<std::vector<TimeInterval>> vertex_forbidden(inst.vertices.size());
    std::map<std::pair<VertexId, VertexId>, std::vector<TimeInterval>> edge_forbidden;
    for (const Constraint& c : constraints) {
        if (constrained_agent(c) != agent) continue;
        if (const auto* vr = std::get_if<VertexRangeConstraint>(&c)) {
            vertex_forbidden.at(vr->vertex).push_back(vr->forbidden);
            widen_horizon(table.horizon, vr->forbidden);
            continue;
        }
        const auto& mc = std::get<MotionConstraint>(c);
        widen_horizon(table.horizon, mc.forbidden);
        if (mc.motion.kind == TimedMotion::Kind::Move)
            edge_forbidden[{mc.motion.from, mc.motion.to}].push_back(mc.forbidden);
        else if (mc.motion.wait_duration.is_unbounded())
            table.terminal_waits.push_back(mc);
        else
            table.finite_waits.push_back(mc);
    }
    std::stable_sort(table.finite_waits.begin(), table.finite_waits.end(),
                     [](const MotionConstraint& x, const MotionConstraint& y) {
                         return x.motion.wait_duration.value() < y.motion.wait_duration.value();
                     });
    table.vertex.reserve(inst.vertices.size());
    for (auto& f : vertex_forbidden) table.vertex.push_back(complement(std::move(f)));
    for (auto& [key, f] : edge_forbidden) table.edge[key] = complement(std::move(f));
    return table;
}

std::vector<Time> admissible_heuristic(const Instance& inst, VertexId goal) {
    std::vector<Time> dist(inst.vertices.size(), Time::unbounded());
    using Item = std::pair<double, VertexId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
    dist.at(goal) = 0.0;
    open.push({0.0, goal});
    while (!open.empty()) {
        const auto [d, v] = open.top();
        open.pop();
        if (Time(d) > dist[v]) continue;
        for (const Neighbor& n : inst.neighbors(v)) {
            const double nd = d + n.length;
            if (Time(nd) < dist[n.vertex]) {
                dist[n.vertex] = nd;
                open.push({nd, n.vertex});
            }
        }
    }
    return dist;
}

std::vector<TimedMotion> evade_wait_constraints(const SafeIntervalTable& table, const TimedMotion& wait) {
    const double d = wait.duration.value();
    if (!table.wait_forbidden(wait.from, wait.start, d)) return {wait};
    auto piece_ok = [&](double start, double len) {
        return len > 1e-12 && !table.wait_forbidden(wait.from, start, len);
    };
    // Every constraint rules out at most two ratios, so enough distinct
    // ratios always leave one whose pieces are both allowed. The golden
    // sequence is entered past the prefix earlier splits have likely used up.
    const std::size_t tries = 2 * table.finite_waits.size() + 3;
    const std::size_t offset = table.finite_waits.size();
    for (std::size_t k = 0; k < tries; ++k) {
        const double ratio = k == 0 ? 0.5 : std::fmod(double((k - 1 + offset) % tries + 1) * kGoldenFraction, 1.0);
        const double a = ratio * d;
        if (piece_ok(wait.start, a) && piece_ok(wait.start + a, d - a))
            return {TimedMotion::wait(wait.from, wait.start, a), TimedMotion::wait(wait.from, wait.start + a, d - a)};
    }
    throw std::runtime_error("no constraint-free split found for a wait of " + format_time(wait.duration) +
                             " at " + format_time(wait.start));
}

namespace {

struct Step {
    VertexId vertex;
    double arrival;
    double depart_from_parent;  // departure time of the move that led here
    long parent;
};

std::vector<TimedMotion> chain_to_motions(const Instance& inst, const std::vector<Step>& steps, long last) {
    std::vector<long> order;
    for (long k = last; k >= 0; k = steps[k].parent) order.push_back(k);
    std::reverse(order.begin(), order.end());
    std::vector<TimedMotion> out;
    for (std::size_t k = 1; k < order.size(); ++k) {
        const Step& prev = steps[order[k - 1]];
        const Step& cur = steps[order[k]];
        if (cur.depart_from_parent > prev.arrival)
            out.push_back(TimedMotion::wait(prev.vertex, prev.arrival, cur.depart_from_parent - prev.arrival));
        if (cur.vertex == prev.vertex) continue;  // unit wait step in discrete time
        out.push_back(TimedMotion::move(inst, prev.vertex, cur.vertex, cur.depart_from_parent));
    }
    return out;
}

struct OpenEntry {
    double f;
    double g;
    VertexId vertex;
    std::size_t seq;
    long node;
};

struct OpenOrder {
    bool operator()(const OpenEntry& a, const OpenEntry& b) const {
        if (a.f != b.f) return a.f > b.f;
        if (a.g != b.g) return a.g < b.g;
        if (a.vertex != b.vertex) return a.vertex > b.vertex;
        return a.seq > b.seq;
    }
};

using OpenList = std::priority_queue<OpenEntry, std::vector<OpenEntry>, OpenOrder>;

std::optional<std::vector<TimedMotion>> search_continuous(const Instance& inst, AgentId agent,
                                                          const SafeIntervalTable& table,
                                                          const std::vector<Time>& h,
                                                          const PlannerOptions& options) {
    const Agent& a = inst.agents.at(agent);
    const auto first = interval_at(table.vertex[a.start], 0.0);
    if (!first || h[a.start].is_unbounded()) return std::nullopt;
    const auto goal_starts = table.terminal_starts(a.goal);

    std::vector<Step> steps;
    std::vector<std::size_t> step_interval;
    std::map<std::pair<VertexId, std::size_t>, double> best;
    std::set<std::pair<VertexId, std::size_t>> closed;
    OpenList open;
    std::size_t seq = 0;

    auto push = [&](VertexId v, std::size_t k, double t, double depart, long parent) {
        auto [it, fresh] = best.try_emplace({v, k}, t);
        if (!fresh) {
            if (it->second <= t) return;
            it->second = t;
        }
        steps.push_back({v, t, depart, parent});
        step_interval.push_back(k);
        open.push({t + h[v].value(), t, v, seq++, static_cast<long>(steps.size() - 1)});
    };
    push(a.start, *first, 0.0, 0.0, -1);

    std::size_t expansions = 0;
    while (!open.empty()) {
        const OpenEntry top = open.top();
        open.pop();
        const Step cur = steps[top.node];
        const std::size_t k = step_interval[top.node];
        if (!closed.insert({cur.vertex, k}).second) continue;
        if (++expansions > options.max_expansions) throw std::runtime_error("low-level expansion limit reached");
        const TimeInterval& here = table.vertex[cur.vertex][k];

        if (cur.vertex == a.goal && here.hi().is_unbounded()) {
            if (const auto ts = earliest_in(goal_starts, cur.arrival)) {
                auto motions = chain_to_motions(inst, steps, top.node);
                if (*ts > cur.arrival) motions.push_back(TimedMotion::wait(a.goal, cur.arrival, *ts - cur.arrival));
                motions.push_back(TimedMotion::wait(a.goal, *ts, Time::unbounded()));
                return motions;
            }
        }

        for (const Neighbor& n : inst.neighbors(cur.vertex)) {
            if (h[n.vertex].is_unbounded()) continue;
            const auto& deps = table.departures(cur.vertex, n.vertex);
            const auto& there = table.vertex[n.vertex];
            for (std::size_t j = 0; j < there.size(); ++j) {
                const TimeInterval& target = there[j];
                if (target.hi() < Time(cur.arrival + n.length)) continue;
                double lower = std::max(cur.arrival, target.lo() - n.length);
                auto d = earliest_in(deps, lower);
                if (!d || !here.contains(*d)) break;  // later target intervals need later departures
                if (!target.contains(*d + n.length)) {
                    d = earliest_in(deps, *d + kEpsilon);
                    if (!d || !here.contains(*d) || !target.contains(*d + n.length)) continue;
                }
                push(n.vertex, j, *d + n.length, *d, top.node);
            }
        }
    }
    return std::nullopt;
}

std::optional<std::vector<TimedMotion>> search_discrete(const Instance& inst, AgentId agent,
                                                        const SafeIntervalTable& table,
                                                        const std::vector<Time>& h,
                                                        const PlannerOptions& options) {
    const Agent& a = inst.agents.at(agent);
    const double u = options.unit;
    if (!(u > 0.0)) throw std::invalid_argument("unit wait must be positive");
    if (h[a.start].is_unbounded() || !interval_at(table.vertex[a.start], 0.0)) return std::nullopt;
    const auto goal_presence = table.vertex[a.goal];
    const auto goal_starts = table.terminal_starts(a.goal);

    auto can_wait = [&](VertexId v, double t) {
        return covered(table.vertex[v], t, t + u) && !table.wait_forbidden(v, t, u);
    };
    // Unit waits at the goal after arriving at `ta`, before the unbounded wait may begin.
    auto finish_waits = [&](double ta) -> std::optional<std::size_t> {
        const double limit = table.horizon + 2.0 * u;
        double s = ta;
        for (std::size_t k = 0;; ++k, s = ta + double(k) * u) {
            if (covered(goal_presence, s, Time::unbounded()) && earliest_in(goal_starts, s) == s) return k;
            if (s > limit || !can_wait(a.goal, s)) return std::nullopt;
        }
    };

    std::vector<Step> steps;
    std::vector<std::optional<std::size_t>> finishing;  // set on finish entries
    std::set<std::pair<VertexId, long long>> closed;
    OpenList open;
    std::size_t seq = 0;
    auto key = [&](VertexId v, double t) {
        return std::pair<VertexId, long long>{v, t > table.horizon ? -1LL : std::llround(t * 1e9)};
    };
    auto push = [&](VertexId v, double t, double depart, long parent, double f,
                    std::optional<std::size_t> finish = std::nullopt) {
        steps.push_back({v, t, depart, parent});
        finishing.push_back(finish);
        open.push({f, t, v, seq++, static_cast<long>(steps.size() - 1)});
    };
    push(a.start, 0.0, 0.0, -1, h[a.start].value());

    std::size_t expansions = 0;
    while (!open.empty()) {
        const OpenEntry top = open.top();
        open.pop();
        const Step cur = steps[top.node];
        if (const auto k = finishing[top.node]) {
            auto motions = chain_to_motions(inst, steps, cur.parent);
            for (std::size_t w = 0; w < *k; ++w)
                motions.push_back(TimedMotion::wait(a.goal, cur.arrival + double(w) * u, u));
            motions.push_back(TimedMotion::wait(a.goal, cur.arrival + double(*k) * u, Time::unbounded()));
            return motions;
        }
        if (!closed.insert(key(cur.vertex, cur.arrival)).second) continue;
        if (++expansions > options.max_expansions) throw std::runtime_error("low-level expansion limit reached");

        const bool arrived_by_move = top.node == 0 || steps[cur.parent].vertex != cur.vertex;
        if (cur.vertex == a.goal && arrived_by_move) {
            if (const auto k = finish_waits(cur.arrival))
                push(cur.vertex, cur.arrival, cur.arrival, top.node, cur.arrival, k);
        }
        if (can_wait(cur.vertex, cur.arrival)) {
            const double t = cur.arrival + u;
            if (!closed.count(key(cur.vertex, t)))
                push(cur.vertex, t, t, top.node, t + h[cur.vertex].value());
        }
        for (const Neighbor& n : inst.neighbors(cur.vertex)) {
            if (h[n.vertex].is_unbounded()) continue;
            if (!interval_at(table.departures(cur.vertex, n.vertex), cur.arrival)) continue;
            const double t = cur.arrival + n.length;
            if (!interval_at(table.vertex[n.vertex], t) || closed.count(key(n.vertex, t))) continue;
            push(n.vertex, t, cur.arrival, top.node, t + h[n.vertex].value());
        }
    }
    return std::nullopt;
}

}  // namespace

std::optional<Plan> plan_path(const Instance& inst, AgentId agent, const std::vector<Constraint>& constraints,
                              const PlannerOptions& options) {
    const SafeIntervalTable table = build_safe_intervals(inst, agent, constraints);
    const auto h = admissible_heuristic(inst, inst.agents.at(agent).goal);

    std::optional<std::vector<TimedMotion>> motions;
    if (options.mode == PlannerMode::DiscreteTime) {
        motions = search_discrete(inst, agent, table, h, options);
    } else {
        motions = search_continuous(inst, agent, table, h, options);
        if (motions && !table.finite_waits.empty()) {
            std::vector<TimedMotion> repaired;
            for (const TimedMotion& m : *motions) {
                if (m.is_wait() && m.duration.is_finite()) {
                    for (const TimedMotion& piece : evade_wait_constraints(table, m)) repaired.push_back(piece);
                } else {
                    repaired.push_back(m);
                }
            }
            motions = std::move(repaired);
        }
    }
    if (!motions) return std::nullopt;
    Plan plan = normalize_plan(inst, agent, std::move(*motions));
    for (const Constraint& c : constraints)
        if (!satisfies(inst, plan, c))
            throw std::logic_error("planner produced a plan violating " + describe(inst, c));
    return plan;
}

}  // namespace mapfr
