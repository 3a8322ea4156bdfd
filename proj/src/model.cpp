#include "mapfr/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace mapfr {

VertexId Instance::add_vertex(std::string name, Coordinate position) {
    vertices.push_back({std::move(name), position});
    adjacency_dirty_ = true;
    return vertices.size() - 1;
}

EdgeId Instance::add_edge(VertexId u, VertexId v, std::optional<double> length) {
    const double len = length ? *length : (position(u) - position(v)).norm();
    edges.push_back({u, v, len});
    adjacency_dirty_ = true;
    return edges.size() - 1;
}

AgentId Instance::add_agent(std::string name, VertexId start, VertexId goal) {
    agents.push_back({std::move(name), start, goal});
    return agents.size() - 1;
}

std::optional<VertexId> Instance::find_vertex(const std::string& name) const {
    for (VertexId i = 0; i < vertices.size(); ++i)
        if (vertices[i].name == name) return i;
    return std::nullopt;
}

std::optional<AgentId> Instance::find_agent(const std::string& name) const {
    for (AgentId i = 0; i < agents.size(); ++i)
        if (agents[i].name == name) return i;
    return std::nullopt;
}

std::optional<EdgeId> Instance::find_edge(VertexId u, VertexId v) const {
    for (EdgeId i = 0; i < edges.size(); ++i) {
        const Edge& e = edges[i];
        if ((e.u == u && e.v == v) || (e.u == v && e.v == u)) return i;
    }
    return std::nullopt;
}

const std::vector<Neighbor>& Instance::neighbors(VertexId v) const {
    if (adjacency_dirty_ || adjacency_.size() != vertices.size()) {
        adjacency_.assign(vertices.size(), {});
        for (const Edge& e : edges) {
            if (e.u >= vertices.size() || e.v >= vertices.size()) continue;
            adjacency_[e.u].push_back({e.v, e.length});
            adjacency_[e.v].push_back({e.u, e.length});
        }
        for (auto& list : adjacency_)
            std::sort(list.begin(), list.end(),
                      [](const Neighbor& a, const Neighbor& b) { return a.vertex < b.vertex; });
        adjacency_dirty_ = false;
    }
    return adjacency_.at(v);
}

TimedMotion TimedMotion::move(const Instance& inst, VertexId from, VertexId to, double start) {
    const auto e = inst.find_edge(from, to);
    if (!e) throw std::invalid_argument("no edge between the given vertices");
    return {Kind::Move, from, to, start, Time(inst.edges[*e].length)};
}

TimedMotion TimedMotion::wait(VertexId at, double start, Time duration) {
    return {Kind::Wait, at, at, start, duration};
}

KinematicSegment TimedMotion::segment(const Instance& inst) const {
    if (is_wait()) return KinematicSegment::wait(inst.position(from), start, duration);
    KinematicSegment s = KinematicSegment::move(inst.position(from), inst.position(to), start);
    // Keep the edge's stored length as the duration so timing stays exact.
    s.duration = duration;
    return s;
}

double Plan::completion_time() const {
    double t = 0.0;
    for (const TimedMotion& m : motions)
        if (!m.is_wait()) t = m.end().value();
    return t;
}

double sic(const Solution& sol) {
    double total = 0.0;
    for (const Plan& p : sol.plans) total += p.completion_time();
    return total;
}

std::vector<std::string> validate_instance(const Instance& inst) {
    std::vector<std::string> out;
    if (!(inst.radius > 0.0) || !std::isfinite(inst.radius)) out.push_back("radius must be positive");

    std::set<std::string> names;
    for (const Vertex& v : inst.vertices) {
        if (!names.insert(v.name).second) out.push_back("duplicate vertex id '" + v.name + "'");
        if (!std::isfinite(v.position.x()) || !std::isfinite(v.position.y()))
            out.push_back("non-finite coordinate at vertex '" + v.name + "'");
    }

    const auto n = inst.vertices.size();
    std::set<std::pair<VertexId, VertexId>> seen;
    for (std::size_t i = 0; i < inst.edges.size(); ++i) {
        const Edge& e = inst.edges[i];
        const std::string tag = "edge #" + std::to_string(i);
        if (e.u >= n || e.v >= n) {
            out.push_back(tag + ": unknown endpoint");
            continue;
        }
        const std::string label = tag + " (" + inst.vertices[e.u].name + "," + inst.vertices[e.v].name + ")";
        if (e.u == e.v) out.push_back(label + ": self loop");
        if (!(e.length > 0.0)) out.push_back(label + ": non-positive length");
        const double dist = (inst.position(e.u) - inst.position(e.v)).norm();
        if (std::abs(dist - e.length) > kEpsilon)
            out.push_back(label + ": length mismatch (" + format_time(e.length) + " vs distance " +
                          format_time(dist) + ")");
        if (!seen.insert(std::minmax(e.u, e.v)).second) out.push_back(label + ": duplicate edge");
    }

    std::set<VertexId> starts, goals;
    std::set<std::string> agent_names;
    for (const Agent& a : inst.agents) {
        if (!agent_names.insert(a.name).second) out.push_back("duplicate agent id '" + a.name + "'");
        if (a.start >= n) out.push_back("agent '" + a.name + "': unknown start vertex");
        if (a.goal >= n) out.push_back("agent '" + a.name + "': unknown goal vertex");
        if (!starts.insert(a.start).second) out.push_back("agent '" + a.name + "': duplicate start");
        if (!goals.insert(a.goal).second) out.push_back("agent '" + a.name + "': duplicate goal");
    }
    return out;
}

std::optional<std::string> check_plan(const Instance& inst, const Plan& plan) {
    if (plan.agent >= inst.agents.size()) return "plan for unknown agent";
    const Agent& agent = inst.agents[plan.agent];
    const std::string who = "agent '" + agent.name + "': ";
    if (plan.motions.empty()) return who + "empty plan";

    const TimedMotion& first = plan.motions.front();
    if (first.from != agent.start) return who + "first motion does not leave the start vertex";
    if (std::abs(first.start) > kEpsilon) return who + "plan does not start at time 0";

    for (std::size_t k = 0; k < plan.motions.size(); ++k) {
        const TimedMotion& m = plan.motions[k];
        const std::string at = who + "motion " + std::to_string(k) + ": ";
        if (m.from >= inst.vertices.size() || m.to >= inst.vertices.size())
            return at + "unknown vertex";
        if (m.is_wait()) {
            if (m.from != m.to) return at + "wait must stay at one vertex";
            if (!(m.duration > Time(0.0))) return at + "wait duration must be positive";
            if (m.duration.is_unbounded() && k + 1 != plan.motions.size())
                return at + "unbounded wait before the end of the plan";
        } else {
            const auto e = inst.find_edge(m.from, m.to);
            if (!e) return at + "no edge between the endpoints";
            if (!approx_equal(m.duration, inst.edges[*e].length))
                return at + "move duration differs from edge length";
        }
        if (k > 0) {
            const TimedMotion& prev = plan.motions[k - 1];
            if (m.from != prev.to) return at + "does not start where the previous motion ended";
            if (!approx_equal(Time(m.start), prev.end())) return at + "time gap or overlap with previous motion";
        }
    }
    const TimedMotion& last = plan.motions.back();
    if (!last.is_terminal()) return who + "plan does not end with an unbounded wait";
    if (last.from != agent.goal) return who + "plan does not end at the goal vertex";
    return std::nullopt;
}

Plan normalize_plan(const Instance& inst, AgentId agent, std::vector<TimedMotion> motions) {
    Plan plan;
    plan.agent = agent;
    const VertexId start = inst.agents.at(agent).start;
    if (!motions.empty() && motions.front().start > 0.0)
        plan.motions.push_back(TimedMotion::wait(start, 0.0, motions.front().start));
    for (TimedMotion& m : motions) {
        if (m.is_wait() && m.duration.is_finite() && m.duration.value() <= 1e-12) continue;
        plan.motions.push_back(m);
    }
    if (plan.motions.empty()) {
        plan.motions.push_back(TimedMotion::wait(start, 0.0, Time::unbounded()));
    } else if (!plan.motions.back().is_terminal()) {
        const TimedMotion& last = plan.motions.back();
        plan.motions.push_back(TimedMotion::wait(last.to, last.end().value(), Time::unbounded()));
    }
    return plan;
}

std::optional<Conflict> make_conflict(const Instance& inst, AgentId i, const TimedMotion& mi,
                                      AgentId j, const TimedMotion& mj) {
    const TimeInterval iv = collision_interval(mi.segment(inst), mj.segment(inst), inst.radius);
    if (iv.is_empty()) return std::nullopt;
    return Conflict{i, j, mi, mj, iv};
}

std::vector<Conflict> validate_solution(const Instance& inst, const Solution& sol) {
    if (sol.plans.size() != inst.agents.size())
        throw StructuralError("solution must hold exactly one plan per agent");
    for (AgentId a = 0; a < sol.plans.size(); ++a) {
        if (sol.plans[a].agent != a) throw StructuralError("plans must be ordered by agent");
        if (auto err = check_plan(inst, sol.plans[a])) throw StructuralError(*err);
    }
    std::vector<Conflict> out;
    for (AgentId i = 0; i < sol.plans.size(); ++i) {
        for (AgentId j = i + 1; j < sol.plans.size(); ++j) {
            for (const TimedMotion& mi : sol.plans[i].motions) {
                for (const TimedMotion& mj : sol.plans[j].motions) {
                    if (!(Time(mj.start) < mi.end()) || !(Time(mi.start) < mj.end())) continue;
                    if (auto c = make_conflict(inst, i, mi, j, mj)) out.push_back(*c);
                }
            }
        }
    }
    return out;
}

bool edge_overlapping(const Instance& inst, VertexId v, EdgeId e) {
    const Edge& edge = inst.edges.at(e);
    if (edge.u == v || edge.v == v) throw std::invalid_argument("vertex is an endpoint of the edge");
    const auto mover = KinematicSegment::move(inst.position(edge.u), inst.position(edge.v), 0.0);
    return !wait_move_collision_interval(inst.position(v), mover, inst.radius).is_empty();
}

bool vertex_overlapping(const Instance& inst, VertexId v1, VertexId v2) {
    if (v1 == v2) throw std::invalid_argument("vertex overlap needs two distinct vertices");
    return (inst.position(v1) - inst.position(v2)).norm() < 2.0 * inst.radius;
}

Classification classify(const Instance& inst) {
    Classification c;
    for (VertexId v = 0; v < inst.vertices.size(); ++v) {
        for (EdgeId e = 0; e < inst.edges.size(); ++e) {
            const Edge& edge = inst.edges[e];
            if (edge.u == v || edge.v == v) continue;
            if (edge_overlapping(inst, v, e)) c.edge_witnesses.push_back({v, e});
        }
    }
    for (VertexId a = 0; a < inst.vertices.size(); ++a)
        for (VertexId b = a + 1; b < inst.vertices.size(); ++b)
            if (vertex_overlapping(inst, a, b)) c.vertex_witnesses.push_back({a, b});
    c.non_overlapping = c.edge_witnesses.empty() && c.vertex_witnesses.empty();
    return c;
}

}  // namespace mapfr
