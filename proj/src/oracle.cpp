#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>
#include <unordered_set>

#include "mapfr/ccbs.hpp"

namespace mapfr {

namespace {

struct AgentState {
    VertexId vertex = 0;
    double time = 0.0;
    double last_arrival = 0.0;
    bool finished = false;
};

struct JointNode {
    std::vector<AgentState> agents;
    // Per agent, committed motions that can still overlap a future motion.
    std::vector<std::vector<TimedMotion>> active;
    long parent = -1;
    AgentId mover = 0;
    TimedMotion committed;
    double f = 0.0;
};

long long tick(double x) { return std::llround(x * 1e9); }

std::string state_key(const JointNode& n) {
    std::ostringstream key;
    for (std::size_t a = 0; a < n.agents.size(); ++a) {
        const AgentState& s = n.agents[a];
        key << s.vertex << ':' << tick(s.time) << ':' << tick(s.last_arrival) << ':' << s.finished << '[';
        for (const TimedMotion& m : n.active[a])
            key << int(m.kind) << ',' << m.from << ',' << m.to << ',' << tick(m.start) << ','
                << (m.duration.is_unbounded() ? -1 : tick(m.duration.value())) << ';';
        key << ']';
    }
    return key.str();
}

}  // namespace

std::optional<Solution> oracle_dt(const Instance& inst, double unit, double cost_bound, const OracleLimits& limits) {
    if (inst.agents.size() > limits.max_agents || inst.vertices.size() > limits.max_vertices)
        throw OracleRefused("oracle handles at most " + std::to_string(limits.max_agents) + " agents and " +
                            std::to_string(limits.max_vertices) + " vertices");
    if (!std::isfinite(cost_bound) || cost_bound < 0.0) throw OracleRefused("oracle needs a finite cost bound");
    if (!(unit > 0.0)) throw OracleRefused("unit wait must be positive");

    const std::size_t n = inst.agents.size();
    std::vector<std::vector<Time>> h;
    for (const Agent& a : inst.agents) h.push_back(admissible_heuristic(inst, a.goal));

    auto lower_bound = [&](const std::vector<AgentState>& agents) {
        double f = 0.0;
        for (std::size_t a = 0; a < n; ++a) {
            const AgentState& s = agents[a];
            if (s.finished || s.vertex == inst.agents[a].goal) f += s.last_arrival;
            else f += s.time + h[a][s.vertex].as_double();
        }
        return f;
    };

    std::vector<JointNode> nodes;
    JointNode root;
    for (const Agent& a : inst.agents) root.agents.push_back({a.start, 0.0, 0.0, false});
    root.active.assign(n, {});
    root.f = lower_bound(root.agents);
    if (root.f > cost_bound + kEpsilon) return std::nullopt;

    using Entry = std::tuple<double, std::size_t, long>;  // f, seq, node
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
    std::unordered_set<std::string> seen{state_key(root)};
    nodes.push_back(std::move(root));
    open.push({nodes.back().f, 0, 0});
    std::size_t seq = 1;

    auto collides = [&](const JointNode& node, AgentId self, const TimedMotion& m) {
        const KinematicSegment seg = m.segment(inst);
        for (AgentId b = 0; b < n; ++b) {
            if (b == self) continue;
            for (const TimedMotion& other : node.active[b]) {
                if (!(Time(other.start) < m.end()) || !(Time(m.start) < other.end())) continue;
                if (!collision_interval(seg, other.segment(inst), inst.radius).is_empty()) return true;
            }
        }
        return false;
    };

    while (!open.empty()) {
        const long index = std::get<2>(open.top());
        open.pop();
        const JointNode node = nodes[index];

        std::optional<AgentId> next;
        for (AgentId a = 0; a < n; ++a)
            if (!node.agents[a].finished && (!next || node.agents[a].time < node.agents[*next].time)) next = a;

        if (!next) {
            std::vector<std::vector<TimedMotion>> motions(n);
            for (long k = index; nodes[k].parent >= 0; k = nodes[k].parent)
                motions[nodes[k].mover].push_back(nodes[k].committed);
            Solution sol;
            for (AgentId a = 0; a < n; ++a) {
                std::reverse(motions[a].begin(), motions[a].end());
                sol.plans.push_back(normalize_plan(inst, a, motions[a]));
            }
            return sol;
        }

        const AgentId a = *next;
        const AgentState& s = node.agents[a];
        if (s.time > cost_bound + kEpsilon) continue;  // nothing useful can start this late

        std::vector<std::pair<TimedMotion, bool>> actions;  // motion, finishes
        if (s.vertex == inst.agents[a].goal) actions.push_back({TimedMotion::wait(s.vertex, s.time, Time::unbounded()), true});
        actions.push_back({TimedMotion::wait(s.vertex, s.time, unit), false});
        for (const Neighbor& nb : inst.neighbors(s.vertex))
            actions.push_back({TimedMotion::move(inst, s.vertex, nb.vertex, s.time), false});

        for (const auto& [m, finishes] : actions) {
            if (collides(node, a, m)) continue;
            JointNode child;
            child.agents = node.agents;
            AgentState& cs = child.agents[a];
            if (finishes) {
                cs.finished = true;
            } else {
                cs.time = m.end().value();
                cs.vertex = m.to;
                if (!m.is_wait()) cs.last_arrival = cs.time;
            }
            double t_min = std::numeric_limits<double>::infinity();
            for (const AgentState& x : child.agents)
                if (!x.finished) t_min = std::min(t_min, x.time);
            child.active = node.active;
            child.active[a].push_back(m);
            for (auto& list : child.active)
                std::erase_if(list, [&](const TimedMotion& x) { return x.end() <= Time(t_min); });
            child.f = lower_bound(child.agents);
            if (child.f > cost_bound + kEpsilon) continue;
            if (!seen.insert(state_key(child)).second) continue;
            child.parent = index;
            child.mover = a;
            child.committed = m;
            if (nodes.size() >= limits.max_states) throw std::runtime_error("oracle state limit reached");
            nodes.push_back(std::move(child));
            open.push({nodes.back().f, seq++, static_cast<long>(nodes.size() - 1)});
        }
    }
    return std::nullopt;
}

}  // namespace mapfr
