#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mapfr/geometry.hpp"

namespace mapfr {

using VertexId = std::size_t;
using EdgeId = std::size_t;
using AgentId = std::size_t;

struct Vertex {
    std::string name;
    Coordinate position{0.0, 0.0};
};

/// Undirected edge. Traversal time equals length (unit speed).
struct Edge {
    VertexId u = 0;
    VertexId v = 0;
    double length = 0.0;
};

struct Agent {
    std::string name;
    VertexId start = 0;
    VertexId goal = 0;
};

struct Neighbor {
    VertexId vertex;
    double length;
};

/// Embedded weighted graph plus agents sharing one radius.
class Instance {
public:
    std::vector<Vertex> vertices;
    std::vector<Edge> edges;
    std::vector<Agent> agents;
    double radius = 0.0;

    VertexId add_vertex(std::string name, Coordinate position);
    /// Length defaults to the Euclidean distance between the endpoints.
    EdgeId add_edge(VertexId u, VertexId v, std::optional<double> length = std::nullopt);
    AgentId add_agent(std::string name, VertexId start, VertexId goal);

    std::optional<VertexId> find_vertex(const std::string& name) const;
    std::optional<AgentId> find_agent(const std::string& name) const;
    std::optional<EdgeId> find_edge(VertexId u, VertexId v) const;

    /// Adjacency sorted by neighbor id. Rebuilt lazily after mutation.
    const std::vector<Neighbor>& neighbors(VertexId v) const;

    const Coordinate& position(VertexId v) const { return vertices.at(v).position; }

private:
    mutable std::vector<std::vector<Neighbor>> adjacency_;
    mutable bool adjacency_dirty_ = true;
};

/// A move along an edge or a wait at a vertex, starting at `start`.
struct TimedMotion {
    enum class Kind { Move, Wait };

    Kind kind = Kind::Wait;
    VertexId from = 0;
    VertexId to = 0;  // == from for waits
    double start = 0.0;
    Time duration = 0.0;

    static TimedMotion move(const Instance& inst, VertexId from, VertexId to, double start);
    static TimedMotion wait(VertexId at, double start, Time duration);

    bool is_wait() const { return kind == Kind::Wait; }
    bool is_terminal() const { return is_wait() && duration.is_unbounded(); }
    Time end() const { return start + duration; }

    KinematicSegment segment(const Instance& inst) const;
};

struct Plan {
    AgentId agent = 0;
    std::vector<TimedMotion> motions;

    /// End of the last move; the agent stays at its goal from then on.
    double completion_time() const;
};

struct Solution {
    std::vector<Plan> plans;  // indexed by agent id
};

/// Sum of individual completion times.
double sic(const Solution& sol);

/// Two timed motions of distinct agents whose agents come strictly closer than 2r.
struct Conflict {
    AgentId agent_i = 0;
    AgentId agent_j = 0;
    TimedMotion motion_i;
    TimedMotion motion_j;
    TimeInterval interval;  // open collision interval
};

/// Thrown when a plan breaks continuity, timing, or endpoint invariants.
class StructuralError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Every violated instance invariant, one message per violation.
std::vector<std::string> validate_instance(const Instance& inst);

/// Empty when the plan is structurally valid for its agent, otherwise a description.
std::optional<std::string> check_plan(const Instance& inst, const Plan& plan);

/// Builds a normalized plan: merges nothing, but materializes the implicit
/// start wait when the first motion starts after 0, drops zero-length waits,
/// and appends the terminal wait at the goal when missing.
Plan normalize_plan(const Instance& inst, AgentId agent, std::vector<TimedMotion> motions);

/// Pairwise conflicts between every two timed motions of different agents.
/// Throws StructuralError when any plan is malformed.
std::vector<Conflict> validate_solution(const Instance& inst, const Solution& sol);

/// Conflict between two specific timed motions, if they collide.
std::optional<Conflict> make_conflict(const Instance& inst, AgentId i, const TimedMotion& mi,
                                      AgentId j, const TimedMotion& mj);

/// Does an agent parked at v block traversal of edge e? v must not be an endpoint of e.
bool edge_overlapping(const Instance& inst, VertexId v, EdgeId e);

/// Are two parked agents at distinct vertices v1, v2 in collision?
bool vertex_overlapping(const Instance& inst, VertexId v1, VertexId v2);

struct Classification {
    struct EdgeWitness {
        VertexId vertex;
        EdgeId edge;
    };
    struct VertexWitness {
        VertexId first;
        VertexId second;
    };
    bool non_overlapping = true;
    std::vector<EdgeWitness> edge_witnesses;
    std::vector<VertexWitness> vertex_witnesses;
};

/// Non-overlapping class iff no vertex blocks any non-incident edge and no
/// two vertices are closer than 2r. All witnesses are reported.
Classification classify(const Instance& inst);

}  // namespace mapfr
