#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "mapfr/constraints.hpp"

namespace mapfr {

/// How the planner treats waiting.
///
/// Continuous: waits have any duration and come out of the interval search
/// as "depart at the earliest safe time". Motion: the same search, after
/// which a wait forbidden by a wait-signature constraint is split into two
/// shorter waits of equal total length. DiscreteTime: departures only at
/// arrival + k * unit and every wait is one unit long.
enum class PlannerMode { Continuous, Motion, DiscreteTime };

struct PlannerOptions {
    PlannerMode mode = PlannerMode::Continuous;
    double unit = 1.0;  // DiscreteTime only
    std::size_t max_expansions = 2'000'000;  // safety net only
};

/// Safe presence intervals per vertex and safe departure intervals per
/// directed edge for one agent, plus the constraints the tables cannot hold.
struct SafeIntervalTable {
    std::vector<std::vector<TimeInterval>> vertex;
    std::map<std::pair<VertexId, VertexId>, std::vector<TimeInterval>> edge;
    std::vector<MotionConstraint> finite_waits;    // wait signatures with a finite duration
    std::vector<MotionConstraint> terminal_waits;  // unbounded wait signatures
    double horizon = 0.0;  // latest finite constraint endpoint

    /// Safe departures for u -> v; everything is safe when unconstrained.
    const std::vector<TimeInterval>& departures(VertexId u, VertexId v) const;
    /// Safe starts of the unbounded wait at `v`.
    std::vector<TimeInterval> terminal_starts(VertexId v) const;
    /// Does a wait of `duration` at `v` starting at `start` break a wait constraint?
    bool wait_forbidden(VertexId v, double start, Time duration) const;
};

SafeIntervalTable build_safe_intervals(const Instance& inst, AgentId agent,
                                       const std::vector<Constraint>& constraints);

/// Exact shortest-path distance to `goal` from every vertex; unbounded when unreachable.
std::vector<Time> admissible_heuristic(const Instance& inst, VertexId goal);

/// Minimum completion-time plan satisfying every constraint on `agent`, or
/// nullopt when the goal cannot be reached. Constraints on other agents are ignored.
std::optional<Plan> plan_path(const Instance& inst, AgentId agent, const std::vector<Constraint>& constraints,
                              const PlannerOptions& options = {});

/// Splits `wait` into consecutive pieces of the same total length, none of
/// which breaks a wait constraint in `table`. The first split is at the midpoint.
std::vector<TimedMotion> evade_wait_constraints(const SafeIntervalTable& table, const TimedMotion& wait);

}  // namespace mapfr
