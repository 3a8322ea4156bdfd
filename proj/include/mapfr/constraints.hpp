#pragma once

#include <string>
#include <variant>
#include <vector>

#include "mapfr/model.hpp"

namespace mapfr {

/// Identifies one motion independently of its start time: a directed edge
/// traversal, or a wait at a vertex with one exact duration.
struct MotionSignature {
    TimedMotion::Kind kind = TimedMotion::Kind::Move;
    VertexId from = 0;
    VertexId to = 0;
    Time wait_duration = 0.0;  // waits only

    static MotionSignature of(const TimedMotion& m);
    /// Same edge and direction; for waits, same vertex and duration within kEpsilon.
    bool matches(const TimedMotion& m) const;
};

/// Forbids `agent` from starting `motion` at any time in `forbidden`.
struct MotionConstraint {
    AgentId agent = 0;
    MotionSignature motion;
    TimeInterval forbidden;
};

/// Forbids `agent` from being at `vertex` at any time in the open interval `forbidden`.
struct VertexRangeConstraint {
    AgentId agent = 0;
    VertexId vertex = 0;
    TimeInterval forbidden;
};

using Constraint = std::variant<MotionConstraint, VertexRangeConstraint>;

AgentId constrained_agent(const Constraint& c);
std::string describe(const Instance& inst, const Constraint& c);

/// Result of splitting one conflict: one constraint per child.
struct ConstraintPair {
    Constraint first;   // for conflict.agent_i, or the waiter
    Constraint second;  // for conflict.agent_j, or the mover
};

class NotApplicable : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParameterError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Motion constraints on both sides, each over the maximal unsafe interval of
/// that agent's motion against the other's fixed timed motion.
ConstraintPair split_motion(const Instance& inst, const Conflict& c);

/// Exactly one motion must be a wait: the waiter is kept off its vertex for
/// the collision interval, the mover gets its unsafe interval. `first` is
/// the waiter's constraint. Throws NotApplicable otherwise.
///
/// With `from_departure` the waiter's interval starts at the mover's
/// departure rather than at the collision start; diagnostic use only.
ConstraintPair split_vertex_range(const Instance& inst, const Conflict& c, bool from_departure = false);

/// Which side of a wait-vs-move conflict waits. Throws NotApplicable unless
/// exactly one motion is a wait.
struct WaitMoveRoles {
    AgentId waiter;
    AgentId mover;
    TimedMotion wait;
    TimedMotion move;
};
WaitMoveRoles wait_move_roles(const Conflict& c);

/// Shift interval [t_j, t_j + delta] for the mover and overlap interval
/// (t_s + delta, t_e) for presence at the waiter's vertex, where (t_s, t_e)
/// is the mover's collision interval with anything parked at that vertex.
struct ShiftParameters {
    double delta = 0.0;
    TimeInterval collision;  // (t_s, t_e)
    TimeInterval shift;      // [t_j, t_j + delta]
    TimeInterval overlap;    // (t_s + delta, t_e)

    /// Throws ParameterError unless 0 <= delta < |collision|.
    static ShiftParameters make(const Instance& inst, const Conflict& c, double delta);
};

/// Collision interval of the conflict's mover against its waiter's vertex.
TimeInterval vertex_collision_interval(const Instance& inst, const Conflict& c);

/// (vertex-range on the waiter over `overlap`, motion constraint on the mover over `shift`).
ConstraintPair split_shifting(const Instance& inst, const Conflict& c, const ShiftParameters& p);

/// Does the plan respect the constraint? Constraints on other agents are vacuous.
bool satisfies(const Instance& inst, const Plan& plan, const Constraint& k);

struct ShiftingSoundnessReport {
    std::size_t pairs = 0;
    std::size_t violations = 0;  // forbidden-by-both yet collision-free pairs
};

/// Samples n mover departures across `shift` and n presence instants across
/// `overlap`; every pair is forbidden by both constraints and must collide.
/// Wider intervals may be passed to probe the maximality of the construction.
ShiftingSoundnessReport check_shifting_sound(const Instance& inst, const Conflict& c,
                                             const TimeInterval& shift, const TimeInterval& overlap,
                                             std::size_t n_samples);
ShiftingSoundnessReport check_shifting_sound(const Instance& inst, const Conflict& c,
                                             const ShiftParameters& p, std::size_t n_samples);

/// In the child holding the vertex-range constraint, can the waiter still sit
/// on its vertex over [t_s, t_s + delta] while the mover departs at t_j
/// unconstrained, and do those two collide? True for every delta > 0.
bool residual_conflict(const Instance& inst, const Conflict& c, const ShiftParameters& p);

}  // namespace mapfr
