#pragma once

#include <Eigen/Core>

#include "mapfr/interval.hpp"

namespace mapfr {

using Coordinate = Eigen::Vector2d;

/// A straight-line motion at unit speed, or a stationary wait, with a
/// concrete departure time.
///
/// Moves have duration equal to the Euclidean distance between origin and
/// target. Waits have origin == target and any positive duration, possibly
/// unbounded (an agent parked at its goal).
struct KinematicSegment {
    Coordinate origin{0.0, 0.0};
    Coordinate target{0.0, 0.0};
    double departure = 0.0;
    Time duration = 0.0;

    static KinematicSegment move(const Coordinate& from, const Coordinate& to, double departure);
    static KinematicSegment wait(const Coordinate& at, double departure, Time duration);

    bool is_wait() const { return origin == target; }
    Time arrival() const { return departure + duration; }
    /// Unit velocity along the segment, zero for waits.
    Coordinate velocity() const;
    /// Same geometry and duration, departing at another time.
    KinematicSegment departing_at(double t) const;
};

/// Position at absolute time t. Throws std::domain_error outside the active window.
Coordinate position_at(const KinematicSegment& seg, double t);

/// Open interval during which the two centres are strictly closer than 2r,
/// restricted to the shared active window. Empty when they never are; a
/// shared window of a single instant never collides.
TimeInterval collision_interval(const KinematicSegment& a, const KinematicSegment& b, double r);

bool in_collision(const KinematicSegment& a, const KinematicSegment& b, double r);

/// Collision interval of a mover against an agent parked at `wait_vertex`
/// for all time, via the perpendicular-foot construction: the mover enters
/// the 2r disc at P1 = H - |P1H| along the segment, with H the foot of the
/// perpendicular from the parked agent, and leaves at H + |P1H| or at its
/// arrival, whichever comes first. Clipped to the mover's own window.
TimeInterval wait_move_collision_interval(const Coordinate& wait_vertex,
                                          const KinematicSegment& mover, double r);

/// Departure times of `target` (its own departure is the reference one,
/// assumed to collide) that put it in collision with `fixed`.
///
/// The colliding departures form one open interval (lo, hi); the result is
/// that interval restricted to admissible departures t >= 0, so it is
/// [0, hi) when lo < 0. hi may be unbounded against a terminal wait.
TimeInterval unsafe_interval(const KinematicSegment& target, const KinematicSegment& fixed,
                             double r);

/// Minimum centre distance over the shared open window (+inf if disjoint).
double min_distance(const KinematicSegment& a, const KinematicSegment& b);

}  // namespace mapfr
