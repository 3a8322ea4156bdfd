#include "mapfr/constraints.hpp"

namespace mapfr {

MotionSignature MotionSignature::of(const TimedMotion& m) {
    return {m.kind, m.from, m.to, m.is_wait() ? m.duration : Time(0.0)};
}

bool MotionSignature::matches(const TimedMotion& m) const {
    if (m.kind != kind || m.from != from || m.to != to) return false;
    if (kind == TimedMotion::Kind::Move) return true;
    return approx_equal(m.duration, wait_duration);
}

AgentId constrained_agent(const Constraint& c) {
    return std::visit([](const auto& k) { return k.agent; }, c);
}

std::string describe(const Instance& inst, const Constraint& c) {
    if (const auto* m = std::get_if<MotionConstraint>(&c)) {
        std::string motion;
        if (m->motion.kind == TimedMotion::Kind::Move)
            motion = "move " + inst.vertices[m->motion.from].name + "->" + inst.vertices[m->motion.to].name;
        else
            motion = "wait " + inst.vertices[m->motion.from].name + " " + format_time(m->motion.wait_duration);
        return "motion " + inst.agents[m->agent].name + " " + motion + " " + m->forbidden.to_string();
    }
    const auto& v = std::get<VertexRangeConstraint>(c);
    return "vertex " + inst.agents[v.agent].name + " " + inst.vertices[v.vertex].name + " " +
           v.forbidden.to_string();
}

namespace {

MotionConstraint unsafe_constraint(const Instance& inst, AgentId agent, const TimedMotion& own,
                                   const TimedMotion& other) {
    TimeInterval iv = unsafe_interval(own.segment(inst), other.segment(inst), inst.radius);
    // The reference departure collides by construction; keep at least that instant.
    if (iv.is_empty()) iv = TimeInterval::closed(own.start, own.start);
    return {agent, MotionSignature::of(own), iv};
}

}  // namespace

ConstraintPair split_motion(const Instance& inst, const Conflict& c) {
    return {unsafe_constraint(inst, c.agent_i, c.motion_i, c.motion_j),
            unsafe_constraint(inst, c.agent_j, c.motion_j, c.motion_i)};
}

WaitMoveRoles wait_move_roles(const Conflict& c) {
    const bool wi = c.motion_i.is_wait();
    const bool wj = c.motion_j.is_wait();
    if (wi == wj) throw NotApplicable("conflict is not between a wait and a move");
    if (wi) return {c.agent_i, c.agent_j, c.motion_i, c.motion_j};
    return {c.agent_j, c.agent_i, c.motion_j, c.motion_i};
}

ConstraintPair split_vertex_range(const Instance& inst, const Conflict& c, bool from_departure) {
    const WaitMoveRoles roles = wait_move_roles(c);
    TimeInterval range = c.interval;
    if (from_departure) range = TimeInterval::half_open(roles.move.start, c.interval.hi());
    VertexRangeConstraint waiter{roles.waiter, roles.wait.from, range};
    return {waiter, unsafe_constraint(inst, roles.mover, roles.move, roles.wait)};
}

TimeInterval vertex_collision_interval(const Instance& inst, const Conflict& c) {
    const WaitMoveRoles roles = wait_move_roles(c);
    return wait_move_collision_interval(inst.position(roles.wait.from), roles.move.segment(inst),
                                        inst.radius);
}

ShiftParameters ShiftParameters::make(const Instance& inst, const Conflict& c, double delta) {
    const WaitMoveRoles roles = wait_move_roles(c);
    const TimeInterval collision = vertex_collision_interval(inst, c);
    if (collision.is_empty()) throw ParameterError("mover never comes within 2r of the waiter's vertex");
    const double width = collision.width().value();
    if (!(delta >= 0.0) || !(delta < width))
        throw ParameterError("shift delta must lie in [0, |collision interval|)");
    ShiftParameters p;
    p.delta = delta;
    p.collision = collision;
    p.shift = TimeInterval::closed(roles.move.start, roles.move.start + delta);
    p.overlap = TimeInterval::open(collision.lo() + delta, collision.hi());
    return p;
}

ConstraintPair split_shifting(const Instance& /*inst*/, const Conflict& c, const ShiftParameters& p) {
    const WaitMoveRoles roles = wait_move_roles(c);
    VertexRangeConstraint waiter{roles.waiter, roles.wait.from, p.overlap};
    MotionConstraint mover{roles.mover, MotionSignature::of(roles.move), p.shift};
    return {waiter, mover};
}

bool satisfies(const Instance& /*inst*/, const Plan& plan, const Constraint& k) {
    if (constrained_agent(k) != plan.agent) return true;
    if (const auto* mc = std::get_if<MotionConstraint>(&k)) {
        for (const TimedMotion& m : plan.motions)
            if (mc->motion.matches(m) && mc->forbidden.contains(m.start)) return false;
        return true;
    }
    const auto& vr = std::get<VertexRangeConstraint>(k);
    for (const TimedMotion& m : plan.motions) {
        if (m.is_wait()) {
            if (m.from == vr.vertex && vr.forbidden.intersects_closed(m.start, m.end())) return false;
        } else {
            if (m.from == vr.vertex && vr.forbidden.contains(m.start)) return false;
            if (m.to == vr.vertex && vr.forbidden.contains(m.end().value())) return false;
        }
    }
    return true;
}

namespace {

std::vector<double> sample_grid(const TimeInterval& iv, std::size_t n) {
    std::vector<double> out;
    if (iv.is_empty() || n == 0 || iv.hi().is_unbounded()) return out;
    const double lo = iv.lo();
    const double w = iv.width().value();
    if (w == 0.0) return {lo};
    if (iv.lo_closed() && iv.hi_closed() && n >= 2) {
        for (std::size_t k = 0; k < n; ++k) out.push_back(lo + w * double(k) / double(n - 1));
    } else {
        for (std::size_t k = 0; k < n; ++k) out.push_back(lo + w * (double(k) + 0.5) / double(n));
    }
    return out;
}

}  // namespace

ShiftingSoundnessReport check_shifting_sound(const Instance& inst, const Conflict& c,
                                             const TimeInterval& shift, const TimeInterval& overlap,
                                             std::size_t n_samples) {
    const WaitMoveRoles roles = wait_move_roles(c);
    const Coordinate vertex = inst.position(roles.wait.from);
    const KinematicSegment mover = roles.move.segment(inst);
    ShiftingSoundnessReport report;
    const auto presence = sample_grid(overlap, n_samples);
    for (double d : sample_grid(shift, n_samples)) {
        const TimeInterval hit = wait_move_collision_interval(vertex, mover.departing_at(d), inst.radius);
        for (double t : presence) {
            ++report.pairs;
            if (!hit.contains(t)) ++report.violations;
        }
    }
    return report;
}

ShiftingSoundnessReport check_shifting_sound(const Instance& inst, const Conflict& c,
                                             const ShiftParameters& p, std::size_t n_samples) {
    return check_shifting_sound(inst, c, p.shift, p.overlap, n_samples);
}

bool residual_conflict(const Instance& inst, const Conflict& c, const ShiftParameters& p) {
    if (!(p.delta > 0.0)) return false;
    const WaitMoveRoles roles = wait_move_roles(c);
    const double ts = p.collision.lo();
    const TimedMotion lingering = TimedMotion::wait(roles.wait.from, ts, p.delta);
    Plan waiter{roles.waiter, {lingering}};
    const auto [vertex_child, mover_child] = split_shifting(inst, c, p);
    (void)mover_child;
    if (!satisfies(inst, waiter, vertex_child)) return false;
    return in_collision(lingering.segment(inst), roles.move.segment(inst), inst.radius);
}

}  // namespace mapfr
