#include <doctest.h>

#include "mapfr/ccbs.hpp"
#include "support.hpp"

using namespace mapfr;
using doctest::Approx;

namespace {

/// Agent w parked at W = (0,0); agent m crossing L = (-2,0) -> R = (2,0).
struct Crossing {
    Instance inst;
    Conflict conflict;

    explicit Crossing(double wait_for = 10.0, double r = 0.5, double offset = 0.0) {
        inst.radius = r;
        const VertexId w = inst.add_vertex("W", {0, offset});
        const VertexId l = inst.add_vertex("L", {-2, 0});
        const VertexId rr = inst.add_vertex("R", {2, 0});
        inst.add_edge(l, rr);
        inst.add_agent("w", w, w);
        inst.add_agent("m", l, rr);
        conflict = make_conflict(inst, 0, TimedMotion::wait(w, 0.0, wait_for), 1, TimedMotion::move(inst, l, rr, 0.0))
                       .value();
    }
};

Conflict fig2_root_conflict(const Instance& inst) {
    Solution root;
    for (AgentId a = 0; a < inst.agents.size(); ++a) root.plans.push_back(plan_path(inst, a, {}).value());
    return detect_conflict(inst, root).value();
}

/// Agent a1 at V = (0,0) heading to X = (3,0).
Instance parking_lot() {
    Instance inst;
    inst.radius = 0.5;
    const VertexId v = inst.add_vertex("V", {0, 0});
    const VertexId x = inst.add_vertex("X", {3, 0});
    inst.add_edge(v, x);
    inst.add_agent("a1", v, x);
    return inst;
}

}  // namespace

TEST_CASE("split_motion on the fig2 conflict") {
    const Instance inst = testing::fixture("fig2.scn");
    const Conflict c = fig2_root_conflict(inst);
    CHECK(inst.agents[c.agent_i].name == "a1");
    CHECK_FALSE(c.motion_i.is_wait());
    CHECK(c.motion_j.is_terminal());

    const ConstraintPair pair = split_motion(inst, c);
    const auto& mover = std::get<MotionConstraint>(pair.first);
    CHECK(mover.agent == c.agent_i);
    CHECK(mover.forbidden.lo() == 0.0);
    CHECK(mover.forbidden.hi().is_unbounded());
    CHECK(describe(inst, pair.first) == "motion a1 move A->B [0, inf)");

    const auto& waiter = std::get<MotionConstraint>(pair.second);
    CHECK(waiter.agent == c.agent_j);
    CHECK(waiter.motion.kind == TimedMotion::Kind::Wait);
    CHECK(waiter.motion.matches(c.motion_j));
    CHECK(waiter.forbidden.contains(c.motion_j.start));
}

TEST_CASE("split_motion on a head-on move conflict") {
    Instance inst;
    inst.radius = 0.5;
    inst.add_vertex("A", {0, 0});
    inst.add_vertex("B", {4, 0});
    inst.add_edge(0, 1);
    inst.add_agent("a1", 0, 1);
    inst.add_agent("a2", 1, 0);
    const Conflict c =
        make_conflict(inst, 0, TimedMotion::move(inst, 0, 1, 0.0), 1, TimedMotion::move(inst, 1, 0, 0.0)).value();
    const ConstraintPair pair = split_motion(inst, c);
    for (const Constraint& k : {pair.first, pair.second}) {
        const auto& m = std::get<MotionConstraint>(k);
        CHECK(m.forbidden.hi().is_finite());
        CHECK(m.forbidden.contains(0.0));
    }
    CHECK_THROWS_AS(split_vertex_range(inst, c), NotApplicable);
}

TEST_CASE("split_motion intervals shrink as a conflict grazes") {
    // Parallel lanes at distance d: departures within sqrt(4r^2 - d^2) collide.
    double previous = std::numeric_limits<double>::infinity();
    for (double d : {0.5, 0.9, 0.99, 0.999}) {
        Instance inst;
        inst.radius = 0.5;
        inst.add_vertex("A", {0, 0});
        inst.add_vertex("B", {4, 0});
        inst.add_vertex("C", {0, d});
        inst.add_vertex("D", {4, d});
        inst.add_edge(0, 1);
        inst.add_edge(2, 3);
        inst.add_agent("a1", 0, 1);
        inst.add_agent("a2", 2, 3);
        const Conflict c =
            make_conflict(inst, 0, TimedMotion::move(inst, 0, 1, 5.0), 1, TimedMotion::move(inst, 2, 3, 5.0)).value();
        const ConstraintPair pair = split_motion(inst, c);
        for (const Constraint& k : {pair.first, pair.second}) {
            const auto& m = std::get<MotionConstraint>(k);
            CHECK(m.forbidden.width().value() == Approx(2.0 * std::sqrt(1.0 - d * d)).epsilon(1e-6));
            CHECK(m.forbidden.width().value() < previous);
        }
        previous = std::get<MotionConstraint>(pair.first).forbidden.width().value();
    }
    CHECK(previous < 0.1);
}

TEST_CASE("split_vertex_range keeps the waiter off its vertex") {
    const Crossing x;
    CHECK(x.conflict.interval.approx_equals(TimeInterval::open(1, 3)));
    const ConstraintPair pair = split_vertex_range(x.inst, x.conflict);
    const auto& range = std::get<VertexRangeConstraint>(pair.first);
    CHECK(range.agent == 0);
    CHECK(range.vertex == 0);
    CHECK(range.forbidden.approx_equals(TimeInterval::open(1, 3)));
    const auto& move = std::get<MotionConstraint>(pair.second);
    CHECK(move.agent == 1);
    CHECK(move.forbidden.approx_equals(TimeInterval::half_open(0, 9)));

    const Instance fig2 = testing::fixture("fig2.scn");
    const Conflict c = fig2_root_conflict(fig2);
    const ConstraintPair fp = split_vertex_range(fig2, c);
    const auto& fr = std::get<VertexRangeConstraint>(fp.first);
    CHECK(fig2.agents[fr.agent].name == "a2");
    CHECK(fig2.vertices[fr.vertex].name == "B");
    CHECK(fr.forbidden.approx_equals(c.interval));
    CHECK(std::get<MotionConstraint>(fp.second).forbidden.hi().is_unbounded());
}

TEST_CASE("shift parameters split the collision interval") {
    const Crossing x;
    const ShiftParameters p = ShiftParameters::make(x.inst, x.conflict, 1.0);
    CHECK(p.collision.approx_equals(TimeInterval::open(1, 3)));
    CHECK(p.shift.approx_equals(TimeInterval::closed(0, 1)));
    CHECK(p.overlap.approx_equals(TimeInterval::open(2, 3)));
    CHECK(p.shift.width().value() + p.overlap.width().value() == Approx(p.collision.width().value()));

    const ShiftParameters zero = ShiftParameters::make(x.inst, x.conflict, 0.0);
    CHECK(zero.shift.approx_equals(TimeInterval::closed(0, 0)));
    CHECK(zero.overlap.approx_equals(zero.collision));

    const ShiftParameters edge = ShiftParameters::make(x.inst, x.conflict, 2.0 - 1e-6);
    CHECK(edge.overlap.width().value() < 1e-5);
    CHECK_THROWS_AS(ShiftParameters::make(x.inst, x.conflict, 2.0), ParameterError);
    CHECK_THROWS_AS(ShiftParameters::make(x.inst, x.conflict, -0.1), ParameterError);

    const ConstraintPair pair = split_shifting(x.inst, x.conflict, p);
    CHECK(std::get<VertexRangeConstraint>(pair.first).forbidden.approx_equals(p.overlap));
    CHECK(std::get<MotionConstraint>(pair.second).forbidden.approx_equals(p.shift));
}

TEST_CASE("satisfies on the hand examples") {
    const Instance inst = parking_lot();
    const Plan whole = normalize_plan(inst, 0, {TimedMotion::wait(0, 0, 5), TimedMotion::wait(0, 5, 2.0),
                                                TimedMotion::move(inst, 0, 1, 7)});
    const MotionConstraint two{0, MotionSignature{TimedMotion::Kind::Wait, 0, 0, 2.0}, TimeInterval::half_open(4, 6)};
    CHECK_FALSE(satisfies(inst, whole, two));

    const Plan halves = normalize_plan(inst, 0, {TimedMotion::wait(0, 0, 5), TimedMotion::wait(0, 5, 1.0),
                                                 TimedMotion::wait(0, 6, 1.0), TimedMotion::move(inst, 0, 1, 7)});
    CHECK(satisfies(inst, halves, two));
    CHECK(halves.completion_time() == Approx(whole.completion_time()));

    const VertexRangeConstraint busy{0, 0, TimeInterval::open(6.5, 6.6)};
    CHECK_FALSE(satisfies(inst, whole, busy));
    CHECK_FALSE(satisfies(inst, halves, busy));
    const VertexRangeConstraint later{0, 0, TimeInterval::open(7.0, 9.0)};
    CHECK(satisfies(inst, whole, later));
    const VertexRangeConstraint other{1, 0, TimeInterval::open(0, 100)};
    CHECK(satisfies(inst, whole, other));
}

TEST_CASE("midpoint split of any constrained wait keeps SIC") {
    const Instance inst = parking_lot();
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> dur(0.1, 5.0), at(0.0, 5.0);
    for (int i = 0; i < 200; ++i) {
        const double d = dur(rng), t = at(rng);
        std::vector<TimedMotion> head;
        if (t > 0) head.push_back(TimedMotion::wait(0, 0, t));
        auto whole = head;
        whole.push_back(TimedMotion::wait(0, t, d));
        whole.push_back(TimedMotion::move(inst, 0, 1, t + d));
        auto split = head;
        split.push_back(TimedMotion::wait(0, t, d / 2));
        split.push_back(TimedMotion::wait(0, t + d / 2, d / 2));
        split.push_back(TimedMotion::move(inst, 0, 1, t + d));
        const Plan a = normalize_plan(inst, 0, whole), b = normalize_plan(inst, 0, split);
        const MotionConstraint k{0, MotionSignature::of(TimedMotion::wait(0, t, d)),
                                 TimeInterval::closed(std::max(0.0, t - 1), t + 1)};
        CHECK_FALSE(satisfies(inst, a, k));
        CHECK(satisfies(inst, b, k));
        CHECK(b.completion_time() == Approx(a.completion_time()));
    }
}

TEST_CASE("shifting soundness on the hand case") {
    const Crossing x;
    const ShiftParameters p = ShiftParameters::make(x.inst, x.conflict, 1.0);
    const auto sound = check_shifting_sound(x.inst, x.conflict, p, 100);
    CHECK(sound.pairs == 10000);
    CHECK(sound.violations == 0);

    const auto wide = check_shifting_sound(x.inst, x.conflict, p.shift, TimeInterval::open(1.5, 3.0), 100);
    CHECK(wide.violations > 0);

    const auto zero = check_shifting_sound(x.inst, x.conflict, ShiftParameters::make(x.inst, x.conflict, 0.0), 100);
    CHECK(zero.violations == 0);
}

TEST_CASE("residual conflict after a shifting split") {
    const Crossing x;
    CHECK(residual_conflict(x.inst, x.conflict, ShiftParameters::make(x.inst, x.conflict, 1.0)));
    CHECK_FALSE(residual_conflict(x.inst, x.conflict, ShiftParameters::make(x.inst, x.conflict, 0.0)));
    CHECK(residual_conflict(x.inst, x.conflict, ShiftParameters::make(x.inst, x.conflict, 2.0 - 1e-6)));
}

TEST_CASE("shifting constraints are sound and tight on random conflicts") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const auto c = testing::random_wait_move(rng);
        const double width = vertex_collision_interval(c.inst, c.conflict).width().value();
        const double delta = 0.9 * unit(rng) * width;
        const ShiftParameters p = ShiftParameters::make(c.inst, c.conflict, delta);
        CAPTURE(i);
        CHECK(p.shift.width().value() + p.overlap.width().value() == Approx(p.collision.width().value()).epsilon(1e-9));
        CHECK(check_shifting_sound(c.inst, c.conflict, p, 30).violations == 0);
        if (delta > 0.0) CHECK(residual_conflict(c.inst, c.conflict, p));

        // A sliver past either bound already admits a collision-free pair.
        const WaitMoveRoles roles = wait_move_roles(c.conflict);
        const KinematicSegment latest = roles.move.segment(c.inst).departing_at(p.shift.hi().value());
        for (double mu : {1e-3, 1e-1}) {
            const double early = p.collision.lo() + delta - mu / 2;
            const TimeInterval hit = wait_move_collision_interval(c.inst.position(roles.wait.from), latest, c.inst.radius);
            CHECK_FALSE(hit.contains(early));
            const KinematicSegment beyond = roles.move.segment(c.inst).departing_at(p.shift.hi().value() + mu / 2);
            const TimeInterval late = wait_move_collision_interval(c.inst.position(roles.wait.from), beyond, c.inst.radius);
            CHECK_FALSE(late.contains(p.collision.lo() + delta + mu / 4));
        }
    }
}
