#include <doctest.h>

#include "support.hpp"

using namespace mapfr;
using doctest::Approx;

namespace {

const KinematicSegment kCrossing = KinematicSegment::move({-2, 0}, {2, 0}, 0.0);
const KinematicSegment kParked = KinematicSegment::wait({0, 0}, 0.0, 10.0);

KinematicSegment random_segment(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dep(0.0, 5.0), dur(0.5, 20.0), coin(0.0, 1.0);
    const Coordinate a = testing::random_point(rng, -10, 10);
    if (coin(rng) < 0.25) return KinematicSegment::wait(a, dep(rng), dur(rng));
    return KinematicSegment::move(a, testing::random_point(rng, -10, 10), dep(rng));
}

}  // namespace

TEST_CASE("position_at follows the segment at unit speed") {
    const auto mid = position_at(KinematicSegment::move({0, 0}, {4, 0}, 0.0), 2.0);
    CHECK(mid.isApprox(Coordinate(2, 0)));
    CHECK(position_at(KinematicSegment::wait({1, 1}, 5.0, Time::unbounded()), 100.0).isApprox(Coordinate(1, 1)));
    const auto diag = KinematicSegment::move({0, 0}, {3, 4}, 1.0);
    CHECK(diag.duration.value() == Approx(5.0));
    CHECK(position_at(diag, 6.0).isApprox(Coordinate(3, 4)));
    CHECK_THROWS_AS(position_at(diag, 0.5), std::domain_error);
    CHECK_THROWS_AS(position_at(diag, 6.5), std::domain_error);
}

TEST_CASE("in_collision on basic configurations") {
    CHECK_FALSE(in_collision(KinematicSegment::wait({0, 0}, 0, 5), KinematicSegment::wait({3, 0}, 0, 5), 0.5));
    CHECK(in_collision(kParked, kCrossing, 0.5));
    CHECK(in_collision(KinematicSegment::wait({1, 1}, 0, 5), KinematicSegment::wait({1, 1}, 2, 5), 0.5));
    // Windows touching at a single instant never collide.
    CHECK_FALSE(in_collision(KinematicSegment::wait({1, 1}, 0, 2), KinematicSegment::wait({1, 1}, 2, 5), 0.5));
}

TEST_CASE("collision_interval matches hand-derived windows") {
    const TimeInterval c = collision_interval(kParked, kCrossing, 0.5);
    CHECK(c.approx_equals(TimeInterval::open(1.0, 3.0)));
    const TimeInterval late = collision_interval(kParked, kCrossing.departing_at(8.0), 0.5);
    CHECK(late.approx_equals(TimeInterval::open(9.0, 10.0)));
    CHECK(collision_interval(KinematicSegment::wait({0, 0}, 0, 5), KinematicSegment::wait({0, 3}, 0, 5), 0.5).is_empty());
}

TEST_CASE("collision is strict at exactly 2r") {
    const auto mover = KinematicSegment::move({0, 0}, {4, 0}, 0.0);
    const auto parked = KinematicSegment::wait({2, 1}, 0.0, Time::unbounded());
    CHECK(min_distance(mover, parked) == Approx(1.0));
    CHECK_FALSE(in_collision(mover, parked, 0.5));
    CHECK(collision_interval(mover, parked, 0.5).is_empty());
    CHECK(in_collision(mover, parked, 0.5 + 1e-6));
}

TEST_CASE("wait_move_collision_interval by the perpendicular foot") {
    const double half = std::sqrt(1.25);
    const TimeInterval c = wait_move_collision_interval({0, 1}, kCrossing, 0.75);
    CHECK(c.approx_equals(TimeInterval::open(2.0 - half, std::min(2.0 + half, 4.0))));
    CHECK(wait_move_collision_interval({0, 5}, kCrossing, 0.75).is_empty());
    // A vertex on the path: width 2*(2r) around the crossing.
    const auto long_move = KinematicSegment::move({-5, 0}, {5, 0}, 1.0);
    CHECK(wait_move_collision_interval({0, 0}, long_move, 0.5).approx_equals(TimeInterval::open(5.0, 7.0)));
    // Start inside the disc: clipped to the mover's departure.
    CHECK(wait_move_collision_interval({-1.8, 0}, kCrossing, 0.5).approx_equals(TimeInterval::open(0.0, 1.2)));
}

TEST_CASE("unsafe_interval against finite and terminal waits") {
    const TimeInterval u = unsafe_interval(kCrossing, kParked, 0.5);
    CHECK(u.approx_equals(TimeInterval::half_open(0.0, 9.0)));
    const auto terminal = KinematicSegment::wait({0, 0}, 0.0, Time::unbounded());
    const TimeInterval forever = unsafe_interval(kCrossing, terminal, 0.5);
    CHECK(forever.lo() == 0.0);
    CHECK(forever.lo_closed());
    CHECK(forever.hi().is_unbounded());
    CHECK(unsafe_interval(kCrossing, KinematicSegment::wait({0, 5}, 0, 10), 0.5).is_empty());

    // Against a parked agent appearing later the interval is open on both ends.
    const auto later = KinematicSegment::wait({0, 0}, 20.0, 10.0);
    const TimeInterval mid = unsafe_interval(kCrossing.departing_at(18.0), later, 0.5);
    CHECK(mid.approx_equals(TimeInterval::open(17.0, 29.0), 1e-7));
}

TEST_CASE("unsafe_interval agrees with a departure-time grid") {
    std::mt19937_64 rng(11);
    int checked = 0;
    for (int i = 0; i < 400; ++i) {
        const KinematicSegment fixed = random_segment(rng);
        const KinematicSegment target = random_segment(rng);
        const double r = std::uniform_real_distribution<double>(0.1, 1.0)(rng);
        if (!in_collision(target, fixed, r)) continue;
        ++checked;
        const TimeInterval u = unsafe_interval(target, fixed, r);
        REQUIRE_FALSE(u.is_empty());
        CHECK(u.contains(target.departure));
        for (double tau = 0.0; tau < 40.0; tau += 1e-2) {
            const bool hit = in_collision(target.departing_at(tau), fixed, r);
            const bool near_edge = std::abs(tau - u.lo()) < 2e-3 ||
                                   (u.hi().is_finite() && std::abs(tau - u.hi().value()) < 2e-3);
            if (!near_edge) CHECK(hit == u.contains(tau));
        }
    }
    CHECK(checked > 20);
}

TEST_CASE("collision_interval against the sampling oracle") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 500; ++i) {
        const KinematicSegment a = random_segment(rng);
        const KinematicSegment b = random_segment(rng);
        const double r = std::uniform_real_distribution<double>(0.1, 1.0)(rng);
        const TimeInterval c = collision_interval(a, b, r);
        const auto s = testing::sample_collision(a, b, r, 1e-3);
        CAPTURE(i);
        if (c.is_empty()) {
            CHECK((!s.any || s.last - s.first < 2e-3));
            continue;
        }
        if (c.width().value() < 2e-3) continue;
        REQUIRE(s.any);
        CHECK(std::abs(s.first - c.lo()) < 2e-3);
        CHECK(std::abs(s.last - c.hi().value()) < 2e-3);
    }
}

TEST_CASE("collision is symmetric and shift covariant") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> shift(0.0, 10.0);
    for (int i = 0; i < 1000; ++i) {
        const KinematicSegment a = random_segment(rng);
        const KinematicSegment b = random_segment(rng);
        const double r = 0.5;
        CHECK(in_collision(a, b, r) == in_collision(b, a, r));
        const TimeInterval ab = collision_interval(a, b, r);
        CHECK(ab.approx_equals(collision_interval(b, a, r)));

        if (a.is_wait()) continue;
        const auto cover = KinematicSegment::wait(b.origin, 0.0, 100.0);
        const double d = shift(rng);
        const TimeInterval base = collision_interval(a, cover, r);
        const TimeInterval delayed = collision_interval(a.departing_at(a.departure + d), cover, r);
        CHECK(delayed.approx_equals(base.shifted(d), 1e-9));
    }
}

TEST_CASE("wait_move_collision_interval equals collision_interval") {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 2000; ++i) {
        const Coordinate o = testing::random_point(rng, -10, 10);
        KinematicSegment mover = random_segment(rng);
        if (mover.is_wait()) continue;
        const double r = std::uniform_real_distribution<double>(0.1, 1.0)(rng);
        const auto parked = KinematicSegment::wait(o, 0.0, Time::unbounded());
        CHECK(wait_move_collision_interval(o, mover, r).approx_equals(collision_interval(parked, mover, r), 1e-9));
    }
}
