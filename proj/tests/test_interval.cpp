#include <doctest.h>

#include "mapfr/interval.hpp"

using namespace mapfr;

TEST_CASE("Time keeps unbounded explicit") {
    const Time inf = Time::unbounded();
    CHECK(inf.is_unbounded());
    CHECK((inf + 5.0).is_unbounded());
    CHECK(Time(3.0) < inf);
    CHECK(inf == Time::unbounded());
    CHECK_THROWS_AS(inf.value(), std::logic_error);
    CHECK(approx_equal(Time(1.0), Time(1.0 + 5e-10)));
    CHECK_FALSE(approx_equal(Time(1.0), inf));
    CHECK(format_time(inf) == "inf");
}

TEST_CASE("construction normalizes empty intervals") {
    CHECK(TimeInterval::open(3, 1).is_empty());
    CHECK(TimeInterval::open(2, 2).is_empty());
    CHECK(TimeInterval::half_open(2, 2).is_empty());
    CHECK_FALSE(TimeInterval::closed(2, 2).is_empty());
    CHECK(TimeInterval::empty().width() == Time(0.0));
    CHECK(TimeInterval::half_open(0, Time::unbounded()).width().is_unbounded());
}

TEST_CASE("membership respects endpoint closedness") {
    const TimeInterval open = TimeInterval::open(1, 3);
    CHECK_FALSE(open.contains(1));
    CHECK(open.contains(2));
    CHECK_FALSE(open.contains(3));
    const TimeInterval closed = TimeInterval::closed(1, 3);
    CHECK(closed.contains(1));
    CHECK(closed.contains(3));
    const TimeInterval forever = TimeInterval::half_open(4, Time::unbounded());
    CHECK(forever.contains(1e12));
    CHECK_FALSE(forever.contains(3.999));
}

TEST_CASE("intersects_closed treats the occupancy as [a, b]") {
    const TimeInterval v = TimeInterval::open(6.5, 6.6);
    CHECK(v.intersects_closed(5.0, 7.0));
    CHECK_FALSE(v.intersects_closed(6.6, 8.0));
    CHECK_FALSE(v.intersects_closed(0.0, 6.5));
    CHECK(TimeInterval::closed(2, 2).intersects_closed(2, 3));
    CHECK(TimeInterval::open(1, 3).intersects_closed(2.5, Time::unbounded()));
}

TEST_CASE("intersect and shift") {
    const TimeInterval a = TimeInterval::half_open(0, 5);
    const TimeInterval b = TimeInterval::open(3, 8);
    CHECK(a.intersect(b).approx_equals(TimeInterval::open(3, 5)));
    CHECK(TimeInterval::open(0, 1).intersect(TimeInterval::open(1, 2)).is_empty());
    CHECK(TimeInterval::closed(0, 1).intersect(TimeInterval::closed(1, 2)).approx_equals(TimeInterval::closed(1, 1)));
    CHECK(b.shifted(2).approx_equals(TimeInterval::open(5, 10)));
    CHECK(a.to_string() == "[0, 5)");
    CHECK(TimeInterval::open(1, Time::unbounded()).to_string() == "(1, inf)");
}

TEST_CASE("complement of forbidden intervals") {
    SUBCASE("nothing forbidden") {
        const auto safe = complement({});
        REQUIRE(safe.size() == 1);
        CHECK(safe[0].approx_equals(TimeInterval::half_open(0, Time::unbounded())));
    }
    SUBCASE("open gap keeps closed ends") {
        const auto safe = complement({TimeInterval::open(2, 5)});
        REQUIRE(safe.size() == 2);
        CHECK(safe[0].approx_equals(TimeInterval::closed(0, 2)));
        CHECK(safe[1].approx_equals(TimeInterval::half_open(5, Time::unbounded())));
    }
    SUBCASE("touching open intervals leave a single safe instant") {
        const auto safe = complement({TimeInterval::open(1, 2), TimeInterval::open(2, 3)});
        REQUIRE(safe.size() == 3);
        CHECK(safe[1].approx_equals(TimeInterval::closed(2, 2)));
    }
    SUBCASE("overlapping and unsorted input merges") {
        const auto safe = complement({TimeInterval::half_open(4, 6), TimeInterval::half_open(0, 1),
                                      TimeInterval::closed(5, 9)});
        REQUIRE(safe.size() == 2);
        CHECK(safe[0].approx_equals(TimeInterval::half_open(1, 4)));
        CHECK(safe[1].approx_equals(TimeInterval::open(9, Time::unbounded())));
    }
    SUBCASE("unbounded forbidden tail") {
        const auto safe = complement({TimeInterval::half_open(0, Time::unbounded())});
        CHECK(safe.empty());
    }
}

TEST_CASE("earliest_in finds the first admissible instant") {
    const auto safe = complement({TimeInterval::half_open(0, 2), TimeInterval::open(3, 5)});
    CHECK(earliest_in(safe, 0.0).value() == doctest::Approx(2.0));
    CHECK(earliest_in(safe, 2.5).value() == doctest::Approx(2.5));
    CHECK(earliest_in(safe, 4.0).value() == doctest::Approx(5.0));
    const auto open_start = complement({TimeInterval::closed(0, 2)});
    const double t = earliest_in(open_start, 0.0).value();
    CHECK(t > 2.0);
    CHECK(t == doctest::Approx(2.0 + kEpsilon));
    CHECK_FALSE(earliest_in(complement({TimeInterval::half_open(1, Time::unbounded())}), 1.5).has_value());
}
