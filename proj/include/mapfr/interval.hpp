#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mapfr/time.hpp"

namespace mapfr {

/// A real time interval with independently open or closed ends.
///
/// The upper end may be unbounded (always treated as open). Empty intervals
/// are a distinguished value: construction normalizes any lo > hi, or a
/// degenerate lo == hi that is not closed on both sides, to empty().
class TimeInterval {
public:
    TimeInterval() = default;  // empty

    static TimeInterval empty() { return {}; }
    static TimeInterval make(double lo, Time hi, bool lo_closed, bool hi_closed);
    static TimeInterval open(double lo, Time hi) { return make(lo, hi, false, false); }
    static TimeInterval closed(double lo, Time hi) { return make(lo, hi, true, true); }
    /// [lo, hi)
    static TimeInterval half_open(double lo, Time hi) { return make(lo, hi, true, false); }

    bool is_empty() const { return empty_; }
    explicit operator bool() const { return !empty_; }

    double lo() const;
    Time hi() const;
    bool lo_closed() const { return lo_closed_; }
    bool hi_closed() const { return hi_closed_; }

    /// Length; unbounded for unbounded intervals, 0 for empty.
    Time width() const;

    bool contains(double t) const;

    /// Does a closed occupancy window [a, b] share a point with this interval?
    bool intersects_closed(double a, Time b) const;

    TimeInterval intersect(const TimeInterval& other) const;
    TimeInterval shifted(double delta) const;

    /// Boundaries and closedness match, boundaries within tol.
    bool approx_equals(const TimeInterval& other, double tol = kEpsilon) const;

    std::string to_string() const;

private:
    double lo_ = 0.0;
    Time hi_ = 0.0;
    bool lo_closed_ = false;
    bool hi_closed_ = false;
    bool empty_ = true;
};

/// Complement within [0, inf) of the union of `forbidden`, as sorted
/// disjoint intervals. Single safe instants between two open intervals survive.
std::vector<TimeInterval> complement(std::vector<TimeInterval> forbidden);

/// Earliest instant >= t inside sorted disjoint `safe` intervals. An open
/// lower end is entered kEpsilon after the boundary.
std::optional<double> earliest_in(const std::vector<TimeInterval>& safe, double t);

}  // namespace mapfr
