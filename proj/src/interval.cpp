#include "mapfr/interval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace mapfr {

double Time::as_double() const {
    return unbounded_ ? std::numeric_limits<double>::infinity() : value_;
}

bool approx_equal(Time a, Time b, double tol) {
    if (a.is_unbounded() || b.is_unbounded()) return a.is_unbounded() == b.is_unbounded();
    return std::abs(a.value() - b.value()) <= tol;
}

std::string format_time(Time t) {
    if (t.is_unbounded()) return "inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", t.value());
    return buf;
}

TimeInterval TimeInterval::make(double lo, Time hi, bool lo_closed, bool hi_closed) {
    if (!std::isfinite(lo)) throw std::invalid_argument("interval lower bound must be finite");
    if (hi.is_finite() && !std::isfinite(hi.value()))
        throw std::invalid_argument("finite interval upper bound must be a finite number");
    if (hi.is_unbounded()) hi_closed = false;
    if (hi < lo) return {};
    if (hi == Time(lo) && !(lo_closed && hi_closed)) return {};
    TimeInterval iv;
    iv.lo_ = lo;
    iv.hi_ = hi;
    iv.lo_closed_ = lo_closed;
    iv.hi_closed_ = hi_closed;
    iv.empty_ = false;
    return iv;
}

double TimeInterval::lo() const {
    if (empty_) throw std::logic_error("lo() of an empty interval");
    return lo_;
}

Time TimeInterval::hi() const {
    if (empty_) throw std::logic_error("hi() of an empty interval");
    return hi_;
}

Time TimeInterval::width() const {
    if (empty_) return 0.0;
    if (hi_.is_unbounded()) return Time::unbounded();
    return hi_.value() - lo_;
}

bool TimeInterval::contains(double t) const {
    if (empty_) return false;
    const bool above = lo_closed_ ? t >= lo_ : t > lo_;
    if (!above) return false;
    if (hi_.is_unbounded()) return true;
    return hi_closed_ ? t <= hi_.value() : t < hi_.value();
}

bool TimeInterval::intersects_closed(double a, Time b) const {
    return !intersect(make(a, b, true, true)).is_empty();
}

TimeInterval TimeInterval::intersect(const TimeInterval& other) const {
    if (empty_ || other.empty_) return {};
    double lo = lo_;
    bool lo_closed = lo_closed_;
    if (other.lo_ > lo || (other.lo_ == lo && !other.lo_closed_)) {
        lo = other.lo_;
        lo_closed = other.lo_closed_;
    }
    Time hi = hi_;
    bool hi_closed = hi_closed_;
    if (other.hi_ < hi || (other.hi_ == hi && !other.hi_closed_)) {
        hi = other.hi_;
        hi_closed = other.hi_closed_;
    }
    return make(lo, hi, lo_closed, hi_closed);
}

TimeInterval TimeInterval::shifted(double delta) const {
    if (empty_) return {};
    return make(lo_ + delta, hi_ + delta, lo_closed_, hi_closed_);
}

bool TimeInterval::approx_equals(const TimeInterval& other, double tol) const {
    if (empty_ || other.empty_) return empty_ == other.empty_;
    return std::abs(lo_ - other.lo_) <= tol && approx_equal(hi_, other.hi_, tol) &&
           lo_closed_ == other.lo_closed_ && hi_closed_ == other.hi_closed_;
}

std::string TimeInterval::to_string() const {
    if (empty_) return "empty";
    return std::string(lo_closed_ ? "[" : "(") + format_time(lo_) + ", " + format_time(hi_) +
           (hi_closed_ ? "]" : ")");
}

std::vector<TimeInterval> complement(std::vector<TimeInterval> forbidden) {
    std::erase_if(forbidden, [](const TimeInterval& iv) { return iv.is_empty(); });
    std::sort(forbidden.begin(), forbidden.end(), [](const TimeInterval& a, const TimeInterval& b) {
        if (a.lo() != b.lo()) return a.lo() < b.lo();
        return a.lo_closed() && !b.lo_closed();
    });
    std::vector<TimeInterval> safe;
    Time cursor = 0.0;
    bool cursor_closed = true;
    for (const TimeInterval& f : forbidden) {
        if (cursor.is_unbounded()) break;
        const TimeInterval gap = TimeInterval::make(cursor.value(), f.lo(), cursor_closed, !f.lo_closed());
        if (!gap.is_empty()) safe.push_back(gap);
        if (f.hi() > cursor) {
            cursor = f.hi();
            cursor_closed = !f.hi_closed();
        } else if (f.hi() == cursor && f.hi_closed()) {
            cursor_closed = false;
        }
    }
    if (cursor.is_finite()) {
        const TimeInterval tail = TimeInterval::make(cursor.value(), Time::unbounded(), cursor_closed, false);
        if (!tail.is_empty()) safe.push_back(tail);
    }
    return safe;
}

std::optional<double> earliest_in(const std::vector<TimeInterval>& safe, double t) {
    for (const TimeInterval& iv : safe) {
        if (iv.contains(t)) return t;
        if (iv.lo() < t) continue;
        const double candidate = iv.lo_closed() ? iv.lo() : iv.lo() + kEpsilon;
        if (iv.contains(candidate)) return candidate;
    }
    return std::nullopt;
}

}  // namespace mapfr
