#pragma once

#include <compare>
#include <stdexcept>
#include <string>

namespace mapfr {

/// Global tolerance for interval boundary and duration equality.
inline constexpr double kEpsilon = 1e-9;

/// A point in time or a duration that may be explicitly unbounded.
///
/// Terminal waits last forever and unsafe intervals against them extend
/// forever, so "unbounded" is a first-class state rather than a large
/// floating-point value.
class Time {
public:
    constexpr Time() = default;
    constexpr Time(double value) : value_(value) {}  // NOLINT: implicit by intent

    static constexpr Time unbounded() {
        Time t;
        t.unbounded_ = true;
        return t;
    }

    constexpr bool is_unbounded() const { return unbounded_; }
    constexpr bool is_finite() const { return !unbounded_; }

    double value() const {
        if (unbounded_) throw std::logic_error("value() of an unbounded time");
        return value_;
    }

    /// Finite value, or +inf. Only for numeric comparisons at the edge of the API.
    double as_double() const;

    friend constexpr Time operator+(Time a, Time b) {
        if (a.unbounded_ || b.unbounded_) return unbounded();
        return Time(a.value_ + b.value_);
    }
    friend constexpr Time operator+(Time a, double b) { return a + Time(b); }
    friend constexpr Time operator+(double a, Time b) { return Time(a) + b; }

    friend constexpr bool operator==(Time a, Time b) {
        if (a.unbounded_ || b.unbounded_) return a.unbounded_ == b.unbounded_;
        return a.value_ == b.value_;
    }
    friend constexpr std::partial_ordering operator<=>(Time a, Time b) {
        if (a.unbounded_ && b.unbounded_) return std::partial_ordering::equivalent;
        if (a.unbounded_) return std::partial_ordering::greater;
        if (b.unbounded_) return std::partial_ordering::less;
        return a.value_ <=> b.value_;
    }

private:
    double value_ = 0.0;
    bool unbounded_ = false;
};

inline Time min(Time a, Time b) { return b < a ? b : a; }
inline Time max(Time a, Time b) { return a < b ? b : a; }

/// True when both are unbounded or both finite and within kEpsilon.
bool approx_equal(Time a, Time b, double tol = kEpsilon);

/// 12 significant digits, or "inf".
std::string format_time(Time t);

}  // namespace mapfr
