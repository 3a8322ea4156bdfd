#include "mapfr/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mapfr {

namespace {

// Quadratic in s for |d0 + dv s|^2 - R^2, written A s^2 + 2 B s + C.
struct RelativeMotion {
    double w0 = 0.0;  // shared window start
    Time span = 0.0;  // shared window length
    Coordinate d0{0.0, 0.0};
    Coordinate dv{0.0, 0.0};
};

bool shared_window(const KinematicSegment& a, const KinematicSegment& b, RelativeMotion& rel) {
    const double w0 = std::max(a.departure, b.departure);
    const Time w1 = min(a.arrival(), b.arrival());
    if (!(Time(w0) < w1)) return false;
    rel.w0 = w0;
    rel.span = w1.is_unbounded() ? Time::unbounded() : Time(w1.value() - w0);
    rel.d0 = position_at(a, w0) - position_at(b, w0);
    rel.dv = a.velocity() - b.velocity();
    return true;
}

double newton_polish(double s, double A, double B, double C) {
    for (int i = 0; i < 3; ++i) {
        const double g = (A * s + 2.0 * B) * s + C;
        const double dg = 2.0 * (A * s + B);
        if (std::abs(dg) < 1e-300) break;
        const double step = g / dg;
        s -= step;
        if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(s))) break;
    }
    return s;
}

// Bisection on a monotone predicate: pred(inside) is true, pred(outside) false.
// Returns a point on the false side within ~1e-13 of the switch.
template <typename Pred>
double bisect_boundary(double inside, double outside, Pred pred) {
    for (int i = 0; i < 300; ++i) {
        const double mid = 0.5 * (inside + outside);
        if (mid == inside || mid == outside) break;
        if (std::abs(outside - inside) <= 1e-13 * std::max(1.0, std::abs(mid))) break;
        (pred(mid) ? inside : outside) = mid;
    }
    return outside;
}

}  // namespace

KinematicSegment KinematicSegment::move(const Coordinate& from, const Coordinate& to,
                                        double departure) {
    if (from == to) throw std::invalid_argument("a move needs distinct endpoints");
    return {from, to, departure, Time((to - from).norm())};
}

KinematicSegment KinematicSegment::wait(const Coordinate& at, double departure, Time duration) {
    if (!(duration > Time(0.0))) throw std::invalid_argument("wait duration must be positive");
    return {at, at, departure, duration};
}

Coordinate KinematicSegment::velocity() const {
    if (is_wait()) return Coordinate::Zero();
    return (target - origin) / duration.value();
}

KinematicSegment KinematicSegment::departing_at(double t) const {
    KinematicSegment s = *this;
    s.departure = t;
    return s;
}

Coordinate position_at(const KinematicSegment& seg, double t) {
    if (t < seg.departure || Time(t) > seg.arrival())
        throw std::domain_error("time outside the segment's active window");
    if (seg.is_wait()) return seg.origin;
    const double frac = (t - seg.departure) / seg.duration.value();
    return seg.origin + frac * (seg.target - seg.origin);
}

TimeInterval collision_interval(const KinematicSegment& a, const KinematicSegment& b, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("radius must be positive");
    RelativeMotion rel;
    if (!shared_window(a, b, rel)) return TimeInterval::empty();

    const double R = 2.0 * r;
    const double A = rel.dv.squaredNorm();
    const double B = rel.d0.dot(rel.dv);
    const double C = rel.d0.squaredNorm() - R * R;

    if (A < 1e-24) {
        // Constant separation over the whole window.
        if (C < 0.0) return TimeInterval::open(rel.w0, rel.w0 + rel.span);
        return TimeInterval::empty();
    }
    const double disc = B * B - A * C;
    if (disc <= 0.0) return TimeInterval::empty();
    const double sq = std::sqrt(disc);
    const double q = -(B + std::copysign(sq, B));
    double s1 = q / A;
    double s2 = C / q;
    if (s1 > s2) std::swap(s1, s2);
    s1 = newton_polish(s1, A, B, C);
    s2 = newton_polish(s2, A, B, C);

    const double lo = std::max(0.0, s1);
    const double hi = rel.span.is_unbounded() ? s2 : std::min(rel.span.value(), s2);
    if (!(lo < hi)) return TimeInterval::empty();
    return TimeInterval::open(rel.w0 + lo, rel.w0 + hi);
}

bool in_collision(const KinematicSegment& a, const KinematicSegment& b, double r) {
    return !collision_interval(a, b, r).is_empty();
}

double min_distance(const KinematicSegment& a, const KinematicSegment& b) {
    RelativeMotion rel;
    if (!shared_window(a, b, rel)) return std::numeric_limits<double>::infinity();
    const double A = rel.dv.squaredNorm();
    if (A < 1e-24) return rel.d0.norm();
    double s = -rel.d0.dot(rel.dv) / A;
    s = std::max(0.0, s);
    if (rel.span.is_finite()) s = std::min(rel.span.value(), s);
    return (rel.d0 + s * rel.dv).norm();
}

TimeInterval wait_move_collision_interval(const Coordinate& wait_vertex,
                                          const KinematicSegment& mover, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("radius must be positive");
    if (mover.is_wait()) throw std::invalid_argument("mover must be a move segment");

    const double length = mover.duration.value();
    const Coordinate u = (mover.target - mover.origin) / length;
    const Coordinate rel = wait_vertex - mover.origin;
    // Signed distance from M to the perpendicular foot H, and |OH|.
    const double along = rel.dot(u);
    const double perp = std::abs(u.x() * rel.y() - u.y() * rel.x());
    const double R = 2.0 * r;
    if (perp >= R) return TimeInterval::empty();
    const double half_chord = std::sqrt((R - perp) * (R + perp));  // |P1 H|

    const double lo = std::max(0.0, along - half_chord);
    const double hi = std::min(length, along + half_chord);
    if (!(lo < hi)) return TimeInterval::empty();
    return TimeInterval::open(mover.departure + lo, mover.departure + hi);
}

TimeInterval unsafe_interval(const KinematicSegment& target, const KinematicSegment& fixed,
                             double r) {
    const double t0 = target.departure;
    auto collides = [&](double t) { return in_collision(target.departing_at(t), fixed, r); };
    if (!collides(t0)) return TimeInterval::empty();

    // Upper end of the colliding departures.
    Time hi;
    if (fixed.arrival().is_unbounded()) {
        // Once the target starts after `fixed` does, the outcome no longer depends on t.
        const double settled = std::max(t0, fixed.departure) + 1.0;
        if (collides(settled))
            hi = Time::unbounded();
        else
            hi = bisect_boundary(t0, settled, collides);
    } else {
        hi = bisect_boundary(t0, fixed.arrival().value(), collides);
    }

    // Lower end; only matters for whether it clips at zero.
    double lo = 0.0;
    bool clipped = true;
    if (t0 > 0.0) {
        double outside;
        if (target.duration.is_unbounded()) {
            outside = std::min(t0, fixed.departure) - 1.0;
        } else {
            outside = fixed.departure - target.duration.value();
        }
        if (outside < 0.0 && collides(0.0)) {
            clipped = true;
        } else if (target.duration.is_unbounded() && collides(outside)) {
            clipped = true;
        } else {
            lo = bisect_boundary(t0, std::min(outside, t0), collides);
            clipped = lo < 0.0;
        }
    }
    if (clipped) return TimeInterval::half_open(0.0, hi);
    return TimeInterval::open(lo, hi);
}

}  // namespace mapfr
