#pragma once

#include <cmath>
#include <filesystem>
#include <random>

#include "mapfr/constraints.hpp"
#include "mapfr/geometry.hpp"
#include "mapfr/model.hpp"
#include "mapfr/scenario_io.hpp"

#ifndef MAPFR_DATA_DIR
#define MAPFR_DATA_DIR "data"
#endif

namespace testing {

inline std::filesystem::path data_path(const std::string& name) { return std::filesystem::path(MAPFR_DATA_DIR) / name; }

inline mapfr::Instance fixture(const std::string& name) { return mapfr::load_scenario(data_path(name)); }

/// Colliding samples of two segments on a uniform time grid.
struct SampledCollision {
    bool any = false;
    double first = 0.0;
    double last = 0.0;
};

/// Samples the shared window at `step`; unbounded windows are cut at `horizon`.
inline SampledCollision sample_collision(const mapfr::KinematicSegment& a, const mapfr::KinematicSegment& b, double r,
                                         double step, double horizon = 1e3) {
    SampledCollision s;
    const double lo = std::max(a.departure, b.departure);
    const double hi = std::min({a.arrival().as_double(), b.arrival().as_double(), horizon});
    if (!(lo < hi)) return s;
    const auto n = static_cast<long>(std::floor((hi - lo) / step));
    // Positions are affine in t, so stepping them avoids position_at's checks.
    auto at = [](const mapfr::KinematicSegment& k, double t) -> mapfr::Coordinate {
        return k.origin + k.velocity() * (t - k.departure);
    };
    const mapfr::Coordinate d0 = at(a, lo) - at(b, lo);
    const mapfr::Coordinate dv = a.velocity() - b.velocity();
    const double limit = 4.0 * r * r;
    for (long k = 0; k <= n; ++k) {
        const double t = lo + k * step;
        if (t <= lo || t >= hi) continue;  // the collision window is open
        const mapfr::Coordinate d = d0 + dv * (t - lo);
        if (d.squaredNorm() < limit) {
            if (!s.any) s.first = t;
            s.any = true;
            s.last = t;
        }
    }
    return s;
}

inline mapfr::Coordinate random_point(std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    const double x = u(rng);
    return {x, u(rng)};
}

/// A parked agent at O and a mover on M->N passing within 2r of O.
struct WaitMoveCase {
    mapfr::Instance inst;
    mapfr::Conflict conflict;
};

inline WaitMoveCase random_wait_move(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (;;) {
        WaitMoveCase c;
        c.inst.radius = 0.1 + 0.9 * unit(rng);
        const mapfr::Coordinate m = random_point(rng, 0, 10);
        const mapfr::Coordinate n = random_point(rng, 0, 10);
        if ((n - m).norm() < 1.0) continue;
        const mapfr::Coordinate dir = (n - m).normalized();
        const double offset = (2.0 * unit(rng) - 1.0) * 1.9 * c.inst.radius;
        const mapfr::Coordinate o = m + unit(rng) * (n - m) + offset * mapfr::Coordinate(-dir.y(), dir.x());
        const auto vo = c.inst.add_vertex("O", o);
        const auto vm = c.inst.add_vertex("M", m);
        const auto vn = c.inst.add_vertex("N", n);
        c.inst.add_edge(vm, vn);
        c.inst.add_agent("w", vo, vo);
        c.inst.add_agent("m", vm, vn);
        const double depart = 5.0 * unit(rng);
        const auto wait = mapfr::TimedMotion::wait(vo, 0.0, depart + (n - m).norm() + 5.0);
        const auto move = mapfr::TimedMotion::move(c.inst, vm, vn, depart);
        const auto hit = mapfr::make_conflict(c.inst, 0, wait, 1, move);
        if (!hit || hit->interval.width().value() < 1e-3) continue;
        c.conflict = *hit;
        return c;
    }
}

}  // namespace testing
