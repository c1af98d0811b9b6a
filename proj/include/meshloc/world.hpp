#pragma once

#include <algorithm>
#include <vector>

#include "meshloc/types.hpp"

namespace meshloc {

struct Waypoint {
    double t = 0.0;  // seconds
    Position pos;
};

/// Piecewise-linear motion. Times are strictly increasing; queries outside
/// the span clamp to the nearest endpoint (hovering semantics).
struct Trajectory {
    std::vector<Waypoint> waypoints;
};

inline Position position_at(const Trajectory& traj, double t) {
    const auto& wp = traj.waypoints;
    if (wp.empty()) return {};
    if (t <= wp.front().t) return wp.front().pos;
    if (t >= wp.back().t) return wp.back().pos;
    auto hi = std::upper_bound(wp.begin(), wp.end(), t,
                               [](double v, const Waypoint& w) { return v < w.t; });
    auto lo = hi - 1;
    double u = (t - lo->t) / (hi->t - lo->t);
    return lo->pos + (hi->pos - lo->pos) * u;
}

/// Affine local clock: local = true * (1 + drift_ppm * 1e-6) + offset_ns.
struct ClockModel {
    double offset_ns = 0.0;
    double drift_ppm = 0.0;

    double local_time(double t_true_ns) const {
        return t_true_ns * (1.0 + drift_ppm * 1e-6) + offset_ns;
    }

    /// Duration between two instants as measured by this clock. Equal to
    /// local_time(t1) - local_time(t0) in exact arithmetic (offset cancels),
    /// computed from the true delta so short intervals keep full precision.
    double local_duration(double t0_true_ns, double t1_true_ns) const {
        return (t1_true_ns - t0_true_ns) * (1.0 + drift_ppm * 1e-6);
    }
};

struct Aabb {
    Vec3 min;
    Vec3 max;

    bool contains(const Vec3& p) const {
        return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y &&
               p.z >= min.z && p.z <= max.z;
    }
};

/// Slab test, inclusive bounds: grazing a face counts as intersection.
inline bool segment_intersects(const Aabb& box, const Vec3& a, const Vec3& b) {
    double tmin = 0.0, tmax = 1.0;
    const double d[3] = {b.x - a.x, b.y - a.y, b.z - a.z};
    const double o[3] = {a.x, a.y, a.z};
    const double lo[3] = {box.min.x, box.min.y, box.min.z};
    const double hi[3] = {box.max.x, box.max.y, box.max.z};
    for (int i = 0; i < 3; ++i) {
        if (d[i] == 0.0) {
            if (o[i] < lo[i] || o[i] > hi[i]) return false;
            continue;
        }
        double t1 = (lo[i] - o[i]) / d[i];
        double t2 = (hi[i] - o[i]) / d[i];
        if (t1 > t2) std::swap(t1, t2);
        tmin = std::max(tmin, t1);
        tmax = std::min(tmax, t2);
        if (tmin > tmax) return false;
    }
    return true;
}

/// Time window over a region during which the Wi-Fi channel is degraded.
struct InterferenceWindow {
    double start = 0.0;  // seconds, inclusive
    double end = 0.0;    // seconds, exclusive
    Aabb region;
    double attenuation = 0.0;  // in [0,1]; 1 kills the link
};

struct World {
    std::vector<Aabb> obstacles;
    std::vector<InterferenceWindow> interference_windows;

    /// Strongest interference factor among windows active at t that cover
    /// either endpoint; 0 when none applies.
    double attenuation_at(double t, const Vec3& a, const Vec3& b) const {
        double att = 0.0;
        for (const auto& w : interference_windows) {
            if (t < w.start || t >= w.end) continue;
            if (w.region.contains(a) || w.region.contains(b))
                att = std::max(att, w.attenuation);
        }
        return att;
    }
};

inline bool is_nlos(const World& world, const Position& a, const Position& b) {
    for (const auto& box : world.obstacles)
        if (segment_intersects(box, a, b)) return true;
    return false;
}

struct NodeConfig {
    NodeId id = 0;
    Trajectory trajectory;
    ClockModel clock;
    bool is_gateway = false;
    bool is_anchor = false;  // position known a priori at all times
    bool has_altimeter = false;
    double altimeter_sigma = 0.0;  // meters
};

}  // namespace meshloc
