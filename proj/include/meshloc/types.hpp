#pragma once

#include <cmath>
#include <cstdint>

namespace meshloc {

/// Node identifier, unique and stable within a scenario. Fits the 16-bit
/// id field used by all wire frames.
using NodeId = std::uint16_t;

/// Speed of light, the conversion between time of flight and distance.
inline constexpr double kSpeedOfLightMetersPerNs = 0.299792458;
inline constexpr double kSpeedOfLightMetersPerS = 299792458.0;

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    constexpr bool operator==(const Vec3& o) const = default;

    double norm() const { return std::sqrt(x * x + y * y + z * z); }
    double norm_xy() const { return std::sqrt(x * x + y * y); }
    bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

/// All frames share a common orientation, so a pose reduces to a translation.
using Position = Vec3;

inline double distance(const Vec3& a, const Vec3& b) { return (a - b).norm(); }

}  // namespace meshloc
