#pragma once

#include <cmath>

namespace leoroute {

inline constexpr double kPi = 3.14159265358979323846;

inline double degToRad(double deg) { return deg * kPi / 180.0; }
inline double radToDeg(double rad) { return rad * 180.0 / kPi; }

// Physical constants used everywhere a latency or an orbit is computed.
namespace body {
inline constexpr double kEarthRadiusKm = 6371.0;
inline constexpr double kMuKm3S2 = 398600.4418;
inline constexpr double kCKmPerS = 299792.458;
}  // namespace body

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
};

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

inline double distanceKm(const Vec3& a, const Vec3& b) { return norm(a - b); }

inline Vec3 normalized(const Vec3& a) {
    const double n = norm(a);
    return {a.x / n, a.y / n, a.z / n};
}

inline double propagationDelayS(double distKm) { return distKm / body::kCKmPerS; }

}  // namespace leoroute
