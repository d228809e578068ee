#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "leoroute/geometry.hpp"

namespace leoroute {

// One Walker shell: evenly spaced circular planes, evenly spaced slots,
// with an optional inter-plane slot offset fraction.
struct ShellSpec {
    int planeCount = 1;
    int satsPerPlane = 1;
    double altitudeKm = 550.0;
    double inclinationDeg = 53.0;
    double phasingOffset = 0.0;  // fraction of one slot, in [0,1)
    double raan0Deg = 0.0;
    double raanSpanDeg = 360.0;  // 180 for star-style shells, 360 for delta

    int satCount() const { return planeCount * satsPerPlane; }
    void validate() const;  // throws std::invalid_argument naming the field
};

struct ConstellationSpec {
    std::string name;
    std::vector<ShellSpec> shells;
    std::optional<double> islMaxRangeKm;  // unset: occlusion-only visibility
    double gstElevationMaskDeg = 10.0;

    int satCount() const;
    void validate() const;
};

// Circular-orbit elements of a single satellite.
struct SatelliteElements {
    int shell = 0;
    int plane = 0;
    int slot = 0;
    double raanRad = 0.0;
    double inclinationRad = 0.0;
    double phase0Rad = 0.0;
    double radiusKm = 0.0;
    double angularRateRadS = 0.0;
};

std::vector<SatelliteElements> generateShell(const ShellSpec& spec, int shellIndex = 0);

Vec3 positionAt(const SatelliteElements& sat, double tS);

double orbitalPeriodS(const SatelliteElements& sat);

// True iff the segment p1-p2 stays outside the Earth sphere (tangent counts
// as visible).
bool lineOfSight(const Vec3& p1, const Vec3& p2);

// Angle between the local horizon plane at gst and the gst->sat direction.
double elevationAngleDeg(const Vec3& gstPosition, const Vec3& satPosition);

// Fixed ground stations on a seeded, rotated Fibonacci lattice.
struct GroundStationSet {
    int count = 0;
    std::uint64_t seed = 0;
    std::vector<std::pair<double, double>> latLonDeg;

    static GroundStationSet fibonacci(int count, std::uint64_t seed);
    Vec3 positionOf(int index) const;
};

// A fully generated constellation: flat satellite index space across shells.
class Constellation {
public:
    static Constellation build(const ConstellationSpec& spec);

    const ConstellationSpec& spec() const { return spec_; }
    int satCount() const { return static_cast<int>(sats_.size()); }
    const SatelliteElements& elements(int satIndex) const { return sats_[satIndex]; }
    Vec3 positionAt(int satIndex, double tS) const { return leoroute::positionAt(sats_[satIndex], tS); }
    int shellOf(int satIndex) const { return sats_[satIndex].shell; }
    int shellCount() const { return static_cast<int>(shellStart_.size()); }
    // Satellite index range [first, last) of one shell.
    std::pair<int, int> shellRange(int shell) const;

private:
    ConstellationSpec spec_;
    std::vector<SatelliteElements> sats_;
    std::vector<int> shellStart_;
};

// Named presets: "iridium" (66), "starlink" (1584), "leoleo" (1650).
ConstellationSpec constellationPreset(const std::string& name);

}  // namespace leoroute
