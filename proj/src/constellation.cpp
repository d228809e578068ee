#include "leoroute/constellation.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace leoroute {

void ShellSpec::validate() const {
    if (planeCount < 1) throw std::invalid_argument("ShellSpec.planeCount must be >= 1");
    if (satsPerPlane < 1) throw std::invalid_argument("ShellSpec.satsPerPlane must be >= 1");
    if (!(altitudeKm > 0.0)) throw std::invalid_argument("ShellSpec.altitudeKm must be > 0");
    if (inclinationDeg < 0.0 || inclinationDeg > 180.0)
        throw std::invalid_argument("ShellSpec.inclinationDeg must be in [0,180]");
    if (phasingOffset < 0.0 || phasingOffset >= 1.0)
        throw std::invalid_argument("ShellSpec.phasingOffset must be in [0,1)");
    if (!(raanSpanDeg > 0.0) || raanSpanDeg > 360.0)
        throw std::invalid_argument("ShellSpec.raanSpanDeg must be in (0,360]");
}

int ConstellationSpec::satCount() const {
    int total = 0;
    for (const auto& s : shells) total += s.satCount();
    return total;
}

void ConstellationSpec::validate() const {
    if (shells.empty()) throw std::invalid_argument("ConstellationSpec.shells must be non-empty");
    for (const auto& s : shells) s.validate();
    if (islMaxRangeKm && !(*islMaxRangeKm > 0.0))
        throw std::invalid_argument("ConstellationSpec.islMaxRangeKm must be > 0");
    if (gstElevationMaskDeg < 0.0 || gstElevationMaskDeg >= 90.0)
        throw std::invalid_argument("ConstellationSpec.gstElevationMaskDeg must be in [0,90)");
}

std::vector<SatelliteElements> generateShell(const ShellSpec& spec, int shellIndex) {
    spec.validate();
    const double radiusKm = body::kEarthRadiusKm + spec.altitudeKm;
    const double rate = std::sqrt(body::kMuKm3S2 / (radiusKm * radiusKm * radiusKm));
    const double slotStepRad = 2.0 * kPi / spec.satsPerPlane;

    std::vector<SatelliteElements> sats;
    sats.reserve(spec.satCount());
    for (int p = 0; p < spec.planeCount; ++p) {
        const double raan = degToRad(spec.raan0Deg + spec.raanSpanDeg * p / spec.planeCount);
        for (int s = 0; s < spec.satsPerPlane; ++s) {
            SatelliteElements e;
            e.shell = shellIndex;
            e.plane = p;
            e.slot = s;
            e.raanRad = raan;
            e.inclinationRad = degToRad(spec.inclinationDeg);
            e.phase0Rad = (s + spec.phasingOffset * p) * slotStepRad;
            e.radiusKm = radiusKm;
            e.angularRateRadS = rate;
            sats.push_back(e);
        }
    }
    return sats;
}

Vec3 positionAt(const SatelliteElements& sat, double tS) {
    const double theta = sat.phase0Rad + sat.angularRateRadS * tS;
    const double xo = sat.radiusKm * std::cos(theta);
    const double yo = sat.radiusKm * std::sin(theta);
    // Rotate the in-plane position by inclination about x, then RAAN about z.
    const double ci = std::cos(sat.inclinationRad), si = std::sin(sat.inclinationRad);
    const double co = std::cos(sat.raanRad), so = std::sin(sat.raanRad);
    const Vec3 tilted{xo, yo * ci, yo * si};
    return {tilted.x * co - tilted.y * so, tilted.x * so + tilted.y * co, tilted.z};
}

double orbitalPeriodS(const SatelliteElements& sat) { return 2.0 * kPi / sat.angularRateRadS; }

bool lineOfSight(const Vec3& p1, const Vec3& p2) {
    const Vec3 d = p2 - p1;
    const double dd = dot(d, d);
    double tau = 0.0;
    if (dd > 0.0) tau = std::clamp(-dot(p1, d) / dd, 0.0, 1.0);
    const Vec3 closest = p1 + d * tau;
    return norm(closest) >= body::kEarthRadiusKm;
}

double elevationAngleDeg(const Vec3& gstPosition, const Vec3& satPosition) {
    const Vec3 up = normalized(gstPosition);
    const Vec3 toSat = normalized(satPosition - gstPosition);
    const double s = std::clamp(dot(up, toSat), -1.0, 1.0);
    return radToDeg(std::asin(s));
}

GroundStationSet GroundStationSet::fibonacci(int count, std::uint64_t seed) {
    if (count < 1) throw std::invalid_argument("GroundStationSet.count must be >= 1");
    GroundStationSet set;
    set.count = count;
    set.seed = seed;
    set.latLonDeg.reserve(count);

    // Uniform random rotation (Shoemake) so the lattice orientation is seeded.
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const double u1 = uni(rng), u2 = uni(rng), u3 = uni(rng);
    const double qx = std::sqrt(1.0 - u1) * std::sin(2.0 * kPi * u2);
    const double qy = std::sqrt(1.0 - u1) * std::cos(2.0 * kPi * u2);
    const double qz = std::sqrt(u1) * std::sin(2.0 * kPi * u3);
    const double qw = std::sqrt(u1) * std::cos(2.0 * kPi * u3);
    const auto rotate = [&](const Vec3& v) {
        const Vec3 q{qx, qy, qz};
        const Vec3 t = cross(q, v) * 2.0;
        return v + t * qw + cross(q, t);
    };

    const double goldenAngle = kPi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
        const double z = 1.0 - (2.0 * i + 1.0) / count;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = goldenAngle * i;
        const Vec3 p = rotate({r * std::cos(phi), r * std::sin(phi), z});
        const double lat = radToDeg(std::asin(std::clamp(p.z, -1.0, 1.0)));
        const double lon = radToDeg(std::atan2(p.y, p.x));
        set.latLonDeg.emplace_back(lat, lon);
    }
    return set;
}

Vec3 GroundStationSet::positionOf(int index) const {
    const auto [latDeg, lonDeg] = latLonDeg.at(index);
    const double lat = degToRad(latDeg), lon = degToRad(lonDeg);
    const double r = body::kEarthRadiusKm;
    return {r * std::cos(lat) * std::cos(lon), r * std::cos(lat) * std::sin(lon), r * std::sin(lat)};
}

Constellation Constellation::build(const ConstellationSpec& spec) {
    spec.validate();
    Constellation c;
    c.spec_ = spec;
    for (std::size_t i = 0; i < spec.shells.size(); ++i) {
        c.shellStart_.push_back(static_cast<int>(c.sats_.size()));
        auto shellSats = generateShell(spec.shells[i], static_cast<int>(i));
        c.sats_.insert(c.sats_.end(), shellSats.begin(), shellSats.end());
    }
    return c;
}

std::pair<int, int> Constellation::shellRange(int shell) const {
    const int first = shellStart_.at(shell);
    const int last = (shell + 1 < static_cast<int>(shellStart_.size()))
                         ? shellStart_[shell + 1]
                         : static_cast<int>(sats_.size());
    return {first, last};
}

ConstellationSpec constellationPreset(const std::string& name) {
    ConstellationSpec spec;
    spec.name = name;
    if (name == "iridium") {
        spec.shells = {ShellSpec{6, 11, 780.0, 86.4, 0.0, 0.0, 180.0}};
    } else if (name == "starlink") {
        spec.shells = {ShellSpec{72, 22, 550.0, 53.0, 0.5, 0.0}};
    } else if (name == "leoleo") {
        spec.shells = {ShellSpec{72, 22, 550.0, 53.0, 0.5, 0.0},
                       ShellSpec{6, 11, 780.0, 86.4, 0.0, 0.0, 180.0}};
    } else {
        throw std::invalid_argument("unknown constellation preset: " + name);
    }
    return spec;
}

}  // namespace leoroute
