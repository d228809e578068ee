#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "leoroute/constellation.hpp"

using namespace leoroute;

namespace {

// Standalone Walker generator used as the oracle: phase angles only.
double oracleSlotPhaseDeg(const ShellSpec& spec, int plane, int slot) {
    return std::fmod((slot + spec.phasingOffset * plane) * 360.0 / spec.satsPerPlane, 360.0);
}

double greatCircleSeparationRad(std::pair<double, double> a, std::pair<double, double> b) {
    const double la = degToRad(a.first), lb = degToRad(b.first);
    const double dl = degToRad(a.second - b.second);
    const double s = std::sin(la) * std::sin(lb) + std::cos(la) * std::cos(lb) * std::cos(dl);
    return std::acos(std::clamp(s, -1.0, 1.0));
}

}  // namespace

TEST_CASE("generateShell produces the full plane/slot lattice") {
    const ShellSpec iridiumShell{6, 11, 780.0, 86.4, 0.0, 0.0};
    const auto sats = generateShell(iridiumShell);
    REQUIRE(sats.size() == 66);
    for (int i = 0; i < 66; ++i) {
        CHECK(sats[i].plane == i / 11);
        CHECK(sats[i].slot == i % 11);
    }
    // RAAN spacing uniform over planes.
    for (int p = 0; p + 1 < 6; ++p) {
        const double d = sats[(p + 1) * 11].raanRad - sats[p * 11].raanRad;
        CHECK(d == doctest::Approx(2.0 * kPi / 6.0));
    }
}

TEST_CASE("generateShell degenerate single satellite") {
    const auto sats = generateShell(ShellSpec{1, 1, 550.0, 53.0, 0.0, 0.0});
    REQUIRE(sats.size() == 1);
    CHECK(sats[0].phase0Rad == doctest::Approx(0.0));
    CHECK(sats[0].raanRad == doctest::Approx(0.0));
}

TEST_CASE("generateShell applies the inter-plane phasing offset") {
    const ShellSpec spec{72, 22, 550.0, 53.0, 0.5, 0.0};
    const auto sats = generateShell(spec);
    REQUIRE(sats.size() == 1584);
    // Adjacent-plane slot-0 phase difference, against the oracle generator.
    const double expected = 0.5 * 360.0 / 22.0;
    const double got = radToDeg(sats[22].phase0Rad - sats[0].phase0Rad);
    CHECK(got == doctest::Approx(expected).epsilon(1e-12));
    for (int p = 0; p < 72; p += 17)
        for (int s = 0; s < 22; s += 5) {
            const double oracle = oracleSlotPhaseDeg(spec, p, s);
            const double impl = std::fmod(radToDeg(sats[p * 22 + s].phase0Rad), 360.0);
            CHECK(impl == doctest::Approx(oracle).epsilon(1e-9));
        }
}

TEST_CASE("shell spec validation") {
    CHECK_THROWS(generateShell(ShellSpec{0, 11, 780.0, 86.4, 0.0, 0.0}));
    CHECK_THROWS(generateShell(ShellSpec{6, 11, -1.0, 86.4, 0.0, 0.0}));
    CHECK_THROWS(generateShell(ShellSpec{6, 11, 780.0, 190.0, 0.0, 0.0}));
}

TEST_CASE("positionAt: circular orbit radius, period, and identity orientation") {
    const auto sats = generateShell(ShellSpec{1, 1, 550.0, 0.0, 0.0, 0.0});
    const auto& sat = sats[0];

    // Closed-form Kepler period, evaluated independently of angularRateRadS.
    const double a = 6371.0 + 550.0;
    const double oracleT = 2.0 * kPi * std::sqrt(a * a * a / 398600.4418);
    CHECK(orbitalPeriodS(sat) == doctest::Approx(oracleT).epsilon(1e-12));
    CHECK(oracleT == doctest::Approx(5731.0).epsilon(2e-3));

    // Identity orientation: on the +x axis at t = 0.
    const Vec3 p0 = positionAt(sat, 0.0);
    CHECK(p0.x == doctest::Approx(a));
    CHECK(p0.y == doctest::Approx(0.0));
    CHECK(p0.z == doctest::Approx(0.0));

    // Periodicity and constant radius.
    for (double t : {0.0, 137.0, 2000.5, 4000.0}) {
        const Vec3 p = positionAt(sat, t);
        CHECK(norm(p) == doctest::Approx(a).epsilon(1e-9));
        const Vec3 q = positionAt(sat, t + oracleT);
        CHECK(distanceKm(p, q) < 1e-6);
    }
}

TEST_CASE("position norms constant for inclined shells") {
    const auto sats = generateShell(ShellSpec{6, 11, 780.0, 86.4, 0.0, 0.0});
    for (int i : {0, 13, 42, 65}) {
        const double r0 = norm(positionAt(sats[i], 0.0));
        for (double t : {55.5, 712.0, 7100.0})
            CHECK(norm(positionAt(sats[i], t)) == doctest::Approx(r0).epsilon(1e-9));
    }
}

TEST_CASE("in-plane separation multiset invariant under time shift") {
    const auto sats = generateShell(ShellSpec{3, 5, 550.0, 53.0, 0.25, 10.0});
    const auto separations = [&](double t) {
        std::multiset<long long> out;
        for (int s1 = 0; s1 < 5; ++s1)
            for (int s2 = s1 + 1; s2 < 5; ++s2) {
                const double d = distanceKm(positionAt(sats[s1], t), positionAt(sats[s2], t));
                out.insert(llround(d * 1e6));
            }
        return out;
    };
    CHECK(separations(0.0) == separations(333.3));
}

TEST_CASE("lineOfSight basic cases and symmetry") {
    const double r = 6371.0 + 550.0;
    CHECK(lineOfSight({r, 0, 0}, {r, 1, 0}));
    CHECK_FALSE(lineOfSight({r, 0, 0}, {-r, 0, 0}));

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const Vec3 a = normalized({u(rng), u(rng), u(rng)}) * (6371.0 + 400.0 + 900.0 * (u(rng) + 1.0));
        const Vec3 b = normalized({u(rng), u(rng), u(rng)}) * (6371.0 + 400.0 + 900.0 * (u(rng) + 1.0));
        CHECK(lineOfSight(a, b) == lineOfSight(b, a));
    }
}

TEST_CASE("lineOfSight threshold matches the analytic tangent chord") {
    // Two satellites at equal altitude h see each other up to the chord
    // 2*sqrt((R+h)^2 - R^2) that grazes the surface.
    const double R = 6371.0, h = 550.0, r = R + h;
    const double maxChord = 2.0 * std::sqrt(r * r - R * R);
    CHECK(maxChord == doctest::Approx(5407.5).epsilon(1e-4));

    const auto satPairAtChord = [&](double chord) {
        const double half = std::asin(chord / (2.0 * r));
        const Vec3 a{r * std::cos(half), r * std::sin(half), 0.0};
        const Vec3 b{r * std::cos(half), -r * std::sin(half), 0.0};
        return std::make_pair(a, b);
    };
    const auto [a1, b1] = satPairAtChord(maxChord * (1.0 - 1e-6));
    CHECK(lineOfSight(a1, b1));
    const auto [a2, b2] = satPairAtChord(maxChord * (1.0 + 1e-6));
    CHECK_FALSE(lineOfSight(a2, b2));
}

TEST_CASE("elevation angle: zenith, horizon, and spherical-trig oracle") {
    const double R = 6371.0;
    const Vec3 gst{R, 0, 0};
    CHECK(elevationAngleDeg(gst, {R + 550.0, 0, 0}) == doctest::Approx(90.0));

    // A point on the tangent plane at the station sits on the horizon.
    CHECK(elevationAngleDeg(gst, {R, 1000.0, 0}) == doctest::Approx(0.0).epsilon(1e-9));

    // Oracle: central angle psi, elevation = atan((cos psi - R/r) / sin psi).
    const double psi = degToRad(10.0), r = R + 550.0;
    const double oracle = radToDeg(std::atan2(std::cos(psi) - R / r, std::sin(psi)));
    const Vec3 sat{r * std::cos(psi), r * std::sin(psi), 0.0};
    CHECK(elevationAngleDeg(gst, sat) == doctest::Approx(oracle).epsilon(1e-9));
}

TEST_CASE("ground stations: determinism and pairwise separation") {
    const auto a = GroundStationSet::fibonacci(256, 42);
    const auto b = GroundStationSet::fibonacci(256, 42);
    REQUIRE(a.latLonDeg.size() == 256);
    CHECK(a.latLonDeg == b.latLonDeg);

    const auto c = GroundStationSet::fibonacci(256, 43);
    CHECK(a.latLonDeg != c.latLonDeg);

    double minSep = 1e9;
    for (int i = 0; i < 256; ++i)
        for (int j = i + 1; j < 256; ++j)
            minSep = std::min(minSep, greatCircleSeparationRad(a.latLonDeg[i], a.latLonDeg[j]));
    CHECK(minSep > 0.0);

    const auto single = GroundStationSet::fibonacci(1, 5);
    CHECK(single.latLonDeg.size() == 1);
    CHECK(norm(single.positionOf(0)) == doctest::Approx(6371.0));
}

TEST_CASE("constellation presets total the expected satellite counts") {
    CHECK(Constellation::build(constellationPreset("iridium")).satCount() == 66);
    CHECK(Constellation::build(constellationPreset("starlink")).satCount() == 1584);
    CHECK(Constellation::build(constellationPreset("leoleo")).satCount() == 1650);
    CHECK_THROWS(constellationPreset("geo"));
}
