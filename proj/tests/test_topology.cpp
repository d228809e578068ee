#include <random>

#include "doctest.h"
#include "leoroute/graph.hpp"
#include "leoroute/topology.hpp"

using namespace leoroute;

namespace {

Topology makeTopology(const std::string& preset, int gstCount = 16, std::uint64_t gstSeed = 42) {
    return Topology(Constellation::build(constellationPreset(preset)),
                    GroundStationSet::fibonacci(gstCount, gstSeed));
}

// Floyd-Warshall over an explicit edge list; the all-pairs oracle.
std::vector<double> floydWarshall(int n, const std::vector<std::tuple<int, int, double>>& edges) {
    std::vector<double> d(static_cast<std::size_t>(n) * n, kInf);
    for (int i = 0; i < n; ++i) d[i * n + i] = 0.0;
    for (const auto& [a, b, w] : edges) {
        d[a * n + b] = std::min(d[a * n + b], w);
        d[b * n + a] = std::min(d[b * n + a], w);
    }
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                d[i * n + j] = std::min(d[i * n + j], d[i * n + k] + d[k * n + j]);
    return d;
}

SatGraph randomGraph(int n, double edgeProb, std::mt19937_64& rng) {
    SatGraph g;
    g.timeS = 0.0;
    g.pos.assign(n, {});
    g.adj.assign(n, {});
    std::uniform_real_distribution<double> u(0.001, 1.0);
    std::bernoulli_distribution coin(edgeProb);
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if (coin(rng)) {
                const double w = u(rng);
                g.adj[a].push_back({b, w});
                g.adj[b].push_back({a, w});
                g.presentLinks.emplace_back(a, b);
            }
    return g;
}

}  // namespace

TEST_CASE("ISL grid counts: degree-sum oracle on the presets") {
    const auto iridium = makeTopology("iridium", 4);
    CHECK(iridium.gridLinks().size() == 132);
    std::size_t degreeSum = 0;
    for (int s = 0; s < iridium.satCount(); ++s) degreeSum += iridium.gridNeighborsOf(s).size();
    CHECK(degreeSum == 2 * iridium.gridLinks().size());
    for (int s = 0; s < iridium.satCount(); ++s) CHECK(iridium.gridNeighborsOf(s).size() == 4);

    const auto starlink = makeTopology("starlink", 4);
    CHECK(starlink.gridLinks().size() == 3168);
}

TEST_CASE("ISL grid degenerate ring of two collapses duplicates") {
    Topology topo(Constellation::build(ConstellationSpec{
                      "tiny", {ShellSpec{1, 2, 550.0, 53.0, 0.0, 0.0}}, std::nullopt, 10.0}),
                  GroundStationSet::fibonacci(2, 1));
    CHECK(topo.gridLinks().size() == 1);
}

TEST_CASE("snapshot: edge counts, latency, and total failure") {
    const auto topo = makeTopology("iridium");
    LinkSet none;
    const auto snap = topo.snapshot(0.0, none);
    // Grid links appear in the snapshot exactly when they hold line of sight;
    // only the star seam can be occluded.
    CHECK(snap.sats.presentLinks.size() >= 121);
    CHECK(snap.sats.presentLinks.size() <= 132);
    for (const auto& [a, b] : snap.sats.presentLinks)
        CHECK(lineOfSight(snap.sats.pos[a], snap.sats.pos[b]));
    std::size_t gslEdges = 0;
    for (const auto& v : snap.gslEdges) gslEdges += v.size();
    CHECK(gslEdges > 0);

    for (const auto& [a, b] : snap.sats.presentLinks) {
        const double lat = topo.islLatencyS(a, b, 0.0);
        CHECK(lat > 0.0);
        CHECK(lat == doctest::Approx(distanceKm(snap.sats.pos[a], snap.sats.pos[b]) / 299792.458));
    }

    LinkSet all;
    for (const auto& l : topo.gridLinks()) all.insert(islKey(l.a, l.b));
    const auto dead = topo.snapshot(0.0, all);
    CHECK(dead.sats.presentLinks.empty());
}

TEST_CASE("propagation delay of a 1000 km edge") {
    CHECK(propagationDelayS(1000.0) == doctest::Approx(0.0033356).epsilon(1e-4));
}

TEST_CASE("distance matrix equals Floyd-Warshall on random graphs") {
    std::mt19937_64 rng(2024);
    const Topology topo = makeTopology("iridium", 2);
    for (int rep = 0; rep < 12; ++rep) {
        const SatGraph g = randomGraph(20, 0.2, rng);
        std::vector<std::tuple<int, int, double>> edges;
        for (int a = 0; a < g.size(); ++a)
            for (const auto& e : g.adj[a])
                if (a < e.to) edges.emplace_back(a, e.to, e.latencyS);
        const auto oracle = floydWarshall(20, edges);
        const auto got = topo.distanceMatrix(g);
        REQUIRE(got.size() == oracle.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
            if (oracle[i] == kInf)
                CHECK(got[i] == kInf);
            else
                CHECK(got[i] == doctest::Approx(oracle[i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("distance matrix: trivial shapes") {
    const Topology topo = makeTopology("iridium", 2);
    SatGraph g;
    g.adj.assign(2, {});
    g.pos.assign(2, {});
    g.adj[0].push_back({1, 0.5});
    g.adj[1].push_back({0, 0.5});
    auto d = topo.distanceMatrix(g);
    CHECK(d[0 * 2 + 0] == 0.0);
    CHECK(d[0 * 2 + 1] == 0.5);
    CHECK(d[1 * 2 + 0] == 0.5);

    SatGraph tri;
    tri.adj.assign(3, {});
    tri.pos.assign(3, {});
    const auto add = [&](int a, int b, double w) {
        tri.adj[a].push_back({b, w});
        tri.adj[b].push_back({a, w});
    };
    add(0, 1, 1.0);
    add(1, 2, 1.0);
    add(0, 2, 3.0);
    const auto dt = topo.distanceMatrix(tri);
    CHECK(dt[0 * 3 + 2] == doctest::Approx(2.0));
}

TEST_CASE("distance matrix symmetry and triangle inequality on the live grid") {
    const auto topo = makeTopology("iridium", 2);
    const auto g = topo.satGraphAt(123.0);
    const auto d = topo.distanceMatrix(g);
    const int n = g.size();
    for (int i = 0; i < n; i += 7)
        for (int j = 0; j < n; j += 5) {
            CHECK(d[i * n + j] == doctest::Approx(d[j * n + i]));
            for (int k = 0; k < n; k += 11)
                CHECK(d[i * n + j] <= d[i * n + k] + d[k * n + j] + 1e-12);
        }
    for (int i = 0; i < n; ++i) CHECK(d[i * n + i] == 0.0);
}

TEST_CASE("masking never shortens shortest paths") {
    const auto topo = makeTopology("iridium", 2);
    const auto g = topo.satGraphAt(55.0);
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<std::size_t> pick(0, topo.gridLinks().size() - 1);
    LinkSet mask;
    for (int i = 0; i < 25; ++i) {
        const auto& l = topo.gridLinks()[pick(rng)];
        mask.insert(islKey(l.a, l.b));
    }
    const auto base = shortestDistances(g, 0);
    SearchFilter f;
    f.maskedLinks = &mask;
    const auto masked = shortestDistances(g, 0, f);
    for (int v = 0; v < g.size(); ++v) CHECK(masked.dist[v] >= base.dist[v] - 1e-15);
}

TEST_CASE("contact plan: merge rules and coverage") {
    const auto topo = makeTopology("iridium", 8);
    const auto plan = topo.buildContactPlan(600.0, 10.0);

    // Non-seam grid links of the star shell hold line of sight continuously;
    // the seam pair only meets near the poles, within one half period.
    const auto& shell = topo.constellation().spec().shells[0];
    const int perPlane = shell.satsPerPlane;
    const auto planeOf = [&](int sat) { return sat / perPlane; };
    const auto isSeam = [&](const GridLink& l) {
        const int pa = std::min(planeOf(l.a), planeOf(l.b));
        const int pb = std::max(planeOf(l.a), planeOf(l.b));
        return pa == 0 && pb == shell.planeCount - 1;
    };
    const auto longPlan = topo.buildContactPlan(3200.0, 10.0);
    for (std::size_t li = 0; li < plan.islWindows.size(); ++li) {
        const auto& l = topo.gridLinks()[li];
        if (!isSeam(l)) {
            REQUIRE(plan.islWindows[li].size() == 1);
            CHECK(plan.islWindows[li].front().startS == 0.0);
            CHECK(plan.islWindows[li].front().endS == 600.0);
        } else {
            CHECK(!longPlan.islWindows[li].empty());
        }
    }

    // Windows are sorted and disjoint; every sampled tick inside a window is
    // genuinely visible per the direct geometric evaluation.
    for (int g = 0; g < topo.gstCount(); ++g) {
        for (const auto& [sat, windows] : plan.gslWindows[g]) {
            for (std::size_t i = 0; i + 1 < windows.size(); ++i)
                CHECK(windows[i].endS < windows[i + 1].startS);
            for (const auto& w : windows)
                for (double t = w.startS; t < w.endS; t += 10.0) CHECK(topo.gslVisible(g, sat, t));
        }
    }
}

TEST_CASE("contact plan interval helpers") {
    std::vector<Interval> w{{30.0, 60.0}, {100.0, 110.0}};
    CHECK(ContactPlan::availableAt(w, 30.0));
    CHECK(ContactPlan::availableAt(w, 59.9));
    CHECK_FALSE(ContactPlan::availableAt(w, 60.0));
    CHECK(ContactPlan::earliestAvailable(w, 0.0) == 30.0);
    CHECK(ContactPlan::earliestAvailable(w, 45.0) == 45.0);
    CHECK(ContactPlan::earliestAvailable(w, 60.0) == 100.0);
    CHECK_FALSE(ContactPlan::earliestAvailable(w, 110.0).has_value());
}

TEST_CASE("snapshots are pure functions of (t, failed set)") {
    const auto topo = makeTopology("iridium", 8);
    LinkSet failed{islKey(0, 1)};
    const auto a = topo.dumpEdges(77.0, failed);
    const auto b = topo.dumpEdges(77.0, failed);
    CHECK(a == b);
    CHECK(!a.empty());
}

TEST_CASE("multi-shell constellations add inter-shell links") {
    Topology topo(Constellation::build(ConstellationSpec{
                      "two", {ShellSpec{2, 4, 550.0, 53.0, 0.0, 0.0}, ShellSpec{1, 4, 780.0, 86.4, 0.0, 0.0}},
                      std::nullopt, 10.0}),
                  GroundStationSet::fibonacci(2, 1));
    const auto g = topo.satGraphAt(0.0);
    std::size_t cross = 0;
    for (const auto& [a, b] : g.presentLinks)
        if (topo.constellation().shellOf(a) != topo.constellation().shellOf(b)) ++cross;
    CHECK(cross > 0);
}
