#include "leoroute/topology.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

namespace leoroute {

std::string toString(const NodeId& id) {
    return (id.kind == NodeKind::Satellite ? "s" : "g") + std::to_string(id.index);
}

LinkKey linkKeyOf(const NodeId& a, const NodeId& b) {
    if (a.isSat() && b.isSat()) return islKey(a.index, b.index);
    if (!a.isSat() && b.isSat()) return gslKey(a.index, b.index);
    if (a.isSat() && !b.isSat()) return gslKey(b.index, a.index);
    throw std::invalid_argument("link between two ground stations");
}

bool ContactPlan::availableAt(const std::vector<Interval>& windows, double t) {
    for (const auto& w : windows)
        if (t >= w.startS && t < w.endS) return true;
    return false;
}

std::optional<double> ContactPlan::earliestAvailable(const std::vector<Interval>& windows, double t) {
    for (const auto& w : windows) {
        if (t < w.endS) return std::max(t, w.startS);
    }
    return std::nullopt;
}

bool ContactPlan::gslAvailableAt(int gst, int sat, double t) const {
    const auto& perSat = gslWindows[gst];
    auto it = perSat.find(sat);
    return it != perSat.end() && availableAt(it->second, t);
}

std::optional<double> ContactPlan::gslEarliestAvailable(int gst, int sat, double t) const {
    const auto& perSat = gslWindows[gst];
    auto it = perSat.find(sat);
    if (it == perSat.end()) return std::nullopt;
    return earliestAvailable(it->second, t);
}

Topology::Topology(Constellation constellation, GroundStationSet gsts)
    : constellation_(std::move(constellation)), gsts_(std::move(gsts)) {
    buildGrid();
}

void Topology::buildGrid() {
    std::set<std::pair<int, int>> links;
    const auto addLink = [&](int a, int b) {
        if (a == b) return;
        links.insert({std::min(a, b), std::max(a, b)});
    };

    for (int shell = 0; shell < constellation_.shellCount(); ++shell) {
        const auto& spec = constellation_.spec().shells[shell];
        const auto [first, last] = constellation_.shellRange(shell);
        const int planes = spec.planeCount, perPlane = spec.satsPerPlane;
        const auto idx = [&](int p, int s) { return first + p * perPlane + s; };

        // In-plane ring neighbors.
        if (perPlane > 1) {
            for (int p = 0; p < planes; ++p)
                for (int s = 0; s < perPlane; ++s) addLink(idx(p, s), idx(p, (s + 1) % perPlane));
        }
        // Nearest neighbor in the next plane, ring-closed over the seam.
        // Relative phases within a shell are constant, so the nearest slot is
        // the one with the smallest closest approach over one period; that
        // shift is constant per plane pair, keeping the matching symmetric
        // (degree 4) and every cross-plane link periodically visible.
        if (planes > 1) {
            const double period = orbitalPeriodS(constellation_.elements(first));
            for (int p = 0; p < planes; ++p) {
                const int q = (p + 1) % planes;
                int bestShift = 0;
                double bestApproach = std::numeric_limits<double>::infinity();
                for (int r = 0; r < perPlane; ++r) {
                    double approach = std::numeric_limits<double>::infinity();
                    for (int k = 0; k < 128; ++k) {
                        const double t = period * k / 128.0;
                        approach = std::min(approach,
                                            distanceKm(constellation_.positionAt(idx(p, 0), t),
                                                       constellation_.positionAt(idx(q, r), t)));
                    }
                    if (approach < bestApproach) {
                        bestApproach = approach;
                        bestShift = r;
                    }
                }
                for (int s = 0; s < perPlane; ++s)
                    addLink(idx(p, s), idx(q, (s + bestShift) % perPlane));
            }
        }
    }

    grid_.reserve(links.size());
    for (const auto& [a, b] : links) grid_.push_back({a, b});
    gridAdj_.assign(constellation_.satCount(), {});
    for (const auto& l : grid_) {
        gridAdj_[l.a].push_back(l.b);
        gridAdj_[l.b].push_back(l.a);
    }
    for (auto& v : gridAdj_) std::sort(v.begin(), v.end());
}

const std::vector<Vec3>& Topology::positionsAt(double t) const {
    if (!posCacheValid_ || posCacheT_ != t) {
        posCache_.resize(constellation_.satCount());
        for (int i = 0; i < constellation_.satCount(); ++i)
            posCache_[i] = constellation_.positionAt(i, t);
        posCacheT_ = t;
        posCacheValid_ = true;
    }
    return posCache_;
}

bool Topology::islStructurallyPresent(int a, int b, const std::vector<Vec3>& pos) const {
    if (!lineOfSight(pos[a], pos[b])) return false;
    const auto& maxRange = constellation_.spec().islMaxRangeKm;
    return !maxRange || distanceKm(pos[a], pos[b]) <= *maxRange;
}

const std::vector<std::pair<int, int>>& Topology::interShellPairsAt(double t) const {
    if (interCacheValid_ && interCacheT_ == t) return interCache_;
    interCache_.clear();
    const int shells = constellation_.shellCount();
    if (shells > 1) {
        const auto& pos = positionsAt(t);
        std::set<std::pair<int, int>> pairs;
        for (int sh = 0; sh < shells; ++sh) {
            const auto [first, last] = constellation_.shellRange(sh);
            for (int i = first; i < last; ++i) {
                int best = -1;
                double bestDist = std::numeric_limits<double>::infinity();
                for (int other = 0; other < shells; ++other) {
                    if (other == sh) continue;
                    const auto [f2, l2] = constellation_.shellRange(other);
                    for (int j = f2; j < l2; ++j) {
                        const double d = distanceKm(pos[i], pos[j]);
                        if (d < bestDist) {
                            bestDist = d;
                            best = j;
                        }
                    }
                }
                if (best >= 0 && islStructurallyPresent(i, best, pos))
                    pairs.insert({std::min(i, best), std::max(i, best)});
            }
        }
        interCache_.assign(pairs.begin(), pairs.end());
    }
    interCacheT_ = t;
    interCacheValid_ = true;
    return interCache_;
}

SatGraph Topology::satGraphAt(double t, const LinkSet* adminFailed) const {
    SatGraph g;
    g.timeS = t;
    g.pos = positionsAt(t);
    g.adj.assign(constellation_.satCount(), {});
    const auto addEdge = [&](int a, int b) {
        if (adminFailed && adminFailed->count(islKey(a, b))) return;
        const double lat = propagationDelayS(distanceKm(g.pos[a], g.pos[b]));
        g.adj[a].push_back({b, lat});
        g.adj[b].push_back({a, lat});
        g.presentLinks.emplace_back(a, b);
    };
    for (const auto& l : grid_)
        if (islStructurallyPresent(l.a, l.b, g.pos)) addEdge(l.a, l.b);
    for (const auto& [a, b] : interShellPairsAt(t)) addEdge(a, b);
    for (auto& edges : g.adj)
        std::sort(edges.begin(), edges.end(), [](const SatEdge& x, const SatEdge& y) { return x.to < y.to; });
    return g;
}

GraphSnapshot Topology::snapshot(double t, const LinkSet& failedLinks) const {
    GraphSnapshot snap;
    snap.timeS = t;
    snap.sats = satGraphAt(t, &failedLinks);
    snap.gslEdges.assign(gsts_.count, {});
    for (int g = 0; g < gsts_.count; ++g) {
        const Vec3 gp = gsts_.positionOf(g);
        for (int s = 0; s < constellation_.satCount(); ++s) {
            if (failedLinks.count(gslKey(g, s))) continue;
            const Vec3 sp = snap.sats.pos[s];
            if (elevationAngleDeg(gp, sp) >= constellation_.spec().gstElevationMaskDeg &&
                lineOfSight(gp, sp))
                snap.gslEdges[g].push_back({s, propagationDelayS(distanceKm(gp, sp))});
        }
    }
    return snap;
}

std::vector<int> Topology::visibleSats(int gst, double t) const {
    std::vector<int> out;
    const Vec3 gp = gsts_.positionOf(gst);
    const auto& pos = positionsAt(t);
    for (int s = 0; s < constellation_.satCount(); ++s)
        if (elevationAngleDeg(gp, pos[s]) >= constellation_.spec().gstElevationMaskDeg) out.push_back(s);
    return out;
}

bool Topology::gslVisible(int gst, int sat, double t) const {
    const Vec3 gp = gsts_.positionOf(gst);
    return elevationAngleDeg(gp, positionsAt(t)[sat]) >= constellation_.spec().gstElevationMaskDeg;
}

double Topology::gslLatencyS(int gst, int sat, double t) const {
    return propagationDelayS(distanceKm(gsts_.positionOf(gst), constellation_.positionAt(sat, t)));
}

double Topology::islLatencyS(int a, int b, double t) const {
    return propagationDelayS(
        distanceKm(constellation_.positionAt(a, t), constellation_.positionAt(b, t)));
}

ContactPlan Topology::buildContactPlan(double horizonS, double tickS) const {
    if (!(tickS > 0.0)) throw std::invalid_argument("ContactPlan.tickS must be > 0");
    if (horizonS < tickS) throw std::invalid_argument("ContactPlan.horizonS must be >= tickS");

    ContactPlan plan;
    plan.tickS = tickS;
    plan.horizonS = horizonS;
    const int ticks = static_cast<int>(std::ceil(horizonS / tickS));
    const auto clip = [&](double t) { return std::min(t, horizonS); };

    const auto appendSample = [&](std::vector<Interval>& windows, int k) {
        const double start = k * tickS;
        const double end = clip((k + 1) * tickS);
        if (!windows.empty() && windows.back().endS >= start)
            windows.back().endS = end;
        else
            windows.push_back({start, end});
    };

    plan.islWindows.assign(grid_.size(), {});
    plan.gslWindows.assign(gsts_.count, {});
    std::vector<Vec3> gstPos(gsts_.count);
    for (int g = 0; g < gsts_.count; ++g) gstPos[g] = gsts_.positionOf(g);

    for (int k = 0; k < ticks; ++k) {
        const double t = k * tickS;
        const auto& pos = positionsAt(t);
        for (std::size_t li = 0; li < grid_.size(); ++li)
            if (islStructurallyPresent(grid_[li].a, grid_[li].b, pos))
                appendSample(plan.islWindows[li], k);
        for (const auto& [a, b] : interShellPairsAt(t)) appendSample(plan.interShellWindows[islKey(a, b)], k);
        for (int g = 0; g < gsts_.count; ++g) {
            for (int s = 0; s < constellation_.satCount(); ++s) {
                if (elevationAngleDeg(gstPos[g], pos[s]) >= constellation_.spec().gstElevationMaskDeg)
                    appendSample(plan.gslWindows[g][s], k);
            }
        }
    }
    return plan;
}

std::vector<double> Topology::distanceMatrix(const SatGraph& g) const {
    const int n = g.size();
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(static_cast<std::size_t>(n) * n, inf);

    std::vector<double> d(n);
    using Item = std::pair<double, int>;
    for (int src = 0; src < n; ++src) {
        std::fill(d.begin(), d.end(), inf);
        d[src] = 0.0;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        pq.push({0.0, src});
        while (!pq.empty()) {
            const auto [du, u] = pq.top();
            pq.pop();
            if (du > d[u]) continue;
            for (const auto& e : g.adj[u]) {
                const double nd = du + e.latencyS;
                if (nd < d[e.to]) {
                    d[e.to] = nd;
                    pq.push({nd, e.to});
                }
            }
        }
        for (int v = 0; v < n; ++v) dist[static_cast<std::size_t>(src) * n + v] = d[v];
    }
    return dist;
}

std::string Topology::dumpEdges(double t, const LinkSet& failedLinks) const {
    const GraphSnapshot snap = snapshot(t, failedLinks);
    std::ostringstream out;
    char buf[64];
    for (const auto& [a, b] : snap.sats.presentLinks) {
        std::snprintf(buf, sizeof(buf), "%.9f", islLatencyS(a, b, t));
        out << "s" << a << ",s" << b << ",isl," << buf << "\n";
    }
    for (int g = 0; g < gstCount(); ++g)
        for (const auto& e : snap.gslEdges[g]) {
            std::snprintf(buf, sizeof(buf), "%.9f", e.latencyS);
            out << "g" << g << ",s" << e.to << ",gsl," << buf << "\n";
        }
    return out.str();
}

}  // namespace leoroute
