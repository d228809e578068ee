#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "leoroute/constellation.hpp"
#include "leoroute/geometry.hpp"

namespace leoroute {

enum class NodeKind { Satellite, Ground };

struct NodeId {
    NodeKind kind = NodeKind::Satellite;
    int index = 0;

    static NodeId sat(int i) { return {NodeKind::Satellite, i}; }
    static NodeId gst(int i) { return {NodeKind::Ground, i}; }
    bool isSat() const { return kind == NodeKind::Satellite; }
    auto operator<=>(const NodeId&) const = default;
};

std::string toString(const NodeId& id);

// Canonical 64-bit link identity. Bit 63 marks a ground link.
using LinkKey = std::uint64_t;

inline LinkKey islKey(int a, int b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}
inline LinkKey gslKey(int gst, int sat) {
    return (1ULL << 63) | (static_cast<std::uint64_t>(gst) << 32) | static_cast<std::uint32_t>(sat);
}
inline bool isGsl(LinkKey k) { return (k >> 63) != 0; }
inline std::pair<int, int> linkEndpoints(LinkKey k) {
    return {static_cast<int>((k >> 32) & 0x7fffffff), static_cast<int>(k & 0xffffffff)};
}
LinkKey linkKeyOf(const NodeId& a, const NodeId& b);

using LinkSet = std::unordered_set<LinkKey>;

// Static intra-shell +grid edge, canonical a < b.
struct GridLink {
    int a = 0;
    int b = 0;
};

struct Interval {
    double startS = 0.0;
    double endS = 0.0;
};

// Tick-sampled availability windows for every link kind.
struct ContactPlan {
    double tickS = 10.0;
    double horizonS = 0.0;
    std::vector<std::vector<Interval>> islWindows;               // by grid link index
    std::map<LinkKey, std::vector<Interval>> interShellWindows;  // multi-shell only
    std::vector<std::map<int, std::vector<Interval>>> gslWindows;  // per gst: sat -> windows

    static bool availableAt(const std::vector<Interval>& windows, double t);
    // Earliest usable instant >= t, or nullopt if none before the horizon.
    static std::optional<double> earliestAvailable(const std::vector<Interval>& windows, double t);

    bool gslAvailableAt(int gst, int sat, double t) const;
    std::optional<double> gslEarliestAvailable(int gst, int sat, double t) const;
};

struct SatEdge {
    int to = 0;
    double latencyS = 0.0;
};

// Satellite-only graph at a fixed instant: structural links minus an
// admin-failed set. Adjacency is sorted by neighbor index.
struct SatGraph {
    double timeS = 0.0;
    std::vector<Vec3> pos;
    std::vector<std::vector<SatEdge>> adj;
    std::vector<std::pair<int, int>> presentLinks;  // canonical pairs

    int size() const { return static_cast<int>(adj.size()); }
};

// Full snapshot including opportunistic ground links.
struct GraphSnapshot {
    double timeS = 0.0;
    SatGraph sats;
    std::vector<std::vector<SatEdge>> gslEdges;  // per gst: (sat, latency)
};

class Topology {
public:
    Topology(Constellation constellation, GroundStationSet gsts);

    const Constellation& constellation() const { return constellation_; }
    const GroundStationSet& groundStations() const { return gsts_; }
    int satCount() const { return constellation_.satCount(); }
    int gstCount() const { return gsts_.count; }

    const std::vector<GridLink>& gridLinks() const { return grid_; }
    const std::vector<int>& gridNeighborsOf(int sat) const { return gridAdj_[sat]; }

    const std::vector<Vec3>& positionsAt(double t) const;

    SatGraph satGraphAt(double t, const LinkSet* adminFailed = nullptr) const;
    GraphSnapshot snapshot(double t, const LinkSet& failedLinks) const;

    std::vector<int> visibleSats(int gst, double t) const;
    bool gslVisible(int gst, int sat, double t) const;
    double gslLatencyS(int gst, int sat, double t) const;
    double islLatencyS(int a, int b, double t) const;

    ContactPlan buildContactPlan(double horizonS, double tickS) const;

    // All-pairs shortest-path latencies over satellites; +inf when disconnected.
    std::vector<double> distanceMatrix(const SatGraph& g) const;

    // Debug dump: rows "nodeA,nodeB,kind,latency_s".
    std::string dumpEdges(double t, const LinkSet& failedLinks) const;

private:
    void buildGrid();
    bool islStructurallyPresent(int a, int b, const std::vector<Vec3>& pos) const;
    const std::vector<std::pair<int, int>>& interShellPairsAt(double t) const;

    Constellation constellation_;
    GroundStationSet gsts_;
    std::vector<GridLink> grid_;
    std::vector<std::vector<int>> gridAdj_;

    mutable bool posCacheValid_ = false;
    mutable double posCacheT_ = 0.0;
    mutable std::vector<Vec3> posCache_;
    mutable bool interCacheValid_ = false;
    mutable double interCacheT_ = 0.0;
    mutable std::vector<std::pair<int, int>> interCache_;
};

}  // namespace leoroute
