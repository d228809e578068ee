#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "leoroute/awareness.hpp"
#include "leoroute/graph.hpp"
#include "leoroute/segmentation.hpp"
#include "leoroute/topology.hpp"

namespace leoroute {

struct Path {
    std::vector<NodeId> nodes;
    double plannedAtS = 0.0;
    // Per-hop departure times from the lookahead planner; cleared by the
    // first reroute (snapshot reroutes carry no timing).
    std::vector<double> departures;
};

struct WaypointPlan {
    std::vector<int> segments;      // segment sequence along the path
    std::vector<int> borderSats;    // borderSats[i] crosses segments[i] -> segments[i+1]
    std::size_t nextIdx = 0;        // next border waypoint still ahead
};

enum class MessageStatus { InFlight, Stored, Delivered, Dropped, NeverSent };

std::string toString(MessageStatus s);

struct Message {
    int id = 0;
    int srcGst = 0;
    int dstGst = 0;
    double tEmitS = 0.0;
    Path path;
    std::size_t pathPos = 0;  // index of the current node within path.nodes
    std::optional<WaypointPlan> waypoints;
    std::vector<int> visitedSats;
    std::unordered_set<int> visitedSet;
    int loopDetections = 0;
    int reroutes = 0;
    double signalingDelayS = 0.0;
    MessageStatus status = MessageStatus::InFlight;
    double tFinalS = 0.0;
    int hops = 0;
    LinkKey storedAtLink = 0;
    double storedSinceS = 0.0;
    double storedTotalS = 0.0;
    std::optional<bool> crossSegment;
    std::string dropReason;
};

struct LoopPolicy {
    int threshold = 8;
};

int defaultLoopThreshold(const std::string& constellationName);

// Everything a routing decision may consult at one instant.
struct RouteContext {
    const Topology* topology = nullptr;
    const ContactPlan* plan = nullptr;
    const SegmentPlan* segPlan = nullptr;
    const AwarenessState* awareness = nullptr;
    Paradigm paradigm = Paradigm::Source;
    LoopPolicy loopPolicy;
    const SatGraph* structuralGraph = nullptr;  // predicted topology at t
    const SatGraph* usableGraph = nullptr;      // structural minus actual failures
    // Satellite adjacency into the plan's availability windows (grid + inter-shell).
    const std::vector<std::vector<std::pair<int, const std::vector<Interval>*>>>* timedAdj = nullptr;
};

std::vector<std::vector<std::pair<int, const std::vector<Interval>*>>> buildTimedAdjacency(
    const Topology& topology, const ContactPlan& plan);

// --- time-expanded search -------------------------------------------------

struct TimedArc {
    int to = 0;
    const std::vector<Interval>* windows = nullptr;  // nullptr: always available
    LinkKey key = 0;                                 // 0: never masked
};

struct TimedGraph {
    int nodeCount = 0;
    std::vector<std::vector<TimedArc>> arcs;
    std::function<double(const TimedArc&, int from, double departS)> latencyAt;
};

struct TimedPathResult {
    std::vector<int> nodes;
    std::vector<double> departures;
    double arrivalS = 0.0;
};

// Label-setting earliest-arrival search: traversing an arc departs at
// max(arrival, window start) and arrives after the departure-time latency.
std::optional<TimedPathResult> earliestArrival(const TimedGraph& g, int src, int dst, double t0,
                                               const LinkSet* mask = nullptr);

// Production wrapper over the contact plan; src/dst are ground stations or
// satellites.
std::optional<TimedPathResult> earliestArrivalPath(const RouteContext& ctx, NodeId src, NodeId dst,
                                                   double t0, const LinkSet& mask,
                                                   std::vector<NodeId>* nodesOut);

// --- per-message operations -------------------------------------------------

struct InitialRoute {
    Path path;
    std::optional<WaypointPlan> waypoints;
    std::optional<bool> crossSegment;
};

std::optional<InitialRoute> planInitialRoute(int srcGst, int dstGst, double tEmit,
                                             const RouteContext& ctx);

// Gateway satellite for a ground station: the lowest-latency currently
// available GSL, else the earliest-opening one. Returns (sat, departure).
std::optional<std::pair<int, double>> bestGatewayAt(int gst, double t, const RouteContext& ctx);

struct RerouteOutcome {
    enum class Kind { Forward, Rerouted, Store, Drop };
    Kind kind = Kind::Forward;
    LinkKey storeLink = 0;
    double signalingChargeS = 0.0;
    std::string dropReason;
};

// Decide what happens to an in-flight message arriving at a satellite.
// Mutates the message path on a successful reroute.
RerouteOutcome checkAndReroute(Message& msg, int node, double t, const RouteContext& ctx);

struct ArrivalCheck {
    bool loopDetected = false;
    bool dropSignal = false;
};

ArrivalCheck registerArrival(Message& msg, int node, const LoopPolicy& policy);

}  // namespace leoroute
