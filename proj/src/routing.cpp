#include "leoroute/routing.hpp"

#include <algorithm>
#include <cassert>
#include <queue>

namespace leoroute {

std::string toString(MessageStatus s) {
    switch (s) {
        case MessageStatus::InFlight: return "in_flight";
        case MessageStatus::Stored: return "stored";
        case MessageStatus::Delivered: return "delivered";
        case MessageStatus::Dropped: return "dropped";
        case MessageStatus::NeverSent: return "never_sent";
    }
    return "?";
}

int defaultLoopThreshold(const std::string& constellationName) {
    if (constellationName == "starlink" || constellationName == "leoleo") return 12;
    return 8;
}

std::vector<std::vector<std::pair<int, const std::vector<Interval>*>>> buildTimedAdjacency(
    const Topology& topology, const ContactPlan& plan) {
    std::vector<std::vector<std::pair<int, const std::vector<Interval>*>>> adj(topology.satCount());
    const auto& grid = topology.gridLinks();
    for (std::size_t li = 0; li < grid.size(); ++li) {
        adj[grid[li].a].emplace_back(grid[li].b, &plan.islWindows[li]);
        adj[grid[li].b].emplace_back(grid[li].a, &plan.islWindows[li]);
    }
    for (const auto& [key, windows] : plan.interShellWindows) {
        const auto [a, b] = linkEndpoints(key);
        adj[a].emplace_back(b, &windows);
        adj[b].emplace_back(a, &windows);
    }
    for (auto& v : adj) std::sort(v.begin(), v.end());
    return adj;
}

std::optional<TimedPathResult> earliestArrival(const TimedGraph& g, int src, int dst, double t0,
                                               const LinkSet* mask) {
    std::vector<double> arrival(g.nodeCount, kInf);
    std::vector<double> departAt(g.nodeCount, 0.0);
    std::vector<int> parent(g.nodeCount, -1);
    arrival[src] = t0;

    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    pq.push({t0, src});
    while (!pq.empty()) {
        const auto [au, u] = pq.top();
        pq.pop();
        if (au > arrival[u]) continue;
        if (u == dst) break;
        for (const auto& arc : g.arcs[u]) {
            if (mask && arc.key != 0 && mask->count(arc.key)) continue;
            double depart = au;
            if (arc.windows) {
                const auto open = ContactPlan::earliestAvailable(*arc.windows, au);
                if (!open) continue;
                depart = *open;
            }
            const double a2 = depart + g.latencyAt(arc, u, depart);
            if (a2 < arrival[arc.to]) {
                arrival[arc.to] = a2;
                parent[arc.to] = u;
                departAt[arc.to] = depart;
                pq.push({a2, arc.to});
            } else if (a2 == arrival[arc.to] && parent[arc.to] > u) {
                parent[arc.to] = u;
                departAt[arc.to] = depart;
            }
        }
    }
    if (arrival[dst] == kInf) return std::nullopt;

    TimedPathResult result;
    result.arrivalS = arrival[dst];
    std::vector<int> rev;
    for (int v = dst; v != -1; v = parent[v]) {
        rev.push_back(v);
        if (v == src) break;
    }
    std::reverse(rev.begin(), rev.end());
    if (rev.front() != src) return std::nullopt;
    result.nodes = rev;
    for (std::size_t i = 1; i < rev.size(); ++i) result.departures.push_back(departAt[rev[i]]);
    return result;
}

namespace {

bool islPlanAvailable(const RouteContext& ctx, int a, int b, double when) {
    for (const auto& [to, windows] : (*ctx.timedAdj)[a])
        if (to == b) return ContactPlan::availableAt(*windows, when);
    return false;  // not a planned link at all
}

// Build the time-expanded graph over satellites plus optional gst terminals.
// Internal ids: sats 0..S-1, src gst = S (when present), dst gst = S+1-ish.
struct TimedSearchSpace {
    TimedGraph graph;
    int srcNode = -1;
    int dstNode = -1;
    std::optional<int> srcGst, dstGst;
};

TimedSearchSpace makeSearchSpace(const RouteContext& ctx, NodeId src, NodeId dst) {
    TimedSearchSpace space;
    const int sats = ctx.topology->satCount();
    int extra = 0;
    if (!src.isSat()) {
        space.srcGst = src.index;
        space.srcNode = sats + extra++;
    } else {
        space.srcNode = src.index;
    }
    if (!dst.isSat()) {
        space.dstGst = dst.index;
        space.dstNode = sats + extra++;
    } else {
        space.dstNode = dst.index;
    }

    TimedGraph& g = space.graph;
    g.nodeCount = sats + extra;
    g.arcs.assign(g.nodeCount, {});
    for (int s = 0; s < sats; ++s) {
        for (const auto& [to, windows] : (*ctx.timedAdj)[s])
            g.arcs[s].push_back({to, windows, islKey(s, to)});
    }
    if (space.srcGst) {
        for (const auto& [sat, windows] : ctx.plan->gslWindows[*space.srcGst])
            g.arcs[space.srcNode < sats ? space.srcNode : sats + 0].push_back(
                {sat, &windows, gslKey(*space.srcGst, sat)});
    }
    if (space.dstGst) {
        const int dstNode = space.dstNode;
        for (const auto& [sat, windows] : ctx.plan->gslWindows[*space.dstGst])
            g.arcs[sat].push_back({dstNode, &windows, gslKey(*space.dstGst, sat)});
    }

    const Topology* topo = ctx.topology;
    const int satCount = sats;
    const auto srcGst = space.srcGst, dstGst = space.dstGst;
    g.latencyAt = [topo, satCount, srcGst, dstGst](const TimedArc& arc, int from, double departS) {
        if (from >= satCount) return topo->gslLatencyS(*srcGst, arc.to, departS);
        if (arc.to >= satCount) return topo->gslLatencyS(*dstGst, from, departS);
        return topo->islLatencyS(from, arc.to, departS);
    };
    return space;
}

}  // namespace

std::optional<TimedPathResult> earliestArrivalPath(const RouteContext& ctx, NodeId src, NodeId dst,
                                                   double t0, const LinkSet& mask,
                                                   std::vector<NodeId>* nodesOut) {
    const auto space = makeSearchSpace(ctx, src, dst);
    auto result = earliestArrival(space.graph, space.srcNode, space.dstNode, t0, &mask);
    if (!result) return std::nullopt;
    if (nodesOut) {
        nodesOut->clear();
        const int sats = ctx.topology->satCount();
        for (int v : result->nodes) {
            if (v < sats)
                nodesOut->push_back(NodeId::sat(v));
            else
                nodesOut->push_back(NodeId::gst(v == space.srcNode ? *space.srcGst : *space.dstGst));
        }
    }
    return result;
}

std::optional<std::pair<int, double>> bestGatewayAt(int gst, double t, const RouteContext& ctx) {
    int bestNow = -1;
    double bestNowLat = kInf;
    int bestLater = -1;
    double bestLaterStart = kInf;
    for (const auto& [sat, windows] : ctx.plan->gslWindows[gst]) {
        if (ContactPlan::availableAt(windows, t)) {
            const double lat = ctx.topology->gslLatencyS(gst, sat, t);
            if (lat < bestNowLat) {
                bestNowLat = lat;
                bestNow = sat;
            }
        } else if (bestNow < 0) {
            const auto open = ContactPlan::earliestAvailable(windows, t);
            if (open && *open < bestLaterStart) {
                bestLaterStart = *open;
                bestLater = sat;
            }
        }
    }
    if (bestNow >= 0) return std::make_pair(bestNow, t);
    if (bestLater >= 0) return std::make_pair(bestLater, bestLaterStart);
    return std::nullopt;
}

namespace {

// Best exit satellite for the destination ground station: minimizes
// dist-to-exit + GSL latency over the plan-available satellites at t.
// allowed (optional) restricts the candidate set.
int bestExitFor(const RouteContext& ctx, int dstGst, double t, const std::vector<double>& dist,
                const std::vector<char>* allowed) {
    int best = -1;
    double bestCost = kInf;
    for (const auto& [sat, windows] : ctx.plan->gslWindows[dstGst]) {
        if (dist[sat] == kInf) continue;
        if (allowed && !(*allowed)[sat]) continue;
        if (!ContactPlan::availableAt(windows, t)) continue;
        const double cost = dist[sat] + ctx.topology->gslLatencyS(dstGst, sat, t);
        if (cost < bestCost) {
            bestCost = cost;
            best = sat;
        }
    }
    return best;
}

std::vector<char> segmentMembership(const SegmentPlan& plan, int segment) {
    std::vector<char> allowed(plan.assignment.size(), 0);
    for (int sat : plan.members[segment]) allowed[sat] = 1;
    return allowed;
}

std::optional<InitialRoute> planSegmentRoute(int srcGst, int dstGst, double tEmit,
                                             const RouteContext& ctx) {
    const auto gw = bestGatewayAt(srcGst, tEmit, ctx);
    if (!gw) return std::nullopt;
    const auto [gateway, departS] = *gw;

    const Knowledge know = ctx.awareness->gatewayKnowledge(gateway, tEmit, *ctx.usableGraph);
    const SegmentPlan& plan = *ctx.segPlan;

    // Unrestricted masked path fixes the segment sequence.
    SearchFilter filter;
    filter.maskedLinks = &know.believedDown;
    const auto sr = shortestDistances(*ctx.structuralGraph, gateway, filter);
    const int exit = bestExitFor(ctx, dstGst, tEmit, sr.dist, nullptr);
    if (exit < 0) return std::nullopt;
    const auto fullPath = extractPath(sr, gateway, exit);
    if (fullPath.empty()) return std::nullopt;

    std::vector<int> segSeq;
    for (int sat : fullPath)
        if (segSeq.empty() || segSeq.back() != plan.assignment[sat])
            segSeq.push_back(plan.assignment[sat]);

    std::vector<int> legNodes;
    WaypointPlan waypoints;
    waypoints.segments = segSeq;

    if (segSeq.size() == 1) {
        // Direct in-segment path; the exit must live in the same segment.
        auto allowed = segmentMembership(plan, segSeq[0]);
        SearchFilter restricted;
        restricted.maskedLinks = &know.believedDown;
        restricted.allowedNodes = &allowed;
        const auto rr = shortestDistances(*ctx.structuralGraph, gateway, restricted);
        const int segExit = bestExitFor(ctx, dstGst, tEmit, rr.dist, &allowed);
        if (segExit < 0) return std::nullopt;
        legNodes = extractPath(rr, gateway, segExit);
        if (legNodes.empty()) return std::nullopt;
    } else {
        for (std::size_t i = 0; i + 1 < segSeq.size(); ++i) {
            const SegmentPair pair{std::min(segSeq[i], segSeq[i + 1]),
                                   std::max(segSeq[i], segSeq[i + 1])};
            const auto it = plan.borderMap.find(pair);
            if (it == plan.borderMap.end()) return std::nullopt;
            waypoints.borderSats.push_back(it->second);
        }
        int cursor = gateway;
        for (std::size_t i = 0; i < waypoints.borderSats.size(); ++i) {
            const int target = waypoints.borderSats[i];
            auto allowed = segmentMembership(plan, segSeq[i]);
            allowed[cursor] = 1;
            allowed[target] = 1;
            SearchFilter restricted;
            restricted.maskedLinks = &know.believedDown;
            restricted.allowedNodes = &allowed;
            const auto leg = shortestPath(*ctx.structuralGraph, cursor, target, restricted);
            if (!leg) return std::nullopt;
            if (legNodes.empty())
                legNodes = *leg;
            else
                legNodes.insert(legNodes.end(), leg->begin() + 1, leg->end());
            cursor = target;
        }
        // Final leg to the exit inside the destination segment.
        auto allowed = segmentMembership(plan, segSeq.back());
        allowed[cursor] = 1;
        SearchFilter restricted;
        restricted.maskedLinks = &know.believedDown;
        restricted.allowedNodes = &allowed;
        const auto rr = shortestDistances(*ctx.structuralGraph, cursor, restricted);
        const int segExit = bestExitFor(ctx, dstGst, tEmit, rr.dist, &allowed);
        if (segExit < 0) return std::nullopt;
        const auto leg = extractPath(rr, cursor, segExit);
        if (leg.empty()) return std::nullopt;
        if (legNodes.empty())
            legNodes = leg;
        else
            legNodes.insert(legNodes.end(), leg.begin() + 1, leg.end());
    }

    InitialRoute route;
    route.path.plannedAtS = tEmit;
    route.path.nodes.push_back(NodeId::gst(srcGst));
    for (int sat : legNodes) route.path.nodes.push_back(NodeId::sat(sat));
    route.path.nodes.push_back(NodeId::gst(dstGst));
    route.path.departures.assign(route.path.nodes.size() - 1, tEmit);
    route.path.departures[0] = departS;
    route.waypoints = waypoints;
    route.crossSegment = !waypoints.borderSats.empty();
    return route;
}

}  // namespace

std::optional<InitialRoute> planInitialRoute(int srcGst, int dstGst, double tEmit,
                                             const RouteContext& ctx) {
    switch (ctx.paradigm) {
        case Paradigm::Source:
        case Paradigm::Global: {
            LinkSet mask;
            if (ctx.paradigm == Paradigm::Global) mask = ctx.awareness->actualFailed();
            std::vector<NodeId> nodes;
            const auto timed = earliestArrivalPath(ctx, NodeId::gst(srcGst), NodeId::gst(dstGst),
                                                   tEmit, mask, &nodes);
            if (!timed) return std::nullopt;
            InitialRoute route;
            route.path.nodes = std::move(nodes);
            route.path.departures = timed->departures;
            route.path.plannedAtS = tEmit;
            return route;
        }
        case Paradigm::Neighbor: {
            const auto gw = bestGatewayAt(srcGst, tEmit, ctx);
            if (!gw) return std::nullopt;
            const auto [gateway, departS] = *gw;
            const Knowledge know = ctx.awareness->knowledgeAt(gateway, tEmit, *ctx.usableGraph);
            const double tArrive = departS + ctx.topology->gslLatencyS(srcGst, gateway, departS);
            std::vector<NodeId> nodes;
            const auto timed = earliestArrivalPath(ctx, NodeId::sat(gateway), NodeId::gst(dstGst),
                                                   tArrive, know.believedDown, &nodes);
            if (!timed) return std::nullopt;
            InitialRoute route;
            route.path.plannedAtS = tEmit;
            route.path.nodes.push_back(NodeId::gst(srcGst));
            route.path.nodes.insert(route.path.nodes.end(), nodes.begin(), nodes.end());
            route.path.departures.push_back(departS);
            route.path.departures.insert(route.path.departures.end(), timed->departures.begin(),
                                         timed->departures.end());
            return route;
        }
        case Paradigm::Segment:
            return planSegmentRoute(srcGst, dstGst, tEmit, ctx);
    }
    return std::nullopt;
}

ArrivalCheck registerArrival(Message& msg, int node, const LoopPolicy& policy) {
    ArrivalCheck check;
    check.loopDetected = msg.visitedSet.count(node) != 0;
    msg.visitedSats.push_back(node);
    msg.visitedSet.insert(node);
    if (check.loopDetected) ++msg.loopDetections;
    check.dropSignal = msg.loopDetections > policy.threshold;
    return check;
}

namespace {

// First believed-down or structurally-missing sat-sat link on the remaining
// path, scanning [from, to). Returns the hop index or -1.
int firstBadHop(const Message& msg, const RouteContext& ctx, const LinkSet& believedDown,
                double t, std::size_t from, std::size_t to) {
    const auto& nodes = msg.path.nodes;
    const bool timed = msg.path.departures.size() == nodes.size() - 1;
    for (std::size_t i = from; i + 1 < nodes.size() && i < to; ++i) {
        if (!nodes[i].isSat() || !nodes[i + 1].isSat()) continue;
        const int a = nodes[i].index, b = nodes[i + 1].index;
        if (believedDown.count(islKey(a, b))) return static_cast<int>(i);
        const double when = timed ? std::max(t, msg.path.departures[i]) : t;
        if (!islPlanAvailable(ctx, a, b, when)) return static_cast<int>(i);
    }
    return -1;
}

void spliceReplacingRange(Message& msg, const std::vector<int>& newLeg, std::size_t upTo) {
    // Keep nodes [0, pathPos], insert newLeg[1..], then resume after upTo.
    std::vector<NodeId> nodes(msg.path.nodes.begin(), msg.path.nodes.begin() + msg.pathPos + 1);
    for (std::size_t i = 1; i < newLeg.size(); ++i) nodes.push_back(NodeId::sat(newLeg[i]));
    nodes.insert(nodes.end(), msg.path.nodes.begin() + upTo + 1, msg.path.nodes.end());
    msg.path.nodes = std::move(nodes);
    msg.path.departures.clear();
}

}  // namespace

RerouteOutcome checkAndReroute(Message& msg, int node, double t, const RouteContext& ctx) {
    RerouteOutcome out;
    const auto& nodes = msg.path.nodes;
    assert(msg.pathPos < nodes.size() && nodes[msg.pathPos] == NodeId::sat(node));

    if (ctx.paradigm == Paradigm::Source) {
        // No failure knowledge and no rerouting: only the node's own next
        // link can stop the message, and then it simply waits.
        const NodeId next = nodes[msg.pathPos + 1];
        if (!next.isSat()) return out;
        const LinkKey link = islKey(node, next.index);
        const bool timed = msg.path.departures.size() == nodes.size() - 1;
        const double when = timed ? std::max(t, msg.path.departures[msg.pathPos]) : t;
        if (ctx.awareness->isFailed(link) || !islPlanAvailable(ctx, node, next.index, when)) {
            out.kind = RerouteOutcome::Kind::Store;
            out.storeLink = link;
        }
        return out;
    }

    const Knowledge know = ctx.awareness->knowledgeAt(node, t, *ctx.usableGraph);

    // Segment mode only ever looks at (and repairs) the current leg.
    std::size_t scanEnd = nodes.size();
    std::size_t targetIdx = nodes.size() - 2;  // exit satellite by default
    if (ctx.paradigm == Paradigm::Segment && msg.waypoints &&
        msg.waypoints->nextIdx < msg.waypoints->borderSats.size()) {
        const int border = msg.waypoints->borderSats[msg.waypoints->nextIdx];
        for (std::size_t i = msg.pathPos; i + 1 < nodes.size(); ++i)
            if (nodes[i] == NodeId::sat(border)) {
                targetIdx = i;
                break;
            }
        scanEnd = targetIdx;
    }

    const int bad = firstBadHop(msg, ctx, know.believedDown, t, msg.pathPos,
                                ctx.paradigm == Paradigm::Segment ? scanEnd : nodes.size());
    if (bad < 0) return out;

    const LinkKey badLink = islKey(nodes[bad].index, nodes[bad + 1].index);
    LinkSet mask = know.believedDown;
    mask.insert(badLink);
    SearchFilter filter;
    filter.maskedLinks = &mask;

    std::optional<std::vector<int>> newLeg;
    std::size_t upTo = 0;

    switch (ctx.paradigm) {
        case Paradigm::Neighbor: {
            // Detour to the far endpoint of the first failed link, then keep
            // the original suffix. Backtracking is allowed.
            const int b = nodes[bad + 1].index;
            newLeg = shortestPath(*ctx.structuralGraph, node, b, filter);
            upTo = bad + 1;
            break;
        }
        case Paradigm::Global: {
            // Fresh path to the best current exit for the destination.
            const auto sr = shortestDistances(*ctx.structuralGraph, node, filter);
            const int exit = bestExitFor(ctx, msg.dstGst, t, sr.dist, nullptr);
            if (exit >= 0) {
                auto path = extractPath(sr, node, exit);
                if (!path.empty()) newLeg = std::move(path);
            }
            upTo = nodes.size() - 2;
            break;
        }
        case Paradigm::Segment: {
            const int currentSegment =
                msg.waypoints ? msg.waypoints->segments[std::min(
                                    msg.waypoints->nextIdx, msg.waypoints->segments.size() - 1)]
                              : ctx.segPlan->assignment[node];
            auto allowed = segmentMembership(*ctx.segPlan, currentSegment);
            allowed[node] = 1;
            const NodeId target = nodes[targetIdx];
            if (target.isSat()) allowed[target.index] = 1;
            filter.allowedNodes = &allowed;
            if (target.isSat()) newLeg = shortestPath(*ctx.structuralGraph, node, target.index, filter);
            upTo = targetIdx;
            break;
        }
        case Paradigm::Source:
            break;
    }

    if (!newLeg) {
        out.kind = RerouteOutcome::Kind::Store;
        out.storeLink = badLink;
        return out;
    }

    spliceReplacingRange(msg, *newLeg, upTo);
    ++msg.reroutes;
    out.kind = RerouteOutcome::Kind::Rerouted;
    out.signalingChargeS = (ctx.paradigm == Paradigm::Segment) ? know.signalingRoundTripS : 0.0;
    return out;
}

}  // namespace leoroute
