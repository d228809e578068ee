#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "leoroute/graph.hpp"
#include "leoroute/segmentation.hpp"
#include "leoroute/topology.hpp"

namespace leoroute {

enum class Paradigm { Source, Neighbor, Segment, Global };

Paradigm parseParadigm(const std::string& name);
std::string toString(Paradigm p);

// What a node can know about failed links when it makes a forwarding
// decision, plus what the knowledge would cost if acted upon.
struct Knowledge {
    LinkSet believedDown;
    double signalingRoundTripS = 0.0;  // charged only when a reroute results
    bool borderReachable = true;       // segment paradigm: query could be answered
};

// Failure-awareness state for one paradigm. Mutated only by the engine via
// onLinkStateChange; queried synchronously during forwarding.
class AwarenessState {
public:
    AwarenessState(Paradigm paradigm, const Topology* topology, const SegmentPlan* plan);

    Paradigm paradigm() const { return paradigm_; }
    const LinkSet& actualFailed() const { return actualFailed_; }
    bool isFailed(LinkKey link) const { return actualFailed_.count(link) != 0; }

    // usableGraph must already reflect the new link state.
    void onLinkStateChange(LinkKey link, bool down, double t, const SatGraph& usableGraph);

    // Failure knowledge available to a satellite deciding at time t. Incident
    // actual failures are always included: a node can sense its own links.
    Knowledge knowledgeAt(int sat, double t, const SatGraph& usableGraph) const;

    // Knowledge a ground station borrows from its gateway's segment when
    // computing an initial path. Never charged.
    Knowledge gatewayKnowledge(int gatewaySat, double t, const SatGraph& usableGraph) const;

    // Round-trip latency to the nearest border of sat's segment; nullopt when
    // no border is reachable (or the segment has none).
    std::optional<double> signalingDelayS(int sat, const SatGraph& usableGraph) const;

    // Test hook: a border's belief set as of time t.
    LinkSet borderBeliefAt(int borderSat, double t) const;

private:
    struct BeliefEntry {
        double tArriveS = 0.0;
        bool down = false;
    };

    void addIncidentFailures(int sat, LinkSet& out) const;
    // Nearest border of sat's segment on the usable graph: (border, one-way).
    std::pair<int, double> nearestBorder(int sat, const SatGraph& usableGraph) const;

    Paradigm paradigm_;
    const Topology* topology_;
    const SegmentPlan* plan_;
    LinkSet actualFailed_;
    std::vector<std::unordered_map<LinkKey, bool>> neighborBelief_;
    std::map<int, std::map<LinkKey, std::vector<BeliefEntry>>> segmentBelief_;
};

}  // namespace leoroute
