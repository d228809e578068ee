#include "leoroute/awareness.hpp"

#include <algorithm>
#include <stdexcept>

namespace leoroute {

Paradigm parseParadigm(const std::string& name) {
    if (name == "source") return Paradigm::Source;
    if (name == "neighbor") return Paradigm::Neighbor;
    if (name == "segment") return Paradigm::Segment;
    if (name == "global") return Paradigm::Global;
    throw std::invalid_argument("unknown paradigm: " + name);
}

std::string toString(Paradigm p) {
    switch (p) {
        case Paradigm::Source: return "source";
        case Paradigm::Neighbor: return "neighbor";
        case Paradigm::Segment: return "segment";
        case Paradigm::Global: return "global";
    }
    return "?";
}

AwarenessState::AwarenessState(Paradigm paradigm, const Topology* topology, const SegmentPlan* plan)
    : paradigm_(paradigm), topology_(topology), plan_(plan) {
    if (paradigm_ == Paradigm::Neighbor) neighborBelief_.resize(topology_->satCount());
    if (paradigm_ == Paradigm::Segment && plan_ == nullptr)
        throw std::invalid_argument("segment paradigm requires a segment plan");
}

void AwarenessState::onLinkStateChange(LinkKey link, bool down, double t,
                                       const SatGraph& usableGraph) {
    if (down)
        actualFailed_.insert(link);
    else
        actualFailed_.erase(link);
    if (isGsl(link)) return;  // ground links only churn structurally
    const auto [a, b] = linkEndpoints(link);

    if (paradigm_ == Paradigm::Neighbor) {
        // Both endpoints alert every node they can still reach in one hop;
        // the alert itself is instantaneous.
        const auto alert = [&](int node) { neighborBelief_[node][link] = down; };
        alert(a);
        alert(b);
        for (const auto& e : usableGraph.adj[a]) alert(e.to);
        for (const auto& e : usableGraph.adj[b]) alert(e.to);
    } else if (paradigm_ == Paradigm::Segment) {
        // The alert travels to every border of the segments containing the
        // link, arriving after the shortest-path latency from the nearer
        // endpoint. An unreachable border simply never hears of it.
        const auto da = shortestDistances(usableGraph, a);
        const auto db = shortestDistances(usableGraph, b);
        std::vector<int> borders;
        for (int seg : {plan_->assignment[a], plan_->assignment[b]})
            for (int border : plan_->segmentBorders[seg]) borders.push_back(border);
        std::sort(borders.begin(), borders.end());
        borders.erase(std::unique(borders.begin(), borders.end()), borders.end());
        for (int border : borders) {
            const double delay = std::min(da.dist[border], db.dist[border]);
            if (delay == kInf) continue;
            auto& history = segmentBelief_[border][link];
            const BeliefEntry entry{t + delay, down};
            const auto pos = std::upper_bound(
                history.begin(), history.end(), entry,
                [](const BeliefEntry& x, const BeliefEntry& y) { return x.tArriveS < y.tArriveS; });
            history.insert(pos, entry);
            if (history.size() > 8) history.erase(history.begin());
        }
    }
}

void AwarenessState::addIncidentFailures(int sat, LinkSet& out) const {
    for (int nb : topology_->gridNeighborsOf(sat)) {
        const LinkKey k = islKey(sat, nb);
        if (actualFailed_.count(k)) out.insert(k);
    }
}

std::pair<int, double> AwarenessState::nearestBorder(int sat, const SatGraph& usableGraph) const {
    const auto& borders = plan_->segmentBorders[plan_->assignment[sat]];
    if (borders.empty()) return {-1, 0.0};
    for (int b : borders)
        if (b == sat) return {sat, 0.0};
    const auto r = shortestDistances(usableGraph, sat);
    int best = -1;
    double bestDist = kInf;
    for (int b : borders) {  // sorted: ties go to the lowest id
        if (r.dist[b] < bestDist) {
            bestDist = r.dist[b];
            best = b;
        }
    }
    return {best, bestDist};
}

LinkSet AwarenessState::borderBeliefAt(int borderSat, double t) const {
    LinkSet out;
    const auto it = segmentBelief_.find(borderSat);
    if (it == segmentBelief_.end()) return out;
    for (const auto& [link, history] : it->second) {
        bool down = false;
        for (const auto& entry : history) {
            if (entry.tArriveS > t) break;
            down = entry.down;
        }
        if (down) out.insert(link);
    }
    return out;
}

Knowledge AwarenessState::knowledgeAt(int sat, double t, const SatGraph& usableGraph) const {
    Knowledge know;
    switch (paradigm_) {
        case Paradigm::Source:
            return know;  // no failure knowledge at all
        case Paradigm::Global:
            know.believedDown = actualFailed_;
            return know;
        case Paradigm::Neighbor: {
            for (const auto& [link, down] : neighborBelief_[sat])
                if (down) know.believedDown.insert(link);
            addIncidentFailures(sat, know.believedDown);
            return know;
        }
        case Paradigm::Segment: {
            const auto [border, oneWay] = nearestBorder(sat, usableGraph);
            if (border < 0 || oneWay == kInf) {
                know.borderReachable = false;
                addIncidentFailures(sat, know.believedDown);
                return know;
            }
            // The reply in hand at t was generated one way-trip ago.
            know.believedDown = borderBeliefAt(border, t - oneWay);
            know.signalingRoundTripS = 2.0 * oneWay;
            addIncidentFailures(sat, know.believedDown);
            return know;
        }
    }
    return know;
}

Knowledge AwarenessState::gatewayKnowledge(int gatewaySat, double t,
                                           const SatGraph& usableGraph) const {
    if (paradigm_ != Paradigm::Segment) return knowledgeAt(gatewaySat, t, usableGraph);
    const auto [border, oneWay] = nearestBorder(gatewaySat, usableGraph);
    Knowledge know;
    if (border < 0 || oneWay == kInf) {
        know.borderReachable = false;
        return know;
    }
    know.believedDown = borderBeliefAt(border, t - oneWay);
    return know;
}

std::optional<double> AwarenessState::signalingDelayS(int sat, const SatGraph& usableGraph) const {
    if (paradigm_ != Paradigm::Segment) return 0.0;
    const auto [border, oneWay] = nearestBorder(sat, usableGraph);
    if (border < 0 || oneWay == kInf) return std::nullopt;
    return 2.0 * oneWay;
}

}  // namespace leoroute
