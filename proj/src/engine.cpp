#include "leoroute/engine.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <queue>
#include <stdexcept>
#include <unordered_map>

#include "leoroute/awareness.hpp"
#include "leoroute/routing.hpp"
#include "leoroute/scenario.hpp"

namespace leoroute {

namespace {

enum EventKind : int {
    kLinkDown = 0,
    kLinkUp = 1,
    kReleaseStored = 2,
    kEmit = 3,
    kArrive = 4,
    kEndOfRun = 5,
};

struct Event {
    double t = 0.0;
    int prio = 0;  // EventKind doubles as same-time priority
    std::uint64_t seq = 0;
    int msgId = -1;
    LinkKey link = 0;
};

struct EventAfter {
    bool operator()(const Event& a, const Event& b) const {
        if (a.t != b.t) return a.t > b.t;
        if (a.prio != b.prio) return a.prio > b.prio;
        return a.seq > b.seq;
    }
};

class Engine {
public:
    explicit Engine(const RunConfig& cfg)
        : cfg_(cfg),
          topology_(Constellation::build(constellationPreset(cfg.constellation)),
                    GroundStationSet::fibonacci(cfg.gstCount, cfg.gstSeed)),
          plan_(topology_.buildContactPlan(cfg.horizonS + cfg.drainS + cfg.planTickS, cfg.planTickS)),
          segPlan_(planPartition(topology_, cfg.segmentCount, cfg.partitionSeed, 0.0)),
          paradigm_(parseParadigm(cfg.paradigm)),
          awareness_(paradigm_, &topology_, &segPlan_),
          timedAdj_(buildTimedAdjacency(topology_, plan_)) {
        loopPolicy_.threshold =
            cfg.loopThreshold > 0 ? cfg.loopThreshold : defaultLoopThreshold(cfg.constellation);
        for (std::size_t li = 0; li < topology_.gridLinks().size(); ++li) {
            const auto& l = topology_.gridLinks()[li];
            windowsByKey_[islKey(l.a, l.b)] = &plan_.islWindows[li];
        }
        for (const auto& [key, windows] : plan_.interShellWindows) windowsByKey_[key] = &windows;
    }

    RunResult run();

private:
    RouteContext makeContext() const {
        RouteContext ctx;
        ctx.topology = &topology_;
        ctx.plan = &plan_;
        ctx.segPlan = &segPlan_;
        ctx.awareness = &awareness_;
        ctx.paradigm = paradigm_;
        ctx.loopPolicy = loopPolicy_;
        ctx.structuralGraph = &structural_;
        ctx.usableGraph = &usable_;
        ctx.timedAdj = &timedAdj_;
        return ctx;
    }

    void push(double t, int prio, int msgId, LinkKey link) {
        queue_.push(Event{t, prio, seq_++, msgId, link});
    }

    void refreshGraphs(double t) {
        if (structuralT_ != t || !structuralValid_) {
            structural_ = topology_.satGraphAt(t);
            structuralT_ = t;
            structuralValid_ = true;
            usableValid_ = false;
        }
        if (!usableValid_ || usableFailVersion_ != failVersion_) {
            usable_ = topology_.satGraphAt(t, &failed_);
            usableFailVersion_ = failVersion_;
            usableValid_ = true;
        }
    }

    const std::vector<Interval>* windowsOf(LinkKey link) const {
        if (isGsl(link)) {
            const auto [gst, sat] = linkEndpoints(link);
            const auto it = plan_.gslWindows[gst].find(sat);
            return it == plan_.gslWindows[gst].end() ? nullptr : &it->second;
        }
        const auto it = windowsByKey_.find(link);
        return it == windowsByKey_.end() ? nullptr : it->second;
    }

    void handleEmit(Message& msg, double t);
    void handleArrive(Message& msg, double t);
    void processAtNode(Message& msg, double t);
    void scheduleHop(Message& msg, double t);
    void storeMessage(Message& msg, LinkKey link, double t);
    void releaseMessage(Message& msg, LinkKey link, double t);
    void handleLinkChange(LinkKey link, bool down, double t);
    bool reResolveExit(Message& msg, int node, double t, const RouteContext& ctx);
    void finalizeMessage(Message& msg, MessageStatus status, double t, const std::string& reason);
    MessageRecord toRecord(const Message& msg) const;

    RunConfig cfg_;
    Topology topology_;
    ContactPlan plan_;
    SegmentPlan segPlan_;
    Paradigm paradigm_;
    AwarenessState awareness_;
    std::vector<std::vector<std::pair<int, const std::vector<Interval>*>>> timedAdj_;
    LoopPolicy loopPolicy_;
    std::unordered_map<LinkKey, const std::vector<Interval>*> windowsByKey_;

    std::priority_queue<Event, std::vector<Event>, EventAfter> queue_;
    std::uint64_t seq_ = 0;
    LinkSet failed_;
    std::uint64_t failVersion_ = 0;

    bool structuralValid_ = false, usableValid_ = false;
    double structuralT_ = 0.0;
    std::uint64_t usableFailVersion_ = 0;
    SatGraph structural_, usable_;

    std::vector<Message> messages_;
    std::map<LinkKey, std::deque<int>> stored_;
    std::optional<RandomFailureDriver> driver_;
    double endT_ = 0.0;
};

void Engine::finalizeMessage(Message& msg, MessageStatus status, double t,
                             const std::string& reason) {
    msg.status = status;
    msg.tFinalS = t;
    msg.dropReason = reason;
}

MessageRecord Engine::toRecord(const Message& msg) const {
    MessageRecord r;
    r.msgId = msg.id;
    r.srcGst = msg.srcGst;
    r.dstGst = msg.dstGst;
    r.tEmitS = msg.tEmitS;
    if (msg.status == MessageStatus::Delivered || msg.status == MessageStatus::Dropped)
        r.tFinalS = msg.tFinalS;
    r.status = toString(msg.status);
    r.hops = msg.hops;
    r.reroutes = msg.reroutes;
    r.loopDetections = msg.loopDetections;
    r.signalingDelayS = msg.signalingDelayS;
    r.storedTimeS = msg.storedTotalS;
    r.crossSegment = msg.crossSegment;
    r.dropReason = msg.dropReason;
    return r;
}

void Engine::handleEmit(Message& msg, double t) {
    refreshGraphs(t);
    const RouteContext ctx = makeContext();
    const auto route = planInitialRoute(msg.srcGst, msg.dstGst, t, ctx);
    if (!route) {
        msg.status = MessageStatus::NeverSent;
        return;
    }
    msg.path = route->path;
    msg.waypoints = route->waypoints;
    msg.crossSegment = route->crossSegment;
    msg.pathPos = 0;
    msg.status = MessageStatus::InFlight;
    scheduleHop(msg, t);
}

void Engine::scheduleHop(Message& msg, double t) {
    const auto& nodes = msg.path.nodes;
    const NodeId u = nodes[msg.pathPos];
    const NodeId v = nodes[msg.pathPos + 1];
    const bool timed = msg.path.departures.size() == nodes.size() - 1;
    const double plannedDepart = timed ? std::max(t, msg.path.departures[msg.pathPos]) : t;
    const LinkKey link = linkKeyOf(u, v);

    if (plannedDepart > t) {  // lookahead-planned wait at this node
        storeMessage(msg, link, t);
        return;
    }
    if (u.isSat() && v.isSat()) {
        if (awareness_.isFailed(link) || !ContactPlan::availableAt(*windowsByKey_.at(link), t)) {
            storeMessage(msg, link, t);
            return;
        }
        ++msg.hops;
        push(t + topology_.islLatencyS(u.index, v.index, t), kArrive, msg.id, 0);
        return;
    }
    const int gst = u.isSat() ? v.index : u.index;
    const int sat = u.isSat() ? u.index : v.index;
    if (!plan_.gslAvailableAt(gst, sat, t)) {
        storeMessage(msg, link, t);
        return;
    }
    ++msg.hops;
    push(t + topology_.gslLatencyS(gst, sat, t), kArrive, msg.id, 0);
}

void Engine::storeMessage(Message& msg, LinkKey link, double t) {
    msg.status = MessageStatus::Stored;
    msg.storedAtLink = link;
    msg.storedSinceS = t;
    stored_[link].push_back(msg.id);
    if (!awareness_.isFailed(link)) {
        // Structural wait: release when the plan opens the link again. A
        // stale belief about an up, available link has no release trigger
        // until that link's next own transition.
        const auto* windows = windowsOf(link);
        if (windows) {
            const auto open = ContactPlan::earliestAvailable(*windows, t);
            if (open && *open > t) push(*open, kReleaseStored, msg.id, link);
        }
    }
}

void Engine::releaseMessage(Message& msg, LinkKey link, double t) {
    if (msg.status != MessageStatus::Stored || msg.storedAtLink != link) return;  // stale event
    auto& queueAtLink = stored_[link];
    const auto it = std::find(queueAtLink.begin(), queueAtLink.end(), msg.id);
    if (it != queueAtLink.end()) queueAtLink.erase(it);
    msg.storedTotalS += t - msg.storedSinceS;
    msg.status = MessageStatus::InFlight;
    if (msg.path.nodes[msg.pathPos].isSat())
        processAtNode(msg, t);
    else
        scheduleHop(msg, t);  // waiting at the source ground station
}

bool Engine::reResolveExit(Message& msg, int node, double t, const RouteContext& ctx) {
    const Knowledge know = awareness_.knowledgeAt(node, t, usable_);
    SearchFilter filter;
    filter.maskedLinks = &know.believedDown;
    const auto sr = shortestDistances(structural_, node, filter);
    int best = -1;
    double bestCost = kInf;
    for (const auto& [sat, windows] : plan_.gslWindows[msg.dstGst]) {
        if (sr.dist[sat] == kInf || !ContactPlan::availableAt(windows, t)) continue;
        const double cost = sr.dist[sat] + topology_.gslLatencyS(msg.dstGst, sat, t);
        if (cost < bestCost) {
            bestCost = cost;
            best = sat;
        }
    }
    if (best < 0) return false;
    const auto leg = extractPath(sr, node, best);
    if (leg.empty()) return false;

    std::vector<NodeId> newNodes(msg.path.nodes.begin(), msg.path.nodes.begin() + msg.pathPos + 1);
    for (std::size_t i = 1; i < leg.size(); ++i) newNodes.push_back(NodeId::sat(leg[i]));
    newNodes.push_back(NodeId::gst(msg.dstGst));
    if (newNodes == msg.path.nodes) return false;
    msg.path.nodes = std::move(newNodes);
    msg.path.departures.clear();
    ++msg.reroutes;
    if (paradigm_ == Paradigm::Segment && know.borderReachable) {
        msg.signalingDelayS += know.signalingRoundTripS;
        scheduleHop(msg, t + know.signalingRoundTripS);
    } else {
        scheduleHop(msg, t);
    }
    return true;
}

void Engine::processAtNode(Message& msg, double t) {
    refreshGraphs(t);
    const RouteContext ctx = makeContext();
    const int node = msg.path.nodes[msg.pathPos].index;

    if (msg.waypoints)
        while (msg.waypoints->nextIdx < msg.waypoints->borderSats.size() &&
               msg.waypoints->borderSats[msg.waypoints->nextIdx] == node)
            ++msg.waypoints->nextIdx;

    // Destination gateway drift: the planned exit lost its window.
    if (msg.pathPos + 2 == msg.path.nodes.size() && paradigm_ != Paradigm::Source &&
        !plan_.gslAvailableAt(msg.dstGst, node, t)) {
        if (reResolveExit(msg, node, t, ctx)) return;
    }

    RerouteOutcome outcome = checkAndReroute(msg, node, t, ctx);
    switch (outcome.kind) {
        case RerouteOutcome::Kind::Forward:
            scheduleHop(msg, t);
            return;
        case RerouteOutcome::Kind::Rerouted:
            msg.signalingDelayS += outcome.signalingChargeS;
            scheduleHop(msg, t + outcome.signalingChargeS);
            return;
        case RerouteOutcome::Kind::Store:
            storeMessage(msg, outcome.storeLink, t);
            return;
        case RerouteOutcome::Kind::Drop:
            finalizeMessage(msg, MessageStatus::Dropped, t, outcome.dropReason);
            return;
    }
}

void Engine::handleArrive(Message& msg, double t) {
    ++msg.pathPos;
    const NodeId node = msg.path.nodes[msg.pathPos];
    if (!node.isSat()) {
        finalizeMessage(msg, MessageStatus::Delivered, t, "");
        return;
    }
    const auto check = registerArrival(msg, node.index, loopPolicy_);
    if (check.dropSignal) {
        finalizeMessage(msg, MessageStatus::Dropped, t, "loop_threshold");
        return;
    }
    processAtNode(msg, t);
}

void Engine::handleLinkChange(LinkKey link, bool down, double t) {
    if (down == (failed_.count(link) != 0))
        throw std::logic_error("handleLinkChange: no-op transition");
    if (down)
        failed_.insert(link);
    else
        failed_.erase(link);
    ++failVersion_;
    refreshGraphs(t);
    awareness_.onLinkStateChange(link, down, t, usable_);

    if (!down) {
        const auto it = stored_.find(link);
        if (it != stored_.end())
            for (int id : it->second) push(t, kReleaseStored, id, link);
        if (driver_ && driver_->owns(link)) {
            const auto next = driver_->onRecovery(link, t, t < cfg_.horizonS);
            if (next.tUpS > next.tDownS) {
                push(next.tDownS, kLinkDown, -1, next.link);
                push(next.tUpS, kLinkUp, -1, next.link);
            }
        }
    }
}

RunResult Engine::run() {
    endT_ = cfg_.horizonS + cfg_.drainS;

    const auto traffic =
        generateTraffic({cfg_.burstLengthS, cfg_.ratePerS, cfg_.horizonS, cfg_.trafficSeed},
                        cfg_.gstCount);
    messages_.resize(traffic.size());
    for (std::size_t i = 0; i < traffic.size(); ++i) {
        Message& msg = messages_[i];
        msg.id = static_cast<int>(i);
        msg.srcGst = traffic[i].srcGst;
        msg.dstGst = traffic[i].dstGst;
        msg.tEmitS = traffic[i].tEmitS;
        push(msg.tEmitS, kEmit, msg.id, 0);
    }

    if (cfg_.failureFraction > 0.0) {
        RandomFailureSpec spec;
        spec.fraction = cfg_.failureFraction;
        spec.downtimeS = cfg_.downtimeS;
        spec.seed = cfg_.failureSeed;
        for (const auto& [pair, border] : segPlan_.borderMap) spec.excludedSats.insert(border);
        driver_.emplace(spec, topology_.gridLinks());
        for (const auto& f : driver_->initialFailures()) {
            push(f.tDownS, kLinkDown, -1, f.link);
            push(f.tUpS, kLinkUp, -1, f.link);
        }
    }
    if (cfg_.targeted) {
        TargetedFailureSpec spec;
        for (const auto& [pair, border] : segPlan_.borderMap) spec.targetSats.insert(border);
        spec.tStartS = cfg_.targetedStartS;
        spec.durationS = cfg_.targetedDurationS;
        for (const auto& f : targetedOutage(spec, topology_.gridLinks())) {
            push(f.tDownS, kLinkDown, -1, f.link);
            push(f.tUpS, kLinkUp, -1, f.link);
        }
    }
    push(endT_, kEndOfRun, -1, 0);

    while (!queue_.empty()) {
        const Event ev = queue_.top();
        queue_.pop();
        if (ev.t > endT_ || (ev.t == endT_ && ev.prio == kEndOfRun)) break;
        switch (ev.prio) {
            case kLinkDown:
                handleLinkChange(ev.link, true, ev.t);
                break;
            case kLinkUp:
                handleLinkChange(ev.link, false, ev.t);
                break;
            case kReleaseStored:
                releaseMessage(messages_[ev.msgId], ev.link, ev.t);
                break;
            case kEmit:
                handleEmit(messages_[ev.msgId], ev.t);
                break;
            case kArrive:
                handleArrive(messages_[ev.msgId], ev.t);
                break;
            default:
                break;
        }
    }

    RunResult result;
    result.config = cfg_;
    for (auto& msg : messages_) {
        if (msg.status == MessageStatus::Stored) msg.storedTotalS += endT_ - msg.storedSinceS;
        result.records.push_back(toRecord(msg));
    }
    result.summary = summarize(result.records, cfg_.binS, cfg_.horizonS, cfg_.drainS);
    result.summary.paradigm = cfg_.paradigm;
    result.summary.constellation = cfg_.constellation;
    result.summary.failureFraction = cfg_.failureFraction;
    result.summary.seed = cfg_.trafficSeed;
    result.planDump = segPlan_.dump();
    return result;
}

}  // namespace

RunResult runSimulation(const RunConfig& config) {
    config.validate();
    Engine engine(config);
    return engine.run();
}

}  // namespace leoroute
