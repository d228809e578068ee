#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "leoroute/topology.hpp"

namespace leoroute {

struct TrafficSpec {
    double burstLengthS = 3.0;
    double meanRatePerS = 1.0;
    double horizonS = 0.0;
    std::uint64_t seed = 0;
};

struct Emission {
    double tEmitS = 0.0;
    int srcGst = 0;
    int dstGst = 0;
};

// Back-to-back bursts tiling [0, horizon); per-burst counts follow a rounded
// cumulative-rate accumulator so the average rate holds within one message
// per burst. Pure function of (spec, gstCount).
std::vector<Emission> generateTraffic(const TrafficSpec& spec, int gstCount);

struct RandomFailureSpec {
    double fraction = 0.0;
    double downtimeS = 60.0;
    std::set<int> excludedSats;  // border satellites: immune to random failures
    std::uint64_t seed = 0;
};

struct FailureEvent {
    LinkKey link = 0;
    double tDownS = 0.0;
    double tUpS = 0.0;
};

// Keeps round(fraction * eligible) grid ISLs concurrently failed: the initial
// batch recovers staggered over (0, downtime], and every recovery inside the
// horizon immediately fails a fresh uniformly chosen up link.
class RandomFailureDriver {
public:
    RandomFailureDriver(const RandomFailureSpec& spec, const std::vector<GridLink>& gridLinks);

    // Links to fail at t=0, paired with their staggered recovery times.
    const std::vector<FailureEvent>& initialFailures() const { return initial_; }
    int concurrentTarget() const { return concurrentTarget_; }
    int eligibleCount() const { return static_cast<int>(eligible_.size()); }

    bool owns(LinkKey link) const;
    // Called when one of this driver's links recovers; returns the
    // replacement failure, or tUp <= tDown sentinel when none (post-horizon).
    FailureEvent onRecovery(LinkKey link, double tNow, bool allowReplacement);

private:
    int indexOf(LinkKey link) const;

    RandomFailureSpec spec_;
    std::vector<LinkKey> eligible_;  // sorted for deterministic sampling
    std::vector<char> down_;
    int concurrentTarget_ = 0;
    std::vector<FailureEvent> initial_;
    std::mt19937_64 rng_;
};

struct TargetedFailureSpec {
    std::set<int> targetSats;
    double tStartS = 450.0;
    double durationS = 300.0;
};

// All grid ISLs incident to any target go down at tStart and recover
// together at tStart + duration. Shared links are deduplicated.
std::vector<FailureEvent> targetedOutage(const TargetedFailureSpec& spec,
                                         const std::vector<GridLink>& gridLinks);

}  // namespace leoroute
