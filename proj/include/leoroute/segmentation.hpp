#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "leoroute/graph.hpp"
#include "leoroute/topology.hpp"

namespace leoroute {

using SegmentPair = std::pair<int, int>;  // ordered low < high

// Static k-medoids partition of the satellites plus the designated border
// satellite for every adjacent segment pair. Fixed for a whole run.
struct SegmentPlan {
    int k = 0;
    std::vector<int> assignment;                // satellite -> segment id
    std::vector<int> medoids;                   // sorted satellite indices
    std::map<SegmentPair, int> borderMap;       // adjacent pair -> border satellite
    double builtAtS = 0.0;

    std::vector<std::vector<int>> members;      // per segment, sorted
    std::vector<std::vector<int>> segmentBorders;  // per segment, sorted distinct borders

    bool isBorder(int sat) const;
    std::string dump() const;  // "satId,segmentId" rows then "segA,segB,borderSatId"
};

struct KMedoidsResult {
    std::vector<int> assignment;
    std::vector<int> medoids;
    double cost = 0.0;
};

// PAM-style k-medoids on a dense distance matrix: seeded first medoid,
// greedy build, then steepest-descent swaps to a local optimum.
// Rejects matrices with infinite entries.
KMedoidsResult kMedoids(const std::vector<double>& dist, int n, int k, std::uint64_t seed);

std::map<SegmentPair, std::set<int>> borderCandidates(const std::vector<int>& assignment,
                                                      const SatGraph& snapshot);

// Picks, per adjacent pair, the candidate with the highest closeness
// centrality over the union of both segments; ties to the lowest index.
std::map<SegmentPair, int> selectBorderSatellites(
    const std::map<SegmentPair, std::set<int>>& candidates, const std::vector<int>& assignment,
    const SatGraph& snapshot);

double closenessCentrality(const SatGraph& g, int v, const std::vector<char>& members);

SegmentPlan planPartition(const Topology& topology, int k, std::uint64_t seed, double t0);

}  // namespace leoroute
