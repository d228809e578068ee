#include "leoroute/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace leoroute {

bool SegmentPlan::isBorder(int sat) const {
    for (const auto& [pair, b] : borderMap)
        if (b == sat) return true;
    return false;
}

std::string SegmentPlan::dump() const {
    std::ostringstream out;
    for (std::size_t s = 0; s < assignment.size(); ++s) out << s << "," << assignment[s] << "\n";
    for (const auto& [pair, b] : borderMap)
        out << pair.first << "," << pair.second << "," << b << "\n";
    return out.str();
}

namespace {

double assignmentCost(const std::vector<double>& dist, int n, const std::vector<int>& medoids) {
    double cost = 0.0;
    for (int i = 0; i < n; ++i) {
        double best = kInf;
        for (int m : medoids) best = std::min(best, dist[static_cast<std::size_t>(i) * n + m]);
        cost += best;
    }
    return cost;
}

std::vector<int> assignToMedoids(const std::vector<double>& dist, int n,
                                 const std::vector<int>& medoids) {
    std::vector<int> assignment(n, -1);
    for (int i = 0; i < n; ++i) {
        double best = kInf;
        int bestSeg = -1;
        for (std::size_t s = 0; s < medoids.size(); ++s) {
            const double d = dist[static_cast<std::size_t>(i) * n + medoids[s]];
            if (d < best) {
                best = d;
                bestSeg = static_cast<int>(s);
            }
        }
        assignment[i] = bestSeg;
    }
    return assignment;
}

}  // namespace

KMedoidsResult kMedoids(const std::vector<double>& dist, int n, int k, std::uint64_t seed) {
    if (n < 1 || k < 1 || k > n) throw std::invalid_argument("kMedoids: need 1 <= k <= n");
    if (dist.size() != static_cast<std::size_t>(n) * n)
        throw std::invalid_argument("kMedoids: distance matrix size mismatch");
    for (double d : dist)
        if (!(d < kInf)) throw std::invalid_argument("kMedoids: distance matrix has infinite entries");

    const auto d = [&](int i, int j) { return dist[static_cast<std::size_t>(i) * n + j]; };

    // Seeded start, then greedy build: each further medoid is the node that
    // reduces the assignment cost the most (ties to the lowest index).
    std::vector<int> medoids;
    std::mt19937_64 rng(seed);
    medoids.push_back(static_cast<int>(std::uniform_int_distribution<int>(0, n - 1)(rng)));
    std::vector<double> nearest(n);
    for (int i = 0; i < n; ++i) nearest[i] = d(i, medoids[0]);
    while (static_cast<int>(medoids.size()) < k) {
        int best = -1;
        double bestGain = -1.0;
        for (int c = 0; c < n; ++c) {
            if (std::find(medoids.begin(), medoids.end(), c) != medoids.end()) continue;
            double gain = 0.0;
            for (int i = 0; i < n; ++i) gain += std::max(0.0, nearest[i] - d(i, c));
            if (gain > bestGain) {
                bestGain = gain;
                best = c;
            }
        }
        medoids.push_back(best);
        for (int i = 0; i < n; ++i) nearest[i] = std::min(nearest[i], d(i, best));
    }

    // Steepest-descent swap phase.
    double cost = assignmentCost(dist, n, medoids);
    for (;;) {
        double bestCost = cost;
        int bestSlot = -1, bestNode = -1;
        for (std::size_t slot = 0; slot < medoids.size(); ++slot) {
            const int old = medoids[slot];
            for (int c = 0; c < n; ++c) {
                if (std::find(medoids.begin(), medoids.end(), c) != medoids.end()) continue;
                medoids[slot] = c;
                const double trial = assignmentCost(dist, n, medoids);
                if (trial < bestCost - 1e-15) {
                    bestCost = trial;
                    bestSlot = static_cast<int>(slot);
                    bestNode = c;
                }
            }
            medoids[slot] = old;
        }
        if (bestSlot < 0) break;
        medoids[bestSlot] = bestNode;
        cost = bestCost;
    }

    std::sort(medoids.begin(), medoids.end());
    KMedoidsResult result;
    result.medoids = medoids;
    result.assignment = assignToMedoids(dist, n, medoids);
    result.cost = cost;
    return result;
}

std::map<SegmentPair, std::set<int>> borderCandidates(const std::vector<int>& assignment,
                                                      const SatGraph& snapshot) {
    std::map<SegmentPair, std::set<int>> out;
    for (const auto& [a, b] : snapshot.presentLinks) {
        const int sa = assignment[a], sb = assignment[b];
        if (sa == sb) continue;
        const SegmentPair pair{std::min(sa, sb), std::max(sa, sb)};
        out[pair].insert(a);
        out[pair].insert(b);
    }
    return out;
}

double closenessCentrality(const SatGraph& g, int v, const std::vector<char>& members) {
    SearchFilter filter;
    filter.allowedNodes = &members;
    const auto r = shortestDistances(g, v, filter);
    double sum = 0.0;
    int count = 0;
    for (int u = 0; u < g.size(); ++u) {
        if (!members[u] || u == v) continue;
        ++count;
        if (r.dist[u] == kInf) return 0.0;  // unreachable member: no centrality
        sum += r.dist[u];
    }
    if (count == 0 || sum <= 0.0) return 0.0;
    return count / sum;
}

std::map<SegmentPair, int> selectBorderSatellites(
    const std::map<SegmentPair, std::set<int>>& candidates, const std::vector<int>& assignment,
    const SatGraph& snapshot) {
    std::map<SegmentPair, int> borderMap;
    for (const auto& [pair, cands] : candidates) {
        if (cands.empty()) throw std::runtime_error("selectBorderSatellites: no candidate for pair");
        std::vector<char> members(assignment.size(), 0);
        for (std::size_t i = 0; i < assignment.size(); ++i)
            if (assignment[i] == pair.first || assignment[i] == pair.second) members[i] = 1;
        int best = -1;
        double bestC = -1.0;
        for (int v : cands) {  // std::set iterates ascending: ties go low
            const double c = closenessCentrality(snapshot, v, members);
            if (c > bestC) {
                bestC = c;
                best = v;
            }
        }
        borderMap[pair] = best;
    }
    return borderMap;
}

SegmentPlan planPartition(const Topology& topology, int k, std::uint64_t seed, double t0) {
    const LinkSet noFailures;
    const SatGraph g = topology.satGraphAt(t0);
    const auto dist = topology.distanceMatrix(g);
    const auto km = kMedoids(dist, g.size(), k, seed);

    SegmentPlan plan;
    plan.k = k;
    plan.builtAtS = t0;
    plan.assignment = km.assignment;
    plan.medoids = km.medoids;
    plan.borderMap = selectBorderSatellites(borderCandidates(km.assignment, g), km.assignment, g);

    plan.members.assign(k, {});
    for (std::size_t i = 0; i < plan.assignment.size(); ++i)
        plan.members[plan.assignment[i]].push_back(static_cast<int>(i));
    plan.segmentBorders.assign(k, {});
    for (const auto& [pair, b] : plan.borderMap) {
        plan.segmentBorders[pair.first].push_back(b);
        plan.segmentBorders[pair.second].push_back(b);
    }
    for (auto& v : plan.segmentBorders) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }
    return plan;
}

}  // namespace leoroute
