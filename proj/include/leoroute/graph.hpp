#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "leoroute/topology.hpp"

namespace leoroute {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Optional constraints applied to a satellite-graph search.
struct SearchFilter {
    const LinkSet* maskedLinks = nullptr;           // links excluded from the view
    const std::vector<char>* allowedNodes = nullptr;  // size n; 0 = node excluded

    bool edgeAllowed(int a, int b) const {
        return !maskedLinks || maskedLinks->count(islKey(a, b)) == 0;
    }
    bool nodeAllowed(int v) const { return !allowedNodes || (*allowedNodes)[v] != 0; }
};

struct SearchResult {
    std::vector<double> dist;
    std::vector<int> parent;  // -1 for unreached / source
};

// Single-source Dijkstra over the satellite graph. Ties between equal-cost
// paths resolve toward the smaller predecessor index.
SearchResult shortestDistances(const SatGraph& g, int src, const SearchFilter& filter = {});

std::vector<int> extractPath(const SearchResult& r, int src, int dst);

std::optional<std::vector<int>> shortestPath(const SatGraph& g, int src, int dst,
                                             const SearchFilter& filter = {});

double pathCost(const SatGraph& g, const std::vector<int>& path);

}  // namespace leoroute
