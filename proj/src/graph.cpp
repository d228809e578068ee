#include "leoroute/graph.hpp"

#include <algorithm>
#include <queue>

namespace leoroute {

SearchResult shortestDistances(const SatGraph& g, int src, const SearchFilter& filter) {
    const int n = g.size();
    SearchResult r;
    r.dist.assign(n, kInf);
    r.parent.assign(n, -1);
    if (src < 0 || src >= n || !filter.nodeAllowed(src)) return r;
    r.dist[src] = 0.0;

    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    pq.push({0.0, src});
    while (!pq.empty()) {
        const auto [du, u] = pq.top();
        pq.pop();
        if (du > r.dist[u]) continue;
        for (const auto& e : g.adj[u]) {
            if (!filter.nodeAllowed(e.to) || !filter.edgeAllowed(u, e.to)) continue;
            const double nd = du + e.latencyS;
            if (nd < r.dist[e.to]) {
                r.dist[e.to] = nd;
                r.parent[e.to] = u;
                pq.push({nd, e.to});
            } else if (nd == r.dist[e.to] && r.parent[e.to] > u) {
                r.parent[e.to] = u;
            }
        }
    }
    return r;
}

std::vector<int> extractPath(const SearchResult& r, int src, int dst) {
    std::vector<int> path;
    if (dst < 0 || dst >= static_cast<int>(r.dist.size()) || r.dist[dst] == kInf) return path;
    for (int v = dst; v != -1; v = r.parent[v]) {
        path.push_back(v);
        if (v == src) break;
    }
    std::reverse(path.begin(), path.end());
    if (path.front() != src) path.clear();
    return path;
}

std::optional<std::vector<int>> shortestPath(const SatGraph& g, int src, int dst,
                                             const SearchFilter& filter) {
    if (src == dst) return std::vector<int>{src};
    const SearchResult r = shortestDistances(g, src, filter);
    auto path = extractPath(r, src, dst);
    if (path.empty()) return std::nullopt;
    return path;
}

double pathCost(const SatGraph& g, const std::vector<int>& path) {
    double cost = 0.0;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        const int u = path[i], v = path[i + 1];
        bool found = false;
        for (const auto& e : g.adj[u]) {
            if (e.to == v) {
                cost += e.latencyS;
                found = true;
                break;
            }
        }
        if (!found) return kInf;
    }
    return cost;
}

}  // namespace leoroute
