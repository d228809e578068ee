#include <map>
#include <queue>

#include "doctest.h"
#include "leoroute/scenario.hpp"

using namespace leoroute;

namespace {

std::vector<GridLink> lineGrid(int n) {
    std::vector<GridLink> links;
    for (int i = 0; i + 1 < n; ++i) links.push_back({i, i + 1});
    return links;
}

}  // namespace

TEST_CASE("traffic: paper rate and burst tiling") {
    const auto traffic = generateTraffic({3.0, 1.0, 7200.0, 11}, 256);
    CHECK(traffic.size() == 7200);
    for (const auto& e : traffic) {
        CHECK(e.tEmitS >= 0.0);
        CHECK(e.tEmitS < 7200.0);
        CHECK(e.srcGst != e.dstGst);
    }
    for (std::size_t i = 1; i < traffic.size(); ++i) CHECK(traffic[i - 1].tEmitS <= traffic[i].tEmitS);
}

TEST_CASE("traffic: fractional rates follow the count accumulator") {
    // Rate 0.5/s with 3 s bursts: 1.5 per burst, realized as 2,1,2,1,...
    const auto traffic = generateTraffic({3.0, 0.5, 30.0, 5}, 16);
    std::map<int, int> perBurst;
    for (const auto& e : traffic) perBurst[static_cast<int>(e.tEmitS / 3.0)]++;
    CHECK(traffic.size() == 15);
    for (int burst = 0; burst < 10; ++burst) CHECK(perBurst[burst] == (burst % 2 == 0 ? 2 : 1));
}

TEST_CASE("traffic is a pure function of the seed") {
    const auto a = generateTraffic({3.0, 1.0, 600.0, 42}, 64);
    const auto b = generateTraffic({3.0, 1.0, 600.0, 42}, 64);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].tEmitS == b[i].tEmitS);
        CHECK(a[i].srcGst == b[i].srcGst);
        CHECK(a[i].dstGst == b[i].dstGst);
    }
    const auto c = generateTraffic({3.0, 1.0, 600.0, 43}, 64);
    CHECK(a[0].tEmitS != c[0].tEmitS);
}

TEST_CASE("random failures: fraction 0 yields an empty stream") {
    RandomFailureDriver driver({0.0, 60.0, {}, 9}, lineGrid(100));
    CHECK(driver.initialFailures().empty());
    CHECK(driver.concurrentTarget() == 0);
}

TEST_CASE("random failures: concurrent count is exact and exclusions hold") {
    RandomFailureSpec spec{0.15, 60.0, {0, 1}, 77};
    const auto grid = lineGrid(101);  // 100 links; 2 excluded via nodes 0,1
    RandomFailureDriver driver(spec, grid);
    CHECK(driver.eligibleCount() == 98);
    CHECK(driver.concurrentTarget() == 15);
    CHECK(driver.initialFailures().size() == 15);
    for (const auto& f : driver.initialFailures()) {
        const auto [a, b] = linkEndpoints(f.link);
        CHECK(a != 0);
        CHECK(a != 1);
        CHECK(b != 1);
        CHECK(f.tUpS > 0.0);
        CHECK(f.tUpS <= 60.0 + 1e-6);
    }
}

TEST_CASE("random failures: replacement keeps the concurrent count, ergodic share") {
    // Discrete replay of the recovery/replacement protocol over 7200 s.
    RandomFailureSpec spec{0.15, 60.0, {}, 123};
    const auto grid = lineGrid(133);  // 132 links, like the Iridium grid
    RandomFailureDriver driver(spec, grid);
    const int target = driver.concurrentTarget();
    CHECK(target == 20);

    struct Pending {
        double tUp;
        LinkKey link;
        bool operator<(const Pending& o) const { return tUp > o.tUp; }
    };
    std::priority_queue<Pending> queue;
    std::map<LinkKey, double> downSince;
    std::map<LinkKey, double> downTotal;
    for (const auto& f : driver.initialFailures()) {
        queue.push({f.tUpS, f.link});
        downSince[f.link] = 0.0;
    }
    const double horizon = 7200.0;
    int concurrent = target;
    while (!queue.empty()) {
        const auto [tUp, link] = queue.top();
        queue.pop();
        downTotal[link] += tUp - downSince[link];
        --concurrent;
        const bool allow = tUp < horizon;
        const auto replacement = driver.onRecovery(link, tUp, allow);
        if (replacement.tUpS > replacement.tDownS) {
            ++concurrent;
            downSince[replacement.link] = replacement.tDownS;
            queue.push({replacement.tUpS, replacement.link});
            CHECK(concurrent == target);
        }
    }
    CHECK(concurrent == 0);

    double total = 0.0;
    for (const auto& [link, d] : downTotal) total += d;
    const double meanShare = total / (132.0 * horizon);
    CHECK(meanShare == doctest::Approx(20.0 / 132.0).epsilon(0.15));
    CHECK(std::abs(meanShare - 0.15) < 0.02);
}

TEST_CASE("targeted outage covers incident links exactly once") {
    // Ring of 6: every node has degree 2.
    std::vector<GridLink> ring;
    for (int i = 0; i < 6; ++i) ring.push_back({std::min(i, (i + 1) % 6), std::max(i, (i + 1) % 6)});
    const auto events = targetedOutage({{0, 3}, 450.0, 300.0}, ring);
    CHECK(events.size() == 4);  // two nodes x degree 2, no sharing
    for (const auto& f : events) {
        CHECK(f.tDownS == 450.0);
        CHECK(f.tUpS == 750.0);
    }

    // Adjacent targets share a link: deduplicated by construction.
    const auto shared = targetedOutage({{0, 1}, 10.0, 0.0}, ring);
    CHECK(shared.size() == 3);
}
