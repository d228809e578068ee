#pragma once

#include <string>
#include <vector>

#include "leoroute/config.hpp"
#include "leoroute/metrics.hpp"
#include "leoroute/segmentation.hpp"

namespace leoroute {

struct RunResult {
    RunConfig config;
    std::vector<MessageRecord> records;  // one per emitted message, by id
    RunSummary summary;
    std::string planDump;  // partition dump used for this run
};

// One deterministic discrete-event run. Two calls with an identical config
// produce byte-identical message tables.
RunResult runSimulation(const RunConfig& config);

}  // namespace leoroute
