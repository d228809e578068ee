#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "leoroute/config.hpp"
#include "leoroute/engine.hpp"

namespace leoroute {

struct BatchSpec {
    RunConfig base;
    std::vector<std::string> paradigms;
    std::vector<double> fractions;
    std::vector<std::uint64_t> seeds;  // traffic/failure seed offsets
    int jobs = 1;
};

struct BatchCell {
    std::string paradigm;
    double fraction = 0.0;
    std::vector<RunSummary> runs;  // one per seed, in seed order
    std::vector<std::string> errors;
};

struct BatchResult {
    std::vector<BatchCell> cells;  // paradigm-major, fraction-minor
};

// One run per (paradigm x fraction x seed); independent runs may execute
// concurrently. When base.outDir is set, per-run tables and the merged
// comparison table are written beneath it (atomically).
BatchResult runBatch(const BatchSpec& spec);

// Rows keyed by (paradigm, fraction) with seed-averaged metrics and min/max.
std::string mergedTable(const BatchResult& result);

// Write a file atomically: complete or absent.
void writeFileAtomic(const std::string& path, const std::string& content);

// Per-run output files (messages.csv, summary.txt, series.csv) under dir.
void writeRunOutputs(const std::string& dir, const RunResult& result);

}  // namespace leoroute
