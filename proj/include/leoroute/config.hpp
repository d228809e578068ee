#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace leoroute {

// One simulation run, fully specified. Defaults follow the experiment
// presets; see configs/ for ready-made files.
struct RunConfig {
    std::string constellation = "iridium";  // iridium | starlink | leoleo
    std::string paradigm = "source";        // source | neighbor | segment | global
    int segmentCount = 3;
    double failureFraction = 0.0;
    double downtimeS = 60.0;
    double ratePerS = 1.0;
    double burstLengthS = 3.0;
    double horizonS = 7200.0;
    double drainS = 600.0;
    double planTickS = 10.0;
    double binS = 60.0;
    int loopThreshold = 0;  // 0: constellation default
    int gstCount = 256;
    std::uint64_t gstSeed = 1;
    std::uint64_t partitionSeed = 1;
    std::uint64_t trafficSeed = 2;
    std::uint64_t failureSeed = 3;
    bool targeted = false;
    double targetedStartS = 450.0;
    double targetedDurationS = 300.0;
    std::string outDir;

    void validate() const;  // throws std::invalid_argument naming the field
};

// Named experiment presets: "<constellation>-random-f{0,15,30}" and
// "targeted-<constellation>".
RunConfig presetConfig(const std::string& name);
std::vector<std::string> presetNames();

// JSON config. Unknown keys, type mismatches and constraint violations are
// fatal; a "preset" key seeds the defaults before other keys override them.
RunConfig parseConfigText(const std::string& text);
RunConfig parseConfigFile(const std::string& path);

std::string configToJson(const RunConfig& config);

}  // namespace leoroute
