#include "leoroute/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "leoroute/awareness.hpp"
#include "leoroute/constellation.hpp"

namespace leoroute {

void RunConfig::validate() const {
    constellationPreset(constellation);  // throws on unknown names
    parseParadigm(paradigm);
    if (segmentCount < 1) throw std::invalid_argument("segmentCount must be >= 1");
    if (failureFraction < 0.0 || failureFraction > 1.0)
        throw std::invalid_argument("failureFraction must be in [0,1]");
    if (!(downtimeS > 0.0)) throw std::invalid_argument("downtimeS must be > 0");
    if (!(ratePerS > 0.0)) throw std::invalid_argument("ratePerS must be > 0");
    if (!(burstLengthS > 0.0)) throw std::invalid_argument("burstLengthS must be > 0");
    if (!(horizonS > 0.0)) throw std::invalid_argument("horizonS must be > 0");
    if (drainS < 0.0) throw std::invalid_argument("drainS must be >= 0");
    if (!(planTickS > 0.0)) throw std::invalid_argument("planTickS must be > 0");
    if (!(binS > 0.0)) throw std::invalid_argument("binS must be > 0");
    if (loopThreshold < 0) throw std::invalid_argument("loopThreshold must be >= 0");
    if (gstCount < 2) throw std::invalid_argument("gstCount must be >= 2");
    if (targeted && targetedStartS + targetedDurationS > horizonS)
        throw std::invalid_argument("targetedStartS + targetedDurationS must be <= horizonS");
}

namespace {

RunConfig baseFor(const std::string& constellation) {
    RunConfig cfg;
    cfg.constellation = constellation;
    if (constellation == "iridium") {
        cfg.horizonS = 7200.0;
        cfg.ratePerS = 1.0;
    } else {
        cfg.horizonS = 1800.0;
        cfg.ratePerS = 0.5;
    }
    return cfg;
}

}  // namespace

RunConfig presetConfig(const std::string& name) {
    const auto dash = name.find('-');
    if (dash == std::string::npos) throw std::invalid_argument("unknown preset: " + name);
    const std::string head = name.substr(0, dash);
    const std::string tail = name.substr(dash + 1);

    if (head == "targeted") {
        RunConfig cfg = baseFor(tail);
        cfg.paradigm = "segment";
        cfg.horizonS = 1200.0;
        cfg.ratePerS = 1.0;
        cfg.failureFraction = 0.0;
        cfg.targeted = true;
        cfg.targetedStartS = 450.0;
        cfg.targetedDurationS = 300.0;
        cfg.validate();
        return cfg;
    }
    if (tail == "random-f0" || tail == "random-f15" || tail == "random-f30") {
        RunConfig cfg = baseFor(head);
        cfg.failureFraction = tail == "random-f0" ? 0.0 : (tail == "random-f15" ? 0.15 : 0.30);
        cfg.validate();
        return cfg;
    }
    throw std::invalid_argument("unknown preset: " + name);
}

std::vector<std::string> presetNames() {
    std::vector<std::string> names;
    for (const std::string c : {"iridium", "starlink", "leoleo"}) {
        for (const std::string f : {"random-f0", "random-f15", "random-f30"})
            names.push_back(c + "-" + f);
        names.push_back("targeted-" + c);
    }
    return names;
}

namespace {

using nlohmann::json;

template <typename T>
void take(const json& j, const char* key, T& out, std::set<std::string>& seen) {
    if (!j.contains(key)) return;
    seen.insert(key);
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception&) {
        throw std::invalid_argument(std::string("config key '") + key + "' has the wrong type");
    }
}

}  // namespace

RunConfig parseConfigText(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config parse error: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");

    RunConfig cfg;
    std::set<std::string> seen;
    if (j.contains("preset")) {
        seen.insert("preset");
        cfg = presetConfig(j.at("preset").get<std::string>());
    }
    take(j, "constellation", cfg.constellation, seen);
    take(j, "paradigm", cfg.paradigm, seen);
    take(j, "segmentCount", cfg.segmentCount, seen);
    take(j, "failureFraction", cfg.failureFraction, seen);
    take(j, "downtimeS", cfg.downtimeS, seen);
    take(j, "ratePerS", cfg.ratePerS, seen);
    take(j, "burstLengthS", cfg.burstLengthS, seen);
    take(j, "horizonS", cfg.horizonS, seen);
    take(j, "drainS", cfg.drainS, seen);
    take(j, "planTickS", cfg.planTickS, seen);
    take(j, "binS", cfg.binS, seen);
    take(j, "loopThreshold", cfg.loopThreshold, seen);
    take(j, "gstCount", cfg.gstCount, seen);
    take(j, "gstSeed", cfg.gstSeed, seen);
    take(j, "partitionSeed", cfg.partitionSeed, seen);
    take(j, "trafficSeed", cfg.trafficSeed, seen);
    take(j, "failureSeed", cfg.failureSeed, seen);
    take(j, "targeted", cfg.targeted, seen);
    take(j, "targetedStartS", cfg.targetedStartS, seen);
    take(j, "targetedDurationS", cfg.targetedDurationS, seen);
    take(j, "outDir", cfg.outDir, seen);

    for (const auto& [key, value] : j.items())
        if (!seen.count(key)) throw std::invalid_argument("unknown config key '" + key + "'");

    cfg.validate();
    return cfg;
}

RunConfig parseConfigFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parseConfigText(buffer.str());
}

std::string configToJson(const RunConfig& c) {
    json j;
    j["constellation"] = c.constellation;
    j["paradigm"] = c.paradigm;
    j["segmentCount"] = c.segmentCount;
    j["failureFraction"] = c.failureFraction;
    j["downtimeS"] = c.downtimeS;
    j["ratePerS"] = c.ratePerS;
    j["burstLengthS"] = c.burstLengthS;
    j["horizonS"] = c.horizonS;
    j["drainS"] = c.drainS;
    j["planTickS"] = c.planTickS;
    j["binS"] = c.binS;
    j["loopThreshold"] = c.loopThreshold;
    j["gstCount"] = c.gstCount;
    j["gstSeed"] = c.gstSeed;
    j["partitionSeed"] = c.partitionSeed;
    j["trafficSeed"] = c.trafficSeed;
    j["failureSeed"] = c.failureSeed;
    j["targeted"] = c.targeted;
    j["targetedStartS"] = c.targetedStartS;
    j["targetedDurationS"] = c.targetedDurationS;
    if (!c.outDir.empty()) j["outDir"] = c.outDir;
    return j.dump(2) + "\n";
}

}  // namespace leoroute
