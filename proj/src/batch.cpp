#include "leoroute/batch.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>
#include <stdexcept>

namespace leoroute {

void writeFileAtomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
    }
    fs::rename(tmp, target);
}

void writeRunOutputs(const std::string& dir, const RunResult& result) {
    writeFileAtomic(dir + "/messages.csv", messagesCsv(result.records));
    writeFileAtomic(dir + "/summary.txt", summaryText(result.summary));
    writeFileAtomic(dir + "/series.csv",
                    seriesCsv(timeSeries(result.records, result.config.binS,
                                         result.config.horizonS, result.config.drainS)));
}

namespace {

std::string runDirName(const std::string& paradigm, double fraction, std::uint64_t seed) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%s-f%02d-s%llu", paradigm.c_str(),
                  static_cast<int>(std::lround(fraction * 100)),
                  static_cast<unsigned long long>(seed));
    return buf;
}

}  // namespace

BatchResult runBatch(const BatchSpec& spec) {
    struct Job {
        std::size_t cell;
        RunConfig config;
        std::uint64_t seed;
    };

    BatchResult result;
    std::vector<Job> jobs;
    for (const auto& paradigm : spec.paradigms) {
        for (double fraction : spec.fractions) {
            BatchCell cell;
            cell.paradigm = paradigm;
            cell.fraction = fraction;
            result.cells.push_back(cell);
            for (std::uint64_t seed : spec.seeds) {
                RunConfig cfg = spec.base;
                cfg.paradigm = paradigm;
                cfg.failureFraction = fraction;
                cfg.trafficSeed = spec.base.trafficSeed + seed;
                cfg.failureSeed = spec.base.failureSeed + seed;
                jobs.push_back({result.cells.size() - 1, cfg, seed});
            }
        }
    }

    const int parallel = std::max(1, spec.jobs);
    std::vector<std::pair<std::size_t, std::future<RunResult>>> inFlight;
    std::size_t next = 0;
    std::vector<std::optional<RunResult>> outcomes(jobs.size());
    std::vector<std::string> errors(jobs.size());

    const auto drainOne = [&]() {
        auto& [idx, fut] = inFlight.front();
        try {
            outcomes[idx] = fut.get();
        } catch (const std::exception& e) {
            errors[idx] = e.what();
        }
        inFlight.erase(inFlight.begin());
    };

    while (next < jobs.size() || !inFlight.empty()) {
        while (next < jobs.size() && static_cast<int>(inFlight.size()) < parallel) {
            const std::size_t idx = next++;
            inFlight.emplace_back(idx, std::async(std::launch::async, [&jobs, idx]() {
                                      return runSimulation(jobs[idx].config);
                                  }));
        }
        drainOne();
    }

    for (std::size_t i = 0; i < jobs.size(); ++i) {
        auto& cell = result.cells[jobs[i].cell];
        if (!outcomes[i]) {
            cell.errors.push_back(errors[i]);
            continue;
        }
        cell.runs.push_back(outcomes[i]->summary);
        if (!spec.base.outDir.empty()) {
            const std::string dir =
                spec.base.outDir + "/" +
                runDirName(jobs[i].config.paradigm, jobs[i].config.failureFraction, jobs[i].seed);
            writeRunOutputs(dir, *outcomes[i]);
        }
    }

    if (!spec.base.outDir.empty())
        writeFileAtomic(spec.base.outDir + "/merged.csv", mergedTable(result));
    return result;
}

namespace {

struct Stat {
    double mean = 0.0, minV = 0.0, maxV = 0.0;
};

Stat statOf(const std::vector<RunSummary>& runs, double (RunSummary::*field)) {
    Stat s;
    if (runs.empty()) return s;
    s.minV = s.maxV = runs[0].*field;
    for (const auto& r : runs) {
        const double v = r.*field;
        s.mean += v;
        s.minV = std::min(s.minV, v);
        s.maxV = std::max(s.maxV, v);
    }
    s.mean /= runs.size();
    return s;
}

void emitStat(std::ostringstream& out, const Stat& s) {
    out << ',' << formatSeconds(s.mean) << ',' << formatSeconds(s.minV) << ','
        << formatSeconds(s.maxV);
}

}  // namespace

std::string mergedTable(const BatchResult& result) {
    std::ostringstream out;
    out << "paradigm,fraction,seeds,"
           "non_delivered_pct_mean,non_delivered_pct_min,non_delivered_pct_max,"
           "latency_q97_mean_s_mean,latency_q97_mean_s_min,latency_q97_mean_s_max,"
           "pct_messages_with_loops_mean,pct_messages_with_loops_min,pct_messages_with_loops_max,"
           "avg_loop_detections_mean,avg_loop_detections_min,avg_loop_detections_max,"
           "avg_reroutes_mean,avg_reroutes_min,avg_reroutes_max,"
           "signaling_share_mean,signaling_share_min,signaling_share_max\n";
    for (const auto& cell : result.cells) {
        out << cell.paradigm << ',' << formatSeconds(cell.fraction) << ',' << cell.runs.size();
        emitStat(out, statOf(cell.runs, &RunSummary::nonDeliveredPct));
        emitStat(out, statOf(cell.runs, &RunSummary::latencyQ97MeanS));
        emitStat(out, statOf(cell.runs, &RunSummary::pctMessagesWithLoops));
        emitStat(out, statOf(cell.runs, &RunSummary::avgLoopDetectionsPerMessage));
        emitStat(out, statOf(cell.runs, &RunSummary::avgReroutesPerMessage));
        emitStat(out, statOf(cell.runs, &RunSummary::signalingShare));
        out << '\n';
    }
    return out.str();
}

}  // namespace leoroute
