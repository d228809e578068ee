#pragma once

#include <optional>
#include <string>
#include <vector>

namespace leoroute {

struct MessageRecord {
    int msgId = 0;
    int srcGst = 0;
    int dstGst = 0;
    double tEmitS = 0.0;
    std::optional<double> tFinalS;
    std::string status;  // delivered | dropped | stored | in_flight | never_sent
    int hops = 0;
    int reroutes = 0;
    int loopDetections = 0;
    double signalingDelayS = 0.0;
    double storedTimeS = 0.0;
    std::optional<bool> crossSegment;
    std::string dropReason;  // bookkeeping only; not part of the table

    bool sent() const { return status != "never_sent"; }
    bool delivered() const { return status == "delivered"; }
};

struct RunSummary {
    std::string paradigm;
    std::string constellation;
    double failureFraction = 0.0;
    std::uint64_t seed = 0;

    long long emitted = 0;
    long long neverSent = 0;
    long long delivered = 0;
    long long dropped = 0;
    long long unresolved = 0;  // stored + in_flight + never_sent at end of drain

    double nonDeliveredPct = 0.0;           // over sent messages, with drain
    double nonDeliveredPctAtHorizon = 0.0;  // deliveries after the horizon not counted
    double latencyQ97MeanS = 0.0;
    double latencyMeanS = 0.0;
    double pctMessagesWithLoops = 0.0;
    double avgLoopDetectionsPerMessage = 0.0;
    double avgReroutesPerMessage = 0.0;
    double signalingShare = 0.0;  // mean over delivered of signaling/latency

    double binS = 60.0;
    std::vector<long long> throughputSeries;
    std::vector<long long> dropSeries;
};

// Trimmed mean of the latencies at or below the nearest-rank 0.97 quantile.
// Throws std::invalid_argument on an empty input.
double latencyQ97Mean(std::vector<double> latencies);

RunSummary summarize(const std::vector<MessageRecord>& records, double binS, double horizonS,
                     double drainS);

struct SeriesPoint {
    double binStartS = 0.0;
    long long delivered = 0;
    long long dropped = 0;
};

std::vector<SeriesPoint> timeSeries(const std::vector<MessageRecord>& records, double binS,
                                    double horizonS, double drainS);

// External tables. Headers and layouts are stable interfaces.
std::string messagesCsv(const std::vector<MessageRecord>& records);
std::string summaryText(const RunSummary& summary);
std::string seriesCsv(const std::vector<SeriesPoint>& series);

std::string formatSeconds(double s);  // fixed 9-decimal representation

}  // namespace leoroute
