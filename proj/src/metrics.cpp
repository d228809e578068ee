#include "leoroute/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace leoroute {

std::string formatSeconds(double s) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9f", s);
    return buf;
}

double latencyQ97Mean(std::vector<double> latencies) {
    if (latencies.empty()) throw std::invalid_argument("latencyQ97Mean: empty input");
    std::sort(latencies.begin(), latencies.end());
    const std::size_t n = latencies.size();
    const std::size_t rank = static_cast<std::size_t>(std::ceil(0.97 * n));  // 1-based nearest rank
    const double cutoff = latencies[std::max<std::size_t>(rank, 1) - 1];
    double sum = 0.0;
    std::size_t count = 0;
    for (double v : latencies) {
        if (v > cutoff) break;
        sum += v;
        ++count;
    }
    return sum / count;
}

RunSummary summarize(const std::vector<MessageRecord>& records, double binS, double horizonS,
                     double drainS) {
    RunSummary s;
    s.binS = binS;

    long long sent = 0, deliveredAtHorizon = 0;
    long long withLoops = 0, totalLoops = 0, totalReroutes = 0;
    std::vector<double> latencies;
    double shareSum = 0.0;
    for (const auto& r : records) {
        ++s.emitted;
        if (!r.sent()) {
            ++s.neverSent;
            ++s.unresolved;
            continue;
        }
        ++sent;
        totalLoops += r.loopDetections;
        totalReroutes += r.reroutes;
        if (r.loopDetections > 0) ++withLoops;
        if (r.delivered()) {
            ++s.delivered;
            if (*r.tFinalS <= horizonS) ++deliveredAtHorizon;
            const double latency = *r.tFinalS - r.tEmitS;
            latencies.push_back(latency);
            if (latency > 0.0) shareSum += r.signalingDelayS / latency;
        } else if (r.status == "dropped") {
            ++s.dropped;
        } else {
            ++s.unresolved;
        }
    }

    if (sent > 0) {
        s.nonDeliveredPct = 100.0 * (sent - s.delivered) / sent;
        s.nonDeliveredPctAtHorizon = 100.0 * (sent - deliveredAtHorizon) / sent;
        s.pctMessagesWithLoops = 100.0 * withLoops / sent;
        s.avgLoopDetectionsPerMessage = static_cast<double>(totalLoops) / sent;
        s.avgReroutesPerMessage = static_cast<double>(totalReroutes) / sent;
    }
    if (!latencies.empty()) {
        s.latencyQ97MeanS = latencyQ97Mean(latencies);
        double sum = 0.0;
        for (double v : latencies) sum += v;
        s.latencyMeanS = sum / latencies.size();
        s.signalingShare = shareSum / latencies.size();
    }

    for (const auto& p : timeSeries(records, binS, horizonS, drainS)) {
        s.throughputSeries.push_back(p.delivered);
        s.dropSeries.push_back(p.dropped);
    }
    return s;
}

std::vector<SeriesPoint> timeSeries(const std::vector<MessageRecord>& records, double binS,
                                    double horizonS, double drainS) {
    if (!(binS > 0.0)) throw std::invalid_argument("timeSeries: binS must be > 0");
    const double span = horizonS + drainS;
    const std::size_t bins =
        span > 0.0 ? static_cast<std::size_t>(std::floor((span - 1e-9) / binS)) + 1 : 1;
    std::vector<SeriesPoint> series(bins);
    for (std::size_t i = 0; i < series.size(); ++i) series[i].binStartS = i * binS;
    for (const auto& r : records) {
        if (!r.tFinalS) continue;
        const auto bin = static_cast<std::size_t>(*r.tFinalS / binS);
        if (bin >= series.size()) continue;
        if (r.delivered())
            ++series[bin].delivered;
        else if (r.status == "dropped")
            ++series[bin].dropped;
    }
    return series;
}

std::string messagesCsv(const std::vector<MessageRecord>& records) {
    std::ostringstream out;
    out << "msg_id,src_gst,dst_gst,t_emit_s,t_final_s,status,hops,reroutes,loop_detections,"
           "signaling_delay_s,stored_time_s,cross_segment\n";
    for (const auto& r : records) {
        out << r.msgId << ',' << r.srcGst << ',' << r.dstGst << ',' << formatSeconds(r.tEmitS)
            << ',';
        if (r.tFinalS) out << formatSeconds(*r.tFinalS);
        out << ',' << r.status << ',' << r.hops << ',' << r.reroutes << ',' << r.loopDetections
            << ',' << formatSeconds(r.signalingDelayS) << ',' << formatSeconds(r.storedTimeS)
            << ',';
        if (r.crossSegment) out << (*r.crossSegment ? "true" : "false");
        out << '\n';
    }
    return out.str();
}

namespace {

std::string joinSeries(const std::vector<long long>& v) {
    std::ostringstream out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out << ',';
        out << v[i];
    }
    return out.str();
}

}  // namespace

std::string summaryText(const RunSummary& s) {
    std::ostringstream out;
    out << "paradigm: " << s.paradigm << '\n';
    out << "constellation: " << s.constellation << '\n';
    out << "failureFraction: " << formatSeconds(s.failureFraction) << '\n';
    out << "seed: " << s.seed << '\n';
    out << "emitted: " << s.emitted << '\n';
    out << "neverSent: " << s.neverSent << '\n';
    out << "delivered: " << s.delivered << '\n';
    out << "dropped: " << s.dropped << '\n';
    out << "unresolved: " << s.unresolved << '\n';
    out << "nonDeliveredPct: " << formatSeconds(s.nonDeliveredPct) << '\n';
    out << "nonDeliveredPctAtHorizon: " << formatSeconds(s.nonDeliveredPctAtHorizon) << '\n';
    out << "latencyQ97MeanS: " << formatSeconds(s.latencyQ97MeanS) << '\n';
    out << "latencyMeanS: " << formatSeconds(s.latencyMeanS) << '\n';
    out << "pctMessagesWithLoops: " << formatSeconds(s.pctMessagesWithLoops) << '\n';
    out << "avgLoopDetectionsPerMessage: " << formatSeconds(s.avgLoopDetectionsPerMessage) << '\n';
    out << "avgReroutesPerMessage: " << formatSeconds(s.avgReroutesPerMessage) << '\n';
    out << "signalingShare: " << formatSeconds(s.signalingShare) << '\n';
    out << "binS: " << formatSeconds(s.binS) << '\n';
    out << "throughputSeries: " << joinSeries(s.throughputSeries) << '\n';
    out << "dropSeries: " << joinSeries(s.dropSeries) << '\n';
    return out.str();
}

std::string seriesCsv(const std::vector<SeriesPoint>& series) {
    std::ostringstream out;
    out << "bin_start_s,delivered,dropped\n";
    for (const auto& p : series)
        out << formatSeconds(p.binStartS) << ',' << p.delivered << ',' << p.dropped << '\n';
    return out.str();
}

}  // namespace leoroute
