#include "leoroute/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace leoroute {

std::vector<Emission> generateTraffic(const TrafficSpec& spec, int gstCount) {
    if (gstCount < 2) throw std::invalid_argument("generateTraffic: need at least 2 ground stations");
    if (!(spec.meanRatePerS > 0.0)) throw std::invalid_argument("TrafficSpec.meanRatePerS must be > 0");
    if (!(spec.burstLengthS > 0.0)) throw std::invalid_argument("TrafficSpec.burstLengthS must be > 0");

    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> uniTime(0.0, 1.0);
    std::uniform_int_distribution<int> uniSrc(0, gstCount - 1);
    std::uniform_int_distribution<int> uniShift(1, gstCount - 1);

    std::vector<Emission> out;
    const double perBurst = spec.meanRatePerS * spec.burstLengthS;
    long long emittedSoFar = 0;
    for (int burst = 0; burst * spec.burstLengthS < spec.horizonS; ++burst) {
        const double burstStart = burst * spec.burstLengthS;
        const double burstEnd = std::min(burstStart + spec.burstLengthS, spec.horizonS);
        const long long cumulative = std::llround(perBurst * (burst + 1));
        const long long count = cumulative - emittedSoFar;
        emittedSoFar = cumulative;

        std::vector<double> times(count);
        for (auto& t : times) t = burstStart + uniTime(rng) * (burstEnd - burstStart);
        std::sort(times.begin(), times.end());
        for (double t : times) {
            const int src = uniSrc(rng);
            const int dst = (src + uniShift(rng)) % gstCount;
            out.push_back({t, src, dst});
        }
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const Emission& a, const Emission& b) { return a.tEmitS < b.tEmitS; });
    return out;
}

RandomFailureDriver::RandomFailureDriver(const RandomFailureSpec& spec,
                                         const std::vector<GridLink>& gridLinks)
    : spec_(spec), rng_(spec.seed) {
    if (spec.fraction < 0.0 || spec.fraction > 1.0)
        throw std::invalid_argument("RandomFailureSpec.fraction must be in [0,1]");
    for (const auto& l : gridLinks) {
        if (spec.excludedSats.count(l.a) || spec.excludedSats.count(l.b)) continue;
        eligible_.push_back(islKey(l.a, l.b));
    }
    std::sort(eligible_.begin(), eligible_.end());
    down_.assign(eligible_.size(), 0);
    concurrentTarget_ = static_cast<int>(std::llround(spec.fraction * eligible_.size()));
    if (concurrentTarget_ > static_cast<int>(eligible_.size()))
        throw std::invalid_argument("RandomFailureSpec: fraction exceeds eligible links");

    // Initial batch: sample without replacement; recoveries staggered over
    // (0, downtime] so later replacements de-synchronize.
    std::vector<int> pool(eligible_.size());
    for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = static_cast<int>(i);
    std::uniform_real_distribution<double> uniStagger(0.0, 1.0);
    for (int i = 0; i < concurrentTarget_; ++i) {
        std::uniform_int_distribution<int> pick(i, static_cast<int>(pool.size()) - 1);
        std::swap(pool[i], pool[pick(rng_)]);
        down_[pool[i]] = 1;
        const double tUp = spec_.downtimeS * (1.0 - uniStagger(rng_)) + 1e-9;
        initial_.push_back({eligible_[pool[i]], 0.0, tUp});
    }
    std::sort(initial_.begin(), initial_.end(),
              [](const FailureEvent& a, const FailureEvent& b) { return a.link < b.link; });
}

int RandomFailureDriver::indexOf(LinkKey link) const {
    const auto it = std::lower_bound(eligible_.begin(), eligible_.end(), link);
    if (it == eligible_.end() || *it != link) return -1;
    return static_cast<int>(it - eligible_.begin());
}

bool RandomFailureDriver::owns(LinkKey link) const {
    const int i = indexOf(link);
    return i >= 0 && down_[i];
}

FailureEvent RandomFailureDriver::onRecovery(LinkKey link, double tNow, bool allowReplacement) {
    const int i = indexOf(link);
    if (i < 0 || !down_[i]) throw std::logic_error("RandomFailureDriver: recovery of a link not owned");
    down_[i] = 0;
    if (!allowReplacement) return {0, tNow, tNow};

    int upCount = 0;
    for (char d : down_) upCount += d == 0;
    if (upCount == 0) return {0, tNow, tNow};
    std::uniform_int_distribution<int> pick(0, upCount - 1);
    int want = pick(rng_);
    for (std::size_t j = 0; j < down_.size(); ++j) {
        if (down_[j]) continue;
        if (want-- == 0) {
            down_[j] = 1;
            return {eligible_[j], tNow, tNow + spec_.downtimeS};
        }
    }
    throw std::logic_error("RandomFailureDriver: sampling fell through");
}

std::vector<FailureEvent> targetedOutage(const TargetedFailureSpec& spec,
                                         const std::vector<GridLink>& gridLinks) {
    if (spec.targetSats.empty()) throw std::invalid_argument("TargetedFailureSpec.targets empty");
    std::vector<FailureEvent> out;
    for (const auto& l : gridLinks) {
        if (!spec.targetSats.count(l.a) && !spec.targetSats.count(l.b)) continue;
        out.push_back({islKey(l.a, l.b), spec.tStartS, spec.tStartS + spec.durationS});
    }
    return out;
}

}  // namespace leoroute
