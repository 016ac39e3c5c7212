#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cantor/core/bitstring.hpp"
#include "cantor/core/error.hpp"
#include "cantor/core/rational.hpp"
#include "cantor/measures/modulus.hpp"
#include "cantor/measures/oracle.hpp"
#include "cantor/mltests.hpp"

namespace cantor {

struct EnumerationEvent {
    std::uint64_t element = 0;
    std::uint64_t stage = 0;

    friend bool operator==(const EnumerationEvent&, const EnumerationEvent&) = default;
};

/// A finite c.e. enumeration: each element appears once, at a positive stage,
/// stages strictly increasing. K[s] is the set of elements enumerated by stage s.
class StageEnumeration {
public:
    StageEnumeration() = default;

    explicit StageEnumeration(std::vector<EnumerationEvent> events) : events_(std::move(events)) {
        std::set<std::uint64_t> seen;
        for (std::size_t i = 0; i < events_.size(); ++i) {
            if (events_[i].stage == 0) {
                throw PreconditionError("enumeration stages must be positive");
            }
            if (i > 0 && events_[i].stage <= events_[i - 1].stage) {
                throw PreconditionError("enumeration stages must be strictly increasing");
            }
            if (!seen.insert(events_[i].element).second) {
                throw PreconditionError("element " + std::to_string(events_[i].element) + " enumerated twice");
            }
        }
    }

    const std::vector<EnumerationEvent>& events() const noexcept { return events_; }

    std::uint64_t max_stage() const { return events_.empty() ? 0 : events_.back().stage; }

    /// Events with stage ≤ t.
    StageEnumeration truncated(std::uint64_t t) const {
        std::vector<EnumerationEvent> kept;
        for (const auto& e : events_) {
            if (e.stage <= t) {
                kept.push_back(e);
            }
        }
        return StageEnumeration(std::move(kept));
    }

    /// min{s : K[s]↾(n+1) = K↾(n+1)}: the largest stage of an element ≤ n, or 0.
    std::uint64_t settling_stage(std::uint64_t n) const {
        std::uint64_t s = 0;
        for (const auto& e : events_) {
            if (e.element <= n) {
                s = std::max(s, e.stage);
            }
        }
        return s;
    }

private:
    std::vector<EnumerationEvent> events_;
};

/// Markers s_0 < s_1 < ... below `length` and the characteristic string of
/// S = {s_n} of that length.
struct SettlingResult {
    std::vector<std::uint64_t> markers;
    BitString s;
};

/// s_0 = 0, s_{n+1} = max(min{s : K[s]↾(n+1) = K↾(n+1)}, s_n + 1), computed
/// from the fully settled K.
inline SettlingResult settling_sequence(const StageEnumeration& e, std::size_t length) {
    if (length == 0) {
        throw PreconditionError("settling sequence length must be positive");
    }
    SettlingResult r;
    std::uint64_t marker = 0;
    for (std::uint64_t n = 0; marker < length; ++n) {
        r.markers.push_back(marker);
        marker = std::max(e.settling_stage(n), marker + 1);
    }
    BitString bits;
    for (std::size_t i = 0, k = 0; i < length; ++i) {
        const bool hit = k < r.markers.size() && r.markers[k] == i;
        bits.push_back(hit ? 1 : 0);
        k += hit;
    }
    r.s = std::move(bits);
    return r;
}

/// S[t]: the same construction replayed on the enumeration cut at stage t.
inline SettlingResult settling_at_stage(const StageEnumeration& e, std::uint64_t t, std::size_t length) {
    return settling_sequence(e.truncated(t), length);
}

/// One level of the continuous-measure test covering S, with the numbers
/// that produced it.
struct CoverLevel {
    unsigned n = 0;
    unsigned n0 = 0;                       ///< l(2^{-n-1})
    unsigned n1 = 0;                       ///< l(2^{-n-1}/n0)
    BitString head;                        ///< S[n1]↾n0
    std::vector<std::uint64_t> markers;    ///< markers of S[n1] below n0
    std::vector<BitString> zero_blocks;    ///< S[n1]↾s_k ⌢ 0^{n1-s_k}, one per marker
    TestLevel level;
};

/// V_n for a continuous μ. Propagates NotContinuousWithin from the modulus.
inline CoverLevel continuous_cover(const MeasureOracle& mu, const StageEnumeration& e, unsigned n,
                                   unsigned max_depth) {
    CoverLevel c;
    c.n = n;
    const Rational eps = Rational::pow2(-static_cast<long>(n) - 1);
    c.n0 = continuity_modulus(mu, eps, max_depth);
    c.n1 = continuity_modulus(mu, eps / Rational(static_cast<long>(c.n0)), max_depth);
    const SettlingResult approx = settling_at_stage(e, c.n1, std::max(c.n0, c.n1));
    c.head = approx.s.prefix(c.n0);
    c.level.index = n;
    c.level.strings.insert(c.head);
    for (std::uint64_t m : approx.markers) {
        if (m >= c.n0) {
            break;
        }
        c.markers.push_back(m);
        BitString block = approx.s.prefix(m).concat(BitString::zeros(c.n1 - m));
        c.zero_blocks.push_back(block);
        c.level.strings.insert(std::move(block));
    }
    return c;
}

struct NcrLevelReport {
    CoverLevel cover;
    Rational raw_sum;
    Rational budget;
    bool budget_ok = false;
    bool covers_s = false;
    bool unsettled = false; ///< S[n1]↾n0 differs from the settled S↾n0
};

struct NcrReport {
    std::vector<NcrLevelReport> levels;

    bool all_pass() const {
        return std::all_of(levels.begin(), levels.end(),
                           [](const NcrLevelReport& r) { return r.budget_ok && r.covers_s; });
    }
};

/// Builds V_0..V_{n_max}, checks each budget exactly against μ and whether
/// the settled S is covered. μ must be exact.
inline NcrReport verify_ncr(const MeasureOracle& mu, const StageEnumeration& e, unsigned n_max, unsigned max_depth) {
    if (!mu.exact()) {
        throw PreconditionError("verify-ncr needs an exact oracle");
    }
    NcrReport report;
    for (unsigned n = 0; n <= n_max; ++n) {
        NcrLevelReport r;
        r.cover = continuous_cover(mu, e, n, max_depth);
        r.raw_sum = Rational(0);
        for (const auto& s : r.cover.level.strings) {
            r.raw_sum += mu.value(s);
        }
        r.budget = Rational::pow2(-static_cast<long>(n));
        r.budget_ok = r.raw_sum <= r.budget;
        const SettlingResult settled = settling_sequence(e, std::max(r.cover.n0, r.cover.n1));
        r.covers_s = covers_level(r.cover.level, settled.s) == Coverage::covered;
        r.unsettled = settled.s.prefix(r.cover.n0) != r.cover.head;
        report.levels.push_back(std::move(r));
    }
    return report;
}

} // namespace cantor
