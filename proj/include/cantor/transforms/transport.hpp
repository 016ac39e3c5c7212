#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cantor/core/bitstring.hpp"
#include "cantor/core/error.hpp"
#include "cantor/core/rational.hpp"
#include "cantor/measures/assignment.hpp"
#include "cantor/transforms/functional.hpp"

namespace cantor {

/// Some level l_k of the transport construction lies below the assignment's depth.
class ModulusUnavailable : public Error {
public:
    explicit ModulusUnavailable(unsigned k)
        : Error("no level within assignment depth has all values at most 2^-" + std::to_string(k)), k_(k) {}
    unsigned output_length() const noexcept { return k_; }

private:
    unsigned k_;
};

/// Levels 0 = l_0 < l_1 < ... < l_m with ν(σ) ≤ 2^{-k} whenever |σ| ≥ l_k.
inline std::vector<unsigned> transport_levels(const CylinderAssignment& nu, unsigned m) {
    std::vector<unsigned> levels{0};
    std::vector<Rational> level_max(nu.depth() + 1, Rational(0));
    for (unsigned len = 0; len <= nu.depth(); ++len) {
        const std::size_t base = (std::size_t{1} << len) - 1;
        for (std::size_t i = 0; i < (std::size_t{1} << len); ++i) {
            if (nu.values()[base + i] > level_max[len]) {
                level_max[len] = nu.values()[base + i];
            }
        }
    }
    for (unsigned k = 1; k <= m; ++k) {
        const Rational bound = Rational::pow2(-static_cast<long>(k));
        unsigned l = levels.back() + 1;
        while (l <= nu.depth() && level_max[l] > bound) {
            ++l;
        }
        if (l > nu.depth()) {
            throw ModulusUnavailable(k);
        }
        levels.push_back(l);
    }
    return levels;
}

/// Order-preserving level map φ pushing ν towards Lebesgue measure.
///
/// φ(ε) = ε. For |τ| = k, the strings of length l_{k+1} extending the
/// preimage of τ are scanned in lexicographic order; the least pivot whose
/// cumulative ν-mass reaches half the preimage mass closes the τ⌢0 block, and
/// the remaining strings go to τ⌢1. The result has use(n) = l_n.
inline MonotoneFunctional transport_map(const CylinderAssignment& nu, unsigned m) {
    for (const auto& v : nu.values()) {
        if (v.sign() <= 0) {
            throw PreconditionError("transport needs strictly positive cylinder values");
        }
    }
    const std::vector<unsigned> levels = transport_levels(nu, m);

    // Preimages are contiguous index ranges [first, last) of the level-l_k
    // strings, listed per output string τ in lexicographic order.
    using Range = std::pair<std::uint64_t, std::uint64_t>;
    std::vector<Range> ranges{{0, 1}};
    std::map<BitString, BitString> table;
    for (unsigned k = 0; k < m; ++k) {
        const unsigned shift = levels[k + 1] - levels[k];
        const std::size_t base = (std::size_t{1} << levels[k]) - 1;
        const std::size_t child_base = (std::size_t{1} << levels[k + 1]) - 1;
        std::vector<Range> next;
        next.reserve(2 * ranges.size());
        for (const auto& [first, last] : ranges) {
            Rational half(0);
            for (std::uint64_t i = first; i < last; ++i) {
                half += nu.values()[base + i];
            }
            half = half.scaled(-1);
            const std::uint64_t lo = first << shift;
            const std::uint64_t hi = last << shift;
            std::uint64_t cut = lo;
            Rational cumulative(0);
            while (cut < hi) {
                cumulative += nu.values()[child_base + cut];
                ++cut;
                if (cumulative >= half) {
                    break;
                }
            }
            next.emplace_back(lo, cut);
            next.emplace_back(cut, hi);
        }
        ranges = std::move(next);
        for (std::uint64_t t = 0; t < ranges.size(); ++t) {
            const BitString tau = BitString::from_index(t, k + 1);
            for (std::uint64_t i = ranges[t].first; i < ranges[t].second; ++i) {
                table.emplace(BitString::from_index(i, levels[k + 1]), tau);
            }
        }
    }
    return MonotoneFunctional(std::vector<unsigned>(levels.begin() + 1, levels.end()), table);
}

} // namespace cantor
