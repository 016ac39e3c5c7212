#pragma once

#include <algorithm>
#include <set>

#include "cantor/core/bitstring.hpp"
#include "cantor/core/rational.hpp"

namespace cantor {

inline BitString longest_common_prefix(const BitString& x, const BitString& y) {
    const std::size_t n = std::min(x.size(), y.size());
    std::size_t i = 0;
    while (i < n && x[i] == y[i]) {
        ++i;
    }
    return x.prefix(i);
}

/// Distance 2^{-|x∩y|} between reals known through the prefixes x and y.
///
/// The prefixes must differ somewhere within their common length, unless the
/// caller declares the two reals equal, in which case the distance is 0.
/// Prefixes that agree on their common length decide nothing and raise
/// AmbiguousPrefix.
inline Rational cantor_distance(const BitString& x, const BitString& y, bool declared_equal = false) {
    const BitString common = longest_common_prefix(x, y);
    const bool differ = common.size() < std::min(x.size(), y.size());
    if (declared_equal) {
        if (differ) {
            throw PreconditionError("reals declared equal but prefixes " + x.display() + " and "
                                    + y.display() + " differ");
        }
        return Rational(0);
    }
    if (!differ) {
        throw AmbiguousPrefix("prefixes " + x.display() + " and " + y.display()
                              + " agree on their common length");
    }
    return Rational::pow2(-static_cast<long>(common.size()));
}

/// Minimal elements of `strings` under the prefix order. The open set they
/// generate is unchanged.
inline std::set<BitString> prefix_free_reduce(const std::set<BitString>& strings) {
    std::set<BitString> out;
    // In lexicographic order every string comes after all of its prefixes, so
    // it suffices to compare against the last kept element.
    for (const auto& s : strings) {
        if (!out.empty() && out.rbegin()->is_prefix_of(s)) {
            continue;
        }
        out.insert(out.end(), s);
    }
    return out;
}

/// Lebesgue measure of a finite set of strings taken as a sum over its prefix-free reduction.
inline Rational lebesgue_open_measure(const std::set<BitString>& strings) {
    Rational total(0);
    for (const auto& s : prefix_free_reduce(strings)) {
        total += Rational::pow2(-static_cast<long>(s.size()));
    }
    return total;
}

} // namespace cantor
