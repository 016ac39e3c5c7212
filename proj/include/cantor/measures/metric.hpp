#pragma once

#include <vector>

#include "cantor/core/bitstring.hpp"
#include "cantor/core/error.hpp"
#include "cantor/core/rational.hpp"
#include "cantor/measures/oracle.hpp"

namespace cantor {

namespace detail {

inline void require_exact(const MeasureOracle& a, const MeasureOracle& b) {
    if (!a.exact() || !b.exact()) {
        throw PreconditionError("measure metric needs exact oracles");
    }
}

/// sums[k] += Σ_{|τ|=k, τ⊒σ} |μ(τ) − ν(τ)| for every k in [|σ|, sums.size()).
/// Once either side vanishes on ⟦σ⟧ the level sums below σ are all equal to
/// |μ(σ) − ν(σ)|, so the subtree is not descended.
inline void accumulate_differences(const MeasureOracle& mu, const MeasureOracle& nu, const BitString& sigma,
                                   std::vector<Rational>& sums) {
    const Rational a = mu.value(sigma);
    const Rational b = nu.value(sigma);
    const Rational diff = (a - b).abs();
    if (a.is_zero() || b.is_zero()) {
        if (!diff.is_zero()) {
            for (std::size_t k = sigma.size(); k < sums.size(); ++k) {
                sums[k] += diff;
            }
        }
        return;
    }
    sums[sigma.size()] += diff;
    if (sigma.size() + 1 < sums.size()) {
        accumulate_differences(mu, nu, sigma.child(0), sums);
        accumulate_differences(mu, nu, sigma.child(1), sums);
    }
}

/// Σ_{|σ|=k} |μ(σ) − ν(σ)| for k = 0..max_level.
inline std::vector<Rational> level_differences(const MeasureOracle& mu, const MeasureOracle& nu, unsigned max_level) {
    std::vector<Rational> sums(max_level + 1, Rational(0));
    accumulate_differences(mu, nu, BitString{}, sums);
    return sums;
}

} // namespace detail

/// d_n(μ,ν) = ½ Σ_{|σ|=n} |μ⟦σ⟧ − ν⟦σ⟧|, exact.
inline Rational metric_dn(const MeasureOracle& mu, const MeasureOracle& nu, unsigned n) {
    detail::require_exact(mu, nu);
    return detail::level_differences(mu, nu, n)[n].scaled(-1);
}

/// A rational within 2^{-precision} of d_P(μ,ν) = Σ_{n≥1} 2^{-n} d_n(μ,ν).
///
/// The series is cut at N = precision + 1; since every d_k ≤ 1 the omitted
/// tail is at most 2^{-N}. The returned partial sum never exceeds d_P.
inline Rational metric_dP(const MeasureOracle& mu, const MeasureOracle& nu, unsigned precision) {
    detail::require_exact(mu, nu);
    const unsigned cutoff = precision + 1;
    const auto sums = detail::level_differences(mu, nu, cutoff);
    Rational total(0);
    for (unsigned k = 1; k <= cutoff; ++k) {
        total += sums[k].scaled(-static_cast<long>(k) - 1);
    }
    return total;
}

} // namespace cantor
