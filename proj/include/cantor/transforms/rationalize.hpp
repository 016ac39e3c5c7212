#pragma once

#include <vector>

#include "cantor/core/bitstring.hpp"
#include "cantor/core/error.hpp"
#include "cantor/core/rational.hpp"
#include "cantor/measures/assignment.hpp"
#include "cantor/measures/oracle.hpp"

namespace cantor {

/// The dyadic rational of least exponent, then least mantissa, in the open
/// interval (lo, hi). Requires lo < hi.
inline Rational coarsest_dyadic_between(const Rational& lo, const Rational& hi) {
    if (!(lo < hi)) {
        throw PreconditionError("empty interval (" + lo.str() + ", " + hi.str() + ")");
    }
    const mpz_class lo_num = lo.numerator();
    const mpz_class lo_den = lo.denominator();
    const mpz_class hi_num = hi.numerator();
    const mpz_class hi_den = hi.denominator();
    mpz_class m;
    mpz_class scaled;
    for (unsigned long k = 0;; ++k) {
        // m = floor(lo·2^k) + 1, accepted when m·hi_den < hi_num·2^k.
        scaled = lo_num << k;
        mpz_fdiv_q(m.get_mpz_t(), scaled.get_mpz_t(), lo_den.get_mpz_t());
        m += 1;
        scaled = hi_num << k;
        if (m * hi_den < scaled) {
            return Rational(m, mpz_class(1) << k);
        }
    }
}

/// Dyadic measure ν with μ⟦σ⟧ < 2ν⟦σ⟧ for every |σ| ≤ depth.
///
/// Built top-down on unnormalized values starting from ν(ε) = 2 and halved at
/// the end. Each split keeps
///     μ(σ⌢i) < ν(σ⌢i) < μ(σ⌢i) + 2^{-|σ|},   ν(σ⌢0) + ν(σ⌢1) = ν(σ),
/// so that ν(σ) always lies strictly inside (μ(σ), μ(σ) + 2^{1-|σ|}) and the
/// admissible interval for ν(σ⌢0) is a non-empty open interval. The value
/// chosen for ν(σ⌢0) is coarsest_dyadic_between of that interval.
inline CylinderAssignment rationalize(const MeasureOracle& mu, unsigned depth) {
    if (!mu.exact()) {
        throw PreconditionError("rationalize needs an exact oracle");
    }
    std::vector<Rational> nu(CylinderAssignment::node_count(depth));
    nu[0] = Rational(2);
    for (unsigned len = 0; len < depth; ++len) {
        const Rational slack = Rational::pow2(-static_cast<long>(len));
        for (std::uint64_t i = 0; i < (std::uint64_t{1} << len); ++i) {
            const std::size_t k = (std::size_t{1} << len) - 1 + i;
            const BitString sigma = BitString::from_index(i, len);
            const Rational m0 = mu.value(sigma.child(0));
            const Rational m1 = mu.value(sigma.child(1));
            const Rational& v = nu[k];
            const Rational lo = max(m0, v - m1 - slack);
            const Rational hi = min(m0 + slack, v - m1);
            nu[2 * k + 1] = coarsest_dyadic_between(lo, hi);
            nu[2 * k + 2] = v - nu[2 * k + 1];
        }
    }
    for (auto& v : nu) {
        v = v.scaled(-1);
    }
    return CylinderAssignment(depth, ExtensionPolicy::uniform, std::move(nu));
}

} // namespace cantor
