#pragma once

#include <vector>

#include "cantor/core/bitstring.hpp"
#include "cantor/core/error.hpp"
#include "cantor/core/rational.hpp"
#include "cantor/measures/oracle.hpp"

namespace cantor {

namespace detail {

/// Least n with 2^{-n} ≤ x, for x > 0.
inline unsigned precision_for(const Rational& x) {
    unsigned n = 0;
    while (Rational::pow2(-static_cast<long>(n)) > x) {
        ++n;
    }
    return n;
}

enum class Verdict { light, heavy, undecided };

/// Compares μ⟦σ⟧ against eps. Exact oracles decide directly; approximate
/// ones are queried at precisions start..start+8 and must certify either
/// value + 2^{-n} ≤ eps or value − 2^{-n} > eps.
inline Verdict compare_cylinder(const MeasureOracle& mu, const BitString& s, const Rational& eps, unsigned start) {
    if (mu.exact()) {
        return mu.value(s) <= eps ? Verdict::light : Verdict::heavy;
    }
    for (unsigned n = start; n <= start + 8; ++n) {
        const Rational v = mu.value(s, n);
        const Rational err = Rational::pow2(-static_cast<long>(n));
        if (v + err <= eps) {
            return Verdict::light;
        }
        if (v - err > eps) {
            return Verdict::heavy;
        }
    }
    return Verdict::undecided;
}

} // namespace detail

/// Least level l ≤ max_depth at which every cylinder has μ-mass at most eps.
///
/// Cylinders certified light are not expanded further: their extensions are
/// lighter still. At most 1/eps cylinders per level are therefore examined.
/// Throws NotContinuousWithin when no level qualifies, Indecisive when an
/// approximate oracle cannot settle a comparison that matters.
inline unsigned continuity_modulus(const MeasureOracle& mu, const Rational& eps, unsigned max_depth) {
    if (eps.sign() <= 0) {
        throw PreconditionError("modulus threshold must be positive");
    }
    const unsigned start = detail::precision_for(eps) + 1;
    std::vector<BitString> frontier{BitString{}};
    for (unsigned level = 0; level <= max_depth; ++level) {
        std::vector<BitString> open;
        bool heavy = false;
        const BitString* undecided = nullptr;
        for (const auto& s : frontier) {
            switch (detail::compare_cylinder(mu, s, eps, start)) {
            case detail::Verdict::light:
                break;
            case detail::Verdict::heavy:
                heavy = true;
                open.push_back(s);
                break;
            case detail::Verdict::undecided:
                if (undecided == nullptr) {
                    undecided = &s;
                }
                open.push_back(s);
                break;
            }
        }
        if (!heavy && undecided != nullptr) {
            throw Indecisive("cannot compare mass of " + undecided->display() + " against " + eps.str()
                             + " up to precision " + std::to_string(start + 8));
        }
        if (open.empty()) {
            return level;
        }
        frontier.clear();
        for (const auto& s : open) {
            frontier.push_back(s.child(0));
            frontier.push_back(s.child(1));
        }
    }
    throw NotContinuousWithin(max_depth);
}

} // namespace cantor
