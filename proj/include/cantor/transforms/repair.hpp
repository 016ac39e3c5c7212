#pragma once

#include <vector>

#include "cantor/core/bitstring.hpp"
#include "cantor/core/error.hpp"
#include "cantor/core/rational.hpp"
#include "cantor/measures/assignment.hpp"
#include "cantor/measures/oracle.hpp"
#include "cantor/transforms/functional.hpp"

namespace cantor {

/// Image of μ under Φ, made continuous with the help of Ψ.
///
/// Mass flows down the output tree level by level. An input ρ of length
/// use_Φ(n+1) whose Φ-output extends τ⌢i stays attached to τ⌢i while ρ is
/// compatible with Ψ(τ⌢i); once it is not, its mass joins the spread mass of
/// τ⌢i, which from then on is halved between both children at every level.
/// Inputs whose output is too short to pick a child are spread at once.
/// Every step conserves mass, so the result is additive.
inline CylinderAssignment continuity_repair(const MeasureOracle& mu, const MonotoneFunctional& phi,
                                            const MonotoneFunctional& psi, unsigned depth) {
    if (!mu.exact()) {
        throw PreconditionError("continuity repair needs an exact oracle");
    }
    if (depth > phi.depth()) {
        throw PreconditionError("functional describes only " + std::to_string(phi.depth()) + " output levels");
    }
    struct Node {
        std::vector<std::uint64_t> inputs; ///< attached inputs of length use_Φ(level)
        Rational spread{0};
    };
    std::vector<Rational> values(CylinderAssignment::node_count(depth), Rational(0));
    values[0] = Rational(1);
    std::vector<Node> level(1);
    level[0].inputs.push_back(0);
    for (unsigned n = 0; n < depth; ++n) {
        const unsigned from = phi.use(n);
        const unsigned to = phi.use(n + 1);
        const unsigned shift = to - from;
        std::vector<Node> next(std::size_t{2} << n);
        std::vector<BitString> psi_out(next.size());
        for (std::uint64_t c = 0; c < next.size(); ++c) {
            psi_out[c] = psi.output(BitString::from_index(c, n + 1));
        }
        for (std::uint64_t t = 0; t < level.size(); ++t) {
            const Rational half = level[t].spread.scaled(-1);
            next[2 * t].spread += half;
            next[2 * t + 1].spread += half;
            for (std::uint64_t i : level[t].inputs) {
                for (std::uint64_t j = i << shift; j < (i + 1) << shift; ++j) {
                    const BitString rho = BitString::from_index(j, to);
                    Rational mass = mu.value(rho);
                    if (mass.is_zero()) {
                        continue;
                    }
                    const BitString& out = phi.table(rho);
                    if (out.size() <= n) {
                        const Rational share = mass.scaled(-1);
                        next[2 * t].spread += share;
                        next[2 * t + 1].spread += share;
                        continue;
                    }
                    const std::uint64_t c = 2 * t + static_cast<std::uint64_t>(out[n]);
                    if (rho.compatible_with(psi_out[c])) {
                        next[c].inputs.push_back(j);
                    } else {
                        next[c].spread += mass;
                    }
                }
            }
        }
        const std::size_t base = (std::size_t{2} << n) - 1;
        for (std::uint64_t c = 0; c < next.size(); ++c) {
            Rational v = next[c].spread;
            for (std::uint64_t j : next[c].inputs) {
                v += mu.value(BitString::from_index(j, to));
            }
            values[base + c] = std::move(v);
        }
        level = std::move(next);
    }
    return CylinderAssignment(depth, ExtensionPolicy::uniform, std::move(values));
}

} // namespace cantor
