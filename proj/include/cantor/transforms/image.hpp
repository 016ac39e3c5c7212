#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cantor/core/bitstring.hpp"
#include "cantor/core/error.hpp"
#include "cantor/core/rational.hpp"
#include "cantor/measures/assignment.hpp"
#include "cantor/measures/oracle.hpp"
#include "cantor/transforms/functional.hpp"

namespace cantor {

/// What happens to the mass of an input whose output is too short to
/// decide the output cylinder.
enum class PartialOutputPolicy {
    uniform, ///< spread evenly over all output extensions
    reject,  ///< throw PreconditionError
};

inline std::string to_string(PartialOutputPolicy p) {
    return p == PartialOutputPolicy::uniform ? "uniform" : "reject";
}

inline PartialOutputPolicy parse_partial_output_policy(std::string_view s) {
    if (s == "uniform") return PartialOutputPolicy::uniform;
    if (s == "reject") return PartialOutputPolicy::reject;
    throw FormatError("unknown partial-output policy '" + std::string(s) + "'");
}

/// Image measure μ_Φ(τ) = μ(Φ^{-1}⟦τ⟧) on every τ with |τ| ≤ depth.
///
/// Mass is pushed forward once, from the inputs of length use(depth), and
/// shorter cylinders are summed from their children. For a functional total
/// to `depth` this equals Σ{μ(σ) : |σ| = use(|τ|), table(σ) ⊒ τ} at every
/// level.
inline CylinderAssignment image_measure(const MeasureOracle& mu, const MonotoneFunctional& phi, unsigned depth,
                                        PartialOutputPolicy policy = PartialOutputPolicy::uniform) {
    if (!mu.exact()) {
        throw PreconditionError("image measure needs an exact oracle");
    }
    if (depth > phi.depth()) {
        throw PreconditionError("functional describes only " + std::to_string(phi.depth()) + " output levels");
    }
    std::vector<Rational> values(CylinderAssignment::node_count(depth), Rational(0));
    const std::size_t base = (std::size_t{1} << depth) - 1;
    const unsigned input_length = phi.use(depth);
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << input_length); ++i) {
        const BitString in = BitString::from_index(i, input_length);
        Rational mass = mu.value(in);
        if (mass.is_zero()) {
            continue;
        }
        const BitString& out = depth == 0 ? in.prefix(0) : phi.table(in);
        if (out.size() >= depth) {
            values[base + out.prefix(depth).index()] += mass;
            continue;
        }
        if (policy == PartialOutputPolicy::reject) {
            throw PreconditionError("input " + in.display() + " has output " + out.display() + " shorter than "
                                    + std::to_string(depth));
        }
        const std::size_t free_bits = depth - out.size();
        const Rational share = mass.scaled(-static_cast<long>(free_bits));
        const std::uint64_t first = out.index() << free_bits;
        for (std::uint64_t j = 0; j < (std::uint64_t{1} << free_bits); ++j) {
            values[base + first + j] += share;
        }
    }
    for (std::size_t k = base; k-- > 0;) {
        values[k] = values[2 * k + 1] + values[2 * k + 2];
    }
    return CylinderAssignment(depth, ExtensionPolicy::uniform, std::move(values));
}

} // namespace cantor
