#pragma once

#include <functional>
#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "cantor/core/bitstring.hpp"
#include "cantor/core/dyadic.hpp"
#include "cantor/core/periodic.hpp"
#include "cantor/core/rational.hpp"
#include "cantor/measures/assignment.hpp"
#include "cantor/measures/oracle.hpp"

namespace cantor {

/// Uniform measure, L⟦σ⟧ = 2^{-|σ|}.
inline MeasureOracle lebesgue() {
    return MeasureOracle(
        [](const BitString& s, unsigned) { return Rational::pow2(-static_cast<long>(s.size())); }, true,
        "lebesgue");
}

/// Unit mass on the eventually periodic real `point`.
inline MeasureOracle dirac(const EventuallyPeriodic& point) {
    return MeasureOracle(
        [point](const BitString& s, unsigned) { return Rational(point.has_prefix(s) ? 1 : 0); }, true,
        "dirac:" + point.str());
}

/// Product measure with P(bit = 1) = p, 0 < p < 1.
inline MeasureOracle bernoulli(const Dyadic& p) {
    const Rational one_prob = p.to_rational();
    if (one_prob.sign() <= 0 || one_prob >= Rational(1)) {
        throw PreconditionError("bernoulli parameter must lie strictly between 0 and 1, got " + p.str());
    }
    // p = a/2^e, so the value is a^{#1} (2^e - a)^{#0} / 2^{e|σ|}.
    const mpz_class a = p.mantissa();
    const mpz_class b = (mpz_class(1) << p.exponent()) - a;
    const unsigned long e = p.exponent();
    return MeasureOracle(
        [a, b, e](const BitString& s, unsigned) {
            const unsigned long ones = s.count_ones();
            mpz_class num;
            mpz_class tmp;
            mpz_pow_ui(num.get_mpz_t(), a.get_mpz_t(), ones);
            mpz_pow_ui(tmp.get_mpz_t(), b.get_mpz_t(), s.size() - ones);
            num *= tmp;
            return Rational(num, mpz_class(1) << (e * s.size()));
        },
        true, "bernoulli:" + p.str());
}

/// Finitely many atoms σ⌢0^ω with positive rational weights summing to one.
class FiniteRationalMeasure {
public:
    explicit FiniteRationalMeasure(std::map<BitString, Rational> weights) : weights_(std::move(weights)) {
        if (weights_.empty()) {
            throw PreconditionError("finite rational measure needs at least one atom");
        }
        Rational total(0);
        for (const auto& [sigma, w] : weights_) {
            if (w.sign() <= 0) {
                throw PreconditionError("atom weight at " + sigma.display() + " must be positive");
            }
            total += w;
        }
        if (total != Rational(1)) {
            throw PreconditionError("atom weights sum to " + total.str() + ", expected 1");
        }
    }

    const std::map<BitString, Rational>& weights() const noexcept { return weights_; }

    /// Σ Q(δ) over atoms δ⌢0^ω lying in ⟦σ⟧.
    Rational value(const BitString& sigma) const {
        Rational total(0);
        for (const auto& [delta, w] : weights_) {
            if (atom_in(delta, sigma)) {
                total += w;
            }
        }
        return total;
    }

private:
    static bool atom_in(const BitString& delta, const BitString& sigma) {
        if (sigma.size() <= delta.size()) {
            return sigma.is_prefix_of(delta);
        }
        if (!delta.is_prefix_of(sigma)) {
            return false;
        }
        for (std::size_t i = delta.size(); i < sigma.size(); ++i) {
            if (sigma[i] != 0) {
                return false;
            }
        }
        return true;
    }

    std::map<BitString, Rational> weights_;
};

inline MeasureOracle finite_rational(const FiniteRationalMeasure& m) {
    auto shared = std::make_shared<const FiniteRationalMeasure>(m);
    return MeasureOracle([shared](const BitString& s, unsigned) { return shared->value(s); }, true,
                         "finite-rational");
}

/// Membership predicate of a binary tree.
using TreePredicate = std::function<bool(const BitString&)>;

/// A node of the tree with no child in it, above the required depth.
class DeadNode : public Error {
public:
    explicit DeadNode(BitString sigma)
        : Error("tree node " + sigma.display() + " has no child in the tree"), sigma_(std::move(sigma)) {}
    const BitString& sigma() const noexcept { return sigma_; }

private:
    BitString sigma_;
};

/// Mass spread uniformly over the paths of `tree` up to `depth`: a child
/// inherits all of its parent's mass when its sibling is off the tree and
/// half of it otherwise; off-tree cylinders get 0. Below `depth` the measure
/// continues uniformly.
inline CylinderAssignment tree_uniform_assignment(const TreePredicate& tree, unsigned depth) {
    if (!tree(BitString{})) {
        throw DeadNode(BitString{});
    }
    std::vector<Rational> values(CylinderAssignment::node_count(depth), Rational(0));
    values[0] = Rational(1);
    for (unsigned len = 0; len < depth; ++len) {
        for (std::uint64_t i = 0; i < (std::uint64_t{1} << len); ++i) {
            const std::size_t k = (std::size_t{1} << len) - 1 + i;
            if (values[k].is_zero()) {
                continue;
            }
            const BitString sigma = BitString::from_index(i, len);
            const bool left = tree(sigma.child(0));
            const bool right = tree(sigma.child(1));
            if (!left && !right) {
                throw DeadNode(sigma);
            }
            const Rational share = (left && right) ? values[k].scaled(-1) : values[k];
            if (left) values[2 * k + 1] = share;
            if (right) values[2 * k + 2] = share;
        }
    }
    return CylinderAssignment(depth, ExtensionPolicy::uniform, std::move(values));
}

inline MeasureOracle tree_uniform(const TreePredicate& tree, unsigned depth) {
    return tree_uniform_assignment(tree, depth).to_oracle("tree-uniform");
}

/// Convex combination Σ w_i μ_i with positive rational weights summing to one.
/// Exact iff every component is exact.
inline MeasureOracle mixture(std::vector<std::pair<Rational, MeasureOracle>> parts) {
    if (parts.empty()) {
        throw PreconditionError("mixture needs at least one component");
    }
    Rational total(0);
    bool exact = true;
    std::string name = "mixture(";
    for (const auto& [w, mu] : parts) {
        if (w.sign() <= 0) {
            throw PreconditionError("mixture weights must be positive");
        }
        total += w;
        exact = exact && mu.exact();
        name += (name.back() == '(' ? "" : ",") + w.str() + "*" + mu.name();
    }
    if (total != Rational(1)) {
        throw PreconditionError("mixture weights sum to " + total.str() + ", expected 1");
    }
    name += ")";
    // Weights sum to one, so an error of 2^{-n} in each part stays within 2^{-n}.
    return MeasureOracle(
        [parts = std::move(parts)](const BitString& s, unsigned n) {
            Rational v(0);
            for (const auto& [w, mu] : parts) {
                v += w * mu.value(s, n);
            }
            return v;
        },
        exact, std::move(name));
}

/// Non-exact view of `mu`: value(σ, n) is off by ±2^{-(n+1)}, the sign
/// alternating with |σ|. Used to exercise the approximate code paths.
inline MeasureOracle perturbed(const MeasureOracle& mu) {
    return MeasureOracle(
        [mu](const BitString& s, unsigned n) {
            const Rational err = Rational::pow2(-static_cast<long>(n) - 1);
            return s.size() % 2 == 0 ? mu.value(s, n + 1) + err : mu.value(s, n + 1) - err;
        },
        false, "perturbed(" + mu.name() + ")");
}

} // namespace cantor
