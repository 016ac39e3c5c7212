#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cantor/core/bitstring.hpp"
#include "cantor/core/cantor.hpp"
#include "cantor/core/error.hpp"
#include "cantor/core/rational.hpp"
#include "cantor/measures/assignment.hpp"
#include "cantor/transforms/functional.hpp"

namespace cantor {

/// Admissible range for μ⟦σ⟧ together with the data it was derived from.
struct ConstraintRecord {
    BitString w;            ///< candidate initial segment of the inverse real
    std::set<BitString> pre; ///< Pre(σ), prefix-free
    Rational lower;         ///< L⟦Pre(σ)⟧
    Rational upper;         ///< 2^{-|w(σ)|}
};

/// Interval constraints L⟦Pre(σ)⟧ ≤ μ⟦σ⟧ ≤ 2^{-|w(σ)|} for every σ of length
/// ≤ depth on which w is defined. Strings without a record are unconstrained.
struct ConstraintSystem {
    unsigned depth = 0;
    std::map<BitString, ConstraintRecord> records;
    std::optional<MonotoneFunctional> phi;
    std::optional<MonotoneFunctional> psi;

    const ConstraintRecord* find(const BitString& sigma) const {
        const auto it = records.find(sigma);
        return it == records.end() ? nullptr : &it->second;
    }
};

/// Builds w, Pre and the interval for every σ with |σ| ≤ depth.
///
/// w(ε) = ε. For σ ≠ ε, w(σ) = w(σ⁻)⌢i exactly when w(σ⁻) is defined and
/// Ψ's output on σ properly extends it, i bit |w(σ⁻)| of that output.
/// Pre(σ) collects the strings τ of length max(use_Φ(|σ|), |w(σ)|) with
/// τ ⊒ w(σ) and Φ(τ) ⊒ σ, prefix-reduced.
inline ConstraintSystem build_constraints(const MonotoneFunctional& phi, const MonotoneFunctional& psi,
                                          unsigned depth) {
    if (depth > phi.depth()) {
        throw PreconditionError("Φ describes only " + std::to_string(phi.depth()) + " output levels");
    }
    ConstraintSystem cs;
    cs.depth = depth;
    cs.phi = phi;
    cs.psi = psi;

    auto record_for = [&](const BitString& sigma, BitString w) {
        const std::size_t length = std::max<std::size_t>(phi.use(static_cast<unsigned>(sigma.size())), w.size());
        const std::size_t free_bits = length - w.size();
        if (free_bits >= 30) {
            throw PreconditionError("Pre(" + sigma.display() + ") ranges over too many strings");
        }
        std::set<BitString> pre;
        for (std::uint64_t i = 0; i < (std::uint64_t{1} << free_bits); ++i) {
            const BitString tau = w.concat(BitString::from_index(i, free_bits));
            if (sigma.is_prefix_of(phi.output(tau))) {
                pre.insert(tau);
            }
        }
        pre = prefix_free_reduce(pre);
        ConstraintRecord r{w, pre, lebesgue_open_measure(pre), Rational::pow2(-static_cast<long>(w.size()))};
        cs.records.emplace(sigma, std::move(r));
    };

    record_for(BitString{}, BitString{});
    for (unsigned len = 1; len <= depth; ++len) {
        for (std::uint64_t i = 0; i < (std::uint64_t{1} << len); ++i) {
            const BitString sigma = BitString::from_index(i, len);
            const ConstraintRecord* parent = cs.find(sigma.parent());
            if (parent == nullptr) {
                continue;
            }
            const BitString out = psi.output(sigma);
            if (!parent->w.is_proper_prefix_of(out)) {
                continue;
            }
            record_for(sigma, parent->w.child(out[parent->w.size()]));
        }
    }
    return cs;
}

/// No assignment on the search grid meets the constraints; `witness` is
/// where the search got stuck.
class Infeasible : public Error {
public:
    explicit Infeasible(BitString witness)
        : Error("constraints infeasible at " + witness.display()), witness_(std::move(witness)) {}
    const BitString& witness() const noexcept { return witness_; }

private:
    BitString witness_;
};

namespace detail {

class ConstraintSearch {
public:
    ConstraintSearch(const ConstraintSystem& cs, unsigned grid)
        : cs_(cs), grid_(grid), values_(CylinderAssignment::node_count(cs.depth), Rational(0)) {}

    bool solve(const BitString& sigma, const Rational& v) {
        values_[CylinderAssignment::slot(sigma)] = v;
        if (sigma.size() == cs_.depth) {
            return true;
        }
        const auto key = std::make_pair(sigma, v);
        if (failed_.contains(key)) {
            return false;
        }
        const BitString left = sigma.child(0);
        const BitString right = sigma.child(1);
        // v0 ∈ [lo, hi] from the left child's own interval and from the right
        // child's interval applied to v − v0.
        Rational lo(0);
        Rational hi = v;
        if (const auto* r = cs_.find(left)) {
            lo = max(lo, r->lower);
            hi = min(hi, r->upper);
        }
        if (const auto* r = cs_.find(right)) {
            lo = max(lo, v - r->upper);
            hi = min(hi, v - r->lower);
        }
        const long exponent = static_cast<long>(left.size() + grid_);
        const mpz_class first = lo.scaled(exponent).ceil();
        const mpz_class last = hi.scaled(exponent).floor();
        if (first > last) {
            note_blocked(left, right);
            failed_.insert(key);
            return false;
        }
        // Candidates nearest the even split first; the smaller one wins ties.
        const mpz_class mid = v.scaled(exponent - 1).floor();
        const mpz_class start = mid < first ? first : (mid > last ? last : mid);
        mpz_class below = start;
        mpz_class above = start + 1;
        while (below >= first || above <= last) {
            const mpz_class distance_below = mid - below;
            const mpz_class distance_above = above - mid;
            const bool take_below = below >= first && (above > last || distance_below <= distance_above);
            const mpz_class j = take_below ? below : above;
            if (take_below) {
                below -= 1;
            } else {
                above += 1;
            }
            const Rational v0 = Rational(j, mpz_class(1)).scaled(-exponent);
            const Rational v1 = v - v0;
            if (solve(left, v0) && solve(right, v1)) {
                return true;
            }
        }
        failed_.insert(key);
        return false;
    }

    std::vector<Rational> take_values() { return std::move(values_); }
    const std::optional<BitString>& blocked() const noexcept { return blocked_; }

private:
    void note_blocked(const BitString& left, const BitString& right) {
        if (blocked_) {
            return;
        }
        blocked_ = cs_.find(left) != nullptr ? left : right;
    }

    const ConstraintSystem& cs_;
    unsigned grid_;
    std::vector<Rational> values_;
    std::set<std::pair<BitString, Rational>> failed_;
    std::optional<BitString> blocked_;
};

} // namespace detail

/// Deterministic grid search for a measure meeting every recorded interval.
///
/// Values at level k are dyadics with exponent ≤ k + grid. Nodes are filled
/// depth-first, left child before right; for each split the candidates for
/// the left child are tried in order of distance from the even split, the
/// smaller value first on ties. The first complete assignment is returned.
/// Empty recorded intervals are reported before any search, at the first
/// such σ in length-then-lexicographic order.
inline CylinderAssignment constraint_measure(const ConstraintSystem& cs, unsigned grid = 8) {
    std::vector<BitString> order;
    for (const auto& [sigma, r] : cs.records) {
        order.push_back(sigma);
    }
    std::stable_sort(order.begin(), order.end(),
                     [](const BitString& a, const BitString& b) { return a.size() < b.size(); });
    for (const auto& sigma : order) {
        const auto& r = cs.records.at(sigma);
        if (r.lower > r.upper || r.upper.sign() < 0 || r.lower > Rational(1)) {
            throw Infeasible(sigma);
        }
    }
    if (const auto* root = cs.find(BitString{}); root && (root->lower > Rational(1) || root->upper < Rational(1))) {
        throw Infeasible(BitString{});
    }
    detail::ConstraintSearch search(cs, grid);
    if (!search.solve(BitString{}, Rational(1))) {
        throw Infeasible(search.blocked().value_or(BitString{}));
    }
    return CylinderAssignment(cs.depth, ExtensionPolicy::uniform, search.take_values());
}

} // namespace cantor
