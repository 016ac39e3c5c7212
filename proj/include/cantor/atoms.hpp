#pragma once

#include <map>
#include <set>
#include <vector>

#include "cantor/core/bitstring.hpp"
#include "cantor/core/error.hpp"
#include "cantor/core/rational.hpp"
#include "cantor/measures/oracle.hpp"

namespace cantor {

/// Levin's tree for locating atoms heavier than a threshold c.
///
/// σ is a node iff |σ| ≤ depth, g(σ,|σ|) ≥ c − 2^{-|σ|}, and every proper
/// prefix of σ is a node. For exact oracles the prefix condition is implied
/// by the first two (mass shrinks while the threshold grows along a path).
struct AtomTree {
    Rational threshold;
    unsigned depth = 0;
    std::set<BitString> nodes;
    std::map<BitString, Rational> mass; ///< g(σ,|σ|) for every node

    std::vector<BitString> level(unsigned m) const {
        std::vector<BitString> out;
        for (const auto& s : nodes) {
            if (s.size() == m) {
                out.push_back(s);
            }
        }
        return out;
    }

    /// 1/(c − 2^{-m}); only defined when c > 2^{-m}.
    Rational width_bound(unsigned m) const { return Rational(1) / (threshold - Rational::pow2(-static_cast<long>(m))); }

    bool width_bound_applies(unsigned m) const { return threshold > Rational::pow2(-static_cast<long>(m)); }

    /// |T ∩ 2^m| ≤ 1/(c − 2^{-m}) at every level m ≤ depth where c > 2^{-m}.
    bool width_bound_holds() const {
        for (unsigned m = 0; m <= depth; ++m) {
            if (width_bound_applies(m) && Rational(static_cast<long>(level(m).size())) > width_bound(m)) {
                return false;
            }
        }
        return true;
    }
};

inline AtomTree atom_tree(const MeasureOracle& mu, const Rational& c, unsigned depth) {
    if (c.sign() <= 0 || c >= Rational(1)) {
        throw PreconditionError("atom threshold must lie strictly between 0 and 1");
    }
    AtomTree tree{c, depth, {}, {}};
    std::vector<BitString> frontier{BitString{}};
    for (unsigned len = 0; len <= depth && !frontier.empty(); ++len) {
        const Rational bar = c - Rational::pow2(-static_cast<long>(len));
        std::vector<BitString> next;
        for (const auto& s : frontier) {
            Rational g = mu.value(s, len);
            if (g >= bar) {
                tree.nodes.insert(s);
                tree.mass.emplace(s, std::move(g));
                if (len < depth) {
                    next.push_back(s.child(0));
                    next.push_back(s.child(1));
                }
            }
        }
        frontier = std::move(next);
    }
    return tree;
}

struct IsolatedPath {
    BitString path;       ///< the bottom-level node
    unsigned certified_from = 0; ///< level from which the subtree below is a single chain
};

struct IsolationReport {
    std::vector<IsolatedPath> paths;
    /// Set when the width bound is vacuous on every level above the bottom,
    /// or when some bottom-level node could not be certified.
    bool inconclusive = false;
};

/// Bottom-level nodes whose path is isolated in the tree at desk scale.
///
/// A bottom node x is certified from level k when k < depth, the width bound
/// is in force at k (c > 2^{-k}), and the subtree of T rooted at x↾k has exactly
/// one node on every level from k to depth, i.e. every sibling subtree hanging
/// off the path below k is empty. The least such k is reported.
inline IsolationReport isolated_paths(const AtomTree& tree) {
    IsolationReport report;
    const unsigned depth = tree.depth;
    bool bound_in_force = false;
    for (unsigned k = 0; k < depth; ++k) {
        bound_in_force = bound_in_force || tree.width_bound_applies(k);
    }
    if (!bound_in_force) {
        report.inconclusive = true;
        return report;
    }

    auto chain_from = [&](const BitString& root) {
        for (unsigned m = static_cast<unsigned>(root.size()); m <= depth; ++m) {
            std::size_t count = 0;
            for (auto it = tree.nodes.lower_bound(root); it != tree.nodes.end() && root.is_prefix_of(*it); ++it) {
                count += it->size() == m;
            }
            if (count != 1) {
                return false;
            }
        }
        return true;
    };

    for (const auto& x : tree.level(depth)) {
        bool certified = false;
        for (unsigned k = 0; k < depth && !certified; ++k) {
            if (tree.width_bound_applies(k) && chain_from(x.prefix(k))) {
                report.paths.push_back({x, k});
                certified = true;
            }
        }
        if (!certified) {
            report.inconclusive = true;
        }
    }
    return report;
}

} // namespace cantor
