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
#include "cantor/measures/oracle.hpp"
#include "cantor/transforms/constraints.hpp"

namespace cantor {

/// Level n of a test: a finite set of strings, not necessarily prefix-free.
struct TestLevel {
    unsigned index = 0;
    std::set<BitString> strings;

    friend bool operator==(const TestLevel&, const TestLevel&) = default;
};

/// Finite Martin-Löf test U_0, ..., U_N.
class MLTest {
public:
    MLTest() = default;

    explicit MLTest(std::vector<TestLevel> levels) : levels_(std::move(levels)) {
        for (std::size_t n = 0; n < levels_.size(); ++n) {
            if (levels_[n].index != n) {
                throw PreconditionError("test levels must be indexed 0, 1, 2, ...; found " +
                                        std::to_string(levels_[n].index) + " at position " + std::to_string(n));
            }
        }
    }

    const std::vector<TestLevel>& levels() const noexcept { return levels_; }
    std::size_t size() const noexcept { return levels_.size(); }
    const TestLevel& operator[](std::size_t n) const { return levels_.at(n); }

    friend bool operator==(const MLTest&, const MLTest&) = default;

private:
    std::vector<TestLevel> levels_;
};

struct LevelReport {
    unsigned index = 0;
    Rational raw_sum;      ///< Σ_{σ∈U_n} μ⟦σ⟧
    Rational open_measure; ///< μ⟦U_n⟧ over the prefix-free reduction
    Rational budget;       ///< 2^{-n}
    bool pass = false;     ///< raw_sum ≤ budget
};

/// Budget check of every level against μ; the raw sum decides pass/fail.
inline std::vector<LevelReport> verify_bound(const MLTest& t, const MeasureOracle& mu) {
    if (!mu.exact()) {
        throw PreconditionError("budget verification needs an exact oracle");
    }
    std::vector<LevelReport> out;
    for (const auto& level : t.levels()) {
        LevelReport r;
        r.index = level.index;
        r.raw_sum = Rational(0);
        for (const auto& s : level.strings) {
            r.raw_sum += mu.value(s);
        }
        r.open_measure = Rational(0);
        for (const auto& s : prefix_free_reduce(level.strings)) {
            r.open_measure += mu.value(s);
        }
        r.budget = Rational::pow2(-static_cast<long>(level.index));
        r.pass = r.raw_sum <= r.budget;
        out.push_back(std::move(r));
    }
    return out;
}

enum class Coverage { covered, not_covered, indecisive };

inline std::string to_string(Coverage c) {
    switch (c) {
    case Coverage::covered: return "covered";
    case Coverage::not_covered: return "not-covered";
    case Coverage::indecisive: return "indecisive";
    }
    return "?";
}

/// Whether a real with prefix x lies in ⟦U⟧: some σ ∈ U with σ ⊑ x decides
/// yes; if instead some σ ∈ U properly extends x the prefix is too short.
inline Coverage covers_level(const TestLevel& level, const BitString& x) {
    bool short_prefix = false;
    for (const auto& s : level.strings) {
        if (s.is_prefix_of(x)) {
            return Coverage::covered;
        }
        if (x.is_proper_prefix_of(s)) {
            short_prefix = true;
        }
    }
    return short_prefix ? Coverage::indecisive : Coverage::not_covered;
}

inline std::vector<Coverage> covers(const MLTest& t, const BitString& x) {
    std::vector<Coverage> out;
    for (const auto& level : t.levels()) {
        out.push_back(covers_level(level, x));
    }
    return out;
}

/// A test string with no w/Pre record in the constraint system.
class MissingConstraint : public Error {
public:
    explicit MissingConstraint(BitString sigma)
        : Error("no constraint record for " + sigma.display()), sigma_(std::move(sigma)) {}
    const BitString& sigma() const noexcept { return sigma_; }

private:
    BitString sigma_;
};

/// Level n of the result is the prefix-free union of Pre(σ) over σ ∈ U_n.
inline MLTest pullback(const MLTest& t, const ConstraintSystem& cs) {
    std::vector<TestLevel> levels;
    for (const auto& level : t.levels()) {
        TestLevel out{level.index, {}};
        for (const auto& s : level.strings) {
            const ConstraintRecord* r = cs.find(s);
            if (r == nullptr) {
                throw MissingConstraint(s);
            }
            out.strings.insert(r->pre.begin(), r->pre.end());
        }
        out.strings = prefix_free_reduce(out.strings);
        levels.push_back(std::move(out));
    }
    return MLTest(std::move(levels));
}

/// ⟦σ⟧ ⊆ ⟦U⟧: some u ∈ U is a prefix of σ, or σ is shorter than the longest
/// string in U and both one-bit extensions are contained.
inline bool cylinder_contained(const BitString& sigma, const std::set<BitString>& u) {
    std::size_t longest = 0;
    for (const auto& s : u) {
        longest = std::max(longest, s.size());
    }
    auto rec = [&](auto&& self, const BitString& x) -> bool {
        for (const auto& s : u) {
            if (s.is_prefix_of(x)) {
                return true;
            }
        }
        if (x.size() >= longest) {
            return false;
        }
        return self(self, x.child(0)) && self(self, x.child(1));
    };
    return rec(rec, sigma);
}

/// The sets U^τ_n of a family of tests indexed by tree nodes τ.
/// Missing entries are empty levels.
using TestFamily = std::map<std::pair<unsigned, BitString>, std::set<BitString>>;

struct SurvivorTree {
    unsigned index = 0;
    std::set<BitString> nodes;       ///< prefix-closed part of T not covering the query
    std::optional<BitString> deepest; ///< lexicographically least longest node
};

struct BasisResult {
    MLTest test;
    std::vector<SurvivorTree> survivors; ///< empty when no query prefix is given
};

/// Combines the family into V_n = {σ : |σ| ≤ depth, ⟦σ⟧ ⊆ ⟦U^τ_n⟧ for all τ ∈ T with |τ| = |σ|}
/// for n = 0..levels-1.
///
/// With a query prefix R, also returns for each n the nodes τ (|τ| ≤ min(depth, |R|))
/// with ⟦R↾|τ|⟧ ⊄ ⟦U^τ_n⟧ whose proper prefixes in T all share that property.
inline BasisResult basis_combine(const std::set<BitString>& tree, const TestFamily& family, unsigned levels,
                                 unsigned depth, const std::optional<BitString>& query = std::nullopt) {
    for (const auto& tau : tree) {
        if (!tau.empty() && !tree.contains(tau.parent())) {
            throw PreconditionError("tree is not prefix-closed at " + tau.display());
        }
    }
    std::vector<std::vector<BitString>> by_length(depth + 1);
    for (const auto& tau : tree) {
        if (tau.size() <= depth) {
            by_length[tau.size()].push_back(tau);
        }
    }
    for (unsigned len = 0; len <= depth; ++len) {
        if (by_length[len].empty()) {
            throw PreconditionError("tree has no node of length " + std::to_string(len));
        }
    }
    static const std::set<BitString> empty;
    auto level_of = [&](unsigned n, const BitString& tau) -> const std::set<BitString>& {
        const auto it = family.find({n, tau});
        return it == family.end() ? empty : it->second;
    };

    BasisResult result;
    std::vector<TestLevel> test;
    for (unsigned n = 0; n < levels; ++n) {
        TestLevel v{n, {}};
        for (unsigned len = 0; len <= depth; ++len) {
            for (const auto& sigma : strings_of_length(len)) {
                bool all = true;
                for (const auto& tau : by_length[len]) {
                    if (!cylinder_contained(sigma, level_of(n, tau))) {
                        all = false;
                        break;
                    }
                }
                if (all) {
                    v.strings.insert(sigma);
                }
            }
        }
        test.push_back(std::move(v));

        if (query) {
            SurvivorTree survivors{n, {}, std::nullopt};
            const std::size_t limit = std::min<std::size_t>(depth, query->size());
            for (const auto& tau : tree) {
                if (tau.size() > limit) {
                    continue;
                }
                if (!tau.empty() && !survivors.nodes.contains(tau.parent())) {
                    continue;
                }
                if (!cylinder_contained(query->prefix(tau.size()), level_of(n, tau))) {
                    survivors.nodes.insert(tau);
                }
            }
            for (const auto& tau : survivors.nodes) {
                if (!survivors.deepest || tau.size() > survivors.deepest->size()) {
                    survivors.deepest = tau;
                }
            }
            result.survivors.push_back(std::move(survivors));
        }
    }
    result.test = MLTest(std::move(test));
    return result;
}

} // namespace cantor
