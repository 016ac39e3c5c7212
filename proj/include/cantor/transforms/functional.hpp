#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cantor/core/bitstring.hpp"
#include "cantor/core/error.hpp"

namespace cantor {

/// Two table entries σ ⊑ τ whose outputs are not prefix-ordered.
class MonotonicityViolation : public Error {
public:
    MonotonicityViolation(BitString shorter, BitString longer)
        : Error("monotonicity violated between inputs " + shorter.display() + " and " + longer.display()),
          shorter_(std::move(shorter)), longer_(std::move(longer)) {}
    const BitString& shorter() const noexcept { return shorter_; }
    const BitString& longer() const noexcept { return longer_; }

private:
    BitString shorter_;
    BitString longer_;
};

/// A use-bounded monotone string map standing for a total (truth-table)
/// reduction. For n = 1..depth, every input of length use(n) has a table
/// entry; σ ⊑ τ implies table(σ) ⊑ table(τ). Entries are expected to have
/// length ≥ n at use(n) (see total_to); shorter ones are accepted and treated
/// as partial output by the consumers.
class MonotoneFunctional {
public:
    MonotoneFunctional(std::vector<unsigned> use, const std::map<BitString, BitString>& table)
        : use_(std::move(use)) {
        for (std::size_t i = 1; i < use_.size(); ++i) {
            if (use_[i] < use_[i - 1]) {
                throw PreconditionError("use bound must be nondecreasing");
            }
        }
        for (unsigned len : use_lengths()) {
            if (len >= 30) {
                throw PreconditionError("use length too large: " + std::to_string(len));
            }
            auto& row = table_[len];
            row.resize(std::size_t{1} << len);
            for (std::uint64_t i = 0; i < row.size(); ++i) {
                const BitString in = BitString::from_index(i, len);
                const auto it = table.find(in);
                if (it == table.end()) {
                    throw PreconditionError("functional table has no entry for input " + in.display());
                }
                row[i] = it->second;
            }
        }
        for (const auto& [in, out] : table) {
            if (!table_.contains(static_cast<unsigned>(in.size()))) {
                throw PreconditionError("table input " + in.display() + " has no matching use length");
            }
        }
        check_monotone();
    }

    /// Tabulates f on every input of every use length.
    template <typename F>
    static MonotoneFunctional from_function(std::vector<unsigned> use, F&& f) {
        std::map<BitString, BitString> table;
        std::vector<unsigned> lengths = use;
        for (unsigned len : lengths) {
            for (std::uint64_t i = 0; i < (std::uint64_t{1} << len); ++i) {
                const BitString in = BitString::from_index(i, len);
                table.emplace(in, f(in));
            }
        }
        return MonotoneFunctional(std::move(use), table);
    }

    /// Number of output levels described.
    unsigned depth() const noexcept { return static_cast<unsigned>(use_.size()); }

    /// u(n); u(0) = 0.
    unsigned use(unsigned n) const {
        if (n == 0) {
            return 0;
        }
        if (n > use_.size()) {
            throw PreconditionError("functional has no use bound for output length " + std::to_string(n));
        }
        return use_[n - 1];
    }

    const std::vector<unsigned>& use_bounds() const noexcept { return use_; }

    /// Distinct input lengths in increasing order.
    std::vector<unsigned> use_lengths() const {
        std::vector<unsigned> out;
        for (unsigned u : use_) {
            if (out.empty() || out.back() != u) {
                out.push_back(u);
            }
        }
        return out;
    }

    /// Table entry; |input| must be a use length.
    const BitString& table(const BitString& input) const {
        const auto it = table_.find(static_cast<unsigned>(input.size()));
        if (it == table_.end()) {
            throw PreconditionError("no table row for input length " + std::to_string(input.size()));
        }
        return it->second[input.index()];
    }

    /// Output on an arbitrary finite input: the entry at the longest use
    /// length not exceeding |x|, or ε if there is none.
    BitString output(const BitString& x) const {
        auto it = table_.upper_bound(static_cast<unsigned>(x.size()));
        if (it == table_.begin()) {
            return {};
        }
        --it;
        return it->second[x.prefix(it->first).index()];
    }

    /// Every entry at use(k) has length ≥ k, for k ≤ n.
    bool total_to(unsigned n) const {
        for (unsigned k = 1; k <= n; ++k) {
            const auto& row = table_.at(use(k));
            for (const auto& out : row) {
                if (out.size() < k) {
                    return false;
                }
            }
        }
        return true;
    }

    /// All entries as (input, output) pairs in input order, grouped by length.
    std::vector<std::pair<BitString, BitString>> entries() const {
        std::vector<std::pair<BitString, BitString>> out;
        for (const auto& [len, row] : table_) {
            for (std::uint64_t i = 0; i < row.size(); ++i) {
                out.emplace_back(BitString::from_index(i, len), row[i]);
            }
        }
        return out;
    }

    friend bool operator==(const MonotoneFunctional&, const MonotoneFunctional&) = default;

private:
    void check_monotone() const {
        const auto lengths = use_lengths();
        for (std::size_t j = 1; j < lengths.size(); ++j) {
            const auto& shorter = table_.at(lengths[j - 1]);
            const auto& longer = table_.at(lengths[j]);
            const unsigned shift = lengths[j] - lengths[j - 1];
            for (std::uint64_t i = 0; i < longer.size(); ++i) {
                const std::uint64_t parent = i >> shift;
                if (!shorter[parent].is_prefix_of(longer[i])) {
                    throw MonotonicityViolation(BitString::from_index(parent, lengths[j - 1]),
                                                BitString::from_index(i, lengths[j]));
                }
            }
        }
    }

    std::vector<unsigned> use_;
    std::map<unsigned, std::vector<BitString>> table_;
};

/// Standard functionals used as fixtures and CLI built-ins.
namespace functionals {

inline std::vector<unsigned> linear_use(unsigned depth, unsigned factor) {
    std::vector<unsigned> use;
    for (unsigned n = 1; n <= depth; ++n) {
        use.push_back(factor * n);
    }
    return use;
}

inline MonotoneFunctional identity(unsigned depth) {
    return MonotoneFunctional::from_function(linear_use(depth, 1), [](const BitString& s) { return s; });
}

/// Output bit i is input bit 2i XOR input bit 2i+1.
inline MonotoneFunctional pairwise_xor(unsigned depth) {
    return MonotoneFunctional::from_function(linear_use(depth, 2), [](const BitString& s) {
        BitString out;
        for (std::size_t i = 0; i + 1 < s.size(); i += 2) {
            out.push_back(s[i] ^ s[i + 1]);
        }
        return out;
    });
}

/// Every input of length n goes to 0^n.
inline MonotoneFunctional constant_zero(unsigned depth) {
    return MonotoneFunctional::from_function(linear_use(depth, 1),
                                             [](const BitString& s) { return BitString::zeros(s.size()); });
}

/// Keeps the bits at even (0-based) positions.
inline MonotoneFunctional drop_odd_bits(unsigned depth) {
    return MonotoneFunctional::from_function(linear_use(depth, 2), [](const BitString& s) {
        BitString out;
        for (std::size_t i = 0; i < s.size(); i += 2) {
            out.push_back(s[i]);
        }
        return out;
    });
}

/// Writes every input bit twice.
inline MonotoneFunctional double_each_bit(unsigned depth) {
    return MonotoneFunctional::from_function(linear_use(depth, 1), [](const BitString& s) {
        BitString out;
        for (std::size_t i = 0; i < s.size(); ++i) {
            out.push_back(s[i]);
            out.push_back(s[i]);
        }
        return out;
    });
}

} // namespace functionals

} // namespace cantor
