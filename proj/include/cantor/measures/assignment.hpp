#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cantor/core/bitstring.hpp"
#include "cantor/core/error.hpp"
#include "cantor/core/rational.hpp"
#include "cantor/measures/oracle.hpp"

namespace cantor {

/// How a finite-depth assignment answers queries below its depth.
enum class ExtensionPolicy {
    uniform,   ///< split each depth-level value evenly among extensions
    left_atom, ///< all mass follows the 0-extension (atom at σ⌢0^ω)
    stop,      ///< queries below depth are errors
};

inline std::string to_string(ExtensionPolicy p) {
    switch (p) {
    case ExtensionPolicy::uniform: return "uniform";
    case ExtensionPolicy::left_atom: return "left-atom";
    case ExtensionPolicy::stop: return "stop";
    }
    return "?";
}

inline ExtensionPolicy parse_extension_policy(std::string_view s) {
    if (s == "uniform") return ExtensionPolicy::uniform;
    if (s == "left-atom") return ExtensionPolicy::left_atom;
    if (s == "stop") return ExtensionPolicy::stop;
    throw FormatError("unknown extension policy '" + std::string(s) + "'");
}

/// The assignment violates ρ(ε)=1, additivity, or the [0,1] range at `sigma`.
class InvalidAssignment : public Error {
public:
    InvalidAssignment(BitString sigma, const std::string& what)
        : Error(what + " at " + sigma.display()), sigma_(std::move(sigma)) {}
    const BitString& sigma() const noexcept { return sigma_; }

private:
    BitString sigma_;
};

/// A query below the depth of an assignment with the `stop` policy.
class BeyondDepth : public Error {
public:
    using Error::Error;
};

/// Exact values of a measure on every string of length ≤ depth, plus the
/// policy that extends it to a total measure.
class CylinderAssignment {
public:
    /// Values are indexed level by level: ε, 0, 1, 00, 01, 10, 11, ...
    /// Validates the measure invariants; throws InvalidAssignment naming σ.
    CylinderAssignment(unsigned depth, ExtensionPolicy extension, std::vector<Rational> values)
        : depth_(depth), extension_(extension), values_(std::move(values)) {
        if (depth_ >= 40) {
            throw PreconditionError("assignment depth too large: " + std::to_string(depth_));
        }
        if (values_.size() != node_count(depth_)) {
            throw PreconditionError("assignment of depth " + std::to_string(depth_) + " needs "
                                    + std::to_string(node_count(depth_)) + " values");
        }
        validate();
    }

    /// Evaluates `f` on every string of length ≤ depth.
    template <typename F>
    static CylinderAssignment tabulate(unsigned depth, ExtensionPolicy extension, F&& f) {
        std::vector<Rational> values;
        values.reserve(node_count(depth));
        for (unsigned len = 0; len <= depth; ++len) {
            for (std::uint64_t i = 0; i < (std::uint64_t{1} << len); ++i) {
                values.push_back(f(BitString::from_index(i, len)));
            }
        }
        return CylinderAssignment(depth, extension, std::move(values));
    }

    /// Truncation of an exact oracle.
    static CylinderAssignment truncate(const MeasureOracle& mu, unsigned depth,
                                       ExtensionPolicy extension = ExtensionPolicy::uniform) {
        if (!mu.exact()) {
            throw PreconditionError("truncation needs an exact oracle");
        }
        return tabulate(depth, extension, [&](const BitString& s) { return mu.value(s); });
    }

    static std::size_t node_count(unsigned depth) { return (std::size_t{1} << (depth + 1)) - 1; }
    static std::size_t slot(const BitString& s) { return (std::size_t{1} << s.size()) - 1 + s.index(); }

    unsigned depth() const noexcept { return depth_; }
    ExtensionPolicy extension() const noexcept { return extension_; }
    const std::vector<Rational>& values() const noexcept { return values_; }

    /// Stored value; requires |σ| ≤ depth.
    const Rational& at(const BitString& s) const {
        if (s.size() > depth_) {
            throw BeyondDepth("string " + s.display() + " below assignment depth " + std::to_string(depth_));
        }
        return values_[slot(s)];
    }

    /// Value of the extended measure on any cylinder.
    Rational value(const BitString& s) const {
        if (s.size() <= depth_) {
            return values_[slot(s)];
        }
        const Rational& base = values_[slot(s.prefix(depth_))];
        switch (extension_) {
        case ExtensionPolicy::uniform:
            return base.scaled(-static_cast<long>(s.size() - depth_));
        case ExtensionPolicy::left_atom:
            for (std::size_t i = depth_; i < s.size(); ++i) {
                if (s[i] != 0) {
                    return Rational(0);
                }
            }
            return base;
        case ExtensionPolicy::stop:
            break;
        }
        throw BeyondDepth("string " + s.display() + " below assignment depth " + std::to_string(depth_));
    }

    MeasureOracle to_oracle(std::string name = "assignment") const {
        auto self = std::make_shared<const CylinderAssignment>(*this);
        return MeasureOracle([self](const BitString& s, unsigned) { return self->value(s); }, true,
                             std::move(name));
    }

    bool is_dyadic() const {
        for (const auto& v : values_) {
            if (!v.is_dyadic()) {
                return false;
            }
        }
        return true;
    }

    friend bool operator==(const CylinderAssignment&, const CylinderAssignment&) = default;

private:
    void validate() const {
        if (values_[0] != Rational(1)) {
            throw InvalidAssignment(BitString{}, "total mass is " + values_[0].str() + ", expected 1");
        }
        for (unsigned len = 0; len <= depth_; ++len) {
            for (std::uint64_t i = 0; i < (std::uint64_t{1} << len); ++i) {
                const std::size_t k = (std::size_t{1} << len) - 1 + i;
                const Rational& v = values_[k];
                if (v.sign() < 0 || v > Rational(1)) {
                    throw InvalidAssignment(BitString::from_index(i, len), "value " + v.str() + " outside [0,1]");
                }
                if (len < depth_ && values_[2 * k + 1] + values_[2 * k + 2] != v) {
                    throw InvalidAssignment(BitString::from_index(i, len),
                                            "children sum to " + (values_[2 * k + 1] + values_[2 * k + 2]).str()
                                                + ", parent is " + v.str());
                }
            }
        }
    }

    unsigned depth_;
    ExtensionPolicy extension_;
    std::vector<Rational> values_;
};

} // namespace cantor
