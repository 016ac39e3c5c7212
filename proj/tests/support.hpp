#pragma once

// Seeded generators and brute-force reference computations shared by the
// test binaries. Nothing here calls the library routine it is compared with.

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cantor/cantor.hpp"

namespace testing_support {

using namespace cantor;

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline BitString random_bits(std::mt19937_64& rng, std::size_t len) {
    std::string s;
    for (std::size_t i = 0; i < len; ++i) {
        s.push_back((rng() & 1) ? '1' : '0');
    }
    return BitString::parse(s.empty() ? "@" : s);
}

inline BitString random_string(std::mt19937_64& rng, std::size_t max_len) {
    return random_bits(rng, rng() % (max_len + 1));
}

inline std::set<BitString> random_set(std::mt19937_64& rng, std::size_t count, std::size_t max_len) {
    std::set<BitString> out;
    for (std::size_t i = 0; i < count; ++i) {
        out.insert(random_string(rng, max_len));
    }
    return out;
}

/// Monotone functional with use(n) = factor·n: each use-length input gets its
/// parent's output followed by one or two random bits.
inline MonotoneFunctional random_functional(std::mt19937_64& rng, unsigned depth, unsigned factor) {
    std::vector<unsigned> use;
    for (unsigned n = 1; n <= depth; ++n) {
        use.push_back(factor * n);
    }
    std::map<BitString, BitString> table;
    std::map<BitString, BitString> previous{{BitString{}, BitString{}}};
    for (unsigned n = 1; n <= depth; ++n) {
        std::map<BitString, BitString> level;
        for (std::uint64_t i = 0; i < (std::uint64_t{1} << (factor * n)); ++i) {
            const BitString in = BitString::from_index(i, factor * n);
            BitString out = previous.at(in.prefix(factor * (n - 1)));
            out = out.concat(random_bits(rng, 1 + rng() % 2));
            level.emplace(in, out);
            table.emplace(in, out);
        }
        previous = std::move(level);
    }
    return MonotoneFunctional(use, table);
}

/// Σ μ(σ) over all σ of length use(|τ|) whose table entry extends τ.
inline Rational brute_image_value(const MeasureOracle& mu, const MonotoneFunctional& phi, const BitString& tau) {
    const unsigned u = phi.use(static_cast<unsigned>(tau.size()));
    Rational sum(0);
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << u); ++i) {
        const BitString sigma = BitString::from_index(i, u);
        std::string out = phi.output(sigma).str();
        if (out.rfind(tau.str(), 0) == 0) {
            sum += mu.value(sigma);
        }
    }
    return sum;
}

/// ⟦σ⟧ ⊆ ⟦U⟧ by listing every extension of σ to the longest length in U.
inline bool brute_contained(const BitString& sigma, const std::set<BitString>& u) {
    std::size_t longest = sigma.size();
    for (const auto& s : u) {
        longest = std::max(longest, s.size());
    }
    const std::size_t extra = longest - sigma.size();
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << extra); ++i) {
        const std::string x = sigma.str() + BitString::from_index(i, extra).str();
        bool hit = false;
        for (const auto& s : u) {
            if (x.compare(0, s.size(), s.str()) == 0) {
                hit = true;
                break;
            }
        }
        if (!hit) {
            return false;
        }
    }
    return true;
}

/// Exact measures used by the property suites.
inline std::vector<std::pair<std::string, MeasureOracle>> exact_measures() {
    FiniteRationalMeasure two_atoms({{BitString::parse("0"), Rational(1, 2)}, {BitString::parse("1"), Rational(1, 2)}});
    FiniteRationalMeasure three_atoms({{BitString::parse("011"), Rational(1, 3)},
                                       {BitString::parse("1"), Rational(1, 6)},
                                       {BitString::parse("0"), Rational(1, 2)}});
    auto no_11 = [](const BitString& s) { return s.str().find("11") == std::string::npos; };
    return {
        {"lebesgue", lebesgue()},
        {"dirac 0*", dirac(EventuallyPeriodic::parse("0*"))},
        {"dirac (01)*", dirac(EventuallyPeriodic::parse("(01)*"))},
        {"dirac 1(0)*", dirac(EventuallyPeriodic::parse("1(0)*"))},
        {"bernoulli 1/4", bernoulli(Dyadic::parse("1/4"))},
        {"bernoulli 3/8", bernoulli(Dyadic::parse("3/8"))},
        {"finite two atoms", finite_rational(two_atoms)},
        {"finite three atoms", finite_rational(three_atoms)},
        {"tree no 11", tree_uniform(no_11, 6)},
        {"mixture", mixture({{Rational(1, 2), dirac(EventuallyPeriodic::parse("0*"))}, {Rational(1, 2), lebesgue()}})},
    };
}

} // namespace testing_support
