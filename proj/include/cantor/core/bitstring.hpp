#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "cantor/core/error.hpp"

namespace cantor {

/// Finite binary string. Ordering is the usual lexicographic order, in
/// which a proper prefix precedes its extensions.
class BitString {
public:
    BitString() = default;

    /// Accepts a run of '0'/'1'; "@" denotes the empty string.
    static BitString parse(std::string_view text) {
        if (text == "@") {
            return {};
        }
        BitString s;
        s.bits_.reserve(text.size());
        for (char c : text) {
            if (c != '0' && c != '1') {
                throw FormatError("not a bit string: '" + std::string(text) + "'");
            }
            s.bits_.push_back(c);
        }
        return s;
    }

    /// The length-`length` string spelling `index` in binary, most significant bit first.
    static BitString from_index(std::uint64_t index, std::size_t length) {
        BitString s;
        s.bits_.assign(length, '0');
        for (std::size_t i = 0; i < length; ++i) {
            if ((index >> (length - 1 - i)) & 1U) {
                s.bits_[i] = '1';
            }
        }
        return s;
    }

    static BitString zeros(std::size_t n) {
        BitString s;
        s.bits_.assign(n, '0');
        return s;
    }

    std::size_t size() const noexcept { return bits_.size(); }
    bool empty() const noexcept { return bits_.empty(); }
    int bit(std::size_t i) const { return bits_.at(i) == '1' ? 1 : 0; }
    int operator[](std::size_t i) const { return bits_[i] == '1' ? 1 : 0; }

    /// Binary value of the string; requires size() < 64.
    std::uint64_t index() const {
        std::uint64_t v = 0;
        for (char c : bits_) {
            v = (v << 1) | static_cast<std::uint64_t>(c == '1');
        }
        return v;
    }

    BitString child(int b) const {
        BitString s(*this);
        s.bits_.push_back(b ? '1' : '0');
        return s;
    }

    void push_back(int b) { bits_.push_back(b ? '1' : '0'); }

    BitString concat(const BitString& tail) const {
        BitString s(*this);
        s.bits_ += tail.bits_;
        return s;
    }

    /// First n bits (the whole string if n >= size()).
    BitString prefix(std::size_t n) const {
        BitString s;
        s.bits_ = bits_.substr(0, n);
        return s;
    }

    /// The string minus its last bit. Precondition: non-empty.
    BitString parent() const {
        if (bits_.empty()) {
            throw PreconditionError("empty string has no parent");
        }
        return prefix(bits_.size() - 1);
    }

    bool is_prefix_of(const BitString& other) const {
        return bits_.size() <= other.bits_.size()
            && other.bits_.compare(0, bits_.size(), bits_) == 0;
    }

    bool is_proper_prefix_of(const BitString& other) const {
        return bits_.size() < other.bits_.size() && is_prefix_of(other);
    }

    bool compatible_with(const BitString& other) const {
        return is_prefix_of(other) || other.is_prefix_of(*this);
    }

    std::size_t count_ones() const {
        std::size_t n = 0;
        for (char c : bits_) {
            n += c == '1';
        }
        return n;
    }

    /// Raw bits, possibly empty.
    const std::string& str() const noexcept { return bits_; }

    /// Bits, or "@" for the empty string.
    std::string display() const { return bits_.empty() ? std::string("@") : bits_; }

    friend bool operator==(const BitString&, const BitString&) = default;
    friend std::strong_ordering operator<=>(const BitString& a, const BitString& b) {
        return a.bits_.compare(b.bits_) <=> 0;
    }

    friend std::ostream& operator<<(std::ostream& os, const BitString& s) { return os << s.display(); }

private:
    std::string bits_;
};

/// All strings of the given length in lexicographic order.
inline std::vector<BitString> strings_of_length(std::size_t length) {
    if (length >= 40) {
        throw PreconditionError("refusing to enumerate 2^" + std::to_string(length) + " strings");
    }
    std::vector<BitString> out;
    out.reserve(std::size_t{1} << length);
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << length); ++i) {
        out.push_back(BitString::from_index(i, length));
    }
    return out;
}

} // namespace cantor

template <>
struct std::hash<cantor::BitString> {
    std::size_t operator()(const cantor::BitString& s) const noexcept {
        return std::hash<std::string>{}(s.str());
    }
};
