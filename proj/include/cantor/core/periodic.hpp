#pragma once

#include <string>
#include <string_view>

#include "cantor/core/bitstring.hpp"

namespace cantor {

/// An eventually periodic real head ⌢ period^ω.
class EventuallyPeriodic {
public:
    EventuallyPeriodic(BitString head, BitString period) : head_(std::move(head)), period_(std::move(period)) {
        if (period_.empty()) {
            throw PreconditionError("eventually periodic real needs a non-empty period");
        }
    }

    /// Grammar: `<head>(<period>)*`, or the shorthand `<head><bit>*` whose
    /// period is the single bit before the star. Examples: "0*", "(01)*", "1(0)*", "10*".
    static EventuallyPeriodic parse(std::string_view text) {
        const std::string original(text);
        if (text.empty() || text.back() != '*') {
            throw FormatError("periodic real must end with '*': '" + original + "'");
        }
        text.remove_suffix(1);
        if (!text.empty() && text.back() == ')') {
            const auto open = text.rfind('(');
            if (open == std::string_view::npos) {
                throw FormatError("unbalanced period: '" + original + "'");
            }
            return {BitString::parse(text.substr(0, open)),
                    BitString::parse(text.substr(open + 1, text.size() - open - 2))};
        }
        if (text.empty()) {
            throw FormatError("empty period: '" + original + "'");
        }
        return {BitString::parse(text.substr(0, text.size() - 1)), BitString::parse(text.substr(text.size() - 1))};
    }

    const BitString& head() const noexcept { return head_; }
    const BitString& period() const noexcept { return period_; }

    int bit(std::size_t i) const {
        if (i < head_.size()) {
            return head_[i];
        }
        return period_[(i - head_.size()) % period_.size()];
    }

    BitString prefix(std::size_t n) const {
        BitString s;
        for (std::size_t i = 0; i < n; ++i) {
            s.push_back(bit(i));
        }
        return s;
    }

    bool has_prefix(const BitString& sigma) const {
        for (std::size_t i = 0; i < sigma.size(); ++i) {
            if (sigma[i] != bit(i)) {
                return false;
            }
        }
        return true;
    }

    std::string str() const { return head_.str() + "(" + period_.str() + ")*"; }

private:
    BitString head_;
    BitString period_;
};

} // namespace cantor
