#pragma once

#include <string>
#include <string_view>

#include "cantor/core/rational.hpp"

namespace cantor {

/// mantissa / 2^exponent in canonical form (odd mantissa, or exponent 0).
class Dyadic {
public:
    Dyadic() = default;

    Dyadic(mpz_class mantissa, unsigned long exponent)
        : mantissa_(std::move(mantissa)), exponent_(exponent) {
        normalize();
    }

    /// Throws FormatError if the rational's denominator is not a power of two.
    static Dyadic from_rational(const Rational& r) {
        if (!r.is_dyadic()) {
            throw FormatError("not a dyadic rational: " + r.str());
        }
        return Dyadic(r.numerator(), r.dyadic_exponent());
    }

    /// Accepts "m/2^k" as well as any dyadic-valued "m/n" or "m".
    static Dyadic parse(std::string_view text) {
        const auto caret = text.find("/2^");
        if (caret == std::string_view::npos) {
            return from_rational(Rational::parse(text));
        }
        const std::string_view exp = text.substr(caret + 3);
        if (exp.empty() || exp.find_first_not_of("0123456789") != std::string_view::npos
            || exp.size() > 9) {
            throw FormatError("not a dyadic: '" + std::string(text) + "'");
        }
        const Rational m = Rational::parse(text.substr(0, caret));
        if (m.denominator() != 1) {
            throw FormatError("dyadic mantissa must be an integer: '" + std::string(text) + "'");
        }
        return Dyadic(m.numerator(), std::stoul(std::string(exp)));
    }

    const mpz_class& mantissa() const noexcept { return mantissa_; }
    unsigned long exponent() const noexcept { return exponent_; }

    Rational to_rational() const { return Rational(mantissa_, mpz_class(1)).scaled(-static_cast<long>(exponent_)); }

    /// "m/2^k", or "m" when k = 0.
    std::string str() const {
        if (exponent_ == 0) {
            return mantissa_.get_str();
        }
        return mantissa_.get_str() + "/2^" + std::to_string(exponent_);
    }

    friend bool operator==(const Dyadic&, const Dyadic&) = default;

private:
    void normalize() {
        if (mantissa_ == 0) {
            exponent_ = 0;
            return;
        }
        const unsigned long tz = mpz_scan1(mantissa_.get_mpz_t(), 0);
        const unsigned long shift = tz < exponent_ ? tz : exponent_;
        if (shift > 0) {
            mpz_fdiv_q_2exp(mantissa_.get_mpz_t(), mantissa_.get_mpz_t(), shift);
            exponent_ -= shift;
        }
    }

    mpz_class mantissa_{0};
    unsigned long exponent_ = 0;
};

} // namespace cantor
