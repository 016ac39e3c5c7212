#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>

#include <gmpxx.h>

#include "cantor/core/error.hpp"

namespace cantor {

/// Exact rational number, always kept in lowest terms with a positive
/// denominator. Thin value wrapper over GMP's mpq_class.
class Rational {
public:
    Rational() = default;
    Rational(long value) : q_(value) {}                   // NOLINT(implicit)
    Rational(int value) : q_(static_cast<long>(value)) {} // NOLINT(implicit)

    Rational(const mpz_class& num, const mpz_class& den) {
        if (den == 0) {
            throw PreconditionError("rational with zero denominator");
        }
        q_ = mpq_class(num, den);
        q_.canonicalize();
    }

    Rational(long num, long den) : Rational(mpz_class(num), mpz_class(den)) {}

    explicit Rational(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }

    /// 2^k for any integer k.
    static Rational pow2(long k) {
        Rational r(1);
        if (k >= 0) {
            mpq_mul_2exp(r.q_.get_mpq_t(), r.q_.get_mpq_t(), static_cast<mp_bitcnt_t>(k));
        } else {
            mpq_div_2exp(r.q_.get_mpq_t(), r.q_.get_mpq_t(), static_cast<mp_bitcnt_t>(-k));
        }
        return r;
    }

    /// Accepts "m/n" or "m" (optional leading '-').
    static Rational parse(std::string_view text) {
        auto digits = [](std::string_view s, bool allow_sign) {
            if (s.empty()) {
                return false;
            }
            std::size_t i = 0;
            if (allow_sign && s[0] == '-') {
                i = 1;
            }
            if (i == s.size()) {
                return false;
            }
            for (; i < s.size(); ++i) {
                if (s[i] < '0' || s[i] > '9') {
                    return false;
                }
            }
            return true;
        };
        const auto slash = text.find('/');
        const std::string_view num = text.substr(0, slash);
        const std::string_view den = slash == std::string_view::npos ? "1" : text.substr(slash + 1);
        if (!digits(num, true) || !digits(den, false)) {
            throw FormatError("not a rational: '" + std::string(text) + "'");
        }
        const mpz_class d(std::string(den), 10);
        if (d == 0) {
            throw FormatError("zero denominator: '" + std::string(text) + "'");
        }
        return Rational(mpz_class(std::string(num), 10), d);
    }

    mpz_class numerator() const { return q_.get_num(); }
    mpz_class denominator() const { return q_.get_den(); }
    const mpq_class& raw() const noexcept { return q_; }

    bool is_zero() const { return sgn(q_) == 0; }
    int sign() const { return sgn(q_); }

    /// True iff the denominator is a power of two.
    bool is_dyadic() const {
        const mpz_class& d = q_.get_den();
        return mpz_popcount(d.get_mpz_t()) == 1;
    }

    /// Exponent k with denominator 2^k; only meaningful when is_dyadic().
    unsigned long dyadic_exponent() const {
        return mpz_scan1(q_.get_den().get_mpz_t(), 0);
    }

    mpz_class floor() const {
        mpz_class r;
        mpz_fdiv_q(r.get_mpz_t(), q_.get_num().get_mpz_t(), q_.get_den().get_mpz_t());
        return r;
    }

    mpz_class ceil() const {
        mpz_class r;
        mpz_cdiv_q(r.get_mpz_t(), q_.get_num().get_mpz_t(), q_.get_den().get_mpz_t());
        return r;
    }

    /// Value times 2^k.
    Rational scaled(long k) const {
        Rational r(*this);
        if (k >= 0) {
            mpq_mul_2exp(r.q_.get_mpq_t(), q_.get_mpq_t(), static_cast<mp_bitcnt_t>(k));
        } else {
            mpq_div_2exp(r.q_.get_mpq_t(), q_.get_mpq_t(), static_cast<mp_bitcnt_t>(-k));
        }
        return r;
    }

    Rational abs() const { return Rational(mpq_class(::abs(q_))); }

    /// "m/n", or just "m" when the denominator is 1.
    std::string str() const { return q_.get_str(10); }

    Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
    Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
    Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) {
            throw PreconditionError("division by zero");
        }
        q_ /= o.q_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.q_)); }

    friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        const int c = cmp(a.q_, b.q_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    mpq_class q_;
};

inline Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

} // namespace cantor

template <>
struct std::hash<cantor::Rational> {
    std::size_t operator()(const cantor::Rational& r) const {
        return std::hash<std::string>{}(r.str());
    }
};
