#pragma once

#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "arfkit/error.hpp"

namespace arfkit
{

// Arbitrary-precision rational, always in lowest terms with positive
// denominator.
using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

// "p/q", or "p" when the denominator is 1.
inline std::string to_string(const Rational &r)
{
    return r.str();
}

inline bool is_integral(const Rational &r)
{
    return denominator(r) == 1;
}

inline Rational parse_rational(std::string_view text)
{
    auto trim = [](std::string_view s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
            s.remove_prefix(1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
            s.remove_suffix(1);
        return s;
    };
    auto parse_int = [](std::string_view s) {
        if (s.empty())
            throw InputError("empty integer literal");
        std::size_t i = (s.front() == '-' || s.front() == '+') ? 1 : 0;
        if (i == s.size())
            throw InputError("malformed integer literal '" + std::string(s) + "'");
        for (std::size_t k = i; k < s.size(); ++k) {
            if (!std::isdigit(static_cast<unsigned char>(s[k])))
                throw InputError("malformed integer literal '" + std::string(s) + "'");
        }
        return Integer(std::string(s.front() == '+' ? s.substr(1) : s));
    };

    text = trim(text);
    auto slash = text.find('/');
    if (slash == std::string_view::npos)
        return Rational(parse_int(text));
    Integer num = parse_int(trim(text.substr(0, slash)));
    Integer den = parse_int(trim(text.substr(slash + 1)));
    if (den == 0)
        throw InputError("zero denominator in '" + std::string(text) + "'");
    return Rational(num, den);
}

// ---------------------------------------------------------------------------
// Coefficient fields
//
// A field descriptor knows its characteristic, produces its constants and
// embeds exact rationals. Values of different fields never mix: every binary
// operation on prime-field elements checks the modulus.
// ---------------------------------------------------------------------------

struct RationalField {
    using value_type = Rational;

    static constexpr unsigned characteristic() noexcept { return 0; }
    static Rational zero() { return Rational(0); }
    static Rational one() { return Rational(1); }
    static Rational from_rational(const Rational &r) { return r; }
    static bool is_zero(const Rational &x) { return x == 0; }
    static std::string format(const Rational &x) { return to_string(x); }
    static std::string name() { return "QQ"; }

    friend bool operator==(const RationalField &, const RationalField &) = default;
};

// Element of Z/pZ for a small prime p, stored as the canonical residue.
class ModP
{
public:
    ModP() = default;
    ModP(std::int64_t value, std::uint32_t p) : p_(p)
    {
        auto r = value % static_cast<std::int64_t>(p);
        residue_ = static_cast<std::uint32_t>(r < 0 ? r + p : r);
    }

    std::uint32_t residue() const noexcept { return residue_; }
    std::uint32_t modulus() const noexcept { return p_; }

    ModP inverse() const
    {
        if (residue_ == 0)
            throw InputError("division by zero in GF(" + std::to_string(p_) + ")");
        // Fermat: a^(p-2)
        std::uint64_t result = 1, base = residue_;
        for (std::uint32_t e = p_ - 2; e != 0; e >>= 1) {
            if (e & 1)
                result = result * base % p_;
            base = base * base % p_;
        }
        return ModP(static_cast<std::int64_t>(result), p_);
    }

    friend ModP operator+(ModP a, ModP b) { return ModP(std::int64_t(a.residue_) + b.residue_, same(a, b)); }
    friend ModP operator-(ModP a, ModP b) { return ModP(std::int64_t(a.residue_) - b.residue_, same(a, b)); }
    friend ModP operator*(ModP a, ModP b)
    {
        return ModP(static_cast<std::int64_t>(std::uint64_t(a.residue_) * b.residue_ % same(a, b)), a.p_);
    }
    friend ModP operator/(ModP a, ModP b)
    {
        same(a, b);
        return a * b.inverse();
    }
    ModP operator-() const { return ModP(-std::int64_t(residue_), p_); }
    ModP &operator+=(ModP b) { return *this = *this + b; }
    ModP &operator-=(ModP b) { return *this = *this - b; }
    ModP &operator*=(ModP b) { return *this = *this * b; }

    friend bool operator==(ModP a, ModP b) { return a.p_ == b.p_ && a.residue_ == b.residue_; }

private:
    static std::uint32_t same(ModP a, ModP b)
    {
        if (a.p_ != b.p_)
            throw InputError("mismatched coefficient fields GF(" + std::to_string(a.p_) + ") and GF(" +
                             std::to_string(b.p_) + ")");
        return a.p_;
    }

    std::uint32_t residue_ = 0;
    std::uint32_t p_ = 0;
};

inline bool is_prime(std::uint32_t n)
{
    if (n < 2)
        return false;
    for (std::uint32_t d = 2; d * d <= n; ++d) {
        if (n % d == 0)
            return false;
    }
    return true;
}

class PrimeField
{
public:
    using value_type = ModP;
    static constexpr std::uint32_t max_characteristic = 97;

    explicit PrimeField(std::uint32_t p) : p_(p)
    {
        if (!is_prime(p) || p > max_characteristic)
            throw InputError("characteristic must be a prime <= 97, got " + std::to_string(p));
    }

    unsigned characteristic() const noexcept { return p_; }
    ModP zero() const { return ModP(0, p_); }
    ModP one() const { return ModP(1, p_); }
    bool is_zero(const ModP &x) const { return x.residue() == 0; }
    std::string format(const ModP &x) const { return std::to_string(x.residue()); }
    std::string name() const { return "GF(" + std::to_string(p_) + ")"; }

    ModP from_rational(const Rational &r) const
    {
        auto reduce = [this](const Integer &z) {
            Integer m = z % p_;
            return ModP(m.convert_to<std::int64_t>(), p_);
        };
        ModP den = reduce(denominator(r));
        if (den.residue() == 0)
            throw InputError("coefficient " + to_string(r) + " has a denominator divisible by " + std::to_string(p_));
        return reduce(numerator(r)) / den;
    }

    friend bool operator==(const PrimeField &, const PrimeField &) = default;

private:
    std::uint32_t p_;
};

} // namespace arfkit
