#pragma once

#include <algorithm>
#include <cctype>
#include <concepts>
#include <cstddef>
#include <limits>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>

#include "arfkit/error.hpp"
#include "arfkit/scalar.hpp"

namespace arfkit
{

template <class F>
concept CoefficientField = requires(const F f, const typename F::value_type x, const Rational r) {
    { f.zero() } -> std::convertible_to<typename F::value_type>;
    { f.one() } -> std::convertible_to<typename F::value_type>;
    { f.from_rational(r) } -> std::convertible_to<typename F::value_type>;
    { f.is_zero(x) } -> std::convertible_to<bool>;
    { f.format(x) } -> std::convertible_to<std::string>;
    { f.characteristic() } -> std::convertible_to<unsigned>;
    { x + x } -> std::convertible_to<typename F::value_type>;
    { x - x } -> std::convertible_to<typename F::value_type>;
    { x * x } -> std::convertible_to<typename F::value_type>;
    { x / x } -> std::convertible_to<typename F::value_type>;
    { f == f } -> std::convertible_to<bool>;
};

// Valuation of a truncated series: either a finite exponent, or the bound T
// of a series that is indistinguishable from zero at precision T.
class Order
{
public:
    static Order finite(std::size_t value) { return Order(value, false); }
    static Order at_least(std::size_t bound) { return Order(bound, true); }

    bool is_finite() const noexcept { return !at_least_; }

    std::size_t value() const
    {
        if (at_least_)
            throw PrecisionError("order is only known to be >= " + std::to_string(value_));
        return value_;
    }

    // For comparisons: the exponent, or the bound for the sentinel.
    std::size_t bound() const noexcept { return value_; }

    std::string to_string() const { return (at_least_ ? ">=" : "") + std::to_string(value_); }

    friend bool operator==(const Order &, const Order &) = default;

private:
    Order(std::size_t value, bool at_least) : value_(value), at_least_(at_least) {}

    std::size_t value_;
    bool at_least_;
};

inline constexpr std::size_t default_truncation = 64;

// A power series over F known modulo t^T. Only nonzero coefficients are
// stored, all at exponents below T.
template <CoefficientField F>
class TruncatedSeries
{
public:
    using field_type = F;
    using value_type = typename F::value_type;
    using container = std::map<std::size_t, value_type>;

    TruncatedSeries(F field, std::size_t truncation) : field_(std::move(field)), truncation_(truncation) {}

    static TruncatedSeries monomial(F field, value_type coefficient, std::size_t exponent, std::size_t truncation)
    {
        TruncatedSeries s(std::move(field), truncation);
        s.set(exponent, std::move(coefficient));
        return s;
    }

    static TruncatedSeries constant(F field, value_type c, std::size_t truncation)
    {
        return monomial(std::move(field), std::move(c), 0, truncation);
    }

    const F &field() const noexcept { return field_; }
    std::size_t truncation() const noexcept { return truncation_; }
    const container &terms() const noexcept { return coeffs_; }

    Order order() const
    {
        if (coeffs_.empty())
            return Order::at_least(truncation_);
        return Order::finite(coeffs_.begin()->first);
    }

    bool is_zero_at_precision() const noexcept { return coeffs_.empty(); }

    value_type coefficient(std::size_t exponent) const
    {
        auto it = coeffs_.find(exponent);
        return it == coeffs_.end() ? field_.zero() : it->second;
    }

    value_type constant_term() const { return coefficient(0); }

    value_type leading_coefficient() const
    {
        if (coeffs_.empty())
            throw PrecisionError("leading coefficient of a series that is zero at precision " +
                                 std::to_string(truncation_));
        return coeffs_.begin()->second;
    }

    // Adds c*t^e; exponents at or beyond the truncation are ignored.
    void add_term(std::size_t exponent, const value_type &c)
    {
        if (exponent >= truncation_ || field_.is_zero(c))
            return;
        auto [it, inserted] = coeffs_.try_emplace(exponent, c);
        if (!inserted) {
            it->second = it->second + c;
            if (field_.is_zero(it->second))
                coeffs_.erase(it);
        }
    }

    void set(std::size_t exponent, value_type c)
    {
        coeffs_.erase(exponent);
        add_term(exponent, c);
    }

    // this -= c * other, in place; the truncation drops to min(T, T_other).
    void subtract_scaled(const TruncatedSeries &other, const value_type &c)
    {
        if (!(field_ == other.field_))
            throw InputError("mismatched coefficient fields");
        if (other.truncation_ < truncation_) {
            truncation_ = other.truncation_;
            coeffs_.erase(coeffs_.lower_bound(truncation_), coeffs_.end());
        }
        for (const auto &[e, v] : other.coeffs_) {
            if (e >= truncation_)
                break;
            add_term(e, field_.zero() - c * v);
        }
    }

    TruncatedSeries with_truncation(std::size_t truncation) const
    {
        TruncatedSeries r(field_, std::min(truncation, truncation_));
        for (const auto &[e, c] : coeffs_) {
            if (e >= r.truncation_)
                break;
            r.coeffs_.emplace(e, c);
        }
        return r;
    }

    TruncatedSeries scaled(const value_type &c) const
    {
        TruncatedSeries r(field_, truncation_);
        if (field_.is_zero(c))
            return r;
        for (const auto &[e, v] : coeffs_)
            r.coeffs_.emplace(e, v * c);
        return r;
    }

    // Same series divided by its leading coefficient.
    TruncatedSeries monic() const { return scaled(field_.one() / leading_coefficient()); }

    TruncatedSeries operator-() const { return scaled(field_.zero() - field_.one()); }

    // Equal stored coefficients and equal truncation.
    friend bool operator==(const TruncatedSeries &a, const TruncatedSeries &b)
    {
        return a.field_ == b.field_ && a.truncation_ == b.truncation_ && a.coeffs_ == b.coeffs_;
    }

    // Agreement on every exponent below min(T_a, T_b).
    friend bool agree(const TruncatedSeries &a, const TruncatedSeries &b)
    {
        auto t = std::min(a.truncation_, b.truncation_);
        return a.with_truncation(t).coeffs_ == b.with_truncation(t).coeffs_;
    }

private:
    F field_;
    std::size_t truncation_;
    container coeffs_;
};

namespace detail
{
template <CoefficientField F>
void require_same_field(const TruncatedSeries<F> &a, const TruncatedSeries<F> &b)
{
    if (!(a.field() == b.field()))
        throw InputError("mismatched coefficient fields");
}
} // namespace detail

template <CoefficientField F>
TruncatedSeries<F> add(const TruncatedSeries<F> &a, const TruncatedSeries<F> &b)
{
    detail::require_same_field(a, b);
    TruncatedSeries<F> r = a.with_truncation(b.truncation());
    for (const auto &[e, c] : b.terms())
        r.add_term(e, c);
    return r;
}

template <CoefficientField F>
TruncatedSeries<F> sub(const TruncatedSeries<F> &a, const TruncatedSeries<F> &b)
{
    return add(a, -b);
}

// Cauchy product; the result is known modulo t^min(T_a, T_b).
template <CoefficientField F>
TruncatedSeries<F> mul(const TruncatedSeries<F> &a, const TruncatedSeries<F> &b)
{
    detail::require_same_field(a, b);
    const auto t = std::min(a.truncation(), b.truncation());
    TruncatedSeries<F> r(a.field(), t);
    for (const auto &[ea, ca] : a.terms()) {
        if (ea >= t)
            break;
        for (const auto &[eb, cb] : b.terms()) {
            if (ea + eb >= t)
                break;
            r.add_term(ea + eb, ca * cb);
        }
    }
    return r;
}

// The series q with q*b = a. Requires order(b) <= order(a); the quotient is
// known modulo t^(min(T_a, T_b) - order(b)).
template <CoefficientField F>
TruncatedSeries<F> div(const TruncatedSeries<F> &a, const TruncatedSeries<F> &b)
{
    detail::require_same_field(a, b);
    const auto ob = b.order();
    if (!ob.is_finite())
        throw PrecisionError("division by a series that is zero at precision " + std::to_string(b.truncation()));
    const std::size_t shift = ob.value();
    const auto oa = a.order();
    if (oa.is_finite() && oa.value() < shift)
        throw InputError("quotient leaves the power-series ring: order " + std::to_string(oa.value()) +
                         " divided by order " + std::to_string(shift));
    const std::size_t window = std::min(a.truncation(), b.truncation());
    if (window <= shift)
        throw PrecisionError("quotient has no known coefficients: truncation " + std::to_string(window) +
                             " does not exceed divisor order " + std::to_string(shift));

    const std::size_t tq = window - shift;
    const auto &f = a.field();
    const auto lead_inv = f.one() / b.leading_coefficient();
    TruncatedSeries<F> q(f, tq);
    // q_k = (a_{k+s} - sum_{j=1..k} u_j q_{k-j}) / u_0, with u_j = b_{s+j}.
    for (std::size_t k = 0; k < tq; ++k) {
        auto acc = a.coefficient(k + shift);
        for (const auto &[e, bc] : b.terms()) {
            const std::size_t j = e - shift;
            if (j == 0)
                continue;
            if (j > k)
                break;
            const auto &qt = q.terms();
            auto it = qt.find(k - j);
            if (it != qt.end())
                acc = acc - bc * it->second;
        }
        q.add_term(k, acc * lead_inv);
    }
    return q;
}

template <CoefficientField F>
TruncatedSeries<F> operator+(const TruncatedSeries<F> &a, const TruncatedSeries<F> &b)
{
    return add(a, b);
}

template <CoefficientField F>
TruncatedSeries<F> operator-(const TruncatedSeries<F> &a, const TruncatedSeries<F> &b)
{
    return sub(a, b);
}

template <CoefficientField F>
TruncatedSeries<F> operator*(const TruncatedSeries<F> &a, const TruncatedSeries<F> &b)
{
    return mul(a, b);
}

template <CoefficientField F>
TruncatedSeries<F> operator/(const TruncatedSeries<F> &a, const TruncatedSeries<F> &b)
{
    return div(a, b);
}

// ---------------------------------------------------------------------------
// Series literals: `c0 + c1*t^e1 + ...` with rational coefficients p/q.
// ---------------------------------------------------------------------------

// An exact polynomial in t with rational coefficients, the parsed form of a
// series literal. Converted to a TruncatedSeries at whatever precision a
// computation needs.
using ExactPolynomial = std::map<std::size_t, Rational>;

inline ExactPolynomial parse_series_literal(std::string_view text)
{
    std::string s;
    for (char ch : text) {
        if (!std::isspace(static_cast<unsigned char>(ch)))
            s.push_back(ch);
    }
    if (s.empty())
        throw InputError("empty series literal");

    auto fail = [&](const std::string &why) -> ExactPolynomial {
        throw InputError("malformed series literal '" + std::string(text) + "': " + why);
    };
    auto digits = [&](std::size_t &pos) {
        std::size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
            ++pos;
        return s.substr(start, pos - start);
    };

    ExactPolynomial poly;
    std::size_t pos = 0;
    bool first = true;
    while (pos < s.size()) {
        bool negative = false;
        if (s[pos] == '+' || s[pos] == '-') {
            negative = s[pos] == '-';
            ++pos;
        } else if (!first) {
            return fail("expected '+' or '-' at position " + std::to_string(pos));
        }
        first = false;

        Rational coeff(1);
        bool have_coeff = false;
        std::string num = digits(pos);
        if (!num.empty()) {
            have_coeff = true;
            std::string den = "1";
            if (pos < s.size() && s[pos] == '/') {
                ++pos;
                den = digits(pos);
                if (den.empty())
                    return fail("missing denominator");
            }
            if (Integer(den) == 0)
                return fail("zero denominator");
            coeff = Rational(Integer(num), Integer(den));
        }

        std::size_t exponent = 0;
        bool have_t = false;
        if (have_coeff && pos < s.size() && s[pos] == '*') {
            ++pos;
            if (pos >= s.size() || s[pos] != 't')
                return fail("expected 't' after '*'");
        }
        if (pos < s.size() && s[pos] == 't') {
            have_t = true;
            ++pos;
            exponent = 1;
            if (pos < s.size() && s[pos] == '^') {
                ++pos;
                std::string e = digits(pos);
                if (e.empty())
                    return fail("missing exponent after '^'");
                if (e.size() > 6)
                    return fail("exponent too large");
                exponent = std::stoul(e);
            }
        }
        if (!have_coeff && !have_t)
            return fail("empty term at position " + std::to_string(pos));
        if (negative)
            coeff = -coeff;
        auto &slot = poly[exponent];
        slot += coeff;
        if (slot == 0)
            poly.erase(exponent);
    }
    return poly;
}

template <CoefficientField F>
TruncatedSeries<F> to_series(const F &field, const ExactPolynomial &poly, std::size_t truncation)
{
    TruncatedSeries<F> s(field, truncation);
    for (const auto &[e, c] : poly)
        s.add_term(e, field.from_rational(c));
    return s;
}

inline TruncatedSeries<RationalField> parse_series(std::string_view text, std::size_t truncation = default_truncation)
{
    return to_series(RationalField{}, parse_series_literal(text), truncation);
}

namespace detail
{
inline void append_term(std::string &out, bool negative, const std::string &magnitude, std::size_t exponent)
{
    if (out.empty())
        out += negative ? "-" : "";
    else
        out += negative ? " - " : " + ";
    const bool unit = magnitude == "1";
    if (exponent == 0) {
        out += magnitude;
        return;
    }
    if (!unit)
        out += magnitude + "*";
    out += "t";
    if (exponent > 1)
        out += "^" + std::to_string(exponent);
}
} // namespace detail

inline std::string format_polynomial(const ExactPolynomial &poly)
{
    std::string out;
    for (const auto &[e, c] : poly)
        detail::append_term(out, c < 0, to_string(abs(c)), e);
    return out.empty() ? "0" : out;
}

// Canonical literal of the stored coefficients, exponents increasing. The
// truncation is not part of the literal.
template <CoefficientField F>
std::string format_series(const TruncatedSeries<F> &s)
{
    if constexpr (std::same_as<F, RationalField>) {
        ExactPolynomial p(s.terms().begin(), s.terms().end());
        return format_polynomial(p);
    } else {
        std::string out;
        for (const auto &[e, c] : s.terms())
            detail::append_term(out, false, s.field().format(c), e);
        return out.empty() ? "0" : out;
    }
}

template <CoefficientField F>
std::ostream &operator<<(std::ostream &os, const TruncatedSeries<F> &s)
{
    return os << format_series(s) << " + O(t^" << s.truncation() << ")";
}

} // namespace arfkit
