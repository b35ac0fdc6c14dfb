#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "arfkit/error.hpp"
#include "arfkit/scalar.hpp"

namespace arfkit
{

// Lower-numbered ramification filtration given by the orders
// |G_-1|, |G_0|, ..., |G_r|: a divisibility chain ending in a single 1.
class Filtration
{
public:
    Filtration(std::vector<unsigned> orders, bool abelian, std::string label = {})
        : orders_(std::move(orders)), abelian_(abelian), label_(std::move(label))
    {
        if (orders_.empty())
            throw InputError("a filtration needs at least |G_-1|");
        for (std::size_t i = 0; i < orders_.size(); ++i) {
            if (orders_[i] == 0)
                throw InputError("group orders must be positive");
            if (i > 0 && orders_[i - 1] % orders_[i] != 0)
                throw InputError("|G_" + std::to_string(int(i) - 1) + "| = " + std::to_string(orders_[i]) +
                                 " does not divide |G_" + std::to_string(int(i) - 2) +
                                 "| = " + std::to_string(orders_[i - 1]));
        }
        if (orders_.back() != 1)
            throw InputError("the filtration must end with the trivial group");
        if (orders_.size() >= 2 && orders_[orders_.size() - 2] == 1)
            throw InputError("the filtration must end at the first trivial group");
    }

    const std::vector<unsigned> &orders() const noexcept { return orders_; }
    bool abelian() const noexcept { return abelian_; }
    const std::string &label() const noexcept { return label_; }

    // Index of the first trivial group; -1 when G itself is trivial.
    int last_index() const noexcept { return static_cast<int>(orders_.size()) - 2; }

    // |G_i| for any integer i >= -1.
    unsigned order_at(int i) const
    {
        if (i < -1)
            throw InputError("ramification groups start at index -1");
        return i + 1 < static_cast<int>(orders_.size()) ? orders_[i + 1] : 1;
    }

    unsigned inertia_order() const { return order_at(0); }

    // G_-1 != G_0: the residue extension is nontrivial.
    bool tame_drop() const { return order_at(-1) != order_at(0); }

private:
    std::vector<unsigned> orders_;
    bool abelian_;
    std::string label_;
};

namespace detail
{
inline Rational ceil_int(const Rational &x)
{
    Integer q = numerator(x) / denominator(x); // truncates toward zero
    if (Rational(q) < x)
        q += 1;
    return Rational(q);
}

// Slope of phi on (i - 1, i]: |G_i| / |G_0|.
inline Rational slope(const Filtration &f, int i)
{
    return Rational(f.order_at(i), f.inertia_order());
}
} // namespace detail

// phi(u) = integral_0^u dt / (G_0 : G_t), G_t = G_ceil(t); phi(u) = u on [-1, 0].
inline Rational herbrand_phi(const Filtration &f, const Rational &u)
{
    if (u < -1)
        throw InputError("phi is defined on [-1, oo), got " + to_string(u));
    if (u <= 0)
        return u;
    Rational acc = 0;
    for (int i = 1;; ++i) {
        if (u <= i || i > f.last_index())
            return acc + (u - (i - 1)) * detail::slope(f, i);
        acc += detail::slope(f, i);
    }
}

// Inverse of phi.
inline Rational herbrand_psi(const Filtration &f, const Rational &v)
{
    if (v < -1)
        throw InputError("psi is defined on [-1, oo), got " + to_string(v));
    if (v <= 0)
        return v;
    Rational acc = 0;
    for (int i = 1;; ++i) {
        const Rational s = detail::slope(f, i);
        if (acc + s >= v)
            return Rational(i - 1) + (v - acc) / s;
        // Past the last break the slope is 1/|G_0| forever.
        if (i > f.last_index())
            return Rational(i) + (v - acc - s) * f.inertia_order();
        acc += s;
    }
}

// Breakpoints (u, phi(u)) at u = 0..max(r, 0).
inline std::vector<std::pair<int, Rational>> herbrand_breakpoints(const Filtration &f)
{
    std::vector<std::pair<int, Rational>> out;
    for (int u = 0; u <= std::max(f.last_index(), 0); ++u)
        out.emplace_back(u, herbrand_phi(f, u));
    return out;
}

// |G^v| = |G_psi(v)|, reading G_t as G_ceil(t).
inline unsigned upper_group_order(const Filtration &f, const Rational &v)
{
    const Rational u = herbrand_psi(f, v);
    if (u == -1)
        return f.order_at(-1);
    return f.order_at(static_cast<int>(detail::ceil_int(u).convert_to<long long>()));
}

// Integers u >= 0 with G_u != G_(u+1).
inline std::vector<unsigned> lower_jumps(const Filtration &f)
{
    std::vector<unsigned> out;
    for (int u = 0; u < f.last_index(); ++u) {
        if (f.order_at(u) != f.order_at(u + 1))
            out.push_back(static_cast<unsigned>(u));
    }
    return out;
}

inline std::vector<Rational> upper_jumps(const Filtration &f)
{
    std::vector<Rational> out;
    for (unsigned u : lower_jumps(f))
        out.push_back(herbrand_phi(f, u));
    return out;
}

enum class HasseArfVerdict { pass, violation, non_abelian_info };

inline const char *to_string(HasseArfVerdict v)
{
    switch (v) {
    case HasseArfVerdict::pass:
        return "PASS";
    case HasseArfVerdict::violation:
        return "VIOLATION";
    case HasseArfVerdict::non_abelian_info:
        return "NON_ABELIAN_INFO";
    }
    return "";
}

struct HasseArfReport {
    std::vector<Rational> jumps;
    bool all_integral;
    HasseArfVerdict verdict;
};

// Upper jumps of an abelian group are integers; a fractional jump on data
// flagged abelian means the filtration cannot come from an abelian extension.
inline HasseArfReport hasse_arf_check(const Filtration &f)
{
    HasseArfReport r{upper_jumps(f), true, HasseArfVerdict::pass};
    for (const auto &j : r.jumps)
        r.all_integral = r.all_integral && is_integral(j);
    if (!f.abelian())
        r.verdict = HasseArfVerdict::non_abelian_info;
    else if (!r.all_integral)
        r.verdict = HasseArfVerdict::violation;
    return r;
}

} // namespace arfkit
