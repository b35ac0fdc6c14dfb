#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "arfkit/error.hpp"

namespace arfkit
{

// A co-finite additive submonoid of the naturals, stored as its elements
// below the conductor plus the conductor itself. For N the conductor is 0 and
// the sporadic list is empty; otherwise 0 is the first sporadic element.
class NumericalSemigroup
{
public:
    NumericalSemigroup() = default; // N

    static NumericalSemigroup natural() { return {}; }

    // Canonical form, validated: sorted distinct elements below `conductor`,
    // 0 first, conductor - 1 absent, additively closed.
    static NumericalSemigroup from_elements(std::vector<unsigned> below_conductor, unsigned conductor)
    {
        std::sort(below_conductor.begin(), below_conductor.end());
        if (std::adjacent_find(below_conductor.begin(), below_conductor.end()) != below_conductor.end())
            throw InputError("duplicate semigroup element");
        if (conductor == 0) {
            if (!below_conductor.empty())
                throw InputError("conductor 0 admits no sporadic elements");
            return {};
        }
        if (below_conductor.empty() || below_conductor.front() != 0)
            throw InputError("a semigroup must contain 0");
        if (below_conductor.back() >= conductor)
            throw InputError("sporadic element at or above the conductor");
        if (below_conductor.back() == conductor - 1)
            throw InputError("conductor " + std::to_string(conductor) + " is not minimal");
        NumericalSemigroup g;
        g.small_ = std::move(below_conductor);
        g.conductor_ = conductor;
        for (unsigned a : g.small_) {
            for (unsigned b : g.small_) {
                if (b < a)
                    continue;
                if (a + b >= conductor)
                    break;
                if (!g.contains(a + b))
                    throw InputError("set is not closed under addition: " + std::to_string(a) + " + " +
                                     std::to_string(b) + " is missing");
            }
        }
        return g;
    }

    // Least additively closed set containing 0 and `generators`.
    static NumericalSemigroup from_generators(std::span<const unsigned> generators)
    {
        if (generators.empty())
            throw InputError("empty generator set");
        unsigned g = 0;
        for (unsigned x : generators) {
            if (x == 0)
                throw InputError("generators must be positive");
            g = std::gcd(g, x);
        }
        if (g != 1)
            throw InputError("generators have gcd " + std::to_string(g) + "; the semigroup is not co-finite");

        const unsigned m = *std::min_element(generators.begin(), generators.end());
        // Saturate until a run of m consecutive members certifies the tail.
        std::vector<char> member{1};
        unsigned run = 1;
        for (unsigned n = 1; run < m; ++n) {
            char in = 0;
            for (unsigned x : generators) {
                if (x <= n && member[n - x]) {
                    in = 1;
                    break;
                }
            }
            member.push_back(in);
            run = in ? run + 1 : 0;
        }
        const unsigned conductor = static_cast<unsigned>(member.size()) - run;
        NumericalSemigroup s;
        s.conductor_ = conductor;
        if (conductor > 0) {
            for (unsigned n = 0; n < conductor; ++n) {
                if (member[n])
                    s.small_.push_back(n);
            }
        }
        return s;
    }

    static NumericalSemigroup from_generators(std::initializer_list<unsigned> generators)
    {
        return from_generators(std::span<const unsigned>(generators.begin(), generators.size()));
    }

    bool contains(unsigned n) const
    {
        return n >= conductor_ || std::binary_search(small_.begin(), small_.end(), n);
    }

    unsigned conductor() const noexcept { return conductor_; }
    const std::vector<unsigned> &elements_below_conductor() const noexcept { return small_; }
    bool is_natural() const noexcept { return conductor_ == 0; }

    // Least nonzero element.
    unsigned multiplicity() const { return small_.size() > 1 ? small_[1] : conductor_ == 0 ? 1 : conductor_; }

    // Number of gaps.
    std::size_t genus() const { return conductor_ - small_.size(); }

    // Sorted elements n <= bound.
    std::vector<unsigned> elements_up_to(unsigned bound) const
    {
        std::vector<unsigned> out;
        for (unsigned x : small_) {
            if (x <= bound)
                out.push_back(x);
        }
        for (unsigned n = conductor_; n <= bound; ++n)
            out.push_back(n);
        return out;
    }

    // Nonzero elements that are not a sum of two nonzero elements. They all
    // lie below conductor + multiplicity.
    std::vector<unsigned> minimal_generators() const
    {
        std::vector<unsigned> gens;
        const unsigned m = multiplicity();
        for (unsigned n = 1; n < conductor_ + m; ++n) {
            if (!contains(n))
                continue;
            bool decomposable = false;
            for (unsigned a = 1; a <= n / 2 && !decomposable; ++a)
                decomposable = contains(a) && contains(n - a);
            if (!decomposable)
                gens.push_back(n);
        }
        return gens;
    }

    bool is_subset_of(const NumericalSemigroup &other) const
    {
        if (other.conductor_ > conductor_)
            return false;
        return std::all_of(small_.begin(), small_.end(), [&](unsigned x) { return other.contains(x); });
    }

    friend bool operator==(const NumericalSemigroup &, const NumericalSemigroup &) = default;

    friend std::ostream &operator<<(std::ostream &os, const NumericalSemigroup &g)
    {
        os << '{';
        for (unsigned x : g.small_)
            os << x << ", ";
        return os << g.conductor_ << ", ...}";
    }

private:
    std::vector<unsigned> small_;
    unsigned conductor_ = 0;
};

// Multiplicities of successive blow-ups, stored up to and including the first
// 1 (every later entry is 1).
class MultiplicitySequence
{
public:
    MultiplicitySequence() : entries_{1} {}

    explicit MultiplicitySequence(std::vector<unsigned> entries) : entries_(std::move(entries))
    {
        if (entries_.empty() || entries_.back() != 1)
            throw InputError("a multiplicity sequence ends with its first 1");
        for (std::size_t i = 0; i + 1 < entries_.size(); ++i) {
            if (entries_[i] <= 1)
                throw InputError("entries before the terminal 1 must exceed 1");
        }
    }

    const std::vector<unsigned> &entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }

    friend bool operator==(const MultiplicitySequence &, const MultiplicitySequence &) = default;

    friend std::ostream &operator<<(std::ostream &os, const MultiplicitySequence &s)
    {
        os << '[';
        for (std::size_t i = 0; i < s.entries_.size(); ++i)
            os << (i ? ", " : "") << s.entries_[i];
        return os << ']';
    }

private:
    std::vector<unsigned> entries_;
};

// Generators with gcd 1 whose Arf closure is a given Arf semigroup.
class CharacterSet
{
public:
    explicit CharacterSet(std::vector<unsigned> chars) : chars_(std::move(chars))
    {
        std::sort(chars_.begin(), chars_.end());
        chars_.erase(std::unique(chars_.begin(), chars_.end()), chars_.end());
        if (chars_.empty())
            throw InputError("empty character set");
        if (chars_.front() == 0)
            throw InputError("characters must be positive");
        unsigned g = 0;
        for (unsigned c : chars_)
            g = std::gcd(g, c);
        if (g != 1)
            throw InputError("characters have gcd " + std::to_string(g));
    }

    const std::vector<unsigned> &values() const noexcept { return chars_; }

    friend bool operator==(const CharacterSet &, const CharacterSet &) = default;

private:
    std::vector<unsigned> chars_;
};

// True iff for every element m the set {n - m : n in G, n >= m} is closed
// under addition. Shifts by m >= conductor are all of N, so only sporadic m
// are examined.
inline bool is_arf(const NumericalSemigroup &g)
{
    const unsigned c = g.conductor();
    for (unsigned m : g.elements_below_conductor()) {
        if (m == 0)
            continue;
        // Shifted set is closed beyond c - m; check sums of its members below.
        for (unsigned a = 1; a < c - m; ++a) {
            if (!g.contains(m + a))
                continue;
            for (unsigned b = a; a + b < c - m; ++b) {
                if (g.contains(m + b) && !g.contains(m + a + b))
                    return false;
            }
        }
    }
    return true;
}

// Smallest Arf semigroup containing g. With m the multiplicity,
// *G = {0} u (m + *<G - m>), where G - m = {n - m : n in G, n >= m}.
inline NumericalSemigroup arf_closure(const NumericalSemigroup &g)
{
    if (is_arf(g))
        return g;
    const unsigned m = g.multiplicity();
    const unsigned c = g.conductor();
    std::vector<unsigned> shifted;
    for (unsigned n = m + 1; n < c + m; ++n) {
        if (g.contains(n))
            shifted.push_back(n - m);
    }
    const NumericalSemigroup inner = arf_closure(NumericalSemigroup::from_generators(shifted));
    std::vector<unsigned> small{0};
    for (unsigned x : inner.elements_below_conductor())
        small.push_back(m + x);
    return NumericalSemigroup::from_elements(std::move(small), m + inner.conductor());
}

// Consecutive differences of the sorted elements of an Arf semigroup, up to
// the first 1.
inline MultiplicitySequence multiplicity_sequence(const NumericalSemigroup &g)
{
    if (!is_arf(g))
        throw InputError("multiplicity sequence requested for a semigroup that is not Arf");
    if (g.is_natural())
        return MultiplicitySequence();
    std::vector<unsigned> out;
    const auto &small = g.elements_below_conductor();
    for (std::size_t i = 1; i < small.size(); ++i)
        out.push_back(small[i] - small[i - 1]);
    out.push_back(g.conductor() - small.back());
    out.push_back(1);
    return MultiplicitySequence(std::move(out));
}

// Inverse of multiplicity_sequence: partial sums 0, e0, e0 + e1, ...
inline NumericalSemigroup from_multiplicity_sequence(const MultiplicitySequence &seq)
{
    std::vector<unsigned> small;
    unsigned sum = 0;
    const auto &e = seq.entries();
    for (std::size_t i = 0; i + 1 < e.size(); ++i) {
        small.push_back(sum);
        sum += e[i];
    }
    return NumericalSemigroup::from_elements(std::move(small), sum);
}

namespace detail
{
// Visits every k-subset of `pool` in lexicographic order until `visit`
// returns true.
template <class Visit>
bool for_each_combination(const std::vector<unsigned> &pool, std::size_t k, Visit visit)
{
    if (k > pool.size())
        return false;
    std::vector<std::size_t> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<unsigned> pick(k);
    while (true) {
        for (std::size_t i = 0; i < k; ++i)
            pick[i] = pool[idx[i]];
        if (visit(pick))
            return true;
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == pool.size() - k + i - 1)
            --i;
        if (i == 0)
            return false;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j)
            idx[j] = idx[j - 1] + 1;
    }
}
} // namespace detail

// Minimal generating set of the smallest semigroup whose Arf closure is g.
// Exhaustive search by cardinality, then lexicographically. Every candidate
// contains the multiplicity, since the closure of <X> has multiplicity min X;
// the other members are drawn from the elements of g in (m, c + m).
inline CharacterSet characters(const NumericalSemigroup &g)
{
    if (!is_arf(g))
        throw InputError("characters requested for a semigroup that is not Arf");
    if (g.is_natural())
        return CharacterSet({1});
    const unsigned m = g.multiplicity();
    std::vector<unsigned> pool;
    for (unsigned n = m + 1; n < g.conductor() + m; ++n) {
        if (g.contains(n))
            pool.push_back(n);
    }
    std::vector<unsigned> found;
    for (std::size_t k = 1; k <= pool.size() && found.empty(); ++k) {
        detail::for_each_combination(pool, k, [&](const std::vector<unsigned> &pick) {
            unsigned d = m;
            for (unsigned x : pick)
                d = std::gcd(d, x);
            if (d != 1)
                return false;
            std::vector<unsigned> gens{m};
            gens.insert(gens.end(), pick.begin(), pick.end());
            if (arf_closure(NumericalSemigroup::from_generators(gens)) != g)
                return false;
            found = std::move(gens);
            return true;
        });
    }
    if (found.empty())
        throw InconsistencyError("no generating set reproduces the Arf semigroup");
    return CharacterSet(std::move(found));
}

// Multi-integer Euclid, one multiplicity per step: emit the minimum m,
// subtract m from every other element, drop zeros and repeated values, stop
// after emitting 1.
inline MultiplicitySequence jacobian_multiplicity_sequence(const CharacterSet &chars)
{
    std::set<unsigned> current(chars.values().begin(), chars.values().end());
    std::vector<unsigned> out;
    while (true) {
        const unsigned m = *current.begin();
        out.push_back(m);
        if (m == 1)
            break;
        std::set<unsigned> next{m};
        for (auto it = std::next(current.begin()); it != current.end(); ++it)
            next.insert(*it - m);
        current = std::move(next);
    }
    return MultiplicitySequence(std::move(out));
}

} // namespace arfkit
