#pragma once

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "arfkit/error.hpp"

namespace arfkit
{

// A vector in GF(2)^n, n <= 64, packed into a machine word (bit i is the
// i-th coordinate, zero-based).
class VectorF2
{
public:
    static constexpr std::size_t max_dim = 64;

    VectorF2() = default;
    VectorF2(std::size_t dim, std::uint64_t bits) : bits_(bits), dim_(dim)
    {
        if (dim > max_dim)
            throw InputError("vector dimension " + std::to_string(dim) + " exceeds 64");
        if (dim < max_dim && (bits >> dim) != 0)
            throw InputError("vector has bits beyond its dimension");
    }

    static VectorF2 zero(std::size_t dim) { return VectorF2(dim, 0); }
    static VectorF2 unit(std::size_t dim, std::size_t i)
    {
        if (i >= dim)
            throw InputError("unit vector index out of range");
        return VectorF2(dim, std::uint64_t{1} << i);
    }

    std::size_t dim() const noexcept { return dim_; }
    std::uint64_t bits() const noexcept { return bits_; }
    bool operator[](std::size_t i) const noexcept { return (bits_ >> i) & 1; }
    bool is_zero() const noexcept { return bits_ == 0; }

    friend VectorF2 operator+(const VectorF2 &a, const VectorF2 &b)
    {
        if (a.dim_ != b.dim_)
            throw InputError("dimension mismatch in vector sum");
        return VectorF2(a.dim_, a.bits_ ^ b.bits_);
    }

    friend bool operator==(const VectorF2 &, const VectorF2 &) = default;

private:
    std::uint64_t bits_ = 0;
    std::size_t dim_ = 0;
};

namespace detail
{
inline bool parity(std::uint64_t w) noexcept
{
    return std::popcount(w) & 1;
}

inline std::size_t rank_f2(std::vector<std::uint64_t> rows)
{
    std::size_t rank = 0;
    for (std::size_t col = 0; col < 64 && rank < rows.size(); ++col) {
        const std::uint64_t bit = std::uint64_t{1} << col;
        std::size_t pivot = rank;
        while (pivot < rows.size() && !(rows[pivot] & bit))
            ++pivot;
        if (pivot == rows.size())
            continue;
        std::swap(rows[rank], rows[pivot]);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r != rank && (rows[r] & bit))
                rows[r] ^= rows[rank];
        }
        ++rank;
    }
    return rank;
}
} // namespace detail

// q(x) = sum_{i <= j} c_ij x_i x_j over GF(2). Row i holds the bits c_ij for
// j >= i, so there is no constant term and q(0) = 0 by construction.
class QuadraticFormF2
{
public:
    static constexpr std::size_t max_dim = VectorF2::max_dim;

    explicit QuadraticFormF2(std::size_t dim) : dim_(dim), rows_(dim, 0)
    {
        if (dim > max_dim)
            throw InputError("form dimension " + std::to_string(dim) + " exceeds 64");
    }

    // Coefficient bits enumerated row-major over i <= j; bit k of `packed` is
    // the k-th pair. Lets tests sweep every form of a given dimension.
    static QuadraticFormF2 from_packed(std::size_t dim, std::uint64_t packed)
    {
        QuadraticFormF2 q(dim);
        std::size_t k = 0;
        for (std::size_t i = 0; i < dim; ++i) {
            for (std::size_t j = i; j < dim; ++j, ++k) {
                if (k < 64 && ((packed >> k) & 1))
                    q.toggle(i, j);
            }
        }
        return q;
    }

    static constexpr std::size_t coefficient_count(std::size_t dim) { return dim * (dim + 1) / 2; }

    std::size_t dim() const noexcept { return dim_; }

    bool coefficient(std::size_t i, std::size_t j) const
    {
        if (i > j)
            std::swap(i, j);
        check_index(j);
        return (rows_[i] >> j) & 1;
    }

    // Adds the monomial x_i x_j (x_i^2 when i == j); repeated monomials cancel.
    void toggle(std::size_t i, std::size_t j)
    {
        if (i > j)
            std::swap(i, j);
        check_index(j);
        rows_[i] ^= std::uint64_t{1} << j;
    }

    bool evaluate(const VectorF2 &x) const
    {
        check_dim(x);
        bool value = false;
        for (std::size_t i = 0; i < dim_; ++i) {
            if (x[i])
                value ^= detail::parity(rows_[i] & x.bits());
        }
        return value;
    }

    // Polarization (x, y) = q(x + y) + q(x) + q(y).
    bool bilinear(const VectorF2 &x, const VectorF2 &y) const
    {
        check_dim(x);
        check_dim(y);
        return evaluate(x + y) ^ evaluate(x) ^ evaluate(y);
    }

    // Row i of the Gram matrix of the polarization on the standard basis:
    // bit j set iff c_ij = 1 for i != j. The diagonal is always zero.
    std::vector<std::uint64_t> gram_rows() const
    {
        std::vector<std::uint64_t> gram(dim_, 0);
        for (std::size_t i = 0; i < dim_; ++i) {
            for (std::size_t j = i + 1; j < dim_; ++j) {
                if ((rows_[i] >> j) & 1) {
                    gram[i] |= std::uint64_t{1} << j;
                    gram[j] |= std::uint64_t{1} << i;
                }
            }
        }
        return gram;
    }

    bool is_nondegenerate() const { return detail::rank_f2(gram_rows()) == dim_; }

    // q o M, where columns[i] = M e_i.
    QuadraticFormF2 compose(const std::vector<VectorF2> &columns) const
    {
        if (columns.size() != dim_)
            throw InputError("change of basis needs one image per coordinate");
        QuadraticFormF2 r(dim_);
        for (std::size_t i = 0; i < dim_; ++i) {
            if (evaluate(columns[i]))
                r.toggle(i, i);
            for (std::size_t j = i + 1; j < dim_; ++j) {
                if (bilinear(columns[i], columns[j]))
                    r.toggle(i, j);
            }
        }
        return r;
    }

    // Orthogonal direct sum on GF(2)^(m+n).
    friend QuadraticFormF2 direct_sum(const QuadraticFormF2 &a, const QuadraticFormF2 &b)
    {
        QuadraticFormF2 r(a.dim_ + b.dim_);
        for (std::size_t i = 0; i < a.dim_; ++i)
            r.rows_[i] = a.rows_[i];
        for (std::size_t i = 0; i < b.dim_; ++i)
            r.rows_[a.dim_ + i] = b.rows_[i] << a.dim_;
        return r;
    }

    friend bool operator==(const QuadraticFormF2 &, const QuadraticFormF2 &) = default;

    // Monomials as `x1*x2 + x3^2`, one-based, in row-major order; "0" if empty.
    std::string to_string() const
    {
        std::string out;
        for (std::size_t i = 0; i < dim_; ++i) {
            for (std::size_t j = i; j < dim_; ++j) {
                if (!((rows_[i] >> j) & 1))
                    continue;
                if (!out.empty())
                    out += " + ";
                out += "x" + std::to_string(i + 1);
                out += i == j ? "^2" : "*x" + std::to_string(j + 1);
            }
        }
        return out.empty() ? "0" : out;
    }

private:
    void check_index(std::size_t i) const
    {
        if (i >= dim_)
            throw InputError("coordinate index " + std::to_string(i + 1) + " exceeds dimension " +
                             std::to_string(dim_));
    }

    void check_dim(const VectorF2 &x) const
    {
        if (x.dim() != dim_)
            throw InputError("vector of dimension " + std::to_string(x.dim()) + " evaluated against a form of dimension " +
                             std::to_string(dim_));
    }

    std::size_t dim_;
    std::vector<std::uint64_t> rows_;
};

// Parses `x1*x2 + x3^2 + x4`. A bare variable is its own square (x^2 = x on
// GF(2)). The dimension defaults to the largest index mentioned.
inline QuadraticFormF2 parse_quadratic_form(std::string_view text, std::optional<std::size_t> dim = std::nullopt)
{
    std::string s;
    for (char ch : text) {
        if (!std::isspace(static_cast<unsigned char>(ch)))
            s.push_back(ch);
    }
    auto fail = [&](const std::string &why) {
        throw InputError("malformed form literal '" + std::string(text) + "': " + why);
    };
    auto variable = [&](std::size_t &pos) -> std::size_t {
        if (pos >= s.size() || s[pos] != 'x')
            fail("expected a variable x<i> at position " + std::to_string(pos));
        ++pos;
        std::size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
            ++pos;
        if (start == pos || pos - start > 3)
            fail("bad variable index");
        auto idx = std::stoul(s.substr(start, pos - start));
        if (idx == 0)
            fail("variables are numbered from x1");
        return idx - 1;
    };

    std::vector<std::pair<std::size_t, std::size_t>> monomials;
    std::size_t pos = 0;
    std::size_t max_index = 0;
    if (s != "0") {
        while (true) {
            std::size_t i = variable(pos);
            std::size_t j = i;
            if (pos < s.size() && s[pos] == '^') {
                ++pos;
                if (pos >= s.size() || s[pos] != '2')
                    fail("only squares are allowed as powers");
                ++pos;
            } else if (pos < s.size() && s[pos] == '*') {
                ++pos;
                j = variable(pos);
            }
            monomials.emplace_back(i, j);
            max_index = std::max({max_index, i + 1, j + 1});
            if (pos == s.size())
                break;
            if (s[pos] != '+')
                fail("expected '+' at position " + std::to_string(pos));
            ++pos;
        }
    }
    std::size_t n = dim.value_or(max_index);
    if (n < max_index)
        throw InputError("dimension " + std::to_string(n) + " is smaller than the largest variable index " +
                         std::to_string(max_index));
    QuadraticFormF2 q(n);
    for (auto [i, j] : monomials)
        q.toggle(i, j);
    return q;
}

struct SymplecticBasis {
    std::vector<std::pair<VectorF2, VectorF2>> pairs;
};

// Checks (a_i, b_j) = delta_ij, (a_i, a_j) = (b_i, b_j) = 0 and that the
// vectors span the whole space.
inline bool is_symplectic_basis(const QuadraticFormF2 &q, const SymplecticBasis &basis)
{
    const auto &p = basis.pairs;
    if (2 * p.size() != q.dim())
        return false;
    std::vector<std::uint64_t> vectors;
    for (std::size_t i = 0; i < p.size(); ++i) {
        for (std::size_t j = 0; j < p.size(); ++j) {
            if (q.bilinear(p[i].first, p[j].second) != (i == j))
                return false;
            if (q.bilinear(p[i].first, p[j].first) || q.bilinear(p[i].second, p[j].second))
                return false;
        }
        vectors.push_back(p[i].first.bits());
        vectors.push_back(p[i].second.bits());
    }
    return detail::rank_f2(vectors) == q.dim();
}

// Greedy symplectic Gram-Schmidt: take a vector, find a partner pairing to 1,
// project the remaining spanning vectors onto the orthogonal complement of
// the pair, repeat.
inline SymplecticBasis symplectic_basis(const QuadraticFormF2 &q)
{
    if (!q.is_nondegenerate())
        throw InputError("symplectic basis requested for a degenerate form");
    const std::size_t n = q.dim();
    std::vector<VectorF2> pool;
    for (std::size_t i = 0; i < n; ++i)
        pool.push_back(VectorF2::unit(n, i));

    SymplecticBasis basis;
    while (!pool.empty()) {
        VectorF2 a = pool.front();
        pool.erase(pool.begin());
        if (a.is_zero())
            continue;
        auto partner = std::find_if(pool.begin(), pool.end(), [&](const VectorF2 &v) { return q.bilinear(a, v); });
        if (partner == pool.end())
            throw InconsistencyError("nondegenerate form left a vector without a symplectic partner");
        VectorF2 b = *partner;
        pool.erase(partner);
        // v -> v + (v,b) a + (v,a) b kills both pairings.
        for (auto &v : pool) {
            const bool vb = q.bilinear(v, b);
            const bool va = q.bilinear(v, a);
            if (vb)
                v = v + a;
            if (va)
                v = v + b;
        }
        basis.pairs.emplace_back(a, b);
    }
    return basis;
}

inline constexpr std::size_t max_enumeration_dim = 24;

// #{x : q(x) = 1} by exhaustive enumeration.
inline std::uint64_t count_ones(const QuadraticFormF2 &q)
{
    if (q.dim() > max_enumeration_dim)
        throw InputError("exhaustive enumeration is limited to dimension " + std::to_string(max_enumeration_dim));
    std::uint64_t count = 0;
    const std::uint64_t total = std::uint64_t{1} << q.dim();
    for (std::uint64_t bits = 0; bits < total; ++bits)
        count += q.evaluate(VectorF2(q.dim(), bits));
    return count;
}

// Majority vote: 1 iff q takes the value 1 on more than half of the space.
inline int arf_democratic(const QuadraticFormF2 &q)
{
    if (!q.is_nondegenerate())
        throw InputError("Arf invariant is undefined for a degenerate form");
    const std::uint64_t ones = count_ones(q);
    const std::uint64_t total = std::uint64_t{1} << q.dim();
    if (2 * ones == total)
        throw InconsistencyError("nondegenerate form takes the value 1 on exactly half the space");
    return 2 * ones > total ? 1 : 0;
}

// sum_i q(a_i) q(b_i) mod 2 over a symplectic basis.
inline int arf_symplectic(const QuadraticFormF2 &q)
{
    bool arf = false;
    for (const auto &[a, b] : symplectic_basis(q).pairs)
        arf ^= q.evaluate(a) && q.evaluate(b);
    return arf ? 1 : 0;
}

} // namespace arfkit
