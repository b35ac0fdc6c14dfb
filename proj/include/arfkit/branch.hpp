#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "arfkit/error.hpp"
#include "arfkit/semigroup.hpp"
#include "arfkit/series.hpp"

namespace arfkit
{

inline constexpr std::size_t default_max_steps = 64;

// Raised when a branch does not reach a smooth point. Carries the
// multiplicities observed so far.
class ResolutionError : public InputError
{
public:
    ResolutionError(const std::string &what, std::vector<unsigned> partial)
        : InputError(what), partial_(std::move(partial))
    {
    }

    const std::vector<unsigned> &partial() const noexcept { return partial_; }

private:
    std::vector<unsigned> partial_;
};

// X_i = phi_i(t), each phi_i without constant term.
template <CoefficientField F>
class BranchParam
{
public:
    using series_type = TruncatedSeries<F>;

    explicit BranchParam(std::vector<series_type> coords) : coords_(std::move(coords))
    {
        if (coords_.empty())
            throw InputError("a branch needs at least one coordinate");
        bool any_finite = false;
        for (std::size_t i = 0; i < coords_.size(); ++i) {
            if (!(coords_[i].field() == coords_.front().field()))
                throw InputError("mismatched coefficient fields across coordinates");
            if (!coords_[i].field().is_zero(coords_[i].constant_term()))
                throw InputError("coordinate " + std::to_string(i + 1) + " has a nonzero constant term");
            any_finite = any_finite || coords_[i].order().is_finite();
        }
        if (!any_finite)
            throw PrecisionError("every coordinate is zero at its precision");
    }

    const std::vector<series_type> &coords() const noexcept { return coords_; }
    std::size_t dimension() const noexcept { return coords_.size(); }
    const F &field() const noexcept { return coords_.front().field(); }

    // Shared truncation: the smallest among the coordinates.
    std::size_t truncation() const
    {
        std::size_t t = coords_.front().truncation();
        for (const auto &c : coords_)
            t = std::min(t, c.truncation());
        return t;
    }

private:
    std::vector<series_type> coords_;
};

template <CoefficientField F>
BranchParam<F> make_branch(const F &field, const std::vector<ExactPolynomial> &coords, std::size_t truncation)
{
    std::vector<TruncatedSeries<F>> series;
    for (const auto &p : coords)
        series.push_back(to_series(field, p, truncation));
    return BranchParam<F>(std::move(series));
}

// Least order among the coordinates.
template <CoefficientField F>
unsigned multiplicity(const BranchParam<F> &b)
{
    std::size_t m = 0;
    bool found = false;
    for (const auto &c : b.coords()) {
        auto o = c.order();
        if (o.is_finite() && (!found || o.value() < m)) {
            m = o.value();
            found = true;
        }
    }
    if (!found)
        throw PrecisionError("all coordinates are zero at precision");
    return static_cast<unsigned>(m);
}

template <CoefficientField F>
struct BlowUp {
    BranchParam<F> branch;
    std::vector<std::string> notes;
};

// (phi_1, phi_2/phi_1 - l_2, ..., phi_n/phi_1 - l_n) after a stable sort by
// order, l_j the constant term of the quotient. Coordinates that vanish at
// precision after translation are dropped and noted.
template <CoefficientField F>
BlowUp<F> blow_up_logged(const BranchParam<F> &b)
{
    std::vector<std::size_t> index(b.dimension());
    std::iota(index.begin(), index.end(), 0);
    std::stable_sort(index.begin(), index.end(), [&](std::size_t i, std::size_t j) {
        const auto oi = b.coords()[i].order(), oj = b.coords()[j].order();
        return std::pair(!oi.is_finite(), oi.bound()) < std::pair(!oj.is_finite(), oj.bound());
    });

    const auto &lead = b.coords()[index.front()];
    std::vector<TruncatedSeries<F>> out{lead};
    std::vector<std::string> notes;
    for (std::size_t k = 1; k < index.size(); ++k) {
        const auto &phi = b.coords()[index[k]];
        TruncatedSeries<F> q = div(phi, lead);
        if (q.truncation() <= 1)
            throw PrecisionError("quotient of coordinate " + std::to_string(index[k] + 1) +
                                 " is indistinguishable from a constant at truncation " +
                                 std::to_string(phi.truncation()));
        q.set(0, b.field().zero());
        if (q.is_zero_at_precision()) {
            notes.push_back("dropped coordinate " + std::to_string(index[k] + 1) + ": zero after translation modulo t^" +
                            std::to_string(q.truncation()));
            continue;
        }
        out.push_back(std::move(q));
    }
    return {BranchParam<F>(std::move(out)), std::move(notes)};
}

template <CoefficientField F>
BranchParam<F> blow_up(const BranchParam<F> &b)
{
    return blow_up_logged(b).branch;
}

// Multiplicities of b, blow_up(b), ... up to the first smooth point.
template <CoefficientField F>
MultiplicitySequence multiplicity_sequence_blowup(const BranchParam<F> &b, std::size_t max_steps = default_max_steps,
                                                  std::vector<std::string> *notes = nullptr)
{
    if (max_steps == 0)
        throw InputError("max_steps must be at least 1");
    std::vector<unsigned> seq;
    BranchParam<F> current = b;
    bool dropped = false;
    for (std::size_t step = 0; step < max_steps; ++step) {
        const unsigned m = multiplicity(current);
        seq.push_back(m);
        if (m == 1)
            return MultiplicitySequence(std::move(seq));
        if (current.dimension() == 1) {
            // A lone coordinate of order m > 1 blows up to itself forever.
            if (dropped)
                throw PrecisionError("coordinates vanished at precision before the branch resolved");
            throw ResolutionError("parametrization (" + format_series(current.coords().front()) +
                                      ") is not a resolvable branch: multiplicity " + std::to_string(m) +
                                      " repeats forever",
                                  seq);
        }
        auto next = blow_up_logged(current);
        dropped = dropped || !next.notes.empty();
        if (notes)
            notes->insert(notes->end(), next.notes.begin(), next.notes.end());
        current = std::move(next.branch);
    }
    throw ResolutionError("no smooth point within " + std::to_string(max_steps) + " blow-ups", seq);
}

// Echelon basis of k[[phi_1, ..., phi_n]] modulo t^T: one element per
// attained order, monic at that order.
template <CoefficientField F>
struct SubalgebraBasis {
    F field;
    std::size_t truncation;
    std::map<std::size_t, TruncatedSeries<F>> basis;

    std::vector<std::size_t> orders() const
    {
        std::vector<std::size_t> out;
        for (const auto &[d, s] : basis)
            out.push_back(d);
        return out;
    }
};

namespace detail
{
// Subtracts basis elements until the leading order is not a basis key.
template <CoefficientField F>
TruncatedSeries<F> reduce(TruncatedSeries<F> s, const std::map<std::size_t, TruncatedSeries<F>> &basis)
{
    while (!s.is_zero_at_precision()) {
        auto it = basis.find(s.order().value());
        if (it == basis.end())
            break;
        s.subtract_scaled(it->second, s.leading_coefficient());
    }
    return s;
}
} // namespace detail

// Closes {1} under multiplication by the coordinates, reducing every product
// against the basis built so far. The span of the result is closed under
// multiplication by each generator and contains 1, hence equals the whole
// subalgebra modulo t^T.
template <CoefficientField F>
SubalgebraBasis<F> subalgebra(const BranchParam<F> &b, std::size_t truncation)
{
    const std::size_t t = std::min(truncation, b.truncation());
    if (t < 1)
        throw PrecisionError("subalgebra needs a positive truncation");
    std::vector<TruncatedSeries<F>> gens;
    for (const auto &c : b.coords())
        gens.push_back(c.with_truncation(t));

    SubalgebraBasis<F> h{b.field(), t, {}};
    h.basis.emplace(0, TruncatedSeries<F>::constant(b.field(), b.field().one(), t));
    std::deque<std::size_t> work{0};
    while (!work.empty()) {
        const TruncatedSeries<F> e = h.basis.at(work.front());
        work.pop_front();
        for (const auto &g : gens) {
            auto r = detail::reduce(mul(e, g), h.basis);
            if (r.is_zero_at_precision())
                continue;
            const std::size_t d = r.order().value();
            h.basis.emplace(d, r.monic());
            work.push_back(d);
        }
    }
    return h;
}

// The attained orders as a numerical semigroup. The tail is certified by a
// run of consecutive orders, at least as long as the multiplicity, reaching
// the truncation.
template <CoefficientField F>
NumericalSemigroup orders_semigroup(const SubalgebraBasis<F> &h)
{
    const std::size_t t = h.truncation;
    std::size_t c = t;
    while (c > 0 && h.basis.count(c - 1))
        --c;
    std::size_t m = 0;
    for (const auto &[d, s] : h.basis) {
        if (d > 0) {
            m = d;
            break;
        }
    }
    if (m == 0)
        throw PrecisionError("no nonzero order below truncation " + std::to_string(t));
    if (t - c < m)
        throw PrecisionError("orders do not stabilize below truncation " + std::to_string(t) +
                             "; a larger truncation is needed");
    std::vector<unsigned> small;
    for (const auto &[d, s] : h.basis) {
        if (d >= c)
            break;
        small.push_back(static_cast<unsigned>(d));
    }
    return NumericalSemigroup::from_elements(std::move(small), static_cast<unsigned>(c));
}

// For every attained order 0 < m < c, with S_m the basis element of order m,
// the quotients S / S_m (ord S >= m) must span a set closed under
// multiplication. That set contains t^(c - m) k[[t]], so products only need
// checking modulo t^(c - m).
template <CoefficientField F>
bool is_arf_ring(const SubalgebraBasis<F> &h)
{
    const NumericalSemigroup g = orders_semigroup(h);
    // The quotient orders are G - m, so the order semigroup must be Arf.
    if (!is_arf(g))
        return false;
    const std::size_t c = g.conductor();
    for (const auto &[m, sm] : h.basis) {
        if (m == 0)
            continue;
        if (m >= c)
            break;
        const std::size_t window = c - m;
        const auto divisor = sm.with_truncation(c);
        std::map<std::size_t, TruncatedSeries<F>> quotients;
        for (auto it = h.basis.find(m); it != h.basis.end() && it->first < c; ++it)
            quotients.emplace(it->first - m, div(it->second.with_truncation(c), divisor).monic());
        for (auto a = std::next(quotients.begin()); a != quotients.end(); ++a) {
            for (auto b = a; b != quotients.end() && a->first + b->first < window; ++b) {
                if (!detail::reduce(mul(a->second, b->second), quotients).is_zero_at_precision())
                    return false;
            }
        }
    }
    return true;
}

// *H = k + phi_1 * *H_1, recursing on the blow-up down to a smooth branch,
// whose ring is k[[t]]. An Arf ring satisfies H = k + phi_1 * H_1, so going
// past the first Arf level returns the same ring. Unrolled, with P_k the
// product of the first k leading coordinates and r the resolution length,
// the basis is P_0, ..., P_(r-1) together with P_r * t^i.
template <CoefficientField F>
SubalgebraBasis<F> arf_ring_closure(const BranchParam<F> &b, std::size_t truncation,
                                    std::size_t max_depth = default_max_steps)
{
    const F &field = b.field();
    std::size_t t = std::min(truncation, b.truncation());
    std::vector<TruncatedSeries<F>> prefix{TruncatedSeries<F>::constant(field, field.one(), t)};
    BranchParam<F> current = b;
    while (multiplicity(current) > 1) {
        if (prefix.size() > max_depth)
            throw ResolutionError("Arf closure recursion did not reach a smooth branch", {});
        if (current.dimension() == 1)
            throw ResolutionError("Arf closure of a single coordinate of multiplicity " +
                                      std::to_string(multiplicity(current)) + " does not terminate",
                                  {});
        current = blow_up(current);
        prefix.push_back(mul(prefix.back(), current.coords().front()));
    }
    t = std::min(t, prefix.back().truncation());
    SubalgebraBasis<F> out{field, t, {}};
    for (std::size_t k = 0; k + 1 < prefix.size(); ++k) {
        const auto &p = prefix[k];
        if (!p.is_zero_at_precision())
            out.basis.emplace(p.order().value(), p.with_truncation(t).monic());
    }
    const auto last = prefix.back().with_truncation(t).monic();
    for (std::size_t i = 0; !last.is_zero_at_precision() && last.order().value() + i < t; ++i)
        out.basis.emplace(last.order().value() + i, mul(last, TruncatedSeries<F>::monomial(field, field.one(), i, t)));
    return out;
}

// True iff every coordinate of b reduces to zero against the basis, that is,
// the ring spanned by the basis contains k[[phi_1, ..., phi_n]].
template <CoefficientField F>
bool contains_branch_ring(const SubalgebraBasis<F> &h, const BranchParam<F> &b)
{
    for (const auto &c : b.coords()) {
        if (!detail::reduce(c.with_truncation(h.truncation), h.basis).is_zero_at_precision())
            return false;
    }
    return true;
}

template <CoefficientField F>
NumericalSemigroup value_semigroup(const BranchParam<F> &b, std::size_t truncation)
{
    return orders_semigroup(subalgebra(b, truncation));
}

enum class BranchVerdict { consistent, ring_route_only, inconsistent };

inline const char *to_string(BranchVerdict v)
{
    switch (v) {
    case BranchVerdict::consistent:
        return "CONSISTENT";
    case BranchVerdict::ring_route_only:
        return "RING_ROUTE_ONLY";
    case BranchVerdict::inconsistent:
        return "INCONSISTENT";
    }
    return "";
}

// Everything the resolution pipeline reports for one branch at one truncation.
struct BranchReport {
    MultiplicitySequence blowup_sequence;
    NumericalSemigroup orders;
    NumericalSemigroup closure; // Arf closure of `orders`
    MultiplicitySequence semigroup_sequence;
    NumericalSemigroup ring_closure_orders;
    MultiplicitySequence ring_closure_sequence;
    CharacterSet characters; // of ring_closure_orders
    MultiplicitySequence jacobian_sequence;
    bool ring_closure_is_arf;
    bool ring_closure_contains_ring;
    std::vector<std::string> notes;

    // The ring route must reproduce the blow-up sequence. The semigroup route
    // (Arf closure of the orders) can fall short of the ring closure when
    // the branch is not monomial; that case is RING_ROUTE_ONLY.
    BranchVerdict verdict() const
    {
        const bool ring_route = ring_closure_is_arf && ring_closure_contains_ring &&
                                blowup_sequence == ring_closure_sequence && jacobian_sequence == blowup_sequence &&
                                closure.is_subset_of(ring_closure_orders);
        if (!ring_route)
            return BranchVerdict::inconsistent;
        if (blowup_sequence == semigroup_sequence && closure == ring_closure_orders)
            return BranchVerdict::consistent;
        return BranchVerdict::ring_route_only;
    }

    bool consistent() const { return verdict() == BranchVerdict::consistent; }

    // Equality of the reported mathematics; notes are excluded.
    bool same_results(const BranchReport &o) const
    {
        return blowup_sequence == o.blowup_sequence && orders == o.orders && closure == o.closure &&
               semigroup_sequence == o.semigroup_sequence && ring_closure_orders == o.ring_closure_orders &&
               ring_closure_sequence == o.ring_closure_sequence && characters == o.characters &&
               jacobian_sequence == o.jacobian_sequence && ring_closure_is_arf == o.ring_closure_is_arf &&
               ring_closure_contains_ring == o.ring_closure_contains_ring;
    }
};

template <CoefficientField F>
BranchReport branch_report(const BranchParam<F> &b, std::size_t truncation, std::size_t max_steps = default_max_steps)
{
    std::vector<std::string> notes;
    auto blowup = multiplicity_sequence_blowup(b, max_steps, &notes);
    auto orders = value_semigroup(b, truncation);
    auto closure = arf_closure(orders);
    auto seq = multiplicity_sequence(closure);
    const auto ring = arf_ring_closure(b, truncation, max_steps);
    auto ring_orders = orders_semigroup(ring);
    const bool ring_arf = is_arf_ring(ring);
    const bool contains = contains_branch_ring(ring, b);
    // A ring closure that is not Arf has no multiplicity sequence to compare.
    auto ring_seq = is_arf(ring_orders) ? multiplicity_sequence(ring_orders) : MultiplicitySequence();
    auto chars = is_arf(ring_orders) ? characters(ring_orders) : characters(closure);
    auto jac = jacobian_multiplicity_sequence(chars);
    return BranchReport{std::move(blowup),      std::move(orders), std::move(closure), std::move(seq),
                        std::move(ring_orders), std::move(ring_seq), std::move(chars), std::move(jac),
                        ring_arf,               contains,          std::move(notes)};
}

struct BranchOptions {
    std::size_t truncation = default_truncation;
    std::size_t max_truncation = 512;
    std::size_t max_steps = default_max_steps;
    bool precision_guard = true;
};

struct BranchAnalysis {
    BranchReport report;
    std::size_t truncation;
    std::vector<std::string> diagnostics;
};

// Runs branch_report on exact polynomial coordinates, doubling the truncation
// whenever a quantity cannot be certified. With the guard on, a result is
// accepted only if a rerun at twice the truncation reproduces it; no run
// exceeds max_truncation.
template <CoefficientField F>
BranchAnalysis analyze_branch(const F &field, const std::vector<ExactPolynomial> &coords, const BranchOptions &opts)
{
    std::vector<std::string> diagnostics;
    auto attempt = [&](std::size_t t) { return branch_report(make_branch(field, coords, t), t, opts.max_steps); };
    std::string last_failure = "no attempt fit below the maximum truncation";
    for (std::size_t t = opts.truncation; t <= opts.max_truncation; t *= 2) {
        const std::size_t check = opts.precision_guard ? 2 * t : t;
        if (check > opts.max_truncation)
            break;
        try {
            BranchReport first = attempt(t);
            if (!opts.precision_guard)
                return {std::move(first), t, std::move(diagnostics)};
            BranchReport second = attempt(check);
            if (first.same_results(second))
                return {std::move(first), t, std::move(diagnostics)};
            last_failure = "results at truncation " + std::to_string(t) + " changed at " + std::to_string(check);
        } catch (const PrecisionError &e) {
            last_failure = "truncation " + std::to_string(t) + ": " + e.what();
        }
        diagnostics.push_back("precision retry: " + last_failure);
    }
    throw PrecisionError("precision guard failed up to truncation " + std::to_string(opts.max_truncation) + " (" +
                         last_failure + ")");
}

} // namespace arfkit
