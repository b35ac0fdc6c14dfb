#include "arfkit/branch.hpp"
#include "corpus.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace arfkit;

namespace
{

using QSeries = TruncatedSeries<RationalField>;
using QBranch = BranchParam<RationalField>;

QBranch branch(std::initializer_list<const char *> coords, std::size_t t = 64)
{
    std::vector<ExactPolynomial> polys;
    for (const char *c : coords)
        polys.push_back(parse_series_literal(c));
    return make_branch(RationalField{}, polys, t);
}

QBranch branch(const corpus::BranchFixture &f, std::size_t t)
{
    return make_branch(RationalField{}, corpus::parse(f), t);
}

std::vector<std::string> formatted(const QBranch &b)
{
    std::vector<std::string> out;
    for (const auto &c : b.coords())
        out.push_back(format_series(c));
    return out;
}

MultiplicitySequence seq(std::vector<unsigned> e)
{
    return MultiplicitySequence(std::move(e));
}

NumericalSemigroup sg(std::vector<unsigned> small, unsigned c)
{
    return NumericalSemigroup::from_elements(std::move(small), c);
}

BranchOptions options(std::size_t t)
{
    BranchOptions o;
    o.truncation = t;
    return o;
}

} // namespace

TEST(Branch, Validation)
{
    EXPECT_THROW(QBranch({}), InputError);
    EXPECT_THROW(branch({"1 + t"}), InputError);
    EXPECT_THROW(branch({"t^70"}), PrecisionError);
    EXPECT_NO_THROW(branch({"t^70", "t^5"}));
    EXPECT_EQ(branch({"t^2", "t^3"}, 20).truncation(), 20u);
    auto a = to_series(PrimeField(3), parse_series_literal("t"), 8);
    auto b = to_series(PrimeField(5), parse_series_literal("t^2"), 8);
    EXPECT_THROW(BranchParam<PrimeField>({a, b}), InputError);
}

TEST(Multiplicity, Examples)
{
    EXPECT_EQ(multiplicity(branch({"t^2", "t^3"})), 2u);
    EXPECT_EQ(multiplicity(branch({"t^4", "t^4 + t^7"})), 4u);
    EXPECT_EQ(multiplicity(branch({"t", "t^5"})), 1u);
    EXPECT_EQ(multiplicity(branch({"t^90", "t^5"})), 5u);
}

TEST(BlowUp, Examples)
{
    EXPECT_EQ(formatted(blow_up(branch({"t^2", "t^3"}))), (std::vector<std::string>{"t^2", "t"}));
    EXPECT_EQ(formatted(blow_up(branch({"t^4", "t^4 + t^7"}))), (std::vector<std::string>{"t^4", "t^3"}));
    auto logged = blow_up_logged(branch({"t", "t"}));
    EXPECT_EQ(formatted(logged.branch), (std::vector<std::string>{"t"}));
    ASSERT_EQ(logged.notes.size(), 1u);
    EXPECT_NE(logged.notes[0].find("dropped coordinate 2"), std::string::npos);
}

TEST(BlowUp, StableReorderAndTranslation)
{
    auto b = blow_up(branch({"t^5 + t^6", "t^3", "2*t^3 + t^4"}));
    EXPECT_EQ(formatted(b), (std::vector<std::string>{"t^3", "t", "t^2 + t^3"}));
    for (const auto &c : b.coords())
        EXPECT_TRUE(RationalField::is_zero(c.constant_term()));
    EXPECT_THROW(blow_up(branch({"t^4", "t^5"}, 5)), PrecisionError);
}

TEST(BlowUpSequence, Examples)
{
    EXPECT_EQ(multiplicity_sequence_blowup(branch({"t^2", "t^3"})), seq({2, 1}));
    EXPECT_EQ(multiplicity_sequence_blowup(branch({"t^4", "t^4 + t^7"})), seq({4, 3, 1}));
    EXPECT_EQ(multiplicity_sequence_blowup(branch({"t^5", "t^7"})), seq({5, 2, 2, 1}));
    EXPECT_EQ(multiplicity_sequence_blowup(branch({"t"})), seq({1}));
}

TEST(BlowUpSequence, Failures)
{
    try {
        multiplicity_sequence_blowup(branch({"t^2"}));
        FAIL() << "expected ResolutionError";
    } catch (const ResolutionError &e) {
        EXPECT_EQ(e.partial(), (std::vector<unsigned>{2}));
    }
    try {
        multiplicity_sequence_blowup(branch({"t^5", "t^7"}), 2);
        FAIL() << "expected ResolutionError";
    } catch (const ResolutionError &e) {
        EXPECT_EQ(e.partial(), (std::vector<unsigned>{5, 2}));
    }
    EXPECT_THROW(multiplicity_sequence_blowup(branch({"t^2", "t^3"}), 0), InputError);
    // (t^2, t^2 + t^40) loses its second coordinate at T = 16.
    EXPECT_THROW(multiplicity_sequence_blowup(branch({"t^2", "t^2 + t^40"}, 16)), PrecisionError);
}

TEST(Subalgebra, Examples)
{
    EXPECT_EQ(value_semigroup(branch({"t^2", "t^3"}), 16), sg({0}, 2));
    EXPECT_EQ(value_semigroup(branch({"t^4", "t^4 + t^7"}), 32),
              NumericalSemigroup::from_generators({4, 7}));
    EXPECT_EQ(value_semigroup(branch({"t"}), 8), NumericalSemigroup::natural());
    auto h = subalgebra(branch({"t^4", "t^4 + t^7"}), 32);
    EXPECT_EQ(h.orders().front(), 0u);
    for (const auto &[d, s] : h.basis) {
        EXPECT_EQ(s.order(), Order::finite(d));
        EXPECT_TRUE(RationalField::is_zero(s.leading_coefficient() - 1));
    }
}

TEST(Subalgebra, TailMustStabilize)
{
    EXPECT_THROW(value_semigroup(branch({"t^9", "t^10"}), 64), PrecisionError);
    EXPECT_EQ(value_semigroup(branch({"t^9", "t^10"}, 128), 128), NumericalSemigroup::from_generators({9, 10}));
}

TEST(ArfRing, Examples)
{
    EXPECT_TRUE(is_arf_ring(subalgebra(branch({"t^2", "t^3"}), 32)));
    EXPECT_FALSE(is_arf_ring(subalgebra(branch({"t^4", "t^6", "t^7"}), 32)));
    EXPECT_TRUE(is_arf_ring(subalgebra(branch({"t"}), 16)));
    EXPECT_FALSE(is_arf_ring(subalgebra(branch({"t^4", "t^4 + t^7"}), 32)));
}

TEST(ArfRingClosure, Examples)
{
    auto cusp = arf_ring_closure(branch({"t^2", "t^3"}), 32);
    EXPECT_EQ(orders_semigroup(cusp), sg({0}, 2));
    auto gap = arf_ring_closure(branch({"t^4", "t^4 + t^7"}), 64);
    EXPECT_EQ(orders_semigroup(gap), sg({0, 4}, 7));
    EXPECT_TRUE(is_arf_ring(gap));
    EXPECT_EQ(orders_semigroup(arf_ring_closure(branch({"t", "t^3"}), 16)), NumericalSemigroup::natural());
}

TEST(Report, Examples)
{
    auto cusp = branch_report(branch({"t^2", "t^3"}), 64);
    EXPECT_EQ(cusp.blowup_sequence, seq({2, 1}));
    EXPECT_EQ(cusp.semigroup_sequence, seq({2, 1}));
    EXPECT_EQ(cusp.characters, CharacterSet({2, 3}));
    EXPECT_TRUE(cusp.consistent());

    auto gap = branch_report(branch({"t^4", "t^4 + t^7"}), 64);
    EXPECT_EQ(gap.blowup_sequence, seq({4, 3, 1}));
    EXPECT_EQ(gap.semigroup_sequence, seq({4, 3, 1}));
    EXPECT_EQ(gap.characters, CharacterSet({4, 7}));
    EXPECT_TRUE(gap.consistent());

    auto five = branch_report(branch({"t^5", "t^7"}), 64);
    EXPECT_EQ(five.blowup_sequence, seq({5, 2, 2, 1}));
    EXPECT_EQ(five.semigroup_sequence, seq({5, 2, 2, 1}));
    EXPECT_TRUE(five.consistent());
}

TEST(Analyze, DoublesTruncationWhenNeeded)
{
    auto a = analyze_branch(RationalField{}, {parse_series_literal("t^9"), parse_series_literal("t^10")}, options(64));
    EXPECT_EQ(a.truncation, 128u);
    EXPECT_EQ(a.diagnostics.size(), 1u);
    EXPECT_EQ(a.report.blowup_sequence, seq({9, 1}));
    BranchOptions tight = options(64);
    tight.max_truncation = 128;
    EXPECT_THROW(analyze_branch(RationalField{}, {parse_series_literal("t^9"), parse_series_literal("t^10")}, tight),
                 PrecisionError);
}

TEST(Properties, GapPhenomenon)
{
    for (unsigned n = 2; n <= 10; ++n) {
        for (unsigned m = 1; m < n; ++m) {
            const std::string second = "t^" + std::to_string(n) + " + t^" + std::to_string(n + m);
            auto b = make_branch(RationalField{}, {parse_series_literal("t^" + std::to_string(n)), parse_series_literal(second)}, 64);
            auto up = blow_up(b);
            ASSERT_EQ(up.dimension(), 2u);
            EXPECT_EQ(up.coords()[1].order(), Order::finite(m)) << n << "," << m;
        }
    }
}

TEST(Properties, TwoRoutesAgreeOnNamedAndMonomialBranches)
{
    auto fixtures = corpus::named_branches();
    for (const auto &f : corpus::monomial_branches(8, 3))
        fixtures.push_back(f);
    for (const auto &f : fixtures) {
        auto a = analyze_branch(RationalField{}, corpus::parse(f), options(64));
        EXPECT_EQ(a.report.verdict(), BranchVerdict::consistent) << f.name;
        EXPECT_EQ(a.report.blowup_sequence, a.report.semigroup_sequence) << f.name;
        EXPECT_EQ(a.report.ring_closure_orders, a.report.closure) << f.name;
        if (!f.expected.empty()) {
            EXPECT_EQ(a.report.blowup_sequence, seq(f.expected)) << f.name;
        }
    }
}

TEST(Properties, RingRouteAgreesOnNonMonomialBranches)
{
    for (const auto &f : corpus::nonmonomial_branches()) {
        auto a = analyze_branch(RationalField{}, corpus::parse(f), options(64));
        EXPECT_NE(a.report.verdict(), BranchVerdict::inconsistent) << f.name;
        EXPECT_EQ(a.report.blowup_sequence, a.report.ring_closure_sequence) << f.name;
        EXPECT_EQ(a.report.jacobian_sequence, a.report.blowup_sequence) << f.name;
        EXPECT_TRUE(a.report.closure.is_subset_of(a.report.ring_closure_orders)) << f.name;
        EXPECT_TRUE(a.report.ring_closure_is_arf) << f.name;
        EXPECT_TRUE(a.report.ring_closure_contains_ring) << f.name;
    }
}

TEST(Report, SemigroupRouteFallsShortOnPlaneBranch)
{
    // Orders <4, 6, 13>; its Arf closure {0,4,6,8,10,12,13,...} is smaller
    // than the orders {0,4,6,8,9,...} of the Arf closure of the ring.
    auto r = branch_report(branch({"t^4", "t^6 + t^7"}), 64);
    EXPECT_EQ(r.orders, NumericalSemigroup::from_generators({4, 6, 13}));
    EXPECT_EQ(r.blowup_sequence, seq({4, 2, 2, 1}));
    EXPECT_EQ(r.semigroup_sequence, seq({4, 2, 2, 2, 2, 1}));
    EXPECT_EQ(r.ring_closure_orders, sg({0, 4, 6}, 8));
    EXPECT_EQ(r.characters, CharacterSet({4, 6, 9}));
    EXPECT_EQ(r.verdict(), BranchVerdict::ring_route_only);
    EXPECT_STREQ(to_string(r.verdict()), "RING_ROUTE_ONLY");
}

TEST(Properties, MonomialBlowUpReplaysJacobian)
{
    for (const auto &f : corpus::monomial_branches(12, 4)) {
        std::vector<unsigned> exps;
        for (const auto &p : corpus::parse(f))
            exps.push_back(static_cast<unsigned>(p.begin()->first));
        EXPECT_EQ(multiplicity_sequence_blowup(branch(f, 64)), jacobian_multiplicity_sequence(CharacterSet(exps)))
            << f.name;
    }
}

TEST(Properties, SmoothnessIsAbsorbing)
{
    for (auto coords : {std::vector<const char *>{"t", "t^2"}, {"t + t^2", "t^3", "t^4"}, {"t^3", "2*t - t^2"}}) {
        std::vector<ExactPolynomial> polys;
        for (const char *c : coords)
            polys.push_back(parse_series_literal(c));
        auto b = make_branch(RationalField{}, polys, 32);
        for (int i = 0; i < 5; ++i) {
            EXPECT_EQ(multiplicity(b), 1u);
            b = blow_up(b);
        }
    }
}

TEST(Properties, SameOrderWitnessesGiveSameQuotientOrders)
{
    // Two elements of order 4 in k[[t^4, t^6 + t^7]]: t^4 and t^4 + t^6 + t^7.
    auto h = subalgebra(branch({"t^4", "t^6 + t^7"}), 64);
    const auto &s = h.basis.at(4);
    const auto other = s + h.basis.at(6);
    auto quotient_orders = [&](const QSeries &witness) {
        std::set<std::size_t> out;
        for (const auto &[d, e] : h.basis) {
            if (d >= 4 && d < 40)
                out.insert((e / witness).order().value());
        }
        return out;
    };
    EXPECT_EQ(quotient_orders(s), quotient_orders(other));
}

TEST(Properties, RingClosureIsArfAndIdempotent)
{
    auto fixtures = corpus::named_branches();
    for (const auto &f : corpus::nonmonomial_branches())
        fixtures.push_back(f);
    for (const auto &f : fixtures) {
        if (f.name == "eight-twelve")
            continue;
        auto b = branch(f, 128);
        auto closure = arf_ring_closure(b, 128);
        EXPECT_TRUE(is_arf_ring(closure)) << f.name;
        EXPECT_TRUE(contains_branch_ring(closure, b)) << f.name;
        // A branch whose ring is already Arf is its own closure.
        auto h = subalgebra(b, 128);
        if (is_arf_ring(h)) {
            EXPECT_EQ(orders_semigroup(closure), orders_semigroup(h)) << f.name;
        }
    }
}

TEST(Properties, PrecisionGuardReproducesAtDoubleTruncation)
{
    for (const auto &f : corpus::named_branches()) {
        auto a = branch_report(branch(f, 64), 64);
        auto b = branch_report(branch(f, 128), 128);
        EXPECT_TRUE(a.same_results(b)) << f.name;
    }
}

TEST(PositiveCharacteristic, RunsAndReports)
{
    // Reported only: agreement is not asserted outside characteristic 0.
    for (unsigned p : {2u, 3u, 5u}) {
        for (const auto &f : corpus::named_branches()) {
            try {
                auto a = analyze_branch(PrimeField(p), corpus::parse(f), options(64));
                RecordProperty(f.name + "_p" + std::to_string(p), a.report.consistent() ? "consistent" : "differs");
            } catch (const Error &e) {
                RecordProperty(f.name + "_p" + std::to_string(p), e.what());
            }
        }
    }
    // (t^2, t^3) resolves the same way in characteristic 2.
    auto cusp = analyze_branch(PrimeField(2), {parse_series_literal("t^2"), parse_series_literal("t^3")}, options(64));
    EXPECT_EQ(cusp.report.blowup_sequence, seq({2, 1}));
}
