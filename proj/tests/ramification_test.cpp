#include "arfkit/ramification.hpp"
#include "oracles/oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace arfkit;

namespace
{

const Filtration quaternion({8, 8, 8, 2, 2, 1}, false, "Q8");
const Filtration order_two({2, 2, 2, 1}, true);
const Filtration trivial({1}, true);

Rational r(long long p, long long q = 1)
{
    return Rational(p, q);
}

std::vector<Rational> rs(std::initializer_list<Rational> v)
{
    return v;
}

// Divisibility chain ending in one trailing 1.
Filtration random_filtration(std::mt19937_64 &rng, bool abelian)
{
    static const unsigned primes[] = {2, 3, 5};
    std::vector<unsigned> orders{1};
    const std::size_t drops = rng() % 4;
    for (std::size_t d = 0; d < drops; ++d) {
        const unsigned next = orders.back() * primes[rng() % 3];
        const std::size_t repeat = 1 + rng() % 3;
        for (std::size_t i = 0; i < repeat; ++i)
            orders.push_back(next);
    }
    std::reverse(orders.begin(), orders.end());
    if (orders.size() > 1 && rng() % 3 == 0)
        orders.insert(orders.begin(), orders.front() * 2);
    return Filtration(orders, abelian);
}

Rational random_rational(std::mt19937_64 &rng, int lo, int hi)
{
    const long long den = 1 + static_cast<long long>(rng() % 12);
    const long long span = (hi - lo) * den;
    return Rational(lo * den + static_cast<long long>(rng() % (span + 1)), den);
}

} // namespace

TEST(Filtration, Validation)
{
    EXPECT_THROW(Filtration({}, true), InputError);
    EXPECT_THROW(Filtration({4, 3, 1}, true), InputError);
    EXPECT_THROW(Filtration({4, 2}, true), InputError);
    EXPECT_THROW(Filtration({4, 0, 1}, true), InputError);
    EXPECT_THROW(Filtration({2, 1, 1}, true), InputError);
    EXPECT_EQ(quaternion.last_index(), 4);
    EXPECT_EQ(quaternion.order_at(7), 1u);
    EXPECT_THROW(quaternion.order_at(-2), InputError);
    EXPECT_TRUE(Filtration({4, 2, 1}, true).tame_drop());
    EXPECT_FALSE(quaternion.tame_drop());
}

TEST(Phi, Examples)
{
    for (auto u : rs({r(-1), r(-1, 2), r(0), r(3, 7), r(5), r(100)}))
        EXPECT_EQ(herbrand_phi(trivial, u), u);
    EXPECT_EQ(herbrand_phi(quaternion, 1), r(1));
    EXPECT_EQ(herbrand_phi(quaternion, 3), r(3, 2));
    EXPECT_EQ(herbrand_phi(quaternion, 5), r(7, 4));
    EXPECT_EQ(herbrand_phi(order_two, 2), r(3, 2));
    EXPECT_EQ(herbrand_phi(order_two, r(-1, 2)), r(-1, 2));
    EXPECT_THROW(herbrand_phi(quaternion, r(-3, 2)), InputError);
}

TEST(Psi, Examples)
{
    EXPECT_EQ(herbrand_psi(trivial, r(7, 3)), r(7, 3));
    EXPECT_EQ(herbrand_psi(quaternion, r(3, 2)), r(3));
    EXPECT_EQ(herbrand_psi(quaternion, 1), r(1));
    EXPECT_EQ(herbrand_psi(quaternion, 2), r(3) + r(1, 2) * 8);
    EXPECT_THROW(herbrand_psi(quaternion, -2), InputError);
}

TEST(UpperGroupOrder, Examples)
{
    EXPECT_EQ(upper_group_order(quaternion, 1), 8u);
    EXPECT_EQ(upper_group_order(quaternion, r(5, 4)), 2u);
    EXPECT_EQ(upper_group_order(quaternion, r(3, 2)), 2u);
    EXPECT_EQ(upper_group_order(quaternion, r(7, 4)), 1u);
    EXPECT_EQ(upper_group_order(Filtration({6, 3, 1}, true), -1), 6u);
    EXPECT_EQ(upper_group_order(Filtration({6, 3, 1}, true), r(-1, 2)), 3u);
    EXPECT_THROW(upper_group_order(quaternion, -5), InputError);
}

TEST(Jumps, Examples)
{
    EXPECT_EQ(lower_jumps(quaternion), (std::vector<unsigned>{1, 3}));
    EXPECT_TRUE(lower_jumps(trivial).empty());
    EXPECT_TRUE(lower_jumps(Filtration({3, 1}, true)).empty());
    EXPECT_EQ(lower_jumps(order_two), (std::vector<unsigned>{1}));
    EXPECT_EQ(lower_jumps(Filtration({2, 2, 1}, true)), (std::vector<unsigned>{0}));
    EXPECT_EQ(upper_jumps(quaternion), rs({r(1), r(3, 2)}));
    EXPECT_EQ(upper_jumps(order_two), rs({r(1)}));
    EXPECT_TRUE(upper_jumps(trivial).empty());
}

TEST(HasseArf, Examples)
{
    auto a = hasse_arf_check(order_two);
    EXPECT_EQ(a.verdict, HasseArfVerdict::pass);
    EXPECT_EQ(a.jumps, rs({r(1)}));
    auto b = hasse_arf_check(quaternion);
    EXPECT_EQ(b.verdict, HasseArfVerdict::non_abelian_info);
    EXPECT_FALSE(b.all_integral);
    EXPECT_EQ(b.jumps, rs({r(1), r(3, 2)}));
    auto c = hasse_arf_check(Filtration({8, 8, 8, 2, 2, 1}, true));
    EXPECT_EQ(c.verdict, HasseArfVerdict::violation);
    EXPECT_STREQ(to_string(c.verdict), "VIOLATION");
    EXPECT_EQ(hasse_arf_check(trivial).verdict, HasseArfVerdict::pass);
}

TEST(Breakpoints, Quaternion)
{
    auto bp = herbrand_breakpoints(quaternion);
    ASSERT_EQ(bp.size(), 5u);
    EXPECT_EQ(bp[0].second, r(0));
    EXPECT_EQ(bp[2].second, r(5, 4));
    EXPECT_EQ(bp[4].second, r(13, 8));
    EXPECT_EQ(herbrand_breakpoints(trivial).size(), 1u);
}

TEST(Properties, PhiMatchesPiecewiseIntegral)
{
    std::mt19937_64 rng(41);
    for (int i = 0; i < 300; ++i) {
        auto f = random_filtration(rng, true);
        auto u = random_rational(rng, -1, f.last_index() + 3);
        EXPECT_EQ(herbrand_phi(f, u), oracle::phi_by_pieces(f, u)) << u;
    }
}

TEST(Properties, PsiInvertsPhi)
{
    std::mt19937_64 rng(42);
    for (int i = 0; i < 300; ++i) {
        auto f = random_filtration(rng, true);
        auto u = random_rational(rng, -1, f.last_index() + 2);
        EXPECT_EQ(herbrand_psi(f, herbrand_phi(f, u)), u);
        EXPECT_EQ(herbrand_phi(f, herbrand_psi(f, u)), u);
    }
}

TEST(Properties, ConcaveIncreasingWithExactSlopes)
{
    std::mt19937_64 rng(43);
    for (int i = 0; i < 100; ++i) {
        auto f = random_filtration(rng, true);
        EXPECT_EQ(herbrand_phi(f, 0), r(0));
        Rational previous_slope = 1;
        for (int k = 0; k <= f.last_index() + 2; ++k) {
            const Rational slope = herbrand_phi(f, k + 1) - herbrand_phi(f, k);
            EXPECT_EQ(slope, Rational(f.order_at(k + 1), f.order_at(0)));
            EXPECT_GT(slope, 0);
            EXPECT_LE(slope, previous_slope);
            // Linear within the unit interval: no breakpoint off the integers.
            EXPECT_EQ(herbrand_phi(f, Rational(2 * k + 1, 2)), herbrand_phi(f, k) + slope / 2);
            previous_slope = slope;
        }
        for (auto u : rs({r(-1), r(-2, 3), r(0)}))
            EXPECT_EQ(herbrand_phi(f, u), u);
    }
}

TEST(Properties, UpperNumberingIdentity)
{
    std::mt19937_64 rng(44);
    for (int i = 0; i < 300; ++i) {
        auto f = random_filtration(rng, true);
        auto u = random_rational(rng, -1, std::max(f.last_index(), 0));
        if (u == -1)
            continue;
        const int ceil_u = static_cast<int>(detail::ceil_int(u).convert_to<long long>());
        EXPECT_EQ(upper_group_order(f, herbrand_phi(f, u)), f.order_at(ceil_u)) << u;
    }
}

TEST(Properties, SingleJumpIsIntegral)
{
    for (unsigned p : {2u, 3u, 5u, 7u}) {
        for (unsigned j = 0; j < 8; ++j) {
            std::vector<unsigned> orders(j + 2, p);
            orders.push_back(1);
            Filtration f(orders, true);
            EXPECT_EQ(lower_jumps(f), std::vector<unsigned>{j});
            EXPECT_EQ(upper_jumps(f), rs({r(j)}));
            EXPECT_EQ(hasse_arf_check(f).verdict, HasseArfVerdict::pass);
        }
    }
}
