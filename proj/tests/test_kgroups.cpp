#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "wittk/kgroups.hpp"

using namespace wittk;

TEST_CASE("index utilities") {
    CHECK(j_p_enumerate(2, 10) == std::vector<long>{1, 3, 5, 7, 9});
    CHECK(e_prime(12, 2) == 3);
    CHECK(e_prime(5, 2) == 5);
    CHECK(t_fn(1, 2, 3, 2) == 1);
    CHECK(t_fn(3, 2, 1, 3) == 0);
    CHECK(t_fn(5, 3, 2, 4) == 3);
    CHECK_THROWS_AS(t_fn(1, 2, 0, 2), DomainError);
}

TEST_CASE("graded factors: (p=2, e=3, i=0)") {
    auto f = enumerate_gr_factors(2, 3, 0);
    REQUIRE(f.size() == 2);
    CHECK(f[0].u == 1);
    CHECK(f[0].kase == FactorCase::Generic);
    CHECK(f[0].s == 2);
    CHECK(f[0].length == 2);
    CHECK(f[1].u == 3);
    CHECK(f[1].kase == FactorCase::Absent);
    CHECK(f[1].equality_boundary);
    CHECK(assemble_factors(f, 1) == quotient_formula(2, 3, 1, 1));  // Z/4
}

TEST_CASE("graded factors: (p=2, e=2, i=2) pins the strict boundary") {
    auto f = enumerate_gr_factors(2, 2, 2);
    REQUIRE(f.size() == 3);
    CHECK(f[0].u == 1);
    CHECK(f[0].kase == FactorCase::PhiPullback);
    CHECK(f[0].length == 1);
    CHECK(f[1].u == 3);
    CHECK(f[1].kase == FactorCase::PhiPullback);
    CHECK(f[1].length == 1);
    CHECK(f[1].equality_boundary);  // u p^{v_p(e)} = 6 = e(i+1)
    CHECK(f[2].u == 5);
    CHECK(f[2].kase == FactorCase::Generic);
    CHECK(f[2].length == 1);
    // total order 8 = |W_6(F_2)/V_2 W_3(F_2)|; the non-strict reading would
    // make u=3 generic of length s=2 and give 16
    CHECK(assemble_factors(f, 1).order_valuation() == 3);
    CHECK(f[1].s == 2);
}

TEST_CASE("graded factors: (p=2, e=2, i=1)") {
    auto f = enumerate_gr_factors(2, 2, 1);
    REQUIRE(f.size() == 2);
    CHECK(f[0].kase == FactorCase::PhiPullback);
    CHECK(f[0].length == 1);
    CHECK(f[1].kase == FactorCase::Generic);
    CHECK(f[1].length == 1);
    CHECK(assemble_factors(f, 1) == quotient_formula(2, 2, 2, 1));
}

TEST_CASE("k_odd_perfectoid pinned values") {
    RingDescriptor f2 = RingDescriptor::prime_field(2);
    auto k3 = k_odd_perfectoid(2, 2, 2, f2, Exec::Serial);
    CHECK(k3.degree == 3);
    CHECK(*k3.torsion == AbelianPGroup::cyclic(2, 1, 2));

    auto k1 = k_odd_perfectoid(2, 3, 1, f2, Exec::Serial);
    CHECK(k1.degree == 1);
    CHECK(*k1.torsion == AbelianPGroup::cyclic(2, 2));  // Z/4
    CHECK(*k1.torsion == unit_group_structure(f2, 3));  // |(1+xF_2[x]/x^3)^x| = 4

    for (int r = 1; r <= 3; ++r) {
        auto k = k_odd_perfectoid(3, 1, r, RingDescriptor::prime_field(3), Exec::Serial);
        CHECK(k.torsion->is_trivial());  // e = 1: relative K vanishes
    }
}

TEST_CASE("h function") {
    CHECK(h_fn(2, 2, 2, 1) == 1);
    CHECK(h_fn(2, 2, 2, 3) == 1);
    CHECK(h_fn(2, 1, 3, 1) == 2);
    CHECK(h_fn(2, 1, 3, 3) == 0);
    for (long u : {1L, 3L, 5L, 7L}) CHECK(h_fn(2, 3, 1, u) == 0);
    CHECK_THROWS_AS(h_fn(2, 2, 2, 4), DomainError);
}

TEST_CASE("rank_count") {
    CHECK(rank_count(3, 1, 2) == 2);  // m in {7, 8}
    CHECK(rank_count(2, 0, 3) == 1);  // m = 3
    for (int r = 0; r <= 5; ++r) CHECK(rank_count(1, r, 5) == 0);
}

TEST_CASE("cdvr closed form examples") {
    CHECK(cdvr_even_valuation_closed({2, 1, 1, 0, false}, 2, 1) == 1);  // |K_2| = 2
    CHECK(cdvr_even_valuation_closed({2, 1, 2, 3, false}, 2, 1) == 5);
    CHECK(cdvr_even_valuation_closed({3, 1, 2, 1, false}, 2, 1) == 1);
    CHECK(cdvr_even_valuation_closed({5, 1, 3, 2, false}, 1, 4) == 0);  // n = 1
}

TEST_CASE("recurrence aggregation equals the closed form") {
    CHECK(cdvr_even_recursive({2, 1, 1, 0, false}, 2, 1) == 1);
    CHECK(cdvr_even_recursive({2, 1, 1, 0, false}, 3, 2) == 5);  // v_2(6! (2!)^1) = 4 + 1
    for (int n = 1; n <= 8; ++n) CHECK(cdvr_even_recursive({3, 2, 2, 1, false}, n, 0) == 0);
    CHECK_THROWS_AS(cdvr_even_recursive({2, 1, 1, 0, false}, 13, 1), CapExceeded);
}

TEST_CASE("cdvr_k_groups wires the routes together") {
    auto [odd, even] = cdvr_k_groups({2, 1, 2, 3, false}, 2, 1);
    CHECK(odd.degree == 3);
    CHECK(odd.free_rank == 1);
    CHECK(odd.torsion->is_trivial());
    CHECK(even.degree == 2);
    CHECK(*even.order_valuation == 5);
    CHECK(even.provenance == std::vector<std::string>{"closed-form", "recurrence"});
}

TEST_CASE("integral assembly") {
    auto a = integral_agh(2, 1);
    CHECK(a.order == 2);
    CHECK(a.rank == 1);
    auto b = integral_agh(3, 1);
    CHECK(b.order == 6);
    CHECK(b.rank == 2);
    auto c = integral_agh(2, 2);
    CHECK(c.order == 24);
    CHECK(c.rank == 1);
    // product over primes of p^{v_p} reconstructs the factorial integer
    for (int n = 2; n <= 5; ++n)
        for (int i = 1; i <= 5; ++i) {
            BigInt rebuilt = 1;
            for (long p = 2; p <= n * i; ++p) {
                if (!is_prime_u64(p)) continue;
                rebuilt *= pow_big(BigInt(p),
                                   cdvr_even_valuation_closed({p, 1, 1, 0, false}, n, i)
                                       .convert_to<unsigned long>());
            }
            CHECK(rebuilt == integral_agh(n, i).order);
        }
    CHECK_THROWS_AS(integral_agh(2, 1, 2, {{2, 1, 1, 0}}), DomainError);
}

TEST_CASE("cdvr_from_polynomial") {
    auto a = cdvr_from_polynomial(2, 1, {BigInt(-2), BigInt(1)});
    CHECK(a.e == 1);
    CHECK(a.dE == 0);
    auto b = cdvr_from_polynomial(2, 1, {BigInt(-2), BigInt(0), BigInt(1)});
    CHECK(b.e == 2);
    CHECK(b.dE == 3);
    auto c = cdvr_from_polynomial(3, 1, {BigInt(-3), BigInt(0), BigInt(1)});
    CHECK(c.e == 2);
    CHECK(c.dE == 1);
    // x^3 - 3 is wild at p = 3: E'(pi) = 3 pi^2 with v_pi(3) = 3, so dE = 5
    auto d = cdvr_from_polynomial(3, 1, {BigInt(-3), BigInt(0), BigInt(0), BigInt(1)});
    CHECK(d.e == 3);
    CHECK(d.dE == 5);
    // x^4 - 2x^2 + 2: E'(pi) = 4 pi (pi^2 - 1), v = 8 + 1 + 0
    auto e4 = cdvr_from_polynomial(2, 1, {BigInt(2), BigInt(0), BigInt(-2), BigInt(0), BigInt(1)});
    CHECK(e4.e == 4);
    CHECK(e4.dE == 9);
    CHECK_THROWS_AS(cdvr_from_polynomial(2, 1, {BigInt(-1), BigInt(0), BigInt(1)}), DomainError);
    CHECK_THROWS_AS(cdvr_from_polynomial(2, 1, {BigInt(-4), BigInt(0), BigInt(1)}), DomainError);
    CHECK_THROWS_AS(cdvr_from_polynomial(2, 1, {BigInt(-2), BigInt(0), BigInt(2)}), DomainError);
}

TEST_CASE("legendre valuations") {
    CHECK(agh_factorial_valuation(2, 1, 2) == 1);
    CHECK(agh_factorial_valuation(3, 2, 2) == 5);  // v_2(720 * 2)
    CHECK(legendre_factorial_valuation(10, 2) == 8);
    CHECK(legendre_factorial_valuation(100, 5) == 24);
}

TEST_CASE("unit group oracle") {
    RingDescriptor f2 = RingDescriptor::prime_field(2);
    CHECK(unit_group_structure(f2, 3) == AbelianPGroup::cyclic(2, 2));       // Z/4
    CHECK(unit_group_structure(f2, 2) == AbelianPGroup::cyclic(2, 1));       // Z/2
    RingDescriptor f3 = RingDescriptor::prime_field(3);
    CHECK(unit_group_structure(f3, 2) == AbelianPGroup::cyclic(3, 1));
    CHECK(unit_group_structure(f3, 4) == quotient_formula(3, 4, 1, 1));
}
