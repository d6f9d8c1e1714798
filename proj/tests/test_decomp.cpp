#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "wittk/decomp.hpp"
#include "wittk/smallring.hpp"

using namespace wittk;

TEST_CASE("s_fn") {
    CHECK(s_fn(2, 5, 1) == 3);
    CHECK(s_fn(2, 4, 3) == 1);
    CHECK(s_fn(3, 2, 5) == 0);
    CHECK(s_fn(2, 6, 3) == 2);  // 3*2 <= 6 < 3*4
    CHECK_THROWS_AS(s_fn(2, 5, 4), DomainError);  // u divisible by p
}

TEST_CASE("decompose requires p-local coefficients") {
    WittVector w = witt_zero(TruncationSet::full(2), RingDescriptor::integers());
    CHECK_THROWS_AS(decompose(w, 2), DomainError);
}

TEST_CASE("decompose of zero is componentwise zero") {
    RingDescriptor f2 = RingDescriptor::prime_field(2);
    auto rep = decompose(witt_zero(TruncationSet::full(3), f2), 2);
    REQUIRE(rep.components.size() == 2);
    CHECK(rep.components[0].u == 1);
    CHECK(rep.components[0].length == 2);
    CHECK(rep.components[1].u == 3);
    CHECK(rep.components[1].length == 1);
    for (auto& c : rep.components)
        for (auto& e : c.vector.coeffs) CHECK(e.is_zero());
}

TEST_CASE("decompose is a bijection on W_full(2)(F_2) and W_full(3)(F_2)") {
    RingDescriptor f2 = RingDescriptor::prime_field(2);
    for (int m : {2, 3}) {
        std::set<std::string> seen;
        std::uint64_t total = 0;
        enumerate_witt(TruncationSet::full(m), f2, [&](const WittVector& w) {
            ++total;
            auto rep = decompose(w, 2);
            std::string key;
            for (auto& c : rep.components)
                for (auto& e : c.vector.coeffs) key += std::to_string(e.code()) + ",";
            seen.insert(key);
        });
        CHECK(seen.size() == total);
    }
    // 8 = 4 * 2 elements split as (length 2) x (length 1)
    CHECK(witt_count(TruncationSet::full(3), f2) == 8);
}

TEST_CASE("decompose additivity on all of W_full(4)(F_3)") {
    RingDescriptor f3 = RingDescriptor::prime_field(3);
    auto scan = decompose_scan(3, 4, f3, Exec::Serial);
    CHECK(scan.bijective);
    CHECK(scan.additive);
    CHECK(scan.vectors == 81);
}

TEST_CASE("decomposition table inverts") {
    RingDescriptor z4 = RingDescriptor::integers_mod(4);
    DecompositionTable table(2, 3, z4);
    CHECK(table.is_bijective());
    enumerate_witt(TruncationSet::full(3), z4, [&](const WittVector& w) {
        auto back = table.invert(decompose(w, 2));
        REQUIRE(back.has_value());
        CHECK(*back == w);
    });
}

TEST_CASE("quotient structure: formula and oracle examples") {
    RingDescriptor f2 = RingDescriptor::prime_field(2);
    RingDescriptor f3 = RingDescriptor::prime_field(3);

    auto q1 = quotient_structure(2, 3, 1, f2, Exec::Serial);
    CHECK(q1.oracle_ran);
    CHECK(q1.group == AbelianPGroup::cyclic(2, 2));  // Z/4

    auto q2 = quotient_structure(2, 2, 2, f2, Exec::Serial);
    CHECK(q2.group == AbelianPGroup::cyclic(2, 1, 2));  // Z/2 + Z/2

    auto q3 = quotient_structure(3, 2, 1, f3, Exec::Serial);
    CHECK(q3.group == AbelianPGroup::cyclic(3, 1));  // Z/3

    // |W_{re}/V_e W_r| = p^{f(re-r)}
    RingDescriptor f4 = RingDescriptor::finite_field(2, 2);
    auto q4 = quotient_structure(2, 2, 2, f4, Exec::Serial);
    CHECK(q4.group.order_valuation() == 2 * (4 - 2));
}

TEST_CASE("quotient factor lengths sum to re - r") {
    for (long p : {2L, 3L})
        for (int e = 1; e <= 6; ++e)
            for (int r = 1; r <= 4; ++r) {
                long sum = 0;
                for (long u = 1; u <= static_cast<long>(e) * r; ++u)
                    if (u % p != 0) sum += quotient_factor_length(p, e, r, u);
                CHECK(sum == static_cast<long>(e) * r - r);
            }
}

TEST_CASE("oracle cap only disables the oracle route") {
    RingDescriptor f4 = RingDescriptor::finite_field(2, 2);
    auto q = quotient_structure(2, 4, 3, f4, Exec::Serial, 1 << 10);  // 4^12 over cap
    CHECK(!q.oracle_ran);
    CHECK(q.group.order_valuation() == 2 * (12 - 3));
    CHECK_THROWS_AS(quotient_oracle(2, 4, 3, f4, Exec::Serial, 1 << 10), CapExceeded);
}

TEST_CASE("serial reference and parallel kernels produce identical results") {
    RingDescriptor f3 = RingDescriptor::prime_field(3);
    auto s = decompose_scan(3, 4, f3, Exec::Serial);
    auto p = decompose_scan(3, 4, f3, Exec::Parallel);
    CHECK(s.bijective == p.bijective);
    CHECK(s.additive == p.additive);
    CHECK(s.vectors == p.vectors);
    CHECK(s.pairs == p.pairs);

    RingDescriptor f4 = RingDescriptor::finite_field(2, 2);
    CHECK(quotient_oracle(2, 2, 3, f4, Exec::Serial) ==
          quotient_oracle(2, 2, 3, f4, Exec::Parallel));
}

TEST_CASE("quotient routines reject non-field coefficients") {
    RingDescriptor z9 = RingDescriptor::integers_mod(9);
    CHECK_THROWS_AS(quotient_structure(3, 2, 1, z9, Exec::Serial), DomainError);
    CHECK_THROWS_AS(quotient_oracle(3, 2, 1, z9, Exec::Serial), DomainError);
    SmallRing sr = SmallRing::make(z9);
    CHECK(sr.char_p == 0);  // Z/9 has additive characteristic 9, not 3
    CHECK_THROWS_AS(sr_scalar_p_pow(sr, TruncationSet::full(3), 1, Coords{0, 0, 0}), DomainError);
}

TEST_CASE("scalar multiplication by p in characteristic p") {
    RingDescriptor f9 = RingDescriptor::finite_field(3, 2);
    auto t = TruncationSet::full(3);
    SmallRing sr = SmallRing::make(f9);
    enumerate_witt(t, f9, [&](const WittVector& w) {
        Coords x(w.coeffs.size());
        for (size_t i = 0; i < x.size(); ++i) x[i] = static_cast<std::uint16_t>(w.coeffs[i].code());
        WittVector triple = witt_scalar_mul(3, w);
        Coords fast = sr_scalar_p_pow(sr, t, 1, x);
        for (size_t i = 0; i < x.size(); ++i) CHECK(fast[i] == triple.coeffs[i].code());
    });
}
