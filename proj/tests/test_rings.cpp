#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include <nlohmann/json.hpp>

#include "wittk/rings.hpp"

using namespace wittk;

TEST_CASE("modular arithmetic reduces canonically") {
    RingDescriptor z7 = RingDescriptor::integers_mod(7);
    auto a = RingElement::from_integer(z7, 3);
    auto b = RingElement::from_integer(z7, 5);
    CHECK((a + b) == RingElement::from_integer(z7, 1));
    CHECK((a - b) == RingElement::from_integer(z7, 5));
    CHECK((-a) == RingElement::from_integer(z7, 4));
    CHECK(RingElement::from_integer(z7, -3) == RingElement::from_integer(z7, 4));
}

TEST_CASE("finite field arithmetic reduces by the modulus") {
    // F_4 = F_2[x]/(x^2+x+1): (x+1)^2 = x^2 + 1 = x
    RingDescriptor f4 = RingDescriptor::finite_field(2, 2, {1, 1, 1});
    auto xp1 = RingElement::ff_from_coeffs(f4, {1, 1});
    auto x = RingElement::ff_from_coeffs(f4, {0, 1});
    CHECK(xp1 * xp1 == x);
    CHECK(arith_pow(x, 3) == RingElement::one(f4));
}

TEST_CASE("pow handles the zero exponent") {
    RingDescriptor z9 = RingDescriptor::integers_mod(9);
    for (long v : {0L, 1L, 5L})
        CHECK(arith_pow(RingElement::from_integer(z9, v), 0) == RingElement::one(z9));
}

TEST_CASE("descriptor mismatch is refused") {
    auto a = RingElement::from_integer(RingDescriptor::integers_mod(7), 1);
    auto b = RingElement::from_integer(RingDescriptor::integers_mod(5), 1);
    CHECK_THROWS_AS(a + b, DescriptorMismatch);
}

TEST_CASE("divide_exact") {
    RingDescriptor z = RingDescriptor::integers();
    CHECK(divide_exact(RingElement::from_integer(z, 6), 3) == RingElement::from_integer(z, 2));
    CHECK_THROWS_AS(divide_exact(RingElement::from_integer(z, 1), 2), NonIntegral);

    RingDescriptor poly = RingDescriptor::multivar_poly(z, {"X1", "Y1"});
    PolyTerms t;
    t[Monomial{{{0, 1}, {1, 1}}}] = 2;  // 2*X1*Y1
    auto e = RingElement::poly_from_terms(poly, t);
    PolyTerms expect;
    expect[Monomial{{{0, 1}, {1, 1}}}] = 1;
    CHECK(divide_exact(e, 2) == RingElement::poly_from_terms(poly, expect));
    CHECK_THROWS_AS(divide_exact(e, 4), NonIntegral);
    // divide_exact(n*a, n) = a on samples
    std::mt19937_64 rng(3);
    for (int k = 0; k < 50; ++k) {
        long n = 1 + rng() % 20;
        auto a = RingElement::from_integer(z, static_cast<long>(rng() % 1000) - 500);
        CHECK(divide_exact(a * RingElement::from_integer(z, n), n) == a);
    }
}

TEST_CASE("p_valuation") {
    RingDescriptor z = RingDescriptor::integers();
    CHECK(*p_valuation(RingElement::from_integer(z, 12), 2) == 2);
    CHECK(*p_valuation(RingElement::from_integer(z, 18), 3) == 2);
    CHECK(!p_valuation(RingElement::from_integer(z, 0), 3).has_value());  // +infinity
    RingDescriptor z8 = RingDescriptor::integers_mod(8);
    CHECK(*p_valuation(RingElement::from_integer(z8, 4), 2) == 2);
    CHECK_THROWS_AS(p_valuation(RingElement::from_integer(RingDescriptor::integers_mod(6), 2), 2),
                    DomainError);
}

TEST_CASE("enumeration") {
    int n = 0;
    enumerate_ring(RingDescriptor::integers_mod(4), [&](const RingElement&) { ++n; });
    CHECK(n == 4);
    n = 0;
    enumerate_ring(RingDescriptor::finite_field(2, 2), [&](const RingElement&) { ++n; });
    CHECK(n == 4);
    CHECK_THROWS_AS(ring_cardinality_u64(RingDescriptor::integers()), DomainError);
    CHECK_THROWS_AS(ring_cardinality_u64(RingDescriptor::integers_mod(1 << 20), 1 << 10),
                    CapExceeded);
}

TEST_CASE("ring axioms hold on sampled triples") {
    std::mt19937_64 rng(17);
    std::vector<RingDescriptor> rings = {
        RingDescriptor::integers(), RingDescriptor::integers_mod(8),
        RingDescriptor::prime_field(5), RingDescriptor::finite_field(3, 2)};
    for (auto& ring : rings) {
        for (int k = 0; k < 60; ++k) {
            auto sample = [&] {
                if (ring.kind() == RingKind::Integers)
                    return RingElement::from_integer(ring, static_cast<long>(rng() % 41) - 20);
                return ring_decode(ring, rng() % ring.cardinality().convert_to<std::uint64_t>());
            };
            auto a = sample(), b = sample(), c = sample();
            CHECK((a + b) + c == a + (b + c));
            CHECK(a * (b + c) == a * b + a * c);
            CHECK(RingElement::one(ring) * a == a);
            CHECK(a * b == b * a);
        }
    }
}

TEST_CASE("frobenius is additive in characteristic p") {
    for (auto ring : {RingDescriptor::prime_field(3), RingDescriptor::finite_field(2, 3),
                      RingDescriptor::finite_field(5, 2)}) {
        const long p = ring.char_p();
        const std::uint64_t q = ring.cardinality().convert_to<std::uint64_t>();
        REQUIRE(q <= (1u << 12));
        for (std::uint64_t i = 0; i < q; ++i)
            for (std::uint64_t j = 0; j < q; ++j) {
                auto a = ring_decode(ring, i), b = ring_decode(ring, j);
                CHECK(arith_pow(a + b, p) == arith_pow(a, p) + arith_pow(b, p));
            }
    }
}

TEST_CASE("irreducibility checking") {
    CHECK(poly_is_irreducible_mod_p({1, 1, 1}, 2));        // x^2+x+1
    CHECK(!poly_is_irreducible_mod_p({1, 0, 1}, 2));       // x^2+1 = (x+1)^2
    CHECK(!poly_is_irreducible_mod_p({0, 1, 1}, 2));       // x(x+1)
    CHECK(poly_is_irreducible_mod_p({1, 1, 0, 0, 1}, 2));  // x^4+x+1
    CHECK(!poly_is_irreducible_mod_p({1, 0, 0, 0, 1}, 2));
    CHECK_THROWS_AS(RingDescriptor::finite_field(2, 2, {1, 0, 1}), DomainError);
    // default table entries are irreducible and stable
    CHECK(default_ff_modulus(2, 8) == default_ff_modulus(2, 8));
    CHECK(poly_is_irreducible_mod_p(default_ff_modulus(3, 4), 3));
}

TEST_CASE("ring descriptor JSON round trip") {
    using nlohmann::json;
    for (auto ring : {RingDescriptor::integers(), RingDescriptor::integers_mod(8),
                      RingDescriptor::finite_field(2, 2)}) {
        CHECK(RingDescriptor::from_json(ring.to_json()) == ring);
    }
    json j = json::parse(R"({"ring":"GF","p":2,"f":2,"modulus":[1,1,1]})");
    RingDescriptor gf = RingDescriptor::from_json(j);
    CHECK(gf.ff_p() == 2);
    CHECK(gf.ff_f() == 2);
    json zmod = json::parse(R"({"ring":"Zmod","m":8})");
    CHECK(RingDescriptor::from_json(zmod).modulus() == 8);
    CHECK(RingDescriptor::from_json(json::parse(R"({"ring":"Z"})")).kind() == RingKind::Integers);
}

TEST_CASE("multivariate polynomials stay canonical") {
    RingDescriptor z = RingDescriptor::integers();
    RingDescriptor poly = RingDescriptor::multivar_poly(z, {"x", "y"});
    PolyTerms t;
    t[Monomial{{{0, 2}}}] = 1;           // x^2
    t[Monomial{{{1, 1}}}] = 3;           // 3y
    t[Monomial{{{0, 1}, {1, 1}}}] = -1;  // -xy
    auto e = RingElement::poly_from_terms(poly, t);
    CHECK((e - e).is_zero());
    CHECK((e * RingElement::one(poly)) == e);
    auto sq = e * e;
    auto sq2 = (e + e) * e - e * e;
    CHECK(sq == sq2);
}
