#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <thread>
#include <random>
#include <set>

#include <nlohmann/json.hpp>

#include "wittk/selfcheck.hpp"
#include "wittk/smallring.hpp"
#include "wittk/witt.hpp"

using namespace wittk;

namespace {

RingDescriptor Z() { return RingDescriptor::integers(); }

WittVector zvec(const TruncationSet& t, std::vector<long> coeffs) {
    WittVector w = witt_zero(t, Z());
    for (size_t i = 0; i < coeffs.size(); ++i)
        w.coeffs[i] = RingElement::from_integer(Z(), coeffs[i]);
    return w;
}

GhostVector gvec(const TruncationSet& t, std::vector<long> comps) {
    GhostVector g{t, Z(), {}};
    for (long c : comps) g.components.push_back(RingElement::from_integer(Z(), c));
    return g;
}

}  // namespace

TEST_CASE("truncation sets") {
    CHECK(TruncationSet::full(4).indices() == std::vector<int>{1, 2, 3, 4});
    CHECK(TruncationSet::p_typical(2, 3).indices() == std::vector<int>{1, 2, 4});
    CHECK(TruncationSet::full(0).empty());
    CHECK_THROWS_AS(TruncationSet::from_indices({1, 4}), DomainError);  // not divisor-closed
    CHECK_THROWS_AS(TruncationSet::full(25), CapExceeded);
    CHECK_THROWS_AS(TruncationSet::p_typical(2, 9), CapExceeded);
    CHECK(TruncationSet::from_indices({1, 2, 4, 8, 16, 32}).indices().size() == 6);  // 2-chain
    CHECK(TruncationSet::full(12).divided(2).indices() == TruncationSet::full(6).indices());
}

TEST_CASE("ghost of teichmuller and verschiebung") {
    auto t3 = TruncationSet::full(3);
    auto g = ghost(teichmuller(RingElement::from_integer(Z(), 2), t3));
    CHECK(g == gvec(t3, {2, 4, 8}));

    auto t4 = TruncationSet::full(4);
    WittVector v2 = verschiebung(2, zvec(TruncationSet::full(2), {1, 0}), t4);
    CHECK(v2 == zvec(t4, {0, 1, 0, 0}));
    CHECK(ghost(v2) == gvec(t4, {0, 2, 0, 2}));

    CHECK(ghost(witt_zero(t4, Z())) == gvec(t4, {0, 0, 0, 0}));
}

TEST_CASE("from_ghost solves recursively and rejects non-integral input") {
    auto t3 = TruncationSet::full(3);
    CHECK(from_ghost(gvec(t3, {2, 4, 8})) == zvec(t3, {2, 0, 0}));
    auto t2 = TruncationSet::full(2);
    CHECK(from_ghost(gvec(t2, {1, 1})) == zvec(t2, {1, 0}));
    CHECK_THROWS_AS(from_ghost(gvec(t2, {0, 1})), NonIntegral);
}

TEST_CASE("universal polynomials match the hand-computed small cases") {
    auto polys = universal_polys(TruncationSet::full(2), WittOp::Sum);
    // S1 = X1 + Y1, S2 = X2 + Y2 - X1*Y1
    CHECK(polys.at(1).to_string() == "X1 + Y1");
    CHECK(polys.at(2).to_string() == "X2 + Y2 - X1*Y1");
    auto prod = universal_polys(TruncationSet::full(1), WittOp::Product);
    CHECK(prod.at(1).to_string() == "X1*Y1");
    auto ptyp = universal_polys(TruncationSet::p_typical(2, 2), WittOp::Sum);
    CHECK(ptyp.at(2).to_string() == "X2 + Y2 - X1*Y1");
}

TEST_CASE("witt addition and multiplication over Z") {
    auto t2 = TruncationSet::full(2);
    CHECK(witt_add(zvec(t2, {1, 0}), zvec(t2, {1, 0})) == zvec(t2, {2, -1}));
    auto t4 = TruncationSet::full(4);
    WittVector w = zvec(t4, {3, -1, 2, 5});
    CHECK(witt_add(w, witt_zero(t4, Z())) == w);
    CHECK(witt_mul(w, witt_one(t4, Z())) == w);
    CHECK(witt_add(w, witt_neg(w)) == witt_zero(t4, Z()));
}

TEST_CASE("teichmuller is multiplicative over F_4") {
    RingDescriptor f4 = RingDescriptor::finite_field(2, 2);
    auto t4 = TruncationSet::full(4);
    for (std::uint64_t i = 0; i < 4; ++i)
        for (std::uint64_t j = 0; j < 4; ++j) {
            auto a = ring_decode(f4, i), b = ring_decode(f4, j);
            CHECK(witt_mul(teichmuller(a, t4), teichmuller(b, t4)) == teichmuller(a * b, t4));
        }
}

TEST_CASE("frobenius examples") {
    auto t4 = TruncationSet::full(4);
    auto t2 = TruncationSet::full(2);
    // F_2([a]) = [a^2]
    for (long a : {-2L, 0L, 3L}) {
        WittVector lhs = frobenius(2, teichmuller(RingElement::from_integer(Z(), a), t4));
        CHECK(lhs == teichmuller(RingElement::from_integer(Z(), a * a), t2));
    }
    // F_2(V_2([1])) = 2 [1] = (2, -1)
    WittVector v = verschiebung(2, zvec(t2, {1, 0}), t4);
    CHECK(frobenius(2, v) == zvec(t2, {2, -1}));
    // F_1 and V_1 are the identity
    WittVector w = zvec(t4, {1, 2, 3, 4});
    CHECK(frobenius(1, w) == w);
    CHECK(verschiebung(1, w, t4) == w);
}

TEST_CASE("verschiebung errors when the target set is too small") {
    CHECK_THROWS_AS(verschiebung(3, zvec(TruncationSet::full(2), {1, 1}), TruncationSet::full(4)),
                    DomainError);
}

TEST_CASE("V_3 image in W_full(3)(F_2) has exactly two elements") {
    RingDescriptor f2 = RingDescriptor::prime_field(2);
    auto t1 = TruncationSet::full(1);
    auto t3 = TruncationSet::full(3);
    std::set<std::vector<std::uint64_t>> image;
    enumerate_witt(t1, f2, [&](const WittVector& w) {
        image.insert(verschiebung(3, w, t3).code());
    });
    CHECK(image.size() == 2);
}

TEST_CASE("restriction") {
    auto t4 = TruncationSet::full(4);
    WittVector w = zvec(t4, {1, 2, 3, 4});
    CHECK(restriction(w, TruncationSet::full(2)) == zvec(TruncationSet::full(2), {1, 2}));
    CHECK(restriction(w, TruncationSet::full(0)).coeffs.empty());
    auto a = RingElement::from_integer(Z(), 7);
    CHECK(restriction(teichmuller(a, t4), TruncationSet::full(2)) ==
          teichmuller(a, TruncationSet::full(2)));
    CHECK_THROWS_AS(restriction(zvec(TruncationSet::full(2), {1, 2}), t4), DomainError);
}

TEST_CASE("ghost is a ring homomorphism on random Z vectors") {
    std::mt19937_64 rng(5);
    auto t = TruncationSet::full(10);
    for (int k = 0; k < 40; ++k) {
        std::vector<long> ca(10), cb(10);
        for (auto& c : ca) c = static_cast<long>(rng() % 19) - 9;
        for (auto& c : cb) c = static_cast<long>(rng() % 19) - 9;
        WittVector a = zvec(t, ca), b = zvec(t, cb);
        GhostVector ga = ghost(a), gb = ghost(b);
        GhostVector gs = ghost(witt_add(a, b)), gp = ghost(witt_mul(a, b));
        for (int n : t.indices()) {
            CHECK(gs.at(n) == ga.at(n) + gb.at(n));
            CHECK(gp.at(n) == ga.at(n) * gb.at(n));
        }
        CHECK(from_ghost(ga) == a);
    }
}

TEST_CASE("operator identities: FnVn = n, projection formula, commutation") {
    std::mt19937_64 rng(11);
    auto t6 = TruncationSet::full(6);
    auto t3 = TruncationSet::full(3);
    for (int k = 0; k < 25; ++k) {
        std::vector<long> cx(6), cy(3);
        for (auto& c : cx) c = static_cast<long>(rng() % 7) - 3;
        for (auto& c : cy) c = static_cast<long>(rng() % 7) - 3;
        WittVector x = zvec(t6, cx);
        WittVector y = zvec(t3, cy);
        for (int n : {2, 3}) {
            WittVector vx = verschiebung(n, x, TruncationSet::full(6 * n));
            CHECK(frobenius(n, vx) == witt_scalar_mul(n, x));
        }
        CHECK(witt_mul(x, verschiebung(2, y, t6)) ==
              verschiebung(2, witt_mul(frobenius(2, x), y), t6));
        CHECK(frobenius(2, verschiebung(3, x, TruncationSet::full(18))) ==
              verschiebung(3, frobenius(2, x), TruncationSet::full(9)));
    }
}

TEST_CASE("enumeration counts and caps") {
    RingDescriptor f3 = RingDescriptor::prime_field(3);
    CHECK(witt_count(TruncationSet::full(4), f3) == 81);
    int n = 0;
    enumerate_witt(TruncationSet::full(3), RingDescriptor::prime_field(2),
                   [&](const WittVector&) { ++n; });
    CHECK(n == 8);
    CHECK_THROWS_AS(witt_count(TruncationSet::full(8), RingDescriptor::integers_mod(1 << 12)),
                    CapExceeded);
}

TEST_CASE("zfast path agrees with the element route") {
    std::mt19937_64 rng(23);
    auto t = TruncationSet::full(8);
    for (int k = 0; k < 20; ++k) {
        std::vector<BigInt> a(8), b(8);
        std::vector<long> la(8), lb(8);
        for (int i = 0; i < 8; ++i) {
            la[i] = static_cast<long>(rng() % 15) - 7;
            lb[i] = static_cast<long>(rng() % 15) - 7;
            a[i] = la[i];
            b[i] = lb[i];
        }
        auto fast = zfast::witt_add(t, a, b);
        WittVector slow = witt_add(zvec(t, la), zvec(t, lb));
        for (int i = 0; i < 8; ++i) CHECK(fast[i] == slow.coeffs[i].integer_value());
        auto fastm = zfast::witt_mul(t, a, b);
        WittVector slowm = witt_mul(zvec(t, la), zvec(t, lb));
        for (int i = 0; i < 8; ++i) CHECK(fastm[i] == slowm.coeffs[i].integer_value());
        auto g = zfast::ghost(t, a);
        GhostVector gs = ghost(zvec(t, la));
        for (int i = 0; i < 8; ++i) CHECK(g[i] == gs.components[i].integer_value());
    }
}

TEST_CASE("small-ring evaluator agrees with the element route") {
    for (auto ring : {RingDescriptor::prime_field(3), RingDescriptor::finite_field(2, 2),
                      RingDescriptor::integers_mod(9)}) {
        SmallRing sr = SmallRing::make(ring);
        auto t = TruncationSet::full(5);
        SrEvaluator ev(sr, t);
        std::mt19937_64 rng(31);
        for (int k = 0; k < 40; ++k) {
            std::uint64_t total = witt_count(t, ring);
            std::uint64_t i = rng() % total, j = rng() % total;
            WittVector a = witt_decode(t, ring, i), b = witt_decode(t, ring, j);
            Coords ca = sr_decode(sr, t.size(), i), cb = sr_decode(sr, t.size(), j);
            auto to_coords = [&](const std::vector<std::uint64_t>& code) {
                Coords c(code.size());
                for (size_t q = 0; q < c.size(); ++q) c[q] = static_cast<std::uint16_t>(code[q]);
                return c;
            };
            Coords out;
            ev.add(ca, cb, out);
            CHECK(out == to_coords(witt_add(a, b).code()));
            ev.mul(ca, cb, out);
            CHECK(out == to_coords(witt_mul(a, b).code()));
            ev.frobenius(2, ca, out);
            CHECK(out == to_coords(frobenius(2, a).code()));
        }
    }
}

TEST_CASE("witt vector JSON round trip") {
    auto t = TruncationSet::full(4);
    WittVector w = zvec(t, {1, -2, 3, 0});
    CHECK(WittVector::from_json(w.to_json()) == w);
    RingDescriptor f4 = RingDescriptor::finite_field(2, 2);
    WittVector wf = witt_zero(TruncationSet::full(2), f4);
    wf.coeffs[0] = RingElement::ff_from_coeffs(f4, {1, 1});
    CHECK(WittVector::from_json(wf.to_json()) == wf);
}

TEST_CASE("empty truncation set gives the zero ring") {
    auto t0 = TruncationSet::full(0);
    WittVector a = witt_zero(t0, RingDescriptor::integers());
    CHECK(witt_add(a, a) == a);
    CHECK(witt_mul(a, a) == a);
    CHECK(ghost(a).components.empty());
    CHECK(witt_count(t0, RingDescriptor::prime_field(2)) == 1);
}

TEST_CASE("arithmetic over torsion rings matches reduced integer lifts") {
    // Z/4 is not p-local-free: the universal route must match lift-then-reduce
    RingDescriptor z4 = RingDescriptor::integers_mod(4);
    RingDescriptor z = RingDescriptor::integers();
    auto t = TruncationSet::full(5);
    std::mt19937_64 rng(41);
    for (int k = 0; k < 100; ++k) {
        std::uint64_t total = witt_count(t, z4);
        WittVector a = witt_decode(t, z4, rng() % total);
        WittVector b = witt_decode(t, z4, rng() % total);
        auto lift = [&](const WittVector& v) {
            WittVector out = witt_zero(t, z);
            for (size_t i = 0; i < v.coeffs.size(); ++i)
                out.coeffs[i] = RingElement::from_integer(z, v.coeffs[i].integer_value());
            return out;
        };
        auto reduce = [&](const WittVector& v) {
            WittVector out = witt_zero(t, z4);
            for (size_t i = 0; i < v.coeffs.size(); ++i)
                out.coeffs[i] = RingElement::from_integer(z4, v.coeffs[i].integer_value());
            return out;
        };
        CHECK(witt_add(a, b) == reduce(witt_add(lift(a), lift(b))));
        CHECK(witt_mul(a, b) == reduce(witt_mul(lift(a), lift(b))));
    }
}

TEST_CASE("ghost_hom_scan serial equals parallel") {
    auto s = ghost_hom_scan(3, 3, Exec::Serial);
    auto p = ghost_hom_scan(3, 3, Exec::Parallel);
    CHECK(s.pairs == p.pairs);
    CHECK(s.failures == p.failures);
    CHECK(s.failures == 0);
}

TEST_CASE("from_ghost works over polynomials in Z") {
    RingDescriptor poly = RingDescriptor::multivar_poly(RingDescriptor::integers(), {"X"});
    PolyTerms xt;
    xt[Monomial{{{0, 1}}}] = 1;
    RingElement x = RingElement::poly_from_terms(poly, xt);
    auto t3 = TruncationSet::full(3);
    GhostVector g{t3, poly, {x, x * x, x * x * x}};
    CHECK(from_ghost(g) == teichmuller(x, t3));
    GhostVector bad{t3, poly, {x, x, x}};
    CHECK_THROWS_AS(from_ghost(bad), NonIntegral);
}

TEST_CASE("poly cache persists to disk") {
    universal_polys(TruncationSet::full(3), WittOp::Sum);
    std::ifstream in(poly_cache_path());
    CHECK(in.good());
}

TEST_CASE("universal polynomial memo tolerates concurrent fills and reads") {
    std::vector<std::thread> workers;
    std::vector<std::string> results(4);
    for (int t = 0; t < 4; ++t)
        workers.emplace_back([&, t] {
            auto polys = universal_polys(TruncationSet::full(9 + t % 2), WittOp::Product);
            results[t] = polys.at(9).to_string();
        });
    for (auto& w : workers) w.join();
    CHECK(results[0] == results[1]);
    CHECK(results[2] == results[3]);
    CHECK(results[0] == results[2]);
}
