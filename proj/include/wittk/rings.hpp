#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "wittk/bigint.hpp"
#include "wittk/errors.hpp"

namespace wittk {

enum class RingKind { Integers, IntegersMod, FiniteField, MultivarPoly };

class RingDescriptor;

namespace detail {
struct RingData {
    RingKind kind = RingKind::Integers;
    BigInt modulus;               // IntegersMod
    bool prime_modulus = false;   // IntegersMod with prime m (PrimeField)
    long p = 0;                   // FiniteField characteristic
    int f = 0;                    // FiniteField extension degree
    std::vector<int> ff_modulus;  // monic irreducible, coeffs ascending, size f+1
    std::shared_ptr<const RingData> base;  // MultivarPoly
    std::vector<std::string> vars;         // MultivarPoly variable names
};
}  // namespace detail

// Immutable value-semantics handle for a coefficient ring. Copies are cheap.
class RingDescriptor {
  public:
    RingDescriptor();  // Integers

    static RingDescriptor integers();
    static RingDescriptor integers_mod(const BigInt& m);
    // PrimeField(p); behaves identically to IntegersMod(p) with p verified prime.
    static RingDescriptor prime_field(long p);
    // Default modulus from the built-in table when `modulus` is empty.
    static RingDescriptor finite_field(long p, int f, std::vector<int> modulus = {});
    static RingDescriptor multivar_poly(const RingDescriptor& base,
                                        std::vector<std::string> vars);

    RingKind kind() const { return data_->kind; }
    const BigInt& modulus() const { return data_->modulus; }
    long char_p() const;  // characteristic when prime-power ring, else 0
    long ff_p() const { return data_->p; }
    int ff_f() const { return data_->f; }
    const std::vector<int>& ff_modulus() const { return data_->ff_modulus; }
    RingDescriptor poly_base() const;
    const std::vector<std::string>& poly_vars() const { return data_->vars; }

    bool is_finite() const;
    // Number of elements; requires is_finite().
    BigInt cardinality() const;
    bool operator==(const RingDescriptor& o) const;
    bool operator!=(const RingDescriptor& o) const { return !(*this == o); }

    std::string to_string() const;
    nlohmann::json to_json() const;
    static RingDescriptor from_json(const nlohmann::json& j);

  private:
    explicit RingDescriptor(std::shared_ptr<const detail::RingData> d)
        : data_(std::move(d)) {}
    std::shared_ptr<const detail::RingData> data_;
};

// One monomial of a multivariate polynomial: sorted (var index, exponent>0).
struct Monomial {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> factors;
    long total_degree() const;
    bool operator==(const Monomial& o) const { return factors == o.factors; }
};

// Total-degree-then-lex order.
struct MonomialCmp {
    bool operator()(const Monomial& a, const Monomial& b) const;
};

using PolyTerms = std::map<Monomial, BigInt, MonomialCmp>;

// Canonical payload of a ring element. Residues are reduced into [0, m);
// finite field elements have exactly f coefficients in [0, p); polynomials
// carry no zero coefficients.
class RingElement {
  public:
    RingElement() = default;

    static RingElement from_integer(const RingDescriptor& ring, const BigInt& v);
    static RingElement ff_from_coeffs(const RingDescriptor& ring, std::vector<int> coeffs);
    static RingElement poly_from_terms(const RingDescriptor& ring, PolyTerms terms);
    static RingElement zero(const RingDescriptor& ring);
    static RingElement one(const RingDescriptor& ring);

    const RingDescriptor& ring() const { return ring_; }
    bool is_zero() const;
    bool is_one() const;

    const BigInt& integer_value() const;          // Integers / IntegersMod
    const std::vector<int>& ff_coeffs() const;    // FiniteField
    const PolyTerms& poly_terms() const;          // MultivarPoly

    bool operator==(const RingElement& o) const;
    bool operator!=(const RingElement& o) const { return !(*this == o); }

    std::string to_string() const;
    nlohmann::json to_json() const;
    static RingElement from_json(const RingDescriptor& ring, const nlohmann::json& j);

    // Dense code in [0, cardinality) for finite rings; used for enumeration
    // and hashing. Inverse of ring_decode.
    std::uint64_t code() const;

  private:
    RingDescriptor ring_;
    std::variant<BigInt, std::vector<int>, PolyTerms> payload_;
};

enum class ArithOp { Add, Sub, Mul, Neg, Pow };

RingElement arith(ArithOp op, const RingElement& a, const RingElement& b);
RingElement arith_pow(const RingElement& a, const BigInt& exp);

inline RingElement operator+(const RingElement& a, const RingElement& b) {
    return arith(ArithOp::Add, a, b);
}
inline RingElement operator-(const RingElement& a, const RingElement& b) {
    return arith(ArithOp::Sub, a, b);
}
inline RingElement operator*(const RingElement& a, const RingElement& b) {
    return arith(ArithOp::Mul, a, b);
}
inline RingElement operator-(const RingElement& a) {
    return arith(ArithOp::Neg, a, a);
}

// q with n*q = a over a torsion-free ring; throws NonIntegral when some
// coefficient is not divisible by n.
RingElement divide_exact(const RingElement& a, const BigInt& n);

// Largest j with p^j | a (nullopt = +infinity for a = 0). Ring must be
// Integers or IntegersMod(p^M).
std::optional<long> p_valuation(const RingElement& a, long p);

// Random access enumeration of a finite ring: element #i under a fixed order.
std::uint64_t ring_cardinality_u64(const RingDescriptor& ring,
                                   std::uint64_t cap = (1ull << 24));
RingElement ring_decode(const RingDescriptor& ring, std::uint64_t index);

// Streams every element once; finite rings only, cardinality <= cap.
void enumerate_ring(const RingDescriptor& ring,
                    const std::function<void(const RingElement&)>& fn,
                    std::uint64_t cap = (1ull << 24));

// Deterministic irreducibility check by exhaustive root/factor search.
bool poly_is_irreducible_mod_p(const std::vector<int>& monic_coeffs, long p);
// Built-in default modulus table entry for GF(p^f), p^f <= 2^20.
std::vector<int> default_ff_modulus(long p, int f);

}  // namespace wittk
