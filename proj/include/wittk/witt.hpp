#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "wittk/rings.hpp"
#include "wittk/truncation.hpp"

namespace wittk {

// Witt vector over a truncation set: one coefficient per index.
struct WittVector {
    TruncationSet trunc;
    RingDescriptor ring;
    std::vector<RingElement> coeffs;  // aligned with trunc.indices()

    const RingElement& at(int n) const { return coeffs[trunc.position(n)]; }
    bool operator==(const WittVector& o) const;
    bool operator!=(const WittVector& o) const { return !(*this == o); }

    nlohmann::json to_json() const;
    static WittVector from_json(const nlohmann::json& j);
    std::string to_string() const;
    // dense packing of coefficient codes; finite coefficient rings only
    std::vector<std::uint64_t> code() const;
};

struct GhostVector {
    TruncationSet trunc;
    RingDescriptor ring;
    std::vector<RingElement> components;

    const RingElement& at(int n) const { return components[trunc.position(n)]; }
    bool operator==(const GhostVector& o) const;

    nlohmann::json to_json() const;
    std::string to_string() const;
};

WittVector witt_zero(const TruncationSet& t, const RingDescriptor& ring);
WittVector witt_one(const TruncationSet& t, const RingDescriptor& ring);

// w_n = sum_{d | n} d * x_d^{n/d}
GhostVector ghost(const WittVector& w);

// Unique Witt vector with the given ghost components, solved index-by-index
// in divisor order with divide_exact. Torsion-free coefficient rings only;
// throws NonIntegral when the ghost vector is not integral.
WittVector from_ghost(const GhostVector& g);

enum class WittOp { Sum, Product, Negation };

// The universal integer polynomials P_n in X_d, Y_d (d | n) with
// ghost(P(X,Y)) = ghost(X) * ghost(Y) componentwise. Exposed as multivariate
// polynomial ring elements; keyed and memoized per (n, op) with a persisted
// disk cache (see poly cache notes in witt.cpp).
std::map<int, RingElement> universal_polys(const TruncationSet& t, WittOp op);
// Universal Frobenius polynomials: ghost_m(F_n w) = ghost_{nm}(w).
std::map<int, RingElement> universal_frobenius_polys(const TruncationSet& t, int n);

// Addition and multiplication via the cached universal polynomials. Over
// torsion rings this is the only route; the ghost route exists separately as
// an oracle over torsion-free rings.
WittVector witt_add(const WittVector& a, const WittVector& b);
WittVector witt_mul(const WittVector& a, const WittVector& b);
WittVector witt_neg(const WittVector& a);
WittVector witt_sub(const WittVector& a, const WittVector& b);
// n * w by double-and-add; n >= 0.
WittVector witt_scalar_mul(const BigInt& n, const WittVector& w);

// y_{nd} = x_d, other coordinates zero. The caller supplies the target set T
// with nS (subset of) T; additive map.
WittVector verschiebung(int n, const WittVector& w, const TruncationSet& target);
// F_n : W_T -> W_{T/n}, characterized by ghost_m(F_n w) = ghost_{nm}(w).
WittVector frobenius(int n, const WittVector& w);
// [a] = (a, 0, 0, ...)
WittVector teichmuller(const RingElement& a, const TruncationSet& t);
// Forget coefficients outside T'; T' must be a divisor-closed subset.
WittVector restriction(const WittVector& w, const TruncationSet& sub);

// Random-access enumeration of W_T(R) for finite R.
std::uint64_t witt_count(const TruncationSet& t, const RingDescriptor& ring,
                         std::uint64_t cap = (1ull << 22));
WittVector witt_decode(const TruncationSet& t, const RingDescriptor& ring,
                       std::uint64_t index);
void enumerate_witt(const TruncationSet& t, const RingDescriptor& ring,
                    const std::function<void(const WittVector&)>& fn,
                    std::uint64_t cap = (1ull << 22));

// Location of the persisted universal-polynomial cache (overridable through
// the WITTK_POLY_CACHE environment variable); empty string disables disk use.
std::string poly_cache_path();

// Raw term list of a universal polynomial: coefficient and (var code, exp)
// pairs with X_d encoded as 2d and Y_d as 2d+1. Divisor-closure makes the
// polynomial for index n independent of the ambient truncation set, so the
// cache keys on (op, n) alone. References stay valid for the process
// lifetime.
struct RawTerm {
    BigInt coef;
    std::vector<std::pair<int, int>> vars;
};
using RawPoly = std::vector<RawTerm>;

const RawPoly& universal_terms(WittOp op, int n);
const RawPoly& frobenius_terms(int n, int m);

// Plain-integer fast path over Z for the enumeration kernels: coefficients
// as bare BigInt vectors aligned with the truncation set, same universal
// polynomials underneath. Cross-checked against the RingElement route in the
// unit tests.
namespace zfast {
std::vector<BigInt> witt_add(const TruncationSet& t, const std::vector<BigInt>& a,
                             const std::vector<BigInt>& b);
std::vector<BigInt> witt_mul(const TruncationSet& t, const std::vector<BigInt>& a,
                             const std::vector<BigInt>& b);
std::vector<BigInt> ghost(const TruncationSet& t, const std::vector<BigInt>& x);
std::vector<BigInt> frobenius(const TruncationSet& t, int n, const std::vector<BigInt>& x);
std::vector<BigInt> verschiebung(const TruncationSet& t, int n, const std::vector<BigInt>& x,
                                 const TruncationSet& target);
}  // namespace zfast

}  // namespace wittk
