#pragma once

#include <cstdint>
#include <vector>

#include "wittk/rings.hpp"
#include "wittk/truncation.hpp"
#include "wittk/witt.hpp"

namespace wittk {

// Table-compiled arithmetic for a small finite ring. Element codes agree
// with RingElement::code()/ring_decode, so coordinate arrays interconvert
// with WittVector freely. This is the data layer of the enumeration kernels;
// the generic RingElement route stays as the reference implementation.
struct SmallRing {
    RingDescriptor desc;
    std::uint32_t q = 0;
    long char_p = 0;  // characteristic when that is a prime, else 0
    std::vector<std::uint16_t> add_t, mul_t;

    std::uint16_t add(std::uint16_t a, std::uint16_t b) const { return add_t[a * q + b]; }
    std::uint16_t mul(std::uint16_t a, std::uint16_t b) const { return mul_t[a * q + b]; }
    std::uint16_t pow(std::uint16_t a, std::uint64_t e) const;
    std::uint16_t from_bigint(const BigInt& v) const;

    static SmallRing make(const RingDescriptor& desc, std::uint32_t max_q = 4096);
};

using Coords = std::vector<std::uint16_t>;

// Witt operations on raw coordinate arrays aligned with the truncation set.
Coords sr_witt_add(const SmallRing& r, const TruncationSet& t, const Coords& a, const Coords& b);
Coords sr_witt_mul(const SmallRing& r, const TruncationSet& t, const Coords& a, const Coords& b);
Coords sr_frobenius(const SmallRing& r, const TruncationSet& t, int n, const Coords& x);
Coords sr_verschiebung(const TruncationSet& t, int n, const Coords& x, const TruncationSet& target);

// (p^k) * x over characteristic-p coefficients: (p^k x)_m = x_{m/p^k}^{p^k},
// zero elsewhere (p = V_p F_p and F_p is the coefficientwise Frobenius in
// characteristic p). Unit tests pin this against the universal-polynomial
// route.
Coords sr_scalar_p_pow(const SmallRing& r, const TruncationSet& t, int k, const Coords& x);

std::uint64_t sr_encode(const SmallRing& r, const Coords& c);
Coords sr_decode(const SmallRing& r, std::size_t len, std::uint64_t index);

// Lookup-free evaluator for the hot enumeration loops: universal terms are
// flattened once per (ring, truncation) with variables resolved to slots in
// a combined [a | b] coordinate array. Not thread-shared; create one per
// worker.
class SrEvaluator {
  public:
    SrEvaluator(const SmallRing& r, const TruncationSet& t);

    void add(const Coords& a, const Coords& b, Coords& out);
    void mul(const Coords& a, const Coords& b, Coords& out);
    // output aligned with t.divided(n)
    void frobenius(int n, const Coords& x, Coords& out);

  private:
    // stream per output coordinate: [coef, nvars, slot, exp, slot, exp, ...]
    using Stream = std::vector<std::uint32_t>;
    Stream flatten(const RawPoly& terms, const TruncationSet& source) const;
    std::uint16_t eval(const Stream& s, const std::uint16_t* slots) const;

    const SmallRing* r_;
    TruncationSet t_;
    std::vector<Stream> sum_, prod_;
    std::vector<std::pair<TruncationSet, std::vector<Stream>>> frob_;  // by n
    std::vector<int> frob_index_;
    std::vector<std::uint16_t> scratch_;
};

}  // namespace wittk
