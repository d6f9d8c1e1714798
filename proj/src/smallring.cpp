#include "wittk/smallring.hpp"

#include <map>
#include <mutex>
#include <shared_mutex>

#include "wittk/witt.hpp"

namespace wittk {

std::uint16_t SmallRing::pow(std::uint16_t a, std::uint64_t e) const {
    std::uint16_t r = from_bigint(1);
    std::uint16_t base = a;
    while (e) {
        if (e & 1) r = mul(r, base);
        base = mul(base, base);
        e >>= 1;
    }
    return r;
}

std::uint16_t SmallRing::from_bigint(const BigInt& v) const {
    return static_cast<std::uint16_t>(RingElement::from_integer(desc, v).code());
}

SmallRing SmallRing::make(const RingDescriptor& desc, std::uint32_t max_q) {
    SmallRing r;
    r.desc = desc;
    BigInt card = desc.cardinality();
    if (card > max_q) throw CapExceeded("SmallRing: ring too large to tabulate");
    r.q = card.convert_to<std::uint32_t>();
    // additive characteristic: the scalar Frobenius rule needs p * 1 = 0
    // for a prime p (Z/p^2 has residue characteristic p but p * 1 != 0)
    r.char_p = desc.char_p();
    if (r.char_p != 0 &&
        (!is_prime_u64(static_cast<std::uint64_t>(r.char_p)) ||
         !RingElement::from_integer(desc, r.char_p).is_zero()))
        r.char_p = 0;
    r.add_t.resize(static_cast<std::size_t>(r.q) * r.q);
    r.mul_t.resize(static_cast<std::size_t>(r.q) * r.q);
    std::vector<RingElement> elems;
    elems.reserve(r.q);
    for (std::uint32_t i = 0; i < r.q; ++i) elems.push_back(ring_decode(desc, i));
    for (std::uint32_t i = 0; i < r.q; ++i)
        for (std::uint32_t j = 0; j < r.q; ++j) {
            r.add_t[i * r.q + j] = static_cast<std::uint16_t>((elems[i] + elems[j]).code());
            r.mul_t[i * r.q + j] = static_cast<std::uint16_t>((elems[i] * elems[j]).code());
        }
    return r;
}

namespace {

// Universal polynomial with coefficients folded into ring codes; zero terms
// dropped (over F_2 that is about half of them).
struct CompiledPoly {
    struct Term {
        std::uint16_t coef;
        std::vector<std::pair<int, int>> vars;
    };
    std::vector<Term> terms;
};

CompiledPoly compile(const RawPoly& poly, const SmallRing& r) {
    CompiledPoly out;
    const std::uint16_t zero = r.from_bigint(0);
    for (auto& t : poly) {
        std::uint16_t c = r.from_bigint(t.coef);
        if (c == zero) continue;
        out.terms.push_back({c, t.vars});
    }
    return out;
}

const CompiledPoly& compiled(const std::string& key, const RawPoly& poly, const SmallRing& r) {
    static std::shared_mutex mu;
    static std::map<std::string, CompiledPoly> cache;
    std::string full_key = key + "@" + r.desc.to_string();
    {
        std::shared_lock lock(mu);
        auto it = cache.find(full_key);
        if (it != cache.end()) return it->second;
    }
    CompiledPoly fresh = compile(poly, r);
    std::unique_lock lock(mu);
    return cache.emplace(full_key, std::move(fresh)).first->second;
}

std::uint16_t eval(const CompiledPoly& p, const SmallRing& r, const std::uint16_t* inputs) {
    std::uint16_t acc = r.from_bigint(0);
    for (auto& t : p.terms) {
        std::uint16_t term = t.coef;
        for (auto& [v, e] : t.vars) term = r.mul(term, r.pow(inputs[v], e));
        acc = r.add(acc, term);
    }
    return acc;
}

}  // namespace

Coords sr_witt_add(const SmallRing& r, const TruncationSet& t, const Coords& a, const Coords& b) {
    std::vector<std::uint16_t> inputs(2 * t.max_index() + 2, 0);
    const auto& idx = t.indices();
    for (size_t i = 0; i < idx.size(); ++i) {
        inputs[2 * idx[i]] = a[i];
        inputs[2 * idx[i] + 1] = b[i];
    }
    Coords out(t.size());
    for (size_t i = 0; i < idx.size(); ++i)
        out[i] = eval(compiled("S:" + std::to_string(idx[i]), universal_terms(WittOp::Sum, idx[i]), r),
                      r, inputs.data());
    return out;
}

Coords sr_witt_mul(const SmallRing& r, const TruncationSet& t, const Coords& a, const Coords& b) {
    std::vector<std::uint16_t> inputs(2 * t.max_index() + 2, 0);
    const auto& idx = t.indices();
    for (size_t i = 0; i < idx.size(); ++i) {
        inputs[2 * idx[i]] = a[i];
        inputs[2 * idx[i] + 1] = b[i];
    }
    Coords out(t.size());
    for (size_t i = 0; i < idx.size(); ++i)
        out[i] = eval(compiled("P:" + std::to_string(idx[i]), universal_terms(WittOp::Product, idx[i]), r),
                      r, inputs.data());
    return out;
}

Coords sr_frobenius(const SmallRing& r, const TruncationSet& t, int n, const Coords& x) {
    std::vector<std::uint16_t> inputs(2 * t.max_index() + 2, 0);
    const auto& idx = t.indices();
    for (size_t i = 0; i < idx.size(); ++i) inputs[2 * idx[i]] = x[i];
    TruncationSet target = t.divided(n);
    Coords out(target.size());
    const auto& tidx = target.indices();
    for (size_t i = 0; i < tidx.size(); ++i)
        out[i] = eval(compiled("F:" + std::to_string(n) + ":" + std::to_string(tidx[i]),
                               frobenius_terms(n, tidx[i]), r),
                      r, inputs.data());
    return out;
}

Coords sr_verschiebung(const TruncationSet& t, int n, const Coords& x, const TruncationSet& target) {
    if (!t.scaled(n).is_subset_of(target))
        throw DomainError("sr_verschiebung: target does not contain n*S");
    Coords out(target.size(), 0);
    const auto& idx = t.indices();
    for (size_t i = 0; i < idx.size(); ++i) out[target.position(n * idx[i])] = x[i];
    return out;
}

Coords sr_scalar_p_pow(const SmallRing& r, const TruncationSet& t, int k, const Coords& x) {
    if (r.char_p == 0) throw DomainError("sr_scalar_p_pow needs prime characteristic");
    if (k == 0) return x;
    std::uint64_t pk = 1;
    for (int i = 0; i < k; ++i) pk *= static_cast<std::uint64_t>(r.char_p);
    const auto& idx = t.indices();
    Coords out(t.size(), 0);
    for (size_t i = 0; i < idx.size(); ++i) {
        if (idx[i] % static_cast<long>(pk)) continue;
        out[i] = r.pow(x[t.position(idx[i] / static_cast<int>(pk))], pk);
    }
    return out;
}

// ---------------------------------------------------------------------------
// SrEvaluator

SrEvaluator::Stream SrEvaluator::flatten(const RawPoly& terms, const TruncationSet& source) const {
    // slots: a-coordinates first, then b-coordinates
    Stream s;
    const std::uint16_t zero = r_->from_bigint(0);
    for (auto& t : terms) {
        std::uint16_t c = r_->from_bigint(t.coef);
        if (c == zero) continue;
        s.push_back(c);
        s.push_back(static_cast<std::uint32_t>(t.vars.size()));
        for (auto& [v, e] : t.vars) {
            int d = v / 2;
            std::uint32_t slot = static_cast<std::uint32_t>(source.position(d));
            if (v % 2) slot += static_cast<std::uint32_t>(source.size());
            s.push_back(slot);
            s.push_back(static_cast<std::uint32_t>(e));
        }
    }
    return s;
}

std::uint16_t SrEvaluator::eval(const Stream& s, const std::uint16_t* slots) const {
    const std::uint16_t zero = r_->from_bigint(0);
    std::uint16_t acc = zero;
    std::size_t i = 0;
    while (i < s.size()) {
        std::uint16_t term = static_cast<std::uint16_t>(s[i++]);
        std::uint32_t nvars = s[i++];
        for (std::uint32_t k = 0; k < nvars; ++k) {
            std::uint16_t base = slots[s[i]];
            std::uint32_t e = s[i + 1];
            i += 2;
            std::uint16_t pw = base;
            for (std::uint32_t j = 1; j < e; ++j) pw = r_->mul(pw, base);
            term = r_->mul(term, pw);
        }
        acc = r_->add(acc, term);
    }
    return acc;
}

SrEvaluator::SrEvaluator(const SmallRing& r, const TruncationSet& t) : r_(&r), t_(t) {
    for (int n : t.indices()) {
        sum_.push_back(flatten(universal_terms(WittOp::Sum, n), t));
        prod_.push_back(flatten(universal_terms(WittOp::Product, n), t));
    }
    // Frobenius streams for every index that divides some element of t
    for (int n : t.indices()) {
        if (n == 0) continue;
        TruncationSet target = t.divided(n);
        if (target.empty()) continue;
        std::vector<Stream> streams;
        for (int m : target.indices()) streams.push_back(flatten(frobenius_terms(n, m), t));
        frob_index_.push_back(n);
        frob_.push_back({target, std::move(streams)});
    }
    scratch_.assign(2 * t.size() + 2, 0);
}

void SrEvaluator::add(const Coords& a, const Coords& b, Coords& out) {
    const std::size_t len = t_.size();
    for (std::size_t i = 0; i < len; ++i) {
        scratch_[i] = a[i];
        scratch_[len + i] = b[i];
    }
    out.resize(len);
    for (std::size_t i = 0; i < len; ++i) out[i] = eval(sum_[i], scratch_.data());
}

void SrEvaluator::mul(const Coords& a, const Coords& b, Coords& out) {
    const std::size_t len = t_.size();
    for (std::size_t i = 0; i < len; ++i) {
        scratch_[i] = a[i];
        scratch_[len + i] = b[i];
    }
    out.resize(len);
    for (std::size_t i = 0; i < len; ++i) out[i] = eval(prod_[i], scratch_.data());
}

void SrEvaluator::frobenius(int n, const Coords& x, Coords& out) {
    const std::size_t len = t_.size();
    for (std::size_t i = 0; i < len; ++i) scratch_[i] = x[i];
    for (std::size_t k = 0; k < frob_index_.size(); ++k) {
        if (frob_index_[k] != n) continue;
        auto& [target, streams] = frob_[k];
        out.resize(streams.size());
        for (std::size_t i = 0; i < streams.size(); ++i) out[i] = eval(streams[i], scratch_.data());
        return;
    }
    throw DomainError("SrEvaluator: frobenius index not prepared");
}

std::uint64_t sr_encode(const SmallRing& r, const Coords& c) {
    std::uint64_t v = 0;
    for (size_t i = c.size(); i-- > 0;) v = v * r.q + c[i];
    return v;
}

Coords sr_decode(const SmallRing& r, std::size_t len, std::uint64_t index) {
    Coords c(len);
    for (size_t i = 0; i < len; ++i) {
        c[i] = static_cast<std::uint16_t>(index % r.q);
        index /= r.q;
    }
    return c;
}

}  // namespace wittk
