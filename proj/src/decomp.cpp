#include "wittk/decomp.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <unordered_set>

#include "wittk/smallring.hpp"

namespace wittk {

int s_fn(long p, long r, long u) {
    if (p < 2) throw DomainError("s_fn: p must be prime");
    if (u < 1 || u % p == 0) throw DomainError("s_fn: u must be coprime to p");
    if (u > r) return 0;
    int s = 1;
    BigInt up = u * BigInt(p);  // u * p^s
    while (up <= r) {
        up *= p;
        ++s;
    }
    return s;  // u*p^(s-1) <= r < u*p^s
}

namespace {

// p-locality precondition: every integer coprime to p must be invertible.
void require_p_local(const RingDescriptor& ring, long p) {
    if (ring.kind() == RingKind::FiniteField && ring.ff_p() == p) return;
    if (ring.kind() == RingKind::IntegersMod) {
        BigInt m = ring.modulus();
        while (m % p == 0) m /= p;
        if (m == 1) return;
    }
    throw DomainError("decompose needs IntegersMod(p^M) or FiniteField(p,f) coefficients");
}

std::string report_key(const DecompositionReport& r) {
    std::ostringstream os;
    for (auto& c : r.components) {
        os << c.u << ":";
        for (auto& e : c.vector.coeffs) os << e.code() << ",";
        os << ";";
    }
    return os.str();
}

}  // namespace

DecompositionReport decompose(const WittVector& w, long p) {
    require_p_local(w.ring, p);
    const int m = w.trunc.max_index();
    if (w.trunc != TruncationSet::full(m))
        throw DomainError("decompose expects a full truncation set");
    DecompositionReport rep;
    rep.p = p;
    rep.m = m;
    for (long u = 1; u <= m; ++u) {
        if (u % p == 0) continue;
        int s = s_fn(p, m, u);
        if (s == 0) continue;
        WittVector fu = frobenius(static_cast<int>(u), w);
        WittVector comp = restriction(fu, TruncationSet::p_typical(p, s));
        rep.components.push_back({u, s, std::move(comp)});
    }
    return rep;
}

DecompositionReport decompose_add(const DecompositionReport& a, const DecompositionReport& b) {
    if (a.p != b.p || a.m != b.m || a.components.size() != b.components.size())
        throw DescriptorMismatch("incompatible decomposition reports");
    DecompositionReport out;
    out.p = a.p;
    out.m = a.m;
    for (size_t i = 0; i < a.components.size(); ++i) {
        out.components.push_back({a.components[i].u, a.components[i].length,
                                  witt_add(a.components[i].vector, b.components[i].vector)});
    }
    return out;
}

DecompositionTable::DecompositionTable(long p, int m, const RingDescriptor& ring,
                                       std::uint64_t cap)
    : p_(p), m_(m), ring_(ring), trunc_(TruncationSet::full(m)) {
    const std::uint64_t total = witt_count(trunc_, ring, cap);
    forward_.reserve(total);
    for (std::uint64_t i = 0; i < total; ++i) {
        WittVector w = witt_decode(trunc_, ring, i);
        forward_.emplace(report_key(decompose(w, p)), i);
    }
    bijective_ = forward_.size() == total;
}

std::optional<WittVector> DecompositionTable::invert(const DecompositionReport& r) const {
    auto it = forward_.find(report_key(r));
    if (it == forward_.end()) return std::nullopt;
    return witt_decode(trunc_, ring_, it->second);
}

// ---------------------------------------------------------------------------
// W_{re}/V_e W_r

namespace {

// The quotient routines take a field of characteristic p: GF(p, f) or Z/p
// with p prime. Z/p^M is p-local but is not a field and is rejected here.
void require_field_char(const RingDescriptor& field, long p) {
    if (field.kind() == RingKind::FiniteField && field.ff_p() == p) return;
    if (field.kind() == RingKind::IntegersMod && field.modulus() == p &&
        is_prime_u64(static_cast<std::uint64_t>(p)))
        return;
    throw DomainError("expected a field of characteristic " + std::to_string(p));
}

}  // namespace

int quotient_factor_length(long p, int e, int r, long u) {
    int v = 0;
    int ep = e;
    while (ep % p == 0) {
        ep /= static_cast<int>(p);
        ++v;
    }
    const int S = s_fn(p, static_cast<long>(e) * r, u);
    if (S == 0) return 0;
    if (u % ep == 0) {
        const int sp = s_fn(p, r, u / ep);
        if (sp > 0) {
            // V_e = V_{e'} (p-typical V)^{v_p(e)}: the source fills all but
            // the bottom v_p(e) coordinates, so the cokernel is W_{v_p(e)}.
            if (S != sp + v) throw Error("quotient_factor_length: length bookkeeping failed");
            return v;
        }
    }
    return S;
}

AbelianPGroup quotient_formula(long p, int e, int r, int f) {
    if (e < 1 || r < 1 || f < 1) throw DomainError("quotient_formula: e, r, f >= 1");
    AbelianPGroup g{p, {}, 0};
    for (long u = 1; u <= static_cast<long>(e) * r; ++u) {
        if (u % p == 0) continue;
        int len = quotient_factor_length(p, e, r, u);
        if (len > 0) g += AbelianPGroup::cyclic(p, len, f);
    }
    g.canonicalize();
    return g;
}

AbelianPGroup quotient_oracle(long p, int e, int r, const RingDescriptor& field,
                              Exec exec, std::uint64_t cap) {
    require_field_char(field, p);
    const TruncationSet big = TruncationSet::full(e * r);
    const TruncationSet small = TruncationSet::full(r);
    const std::uint64_t total = witt_count(big, field, cap);
    const SmallRing sr = SmallRing::make(field);

    std::unordered_set<std::uint64_t> image;
    {
        const std::uint64_t src = witt_count(small, field, cap);
        image.reserve(src);
        for (std::uint64_t i = 0; i < src; ++i)
            image.insert(sr_encode(sr, sr_verschiebung(small, e, sr_decode(sr, small.size(), i), big)));
    }

    const int kmax = s_fn(p, static_cast<long>(e) * r, 1) + 1;
    const int nthreads = std::max(1, hardware_threads());
    std::vector<std::vector<std::uint64_t>> local(nthreads,
                                                  std::vector<std::uint64_t>(kmax + 1, 0));
    const std::uint64_t chunk = (total + nthreads - 1) / nthreads;
    parallel_for(nthreads, exec, [&](std::int64_t t) {
        const std::uint64_t lo = t * chunk, hi = std::min<std::uint64_t>(total, lo + chunk);
        auto& tally = local[t];
        for (std::uint64_t i = lo; i < hi; ++i) {
            Coords g = sr_decode(sr, big.size(), i);
            for (int k = 0; k <= kmax; ++k) {
                // (p^k) g via the characteristic-p scalar rule
                Coords gk = sr_scalar_p_pow(sr, big, k, g);
                if (image.count(sr_encode(sr, gk))) {
                    for (int kk = k; kk <= kmax; ++kk) ++tally[kk];
                    break;
                }
            }
        }
    });
    std::vector<std::uint64_t> in_h(kmax + 1, 0);
    for (auto& tally : local)
        for (int k = 0; k <= kmax; ++k) in_h[k] += tally[k];

    const std::uint64_t hsize = image.size();
    std::vector<long> count_val;  // v_p |Q[p^k]|
    for (int k = 0; k <= kmax; ++k) {
        if (in_h[k] % hsize != 0) throw Error("quotient_oracle: torsion count not divisible");
        std::uint64_t nk = in_h[k] / hsize;
        long v = 0;
        while (nk > 1) {
            if (nk % p != 0) throw Error("quotient_oracle: torsion count not a p-power");
            nk /= p;
            ++v;
        }
        count_val.push_back(v);
    }
    if (in_h[kmax] != total)
        throw Error("quotient_oracle: group exponent exceeds the scanned bound");
    return AbelianPGroup::from_torsion_valuations(p, count_val);
}

QuotientStructure quotient_structure(long p, int e, int r, const RingDescriptor& field,
                                     Exec exec, std::uint64_t cap) {
    require_field_char(field, p);
    int f = field.kind() == RingKind::FiniteField ? field.ff_f() : 1;
    QuotientStructure out;
    out.group = quotient_formula(p, e, r, f);
    out.provenance.push_back("formula");
    BigInt total = pow_big(field.cardinality(), static_cast<unsigned long>(e) * r);
    if (total <= cap) {
        AbelianPGroup oracle = quotient_oracle(p, e, r, field, exec, cap);
        out.oracle_ran = true;
        out.provenance.push_back("oracle");
        if (!(oracle == out.group))
            throw Error("quotient_structure: formula and oracle disagree for p=" +
                        std::to_string(p) + " e=" + std::to_string(e) +
                        " r=" + std::to_string(r) + " (" + out.group.to_string() + " vs " +
                        oracle.to_string() + ")");
    }
    return out;
}

// ---------------------------------------------------------------------------
// Scan kernel for the decomposition suite

namespace {

// Per-scan plan: the u-components' p-typical slot positions inside the
// divided truncation sets, plus evaluators for the full set and each
// p-typical component set.
struct DecompPlan {
    struct Component {
        int u;
        int s;
        TruncationSet ptyp;
        std::vector<std::size_t> slots;  // positions of p^j within trunc/u
        SrEvaluator ptyp_eval;
    };
    SmallRing sr;
    TruncationSet trunc;
    SrEvaluator full_eval;
    std::vector<Component> components;

    DecompPlan(long p, int m, const RingDescriptor& ring)
        : sr(SmallRing::make(ring)),
          trunc(TruncationSet::full(m)),
          full_eval(sr, trunc) {
        for (long u = 1; u <= m; ++u) {
            if (u % p == 0) continue;
            const int s = s_fn(p, m, u);
            if (s == 0) continue;
            TruncationSet dived = trunc.divided(static_cast<int>(u));
            std::vector<std::size_t> slots;
            long idx = 1;
            for (int j = 0; j < s; ++j) {
                slots.push_back(dived.position(static_cast<int>(idx)));
                idx *= p;
            }
            TruncationSet ptyp = TruncationSet::p_typical(p, s);
            components.push_back(
                {static_cast<int>(u), s, ptyp, std::move(slots), SrEvaluator(sr, ptyp)});
        }
    }

    void split(const Coords& x, std::vector<Coords>& out, Coords& scratch) {
        out.resize(components.size());
        for (std::size_t c = 0; c < components.size(); ++c) {
            full_eval.frobenius(components[c].u, x, scratch);
            out[c].resize(components[c].s);
            for (int j = 0; j < components[c].s; ++j)
                out[c][j] = scratch[components[c].slots[j]];
        }
    }

    std::uint64_t fingerprint(const std::vector<Coords>& comps) const {
        std::uint64_t fp = 0;
        for (auto& comp : comps)
            for (auto v : comp) fp = fp * sr.q + v;
        return fp;
    }
};

}  // namespace

DecompScanResult decompose_scan(long p, int m, const RingDescriptor& ring, Exec exec,
                                std::uint64_t pair_budget, std::uint64_t seed) {
    DecompScanResult res;
    DecompPlan plan(p, m, ring);
    const std::uint64_t total = witt_count(plan.trunc, ring);
    res.vectors = total;
    const std::size_t len = plan.trunc.size();

    // bijectivity: every decomposition fingerprint occurs exactly once
    std::vector<std::uint64_t> keys(total);
    {
        std::vector<Coords> comps;
        Coords scratch;
        for (std::uint64_t i = 0; i < total; ++i) {
            plan.split(sr_decode(plan.sr, len, i), comps, scratch);
            keys[i] = plan.fingerprint(comps);
        }
    }
    std::unordered_set<std::uint64_t> distinct(keys.begin(), keys.end());
    res.bijective = distinct.size() == total;

    // additivity on all pairs for small groups, else a seeded sample
    std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
    if (total <= 1024) {
        for (std::uint64_t i = 0; i < total; ++i)
            for (std::uint64_t j = 0; j < total; ++j) pairs.push_back({i, j});
    } else {
        std::mt19937_64 rng(seed);
        for (std::uint64_t k = 0; k < pair_budget; ++k)
            pairs.push_back({rng() % total, rng() % total});
    }
    res.pairs = pairs.size();

    const int nthreads = std::max(1, hardware_threads());
    std::vector<char> fail(nthreads, 0);
    const std::uint64_t chunk = (pairs.size() + nthreads - 1) / nthreads;
    parallel_for(nthreads, exec, [&](std::int64_t tid) {
        DecompPlan local(p, m, ring);
        std::vector<Coords> ca, cb, cs;
        Coords scratch, sum, comp_sum;
        const std::uint64_t lo = tid * chunk,
                            hi = std::min<std::uint64_t>(pairs.size(), lo + chunk);
        for (std::uint64_t k = lo; k < hi; ++k) {
            Coords a = sr_decode(local.sr, len, pairs[k].first);
            Coords b = sr_decode(local.sr, len, pairs[k].second);
            local.full_eval.add(a, b, sum);
            local.split(sum, cs, scratch);
            std::uint64_t lhs = local.fingerprint(cs);
            local.split(a, ca, scratch);
            local.split(b, cb, scratch);
            std::uint64_t rhs = 0;
            for (std::size_t c = 0; c < local.components.size(); ++c) {
                local.components[c].ptyp_eval.add(ca[c], cb[c], comp_sum);
                for (auto v : comp_sum) rhs = rhs * local.sr.q + v;
            }
            if (lhs != rhs) fail[tid] = 1;
        }
    });
    res.additive = std::none_of(fail.begin(), fail.end(), [](char c) { return c != 0; });
    return res;
}

}  // namespace wittk
