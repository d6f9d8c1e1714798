#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "wittk/abelian.hpp"
#include "wittk/parallel.hpp"
#include "wittk/witt.hpp"

namespace wittk {

// The unique s >= 1 with u*p^(s-1) <= r < u*p^s, or 0 when u > r.
// u must be coprime to p.
int s_fn(long p, long r, long u);

// p-typical decomposition of a big Witt vector over p-local coefficients:
// the u-component is the restriction of frobenius(u, w) to
// p_typical(p, s_fn(p, m, u)).
struct DecompositionReport {
    long p = 0;
    int m = 0;
    struct Component {
        long u;
        int length;
        WittVector vector;
    };
    std::vector<Component> components;  // u ascending over J_p with length >= 1
};

DecompositionReport decompose(const WittVector& w, long p);

// Componentwise sum of two reports (additivity checks).
DecompositionReport decompose_add(const DecompositionReport& a,
                                  const DecompositionReport& b);

// Stored forward map for inverting decompose on enumerable finite rings.
class DecompositionTable {
  public:
    DecompositionTable(long p, int m, const RingDescriptor& ring,
                       std::uint64_t cap = (1ull << 22));
    // Vector with the given decomposition, if any.
    std::optional<WittVector> invert(const DecompositionReport& r) const;
    bool is_bijective() const { return bijective_; }

  private:
    long p_;
    int m_;
    RingDescriptor ring_;
    TruncationSet trunc_;
    std::unordered_map<std::string, std::uint64_t> forward_;
    bool bijective_ = false;
};

// W_{re}(k) / V_e W_r(k) in canonical form. The formula route runs per-u
// p-typical cokernel bookkeeping; the oracle route enumerates, forms the
// quotient and reduces to invariants. Both run when the enumeration fits the
// cap; a disagreement throws.
struct QuotientStructure {
    AbelianPGroup group;
    bool oracle_ran = false;
    std::vector<std::string> provenance;
};

AbelianPGroup quotient_formula(long p, int e, int r, int f);
AbelianPGroup quotient_oracle(long p, int e, int r, const RingDescriptor& field,
                              Exec exec = Exec::Parallel,
                              std::uint64_t cap = (1ull << 22));
QuotientStructure quotient_structure(long p, int e, int r, const RingDescriptor& field,
                                     Exec exec = Exec::Parallel,
                                     std::uint64_t cap = (1ull << 22));

// Per-u p-typical length of the u-factor of W_{re}/V_e W_r (formula route).
int quotient_factor_length(long p, int e, int r, long u);

// Data-parallel scan kernels used by the self-check suites; each has a
// serial reference path (Exec::Serial) producing identical results.
struct DecompScanResult {
    bool bijective = false;
    bool additive = false;
    std::uint64_t vectors = 0;
    std::uint64_t pairs = 0;
};

DecompScanResult decompose_scan(long p, int m, const RingDescriptor& ring, Exec exec,
                                std::uint64_t pair_budget = (1ull << 18),
                                std::uint64_t seed = 7);

}  // namespace wittk
