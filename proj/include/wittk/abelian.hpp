#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "wittk/bigint.hpp"

namespace wittk {

// Canonical form of a finite abelian p-group plus a free rank: a
// non-increasing list of cyclic p-power exponents. Every group-valued answer
// in this project lands here.
struct AbelianPGroup {
    long p = 2;
    std::vector<int> exponents;  // non-increasing, all >= 1
    int free_rank = 0;

    static AbelianPGroup trivial(long p) { return AbelianPGroup{p, {}, 0}; }
    static AbelianPGroup cyclic(long p, int exponent, int copies = 1);

    void canonicalize();
    bool is_trivial() const { return exponents.empty() && free_rank == 0; }
    long order_valuation() const;  // v_p(order) of the torsion part
    BigInt order() const;

    // Direct sum.
    AbelianPGroup& operator+=(const AbelianPGroup& o);

    // Trivial groups compare equal regardless of the stored prime.
    bool operator==(const AbelianPGroup& o) const;
    bool operator!=(const AbelianPGroup& o) const { return !(*this == o); }

    std::string to_string() const;  // e.g. "Z/4 + Z/2 + Z^1", "0"
    nlohmann::json to_json() const;
    static AbelianPGroup from_json(const nlohmann::json& j);

    // Reconstruct the canonical form from torsion counts:
    // counts[k] = |{x : p^k x = 0}| as p-valuations, k = 0..K with
    // counts[K] saturating at v_p(|G|).
    static AbelianPGroup from_torsion_valuations(long p, const std::vector<long>& counts);
};

}  // namespace wittk
