#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "wittk/abelian.hpp"
#include "wittk/linalg.hpp"
#include "wittk/rings.hpp"

namespace wittk {

// Inverse system of finitely presented Z/p^M-modules. Stage k is
// (Z/p^M)^gens / column span of relations; maps[k] carries stage k+1 to
// stage k on generators.
struct Tower {
    long p = 2;
    int precision = 8;  // M
    struct Stage {
        int gens = 0;
        Mat relations;  // rows = gens
    };
    std::vector<Stage> stages;
    std::vector<Mat> maps;  // maps[k]: gens[k+1] -> gens[k]

    static Tower constant(long p, int M, int gens, const Mat& relations);

    nlohmann::json to_json() const;
    static Tower from_json(const nlohmann::json& j);
};

struct LimResult {
    AbelianPGroup lim;
    AbelianPGroup lim1;
    int stabilized_at = 0;   // first stage of the stable tail
    int window_used = 0;
    std::vector<std::string> notes;
};

// lim and lim^1 at precision M through the kernel/cokernel of (1 - shift) on
// the product of stable-image stages, truncated at the stabilization window.
// Throws StabilizationError when the image chains or the stable tail fail to
// settle within the window (default 4M stages, clipped to the tower length).
LimResult lim_tower(const Tower& t, int window = 0);

// theta_infty(i) for the perfect field F_{p^f} at precision M: the two-term
// fiber of A_inf = W(F_{p^f}) mapping to lim_n A_inf/(d_n)^i with d = p.
struct ThetaComplex {
    std::string model;  // e.g. "GF(4)"
    int i = 0;
    int precision = 0;
    AbelianPGroup H0, H1, H2;
    bool zp_at_precision = false;  // H0 indistinguishable from Z_p^f at precision

    bool is_zero() const { return H0.is_trivial() && H1.is_trivial() && H2.is_trivial(); }
    nlohmann::json to_json() const;
};

ThetaComplex theta_infty(long p, int f, int i, int M);

// TR_j(F_{p^f}; Z_p) for 0 <= j <= degree_bound via the short exact sequences
// 0 -> H^2(theta(i+1)) -> TR_{2i} -> H^0(theta(i)) -> 0 and
// TR_{2i-1} = H^1(theta(i)).
struct TrGroups {
    std::string model;
    int precision = 0;
    std::vector<std::pair<int, AbelianPGroup>> groups;  // (j, group)
    std::vector<std::string> notes;

    nlohmann::json to_json() const;
};

TrGroups tr_groups(long p, int f, int degree_bound, int M);

}  // namespace wittk
