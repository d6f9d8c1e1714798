#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "wittk/parallel.hpp"

namespace wittk {

struct CheckLine {
    std::string name;
    bool pass = false;
    std::string details;
};

struct SuiteReport {
    std::string name;
    bool pass = true;
    std::vector<CheckLine> checks;

    void add(const std::string& check, bool ok, const std::string& details = "");
    nlohmann::json to_json() const;
};

struct SelfcheckReport {
    std::uint64_t seed = 7;
    std::vector<SuiteReport> suites;
    bool pass = true;

    nlohmann::json to_json() const;
};

// Pair scan over all integral lifts of W_full(m)(F_p): ghost must commute
// with the universal addition/multiplication exactly, and the results must
// reduce to the table-compiled mod-p route. The inner loop runs on int128
// words once per-index bounds have been certified; otherwise on big
// integers.
struct GhostScanStats {
    std::uint64_t pairs = 0;
    std::uint64_t failures = 0;
    bool wide_path = false;  // int128 inner loop
};

GhostScanStats ghost_hom_scan(long p, int m, Exec exec);

// Named suites: ghost | decomp | tworoute | cdvr | tr.
SuiteReport suite_ghost(std::uint64_t seed, Exec exec);
SuiteReport suite_decomp(std::uint64_t seed, Exec exec);
SuiteReport suite_tworoute(std::uint64_t seed, Exec exec);
SuiteReport suite_cdvr(std::uint64_t seed, Exec exec);
SuiteReport suite_tr(std::uint64_t seed, Exec exec);

// names empty or {"all"} runs everything, in the fixed order above.
SelfcheckReport run_selfcheck(std::vector<std::string> names, std::uint64_t seed, Exec exec);

}  // namespace wittk
