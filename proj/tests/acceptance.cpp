// Acceptance suite: one pass/fail line per criterion, exit 0 only when all
// criteria hold. Runtime-targeted criteria are timed.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "wittk/decomp.hpp"
#include "wittk/kgroups.hpp"
#include "wittk/selfcheck.hpp"
#include "wittk/smallring.hpp"
#include "wittk/tower.hpp"
#include "wittk/witt.hpp"

using namespace wittk;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& details) {
    std::printf("criterion %2d: %s  %s\n", criterion, pass ? "PASS" : "FAIL", details.c_str());
    if (!pass) ++g_failures;
}

double now() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

std::string run_cli(const std::string& args) {
    std::string cmd = std::string(WITTK_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return "<popen failed>";
    std::string out;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
    pclose(pipe);
    return out;
}

// criterion 1: ghost-homomorphism suite, < 60 s
void criterion_1() {
    double t0 = now();
    std::uint64_t failures = 0, pairs = 0;
    for (long p : {2L, 3L})
        for (int m = 1; m <= 6; ++m) {
            GhostScanStats s = ghost_hom_scan(p, m, Exec::Parallel);
            failures += s.failures;
            pairs += s.pairs;
        }
    std::mt19937_64 rng(7);
    RingDescriptor z = RingDescriptor::integers();
    auto t10 = TruncationSet::full(10);
    int bad = 0;
    for (int k = 0; k < 500; ++k) {
        std::vector<BigInt> a(10), b(10);
        for (auto& c : a) c = static_cast<long>(rng() % 19) - 9;
        for (auto& c : b) c = static_cast<long>(rng() % 19) - 9;
        auto ga = zfast::ghost(t10, a), gb = zfast::ghost(t10, b);
        auto gs = zfast::ghost(t10, zfast::witt_add(t10, a, b));
        auto gp = zfast::ghost(t10, zfast::witt_mul(t10, a, b));
        for (int i = 0; i < 10; ++i) {
            if (gs[i] != ga[i] + gb[i]) ++bad;
            if (gp[i] != ga[i] * gb[i]) ++bad;
        }
    }
    double dt = now() - t0;
    std::ostringstream os;
    os << pairs << " enumerated pairs + 500 random Z pairs, " << failures + bad
       << " failures, " << std::fixed << dt << "s (target < 60)";
    report(1, failures == 0 && bad == 0 && dt < 60.0, os.str());
}

// criterion 2: operator identities on the same sample sets
void criterion_2() {
    SuiteReport rep = suite_ghost(7, Exec::Parallel);
    bool pass = true;
    std::string detail;
    for (auto& c : rep.checks) {
        if (c.name.rfind("operator identities", 0) == 0 ||
            c.name.rfind("teichmuller", 0) == 0) {
            pass = pass && c.pass;
            if (!detail.empty()) detail += "; ";
            detail += c.name;
        }
    }
    report(2, pass, detail);
}

// criterion 3: decomposition suite
void criterion_3() {
    bool pass = true;
    std::uint64_t vectors = 0;
    for (long p : {2L, 3L})
        for (int m = 2; m <= 6; ++m)
            for (int pw : {1, 2}) {
                RingDescriptor ring = pw == 1 ? RingDescriptor::prime_field(p)
                                              : RingDescriptor::integers_mod(BigInt(p) * p);
                DecompScanResult r = decompose_scan(p, m, ring, Exec::Parallel);
                pass = pass && r.bijective && r.additive;
                vectors += r.vectors;
            }
    for (long q : {2L, 3L, 4L, 5L}) {
        RingDescriptor field =
            q == 4 ? RingDescriptor::finite_field(2, 2) : RingDescriptor::prime_field(q);
        for (int m = 1; m <= 8; ++m) {
            std::uint64_t n = 0;
            enumerate_witt(TruncationSet::full(m), field, [&](const WittVector&) { ++n; },
                           1ull << 22);
            std::uint64_t expect = 1;
            for (int k = 0; k < m; ++k) expect *= static_cast<std::uint64_t>(q);
            pass = pass && n == expect;
        }
    }
    report(3, pass, "additive bijection over F_p and Z/p^2, |W_m(F_q)| = q^m");
}

// criterion 4: perfectoid two-route equality with pinned values
void criterion_4() {
    bool pass = true;
    std::string detail = "re <= 8 grid over F_2, F_3, F_4";
    int cells = 0;
    try {
        for (long p : {2L, 3L}) {
            std::vector<RingDescriptor> fields;
            fields.push_back(RingDescriptor::prime_field(p));
            if (p == 2) fields.push_back(RingDescriptor::finite_field(2, 2));
            for (auto& field : fields) {
                int f = field.kind() == RingKind::FiniteField ? field.ff_f() : 1;
                for (int e = 1; e <= 8; ++e)
                    for (int r = 1; e * r <= 8; ++r) {
                        QuotientStructure q = quotient_structure(p, e, r, field, Exec::Parallel);
                        ++cells;
                        if (q.oracle_ran &&
                            q.group.order_valuation() != static_cast<long>(f) * (e * r - r))
                            pass = false;
                    }
            }
        }
    } catch (const Error& e) {
        pass = false;
        detail = e.what();
    }
    pass = pass && quotient_formula(2, 3, 1, 1) == AbelianPGroup::cyclic(2, 2);
    pass = pass && quotient_formula(2, 2, 2, 1) == AbelianPGroup::cyclic(2, 1, 2);
    pass = pass && quotient_formula(2, 2, 3, 1) == AbelianPGroup::cyclic(2, 1, 3);
    report(4, pass, detail + ", " + std::to_string(cells) + " cells");
}

// criterion 5: factor enumeration consistency + boundary lock
void criterion_5() {
    bool pass = true;
    std::string detail = "assembly == quotient on the grid; boundary counterexamples locked";
    try {
        for (long p : {2L, 3L}) {
            std::vector<RingDescriptor> fields;
            fields.push_back(RingDescriptor::prime_field(p));
            if (p == 2) fields.push_back(RingDescriptor::finite_field(2, 2));
            for (auto& field : fields)
                for (int e = 1; e <= 8; ++e)
                    for (int r = 1; e * r <= 8; ++r)
                        k_odd_perfectoid(p, e, r, field, Exec::Parallel);  // throws on mismatch
        }
    } catch (const Error& e) {
        pass = false;
        detail = e.what();
    }
    auto f1 = enumerate_gr_factors(2, 3, 0);
    pass = pass && f1.size() == 2 && f1[0].kase == FactorCase::Generic && f1[0].length == 2 &&
           f1[1].kase == FactorCase::Absent && f1[1].equality_boundary;
    auto f2 = enumerate_gr_factors(2, 2, 2);
    pass = pass && f2.size() == 3 && f2[1].kase == FactorCase::PhiPullback &&
           f2[1].equality_boundary && f2[1].length == 1 &&
           assemble_factors(f2, 1).order_valuation() == 3;
    report(5, pass, detail);
}

// criterion 6: integral order/rank table, < 10 s
void criterion_6() {
    double t0 = now();
    bool pass = true;
    for (int n = 1; n <= 6; ++n)
        for (int i = 0; i <= 6; ++i) {
            IntegralAgh cell = integral_agh(n, i);
            BigInt expect = factorial_big(static_cast<unsigned long>(n) * i);
            if (n >= 2) {
                BigInt ifact = factorial_big(static_cast<unsigned long>(i));
                for (int k = 0; k < n - 2; ++k) expect *= ifact;
            } else {
                expect = 1;
            }
            if (cell.order != expect || cell.rank != n - 1) pass = false;
            BigInt rebuilt = 1;
            for (long p = 2; p <= static_cast<long>(n) * i; ++p) {
                if (!is_prime_u64(static_cast<std::uint64_t>(p))) continue;
                rebuilt *= pow_big(BigInt(p), cdvr_even_valuation_closed({p, 1, 1, 0, false}, n, i)
                                                  .convert_to<unsigned long>());
            }
            if (rebuilt != cell.order) pass = false;
        }
    if (integral_agh(2, 2).order != 24) pass = false;
    double dt = now() - t0;
    std::ostringstream os;
    os << "orders (ni)!(i!)^{n-2}, ranks n-1, per-prime reassembly, " << std::fixed << dt
       << "s (target < 10)";
    report(6, pass && dt < 10.0, os.str());
}

// criterion 7: CDVR closed form == recurrence on the full grid
void criterion_7() {
    bool pass = true;
    std::string detail;
    const std::vector<CdvrData> params = {
        {2, 1, 1, 0, false}, {2, 1, 2, 3, false}, {2, 1, 2, 2, false}, {2, 2, 1, 0, false},
        {2, 1, 3, 2, false}, {2, 2, 2, 3, false}, {2, 1, 4, 4, false}, {2, 3, 1, 0, false},
        {2, 1, 4, 11, false}, {3, 1, 1, 0, false}, {3, 1, 2, 1, false}, {3, 2, 2, 1, false},
        {3, 1, 3, 5, false}, {3, 1, 6, 7, false}, {3, 2, 1, 0, false}, {5, 1, 1, 0, false},
        {5, 1, 2, 1, false}, {5, 1, 5, 9, false}, {5, 2, 2, 1, false}, {7, 1, 3, 2, false}};
    long cells = 0;
    for (auto& d : params)
        for (int n = 1; n <= 12; ++n)
            for (int i = 0; i <= 12; ++i) {
                ++cells;
                if (cdvr_even_valuation_closed(d, n, i) != cdvr_even_recursive(d, n, i)) {
                    pass = false;
                    detail = "mismatch p=" + std::to_string(d.p) + " e=" + std::to_string(d.e);
                }
            }
    for (long p : {2L, 3L, 5L})
        for (int n = 1; n <= 10; ++n)
            for (int r = 0; r <= 10; ++r)
                if (rank_count(n, r, p) != n - 1) pass = false;
    report(7, pass,
           detail.empty() ? std::to_string(cells) + " grid cells incl (2,1,2,3), (3,1,2,1)"
                          : detail);
}

// criterion 8: h-sum identity
void criterion_8() {
    bool pass = true;
    for (long p : {2L, 3L, 5L})
        for (int n = 1; n <= 10; ++n)
            for (int i = 0; i <= 10; ++i) {
                long sum = 0;
                for (long u = 1; u <= static_cast<long>(n) * (i + 1); ++u)
                    if (u % p != 0) sum += h_fn(p, i + 1, n, u);
                long expect = static_cast<long>(n) * (i + 1) - (i + 1);
                if (sum != expect) pass = false;
                if (quotient_formula(p, n, i + 1, 1).order_valuation() != expect) pass = false;
            }
    report(8, pass, "sum_u h(p, i+1, n, u) = n(i+1) - (i+1), cross-checked on Witt quotients");
}

// criterion 9: TR suite, < 30 s
void criterion_9() {
    double t0 = now();
    SuiteReport rep = suite_tr(7, Exec::Parallel);
    double dt = now() - t0;
    std::ostringstream os;
    os << "theta/TR/precision/lim1 checks, " << std::fixed << dt << "s (target < 30)";
    report(9, rep.pass && dt < 30.0, os.str());
}

// criterion 10: byte-identical selfcheck reports
void criterion_10() {
    std::string a = run_cli("selfcheck --suite all --seed 7");
    std::string b = run_cli("selfcheck --suite all --seed 7");
    bool pass = !a.empty() && a == b;
    report(10, pass, "two runs of selfcheck --suite all --seed 7 are byte-identical");
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    if (g_failures) {
        std::printf("%d criteria FAILED\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
