// Times the data-parallel kernels against their serial reference paths.
#include <chrono>
#include <cstdio>

#include "wittk/decomp.hpp"
#include "wittk/selfcheck.hpp"

using namespace wittk;

namespace {

template <typename Fn>
double seconds(Fn&& fn) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

void row(const char* name, double serial, double parallel) {
    std::printf("%-46s %9.3fs %9.3fs %7.2fx\n", name, serial, parallel,
                parallel > 0 ? serial / parallel : 0.0);
}

}  // namespace

int main() {
    std::printf("threads: %d\n", hardware_threads());
    std::printf("%-46s %10s %10s %8s\n", "kernel", "serial", "parallel", "speedup");

    {
        double s = seconds([] { ghost_hom_scan(3, 5, Exec::Serial); });
        double p = seconds([] { ghost_hom_scan(3, 5, Exec::Parallel); });
        row("ghost_hom_scan F_3 full(5), all pairs", s, p);
    }
    {
        RingDescriptor gf4 = RingDescriptor::finite_field(2, 2);
        double s = seconds([&] { quotient_oracle(2, 2, 4, gf4, Exec::Serial); });
        double p = seconds([&] { quotient_oracle(2, 2, 4, gf4, Exec::Parallel); });
        row("quotient_oracle W_8(F_4)/V_2 W_4(F_4)", s, p);
    }
    {
        RingDescriptor f3 = RingDescriptor::prime_field(3);
        double s = seconds([&] { decompose_scan(3, 6, f3, Exec::Serial); });
        double p = seconds([&] { decompose_scan(3, 6, f3, Exec::Parallel); });
        row("decompose_scan F_3 full(6)", s, p);
    }
    return 0;
}
