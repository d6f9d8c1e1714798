#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <optional>
#include <string>

#include "wittk/errors.hpp"

namespace wittk {

using BigInt = boost::multiprecision::cpp_int;

// Floor division; BigInt operator/ truncates toward zero.
inline BigInt floor_div(const BigInt& a, const BigInt& b) {
    BigInt q = a / b;
    if ((a % b) != 0 && ((a < 0) != (b < 0))) --q;
    return q;
}

inline BigInt pow_big(const BigInt& base, unsigned long exp) {
    BigInt r = 1, b = base;
    while (exp) {
        if (exp & 1) r *= b;
        b *= b;
        exp >>= 1;
    }
    return r;
}

// v_p(a) for a != 0; nullopt encodes v_p(0) = +infinity.
inline std::optional<long> p_valuation_of(const BigInt& a, long p) {
    if (p < 2) throw DomainError("p_valuation: p must be >= 2");
    if (a == 0) return std::nullopt;
    BigInt x = a < 0 ? BigInt(-a) : a;
    long v = 0;
    while (x % p == 0) {
        x /= p;
        ++v;
    }
    return v;
}

inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// Legendre: v_p(N!) = sum_j floor(N / p^j).
inline BigInt legendre_factorial_valuation(const BigInt& n, long p) {
    if (p < 2) throw DomainError("legendre: p must be prime");
    BigInt total = 0, q = p;
    while (q <= n) {
        total += n / q;
        q *= p;
    }
    return total;
}

inline BigInt factorial_big(unsigned long n) {
    BigInt r = 1;
    for (unsigned long k = 2; k <= n; ++k) r *= k;
    return r;
}

inline std::string to_string(const BigInt& v) { return v.str(); }

}  // namespace wittk
