#pragma once

// Exact integer kernels: modular arithmetic, CRT, primitive roots,
// multiplicative functions, Ramanujan sums, deterministic 64-bit primality.

#include <algorithm>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "common.hpp"

namespace charsum {

inline uint64_t mul_mod(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>(static_cast<u128>(a) * b % m);
}

inline uint64_t mod_pow(uint64_t base, uint64_t exp, uint64_t m) {
    if (m == 0) throw std::invalid_argument("mod_pow: modulus must be >= 1");
    if (m == 1) return 0;
    uint64_t r = 1;
    base %= m;
    while (exp > 0) {
        if (exp & 1) r = mul_mod(r, base, m);
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    return r;
}

// Extended Euclid on signed 128-bit; returns gcd and fills x with a^{-1}-candidate.
inline uint64_t mod_inverse(uint64_t a, uint64_t m) {
    if (m == 0) throw std::invalid_argument("mod_inverse: modulus must be >= 1");
    if (m == 1) return 0;
    i128 r0 = static_cast<i128>(m), r1 = static_cast<i128>(a % m);
    i128 x0 = 0, x1 = 1;
    while (r1 != 0) {
        i128 q = r0 / r1;
        r0 -= q * r1; std::swap(r0, r1);
        x0 -= q * x1; std::swap(x0, x1);
    }
    if (r0 != 1)
        throw std::invalid_argument("mod_inverse: argument not invertible (gcd > 1)");
    if (x0 < 0) x0 += static_cast<i128>(m);
    return static_cast<uint64_t>(x0);
}

// mod_inverse for signed values: inverse of (a mod m).
inline uint64_t mod_inverse_signed(int64_t a, uint64_t m) {
    i128 r = static_cast<i128>(a) % static_cast<i128>(m);
    if (r < 0) r += static_cast<i128>(m);
    return mod_inverse(static_cast<uint64_t>(r), m);
}

inline uint64_t crt_combine(const std::vector<uint64_t>& residues,
                            const std::vector<uint64_t>& moduli) {
    if (residues.size() != moduli.size() || residues.empty())
        throw std::invalid_argument("crt_combine: need matching nonempty lists");
    uint64_t x = residues[0] % moduli[0];
    uint64_t m = moduli[0];
    for (size_t i = 1; i < moduli.size(); ++i) {
        uint64_t mi = moduli[i], ri = residues[i] % mi;
        if (std::gcd(m, mi) != 1)
            throw std::invalid_argument("crt_combine: moduli not pairwise coprime");
        // x + m*t === ri (mod mi)
        uint64_t t = mul_mod((ri + mi - x % mi) % mi, mod_inverse(m % mi, mi), mi);
        x = x + m * t; // fits: product of all moduli stays below 2^63 by contract
        m *= mi;
    }
    return x;
}

// x === r1 (mod m1), x === r2 (mod m2) for moduli that may share factors.
// Returns {residue, lcm} when the pair is compatible, nullopt otherwise.
inline std::optional<std::pair<uint64_t, uint64_t>>
crt_general(uint64_t r1, uint64_t m1, uint64_t r2, uint64_t m2) {
    const uint64_t g = std::gcd(m1, m2);
    r1 %= m1;
    r2 %= m2;
    const uint64_t diff = (r2 + m2 - r1 % m2) % m2;
    if (diff % g != 0) return std::nullopt;
    const uint64_t m2g = m2 / g;
    const uint64_t t = mul_mod((diff / g) % m2g, mod_inverse((m1 / g) % m2g, m2g), m2g);
    const uint64_t l = m1 / g * m2;
    return std::make_pair((r1 + m1 * t) % l, l);
}

inline bool is_prime(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    // Witness set deterministic for all n < 3.3e24, so for every 64-bit input.
    for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        uint64_t x = mod_pow(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mul_mod(x, x, n);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

struct PrimePower {
    uint64_t prime;
    int exponent;
};

// Trial division; sufficient for the moduli and q-ranges this library sees.
inline std::vector<PrimePower> factorize(uint64_t n) {
    if (n == 0) throw std::invalid_argument("factorize: n must be >= 1");
    std::vector<PrimePower> out;
    for (uint64_t p = 2; p * p <= n; p += (p == 2) ? 1 : 2) {
        if (n % p == 0) {
            int e = 0;
            while (n % p == 0) { n /= p; ++e; }
            out.push_back({p, e});
        }
    }
    if (n > 1) out.push_back({n, 1});
    return out;
}

inline uint64_t euler_phi(uint64_t n) {
    uint64_t r = n;
    for (const auto& pp : factorize(n)) r -= r / pp.prime;
    return r;
}

inline int moebius(uint64_t n) {
    int sign = 1;
    for (const auto& pp : factorize(n)) {
        if (pp.exponent > 1) return 0;
        sign = -sign;
    }
    return sign;
}

// Smallest generator of (Z/pZ)^*.
inline uint64_t primitive_root(uint64_t p) {
    if (!is_prime(p)) throw std::invalid_argument("primitive_root: p must be prime");
    if (p == 2) return 1;
    auto fac = factorize(p - 1);
    for (uint64_t g = 2; g < p; ++g) {
        bool ok = true;
        for (const auto& pp : fac) {
            if (mod_pow(g, (p - 1) / pp.prime, p) == 1) { ok = false; break; }
        }
        if (ok) return g;
    }
    throw std::logic_error("primitive_root: no generator found");
}

// c_q(n) = sum over a mod q, (a,q)=1 of e(an/q), evaluated exactly as
// sum_{d | (q,n)} d * mu(q/d).  Integer-valued for every (q, n).
inline int64_t ramanujan_sum(uint64_t q, int64_t n) {
    if (q == 0) throw std::invalid_argument("ramanujan_sum: q must be >= 1");
    if (q == 1) return 1;
    auto fq = factorize(q);
    // g = gcd(q, n), through the exponents of q's primes in n (n = 0 gives g = q)
    std::vector<int> gexp(fq.size());
    for (size_t i = 0; i < fq.size(); ++i) {
        if (n == 0) { gexp[i] = fq[i].exponent; continue; }
        uint64_t pn = static_cast<uint64_t>(n < 0 ? -n : n);
        int v = 0;
        while (v < fq[i].exponent && pn % fq[i].prime == 0) { pn /= fq[i].prime; ++v; }
        gexp[i] = v;
    }
    // enumerate divisors d of g; mu(q/d) from the exponent gaps
    int64_t total = 0;
    std::vector<int> de(fq.size(), 0);
    for (;;) {
        uint64_t d = 1;
        int mu = 1;
        bool square = false;
        for (size_t i = 0; i < fq.size(); ++i) {
            for (int j = 0; j < de[i]; ++j) d *= fq[i].prime;
            int gap = fq[i].exponent - de[i];
            if (gap > 1) { square = true; break; }
            if (gap == 1) mu = -mu;
        }
        if (!square) total += static_cast<int64_t>(d) * mu;
        size_t k = 0;
        while (k < fq.size()) {
            if (de[k] < gexp[k]) { ++de[k]; break; }
            de[k] = 0; ++k;
        }
        if (k == fq.size()) break;
    }
    return total;
}

// The same starred sum by literal complex summation; test oracle for the
// divisor formula, never used in hot loops.
inline cplx ramanujan_sum_literal(uint64_t q, int64_t n) {
    cplx total = 0.0;
    for (uint64_t a = 1; a <= q; ++a) {
        if (std::gcd(a, q) != 1) continue;
        total += e_ratio(static_cast<int64_t>(a) * n, q);
    }
    return total;
}

} // namespace charsum
