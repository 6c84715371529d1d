#include <catch2/catch_amalgamated.hpp>

#include "charsum/modular.hpp"

#include <numeric>
#include <random>
#include <vector>

using namespace charsum;

TEST_CASE("mul_mod and mod_pow agree with wide arithmetic") {
    std::mt19937_64 rng(0x5eed0001);
    for (int i = 0; i < 2000; ++i) {
        const uint64_t m = rng() % 2000000011ULL + 2;
        const uint64_t a = rng() % m;
        const uint64_t b = rng() % m;
        const auto wide = static_cast<uint64_t>(
            static_cast<unsigned __int128>(a) * b % m);
        REQUIRE(mul_mod(a, b, m) == wide);
    }
    for (int i = 0; i < 200; ++i) {
        const uint64_t m = rng() % 1000003ULL + 2;
        const uint64_t a = rng() % m;
        const uint64_t e = rng() % 40;
        uint64_t slow = 1 % m;
        for (uint64_t k = 0; k < e; ++k) slow = mul_mod(slow, a, m);
        REQUIRE(mod_pow(a, e, m) == slow);
    }
}

TEST_CASE("mod_inverse inverts units and rejects non-units") {
    std::mt19937_64 rng(0x5eed0002);
    for (int i = 0; i < 500; ++i) {
        const uint64_t m = rng() % 100000 + 2;
        uint64_t a = rng() % m;
        if (std::gcd(a, m) != 1) {
            if (a != 0) REQUIRE_THROWS_AS(mod_inverse(a, m), std::invalid_argument);
            continue;
        }
        REQUIRE(mul_mod(a, mod_inverse(a, m), m) == 1 % m);
    }
    REQUIRE(mod_inverse_signed(-3, 7) == mod_inverse(4, 7));
    REQUIRE(mod_inverse_signed(-16, 5) == mod_inverse(4, 5));
}

TEST_CASE("crt_combine reconstructs residues over coprime moduli") {
    std::mt19937_64 rng(0x5eed0003);
    for (int i = 0; i < 300; ++i) {
        const uint64_t m1 = rng() % 50 + 2;
        uint64_t m2 = rng() % 50 + 2;
        while (std::gcd(m1, m2) != 1) ++m2;
        const uint64_t x = rng() % (m1 * m2);
        const uint64_t got = crt_combine({x % m1, x % m2}, {m1, m2});
        REQUIRE(got == x);
    }
    REQUIRE_THROWS_AS(crt_combine({1, 2}, {6, 4}), std::invalid_argument);
    REQUIRE_THROWS_AS(crt_combine({}, {}), std::invalid_argument);
}

TEST_CASE("crt_general matches a brute-force search, coprime or not") {
    for (uint64_t m1 = 2; m1 <= 14; ++m1) {
        for (uint64_t m2 = 2; m2 <= 14; ++m2) {
            const uint64_t l = std::lcm(m1, m2);
            for (uint64_t r1 = 0; r1 < m1; ++r1) {
                for (uint64_t r2 = 0; r2 < m2; ++r2) {
                    std::optional<uint64_t> brute;
                    for (uint64_t x = 0; x < l; ++x)
                        if (x % m1 == r1 && x % m2 == r2) { brute = x; break; }
                    const auto got = crt_general(r1, m1, r2, m2);
                    REQUIRE(got.has_value() == brute.has_value());
                    if (got) {
                        REQUIRE(got->first == *brute);
                        REQUIRE(got->second == l);
                    }
                }
            }
        }
    }
}

TEST_CASE("is_prime agrees with a sieve") {
    const int limit = 20000;
    std::vector<char> comp(limit + 1, 0);
    for (int p = 2; p * p <= limit; ++p)
        if (!comp[p])
            for (int q = p * p; q <= limit; q += p) comp[q] = 1;
    for (int n = 0; n <= limit; ++n)
        REQUIRE(is_prime(static_cast<uint64_t>(n)) == (n >= 2 && !comp[n]));
    REQUIRE(is_prime(2147483647ULL));
    REQUIRE_FALSE(is_prime(2147483647ULL * 2147483647ULL));
}

TEST_CASE("factorize round-trips and exposes exact multiplicities") {
    std::mt19937_64 rng(0x5eed0004);
    for (int i = 0; i < 400; ++i) {
        const uint64_t n = rng() % 5000000 + 1;
        uint64_t prod = 1;
        for (const auto& pp : factorize(n)) {
            REQUIRE(is_prime(pp.prime));
            for (uint32_t e = 0; e < pp.exponent; ++e) prod *= pp.prime;
            REQUIRE(n % pp.prime == 0);
            uint64_t q = n;
            uint32_t count = 0;
            while (q % pp.prime == 0) { q /= pp.prime; ++count; }
            REQUIRE(count == pp.exponent);
        }
        REQUIRE(prod == n);
    }
}

TEST_CASE("euler_phi and moebius agree with direct counting") {
    for (uint64_t n = 1; n <= 1500; ++n) {
        uint64_t count = 0;
        for (uint64_t a = 1; a <= n; ++a)
            if (std::gcd(a, n) == 1) ++count;
        REQUIRE(euler_phi(n) == count);

        int mu = 1;
        uint64_t m = n;
        for (uint64_t p = 2; p * p <= m; ++p) {
            if (m % p) continue;
            m /= p;
            if (m % p == 0) { mu = 0; break; }
            mu = -mu;
        }
        if (mu != 0 && m > 1) mu = -mu;
        REQUIRE(moebius(n) == mu);
    }
}

TEST_CASE("primitive_root generates the full unit group") {
    for (uint64_t p = 3; p <= 300; ++p) {
        if (!is_prime(p)) continue;
        const uint64_t g = primitive_root(p);
        uint64_t v = 1;
        uint64_t order = 0;
        do {
            v = mul_mod(v, g, p);
            ++order;
        } while (v != 1);
        REQUIRE(order == p - 1);
    }
}

TEST_CASE("ramanujan sums: divisor formula equals the literal exponential sum") {
    for (uint64_t q = 1; q <= 150; ++q) {
        for (int64_t n : {-7L, -1L, 0L, 1L, 2L, 6L, 30L, 97L}) {
            const cplx lit = ramanujan_sum_literal(q, n);
            REQUIRE(std::abs(lit.imag()) < 1e-7);
            REQUIRE(std::abs(lit.real() - static_cast<double>(ramanujan_sum(q, n))) < 1e-7);
        }
        REQUIRE(ramanujan_sum(q, 0) == static_cast<int64_t>(euler_phi(q)));
    }
    // multiplicative in q for coprime parts
    for (uint64_t q1 : {4ULL, 5ULL, 9ULL, 11ULL}) {
        for (uint64_t q2 : {7ULL, 13ULL, 16ULL}) {
            if (std::gcd(q1, q2) != 1) continue;
            for (int64_t n : {1L, 3L, 12L, 35L})
                REQUIRE(ramanujan_sum(q1 * q2, n) ==
                        ramanujan_sum(q1, n) * ramanujan_sum(q2, n));
        }
    }
}
