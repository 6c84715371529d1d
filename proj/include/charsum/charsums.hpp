#pragma once

// Complete character sums produced by the three Poisson steps of the dual-sum
// expansion, each in two independent versions: a closed form assembled from
// Gauss sums and congruence conditions, and the literal sum over the full
// residue ring.  The closed forms are exact algebraic identities, so the
// literal versions exist purely to catch implementation bugs.  Also here:
// the two residual harnesses that check a Poisson identity end to end.

#include <numeric>
#include <stdexcept>
#include <vector>

#include "characters.hpp"
#include "common.hpp"
#include "complete_sums.hpp"
#include "modular.hpp"
#include "oscillatory.hpp"

namespace charsum {

// --------------------------------------------------------------------------
// First Poisson step (over the variable carrying chi3), modulus q*M1*M3.
// --------------------------------------------------------------------------

// Closed form: vanishes unless (a + q b) M3 === m (mod q M1); otherwise
// q M1 eps3 sqrt(M3) chi3(q M1) conj(chi3(m)).  Requires gcd(q, M3) = 1.
inline cplx charsum_c1(int64_t m, uint64_t q, uint64_t a, uint64_t b,
                       const PrimeCharacter& chi3, uint64_t mod1) {
    const uint64_t mod3 = chi3.modulus();
    if (q == 0 || std::gcd(q, mod3) != 1)
        throw std::invalid_argument("charsum_c1: requires q >= 1 with gcd(q, M3) = 1");
    if (!chi3.is_primitive())
        throw std::invalid_argument("charsum_c1: requires primitive chi3");
    const uint64_t qm1 = q * mod1;
    const uint64_t target = (a + q * b) % qm1 * mod3 % qm1;
    int64_t mres = m % static_cast<int64_t>(qm1);
    if (mres < 0) mres += static_cast<int64_t>(qm1);
    if (static_cast<uint64_t>(mres) != target) return cplx(0.0, 0.0);
    return static_cast<double>(qm1) * gauss_epsilon(chi3) *
           std::sqrt(static_cast<double>(mod3)) * chi3(static_cast<int64_t>(qm1)) *
           std::conj(chi3(m));
}

// Literal sum over c mod q*M1*M3 of chi3(c) e(c (m - (a+qb) M3) / (q M1 M3)).
inline cplx charsum_c1_literal(int64_t m, uint64_t q, uint64_t a, uint64_t b,
                               const PrimeCharacter& chi3, uint64_t mod1) {
    const uint64_t mod3 = chi3.modulus();
    const uint64_t ring = q * mod1 * mod3;
    const int64_t shift = m - static_cast<int64_t>((a + q * b) * mod3);
    cplx total = 0.0;
    for (uint64_t c = 0; c < ring; ++c)
        total += chi3(static_cast<int64_t>(c)) *
                 e_ratio(static_cast<int64_t>(c) * shift, ring);
    return total;
}

// --------------------------------------------------------------------------
// Second Poisson step (over the variable carrying chi1*chi2), modulus q*M1*M2.
// --------------------------------------------------------------------------

// Closed form with q = q' M1^r (r the M1-adic valuation): vanishes unless
// q | M2 m + M3 n; otherwise
//   eps2 sqrt(M2) chi2(q M1) conj(chi2(n))
//   * q' M1^r eps1 sqrt(M1) chi1(q' M2 M3) conj(chi1((M2 m + M3 n)/M1^r)).
// Requires gcd(q, M2) = 1.
inline cplx charsum_c2(int64_t m, int64_t n, uint64_t q, const PrimeCharacter& chi1,
                       const PrimeCharacter& chi2, uint64_t mod3) {
    const uint64_t mod1 = chi1.modulus();
    const uint64_t mod2 = chi2.modulus();
    if (q == 0 || std::gcd(q, mod2) != 1)
        throw std::invalid_argument("charsum_c2: requires q >= 1 with gcd(q, M2) = 1");
    if (!chi1.is_primitive() || !chi2.is_primitive())
        throw std::invalid_argument("charsum_c2: requires primitive chi1, chi2");
    uint64_t q_prime = q;
    uint64_t m1_pow = 1;
    while (q_prime % mod1 == 0) {
        q_prime /= mod1;
        m1_pow *= mod1;
    }
    const int64_t combined = static_cast<int64_t>(mod2) * m + static_cast<int64_t>(mod3) * n;
    if (combined % static_cast<int64_t>(q) != 0) return cplx(0.0, 0.0);
    const int64_t reduced = combined / static_cast<int64_t>(m1_pow);
    return gauss_epsilon(chi2) * std::sqrt(static_cast<double>(mod2)) *
           chi2(static_cast<int64_t>(q * mod1)) * std::conj(chi2(n)) *
           static_cast<double>(q_prime * m1_pow) * gauss_epsilon(chi1) *
           std::sqrt(static_cast<double>(mod1)) *
           chi1(static_cast<int64_t>(q_prime * mod2 * mod3)) * std::conj(chi1(reduced));
}

// Literal sum over alpha mod q*M1*M2 of chi1(alpha) chi2(alpha)
// e(alpha (inv(M3) M2 m + n) / (q M1 M2)), with inv(M3) taken mod q M1 (any
// lift gives the same value since the difference contributes whole turns).
inline cplx charsum_c2_literal(int64_t m, int64_t n, uint64_t q, const PrimeCharacter& chi1,
                               const PrimeCharacter& chi2, uint64_t mod3) {
    const uint64_t mod1 = chi1.modulus();
    const uint64_t mod2 = chi2.modulus();
    if (std::gcd(q * mod1, mod3) != 1)
        throw std::invalid_argument("charsum_c2_literal: requires gcd(q M1, M3) = 1");
    const uint64_t ring = q * mod1 * mod2;
    const uint64_t m3_inv = mod_inverse(mod3 % (q * mod1), q * mod1);
    const int64_t phase_num =
        static_cast<int64_t>(m3_inv * mod2) * m + n;
    cplx total = 0.0;
    for (uint64_t alpha = 0; alpha < ring; ++alpha)
        total += chi1(static_cast<int64_t>(alpha)) * chi2(static_cast<int64_t>(alpha)) *
                 e_ratio(static_cast<int64_t>(alpha) * phase_num, ring);
    return total;
}

// --------------------------------------------------------------------------
// Third Poisson step (the Cauchy step), modulus q1*q2*M1, congruence-gated.
// --------------------------------------------------------------------------

namespace detail {

// residue class forced on the summation variable: a === -M2 inv(M3) m (mod q)
inline uint64_t forced_residue(int64_t m, uint64_t q, uint64_t mod2, uint64_t mod3) {
    if (q == 1) return 0;
    const uint64_t inv3 = mod_inverse(mod3 % q, q);
    i128 r = -static_cast<i128>(mod2) * static_cast<i128>(inv3) * static_cast<i128>(m);
    r %= static_cast<i128>(q);
    if (r < 0) r += static_cast<i128>(q);
    return static_cast<uint64_t>(r);
}

} // namespace detail

// Literal sum over a mod q1*q2*M1, restricted to the residue classes forced by
// both congruences, of conj(chi1(M2 m1 + M3 a)) chi1(M2 m2 + M3 a) e(z a / (q1 q2 M1)).
inline cplx charsum_c3_literal(int64_t m_a, int64_t m_b, int64_t z, uint64_t q1, uint64_t q2,
                               const PrimeCharacter& chi1, uint64_t mod2, uint64_t mod3) {
    const uint64_t mod1 = chi1.modulus();
    if (std::gcd(q1 * q2, mod1) != 1 || std::gcd(q1 * q2, mod3) != 1)
        throw std::invalid_argument("charsum_c3_literal: requires gcd(q1 q2, M1 M3) = 1");
    const uint64_t ring = q1 * q2 * mod1;
    const uint64_t r1 = detail::forced_residue(m_a, q1, mod2, mod3);
    const uint64_t r2 = detail::forced_residue(m_b, q2, mod2, mod3);
    cplx total = 0.0;
    for (uint64_t a = 0; a < ring; ++a) {
        if (a % q1 != r1 || a % q2 != r2) continue;
        const int64_t sa = static_cast<int64_t>(a);
        total += std::conj(chi1(static_cast<int64_t>(mod2) * m_a + static_cast<int64_t>(mod3) * sa)) *
                 chi1(static_cast<int64_t>(mod2) * m_b + static_cast<int64_t>(mod3) * sa) *
                 e_ratio(z * sa, ring);
    }
    return total;
}

// Closed form via the CRT split: the q1q2-part collapses to
// gcd(q1,q2) e(inv(M1) z beta0 / (q1 q2)) on gcd(q1,q2) | z (beta0 the common
// lift of the two forced residues), and the M1-part is a unit phase times the
// complete sum S(M2(m_a - m_b), inv(q1 q2 M3) z) over F_M1.
inline cplx charsum_c3(int64_t m_a, int64_t m_b, int64_t z, uint64_t q1, uint64_t q2,
                       const PrimeCharacter& chi1, uint64_t mod2, uint64_t mod3) {
    const uint64_t mod1 = chi1.modulus();
    if (std::gcd(q1 * q2, mod1) != 1 || std::gcd(q1 * q2, mod3) != 1)
        throw std::invalid_argument("charsum_c3: requires gcd(q1 q2, M1 M3) = 1");
    if (!chi1.is_primitive())
        throw std::invalid_argument("charsum_c3: requires primitive chi1");
    const uint64_t g = std::gcd(q1, q2);
    const uint64_t r1 = detail::forced_residue(m_a, q1, mod2, mod3);
    const uint64_t r2 = detail::forced_residue(m_b, q2, mod2, mod3);
    const auto lift = crt_general(r1, q1, r2, q2);
    if (!lift) return cplx(0.0, 0.0); // incompatible congruences: empty sum
    if (z % static_cast<int64_t>(g) != 0) return cplx(0.0, 0.0);

    const uint64_t qq = q1 * q2;
    const uint64_t beta0 = lift->first;
    const uint64_t m1_inv = mod_inverse(mod1 % qq, qq);
    const cplx qq_part =
        static_cast<double>(g) *
        e_ratio(static_cast<int64_t>(m1_inv) * z * static_cast<int64_t>(beta0), qq);

    const uint64_t qq_inv = mod_inverse(qq % mod1, mod1);
    const uint64_t m3_inv = mod_inverse(mod3 % mod1, mod1);
    const int64_t twist = static_cast<int64_t>(mul_mod(qq_inv, m3_inv, mod1));
    const int64_t shift = static_cast<int64_t>(mod2) * (m_a - m_b);
    const cplx eta = e_ratio(-twist * z * static_cast<int64_t>(mod2) * m_b, mod1);
    return eta * frak_s(chi1, shift, twist * z) * qq_part;
}

// --------------------------------------------------------------------------
// Residual harnesses.
// --------------------------------------------------------------------------

struct PoissonMCheck {
    cplx direct;
    cplx dual;
    double residual = 0.0;
    int64_t dual_terms = 0;
};

// One Poisson identity in isolation, at a fixed (q, a, b) cell and physical
// frequency n: the direct sum over the V-window against the delta kernel
// versus (N/(q M1 M3)) times the dual sum of closed character sums against
// the inner oscillatory integral, truncated at the standard cutoff.
inline PoissonMCheck poisson_m_verify(const SumGeometry& geo, const PrimeCharacter& chi3,
                                      uint64_t q, uint64_t a, uint64_t b, int64_t n,
                                      double quad_tol = 1e-10) {
    if (!chi3.is_primitive())
        throw std::invalid_argument("poisson_m_verify: requires primitive chi3");
    if (chi3.modulus() != geo.m3)
        throw std::invalid_argument("poisson_m_verify: chi3 modulus disagrees with geometry");
    const uint64_t qm1 = q * geo.m1;
    const double kernel_x = static_cast<double>(q) / geo.q_scale;
    const double hs = geo.h_scale();
    const SmoothWeight& V = weight_V();

    PoissonMCheck check;
    const auto mlo = static_cast<int64_t>(std::floor(geo.n_size * 0.5));
    const auto mhi = static_cast<int64_t>(std::ceil(geo.n_size * 3.0));
    const int64_t cell = static_cast<int64_t>(a + q * b);
    for (int64_t m = mlo; m <= mhi; ++m)
        check.direct += chi3(m) * e_ratio(-m * cell, qm1) *
                        h(kernel_x, static_cast<double>(n - m) / hs) *
                        V(static_cast<double>(m) / geo.n_size);

    // the closed form is supported on one residue class mod q*M1
    const int64_t cut = geo.m_cutoff();
    for (int64_t md = -cut; md <= cut; ++md) {
        const cplx coeff = charsum_c1(md, q, a, b, chi3, geo.m1);
        if (coeff == cplx(0.0, 0.0)) continue;
        check.dual += coeff * integral_I(static_cast<double>(md), static_cast<double>(n),
                                         static_cast<double>(q), geo, quad_tol).value;
        ++check.dual_terms;
    }
    check.dual *= geo.n_size / (static_cast<double>(qm1) * static_cast<double>(geo.m3));
    check.residual = std::abs(check.direct - check.dual);
    return check;
}

struct TSumCheck {
    cplx direct;
    cplx dual;
    double residual = 0.0;
    bool compatible = false;
    int64_t z_cutoff = 0;
    double max_l_scaled = 0.0; // max |L| q1 q2 / Q^2 over the dual row
};

// The Cauchy-step inner sum T(m_a, m_b, q1, q2): directly over the integers in
// the U-window satisfying both forced congruences, and via its Poisson dual
// (R/(q1 q2 M1)) sum_z C3(z) L(z).  Incompatible congruences make both sides
// empty.
inline TSumCheck t_sum(int64_t m_a, int64_t m_b, uint64_t q1, uint64_t q2,
                       const PrimeCharacter& chi1, const SumGeometry& geo, double block_r) {
    const uint64_t mod1 = chi1.modulus();
    if (mod1 != geo.m1)
        throw std::invalid_argument("t_sum: chi1 modulus disagrees with geometry");
    if (std::gcd(q1 * q2, geo.m1) != 1 || std::gcd(q1 * q2, geo.m3) != 1)
        throw std::invalid_argument("t_sum: requires gcd(q1 q2, M1 M3) = 1");
    const uint64_t r1 = detail::forced_residue(m_a, q1, geo.m2, geo.m3);
    const uint64_t r2 = detail::forced_residue(m_b, q2, geo.m2, geo.m3);

    TSumCheck check;
    check.compatible = crt_general(r1, q1, r2, q2).has_value();
    if (!check.compatible) return check;

    const SmoothWeight& U = weight_U();
    auto in_class = [](int64_t n, uint64_t q, uint64_t r) {
        int64_t v = n % static_cast<int64_t>(q);
        if (v < 0) v += static_cast<int64_t>(q);
        return static_cast<uint64_t>(v) == r;
    };
    std::vector<int64_t> nlist;
    const auto nmax = static_cast<int64_t>(std::ceil(2.0 * block_r)) + 1;
    for (int64_t n = -nmax; n <= nmax; ++n) {
        if (!in_class(n, q1, r1) || !in_class(n, q2, r2)) continue;
        if (U(static_cast<double>(n) / block_r) > 0.0) nlist.push_back(n);
    }
    if (!nlist.empty()) {
        std::vector<double> nd(nlist.size());
        for (size_t i = 0; i < nlist.size(); ++i) nd[i] = static_cast<double>(nlist[i]);
        const std::vector<cplx> j1 =
            integral_J_row(static_cast<double>(m_a), nd, static_cast<double>(q1), geo);
        const std::vector<cplx> j2 =
            integral_J_row(static_cast<double>(m_b), nd, static_cast<double>(q2), geo);
        for (size_t i = 0; i < nlist.size(); ++i) {
            const int64_t n = nlist[i];
            check.direct += std::conj(chi1(static_cast<int64_t>(geo.m2) * m_a +
                                           static_cast<int64_t>(geo.m3) * n)) *
                            chi1(static_cast<int64_t>(geo.m2) * m_b +
                                 static_cast<int64_t>(geo.m3) * n) *
                            j1[i] * std::conj(j2[i]) * U(static_cast<double>(n) / block_r);
        }
    }

    const double qq = static_cast<double>(q1 * q2);
    check.z_cutoff = static_cast<int64_t>(std::ceil(
        3.0 * (2.0 * geo.n_size * static_cast<double>(q1 + q2) / static_cast<double>(geo.m2) +
               10.0 + 3.0 * qq * static_cast<double>(geo.m1) / block_r)));
    const LRow row = integral_L_row(static_cast<double>(m_a), static_cast<double>(m_b),
                                    check.z_cutoff, static_cast<double>(q1),
                                    static_cast<double>(q2), block_r, geo);
    check.max_l_scaled = row.max_scaled_magnitude;
    for (int64_t z = -check.z_cutoff; z <= check.z_cutoff; ++z) {
        const cplx coeff = charsum_c3(m_a, m_b, z, q1, q2, chi1, geo.m2, geo.m3);
        if (coeff == cplx(0.0, 0.0)) continue;
        check.dual += coeff * row.values[static_cast<size_t>(z + check.z_cutoff)];
    }
    check.dual *= block_r / (qq * static_cast<double>(geo.m1));
    check.residual = std::abs(check.direct - check.dual);
    return check;
}

} // namespace charsum
