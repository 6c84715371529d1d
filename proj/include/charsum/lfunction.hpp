#pragma once

// Central values L(1/2, chi) by two independent routes, plus the dyadic
// block decomposition that ties |L(1/2, chi)| to the smooth sums S_chi(N).
//
// Route A truncates the Dirichlet series under a long smooth cutoff; the
// cutoff length M (10 log M)^2 pushes the first dual frequency of the
// character far outside the bandwidth of the weight, so the tail is
// superpolynomially small.  Route B evaluates the series through Hurwitz
// zeta values computed by Euler-Maclaurin.  The two share no code beyond
// the character itself; their agreement is the correctness argument.

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "bump.hpp"
#include "characters.hpp"
#include "common.hpp"
#include "smooth_sums.hpp"

namespace charsum {

struct LValueRecord {
    std::string character_label;
    uint64_t modulus = 0;
    cplx smoothed;                // long smoothed Dirichlet series
    cplx hurwitz;                 // Hurwitz-zeta route
    double discrepancy = 0.0;     // |smoothed - hurwitz|
    double tail_estimate = 0.0;   // analytic bar on the smoothed truncation
    double convexity_ratio = 0.0; // |L| / M^{1/4}
};

// cutoff profile: identically 1 on [0,1], identically 0 from 2 on
inline double lseries_cutoff(double t) {
    if (t <= 1.0) return 1.0;
    if (t >= 2.0) return 0.0;
    return 1.0 - smooth_step(t - 1.0);
}

namespace detail {

// Iterated-partial-summation bar on |sum_{n>X} chi(n) n^{-1/2} (1 - cutoff)|.
// Each pass trades a factor M (the period bounding the iterated character
// integrals) against the cutoff scale X and brings in one more derivative
// of the weight; the stated derivative growth constant 6 is generous for
// the cutoff in use.  Reported, never asserted.
inline double smoothed_tail_bar(uint64_t modulus, double cutoff_length) {
    const double md = static_cast<double>(modulus);
    const double polya_vinogradov = std::sqrt(md) * std::log(md);
    double best = polya_vinogradov * 3.0 / std::sqrt(cutoff_length);
    double factorial = 1.0;
    double power = 1.0;
    for (int k = 1; k <= 25; ++k) {
        factorial *= k;
        power *= 6.0 * md / cutoff_length;
        best = std::min(best,
                        polya_vinogradov * std::sqrt(cutoff_length) * factorial * power);
    }
    return best;
}

inline constexpr std::array<double, 20> bernoulli_even = {
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
    -7709321041217.0 / 510.0,
    2577687858367.0 / 6.0,
    -26315271553053477373.0 / 1919190.0,
    2929993913841559.0 / 6.0,
    -261082718496449122051.0 / 13530.0,
};

} // namespace detail

// zeta(1/2, x) for x > 0 by Euler-Maclaurin after shifting x past 50
inline double hurwitz_zeta_half(double x) {
    if (x <= 0.0) throw std::invalid_argument("hurwitz_zeta_half: x must be positive");
    constexpr double s = 0.5;
    constexpr double shift_threshold = 50.0;
    double head = 0.0;
    double y = x;
    while (y < shift_threshold) {
        head += 1.0 / std::sqrt(y);
        y += 1.0;
    }
    double tail = std::pow(y, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(y, -s);
    double rising = s;                    // s (s+1) ... with 2k-1 factors
    double factorial = 2.0;               // (2k)!
    double ypow = std::pow(y, -s - 1.0);
    for (int k = 1; k <= 20; ++k) {
        tail += detail::bernoulli_even[static_cast<size_t>(k - 1)] / factorial * rising * ypow;
        rising *= (s + 2.0 * k - 1.0) * (s + 2.0 * k);
        factorial *= (2.0 * k + 1.0) * (2.0 * k + 2.0);
        ypow /= y * y;
    }
    return head + tail;
}

inline cplx l_half_hurwitz(const CompositeCharacter& chi) {
    if (chi.conductor() == 1)
        throw std::invalid_argument("l_half_hurwitz: principal character rejected");
    const uint64_t m = chi.modulus();
    cplx total = 0.0;
    for (uint64_t a = 1; a <= m; ++a) {
        const cplx value = chi(static_cast<int64_t>(a));
        if (value == cplx(0.0, 0.0)) continue;
        total += value * hurwitz_zeta_half(static_cast<double>(a) / static_cast<double>(m));
    }
    return total / std::sqrt(static_cast<double>(m));
}

inline cplx l_half_smoothed(const CompositeCharacter& chi, double* tail_estimate = nullptr) {
    if (!chi.is_primitive())
        throw std::invalid_argument("l_half_smoothed: character must be primitive");
    const uint64_t m = chi.modulus();
    if (m < 3) throw std::invalid_argument("l_half_smoothed: modulus must be at least 3");
    const double md = static_cast<double>(m);
    const double lg = 10.0 * std::log(md);
    const double cutoff_length = md * lg * lg;
    const auto nmax = static_cast<int64_t>(std::ceil(2.0 * cutoff_length));
    cplx total = 0.0;
    for (int64_t n = 1; n <= nmax; ++n) {
        const double t = static_cast<double>(n) / cutoff_length;
        const double w = lseries_cutoff(t);
        if (w == 0.0) continue;
        total += chi(n) * (w / std::sqrt(static_cast<double>(n)));
    }
    if (tail_estimate) *tail_estimate = detail::smoothed_tail_bar(m, cutoff_length);
    return total;
}

inline LValueRecord l_value_record(const CompositeCharacter& chi) {
    LValueRecord rec;
    rec.character_label = chi.label();
    rec.modulus = chi.modulus();
    rec.smoothed = l_half_smoothed(chi, &rec.tail_estimate);
    rec.hurwitz = l_half_hurwitz(chi);
    rec.discrepancy = std::abs(rec.smoothed - rec.hurwitz);
    rec.convexity_ratio =
        std::abs(rec.smoothed) / std::pow(static_cast<double>(rec.modulus), 0.25);
    return rec;
}

struct DyadicBlock {
    double n_size = 0.0;   // block scale, 2^{nu/2}
    cplx block_sum;        // S_chi at that scale
    double weight = 0.0;   // |S| / sqrt(N) * (1 + N/sqrt(M))^{-A}
};

// blocks N = 2^{nu/2}, nu = -1, 0, 1, ... up to sqrt(M) (10 log M)^2
inline std::vector<DyadicBlock> dyadic_decompose(const CompositeCharacter& chi,
                                                 double tail_exponent) {
    if (!chi.is_primitive())
        throw std::invalid_argument("dyadic_decompose: character must be primitive");
    const double md = static_cast<double>(chi.modulus());
    const double lg = 10.0 * std::log(md);
    const double top = std::sqrt(md) * lg * lg;
    std::vector<DyadicBlock> blocks;
    for (int nu = -1;; ++nu) {
        const double n_size = std::pow(2.0, static_cast<double>(nu) / 2.0);
        if (n_size > top) break;
        DyadicBlock block;
        block.n_size = n_size;
        block.block_sum = s_chi(chi, n_size, weight_W());
        block.weight = std::abs(block.block_sum) / std::sqrt(n_size) *
                       std::pow(1.0 + n_size / std::sqrt(md), -tail_exponent);
        blocks.push_back(block);
    }
    return blocks;
}

inline double dyadic_aggregate(const std::vector<DyadicBlock>& blocks) {
    double total = 0.0;
    for (const auto& block : blocks) total += block.weight;
    return total;
}

} // namespace charsum
