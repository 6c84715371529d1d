#pragma once

// Smooth detector for n == 0 built from a unit-mass bump on [1/2, 1].
//
//   delta(n) = (c_Q/Q^2) sum_q c_q(n) h(q/Q, n/Q^2)
//
// with h(x,y) = sum_{j>=1} (1/(xj)) (omega(xj) - omega(|y|/(xj))).  The
// identity is exact for every integer n and every Q > 1: grouping q*j = r
// turns the q-sum into sum over divisors r of n of omega(r/Q) - omega(|n|/(Qr)),
// which cancels pairwise under r -> |n|/r, and for n = 0 the normalization
// c_Q makes the series sum to exactly 1.  The only error is float roundoff.
//
// The K-modified variant detects K | n first: the inner sum over b mod K of
// e(bn/K) is a full geometric sum of K-th roots of unity, exactly K when
// K | n and exactly 0 otherwise, so the detector factors through n/K.

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "bump.hpp"
#include "modular.hpp"

namespace charsum {

// h(x, y): the two omega windows restrict j to [1/(2x), 1/x] and
// (|y|/x, 2|y|/x); both are enumerated in full, so there is no truncation.
inline double h(double x, double y) {
    if (x <= 0.0) throw std::invalid_argument("h: x must be positive");
    static const BumpOmega omega;
    const double ay = std::abs(y);
    double total = 0.0;
    int64_t jlo = std::max<int64_t>(1, static_cast<int64_t>(std::floor(0.5 / x)));
    int64_t jhi = static_cast<int64_t>(std::ceil(1.0 / x));
    for (int64_t j = jlo; j <= jhi; ++j)
        total += omega(x * static_cast<double>(j)) / (x * static_cast<double>(j));
    if (ay > 0.0) {
        jlo = std::max<int64_t>(1, static_cast<int64_t>(std::floor(ay / x)));
        jhi = static_cast<int64_t>(std::ceil(2.0 * ay / x));
        for (int64_t j = jlo; j <= jhi; ++j)
            total -= omega(ay / (x * static_cast<double>(j))) / (x * static_cast<double>(j));
    }
    return total;
}

// c_Q = Q / sum_{r>=1} omega(r/Q).  The sum runs over integers in [Q/2, Q];
// it degenerates to zero exactly at Q = 2, where the only candidate r values
// land on the closed support endpoints of omega.
inline double c_q_constant(double Q) {
    if (Q <= 1.0) throw std::invalid_argument("c_q_constant: Q must exceed 1");
    static const BumpOmega omega;
    double sum = 0.0;
    const auto rlo = static_cast<int64_t>(std::floor(Q / 2.0));
    const auto rhi = static_cast<int64_t>(std::ceil(Q));
    for (int64_t r = std::max<int64_t>(1, rlo); r <= rhi; ++r)
        sum += omega(static_cast<double>(r) / Q);
    if (sum <= 0.0)
        throw std::domain_error("c_q_constant: normalizing sum vanishes (no integer in the open support window)");
    return Q / sum;
}

namespace detail {

// Shared summation core.  Both the plain and the K-modified detector reduce
// to this exact loop, which keeps the two bit-for-bit identical at K = 1.
inline double delta_core(int64_t n, double Q, double cq) {
    const double y = static_cast<double>(n) / (Q * Q);
    const auto qmax = static_cast<int64_t>(
        std::floor(std::max(Q, 2.0 * std::abs(y) * Q))) + 1;
    double total = 0.0;
    for (int64_t q = 1; q <= qmax; ++q)
        total += static_cast<double>(ramanujan_sum(static_cast<uint64_t>(q), n)) *
                 h(static_cast<double>(q) / Q, y);
    return cq / (Q * Q) * total;
}

} // namespace detail

inline double delta_approx(int64_t n, double Q) {
    return detail::delta_core(n, Q, c_q_constant(Q));
}

// Detect K | n exactly, then reuse the core on n/K.  The b-sum over K-th
// roots of unity that justifies this is an integer identity, so no float
// work is spent on it.
inline double delta_approx_mod(int64_t n, double Q, uint64_t K) {
    if (K == 0) throw std::invalid_argument("delta_approx_mod: K must be positive");
    if (n % static_cast<int64_t>(K) != 0) return 0.0;
    return detail::delta_core(n / static_cast<int64_t>(K), Q, c_q_constant(Q));
}

class DeltaApproximator {
public:
    explicit DeltaApproximator(double Q, uint64_t K = 1)
        : Q_(Q), K_(K), cq_(c_q_constant(Q)) {
        if (K_ == 0) throw std::invalid_argument("DeltaApproximator: K must be positive");
    }

    double q_parameter() const { return Q_; }
    uint64_t modulus_parameter() const { return K_; }
    double normalization() const { return cq_; }

    double operator()(int64_t n) const {
        if (n % static_cast<int64_t>(K_) != 0) return 0.0;
        return detail::delta_core(n / static_cast<int64_t>(K_), Q_, cq_);
    }

private:
    double Q_;
    uint64_t K_;
    double cq_;
};

struct HScanReport {
    double max_dy_flat = 0.0;     // sup |dh/dy| on the region |y| <= x/2 - margin
    double max_h_times_x = 0.0;   // sup |h(x,y)| * x, the 1/x-scaling constant
    double max_dx_times_x2 = 0.0; // sup |dh/dx| * x^2
    size_t points_scanned = 0;
};

// Grid check of the kernel's flatness in y and its 1/x growth envelope.
// Derivatives are central finite differences; the flat-region claim is exact
// in theory, so the observed values are pure float noise.
inline HScanReport h_property_scan(const std::vector<double>& xs,
                                   const std::vector<double>& ys,
                                   double margin = 0.01, double fd_step = 1e-5) {
    HScanReport report;
    for (double x : xs) {
        if (x <= 0.0 || x > 1.0)
            throw std::invalid_argument("h_property_scan: grid requires 0 < x <= 1");
        for (double y : ys) {
            if (std::abs(y) > 2.0)
                throw std::invalid_argument("h_property_scan: grid requires |y| <= 2");
            const double value = h(x, y);
            const double dy = (h(x, y + fd_step) - h(x, y - fd_step)) / (2.0 * fd_step);
            const double dx = (h(x + fd_step, y) - h(x - fd_step, y)) / (2.0 * fd_step);
            if (std::abs(y) <= x / 2.0 - margin)
                report.max_dy_flat = std::max(report.max_dy_flat, std::abs(dy));
            report.max_h_times_x = std::max(report.max_h_times_x, std::abs(value) * x);
            report.max_dx_times_x2 = std::max(report.max_dx_times_x2, std::abs(dx) * x * x);
            ++report.points_scanned;
        }
    }
    return report;
}

} // namespace charsum
