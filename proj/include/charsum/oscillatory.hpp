#pragma once

// Oscillatory integrals attached to the dual sums.  Three layers:
//   - the inner u-integral of the delta kernel against V with a linear phase,
//   - the nested (u,v)-integral against W with a second linear phase,
//   - the paired-kernel y-integral against U for the Cauchy step.
// Each gets an adaptive evaluator at a declared tolerance, plus a uniform
// midpoint row evaluator for bulk scans.  The row rate is 2.6 samples per
// unit of total phase frequency (floor 20 per unit length), which resolves
// every oscillation with slack; the unit tests pin grid-vs-adaptive agreement.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "bump.hpp"
#include "common.hpp"
#include "delta_symbol.hpp"
#include "quadrature.hpp"

namespace charsum {

// Geometry of one smoothed-sum instance: tri-prime modulus, sum length N,
// delta-method scale Q, and the dual-sum truncation policy.
struct SumGeometry {
    uint64_t m1 = 0, m2 = 0, m3 = 0;
    double n_size = 0.0;
    double q_scale = 0.0;
    double cutoff_factor = 10.0;

    // Q = sqrt(N / M1), nudged up by 9/8 while the c_Q normalization is
    // degenerate or nearly so.  The normalizing sum over integers in omega's
    // open support window vanishes exactly at Q = 2 and can be within a few
    // ulps of zero nearby; a huge c_Q then amplifies the rounding error of
    // the otherwise exact cancellations by the same factor, so scales with
    // c_Q beyond 1e6 are treated as degenerate too.  The identities tolerate
    // the nudge since they hold for every Q > 1.
    static SumGeometry standard(uint64_t m1, uint64_t m2, uint64_t m3, double n_size,
                                double cutoff_factor = 10.0) {
        if (m1 == 0 || m2 == 0 || m3 == 0 || n_size <= 0.0)
            throw std::invalid_argument("SumGeometry: moduli and N must be positive");
        if (static_cast<double>(m1) > n_size)
            throw std::invalid_argument("SumGeometry: requires M1 <= N");
        SumGeometry geo;
        geo.m1 = m1;
        geo.m2 = m2;
        geo.m3 = m3;
        geo.n_size = n_size;
        geo.cutoff_factor = cutoff_factor;
        geo.q_scale = std::sqrt(n_size / static_cast<double>(m1));
        for (int attempt = 0; attempt < 64; ++attempt) {
            bool conditioned = false;
            try {
                conditioned = c_q_constant(geo.q_scale) <= 1e6;
            } catch (const std::domain_error&) {
            }
            if (conditioned) break;
            geo.q_scale *= 9.0 / 8.0;
        }
        return geo;
    }

    double modulus() const { return static_cast<double>(m1 * m2 * m3); }
    // scale of the delta kernel's y-argument; equals N at the canonical Q
    double h_scale() const { return static_cast<double>(m1) * q_scale * q_scale; }
    double alpha(double q) const { return n_size / (q * static_cast<double>(m1 * m3)); }
    double beta(double q) const { return n_size / (q * static_cast<double>(m1 * m2)); }
    double log_sq_modulus() const {
        double l = std::log(modulus());
        return l * l;
    }

    // largest q with a nonvanishing kernel: q/Q <= max(1, 2*ymax) where
    // ymax = 2N/h_scale bounds |n - Nu| / h_scale over the supports
    int64_t q_max() const {
        double bound = std::max(q_scale, 4.0 * n_size * q_scale / h_scale());
        return static_cast<int64_t>(std::floor(bound + 1e-9));
    }
    int64_t m_cutoff() const {
        return static_cast<int64_t>(std::ceil(
            cutoff_factor * q_scale * static_cast<double>(m1 * m3) * log_sq_modulus() / n_size));
    }
    int64_t n_cutoff() const {
        return static_cast<int64_t>(std::ceil(
            cutoff_factor * q_scale * static_cast<double>(m1 * m2) * log_sq_modulus() / n_size));
    }
};

// Inner integral over the V-window:
//   I(x, v, q) = int_{1/2}^{3} h(q/Q, (v - N u)/h_scale) V(u) e(-alpha x u) du
// where x is the dual frequency of the first Poisson step and v is the
// surviving physical variable.
inline QuadResult<cplx> integral_I(double x, double v, double q, const SumGeometry& geo,
                                   double abs_tol = 1e-10, size_t max_panels = 60000) {
    if (q <= 0.0) throw std::invalid_argument("integral_I: q must be positive");
    const double kernel_x = q / geo.q_scale;
    const double alpha = geo.alpha(q);
    const double hs = geo.h_scale();
    const double n_size = geo.n_size;
    const SmoothWeight& V = weight_V();
    auto f = [&](double u) {
        return h(kernel_x, (v - n_size * u) / hs) * V(u) * e_turns(-alpha * x * u);
    };
    return integrate_complex(f, 0.5, 3.0, abs_tol, max_panels);
}

// Nested integral over the W-window:
//   J(x, y, q) = int_1^2 I(x, N v, q) W(v) e(-beta y v) dv
inline QuadResult<cplx> integral_J(double x, double y, double q, const SumGeometry& geo,
                                   double abs_tol = 1e-9, size_t max_panels = 60000) {
    const double beta = geo.beta(q);
    const double n_size = geo.n_size;
    const SmoothWeight& W = weight_W();
    size_t inner_evals = 0;
    bool inner_ok = true;
    auto f = [&](double v) {
        QuadResult<cplx> inner = integral_I(x, n_size * v, q, geo, abs_tol / 20.0, max_panels);
        inner_evals += inner.evaluations;
        inner_ok = inner_ok && inner.converged;
        return inner.value * W(v) * e_turns(-beta * y * v);
    };
    QuadResult<cplx> outer = integrate_complex(f, 1.0, 2.0, abs_tol, max_panels);
    outer.evaluations += inner_evals;
    outer.converged = outer.converged && inner_ok;
    return outer;
}

// Paired kernel of the Cauchy step.
inline cplx integral_K(double x1, double x2, double y, double q1, double q2,
                       const SumGeometry& geo, double abs_tol = 1e-9) {
    return integral_J(x1, y, q1, geo, abs_tol).value *
           std::conj(integral_J(x2, y, q2, geo, abs_tol).value);
}

// Cauchy-step integral over the U-window at block size R:
//   L(x1, x2, z, q1, q2) = int K(x1, x2, R y) U(y) e(-R y z/(q1 q2 M1)) dy
// integrated over both components of U's support.
inline QuadResult<cplx> integral_L(double x1, double x2, double z, double q1, double q2,
                                   double block_r, const SumGeometry& geo,
                                   double abs_tol = 1e-8, size_t max_panels = 60000) {
    const double phase_scale = block_r * z / (q1 * q2 * static_cast<double>(geo.m1));
    const SmoothWeight& U = weight_U();
    size_t inner_evals = 0;
    bool inner_ok = true;
    auto f = [&](double y) {
        QuadResult<cplx> j1 = integral_J(x1, block_r * y, q1, geo, abs_tol / 30.0, max_panels);
        QuadResult<cplx> j2 = integral_J(x2, block_r * y, q2, geo, abs_tol / 30.0, max_panels);
        inner_evals += j1.evaluations + j2.evaluations;
        inner_ok = inner_ok && j1.converged && j2.converged;
        return j1.value * std::conj(j2.value) * U(y) * e_turns(-phase_scale * y);
    };
    QuadResult<cplx> lo = integrate_complex(f, -2.0, -0.5, abs_tol / 2.0, max_panels);
    QuadResult<cplx> hi = integrate_complex(f, 0.5, 2.0, abs_tol / 2.0, max_panels);
    QuadResult<cplx> out;
    out.value = lo.value + hi.value;
    out.error_estimate = lo.error_estimate + hi.error_estimate;
    out.converged = lo.converged && hi.converged && inner_ok;
    out.evaluations = lo.evaluations + hi.evaluations + inner_evals;
    return out;
}

// ---------------------------------------------------------------------------
// Uniform-grid row evaluators.  These share one sample grid across a whole
// row of output frequencies, which is what makes the bulk scans affordable.
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<double> midpoint_grid(double lo, double hi, double step) {
    std::vector<double> grid;
    grid.reserve(static_cast<size_t>((hi - lo) / step) + 1);
    for (double t = lo + step / 2.0; t < hi; t += step) grid.push_back(t);
    return grid;
}

} // namespace detail

// J(x, y_k, q) for a whole row of y values.
inline std::vector<cplx> integral_J_row(double x, const std::vector<double>& yvals, double q,
                                        const SumGeometry& geo) {
    const double kernel_x = q / geo.q_scale;
    const double alpha = geo.alpha(q);
    const double beta = geo.beta(q);
    const double hs = geo.h_scale();
    const double n_size = geo.n_size;
    double ymax = 0.0;
    for (double y : yvals) ymax = std::max(ymax, std::abs(y));
    const double rate = 2.6 * std::max({alpha * std::abs(x), beta * ymax, 20.0});
    const double du = 1.0 / rate;
    const std::vector<double> ugrid = detail::midpoint_grid(0.5, 3.0, du);
    const std::vector<double> vgrid = detail::midpoint_grid(1.0, 2.0, du);
    const SmoothWeight& V = weight_V();
    const SmoothWeight& W = weight_W();

    std::vector<cplx> au(ugrid.size());
    for (size_t i = 0; i < ugrid.size(); ++i)
        au[i] = e_turns(-alpha * x * ugrid[i]) * (V(ugrid[i]) * du);

    std::vector<cplx> iv(vgrid.size());
    for (size_t j = 0; j < vgrid.size(); ++j) {
        cplx acc = 0.0;
        const double nv = n_size * vgrid[j];
        for (size_t i = 0; i < ugrid.size(); ++i)
            acc += au[i] * h(kernel_x, (nv - n_size * ugrid[i]) / hs);
        iv[j] = acc * (W(vgrid[j]) * du);
    }

    std::vector<cplx> out(yvals.size());
    for (size_t k = 0; k < yvals.size(); ++k) {
        cplx acc = 0.0;
        for (size_t j = 0; j < vgrid.size(); ++j)
            acc += iv[j] * e_turns(-beta * vgrid[j] * yvals[k]);
        out[k] = acc;
    }
    return out;
}

struct LRow {
    std::vector<cplx> values;         // L at z = -zcut .. zcut
    double max_scaled_magnitude = 0.0; // max |L| q1 q2 / Q^2 over the row
};

// L(x1, x2, z, q1, q2) for all integer z with |z| <= zcut, sharing one y-grid.
inline LRow integral_L_row(double x1, double x2, int64_t zcut, double q1, double q2,
                           double block_r, const SumGeometry& geo) {
    const double m1 = static_cast<double>(geo.m1);
    const double freq_j = 2.0 * geo.n_size * block_r / (q1 * m1 * static_cast<double>(geo.m2)) +
                          2.0 * geo.n_size * block_r / (q2 * m1 * static_cast<double>(geo.m2)) + 2.0;
    const double freq_z = block_r * static_cast<double>(zcut) / (q1 * q2 * m1);
    const double rate = 2.6 * std::max({freq_j, freq_z, 20.0});
    const double dy = 1.0 / rate;
    std::vector<double> ygrid = detail::midpoint_grid(-2.0, -0.5, dy);
    {
        std::vector<double> pos = detail::midpoint_grid(0.5, 2.0, dy);
        ygrid.insert(ygrid.end(), pos.begin(), pos.end());
    }
    const SmoothWeight& U = weight_U();

    std::vector<double> scaled(ygrid.size());
    for (size_t i = 0; i < ygrid.size(); ++i) scaled[i] = block_r * ygrid[i];
    const std::vector<cplx> j1 = integral_J_row(x1, scaled, q1, geo);
    const std::vector<cplx> j2 = integral_J_row(x2, scaled, q2, geo);

    std::vector<cplx> kernel(ygrid.size());
    for (size_t i = 0; i < ygrid.size(); ++i)
        kernel[i] = j1[i] * std::conj(j2[i]) * (U(ygrid[i]) * dy);

    LRow row;
    row.values.assign(static_cast<size_t>(2 * zcut + 1), cplx(0.0, 0.0));
    const double phase_unit = block_r / (q1 * q2 * m1);
    for (int64_t z = -zcut; z <= zcut; ++z) {
        cplx acc = 0.0;
        for (size_t i = 0; i < ygrid.size(); ++i)
            acc += kernel[i] * e_turns(-phase_unit * static_cast<double>(z) * ygrid[i]);
        row.values[static_cast<size_t>(z + zcut)] = acc;
        row.max_scaled_magnitude = std::max(
            row.max_scaled_magnitude, std::abs(acc) * q1 * q2 / (geo.q_scale * geo.q_scale));
    }
    return row;
}

} // namespace charsum
