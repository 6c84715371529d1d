#pragma once

// Adaptive Gauss-Kronrod 15(7) quadrature.  Bisect the interval with the
// largest local error estimate until the summed estimate meets the absolute
// tolerance.  Works for real and complex integrands.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <queue>
#include <vector>

#include "common.hpp"

namespace charsum {

namespace gk15 {
// Kronrod nodes on [-1,1] (symmetric; 0 plus 7 positive abscissae)
inline constexpr double nodes[8] = {
    0.000000000000000000000000000000000,
    0.207784955007898467600689403773245,
    0.405845151377397166906606412076961,
    0.586087235467691130294144838258730,
    0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,
    0.949107912342758524526189684047851,
    0.991455371120812639206854697526329,
};
inline constexpr double kronrod_w[8] = {
    0.209482141084727828012999174891714,
    0.204432940075298892414161999234649,
    0.190350578064785409913256402421014,
    0.169004726639267902826583426598550,
    0.140653259715525918745189590510238,
    0.104790010322250183839876322541518,
    0.063092092629978553290700663189204,
    0.022935322010529224963732008058970,
};
// embedded 7-point Gauss weights, aligned with nodes[0], nodes[2], nodes[4], nodes[6]
inline constexpr double gauss_w[4] = {
    0.417959183673469387755102040816327,
    0.381830050505118944950369775488975,
    0.279705391489276667901467771423780,
    0.129484966168869693270611432679082,
};
} // namespace gk15

template <typename T>
struct QuadResult {
    T value{};
    double error_estimate = 0.0;
    bool converged = false;
    size_t evaluations = 0;
};

namespace detail {

template <typename F, typename T>
void gk15_panel(const F& f, double a, double b, T& kronrod, double& err) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    T k{};
    T g{};
    for (int i = 0; i < 8; ++i) {
        T fp = f(mid + half * gk15::nodes[i]);
        T fm = (i == 0) ? fp : f(mid - half * gk15::nodes[i]);
        T pair = (i == 0) ? fp : fp + fm;
        k += gk15::kronrod_w[i] * pair;
        if (i % 2 == 0) g += gk15::gauss_w[i / 2] * pair;
    }
    kronrod = k * half;
    err = std::abs(k * half - g * half);
}

} // namespace detail

template <typename T, typename F>
QuadResult<T> adaptive_integrate(const F& f, double a, double b, double abs_tol,
                                 size_t max_panels = 4000) {
    struct Panel {
        double a, b, err;
        T val;
        bool operator<(const Panel& o) const { return err < o.err; }
    };
    QuadResult<T> result;
    if (a == b) { result.converged = true; return result; }

    std::priority_queue<Panel> heap;
    T v0;
    double e0;
    detail::gk15_panel(f, a, b, v0, e0);
    result.evaluations = 15;
    heap.push({a, b, e0, v0});
    T total = v0;
    double total_err = e0;

    size_t panels = 1;
    while (total_err > abs_tol && panels < max_panels) {
        Panel worst = heap.top();
        heap.pop();
        double mid = 0.5 * (worst.a + worst.b);
        T v1, v2;
        double e1, e2;
        detail::gk15_panel(f, worst.a, mid, v1, e1);
        detail::gk15_panel(f, mid, worst.b, v2, e2);
        result.evaluations += 30;
        total += (v1 + v2) - worst.val;
        total_err += (e1 + e2) - worst.err;
        heap.push({worst.a, mid, e1, v1});
        heap.push({mid, worst.b, e2, v2});
        ++panels;
    }
    result.value = total;
    result.error_estimate = total_err;
    result.converged = total_err <= abs_tol;
    return result;
}

// Convenience wrappers.
template <typename F>
QuadResult<double> integrate_real(const F& f, double a, double b, double abs_tol,
                                  size_t max_panels = 4000) {
    return adaptive_integrate<double>(f, a, b, abs_tol, max_panels);
}

template <typename F>
QuadResult<cplx> integrate_complex(const F& f, double a, double b, double abs_tol,
                                   size_t max_panels = 4000) {
    return adaptive_integrate<cplx>(f, a, b, abs_tol, max_panels);
}

} // namespace charsum
