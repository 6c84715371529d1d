#pragma once

// The exponential-bump family every smoothing in this library is built from.
//
// smooth_step s(t): 0 for t <= 0, 1 for t >= 1, C^inf transition in between,
// all derivatives vanishing at both ends.  The weights are differences of
// scaled steps, which makes their plateau values exact (no quadrature in the
// construction) and makes the dyadic partition identities telescoping:
//
//   W(t) = s2(t) - s2(t/sqrt2), s2(t) = s((t-1)/(sqrt2-1))
//          supp [1,2], and sum_nu W(t/2^{nu/2}) = 1 for t >= 1
//   V(t) = s(2t-1) - s(t-2)           supp [1/2,3], identically 1 on [1,2]
//   U(t) = s(2|t|-1) - s(|t|-1)       even, supp |t| in [1/2,2],
//          and sum_nu U(t/2^nu) = 1 for t >= 1
//
// omega(t) = c_w exp(-1/((t-1/2)(1-t))) on (1/2,1) is the delta-symbol bump;
// c_w normalizes its integral to 1 (value frozen from a high-precision run,
// re-verified by quadrature in the tests).

#include <array>
#include <cmath>
#include <stdexcept>

namespace charsum {

inline double smooth_step(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    double f1 = std::exp(-1.0 / t);
    double f2 = std::exp(-1.0 / (1.0 - t));
    return f1 / (f1 + f2);
}

// s'(t) = s(1-s)(1/t^2 + 1/(1-t)^2); exact closed form, used as the base of
// the finite-difference ladder for higher orders.
inline double smooth_step_deriv(double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    double s = smooth_step(t);
    double a = 1.0 / (t * t), b = 1.0 / ((1.0 - t) * (1.0 - t));
    return s * (1.0 - s) * (a + b);
}

class BumpOmega {
public:
    // 1 / integral of exp(-1/((t-1/2)(1-t))) over (1/2,1)
    static constexpr double c_omega = 83748827.9496645980221218;

    double operator()(double t) const {
        if (t <= 0.5 || t >= 1.0) return 0.0;
        return c_omega * std::exp(-1.0 / ((t - 0.5) * (1.0 - t)));
    }
};

class SmoothWeight {
public:
    enum class Kind { W, V, U };

    explicit SmoothWeight(Kind kind) : kind_(kind) {}

    Kind kind() const { return kind_; }

    double operator()(double t) const {
        switch (kind_) {
        case Kind::W: return s2(t) - s2(t / sqrt2_);
        case Kind::V: return smooth_step(2.0 * t - 1.0) - smooth_step(t - 2.0);
        case Kind::U: {
            double a = std::abs(t);
            return smooth_step(2.0 * a - 1.0) - smooth_step(a - 1.0);
        }
        }
        return 0.0;
    }

    // closed interval outside of which the weight vanishes (for U: |t| range)
    std::pair<double, double> support() const {
        switch (kind_) {
        case Kind::W: return {1.0, 2.0};
        case Kind::V: return {0.5, 3.0};
        case Kind::U: return {0.5, 2.0};
        }
        return {0.0, 0.0};
    }

    // Derivatives up to order 4.  Order 1 is assembled from the closed-form
    // step derivative; orders 2..4 use 4th-order central differences on the
    // next order down.  Accuracy degrades near the support edges where the
    // true derivatives blow up in magnitude; callers use these for
    // boundedness reporting, not for identities.
    double derivative(int order, double t) const {
        if (order < 0 || order > 4)
            throw std::invalid_argument("SmoothWeight::derivative: order must be 0..4");
        if (order == 0) return (*this)(t);
        if (order == 1) return d1(t);
        const double h = 5e-3;
        static constexpr std::array<double, 5> stencil = {1.0, -8.0, 0.0, 8.0, -1.0};
        double acc = 0.0;
        for (int i = -2; i <= 2; ++i)
            acc += stencil[static_cast<size_t>(i + 2)] * derivative(order - 1, t + i * h);
        return acc / (12.0 * h);
    }

private:
    static constexpr double sqrt2_ = 1.4142135623730951;

    static double s2(double t) { return smooth_step((t - 1.0) / (sqrt2_ - 1.0)); }
    static double s2d(double t) { return smooth_step_deriv((t - 1.0) / (sqrt2_ - 1.0)) / (sqrt2_ - 1.0); }

    double d1(double t) const {
        switch (kind_) {
        case Kind::W: return s2d(t) - s2d(t / sqrt2_) / sqrt2_;
        case Kind::V: return 2.0 * smooth_step_deriv(2.0 * t - 1.0) - smooth_step_deriv(t - 2.0);
        case Kind::U: {
            double a = std::abs(t), sign = (t < 0.0) ? -1.0 : 1.0;
            return sign * (2.0 * smooth_step_deriv(2.0 * a - 1.0) - smooth_step_deriv(a - 1.0));
        }
        }
        return 0.0;
    }

    Kind kind_;
};

inline const SmoothWeight& weight_W() { static SmoothWeight w(SmoothWeight::Kind::W); return w; }
inline const SmoothWeight& weight_V() { static SmoothWeight v(SmoothWeight::Kind::V); return v; }
inline const SmoothWeight& weight_U() { static SmoothWeight u(SmoothWeight::Kind::U); return u; }

} // namespace charsum
