#pragma once

// Complete one-variable character sums over F_p of the shape
//
//   S(m, n) = sum over x in F_p* of chi(x) conj(chi)(m + x) e(nx/p)
//
// together with a two-variable rewrite through the Gauss sum, a square-root
// cancellation scan, and a Newton polygon nondegeneracy test for bivariate
// exponential sums.

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "characters.hpp"
#include "common.hpp"
#include "modular.hpp"

namespace charsum {

// Direct evaluation, O(p) per call.
inline cplx frak_s(const PrimeCharacter& chi, int64_t m, int64_t n) {
    const uint64_t p = chi.modulus();
    cplx total = 0.0;
    for (uint64_t x = 1; x < p; ++x)
        total += chi(static_cast<int64_t>(x)) * std::conj(chi(m + static_cast<int64_t>(x))) *
                 e_ratio(n * static_cast<int64_t>(x), p);
    return total;
}

// Opening conj(chi) with the Gauss sum turns S(m, n) into a normalized
// two-variable sum: (1/g_chi) sum over x1, x2 in F_p* of
// chi(x1) chi(x2) e((n x1 + m x2 + x1 x2)/p).  Requires mn != 0 mod p.
inline cplx frak_s_via_gauss(const PrimeCharacter& chi, int64_t m, int64_t n) {
    const uint64_t p = chi.modulus();
    if (!chi.is_primitive())
        throw std::invalid_argument("frak_s_via_gauss: character must be primitive");
    if (m % static_cast<int64_t>(p) == 0 || n % static_cast<int64_t>(p) == 0)
        throw std::invalid_argument("frak_s_via_gauss: both shifts must be nonzero mod p");
    cplx total = 0.0;
    for (uint64_t x1 = 1; x1 < p; ++x1) {
        cplx inner = 0.0;
        for (uint64_t x2 = 1; x2 < p; ++x2) {
            int64_t phase = n * static_cast<int64_t>(x1) + m * static_cast<int64_t>(x2) +
                            static_cast<int64_t>(x1 * x2);
            inner += chi(static_cast<int64_t>(x2)) * e_ratio(phase, p);
        }
        total += chi(static_cast<int64_t>(x1)) * inner;
    }
    return total / gauss_sum(chi);
}

// max over primitive chi mod p and m, n in F_p* of |S(m, n)| / sqrt(p).
// Square-root cancellation predicts this stays bounded by a small constant.
inline double deligne_ratio(uint64_t p) {
    if (!is_prime(p) || p == 2)
        throw std::invalid_argument("deligne_ratio: modulus must be an odd prime");
    std::vector<cplx> root(p);
    for (uint64_t t = 0; t < p; ++t) root[t] = e_ratio(static_cast<int64_t>(t), p);
    double max_sq = 0.0;
    for (uint64_t k = 1; k < p - 1; ++k) {
        PrimeCharacter chi(p, k);
        std::vector<cplx> w(p);
        for (uint64_t m = 1; m < p; ++m) {
            for (uint64_t x = 1; x < p; ++x)
                w[x] = chi(static_cast<int64_t>(x)) *
                       std::conj(chi(static_cast<int64_t>((m + x) % p)));
            for (uint64_t n = 1; n < p; ++n) {
                cplx s = 0.0;
                for (uint64_t x = 1; x < p; ++x) s += w[x] * root[n * x % p];
                max_sq = std::max(max_sq, std::norm(s));
            }
        }
    }
    return std::sqrt(max_sq / static_cast<double>(p));
}

// ---------------------------------------------------------------------------
// Newton polygon nondegeneracy for sums of e(f(x1, x2)/p) with f a Laurent
// polynomial.  The polygon is the convex hull of the exponent vectors of f
// together with the origin.  For every face (vertex or edge) not containing
// the origin, the face polynomial f_tau must have no critical point on the
// torus: f_tau = x1 d(f_tau)/dx1 = x2 d(f_tau)/dx2 = 0 must be unsolvable
// with x1, x2 both nonzero.  We certify this over F_p by a full torus scan.
// ---------------------------------------------------------------------------

struct Monomial2 {
    int64_t coeff;
    int e1;
    int e2;
};

struct NewtonPolygonReport {
    int dimension = 0;        // affine dimension of the polygon (0, 1, or 2)
    int faces_checked = 0;    // vertices and edges not containing the origin
    int degenerate_faces = 0; // faces whose critical locus meets the torus
    bool nondegenerate = false;
};

namespace detail {

struct LatticePoint {
    int64_t x, y;
    bool operator==(const LatticePoint& o) const { return x == o.x && y == o.y; }
    bool operator<(const LatticePoint& o) const {
        return x != o.x ? x < o.x : y < o.y;
    }
};

inline int64_t cross(const LatticePoint& o, const LatticePoint& a, const LatticePoint& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Monotone chain; returns hull vertices in counterclockwise order without
// collinear interior points.
inline std::vector<LatticePoint> convex_hull(std::vector<LatticePoint> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const size_t n = pts.size();
    if (n <= 2) return pts;
    std::vector<LatticePoint> hull(2 * n);
    size_t k = 0;
    for (size_t i = 0; i < n; ++i) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    const size_t lower = k + 1;
    for (size_t i = n - 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

inline bool segment_contains(const LatticePoint& a, const LatticePoint& b,
                             const LatticePoint& q) {
    if (cross(a, b, q) != 0) return false;
    return std::min(a.x, b.x) <= q.x && q.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= q.y && q.y <= std::max(a.y, b.y);
}

// Evaluates the face polynomial and its two logarithmic derivatives at a
// torus point, all mod p.  Negative exponents go through the inverse.
inline void face_values_at(const std::vector<Monomial2>& face, uint64_t p,
                           uint64_t t1, uint64_t t2, uint64_t& f, uint64_t& d1,
                           uint64_t& d2) {
    f = d1 = d2 = 0;
    for (const auto& mono : face) {
        auto power = [p](uint64_t base, int e) {
            if (e >= 0) return mod_pow(base, static_cast<uint64_t>(e), p);
            return mod_pow(mod_inverse(base, p), static_cast<uint64_t>(-e), p);
        };
        int64_t cr = mono.coeff % static_cast<int64_t>(p);
        if (cr < 0) cr += static_cast<int64_t>(p);
        uint64_t term = mul_mod(static_cast<uint64_t>(cr),
                                mul_mod(power(t1, mono.e1), power(t2, mono.e2), p), p);
        auto times_exp = [p](uint64_t t, int e) {
            int64_t er = e % static_cast<int64_t>(p);
            if (er < 0) er += static_cast<int64_t>(p);
            return mul_mod(t, static_cast<uint64_t>(er), p);
        };
        f = (f + term) % p;
        d1 = (d1 + times_exp(term, mono.e1)) % p;
        d2 = (d2 + times_exp(term, mono.e2)) % p;
    }
}

} // namespace detail

inline NewtonPolygonReport newton_polygon_nondegenerate(std::vector<Monomial2> monomials,
                                                        uint64_t p) {
    if (!is_prime(p) || p == 2)
        throw std::invalid_argument("newton_polygon_nondegenerate: modulus must be an odd prime");

    // Merge repeated exponent vectors and drop anything that vanishes mod p.
    std::vector<Monomial2> reduced;
    for (const auto& mono : monomials) {
        bool merged = false;
        for (auto& r : reduced)
            if (r.e1 == mono.e1 && r.e2 == mono.e2) {
                r.coeff += mono.coeff;
                merged = true;
                break;
            }
        if (!merged) reduced.push_back(mono);
    }
    std::erase_if(reduced, [p](const Monomial2& m) {
        return m.coeff % static_cast<int64_t>(p) == 0;
    });

    NewtonPolygonReport report;
    std::vector<detail::LatticePoint> pts{{0, 0}};
    for (const auto& mono : reduced) pts.push_back({mono.e1, mono.e2});
    auto hull = detail::convex_hull(pts);

    if (hull.size() <= 1) {
        report.dimension = 0;
        return report;
    }
    bool planar = false;
    for (size_t i = 2; i < hull.size() && !planar; ++i)
        planar = detail::cross(hull[0], hull[1], hull[i]) != 0;
    if (hull.size() == 2 || !planar) {
        report.dimension = 1;
        return report;
    }
    report.dimension = 2;

    const detail::LatticePoint origin{0, 0};
    std::vector<std::vector<Monomial2>> faces;

    for (const auto& v : hull) {
        if (v == origin) continue;
        std::vector<Monomial2> face;
        for (const auto& mono : reduced)
            if (mono.e1 == v.x && mono.e2 == v.y) face.push_back(mono);
        faces.push_back(std::move(face));
    }
    for (size_t i = 0; i < hull.size(); ++i) {
        const auto& a = hull[i];
        const auto& b = hull[(i + 1) % hull.size()];
        if (detail::segment_contains(a, b, origin)) continue;
        std::vector<Monomial2> face;
        for (const auto& mono : reduced)
            if (detail::segment_contains(a, b, {mono.e1, mono.e2})) face.push_back(mono);
        faces.push_back(std::move(face));
    }

    report.faces_checked = static_cast<int>(faces.size());
    for (const auto& face : faces) {
        bool degenerate = false;
        for (uint64_t t1 = 1; t1 < p && !degenerate; ++t1)
            for (uint64_t t2 = 1; t2 < p && !degenerate; ++t2) {
                uint64_t f, d1, d2;
                detail::face_values_at(face, p, t1, t2, f, d1, d2);
                degenerate = (f == 0 && d1 == 0 && d2 == 0);
            }
        if (degenerate) ++report.degenerate_faces;
    }
    report.nondegenerate = (report.degenerate_faces == 0);
    return report;
}

} // namespace charsum
