#pragma once

// End-to-end reconstruction of the smoothed character sum through the dual
// expansion, in four independently computed forms:
//   (i)   the direct sum over [N, 2N],
//   (ii)  the zero-detector expansion over (n, m, q, a, b) cells,
//   (iii) the first Poisson dual: closed character sums against the inner
//         oscillatory integral,
//   (iv)  the second Poisson dual: nested integrals against both character
//         sums, with the part coming from q coprime to M1 split out.
//
// Every integral table (sample grids, kernel tables, phase matrices) is
// character-free, so a batch of character triples shares one sweep and the
// per-triple work reduces to coefficient dot products.  Rows are swept over
// the nonnegative dual frequencies only; the negative rows follow from
// conjugate symmetry of the integrals (the weights and kernels are real).

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "bump.hpp"
#include "characters.hpp"
#include "common.hpp"
#include "delta_symbol.hpp"
#include "modular.hpp"
#include "oscillatory.hpp"

namespace charsum {

struct PipelineTrace {
    std::string character_label;
    double n_size = 0.0;
    double q_scale = 0.0;
    double normalization = 0.0; // c_Q at this scale
    int64_t q_limit = 0;
    int64_t m_cut = 0;
    int64_t n_cut = 0;

    cplx direct;               // (i)
    cplx delta_expanded;       // (ii)
    cplx poisson_m;            // (iii)
    cplx poisson_n;            // (iv)
    cplx coprime_part;         // (iv) restricted to q coprime to M1
    cplx valuation_remainder;  // (iv) minus coprime_part
    cplx eta;                  // unit phase of the closed r=0 prefactor
    cplx s0_normalized;        // coprime_part divided by the closed prefactor

    double rel_i_ii = 0.0;
    double rel_ii_iii = 0.0;
    double rel_iii_iv = 0.0;
    double remainder_ratio = 0.0; // |valuation_remainder| * M1 / N
};

namespace detail {

inline int64_t positive_mod(int64_t v, int64_t m) {
    int64_t r = v % m;
    return r < 0 ? r + m : r;
}

// root-of-unity table for a small modulus
inline std::vector<cplx> phase_table(uint64_t modulus) {
    std::vector<cplx> table(modulus);
    for (uint64_t t = 0; t < modulus; ++t) table[t] = e_ratio(static_cast<int64_t>(t), modulus);
    return table;
}

// full residue-ring sum D[t] = sum_c chi_prod(c) e(c t / ring); the literal
// character-sum evaluations reduce to lookups in this table
inline std::vector<cplx> ring_dft(const std::vector<cplx>& chi_values, uint64_t ring) {
    const std::vector<cplx> root = phase_table(ring);
    std::vector<cplx> out(ring, cplx(0.0, 0.0));
    for (uint64_t t = 0; t < ring; ++t) {
        cplx acc = 0.0;
        for (uint64_t c = 0; c < ring; ++c) {
            if (chi_values[c] == cplx(0.0, 0.0)) continue;
            acc += chi_values[c] * root[c * t % ring];
        }
        out[t] = acc;
    }
    return out;
}

} // namespace detail

inline std::vector<PipelineTrace> pipeline_reconstruct_batch(
    const std::vector<CharacterTriple>& triples, const SumGeometry& geo) {
    if (triples.empty())
        throw std::invalid_argument("pipeline_reconstruct_batch: need at least one triple");
    for (const auto& t : triples) {
        if (t.chi1.modulus() != geo.m1 || t.chi2.modulus() != geo.m2 ||
            t.chi3.modulus() != geo.m3)
            throw std::invalid_argument("pipeline_reconstruct_batch: character moduli disagree with geometry");
        if (!t.chi1.is_primitive() || !t.chi2.is_primitive() || !t.chi3.is_primitive())
            throw std::invalid_argument("pipeline_reconstruct_batch: characters must be primitive");
    }

    const size_t nt = triples.size();
    const double n_size = geo.n_size;
    const double q_scale = geo.q_scale;
    const double cq = c_q_constant(q_scale);
    const double hs = geo.h_scale();
    const int64_t m1 = static_cast<int64_t>(geo.m1);
    const int64_t m2 = static_cast<int64_t>(geo.m2);
    const int64_t m3 = static_cast<int64_t>(geo.m3);
    const int64_t qmax = geo.q_max();
    const int64_t mcut = geo.m_cutoff();
    const int64_t ncut = geo.n_cutoff();
    const int64_t ntot = 2 * ncut + 1;
    const SmoothWeight& weight_w = weight_W();
    const SmoothWeight& weight_v = weight_V();
    const double delta_norm = cq / (static_cast<double>(m1) * q_scale * q_scale);

    // physical summation ranges
    std::vector<int64_t> ns;
    for (int64_t n = static_cast<int64_t>(std::floor(n_size));
         n <= static_cast<int64_t>(std::ceil(2.0 * n_size)); ++n)
        ns.push_back(n);
    const size_t nns = ns.size();
    const int64_t mlo = static_cast<int64_t>(std::floor(n_size / 2.0));
    const int64_t mhi = static_cast<int64_t>(std::ceil(3.0 * n_size));

    struct TripleData {
        std::vector<cplx> cw; // chi1(n) chi2(n) W(n/N) over ns
        cplx eps1, eps2, eps3;
    };
    std::vector<TripleData> td(nt);
    std::vector<cplx> s_direct(nt), s_delta(nt), acc_iii(nt), acc_iv(nt), acc_iv_r0(nt);

    for (size_t ti = 0; ti < nt; ++ti) {
        const auto& tr = triples[ti];
        td[ti].cw.resize(nns);
        for (size_t k = 0; k < nns; ++k) {
            const int64_t n = ns[k];
            td[ti].cw[k] =
                tr.chi1(n) * tr.chi2(n) * weight_w(static_cast<double>(n) / n_size);
            s_direct[ti] += td[ti].cw[k] * tr.chi3(n);
        }
        td[ti].eps1 = gauss_epsilon(tr.chi1);
        td[ti].eps2 = gauss_epsilon(tr.chi2);
        td[ti].eps3 = gauss_epsilon(tr.chi3);
    }

    // ---- step (ii): detector expansion over (n, m, q, a, b) --------------
    {
        const int64_t dlo = ns.front() - mhi, dhi = ns.back() - mlo;
        const size_t nd = static_cast<size_t>(dhi - dlo + 1);
        std::vector<std::vector<cplx>> conv(nt, std::vector<cplx>(nd, cplx(0.0, 0.0)));
        for (size_t ti = 0; ti < nt; ++ti)
            for (size_t k = 0; k < nns; ++k)
                for (int64_t d = dlo; d <= dhi; ++d) {
                    const int64_t m = ns[k] - d;
                    if (m < mlo || m > mhi) continue;
                    conv[ti][static_cast<size_t>(d - dlo)] +=
                        td[ti].cw[k] * triples[ti].chi3(m) *
                        weight_v(static_cast<double>(m) / n_size);
                }
        std::vector<double> hq(nd);
        for (int64_t q = 1; q <= qmax; ++q) {
            const double kernel_x = static_cast<double>(q) / q_scale;
            for (size_t di = 0; di < nd; ++di)
                hq[di] = h(kernel_x, static_cast<double>(dlo + static_cast<int64_t>(di)) / hs);
            const int64_t qm1 = q * m1;
            const std::vector<cplx> root = detail::phase_table(static_cast<uint64_t>(qm1));
            for (int64_t a = 1; a <= q; ++a) {
                if (std::gcd(a, q) != 1) continue;
                for (int64_t b = 0; b < m1; ++b) {
                    const int64_t cell = a + q * b;
                    for (size_t di = 0; di < nd; ++di) {
                        if (hq[di] == 0.0) continue;
                        const cplx phase =
                            root[static_cast<size_t>(detail::positive_mod(
                                (dlo + static_cast<int64_t>(di)) * cell, qm1))];
                        for (size_t ti = 0; ti < nt; ++ti)
                            s_delta[ti] += phase * hq[di] * conv[ti][di];
                    }
                }
            }
        }
        for (size_t ti = 0; ti < nt; ++ti) s_delta[ti] *= delta_norm;
    }

    // ---- steps (iii) and (iv): the two Poisson duals ---------------------
    std::vector<cplx> a_row, in_row, iv_row, j_row, pn(nns);
    for (int64_t q = 1; q <= qmax; ++q) {
        const double qd = static_cast<double>(q);
        const double kernel_x = qd / q_scale;
        const double alpha = geo.alpha(qd);
        const double beta = geo.beta(qd);
        const bool good3 = std::gcd(q, m3) == 1;
        const bool good2 = std::gcd(q, m2) == 1;
        const int64_t qm1 = q * m1;
        const uint64_t ring2 = static_cast<uint64_t>(qm1 * m2);
        const uint64_t ring3 = static_cast<uint64_t>(qm1 * m3);

        const double rate = 2.6 * std::max({alpha * static_cast<double>(mcut),
                                            beta * static_cast<double>(ncut), 20.0});
        const double du = 1.0 / rate;
        const std::vector<double> ugrid = detail::midpoint_grid(0.5, 3.0, du);
        const std::vector<double> vgrid = detail::midpoint_grid(1.0, 2.0, du);
        const size_t nu = ugrid.size(), nv = vgrid.size();

        std::vector<double> vu(nu), wv(nv);
        for (size_t i = 0; i < nu; ++i) vu[i] = weight_v(ugrid[i]) * du;
        for (size_t j = 0; j < nv; ++j) wv[j] = weight_w(vgrid[j]) * du;

        // kernel tables, real
        std::vector<double> gn(nu * nns), gv(nu * nv);
        for (size_t i = 0; i < nu; ++i) {
            const double nu_i = n_size * ugrid[i];
            for (size_t k = 0; k < nns; ++k)
                gn[i * nns + k] = h(kernel_x, (static_cast<double>(ns[k]) - nu_i) / hs);
            for (size_t j = 0; j < nv; ++j)
                gv[i * nv + j] = h(kernel_x, (n_size * vgrid[j] - nu_i) / hs);
        }

        // second-dual phase matrix, complex
        std::vector<cplx> bmat(nv * static_cast<size_t>(ntot));
        for (size_t j = 0; j < nv; ++j)
            for (int64_t t = 0; t < ntot; ++t)
                bmat[j * static_cast<size_t>(ntot) + static_cast<size_t>(t)] =
                    e_turns(-beta * vgrid[j] * static_cast<double>(t - ncut)) * wv[j];

        const std::vector<cplx> root_qm1 = detail::phase_table(static_cast<uint64_t>(qm1));

        // per-q character data
        uint64_t minv3 = 0;
        int64_t q_prime = q, m1_pow = 1;
        while (q_prime % m1 == 0) {
            q_prime /= m1;
            m1_pow *= m1;
        }
        std::vector<cplx> base2(nt), pref3(nt);
        std::vector<std::vector<cplx>> d12(nt), d3(nt);
        std::vector<int64_t> cells;
        if (good3) {
            minv3 = mod_inverse(static_cast<uint64_t>(m3 % qm1), static_cast<uint64_t>(qm1));
            for (size_t ti = 0; ti < nt; ++ti) {
                pref3[ti] = delta_norm * (n_size / static_cast<double>(qm1 * m3)) *
                            static_cast<double>(qm1) * std::sqrt(static_cast<double>(m3)) *
                            td[ti].eps3 * triples[ti].chi3(qm1);
                if (good2)
                    base2[ti] = td[ti].eps2 * std::sqrt(static_cast<double>(m2)) *
                                triples[ti].chi2(qm1) * static_cast<double>(q_prime * m1_pow) *
                                td[ti].eps1 * std::sqrt(static_cast<double>(m1)) *
                                triples[ti].chi1(q_prime * m2 * m3);
            }
        } else {
            for (int64_t a = 1; a <= q; ++a)
                if (std::gcd(a, q) == 1)
                    for (int64_t b = 0; b < m1; ++b) cells.push_back(a + q * b);
            for (size_t ti = 0; ti < nt; ++ti) {
                std::vector<cplx> chi3_ring(ring3);
                for (uint64_t c = 0; c < ring3; ++c)
                    chi3_ring[c] = triples[ti].chi3(static_cast<int64_t>(c));
                d3[ti] = detail::ring_dft(chi3_ring, ring3);
            }
        }
        if (!good2 || !good3) {
            for (size_t ti = 0; ti < nt; ++ti) {
                std::vector<cplx> chi12_ring(ring2);
                for (uint64_t c = 0; c < ring2; ++c)
                    chi12_ring[c] = triples[ti].chi1(static_cast<int64_t>(c)) *
                                    triples[ti].chi2(static_cast<int64_t>(c));
                d12[ti] = detail::ring_dft(chi12_ring, ring2);
            }
        }

        std::vector<cplx> acc3q(nt, cplx(0.0, 0.0)), acc4q(nt, cplx(0.0, 0.0));

        a_row.assign(nu, cplx(0.0, 0.0));
        in_row.assign(nns, cplx(0.0, 0.0));
        iv_row.assign(nv, cplx(0.0, 0.0));
        j_row.assign(static_cast<size_t>(ntot), cplx(0.0, 0.0));

        for (int64_t md = 0; md <= mcut; ++md) {
            for (size_t i = 0; i < nu; ++i)
                a_row[i] = e_turns(-alpha * static_cast<double>(md) * ugrid[i]) * vu[i];
            std::fill(in_row.begin(), in_row.end(), cplx(0.0, 0.0));
            std::fill(iv_row.begin(), iv_row.end(), cplx(0.0, 0.0));
            std::fill(j_row.begin(), j_row.end(), cplx(0.0, 0.0));
            for (size_t i = 0; i < nu; ++i) {
                const cplx a = a_row[i];
                const double* gn_i = &gn[i * nns];
                for (size_t k = 0; k < nns; ++k) in_row[k] += a * gn_i[k];
                const double* gv_i = &gv[i * nv];
                for (size_t j = 0; j < nv; ++j) iv_row[j] += a * gv_i[j];
            }
            for (size_t j = 0; j < nv; ++j) {
                const cplx c = iv_row[j];
                const cplx* b_j = &bmat[j * static_cast<size_t>(ntot)];
                for (int64_t t = 0; t < ntot; ++t)
                    j_row[static_cast<size_t>(t)] += c * b_j[t];
            }

            for (int sign = 1; sign >= -1; sign -= 2) {
                if (md == 0 && sign < 0) break;
                const int64_t mp = sign * md;
                auto in_at = [&](size_t k) {
                    return sign > 0 ? in_row[k] : std::conj(in_row[k]);
                };
                auto j_at = [&](int64_t t) {
                    return sign > 0 ? j_row[static_cast<size_t>(t)]
                                    : std::conj(j_row[static_cast<size_t>(ntot - 1 - t)]);
                };

                if (good3) {
                    if (std::gcd(detail::positive_mod(mp, q), q) != 1 && q > 1) continue;
                    const int64_t mp_res = detail::positive_mod(mp, qm1);
                    const uint64_t tm = mul_mod(static_cast<uint64_t>(mp_res), minv3,
                                                static_cast<uint64_t>(qm1));
                    for (size_t k = 0; k < nns; ++k)
                        pn[k] = root_qm1[mul_mod(static_cast<uint64_t>(ns[k] % qm1), tm,
                                                 static_cast<uint64_t>(qm1))];
                    // n' lives on one residue class mod q (closed-form support)
                    const int64_t tgt = detail::positive_mod(
                        -static_cast<int64_t>(mul_mod(
                            static_cast<uint64_t>(detail::positive_mod(m2 * mp, qm1)), minv3,
                            static_cast<uint64_t>(qm1))),
                        q);
                    for (size_t ti = 0; ti < nt; ++ti) {
                        const cplx c3b = std::conj(triples[ti].chi3(mp));
                        if (c3b == cplx(0.0, 0.0)) continue;
                        cplx dot3 = 0.0;
                        for (size_t k = 0; k < nns; ++k)
                            dot3 += pn[k] * td[ti].cw[k] * in_at(k);
                        acc3q[ti] += c3b * dot3;

                        cplx dot4 = 0.0;
                        if (good2) {
                            for (int64_t t = detail::positive_mod(tgt + ncut, q); t < ntot;
                                 t += q) {
                                const int64_t np = t - ncut;
                                const int64_t combined = m2 * mp + m3 * np;
                                const int64_t reduced = combined / m1_pow;
                                const cplx c2 = std::conj(triples[ti].chi2(np)) *
                                                std::conj(triples[ti].chi1(reduced));
                                if (c2 == cplx(0.0, 0.0)) continue;
                                dot4 += c2 * j_at(t);
                            }
                            dot4 *= base2[ti];
                        } else {
                            const int64_t off = detail::positive_mod(
                                static_cast<int64_t>(minv3) * m2 * mp_res - ncut,
                                static_cast<int64_t>(ring2));
                            int64_t idx = off;
                            for (int64_t t = 0; t < ntot; ++t) {
                                dot4 += d12[ti][static_cast<size_t>(idx)] * j_at(t);
                                if (++idx == static_cast<int64_t>(ring2)) idx = 0;
                            }
                        }
                        acc4q[ti] += c3b * dot4;
                    }
                } else {
                    for (const int64_t cell : cells) {
                        for (size_t k = 0; k < nns; ++k)
                            pn[k] = root_qm1[static_cast<size_t>(
                                detail::positive_mod(ns[k] * cell, qm1))];
                        const auto c1idx = static_cast<size_t>(
                            detail::positive_mod(mp - cell * m3, static_cast<int64_t>(ring3)));
                        const int64_t off = detail::positive_mod(
                            cell * m2 - ncut, static_cast<int64_t>(ring2));
                        for (size_t ti = 0; ti < nt; ++ti) {
                            const cplx c1 = d3[ti][c1idx];
                            // structurally zero unless q M1 divides the lookup index;
                            // live entries have magnitude at least q M1
                            if (std::norm(c1) < 1e-12) continue;
                            cplx dot3 = 0.0;
                            for (size_t k = 0; k < nns; ++k)
                                dot3 += pn[k] * td[ti].cw[k] * in_at(k);
                            acc3q[ti] += c1 * dot3;
                            cplx dot4 = 0.0;
                            int64_t idx = off;
                            for (int64_t t = 0; t < ntot; ++t) {
                                dot4 += d12[ti][static_cast<size_t>(idx)] * j_at(t);
                                if (++idx == static_cast<int64_t>(ring2)) idx = 0;
                            }
                            acc4q[ti] += c1 * dot4;
                        }
                    }
                }
            }
        }

        for (size_t ti = 0; ti < nt; ++ti) {
            cplx f3, f4;
            if (good3) {
                f3 = pref3[ti];
            } else {
                f3 = delta_norm * (n_size / static_cast<double>(qm1 * m3));
            }
            f4 = f3 * (n_size / static_cast<double>(qm1 * m2));
            acc_iii[ti] += f3 * acc3q[ti];
            const cplx term4 = f4 * acc4q[ti];
            acc_iv[ti] += term4;
            if (q % m1 != 0) acc_iv_r0[ti] += term4;
        }
    }

    // ---- assemble traces --------------------------------------------------
    std::vector<PipelineTrace> traces(nt);
    const double mod_sqrt = std::sqrt(static_cast<double>(m1 * m2 * m3));
    for (size_t ti = 0; ti < nt; ++ti) {
        PipelineTrace& tr = traces[ti];
        tr.character_label = triples[ti].label();
        tr.n_size = n_size;
        tr.q_scale = q_scale;
        tr.normalization = cq;
        tr.q_limit = qmax;
        tr.m_cut = mcut;
        tr.n_cut = ncut;
        tr.direct = s_direct[ti];
        tr.delta_expanded = s_delta[ti];
        tr.poisson_m = acc_iii[ti];
        tr.poisson_n = acc_iv[ti];
        tr.coprime_part = acc_iv_r0[ti];
        tr.valuation_remainder = acc_iv[ti] - acc_iv_r0[ti];
        tr.eta = td[ti].eps1 * td[ti].eps2 * td[ti].eps3 * triples[ti].chi1(m2 * m3) *
                 triples[ti].chi2(m1) * triples[ti].chi3(m1);
        const cplx prefactor = tr.eta * cq * n_size * n_size /
                               (static_cast<double>(m1) * q_scale * q_scale * mod_sqrt);
        tr.s0_normalized = tr.coprime_part / prefactor;
        const double ref = std::max(std::abs(tr.direct), 1e-12);
        tr.rel_i_ii = std::abs(tr.direct - tr.delta_expanded) / ref;
        tr.rel_ii_iii = std::abs(tr.delta_expanded - tr.poisson_m) / ref;
        tr.rel_iii_iv = std::abs(tr.poisson_m - tr.poisson_n) / ref;
        tr.remainder_ratio =
            std::abs(tr.valuation_remainder) * static_cast<double>(m1) / n_size;
    }
    return traces;
}

inline PipelineTrace pipeline_reconstruct(const CharacterTriple& triple,
                                          const SumGeometry& geo) {
    return pipeline_reconstruct_batch({triple}, geo)[0];
}

} // namespace charsum
