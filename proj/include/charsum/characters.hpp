#pragma once

// Dirichlet characters of odd prime modulus and of squarefree products of
// distinct odd primes.  A prime character is pinned down by (p, g, k) where g
// is the smallest primitive root of p and chi(g^t) = e(kt/(p-1)); the full
// discrete-log and value tables are precomputed so evaluation inside sum
// loops is two array reads.

#include <memory>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "common.hpp"
#include "modular.hpp"

namespace charsum {

class PrimeCharacter {
public:
    PrimeCharacter(uint64_t p, uint64_t k) : p_(p), k_(k % (p - 1)) {
        if (!is_prime(p) || p == 2)
            throw std::invalid_argument("PrimeCharacter: modulus must be an odd prime");
        g_ = primitive_root(p);
        build_tables();
    }

    uint64_t modulus() const { return p_; }
    uint64_t generator() const { return g_; }
    uint64_t exponent() const { return k_; }
    bool is_principal() const { return k_ == 0; }
    bool is_primitive() const { return k_ != 0; }
    bool is_real() const { return k_ == 0 || 2 * k_ == p_ - 1; }

    // chi(n) for arbitrary integer n, reduced mod p; 0 on multiples of p.
    cplx operator()(int64_t n) const {
        int64_t r = n % static_cast<int64_t>(p_);
        if (r < 0) r += static_cast<int64_t>(p_);
        return values_[static_cast<size_t>(r)];
    }

    // discrete log of a unit residue (undefined for multiples of p)
    uint64_t dlog(uint64_t unit_residue) const { return dlog_[unit_residue % p_]; }

    PrimeCharacter conjugate() const {
        return PrimeCharacter(p_, k_ == 0 ? 0 : p_ - 1 - k_);
    }

    std::string label() const {
        std::ostringstream os;
        os << p_ << ":" << g_ << ":" << k_;
        return os.str();
    }

private:
    void build_tables() {
        dlog_.assign(p_, 0);
        values_.assign(p_, cplx(0.0, 0.0));
        uint64_t v = 1;
        for (uint64_t t = 0; t < p_ - 1; ++t) {
            dlog_[v] = t;
            // phase k*t/(p-1) reduced to [0,1) in exact integers
            values_[v] = e_ratio(static_cast<int64_t>(k_ * t), p_ - 1);
            v = v * g_ % p_;
        }
    }

    uint64_t p_, k_, g_ = 0;
    std::vector<uint64_t> dlog_;
    std::vector<cplx> values_;
};

class CompositeCharacter {
public:
    explicit CompositeCharacter(std::vector<PrimeCharacter> components)
        : components_(std::move(components)) {
        M_ = 1;
        for (const auto& c : components_) {
            for (const auto& d : components_)
                if (&c != &d && c.modulus() == d.modulus())
                    throw std::invalid_argument("CompositeCharacter: component moduli must be distinct");
            M_ *= c.modulus();
        }
    }

    uint64_t modulus() const { return M_; }
    const std::vector<PrimeCharacter>& components() const { return components_; }

    uint64_t conductor() const {
        uint64_t c = 1;
        for (const auto& comp : components_)
            if (comp.is_primitive()) c *= comp.modulus();
        return c;
    }

    bool is_primitive() const { return conductor() == M_; }

    cplx operator()(int64_t n) const {
        cplx v(1.0, 0.0);
        for (const auto& comp : components_) {
            v *= comp(n);
            if (v == cplx(0.0, 0.0)) return v;
        }
        return v;
    }

    CompositeCharacter conjugate() const {
        std::vector<PrimeCharacter> conj;
        conj.reserve(components_.size());
        for (const auto& comp : components_) conj.push_back(comp.conjugate());
        return CompositeCharacter(std::move(conj));
    }

    std::string label() const {
        std::string s;
        for (size_t i = 0; i < components_.size(); ++i) {
            if (i) s += ",";
            s += components_[i].label();
        }
        return s;
    }

private:
    std::vector<PrimeCharacter> components_;
    uint64_t M_;
};

inline std::vector<PrimeCharacter> enumerate_characters(uint64_t p, bool primitive_only) {
    std::vector<PrimeCharacter> out;
    for (uint64_t k = primitive_only ? 1 : 0; k < p - 1; ++k)
        out.emplace_back(p, k);
    return out;
}

// g_chi = sum over units a of chi(a) e(a/p).
inline cplx gauss_sum(const PrimeCharacter& chi) {
    const uint64_t p = chi.modulus();
    cplx total = 0.0;
    for (uint64_t a = 1; a < p; ++a)
        total += chi(static_cast<int64_t>(a)) * e_ratio(static_cast<int64_t>(a), p);
    return total;
}

// Unit phase of the Gauss sum: epsilon = g_chi / sqrt(p) for primitive chi.
inline cplx gauss_epsilon(const PrimeCharacter& chi) {
    if (!chi.is_primitive())
        throw std::invalid_argument("gauss_epsilon: character must be primitive");
    return gauss_sum(chi) / std::sqrt(static_cast<double>(chi.modulus()));
}

// conj(chi)(a) * g_chi == sum_b chi(b) e(ab/p), for any a including 0.
inline bool twisted_gauss_relation_check(const PrimeCharacter& chi, uint64_t a,
                                         double tol = 1e-9) {
    if (!chi.is_primitive())
        throw std::invalid_argument("twisted_gauss_relation_check: character must be primitive");
    const uint64_t p = chi.modulus();
    cplx rhs = 0.0;
    for (uint64_t b = 1; b < p; ++b)
        rhs += chi(static_cast<int64_t>(b)) * e_ratio(static_cast<int64_t>(a * b), p);
    cplx lhs = std::conj(chi(static_cast<int64_t>(a))) * gauss_sum(chi);
    return std::abs(lhs - rhs) < tol;
}

struct CharacterTriple {
    PrimeCharacter chi1;
    PrimeCharacter chi2;
    PrimeCharacter chi3;

    std::string label() const {
        return chi1.label() + "," + chi2.label() + "," + chi3.label();
    }

    CompositeCharacter product() const { return CompositeCharacter({chi1, chi2, chi3}); }
};

inline CharacterTriple quadratic_triple(uint64_t m1, uint64_t m2, uint64_t m3) {
    return CharacterTriple{PrimeCharacter(m1, (m1 - 1) / 2), PrimeCharacter(m2, (m2 - 1) / 2),
                           PrimeCharacter(m3, (m3 - 1) / 2)};
}

inline std::vector<CharacterTriple> enumerate_character_triples(uint64_t m1, uint64_t m2,
                                                                uint64_t m3) {
    std::vector<CharacterTriple> out;
    for (uint64_t k1 = 1; k1 < m1 - 1; ++k1)
        for (uint64_t k2 = 1; k2 < m2 - 1; ++k2)
            for (uint64_t k3 = 1; k3 < m3 - 1; ++k3)
                out.push_back(CharacterTriple{PrimeCharacter(m1, k1), PrimeCharacter(m2, k2),
                                              PrimeCharacter(m3, k3)});
    return out;
}

} // namespace charsum
