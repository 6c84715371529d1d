#pragma once

// Family experiments: admissibility window for (M1, M2, M3, N), the
// three-term envelope for |S_chi(N)|, ratio records over prime-triple
// families, the delta-feasibility region in the theta simplex, and
// least-squares exponent fits on log-log data.
//
// Sweeps are deterministic: the task list is enumerated in canonical order,
// per-task character samples are seeded by the triple itself, and records
// are sorted canonically before they are returned, so neither worker count
// nor scheduling affects the output.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "characters.hpp"
#include "common.hpp"
#include "modular.hpp"
#include "parallel.hpp"
#include "smooth_sums.hpp"

namespace charsum {

struct RangeCheck {
    bool admissible = false;
    // names of the violated constraints, or of the binding upper branch
    // when the window test passes
    std::vector<std::string> active_constraints;
};

namespace detail {

inline void require_distinct_odd_primes(uint64_t m1, uint64_t m2, uint64_t m3) {
    for (uint64_t m : {m1, m2, m3})
        if (m < 3 || !is_prime(m))
            throw std::invalid_argument("moduli must be odd primes");
    if (m1 == m2 || m1 == m3 || m2 == m3)
        throw std::invalid_argument("moduli must be pairwise distinct");
}

} // namespace detail

// Window: c_lo * M1 <= N <= c_hi * M1 * min{M2^(2/3), M3^2}.  The two
// branches of the min and the weaker M2^2 cap are tracked as separate named
// constraints so callers can see which one binds.
inline RangeCheck validate_range(uint64_t m1, uint64_t m2, uint64_t m3, double n_size,
                                 double c_lo = 1.0, double c_hi = 1.0) {
    detail::require_distinct_odd_primes(m1, m2, m3);
    const double m1d = static_cast<double>(m1);
    const double cap2 = std::pow(static_cast<double>(m2), 2.0 / 3.0);
    const double cap3 = static_cast<double>(m3) * static_cast<double>(m3);
    const double cap2sq = static_cast<double>(m2) * static_cast<double>(m2);
    const double lower = c_lo * m1d;
    const double upper = c_hi * m1d * std::min(cap2, cap3);

    RangeCheck check;
    check.admissible = n_size >= lower && n_size <= upper;
    if (n_size < lower) check.active_constraints.push_back("N>=M1");
    if (n_size > c_hi * m1d * cap2) check.active_constraints.push_back("N<=M1*M2^(2/3)");
    if (n_size > c_hi * m1d * cap3) check.active_constraints.push_back("N<=M1*M3^2");
    if (n_size > c_hi * m1d * cap2sq) check.active_constraints.push_back("N<=M1*M2^2");
    if (check.admissible)
        check.active_constraints.push_back(cap2 <= cap3 ? "N<=M1*M2^(2/3)" : "N<=M1*M3^2");
    return check;
}

inline double admissible_lower(uint64_t m1, double c_lo = 1.0) {
    return c_lo * static_cast<double>(m1);
}

inline double admissible_upper(uint64_t m1, uint64_t m2, uint64_t m3, double c_hi = 1.0) {
    return c_hi * static_cast<double>(m1) *
           std::min(std::pow(static_cast<double>(m2), 2.0 / 3.0),
                    static_cast<double>(m3) * static_cast<double>(m3));
}

// sqrt(M2 M3) + M1^(1/4) sqrt(M2) N^(1/4) + sqrt(M3) N^(3/4), no log-power fudge
inline double bound_value(uint64_t m1, uint64_t m2, uint64_t m3, double n_size) {
    const double m1d = static_cast<double>(m1);
    const double m2d = static_cast<double>(m2);
    const double m3d = static_cast<double>(m3);
    return std::sqrt(m2d * m3d) + std::pow(m1d, 0.25) * std::sqrt(m2d) * std::pow(n_size, 0.25) +
           std::sqrt(m3d) * std::pow(n_size, 0.75);
}

struct SumRecord {
    uint64_t m1 = 0, m2 = 0, m3 = 0;
    uint64_t k1 = 0, k2 = 0, k3 = 0; // character indices, as in the labels
    double n_size = 0.0;
    double abs_sum = 0.0;
    double bound = 0.0;
    double ratio = 0.0;
    double theta1 = 0.0, theta2 = 0.0, theta3 = 0.0; // log Mi / log M
    double millis = 0.0;
};

inline SumRecord bound_ratio(const CharacterTriple& triple, double n_size,
                             double c_lo = 1.0, double c_hi = 1.0, bool measure_time = true) {
    const uint64_t m1 = triple.chi1.modulus();
    const uint64_t m2 = triple.chi2.modulus();
    const uint64_t m3 = triple.chi3.modulus();
    if (!validate_range(m1, m2, m3, n_size, c_lo, c_hi).admissible)
        throw std::invalid_argument("bound_ratio: N outside the admissible window");

    const auto start = std::chrono::steady_clock::now();
    const cplx value = s_chi(triple.product(), n_size, weight_W());
    const auto stop = std::chrono::steady_clock::now();

    SumRecord rec;
    rec.m1 = m1;
    rec.m2 = m2;
    rec.m3 = m3;
    rec.k1 = triple.chi1.exponent();
    rec.k2 = triple.chi2.exponent();
    rec.k3 = triple.chi3.exponent();
    rec.n_size = n_size;
    rec.abs_sum = std::abs(value);
    rec.bound = bound_value(m1, m2, m3, n_size);
    rec.ratio = rec.abs_sum / rec.bound;
    const double logm = std::log(static_cast<double>(m1 * m2 * m3));
    rec.theta1 = std::log(static_cast<double>(m1)) / logm;
    rec.theta2 = std::log(static_cast<double>(m2)) / logm;
    rec.theta3 = std::log(static_cast<double>(m3)) / logm;
    if (measure_time)
        rec.millis = std::chrono::duration<double, std::milli>(stop - start).count();
    return rec;
}

// ---- theta region ---------------------------------------------------------

struct ThetaCheck {
    bool ok = false;
    std::vector<std::string> failed;
};

// The four atomic inequalities carving out the admissible delta at a given
// point of the theta simplex.  Comparisons carry a 1e-12 slack so that
// boundary points (equalities in exact arithmetic) pass.
inline ThetaCheck theta_region_check(double theta1, double theta2, double theta3,
                                     double delta) {
    constexpr double slack = 1e-12;
    if (theta1 < 0.0 || theta2 < 0.0 || theta3 < 0.0)
        throw std::invalid_argument("theta_region_check: theta components must be nonnegative");
    if (std::abs(theta1 + theta2 + theta3 - 1.0) > slack)
        throw std::invalid_argument("theta_region_check: theta must sum to 1");
    if (delta <= 0.0) throw std::invalid_argument("theta_region_check: delta must be positive");

    ThetaCheck check;
    if (!(2.0 * delta <= theta1 + slack)) check.failed.push_back("2*delta<=theta1");
    if (!(theta1 <= 0.5 - delta + slack)) check.failed.push_back("theta1<=1/2-delta");
    if (!(theta3 <= 0.25 - delta + slack)) check.failed.push_back("theta3<=1/4-delta");
    if (!(0.5 + 3.0 * delta <= theta1 + 2.0 * theta3 + slack))
        check.failed.push_back("1/2+3*delta<=theta1+2*theta3");
    check.ok = check.failed.empty();
    return check;
}

// largest delta admitted at (theta1, theta2, theta3); may be <= 0
inline double delta_max(double theta1, double theta2, double theta3) {
    if (theta1 < 0.0 || theta2 < 0.0 || theta3 < 0.0)
        throw std::invalid_argument("delta_max: theta components must be nonnegative");
    if (std::abs(theta1 + theta2 + theta3 - 1.0) > 1e-12)
        throw std::invalid_argument("delta_max: theta must sum to 1");
    return std::min({theta1 / 2.0, 0.5 - theta1, 0.25 - theta3,
                     (theta1 + 2.0 * theta3 - 0.5) / 3.0});
}

// ---- exponent fits --------------------------------------------------------

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

// least squares of log(value) against log(abscissa)
inline FitResult exponent_fit(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 5)
        throw std::invalid_argument("exponent_fit: need at least 5 points");
    std::vector<double> xs, ys;
    xs.reserve(points.size());
    ys.reserve(points.size());
    for (const auto& [abscissa, value] : points) {
        if (abscissa <= 0.0 || value <= 0.0)
            throw std::invalid_argument("exponent_fit: data must be positive");
        xs.push_back(std::log(abscissa));
        ys.push_back(std::log(value));
    }
    const double n = static_cast<double>(xs.size());
    double sx = 0.0, sy = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx < 1e-14) throw std::invalid_argument("exponent_fit: degenerate abscissae");
    FitResult fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
        ss_res += r * r;
    }
    fit.r_squared = syy < 1e-28 ? 1.0 : 1.0 - ss_res / syy;
    return fit;
}

// ---- sweep driver ---------------------------------------------------------

enum class CharacterPolicy {
    Automatic, // all primitive triples when M2 <= 50, else a seeded sample of 8
    Quadratic, // only the quadratic triple
};

struct SweepConfig {
    uint64_t m1_min = 3, m1_max = 13;
    uint64_t m2_min = 3, m2_max = 13;
    uint64_t m3_min = 3, m3_max = 13;
    int n_per_triple = 3;
    CharacterPolicy characters = CharacterPolicy::Quadratic;
    uint64_t seed = 1;
    int workers = 1;
    double c_lo = 1.0, c_hi = 1.0;
    bool measure_time = true; // ms column is wall time; disable for byte-stable output
};

struct SweepSummary {
    size_t records = 0;
    size_t failures = 0;
    double max_ratio = 0.0;
    SumRecord worst;
};

namespace detail {

inline std::vector<uint64_t> primes_in(uint64_t lo, uint64_t hi) {
    std::vector<uint64_t> out;
    for (uint64_t p = std::max<uint64_t>(lo, 3); p <= hi; ++p)
        if (p % 2 == 1 && is_prime(p)) out.push_back(p);
    return out;
}

inline std::vector<CharacterTriple> select_triples(uint64_t m1, uint64_t m2, uint64_t m3,
                                                   CharacterPolicy policy, uint64_t seed) {
    if (policy == CharacterPolicy::Quadratic) return {quadratic_triple(m1, m2, m3)};
    if (m2 <= 50) return enumerate_character_triples(m1, m2, m3);
    std::mt19937_64 rng(seed ^ (m1 * 0x9e3779b97f4a7c15ULL) ^ (m2 * 0xc2b2ae3d27d4eb4fULL) ^
                        (m3 * 0x165667b19e3779f9ULL));
    std::vector<CharacterTriple> out;
    for (int i = 0; i < 8; ++i) {
        const uint64_t k1 = 1 + rng() % (m1 - 2);
        const uint64_t k2 = 1 + rng() % (m2 - 2);
        const uint64_t k3 = 1 + rng() % (m3 - 2);
        out.push_back(CharacterTriple{PrimeCharacter(m1, k1), PrimeCharacter(m2, k2),
                                      PrimeCharacter(m3, k3)});
    }
    return out;
}

inline bool record_before(const SumRecord& a, const SumRecord& b) {
    const auto key = [](const SumRecord& r) {
        return std::make_tuple(r.m1, r.m2, r.m3, r.k1, r.k2, r.k3, r.n_size);
    };
    return key(a) < key(b);
}

} // namespace detail

inline std::vector<SumRecord> run_sweep(const SweepConfig& config,
                                        SweepSummary* summary = nullptr) {
    struct Task {
        CharacterTriple triple;
        double n_size;
    };
    std::vector<Task> tasks;
    const auto p1 = detail::primes_in(config.m1_min, config.m1_max);
    const auto p2 = detail::primes_in(config.m2_min, config.m2_max);
    const auto p3 = detail::primes_in(config.m3_min, config.m3_max);
    for (uint64_t m1 : p1)
        for (uint64_t m2 : p2) {
            if (m2 == m1) continue;
            for (uint64_t m3 : p3) {
                if (m3 == m1 || m3 == m2) continue;
                const double lo = admissible_lower(m1, config.c_lo);
                const double hi = admissible_upper(m1, m2, m3, config.c_hi);
                if (hi < lo) continue;
                const auto triples =
                    detail::select_triples(m1, m2, m3, config.characters, config.seed);
                for (const auto& triple : triples)
                    for (int j = 0; j < config.n_per_triple; ++j) {
                        const double frac = config.n_per_triple > 1
                                                ? static_cast<double>(j) /
                                                      (config.n_per_triple - 1)
                                                : 0.0;
                        tasks.push_back({triple, lo * std::pow(hi / lo, frac)});
                    }
            }
        }

    std::vector<SumRecord> records(tasks.size());
    std::vector<char> ok(tasks.size(), 0);
    parallel_for(tasks.size(), config.workers, [&](size_t i) {
        try {
            records[i] = bound_ratio(tasks[i].triple, tasks[i].n_size, config.c_lo,
                                     config.c_hi, config.measure_time);
            ok[i] = 1;
        } catch (const std::exception&) {
            ok[i] = 0;
        }
    });

    std::vector<SumRecord> kept;
    size_t failures = 0;
    for (size_t i = 0; i < tasks.size(); ++i) {
        if (ok[i])
            kept.push_back(records[i]);
        else
            ++failures;
    }
    std::sort(kept.begin(), kept.end(), detail::record_before);

    if (summary) {
        summary->records = kept.size();
        summary->failures = failures;
        summary->max_ratio = 0.0;
        for (const auto& rec : kept)
            if (rec.ratio >= summary->max_ratio) {
                summary->max_ratio = rec.ratio;
                summary->worst = rec;
            }
    }
    return kept;
}

// ---- serialization --------------------------------------------------------

inline std::string sum_record_csv_header() {
    return "m1,m2,m3,k1,k2,k3,N,abs_S,bound,ratio,theta1,theta2,theta3,ms";
}

inline std::string to_csv_line(const SumRecord& rec) {
    char buf[512];
    std::snprintf(buf, sizeof(buf),
                  "%llu,%llu,%llu,%llu,%llu,%llu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.6g",
                  static_cast<unsigned long long>(rec.m1), static_cast<unsigned long long>(rec.m2),
                  static_cast<unsigned long long>(rec.m3), static_cast<unsigned long long>(rec.k1),
                  static_cast<unsigned long long>(rec.k2), static_cast<unsigned long long>(rec.k3),
                  rec.n_size, rec.abs_sum, rec.bound, rec.ratio, rec.theta1, rec.theta2,
                  rec.theta3, rec.millis);
    return buf;
}

inline std::string to_jsonl_line(const SumRecord& rec) {
    char buf[768];
    std::snprintf(buf, sizeof(buf),
                  "{\"m1\":%llu,\"m2\":%llu,\"m3\":%llu,\"k1\":%llu,\"k2\":%llu,\"k3\":%llu,"
                  "\"N\":%.17g,\"abs_S\":%.17g,\"bound\":%.17g,\"ratio\":%.17g,"
                  "\"theta1\":%.17g,\"theta2\":%.17g,\"theta3\":%.17g,\"ms\":%.6g}",
                  static_cast<unsigned long long>(rec.m1), static_cast<unsigned long long>(rec.m2),
                  static_cast<unsigned long long>(rec.m3), static_cast<unsigned long long>(rec.k1),
                  static_cast<unsigned long long>(rec.k2), static_cast<unsigned long long>(rec.k3),
                  rec.n_size, rec.abs_sum, rec.bound, rec.ratio, rec.theta1, rec.theta2,
                  rec.theta3, rec.millis);
    return buf;
}

} // namespace charsum
