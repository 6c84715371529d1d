// charsum-lab: numerical laboratory for smoothed character sums to tri-prime
// moduli.  Subcommands verify the exact identities behind the dual expansion
// of S_chi(N), scan complete character sums against their square-root
// envelope, compute central L-values two ways, and sweep prime-triple
// families for bound ratios.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "charsum/characters.hpp"
#include "charsum/charsums.hpp"
#include "charsum/complete_sums.hpp"
#include "charsum/delta_symbol.hpp"
#include "charsum/lfunction.hpp"
#include "charsum/parallel.hpp"
#include "charsum/pipeline.hpp"
#include "charsum/smooth_sums.hpp"
#include "charsum/sweep.hpp"

namespace {

using nlohmann::json;

struct GlobalOptions {
    uint64_t seed = 1;
    int workers = 1;
    std::string out_path;
    std::string format = "csv";
};

// stdout unless --out was given
class OutputSink {
public:
    explicit OutputSink(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw std::invalid_argument("cannot open output file: " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

std::string complex_fields_csv(charsum::cplx z) {
    char buf[80];
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g", z.real(), z.imag());
    return buf;
}

charsum::CharacterTriple seeded_triple(uint64_t m1, uint64_t m2, uint64_t m3, uint64_t seed) {
    if (seed <= 1) return {charsum::PrimeCharacter(m1, 1), charsum::PrimeCharacter(m2, 1),
                           charsum::PrimeCharacter(m3, 1)};
    std::mt19937_64 rng(seed);
    return {charsum::PrimeCharacter(m1, 1 + rng() % (m1 - 2)),
            charsum::PrimeCharacter(m2, 1 + rng() % (m2 - 2)),
            charsum::PrimeCharacter(m3, 1 + rng() % (m3 - 2))};
}

// ---- verify-identities -----------------------------------------------------

int run_verify_identities(uint64_t m1, uint64_t m2, uint64_t m3, double n_size,
                          const GlobalOptions& global, const std::string& trace_path) {
    const auto geo = charsum::SumGeometry::standard(m1, m2, m3, n_size);
    const auto triple = seeded_triple(m1, m2, m3, global.seed);
    std::ostream& os = std::cout;

    os << "geometry: M=(" << m1 << "," << m2 << "," << m3 << ") N=" << n_size
       << " Q=" << geo.q_scale << " c_Q=" << charsum::c_q_constant(geo.q_scale)
       << " q_max=" << geo.q_max() << "\n";
    os << "characters: " << triple.label() << "\n\n";

    // detector spot check against the Kronecker delta
    double detector_err = 0.0;
    for (int64_t n = -60; n <= 60; ++n) {
        const double got = charsum::delta_approx_mod(n, geo.q_scale, static_cast<int64_t>(m1));
        detector_err = std::max(detector_err, std::abs(got - (n == 0 ? 1.0 : 0.0)));
    }

    // closed character sums against their literal forms
    double c1_err = 0.0, c2_err = 0.0, c3_err = 0.0;
    for (uint64_t q = 1; q <= std::min<uint64_t>(static_cast<uint64_t>(geo.q_max()), 6); ++q) {
        if (std::gcd(q, m3) == 1)
            for (uint64_t a = 1; a <= std::min<uint64_t>(q, 3); ++a) {
                if (std::gcd(a, q) != 1) continue;
                for (int64_t m = 0; m < static_cast<int64_t>(q * m1);
                     m += std::max<int64_t>(1, static_cast<int64_t>(q / 2)))
                    c1_err = std::max(c1_err,
                                      std::abs(charsum::charsum_c1(m, q, a, 1, triple.chi3, m1) -
                                               charsum::charsum_c1_literal(m, q, a, 1, triple.chi3, m1)));
            }
        if (std::gcd(q, m2) == 1 && std::gcd(q * m1, m3) == 1)
            for (int64_t m = 1; m <= 4; ++m)
                for (int64_t n = -2; n <= 2; ++n)
                    c2_err = std::max(c2_err,
                                      std::abs(charsum::charsum_c2(m, n, q, triple.chi1,
                                                                   triple.chi2, m3) -
                                               charsum::charsum_c2_literal(m, n, q, triple.chi1,
                                                                           triple.chi2, m3)));
    }
    for (uint64_t q1 = 1; q1 <= 3; ++q1)
        for (uint64_t q2 = 1; q2 <= 4; ++q2) {
            if (std::gcd(q1 * q2, m1 * m3) != 1) continue;
            for (int64_t z = -4; z <= 4; ++z)
                c3_err = std::max(c3_err,
                                  std::abs(charsum::charsum_c3(1, 2, z, q1, q2, triple.chi1,
                                                               m2, m3) -
                                           charsum::charsum_c3_literal(1, 2, z, q1, q2,
                                                                       triple.chi1, m2, m3)));
        }

    os << "closed-form checks (max |closed - literal|):\n";
    os << "  detector delta        " << detector_err << "\n";
    os << "  first dual sum        " << c1_err << "\n";
    os << "  second dual sum       " << c2_err << "\n";
    os << "  correlation sum       " << c3_err << "\n\n";

    const auto trace = charsum::pipeline_reconstruct(triple, geo);
    os << "reconstruction steps:\n";
    const auto line = [&](const char* name, charsum::cplx v, double rel, const char* against) {
        os << "  " << name << " = " << v.real() << (v.imag() < 0 ? " - " : " + ")
           << std::abs(v.imag()) << "i";
        if (against) os << "   rel. residual vs " << against << ": " << rel;
        os << "\n";
    };
    line("direct sum      ", trace.direct, 0.0, nullptr);
    line("detector form   ", trace.delta_expanded, trace.rel_i_ii, "direct");
    line("first Poisson   ", trace.poisson_m, trace.rel_ii_iii, "detector");
    line("second Poisson  ", trace.poisson_n, trace.rel_iii_iv, "first");
    os << "  coprime-q part  = " << trace.coprime_part << "  normalized main term "
       << trace.s0_normalized << "\n";
    os << "  remainder ratio |rest|*M1/N = " << trace.remainder_ratio << "\n";

    if (!trace_path.empty()) {
        json doc;
        doc["geometry"] = {{"m1", m1},   {"m2", m2},           {"m3", m3},
                           {"N", n_size}, {"Q", geo.q_scale},   {"q_max", geo.q_max()},
                           {"m_cut", geo.m_cutoff()}, {"n_cut", geo.n_cutoff()}};
        doc["characters"] = triple.label();
        doc["steps"] = {{"direct", {trace.direct.real(), trace.direct.imag()}},
                        {"detector", {trace.delta_expanded.real(), trace.delta_expanded.imag()}},
                        {"poisson_m", {trace.poisson_m.real(), trace.poisson_m.imag()}},
                        {"poisson_n", {trace.poisson_n.real(), trace.poisson_n.imag()}}};
        doc["residuals"] = {{"direct_vs_detector", trace.rel_i_ii},
                            {"detector_vs_poisson_m", trace.rel_ii_iii},
                            {"poisson_m_vs_poisson_n", trace.rel_iii_iv},
                            {"remainder_ratio", trace.remainder_ratio}};
        doc["spot_checks"] = {{"detector_delta", detector_err},
                              {"first_dual", c1_err},
                              {"second_dual", c2_err},
                              {"correlation", c3_err}};
        std::ofstream tf(trace_path);
        if (!tf) throw std::invalid_argument("cannot open trace file: " + trace_path);
        tf << doc.dump(2) << "\n";
    }

    const bool ok = detector_err < 1e-8 && c1_err < 1e-8 && c2_err < 1e-8 && c3_err < 1e-8 &&
                    trace.rel_i_ii < 1e-6 && trace.rel_ii_iii < 1e-3 && trace.rel_iii_iv < 1e-3;
    os << "\n" << (ok ? "all identities hold" : "IDENTITY VIOLATION") << "\n";
    return ok ? 0 : 1;
}

// ---- delta-check -----------------------------------------------------------

int run_delta_check(double q_scale, int64_t k_modulus, int64_t nmax,
                    const GlobalOptions& global) {
    OutputSink sink(global.out_path);
    std::ostream& os = sink.stream();
    const bool jsonl = global.format == "jsonl";
    if (!jsonl) os << "n,value,expected,abs_err\n";
    double max_err = 0.0;
    for (int64_t n = -nmax; n <= nmax; ++n) {
        const double value = charsum::delta_approx_mod(n, q_scale, k_modulus);
        const double expected = n == 0 ? 1.0 : 0.0;
        const double err = std::abs(value - expected);
        max_err = std::max(max_err, err);
        char buf[160];
        if (jsonl)
            std::snprintf(buf, sizeof(buf),
                          "{\"n\":%lld,\"value\":%.17g,\"expected\":%.1f,\"abs_err\":%.3e}",
                          static_cast<long long>(n), value, expected, err);
        else
            std::snprintf(buf, sizeof(buf), "%lld,%.17g,%.1f,%.3e",
                          static_cast<long long>(n), value, expected, err);
        os << buf << "\n";
    }
    std::cerr << "max |error| = " << max_err << "\n";
    return max_err > 1e-8 ? 1 : 0;
}

// ---- frak-s ----------------------------------------------------------------

int run_frak_s(uint64_t p, bool full, const GlobalOptions& global) {
    if (p < 3 || !charsum::is_prime(p))
        throw std::invalid_argument("frak-s: p must be an odd prime");
    OutputSink sink(global.out_path);
    std::ostream& os = sink.stream();
    const bool jsonl = global.format == "jsonl";
    const double root_p = std::sqrt(static_cast<double>(p));
    if (!jsonl) os << (full ? "k,m,n,re,im,abs,ratio\n" : "k,m,n,abs,ratio\n");
    double family_max = 0.0;
    for (uint64_t k = 1; k + 1 < p; ++k) {
        const charsum::PrimeCharacter chi(p, k);
        double best = -1.0;
        uint64_t best_m = 0, best_n = 0;
        charsum::cplx best_value;
        for (uint64_t m = 1; m < p; ++m)
            for (uint64_t n = 1; n < p; ++n) {
                const charsum::cplx value =
                    charsum::frak_s(chi, static_cast<int64_t>(m), static_cast<int64_t>(n));
                const double mag = std::abs(value);
                if (full) {
                    char buf[200];
                    if (jsonl)
                        std::snprintf(buf, sizeof(buf),
                                      "{\"k\":%llu,\"m\":%llu,\"n\":%llu,\"re\":%.17g,"
                                      "\"im\":%.17g,\"abs\":%.17g,\"ratio\":%.17g}",
                                      static_cast<unsigned long long>(k),
                                      static_cast<unsigned long long>(m),
                                      static_cast<unsigned long long>(n), value.real(),
                                      value.imag(), mag, mag / root_p);
                    else
                        std::snprintf(buf, sizeof(buf), "%llu,%llu,%llu,%.17g,%.17g,%.17g,%.17g",
                                      static_cast<unsigned long long>(k),
                                      static_cast<unsigned long long>(m),
                                      static_cast<unsigned long long>(n), value.real(),
                                      value.imag(), mag, mag / root_p);
                    os << buf << "\n";
                }
                if (mag > best) {
                    best = mag;
                    best_m = m;
                    best_n = n;
                    best_value = value;
                }
            }
        family_max = std::max(family_max, best / root_p);
        if (!full) {
            char buf[200];
            if (jsonl)
                std::snprintf(buf, sizeof(buf),
                              "{\"k\":%llu,\"m\":%llu,\"n\":%llu,\"abs\":%.17g,\"ratio\":%.17g}",
                              static_cast<unsigned long long>(k),
                              static_cast<unsigned long long>(best_m),
                              static_cast<unsigned long long>(best_n), best, best / root_p);
            else
                std::snprintf(buf, sizeof(buf), "%llu,%llu,%llu,%.17g,%.17g",
                              static_cast<unsigned long long>(k),
                              static_cast<unsigned long long>(best_m),
                              static_cast<unsigned long long>(best_n), best, best / root_p);
            os << buf << "\n";
        }
    }
    std::cerr << "p=" << p << " family max |S|/sqrt(p) = " << family_max << "\n";
    return 0;
}

// ---- deligne-scan ----------------------------------------------------------

int run_deligne_scan(uint64_t pmin, uint64_t pmax, const GlobalOptions& global) {
    OutputSink sink(global.out_path);
    std::ostream& os = sink.stream();
    const bool jsonl = global.format == "jsonl";
    if (!jsonl) os << "p,max_ratio\n";
    double running = 0.0;
    for (uint64_t p = std::max<uint64_t>(pmin, 3); p <= pmax; ++p) {
        if (!charsum::is_prime(p)) continue;
        const double ratio = charsum::deligne_ratio(p);
        running = std::max(running, ratio);
        if (jsonl)
            os << "{\"p\":" << p << ",\"max_ratio\":" << ratio << "}\n";
        else
            os << p << "," << ratio << "\n";
    }
    std::cerr << "running max ratio = " << running << "\n";
    return 0;
}

// ---- lvalue ----------------------------------------------------------------

int run_lvalue(uint64_t m1, uint64_t m2, uint64_t m3, bool all_chars,
               const GlobalOptions& global) {
    std::vector<charsum::CharacterTriple> triples;
    if (all_chars)
        triples = charsum::enumerate_character_triples(m1, m2, m3);
    else
        triples.push_back(charsum::quadratic_triple(m1, m2, m3));

    std::vector<charsum::LValueRecord> records(triples.size());
    charsum::parallel_for(triples.size(), global.workers, [&](size_t i) {
        records[i] = charsum::l_value_record(triples[i].product());
    });

    OutputSink sink(global.out_path);
    std::ostream& os = sink.stream();
    const bool jsonl = global.format == "jsonl";
    if (!jsonl) os << "chi_label,re,im,abs,convexity_ratio,xcheck_err\n";
    for (const auto& rec : records) {
        if (jsonl) {
            json row = {{"chi_label", rec.character_label},
                        {"re", rec.smoothed.real()},
                        {"im", rec.smoothed.imag()},
                        {"abs", std::abs(rec.smoothed)},
                        {"convexity_ratio", rec.convexity_ratio},
                        {"xcheck_err", rec.discrepancy}};
            os << row.dump() << "\n";
        } else {
            char buf[256];
            std::snprintf(buf, sizeof(buf), "\"%s\",%s,%.17g,%.17g,%.3e",
                          rec.character_label.c_str(), complex_fields_csv(rec.smoothed).c_str(),
                          std::abs(rec.smoothed), rec.convexity_ratio, rec.discrepancy);
            os << buf << "\n";
        }
        if (rec.discrepancy > 1e-8) return 1;
    }
    return 0;
}

// ---- sweep -----------------------------------------------------------------

charsum::SweepConfig load_sweep_config(const std::string& path) {
    charsum::SweepConfig config;
    if (path.empty()) return config;
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    json doc;
    in >> doc;
    const auto range = [&](const char* key, uint64_t& lo, uint64_t& hi) {
        if (!doc.contains(key)) return;
        const auto& v = doc.at(key);
        if (!v.is_array() || v.size() != 2)
            throw std::invalid_argument(std::string("config: ") + key + " must be [lo, hi]");
        lo = v[0].get<uint64_t>();
        hi = v[1].get<uint64_t>();
    };
    range("m1", config.m1_min, config.m1_max);
    range("m2", config.m2_min, config.m2_max);
    range("m3", config.m3_min, config.m3_max);
    if (doc.contains("n_per_triple")) config.n_per_triple = doc.at("n_per_triple").get<int>();
    if (doc.contains("characters")) {
        const auto mode = doc.at("characters").get<std::string>();
        if (mode == "quadratic")
            config.characters = charsum::CharacterPolicy::Quadratic;
        else if (mode == "auto")
            config.characters = charsum::CharacterPolicy::Automatic;
        else
            throw std::invalid_argument("config: characters must be \"quadratic\" or \"auto\"");
    }
    if (doc.contains("seed")) config.seed = doc.at("seed").get<uint64_t>();
    if (doc.contains("workers")) config.workers = doc.at("workers").get<int>();
    if (doc.contains("c_lo")) config.c_lo = doc.at("c_lo").get<double>();
    if (doc.contains("c_hi")) config.c_hi = doc.at("c_hi").get<double>();
    if (doc.contains("measure_time")) config.measure_time = doc.at("measure_time").get<bool>();
    return config;
}

int run_sweep_cmd(const std::string& config_path, const GlobalOptions& global,
                  bool seed_given, bool workers_given) {
    charsum::SweepConfig config = load_sweep_config(config_path);
    if (seed_given) config.seed = global.seed;
    if (workers_given) config.workers = global.workers;

    charsum::SweepSummary summary;
    const auto records = charsum::run_sweep(config, &summary);

    OutputSink sink(global.out_path);
    std::ostream& os = sink.stream();
    const bool jsonl = global.format == "jsonl";
    if (!jsonl) os << charsum::sum_record_csv_header() << "\n";
    size_t violations = 0;
    for (const auto& rec : records) {
        os << (jsonl ? charsum::to_jsonl_line(rec) : charsum::to_csv_line(rec)) << "\n";
        if (rec.bound <= 0.0 ||
            rec.abs_sum > charsum::trivial_envelope(rec.n_size, charsum::weight_W()) + 1e-9)
            ++violations;
    }
    std::cerr << "records=" << summary.records << " failures=" << summary.failures
              << " max_ratio=" << summary.max_ratio;
    if (summary.records > 0)
        std::cerr << " worst=(" << summary.worst.m1 << "," << summary.worst.m2 << ","
                  << summary.worst.m3 << ",N=" << summary.worst.n_size << ")";
    std::cerr << "\n";
    return violations > 0 ? 1 : 0;
}

// ---- theta-check -----------------------------------------------------------

int run_theta_check(double t1, double t2, double t3, double delta, bool delta_given) {
    std::cout << "delta_max = " << charsum::delta_max(t1, t2, t3) << "\n";
    if (!delta_given) return 0;
    const auto check = charsum::theta_region_check(t1, t2, t3, delta);
    if (check.ok) {
        std::cout << "delta = " << delta << " admissible\n";
        return 0;
    }
    std::cout << "delta = " << delta << " rejected by:";
    for (const auto& name : check.failed) std::cout << " " << name;
    std::cout << "\n";
    return 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for smoothed character sums to tri-prime moduli"};
    app.require_subcommand(1);

    GlobalOptions global;
    auto* seed_opt = app.add_option("--seed", global.seed, "seed for all sampling");
    auto* workers_opt = app.add_option("--workers", global.workers, "worker thread count");
    app.add_option("--out", global.out_path, "write rows to this file instead of stdout");
    app.add_option("--format", global.format, "row format")
        ->check(CLI::IsMember({"csv", "jsonl"}));

    // verify-identities
    auto* verify = app.add_subcommand("verify-identities",
                                      "run the full dual-expansion reconstruction");
    uint64_t vm1 = 3, vm2 = 5, vm3 = 7;
    double vn = 10.0;
    std::string trace_path;
    verify->add_option("--m1", vm1, "first prime modulus");
    verify->add_option("--m2", vm2, "second prime modulus");
    verify->add_option("--m3", vm3, "third prime modulus");
    verify->add_option("--N", vn, "sum length");
    verify->add_option("--trace", trace_path, "dump the step values to a JSON file");

    // delta-check
    auto* delta = app.add_subcommand("delta-check", "detector values against the Kronecker delta");
    double dq = 5.0;
    int64_t dk = 1, dnmax = 1000;
    delta->add_option("--Q", dq, "detector scale")->required();
    delta->add_option("--K", dk, "congruence modulus");
    delta->add_option("--nmax", dnmax, "check |n| up to this");

    // frak-s
    auto* frak = app.add_subcommand("frak-s", "complete twisted sums over F_p");
    uint64_t fp = 13;
    bool ffull = false;
    frak->add_option("--p", fp, "prime modulus")->required();
    frak->add_flag("--full", ffull, "emit every (k, m, n) row");

    // deligne-scan
    auto* deligne = app.add_subcommand("deligne-scan", "max |S|/sqrt(p) per prime");
    uint64_t dpmin = 29, dpmax = 61;
    deligne->add_option("--pmin", dpmin, "first prime");
    deligne->add_option("--pmax", dpmax, "last prime");

    // lvalue
    auto* lvalue = app.add_subcommand("lvalue", "central values by two methods");
    uint64_t lm1 = 3, lm2 = 5, lm3 = 7;
    bool all_chars = false;
    lvalue->add_option("--m1", lm1, "first prime modulus")->required();
    lvalue->add_option("--m2", lm2, "second prime modulus")->required();
    lvalue->add_option("--m3", lm3, "third prime modulus")->required();
    lvalue->add_flag("--all-chars", all_chars, "all primitive characters, not just quadratic");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "bound ratios over a prime-triple family");
    std::string config_path;
    sweep->add_option("--config", config_path, "JSON sweep configuration");

    // theta-check
    auto* theta = app.add_subcommand("theta-check", "delta feasibility in the theta simplex");
    double tt1 = 0.0, tt2 = 0.0, tt3 = 0.0, tdelta = 0.0;
    theta->add_option("--t1", tt1, "log M1 / log M")->required();
    theta->add_option("--t2", tt2, "log M2 / log M")->required();
    theta->add_option("--t3", tt3, "log M3 / log M")->required();
    auto* delta_opt = theta->add_option("--delta", tdelta, "candidate saving");

    for (auto* sub : {verify, delta, frak, deligne, lvalue, sweep, theta}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(verify))
            return run_verify_identities(vm1, vm2, vm3, vn, global, trace_path);
        if (app.got_subcommand(delta)) return run_delta_check(dq, dk, dnmax, global);
        if (app.got_subcommand(frak)) return run_frak_s(fp, ffull, global);
        if (app.got_subcommand(deligne)) return run_deligne_scan(dpmin, dpmax, global);
        if (app.got_subcommand(lvalue)) return run_lvalue(lm1, lm2, lm3, all_chars, global);
        if (app.got_subcommand(sweep))
            return run_sweep_cmd(config_path, global, seed_opt->count() > 0,
                                 workers_opt->count() > 0);
        if (app.got_subcommand(theta))
            return run_theta_check(tt1, tt2, tt3, tdelta, delta_opt->count() > 0);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
