#include <catch2/catch_amalgamated.hpp>

#include "charsum/complete_sums.hpp"

#include <cmath>

using namespace charsum;

TEST_CASE("degenerate shift classes evaluate exactly") {
    for (uint64_t p : {3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL}) {
        for (uint64_t k = 1; k < p - 1; ++k) {
            PrimeCharacter chi(p, k);
            // m = n = 0: every term is |chi(x)|^2 = 1
            REQUIRE(std::abs(frak_s(chi, 0, 0) - cplx(static_cast<double>(p - 1), 0.0)) < 1e-10);
            // exactly one shift vanishing collapses to a full additive or
            // multiplicative average, which is -1 either way
            for (int64_t m = 1; m < static_cast<int64_t>(p); ++m)
                REQUIRE(std::abs(frak_s(chi, m, 0) - cplx(-1.0, 0.0)) < 1e-10);
            for (int64_t n = 1; n < static_cast<int64_t>(p); ++n)
                REQUIRE(std::abs(frak_s(chi, 0, n) - cplx(-1.0, 0.0)) < 1e-10);
        }
    }
}

TEST_CASE("frak_s is periodic in both shifts") {
    PrimeCharacter chi(13, 5);
    for (int64_t m : {1L, 4L, 12L}) {
        for (int64_t n : {2L, 7L}) {
            REQUIRE(std::abs(frak_s(chi, m, n) - frak_s(chi, m + 13, n)) < 1e-11);
            REQUIRE(std::abs(frak_s(chi, m, n) - frak_s(chi, m, n - 26)) < 1e-11);
        }
    }
}

TEST_CASE("Gauss-sum rewrite reproduces the direct sum") {
    for (uint64_t p : {5ULL, 7ULL, 11ULL, 13ULL}) {
        for (uint64_t k = 1; k < p - 1; ++k) {
            PrimeCharacter chi(p, k);
            for (int64_t m = 1; m < static_cast<int64_t>(p); ++m) {
                for (int64_t n = 1; n < static_cast<int64_t>(p); ++n) {
                    const cplx direct = frak_s(chi, m, n);
                    const cplx opened = frak_s_via_gauss(chi, m, n);
                    REQUIRE(std::abs(direct - opened) < 1e-9);
                }
            }
        }
    }
    PrimeCharacter chi(7, 2);
    REQUIRE_THROWS_AS(frak_s_via_gauss(chi, 0, 3), std::invalid_argument);
    REQUIRE_THROWS_AS(frak_s_via_gauss(chi, 3, 7), std::invalid_argument);
    REQUIRE_THROWS_AS(frak_s_via_gauss(PrimeCharacter(7, 0), 1, 1), std::invalid_argument);
}

TEST_CASE("square-root cancellation scan at p = 29") {
    // frozen from an exact-arithmetic scan over all primitive chi and all
    // nonzero shift pairs
    const double ratio = deligne_ratio(29);
    REQUIRE(ratio == Catch::Approx(1.984239259060).epsilon(1e-6));
    REQUIRE(ratio < 2.0);
    REQUIRE_THROWS_AS(deligne_ratio(8), std::invalid_argument);
    REQUIRE_THROWS_AS(deligne_ratio(2), std::invalid_argument);
}

TEST_CASE("Newton polygon: generic twisted product is nondegenerate") {
    // n x1 + m x2 + x1 x2 with unit coefficients: hull (1,0),(0,1),(1,1) plus
    // the origin; five faces stay off the origin
    for (uint64_t p : {7ULL, 11ULL, 13ULL}) {
        const NewtonPolygonReport rep = newton_polygon_nondegenerate(
            {{3, 1, 0}, {2, 0, 1}, {1, 1, 1}}, p);
        REQUIRE(rep.dimension == 2);
        REQUIRE(rep.faces_checked == 5);
        REQUIRE(rep.degenerate_faces == 0);
        REQUIRE(rep.nondegenerate);
    }
}

TEST_CASE("Newton polygon: diagonal quadric is nondegenerate") {
    const NewtonPolygonReport rep = newton_polygon_nondegenerate(
        {{1, 2, 0}, {1, 0, 2}}, 5);
    REQUIRE(rep.dimension == 2);
    REQUIRE(rep.faces_checked == 3);
    REQUIRE(rep.degenerate_faces == 0);
    REQUIRE(rep.nondegenerate);
}

TEST_CASE("Newton polygon: perfect square is degenerate") {
    // (x1 + x2)^2 = x1^2 + 2 x1 x2 + x2^2: the long edge carries the full
    // polynomial, which vanishes with both logarithmic derivatives along
    // x2 = -x1
    const NewtonPolygonReport rep = newton_polygon_nondegenerate(
        {{1, 2, 0}, {2, 1, 1}, {1, 0, 2}}, 7);
    REQUIRE(rep.dimension == 2);
    REQUIRE_FALSE(rep.nondegenerate);
    REQUIRE(rep.degenerate_faces >= 1);
}

TEST_CASE("Newton polygon: single monomial spans dimension one") {
    const NewtonPolygonReport rep = newton_polygon_nondegenerate({{1, 1, 1}}, 11);
    REQUIRE(rep.dimension == 1);
}

TEST_CASE("Newton polygon rejects composite or even moduli") {
    REQUIRE_THROWS_AS(newton_polygon_nondegenerate({{1, 1, 0}}, 9), std::invalid_argument);
    REQUIRE_THROWS_AS(newton_polygon_nondegenerate({{1, 1, 0}}, 2), std::invalid_argument);
}
