#include <doctest.h>

#include "oracles.hpp"
#include "spiderweb/growth.hpp"

using namespace spiderweb;

TEST_CASE("iterate_log_bounds spec instance: z^2, z=2, n=3, eps=0.1") {
    Polynomial p = oracle::poly_square();
    GrowthBounds gb = make_growth_bounds(p, 0.1);
    CHECK(gb.R_eps < 2.0);  // precondition reachable for z = 2
    LogInterval iv = iterate_log_bounds(p, cplx(2.0, 0.0), 3, gb);
    CHECK(iv.lo == doctest::Approx(7.0 * std::log(0.9) + 8.0 * std::log(2.0)).epsilon(1e-12));
    CHECK(iv.hi == doctest::Approx(7.0 * std::log(1.1) + 8.0 * std::log(2.0)).epsilon(1e-12));
    // direct iteration 2 -> 4 -> 16 -> 256
    CHECK(iv.contains(std::log(256.0)));
}

TEST_CASE("iterate_log_bounds n=1 has width K_eps - k_eps") {
    for (const Polynomial& p : {oracle::poly_chebyshev(), oracle::poly_outside()}) {
        GrowthBounds gb = make_growth_bounds(p, 0.05);
        LogInterval iv = iterate_log_bounds_from_logmod(p, std::log(gb.R_eps) + 3.0, 1, gb);
        CHECK(iv.width() == doctest::Approx(gb.K_eps - gb.k_eps).epsilon(1e-12));
    }
}

TEST_CASE("iterate_log_bounds contains direct iteration: z^2-5 from 10") {
    Polynomial p = oracle::poly_outside();
    GrowthBounds gb = make_growth_bounds(p, 0.1);
    REQUIRE(gb.R_eps < 10.0);
    LogInterval iv = iterate_log_bounds(p, cplx(10.0, 0.0), 2, gb);
    // 10 -> 95 -> 9020
    CHECK(iv.contains(std::log(9020.0)));
}

TEST_CASE("iterate_log_bounds rejects |z| <= R_eps") {
    Polynomial p = oracle::poly_outside();
    GrowthBounds gb = make_growth_bounds(p, 0.01);
    CHECK_THROWS_AS(iterate_log_bounds(p, cplx(1.0, 0.0), 2, gb), PreconditionError);
}

TEST_CASE("randomized: the bracket contains log|p^n(z)| while representable") {
    SplitMix64 rng(2024);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<cplx> c(4);
        for (auto& a : c) a = 2.0 * rng.unit_disk();
        if (std::abs(c[3]) < 0.2) c[3] += 1.0;
        Polynomial p(c);
        GrowthBounds gb = make_growth_bounds(p, rng.uniform(0.01, 0.3));
        double r = gb.R_eps * rng.uniform(1.5, 4.0);
        double th = rng.uniform(0.0, 2.0 * kPi);
        cplx z = r * cplx(std::cos(th), std::sin(th));
        cplx w = z;
        for (int n = 1; n <= 6; ++n) {
            w = poly_eval(p.coeffs, w);
            if (!std::isfinite(std::abs(w)) || std::abs(w) > 1e300) break;
            LogInterval iv = iterate_log_bounds(p, z, n, gb);
            CHECK(iv.lo <= std::log(std::abs(w)) + 1e-9);
            CHECK(std::log(std::abs(w)) <= iv.hi + 1e-9);
        }
    }
}

TEST_CASE("q_n(d) sits between d^{n-1} and d^n (exact integers)") {
    for (int d = 2; d <= 5; ++d) {
        long long q = 0, dpow = 1;  // q_0 = 0
        for (int n = 1; n <= 20; ++n) {
            q = q * d + 1;       // q_n = d q_{n-1} + 1
            long long dn = dpow * d;  // d^n
            CHECK(q_n(d, n) == doctest::Approx(static_cast<double>(q)));
            if (dn < (1LL << 62) / d) {
                CHECK(dpow <= q);
                CHECK(q <= dn);
                dpow = dn;
            } else {
                break;
            }
        }
    }
}

TEST_CASE("R_eps is monotone: shrinking eps never decreases it") {
    for (const Polynomial& p : {oracle::poly_chebyshev(), oracle::poly_outside()}) {
        double prev = 0.0;
        for (double eps : {0.4, 0.2, 0.1, 0.05, 0.02, 0.01}) {
            GrowthBounds gb = make_growth_bounds(p, eps);
            CHECK(gb.R_eps >= prev - 1e-12);
            CHECK((1.0 - eps) * std::abs(p.coeffs.back()) *
                      std::pow(gb.R_eps, p.degree() - 1) > 1.0);
            prev = gb.R_eps;
        }
    }
}
