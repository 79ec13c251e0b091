#include <doctest.h>

#include "oracles.hpp"
#include "spiderweb/eval.hpp"

using namespace spiderweb;

namespace {

LinearizerSeries exp_series() {
    Polynomial p = oracle::poly_square();
    return build_linearizer(p, oracle::fixed_point_at(p, cplx(1.0, 0.0)), 64);
}

LinearizerSeries cosh_series() {
    Polynomial p = oracle::poly_chebyshev();
    return build_linearizer(p, oracle::fixed_point_at(p, cplx(2.0, 0.0)), 64);
}

}  // namespace

TEST_CASE("eval_L reproduces e^10 exactly enough") {
    Polynomial p = oracle::poly_square();
    LinearizerSeries s = exp_series();
    EvalOutcome out = eval_L(s, p, cplx(10.0, 0.0));
    REQUIRE(out.exact());
    CHECK(std::abs(out.value.logmod - 10.0) < 1e-8 * 10.0);
    CHECK(std::abs(out.value.arg) < 1e-8);
}

TEST_CASE("eval_L at z = 1e6 returns a tight log interval around 1e6") {
    Polynomial p = oracle::poly_square();
    LinearizerSeries s = exp_series();
    EvalOutcome out = eval_L(s, p, cplx(1e6, 0.0));
    REQUIRE(out.mode == EvalOutcome::Mode::log_interval);
    CHECK(out.lo <= 1e6);
    CHECK(1e6 <= out.hi);
    CHECK((out.hi - out.lo) / 1e6 < 1e-3);
}

TEST_CASE("eval_L reproduces 2cos(pi) = -2 at z = -pi^2") {
    Polynomial p = oracle::poly_chebyshev();
    LinearizerSeries s = cosh_series();
    EvalOutcome out = eval_L(s, p, cplx(-kPi * kPi, 0.0));
    REQUIRE(out.exact());
    cplx v = out.value.to_complex();
    CHECK(std::abs(v - cplx(-2.0, 0.0)) < 1e-8);
}

TEST_CASE("closed-form agreement on random points across the pullback seam") {
    Polynomial p = oracle::poly_square();
    LinearizerSeries s = exp_series();
    Evaluator ev(s, p);
    SplitMix64 rng(51);
    for (int i = 0; i < 100; ++i) {
        cplx z = cplx(rng.uniform(-40.0, 40.0), rng.uniform(-40.0, 40.0));
        EvalOutcome out = ev.eval(z);
        REQUIRE(out.exact());
        CHECK(std::abs(out.value.logmod - z.real()) < 1e-7 * (1.0 + std::abs(z.real())));
        CHECK(std::abs(normalize_angle(out.value.arg - z.imag())) < 1e-6);
    }
}

TEST_CASE("pullback depth consistency: forced n and n+1 agree") {
    Polynomial p = oracle::poly_outside();
    LinearizerSeries s =
        build_linearizer(p, oracle::fixed_point_at(p, cplx(oracle::z0_outside(), 0.0)), 64);
    Evaluator ev(s, p);
    SplitMix64 rng(53);
    for (int i = 0; i < 60; ++i) {
        double lm = rng.uniform(1.0, 40.0);
        BigComplex z(lm, rng.uniform(-kPi, kPi));
        long long n = ev.pullback_depth(z);
        EvalOutcome a = ev.eval_at_depth(z, n);
        EvalOutcome b = ev.eval_at_depth(z, n + 1);
        if (a.exact() && b.exact()) {
            CHECK(std::abs(a.value.logmod - b.value.logmod) <
                  1e-6 * (1.0 + std::abs(a.value.logmod)));
        }
    }
}

TEST_CASE("huge log-polar arguments evaluate through the interval mode") {
    Polynomial p = oracle::poly_outside();
    LinearizerSeries s =
        build_linearizer(p, oracle::fixed_point_at(p, cplx(oracle::z0_outside(), 0.0)), 64);
    Evaluator ev(s, p);
    EvalOutcome out = ev.eval(BigComplex(1000.0, 0.5));
    CHECK(out.mode == EvalOutcome::Mode::log_interval);
    CHECK(out.lo > 0.0);
    CHECK(out.lo < out.hi);
    // order ~0.403 growth: log M ~ exp(rho * 1000) stays under double range
    CHECK(std::isfinite(out.hi));
}

TEST_CASE("non-finite input is rejected") {
    Polynomial p = oracle::poly_square();
    LinearizerSeries s = exp_series();
    Evaluator ev(s, p);
    CHECK_THROWS_AS(ev.eval(cplx(std::nan(""), 0.0)), PreconditionError);
}

TEST_CASE("derivative evaluation matches the closed form (e^z)'") {
    Polynomial p = oracle::poly_square();
    LinearizerSeries s = exp_series();
    Evaluator ev(s, p);
    for (double x : {3.0, 17.0, 55.0}) {
        BigComplex val, der;
        ev.eval_with_derivative(BigComplex::from(cplx(x, 0.4)), val, der);
        CHECK(std::abs(val.logmod - x) < 1e-7 * (1.0 + x));
        CHECK(std::abs(der.logmod - x) < 1e-7 * (1.0 + x));  // (e^z)' = e^z
    }
}
