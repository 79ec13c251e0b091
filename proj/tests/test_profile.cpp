#include <doctest.h>

#include "oracles.hpp"
#include "spiderweb/profile.hpp"

using namespace spiderweb;

namespace {

LinearizerSeries series_for(const Polynomial& p, cplx z0, int N = 64) {
    return build_linearizer(p, oracle::fixed_point_at(p, z0), N);
}

}  // namespace

TEST_CASE("modulus profile of e^z: logM(r) = r and logm(r) = -r") {
    Polynomial p = oracle::poly_square();
    LinearizerSeries s = series_for(p, cplx(1.0, 0.0));
    ModulusProfile prof = modulus_profile(s, p, {1.0, 2.0, 4.0, 8.0}, 512);
    for (std::size_t i = 0; i < prof.radii.size(); ++i) {
        double r = prof.radii[i];
        CHECK(std::abs(prof.logM[i] - r) < 1e-4 * r);
        CHECK(std::abs(prof.logm[i] + r) < 1e-4 * r);
        CHECK(prof.logM[i] >= prof.logm[i]);
        if (i > 0) CHECK(prof.logM[i] >= prof.logM[i - 1]);
    }
}

TEST_CASE("modulus profile of 2cosh(sqrt z) grows like sqrt r") {
    Polynomial p = oracle::poly_chebyshev();
    LinearizerSeries s = series_for(p, cplx(2.0, 0.0));
    std::vector<double> radii = {1e3, 1e3 * std::sqrt(10.0), 1e4, 1e4 * std::sqrt(10.0), 1e5};
    ModulusProfile prof = modulus_profile(s, p, radii, 512);
    for (std::size_t i = 0; i < radii.size(); ++i) {
        double expect = std::log(2.0 * std::cosh(std::sqrt(radii[i])));
        CHECK(std::abs(prof.logM[i] - expect) < 1e-3 * expect);
    }
    double rho = order_estimate(prof);
    CHECK(std::abs(rho - 0.5) < 0.025);
}

TEST_CASE("Hadamard three-circle convexity of logM in log r") {
    Polynomial p = oracle::poly_outside();
    LinearizerSeries s = series_for(p, cplx(oracle::z0_outside(), 0.0));
    std::vector<double> radii;
    for (int k = 0; k < 7; ++k) radii.push_back(4.0 * std::pow(2.0, k));
    ModulusProfile prof = modulus_profile(s, p, radii, 512);
    for (std::size_t i = 0; i + 2 < radii.size(); ++i) {
        double x1 = std::log(radii[i]), x2 = std::log(radii[i + 1]), x3 = std::log(radii[i + 2]);
        double y1 = prof.logM[i], y2 = prof.logM[i + 1], y3 = prof.logM[i + 2];
        double interp = y1 + (y3 - y1) * (x2 - x1) / (x3 - x1);
        CHECK(y2 <= interp + 1e-3 * std::abs(interp) + 1e-3);
    }
}

TEST_CASE("order estimates hit log d / log|lambda| within 5%") {
    struct Case {
        Polynomial p;
        cplx z0;
        double rho;
    };
    std::vector<Case> cases;
    cases.push_back({oracle::poly_square(), cplx(1.0, 0.0), 1.0});
    cases.push_back({oracle::poly_chebyshev(), cplx(2.0, 0.0), 0.5});
    cases.push_back({oracle::poly_outside(), cplx(oracle::z0_outside(), 0.0),
                     std::log(2.0) / std::log(oracle::lambda_outside())});
    for (const auto& c : cases) {
        LinearizerSeries s = series_for(c.p, c.z0);
        std::vector<double> radii;
        for (int k = 0; k <= 4; ++k) radii.push_back(1e3 * std::pow(std::sqrt(10.0), k));
        ModulusProfile prof = modulus_profile(s, c.p, radii, 512);
        double rho = order_estimate(prof);
        CHECK(std::abs(rho - c.rho) < 0.05 * c.rho);
        CHECK(std::abs(theoretical_order(c.p, s) - c.rho) < 1e-9);
    }
}

TEST_CASE("order_estimate rejects insufficient span") {
    Polynomial p = oracle::poly_square();
    LinearizerSeries s = series_for(p, cplx(1.0, 0.0));
    ModulusProfile prof = modulus_profile(s, p, {10.0, 20.0, 40.0, 80.0}, 128);
    CHECK_THROWS_AS(order_estimate(prof), PreconditionError);
}

TEST_CASE("rescaling by |c| = 1 rotates the argmax but keeps logM") {
    Polynomial p = oracle::poly_outside();
    LinearizerSeries s = series_for(p, cplx(oracle::z0_outside(), 0.0));
    LinearizerSeries rot = rescale_series(s, std::polar(1.0, 1.1));
    Evaluator ev1(s, p), ev2(rot, p);
    for (double r : {20.0, 100.0}) {
        CircleExtremum a = circle_extremum(ev1, std::log(r), 1024, true);
        CircleExtremum b = circle_extremum(ev2, std::log(r), 1024, true);
        CHECK(std::abs(a.log_value - b.log_value) < 1e-8 * std::max(1.0, std::abs(a.log_value)));
    }
}

TEST_CASE("profile rejects bad radii") {
    Polynomial p = oracle::poly_square();
    LinearizerSeries s = series_for(p, cplx(1.0, 0.0));
    CHECK_THROWS_AS(modulus_profile(s, p, {2.0, 1.0}, 64), PreconditionError);
    CHECK_THROWS_AS(modulus_profile(s, p, {-1.0, 1.0}, 64), PreconditionError);
}
