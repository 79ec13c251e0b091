#include <doctest.h>

#include "oracles.hpp"
#include "spiderweb/singular.hpp"

using namespace spiderweb;

TEST_CASE("exceptional values by coefficient comparison") {
    auto ev_sq = exceptional_value(oracle::poly_square());
    REQUIRE(ev_sq.has_value());
    CHECK(std::abs(*ev_sq) < 1e-12);

    CHECK(!exceptional_value(oracle::poly_chebyshev()).has_value());
    CHECK(!exceptional_value(oracle::poly_outside()).has_value());
}

TEST_CASE("singular sets of the e^z case: Ov = {0}, Cv(L) empty") {
    SingularSets sets = singular_sets(oracle::poly_square(), cplx(1.0, 0.0), 6);
    REQUIRE(sets.Ev_p.size() == 1);
    CHECK(std::abs(sets.Ev_p[0]) < 1e-12);
    REQUIRE(sets.Ov_L.size() == 1);
    CHECK(std::abs(sets.Ov_L[0]) < 1e-12);  // e^z omits exactly 0
    CHECK(sets.Cv_L.empty());
}

TEST_CASE("singular sets of z^2-2: postcritical orbit {-2, 2}") {
    SingularSets sets = singular_sets(oracle::poly_chebyshev(), cplx(2.0, 0.0), 4);
    CHECK(sets.Ev_p.empty());
    REQUIRE(sets.Cv_L.size() == 2);
    CHECK(std::abs(sets.Cv_L[0] + 2.0) < 1e-12);
    CHECK(std::abs(sets.Cv_L[1] - 2.0) < 1e-12);
}

TEST_CASE("zeros of L' for 2cosh(sqrt z) sit at -k^2 pi^2 with images +-2") {
    Polynomial p = oracle::poly_chebyshev();
    LinearizerSeries s = build_linearizer(p, oracle::fixed_point_at(p, cplx(2.0, 0.0)), 64);
    CvReport rep = verify_Cv_characterization(s, p, 4, {5.0, 100.0}, 1e-6);
    REQUIRE(rep.zero_count == 3);
    for (int k = 1; k <= 3; ++k) {
        double target = -k * k * kPi * kPi;
        bool found = false;
        for (const auto& z : rep.zeros)
            if (std::abs(z.z - cplx(target, 0.0)) < 1e-6 * std::abs(target)) found = true;
        CHECK(found);
    }
    CHECK(rep.max_deviation <= 1e-6);
    CHECK(rep.all_matched);
}

TEST_CASE("(e^z)' never vanishes: zero count 0 in any annulus") {
    Polynomial p = oracle::poly_square();
    LinearizerSeries s = build_linearizer(p, oracle::fixed_point_at(p, cplx(1.0, 0.0)), 64);
    CvReport rep = verify_Cv_characterization(s, p, 4, {2.0, 30.0});
    CHECK(rep.zero_count == 0);
    CHECK(rep.unresolved_cells == 0);
}

TEST_CASE("z^2-5: critical values of L land on the postcritical orbit") {
    Polynomial p = oracle::poly_outside();
    LinearizerSeries s =
        build_linearizer(p, oracle::fixed_point_at(p, cplx(oracle::z0_outside(), 0.0)), 64);
    CvReport rep = verify_Cv_characterization(s, p, 8, {1.0, 60.0}, 1e-6);
    CHECK(rep.zero_count > 0);
    CHECK(rep.all_matched);
}
