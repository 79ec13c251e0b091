#include <doctest.h>

#include "oracles.hpp"
#include "spiderweb/affine.hpp"

using namespace spiderweb;

namespace {

bool contains_map(const std::vector<AffineMap>& g, cplx a, cplx b, double tol = 1e-8) {
    for (const auto& h : g)
        if (std::abs(h.a - a) < tol && std::abs(h.b - b) < tol) return true;
    return false;
}

}  // namespace

TEST_CASE("symmetries of the 4th roots of unity: 4 rotations") {
    std::vector<cplx> Z = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    auto g = affine_symmetries(Z, 1e-9);
    REQUIRE(g.size() == 4);
    CHECK(contains_map(g, {1, 0}, {0, 0}));
    CHECK(contains_map(g, {0, 1}, {0, 0}));
    CHECK(contains_map(g, {-1, 0}, {0, 0}));
    CHECK(contains_map(g, {0, -1}, {0, 0}));
}

TEST_CASE("symmetries of {0,1}: identity and the swap 1-z") {
    std::vector<cplx> Z = {{0, 0}, {1, 0}};
    auto g = affine_symmetries(Z, 1e-9);
    REQUIRE(g.size() == 2);
    CHECK(contains_map(g, {1, 0}, {0, 0}));
    CHECK(contains_map(g, {-1, 0}, {1, 0}));
}

TEST_CASE("three generic points admit only the identity") {
    SplitMix64 rng(41);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<cplx> Z = {3.0 * rng.unit_disk(), 3.0 * rng.unit_disk(), 3.0 * rng.unit_disk()};
        bool degenerate = false;
        for (std::size_t i = 0; i < Z.size(); ++i)
            for (std::size_t j = i + 1; j < Z.size(); ++j)
                if (std::abs(Z[i] - Z[j]) < 1e-3) degenerate = true;
        if (degenerate) continue;
        auto g = affine_symmetries(Z, 1e-9);
        auto brute = oracle::affine_symmetries_bruteforce(Z, 1e-9);
        CHECK(g.size() == 1);
        CHECK(g.size() == brute.size());
        CHECK(g[0].is_identity(1e-8));
    }
}

TEST_CASE("the result is a group: closed under composition and inverse, fixes the centroid") {
    std::vector<cplx> Z = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    auto g = affine_symmetries(Z, 1e-9);
    cplx centroid = 0.0;
    for (const auto& z : Z) centroid += z;
    centroid /= static_cast<double>(Z.size());
    for (const auto& h1 : g) {
        CHECK(std::abs(h1(centroid) - centroid) < 1e-9);
        bool inv_in = false;
        for (const auto& h2 : g)
            if (std::abs(compose(h1, h2).a - 1.0) < 1e-8 && std::abs(compose(h1, h2).b) < 1e-8)
                inv_in = true;
        CHECK(inv_in);
        for (const auto& h2 : g) {
            AffineMap c = compose(h1, h2);
            CHECK(contains_map(g, c.a, c.b));
        }
    }
    // every element permutes Z
    for (const auto& h : g) {
        for (const auto& z : Z) {
            double best = 1e9;
            for (const auto& w : Z) best = std::min(best, std::abs(h(z) - w));
            CHECK(best < 1e-9);
        }
    }
}

TEST_CASE("agreement with the brute-force oracle on symmetric sets") {
    // vertices of a regular pentagon shifted off the origin
    std::vector<cplx> Z;
    cplx shift(0.7, -0.3);
    for (int k = 0; k < 5; ++k) {
        double th = 2.0 * kPi * k / 5.0;
        Z.push_back(shift + cplx(std::cos(th), std::sin(th)));
    }
    auto mine = affine_symmetries(Z, 1e-9);
    auto brute = oracle::affine_symmetries_bruteforce(Z, 1e-9);
    CHECK(mine.size() == 5);
    CHECK(mine.size() == brute.size());
}
