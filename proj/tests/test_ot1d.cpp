#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "hipmlab/errors.hpp"
#include "hipmlab/ot1d.hpp"
#include "test_support.hpp"

using namespace hipmlab;
using namespace testsupport;

namespace {

DiscreteMeasure dirac(double x) { return {{x}, {1.0}}; }

CostMatrix random_cost(Rng& rng, std::size_t n) {
    CostMatrix c;
    c.n = n;
    c.entries.resize(n * n);
    for (double& e : c.entries) e = rng.uniform();
    return c;
}

}  // namespace

TEST_CASE("wasserstein1_1d on two Diracs is the atom distance") {
    CHECK(wasserstein1_1d(dirac(0.25), dirac(1.5)) == doctest::Approx(1.25).epsilon(1e-15));
    CHECK(wasserstein1_1d(dirac(-3.0), dirac(-3.0)) == 0.0);
}

TEST_CASE("wasserstein1_1d splits mass symmetrically around a middle Dirac") {
    DiscreteMeasure p1{{0.0, 1.0}, {0.5, 0.5}};
    // integral of |F1 - F2| piecewise: 0.5 * 0.5 + 0.5 * 0.5
    CHECK(wasserstein1_1d(p1, dirac(0.5)) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("wasserstein1_1d matches the 5/8 value for the split-uniform pair") {
    auto uniform_inv = [](double u) { return -0.5 + u; };
    auto mixture_inv = [](double u) {
        return u <= 0.5 ? -1.0 + 0.5 * u : 0.75 + 0.5 * (u - 0.5);
    };
    auto p1 = quantile_discretize(uniform_inv, 100000);
    auto p2 = quantile_discretize(mixture_inv, 100000);
    CHECK(wasserstein1_1d(p1, p2) == doctest::Approx(0.625).epsilon(1e-3));
}

TEST_CASE("wasserstein1_1d rejects empty measures") {
    DiscreteMeasure empty;
    CHECK_THROWS_AS(wasserstein1_1d(empty, dirac(0.0)), std::invalid_argument);
}

TEST_CASE("wasserstein1_1d is symmetric and satisfies the triangle inequality") {
    Rng rng(41);
    for (int trial = 0; trial < 200; ++trial) {
        auto p1 = random_measure(rng, 6, -1.0, 1.0);
        auto p2 = random_measure(rng, 6, -1.0, 1.0);
        auto p3 = random_measure(rng, 6, -1.0, 1.0);
        double d12 = wasserstein1_1d(p1, p2);
        double d21 = wasserstein1_1d(p2, p1);
        CHECK(d12 == d21);
        CHECK(d12 <= wasserstein1_1d(p1, p3) + wasserstein1_1d(p3, p2) + 1e-12);
        CHECK(d12 >= 0.0);
    }
}

TEST_CASE("wasserstein1_1d translation behavior") {
    Rng rng(42);
    for (int trial = 0; trial < 50; ++trial) {
        auto p1 = random_measure(rng, 6, 0.0, 1.0);
        auto p2 = random_measure(rng, 6, 0.0, 1.0);
        double c = rng.uniform(-2.0, 2.0);
        auto shift = [c](DiscreteMeasure p) {
            for (double& x : p.atoms) x += c;
            return p;
        };
        double base = wasserstein1_1d(p1, p2);
        CHECK(wasserstein1_1d(shift(p1), shift(p2)) == doctest::Approx(base).epsilon(1e-12));
        // shifting one side moves the distance by at most |c| ...
        CHECK(wasserstein1_1d(shift(p1), p2) <= base + std::abs(c) + 1e-12);
        // ... and by exactly |c| for equal shapes
        CHECK(wasserstein1_1d(shift(p1), p1) == doctest::Approx(std::abs(c)).epsilon(1e-12));
    }
}

TEST_CASE("solve_assignment picks the zero diagonal") {
    CostMatrix c{2, {0.0, 1.0, 1.0, 0.0}};
    auto r = solve_assignment(c);
    CHECK(r.value == 0.0);
    CHECK(r.permutation == std::vector<std::size_t>{0, 1});
}

TEST_CASE("solve_assignment picks the zero anti-diagonal") {
    CostMatrix c{2, {1.0, 0.0, 0.0, 1.0}};
    auto r = solve_assignment(c);
    CHECK(r.value == 0.0);
    CHECK(r.permutation == std::vector<std::size_t>{1, 0});
}

TEST_CASE("solve_assignment equals brute force on random matrices up to n=7") {
    Rng rng(43);
    for (int trial = 0; trial < 300; ++trial) {
        std::size_t n = 2 + rng.uniform_index(6);
        auto c = random_cost(rng, n);
        auto fast = solve_assignment(c);
        auto slow = brute_force_assignment(c);
        CHECK(fast.value == slow.value);
    }
}

TEST_CASE("solve_assignment value survives row and column permutations") {
    Rng rng(44);
    for (int trial = 0; trial < 50; ++trial) {
        std::size_t n = 3 + rng.uniform_index(5);
        auto c = random_cost(rng, n);
        std::vector<std::size_t> rows(n), cols(n);
        std::iota(rows.begin(), rows.end(), std::size_t{0});
        std::iota(cols.begin(), cols.end(), std::size_t{0});
        for (std::size_t j = 0; j + 1 < n; ++j) {
            std::swap(rows[j], rows[j + rng.uniform_index(n - j)]);
            std::swap(cols[j], cols[j + rng.uniform_index(n - j)]);
        }
        CostMatrix shuffled;
        shuffled.n = n;
        shuffled.entries.resize(n * n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                shuffled.at(i, j) = c.at(rows[i], cols[j]);
        CHECK(solve_assignment(shuffled).value == solve_assignment(c).value);
    }
}

TEST_CASE("solve_assignment rejects malformed input") {
    CostMatrix not_square{2, {1.0, 2.0, 3.0}};
    CHECK_THROWS_AS(solve_assignment(not_square), std::invalid_argument);
    CostMatrix with_nan{2, {0.0, std::nan(""), 1.0, 0.0}};
    CHECK_THROWS_AS(solve_assignment(with_nan), std::invalid_argument);
    CHECK_THROWS_AS(solve_assignment(CostMatrix{}), std::invalid_argument);
}

TEST_CASE("ot_uniform_1d_sorted trivial cases") {
    std::vector<double> same{0.4, -0.2, 1.0};
    CHECK(ot_uniform_1d_sorted(same, same).value == 0.0);
    std::vector<double> a{0.0, 1.0}, b{1.0, 0.0};
    auto r = ot_uniform_1d_sorted(a, b);
    CHECK(r.value == 0.0);
    CHECK(r.permutation == std::vector<std::size_t>{1, 0});
    CHECK_THROWS_AS(ot_uniform_1d_sorted(a, same), ShapeError);
}

TEST_CASE("ot_uniform_1d_sorted equals the assignment solver on |v1-v2| costs") {
    // 1-D assignment optima are not unique: when two values of one list sit on
    // the same side of two values of the other, crossing the match costs the
    // same. The two routes can then sum different (equal-total) cost multisets,
    // so agreement is asserted at a few ulps rather than bitwise.
    Rng rng(45);
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t n = 1 + rng.uniform_index(7);
        std::vector<double> v1(n), v2(n);
        for (auto& v : v1) v = rng.uniform(-1.0, 1.0);
        for (auto& v : v2) v = rng.uniform(-1.0, 1.0);
        CostMatrix c;
        c.n = n;
        c.entries.resize(n * n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) c.at(i, j) = std::abs(v1[i] - v2[j]);
        CHECK(std::abs(ot_uniform_1d_sorted(v1, v2).value - solve_assignment(c).value) <=
              1e-14);
    }
    // larger instances, solver only
    for (int trial = 0; trial < 10; ++trial) {
        std::size_t n = 33 + rng.uniform_index(32);
        std::vector<double> v1(n), v2(n);
        for (auto& v : v1) v = rng.uniform(-1.0, 1.0);
        for (auto& v : v2) v = rng.uniform(-1.0, 1.0);
        CostMatrix c;
        c.n = n;
        c.entries.resize(n * n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) c.at(i, j) = std::abs(v1[i] - v2[j]);
        CHECK(std::abs(ot_uniform_1d_sorted(v1, v2).value - solve_assignment(c).value) <=
              1e-13);
    }
}
