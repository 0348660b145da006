#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <stdexcept>

#include "hipmlab/measures.hpp"
#include "hipmlab/ot1d.hpp"
#include "test_support.hpp"

using namespace hipmlab;
using namespace testsupport;

TEST_CASE("one-step stick break returns the first Beta draw") {
    // For alpha = 1 the Beta(1,1) draw is 1 - (1 - U), so J_1 tracks the first
    // uniform of the stream and the residual is its complement.
    Rng probe(7);
    double u = probe.uniform();
    Rng rng(7);
    auto sticks = sample_stick_breaking_weights(1.0, 1, rng);
    REQUIRE(sticks.weights.size() == 1);
    CHECK(sticks.weights[0] == doctest::Approx(u).epsilon(1e-15));
    CHECK(sticks.residual == doctest::Approx(1.0 - u).epsilon(1e-15));
}

TEST_CASE("stick-breaking residual mean matches (alpha/(alpha+1))^N") {
    const std::size_t reps = 10000;
    struct Case {
        double alpha;
        std::size_t n;
    };
    for (Case c : {Case{1.0, 5}, Case{2.0, 10}, Case{5.0, 3}}) {
        std::vector<double> residuals(reps);
        Rng rng(100 + static_cast<std::uint64_t>(c.alpha));
        for (std::size_t r = 0; r < reps; ++r) {
            Rng sub = rng.substream(r);
            residuals[r] = sample_stick_breaking_weights(c.alpha, c.n, sub).residual;
        }
        auto mc = monte_carlo(residuals);
        double expected = std::pow(c.alpha / (c.alpha + 1.0), static_cast<double>(c.n));
        CHECK(std::abs(mc.mean - expected) <= 3.0 * mc.stderr_of_mean);
    }
}

TEST_CASE("stick-breaking rejects bad parameters") {
    Rng rng(1);
    CHECK_THROWS_AS(sample_stick_breaking_weights(0.0, 3, rng), std::invalid_argument);
    CHECK_THROWS_AS(sample_stick_breaking_weights(-1.0, 3, rng), std::invalid_argument);
    CHECK_THROWS_AS(sample_stick_breaking_weights(1.0, 0, rng), std::invalid_argument);
}

TEST_CASE("truncated stick-breaking construction") {
    DPParams params{1.0, UniformBase{0.0, 1.0}};
    Rng rng(8);
    auto single = sample_truncated_stick_breaking(params, 1, rng);
    REQUIRE(single.size() == 1);
    CHECK(single.weights[0] == 1.0);

    auto p = sample_truncated_stick_breaking(params, 50, rng);
    REQUIRE(p.size() == 50);
    double sum = 0.0;
    for (double w : p.weights) sum += w;
    CHECK(std::abs(sum - 1.0) <= 1e-15);

    // final weight is the residual of the first N-1 sticks
    Rng replay(8);
    (void)sample_truncated_stick_breaking(params, 1, replay);  // advance as above
    std::vector<double> atoms(50);
    for (auto& x : atoms) x = sample_base(params.base, replay);
    auto sticks = sample_stick_breaking_weights(1.0, 49, replay);
    CHECK(p.weights.back() == sticks.residual);
}

TEST_CASE("truncated stick-breaking mean final weight") {
    DPParams params{1.0, UniformBase{0.0, 1.0}};
    const std::size_t reps = 10000;
    std::vector<double> finals(reps);
    Rng rng(9);
    for (std::size_t r = 0; r < reps; ++r) {
        Rng sub = rng.substream(r);
        finals[r] = sample_truncated_stick_breaking(params, 20, sub).weights.back();
    }
    auto mc = monte_carlo(finals);
    CHECK(std::abs(mc.mean - std::pow(0.5, 19)) <= 3.0 * mc.stderr_of_mean);
}

TEST_CASE("dirichlet multinomial weights") {
    DPParams params{5.0, UniformBase{0.0, 1.0}};
    Rng rng(10);
    auto single = sample_dirichlet_multinomial(params, 1, rng);
    REQUIRE(single.size() == 1);
    CHECK(single.weights[0] == 1.0);

    const std::size_t reps = 10000, n = 10;
    std::vector<double> first_coord(reps);
    for (std::size_t r = 0; r < reps; ++r) {
        Rng sub = rng.substream(r);
        auto p = sample_dirichlet_multinomial(params, n, sub);
        first_coord[r] = p.weights[0];
    }
    auto mc = monte_carlo(first_coord);
    CHECK(std::abs(mc.mean - 0.1) <= 3.0 * mc.stderr_of_mean);

    // marginal is Beta(alpha/n, alpha - alpha/n): variance (1/n)(1-1/n)/(alpha+1)
    double var = 0.0;
    for (double w : first_coord) var += (w - mc.mean) * (w - mc.mean);
    var /= static_cast<double>(reps - 1);
    double m4 = 0.0;
    for (double w : first_coord) {
        double d = (w - mc.mean) * (w - mc.mean);
        m4 += d * d;
    }
    m4 /= static_cast<double>(reps);
    double var_se = std::sqrt((m4 - var * var) / static_cast<double>(reps));
    CHECK(std::abs(var - 0.015) <= 3.0 * var_se);
}

TEST_CASE("polya urn marginals") {
    DPParams params{1.0, UniformBase{0.0, 1.0}};
    Rng rng(11);
    auto one = sample_dp_marginals_polya(params, 1, rng);
    REQUIRE(one.size() == 1);
    CHECK((one[0] >= 0.0 && one[0] <= 1.0));

    // huge alpha: every draw is fresh
    DPParams huge{1e8, UniformBase{0.0, 1.0}};
    auto draws = sample_dp_marginals_polya(huge, 100, rng);
    CHECK(std::set<double>(draws.begin(), draws.end()).size() == 100);
}

TEST_CASE("polya urn expected distinct values matches the urn sum") {
    DPParams params{1.0, UniformBase{0.0, 1.0}};
    const std::size_t reps = 10000;
    std::vector<double> distinct(reps);
    Rng rng(12);
    for (std::size_t r = 0; r < reps; ++r) {
        Rng sub = rng.substream(r);
        auto draws = sample_dp_marginals_polya(params, 100, sub);
        distinct[r] = static_cast<double>(std::set<double>(draws.begin(), draws.end()).size());
    }
    auto mc = monte_carlo(distinct);
    double expected = 0.0;  // sum_{k=0}^{99} 1/(1+k)
    for (int k = 0; k < 100; ++k) expected += 1.0 / (1.0 + k);
    CHECK(std::abs(mc.mean - expected) <= 3.0 * mc.stderr_of_mean);
}

TEST_CASE("polya urn first coordinate passes a KS test against the base") {
    DPParams params{1.0, UniformBase{0.0, 1.0}};
    const std::size_t reps = 10000;
    std::vector<double> first(reps);
    Rng rng(13);
    for (std::size_t r = 0; r < reps; ++r) {
        Rng sub = rng.substream(r);
        first[r] = sample_dp_marginals_polya(params, 5, sub)[0];
    }
    double d = ks_statistic(first, [](double x) { return std::clamp(x, 0.0, 1.0); });
    // critical value at level 0.001: sqrt(-ln(0.0005)/2)/sqrt(n)
    double critical = std::sqrt(-std::log(0.0005) / 2.0) / std::sqrt(static_cast<double>(reps));
    CHECK(d < critical);
}

TEST_CASE("hierarchical empirical measure has uniform weights") {
    DPParams params{1.0, UniformBase{0.0, 1.0}};
    Rng rng(14);
    auto single = hierarchical_empirical_measure(params, 1, rng);
    REQUIRE(single.size() == 1);
    CHECK(single.weights[0] == 1.0);

    auto p = hierarchical_empirical_measure(params, 64, rng);
    for (double w : p.weights) CHECK(w == 1.0 / 64.0);

    // E(DP mean) is the base mean, but a single realization's mean has
    // standard deviation Var(X)/(alpha+1) ~ 0.2, so check the average.
    const std::size_t reps = 1000;
    std::vector<double> means(reps);
    for (std::size_t r = 0; r < reps; ++r) {
        Rng sub = rng.substream(r);
        means[r] = hierarchical_empirical_measure(params, 1000, sub).mean();
    }
    auto mc = monte_carlo(means);
    CHECK(mc.mean > 0.45);
    CHECK(mc.mean < 0.55);
}

TEST_CASE("empirical hierarchical estimator shapes and substreams") {
    DPParams params{1.0, UniformBase{0.0, 1.0}};
    Rng rng(15);
    auto tiny = empirical_hierarchical_estimator(params, 1, 1, rng);
    REQUIRE(tiny.size() == 1);
    CHECK(tiny.members[0].size() == 1);
    CHECK(tiny.members[0].weights[0] == 1.0);

    Rng rng_a(16), rng_b(16);
    auto law16 = empirical_hierarchical_estimator(params, 16, 100, rng_a);
    REQUIRE(law16.size() == 16);
    for (const auto& p : law16.members) {
        REQUIRE(p.size() == 100);
        for (double w : p.weights) CHECK(w == 0.01);
    }

    // growing n keeps earlier members untouched
    auto law17 = empirical_hierarchical_estimator(params, 17, 100, rng_b);
    for (std::size_t i = 0; i < 16; ++i) {
        CHECK(law16.members[i].atoms == law17.members[i].atoms);
    }

    // successive calls on the same stream give fresh draws
    Rng rng_c(16);
    auto first = empirical_hierarchical_estimator(params, 4, 10, rng_c);
    auto second = empirical_hierarchical_estimator(params, 4, 10, rng_c);
    CHECK(first.members[0].atoms != second.members[0].atoms);
}

TEST_CASE("samplers satisfy the measure invariants across many seeds") {
    DPParams params{1.5, TwoUniformBase{{-1.0, -0.25}, {0.25, 1.0}, 0.4}};
    Interval domain = base_support(params.base);
    Rng rng(17);
    for (int seed = 0; seed < 1000; ++seed) {
        Rng sub = rng.substream(seed);
        sample_truncated_stick_breaking(params, 1 + seed % 13, sub).validate(domain);
        sample_dirichlet_multinomial(params, 1 + seed % 13, sub).validate(domain);
        hierarchical_empirical_measure(params, 1 + seed % 13, sub).validate(domain);
    }
}

TEST_CASE("samplers are deterministic given the seed") {
    DPParams params{2.0, UniformBase{-1.0, 1.0}};
    Rng rng_a(18), rng_b(18);
    auto p1 = sample_dirichlet_multinomial(params, 20, rng_a);
    auto p2 = sample_dirichlet_multinomial(params, 20, rng_b);
    CHECK(p1.atoms == p2.atoms);
    CHECK(p1.weights == p2.weights);

    Rng rng_c(19), rng_d(19);
    auto law1 = empirical_hierarchical_estimator(params, 8, 30, rng_c);
    auto law2 = empirical_hierarchical_estimator(params, 8, 30, rng_d);
    for (std::size_t i = 0; i < 8; ++i) {
        CHECK(law1.members[i].atoms == law2.members[i].atoms);
        CHECK(law1.members[i].weights == law2.members[i].weights);
    }
}

TEST_CASE("project_to_grid basics") {
    Grid grid(0.0, 1.0, 5);  // points 0, .25, .5, .75, 1

    DiscreteMeasure on_point{{0.5}, {1.0}};
    auto row = project_to_grid(on_point, grid);
    CHECK(row == std::vector<double>{0.0, 0.0, 1.0, 0.0, 0.0});

    Grid coarse(0.0, 1.0, 2);
    DiscreteMeasure p{{0.4}, {1.0}};
    CHECK(project_to_grid(p, coarse) == std::vector<double>{1.0, 0.0});

    // exact midpoint ties go to the lower index
    DiscreteMeasure mid{{0.5}, {1.0}};
    CHECK(project_to_grid(mid, coarse) == std::vector<double>{1.0, 0.0});

    DiscreteMeasure outside{{1.5}, {1.0}};
    CHECK_THROWS_AS(project_to_grid(outside, grid), std::domain_error);
}

TEST_CASE("project_to_grid moves measures by at most dx/2") {
    Rng rng(20);
    Grid grid(-1.0, 1.0, 17);
    for (int trial = 0; trial < 100; ++trial) {
        auto p = random_measure(rng, 10, -1.0, 1.0);
        auto row = project_to_grid(p, grid);
        DiscreteMeasure projected;
        for (std::size_t q = 0; q < grid.points; ++q) {
            if (row[q] == 0.0) continue;
            projected.atoms.push_back(grid.point(q));
            projected.weights.push_back(row[q]);
        }
        CHECK(wasserstein1_1d(p, projected) <= grid.dx() / 2.0 + 1e-12);
    }
}

TEST_CASE("project_to_grid is idempotent on gridded measures") {
    Rng rng(21);
    Grid grid(0.0, 2.0, 9);
    auto p = random_on_grid_law(rng, grid, 1, 6).members[0];
    auto row = project_to_grid(p, grid);
    DiscreteMeasure gridded;
    for (std::size_t q = 0; q < grid.points; ++q) {
        if (row[q] == 0.0) continue;
        gridded.atoms.push_back(grid.point(q));
        gridded.weights.push_back(row[q]);
    }
    CHECK(project_to_grid(gridded, grid) == row);
}

TEST_CASE("type invariants are enforced") {
    Interval domain{0.0, 1.0};
    DiscreteMeasure bad_weights{{0.5}, {0.9}};
    CHECK_THROWS_AS(bad_weights.validate(domain), std::invalid_argument);
    DiscreteMeasure negative{{0.2, 0.4}, {1.5, -0.5}};
    CHECK_THROWS_AS(negative.validate(domain), std::invalid_argument);
    DiscreteMeasure ok{{0.2, 0.4}, {0.5, 0.5}};
    CHECK_NOTHROW(ok.validate(domain));

    CHECK_THROWS_AS(Grid(1.0, 0.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(Grid(0.0, 1.0, 1), std::invalid_argument);

    EmpiricalLaw empty;
    CHECK_THROWS_AS(empty.validate(), std::invalid_argument);
}
