#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "hipmlab/rng.hpp"

namespace hipmlab {

struct Interval {
    double a = 0.0;
    double b = 1.0;

    bool contains(double x) const { return x >= a && x <= b; }
    double length() const { return b - a; }
};

// One realization of a random probability: weighted atoms on an interval.
// Weights are nonnegative and sum to 1 (1e-12 absolute tolerance).
struct DiscreteMeasure {
    std::vector<double> atoms;
    std::vector<double> weights;

    std::size_t size() const { return atoms.size(); }
    double mean() const;

    // Throws std::invalid_argument on violated invariants.
    void validate(const Interval& domain) const;

    // Rescales weights by their exact sum when |sum - 1| > 1e-15.
    void renormalize();
};

// A discrete law of random probabilities: the uniform mixture of its members.
struct EmpiricalLaw {
    std::vector<DiscreteMeasure> members;
    Interval domain;

    std::size_t size() const { return members.size(); }
    void validate() const;
};

// Equally spaced points Y_q = a + q * dx, q = 0..points-1.
struct Grid {
    double a = 0.0;
    double b = 1.0;
    std::size_t points = 2;

    Grid() = default;
    Grid(double a_, double b_, std::size_t points_);

    double dx() const { return (b - a) / static_cast<double>(points - 1); }
    double point(std::size_t q) const { return a + static_cast<double>(q) * dx(); }
    Interval domain() const { return {a, b}; }
};

// Eulerian form of an EmpiricalLaw: row i holds member i's weights on the grid.
struct GriddedLaw {
    Grid grid;
    std::size_t members = 0;
    std::vector<double> weights;  // row-major, members x grid.points

    double& at(std::size_t i, std::size_t q) { return weights[i * grid.points + q]; }
    double at(std::size_t i, std::size_t q) const { return weights[i * grid.points + q]; }
    const double* row(std::size_t i) const { return weights.data() + i * grid.points; }
    void validate() const;
};

// Base-measure descriptors: exactly the ones the experiments need.
struct UniformBase {
    double lo = 0.0;
    double hi = 1.0;
};

struct TwoUniformBase {
    UniformBase first;
    UniformBase second;
    double first_weight = 0.5;
};

struct EmpiricalBase {
    DiscreteMeasure measure;
};

using BaseMeasure = std::variant<UniformBase, TwoUniformBase, EmpiricalBase>;

double sample_base(const BaseMeasure& base, Rng& rng);
Interval base_support(const BaseMeasure& base);

struct DPParams {
    double alpha = 1.0;
    BaseMeasure base = UniformBase{};
};

struct StickBreakingWeights {
    std::vector<double> weights;  // J_1..J_N
    double residual;              // 1 - sum of weights
};

// J_i = V_i * prod_{j<i} (1 - V_j) with V_i iid Beta(1, alpha), sampled by
// inverse CDF: V = 1 - (1-U)^(1/alpha).
StickBreakingWeights sample_stick_breaking_weights(double alpha, std::size_t n, Rng& rng);

// N atoms iid from the base; first N-1 stick weights plus the residual as the
// final weight, so the total is 1 by construction.
DiscreteMeasure sample_truncated_stick_breaking(const DPParams& params, std::size_t n, Rng& rng);

// N atoms iid from the base; weights a single draw from Dirichlet(alpha/N, ..., alpha/N).
DiscreteMeasure sample_dirichlet_multinomial(const DPParams& params, std::size_t n, Rng& rng);

// Exchangeable marginal draws of a Dirichlet process via the Polya urn:
// X_{k+1} is fresh from the base with probability alpha/(alpha+k), otherwise a
// uniformly chosen previous value.
std::vector<double> sample_dp_marginals_polya(const DPParams& params, std::size_t m, Rng& rng);

// Uniform weights 1/N on N Polya-urn draws.
DiscreteMeasure hierarchical_empirical_measure(const DPParams& params, std::size_t n, Rng& rng);

// n independent members, each a hierarchical empirical measure with m atoms.
// Member i is generated from a substream keyed by (rng seed, i), so growing n
// never reshuffles earlier members.
EmpiricalLaw empirical_hierarchical_estimator(const DPParams& params, std::size_t n,
                                              std::size_t m, Rng& rng);

// Snaps each atom to the nearest grid point (ties go to the lower index) and
// returns the accumulated weight row. Moves the measure by at most dx/2 in
// Wasserstein-1. Throws std::domain_error for atoms outside the grid interval.
std::vector<double> project_to_grid(const DiscreteMeasure& p, const Grid& grid);

GriddedLaw project_law_to_grid(const EmpiricalLaw& law, const Grid& grid);

}  // namespace hipmlab
