#pragma once

#include <cstddef>
#include <functional>

#include "hipmlab/measures.hpp"

namespace hipmlab {

// Cumulative distribution function on an interval, F(a) = 0 and F(b) = 1.
struct Cdf {
    Interval domain;
    std::function<double(double)> eval;

    double operator()(double x) const { return eval(x); }
};

Cdf cdf_uniform(double lo, double hi);
Cdf cdf_two_uniform(const TwoUniformBase& mix);
Cdf cdf_empirical(const DiscreteMeasure& p, const Interval& domain);
Cdf cdf_dirac(double x, const Interval& domain);
Cdf cdf_of_base(const BaseMeasure& base);

inline constexpr std::size_t kDefaultQuadraturePoints = 100000;

// Composite midpoint quadrature of |F1 - F2| over the hull of both domains.
double wasserstein1_from_cdfs(const Cdf& f1, const Cdf& f2,
                              std::size_t quadrature_points = kDefaultQuadraturePoints);

// Exact Wasserstein-over-Wasserstein (equal to the Lipschitz HIPM) between
// two species-sampling laws that share their jump distribution: the plain W1
// of the base measures, independent of the jumps.
double species_sampling_wow(const Cdf& f1, const Cdf& f2,
                            std::size_t quadrature_points = kDefaultQuadraturePoints);

// Analytic upper bounds on the distance between a Dirichlet process and its
// three finite-dimensional approximations with N atoms.

// Dirichlet multinomial: (1/sqrt(N)) * integral of sqrt(F0 (1 - F0)).
double dirmult_upper_bound(std::size_t n_atoms, const Cdf& f0,
                           std::size_t quadrature_points = kDefaultQuadraturePoints);

// Truncated stick-breaking: 2 (alpha/(alpha+1))^N * integral of F0 (1 - F0).
double stickbreaking_upper_bound(double alpha, std::size_t n_atoms, const Cdf& f0,
                                 std::size_t quadrature_points = kDefaultQuadraturePoints);

// Hierarchical empirical measure: sqrt(alpha/(N (alpha+1))) * integral of
// sqrt(F0 (1 - F0)).
double hier_empirical_upper_bound(double alpha, std::size_t n_atoms, const Cdf& f0,
                                  std::size_t quadrature_points = kDefaultQuadraturePoints);

}  // namespace hipmlab
