#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hipmlab/measures.hpp"

namespace hipmlab {

struct CostMatrix {
    std::size_t n = 0;
    std::vector<double> entries;  // row-major, n x n

    double& at(std::size_t i, std::size_t j) { return entries[i * n + j]; }
    double at(std::size_t i, std::size_t j) const { return entries[i * n + j]; }
    void validate() const;
};

struct AssignmentResult {
    std::vector<std::size_t> permutation;  // row i matched to column permutation[i]
    double value = 0.0;                    // average cost (1/n) * sum of selected entries
};

// Exact W1 between two discrete measures on R, computed as the integral of
// |F1 - F2| over the merged atom sequence.
double wasserstein1_1d(const DiscreteMeasure& p1, const DiscreteMeasure& p2);

// Same, for atom/weight arrays already sorted by atom. The hot path of the
// pairwise cost matrix.
double wasserstein1_1d_sorted(std::span<const double> atoms1, std::span<const double> weights1,
                              std::span<const double> atoms2, std::span<const double> weights2);

// Exact minimum-average-cost assignment (Kuhn-Munkres with potentials, O(n^3)).
AssignmentResult solve_assignment(const CostMatrix& cost);

// Optimal assignment between two uniform empirical samples on R: match the
// i-th smallest of values1 to the i-th smallest of values2. Ties keep the
// original index order. Equals solve_assignment on |v1_i - v2_j| costs.
AssignmentResult ot_uniform_1d_sorted(std::span<const double> values1,
                                      std::span<const double> values2);

}  // namespace hipmlab
