#include "hipmlab/ot1d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "hipmlab/errors.hpp"

namespace hipmlab {

void CostMatrix::validate() const {
    if (n == 0) throw std::invalid_argument("empty cost matrix");
    if (entries.size() != n * n) throw std::invalid_argument("cost matrix is not square");
    for (double c : entries) {
        if (!std::isfinite(c) || c < 0.0)
            throw std::invalid_argument("cost entries must be finite and nonnegative");
    }
}

double wasserstein1_1d_sorted(std::span<const double> atoms1, std::span<const double> weights1,
                              std::span<const double> atoms2, std::span<const double> weights2) {
    std::size_t i = 0, j = 0;
    const std::size_t m1 = atoms1.size(), m2 = atoms2.size();
    double f1 = 0.0, f2 = 0.0;
    double integral = 0.0;
    double x_prev = std::min(atoms1[0], atoms2[0]);
    while (i < m1 || j < m2) {
        double x = std::numeric_limits<double>::infinity();
        if (i < m1) x = atoms1[i];
        if (j < m2 && atoms2[j] < x) x = atoms2[j];
        integral += std::abs(f1 - f2) * (x - x_prev);
        while (i < m1 && atoms1[i] == x) f1 += weights1[i++];
        while (j < m2 && atoms2[j] == x) f2 += weights2[j++];
        x_prev = x;
    }
    return integral;
}

namespace {

struct SortedMeasure {
    std::vector<double> atoms;
    std::vector<double> weights;
};

// Average of the selected costs, accumulated in ascending order so the value
// depends only on the multiset. Row/column relabelings and argument swaps
// then give bit-identical results.
double average_sorted(std::vector<double>& values) {
    std::sort(values.begin(), values.end());
    double total = 0.0;
    for (double v : values) total += v;
    return total / static_cast<double>(values.size());
}

SortedMeasure sort_measure(const DiscreteMeasure& p) {
    std::vector<std::size_t> order(p.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return p.atoms[a] < p.atoms[b]; });
    SortedMeasure s;
    s.atoms.reserve(p.size());
    s.weights.reserve(p.size());
    for (std::size_t k : order) {
        s.atoms.push_back(p.atoms[k]);
        s.weights.push_back(p.weights[k]);
    }
    return s;
}

}  // namespace

double wasserstein1_1d(const DiscreteMeasure& p1, const DiscreteMeasure& p2) {
    if (p1.size() == 0 || p2.size() == 0)
        throw std::invalid_argument("wasserstein1_1d requires nonempty measures");
    SortedMeasure s1 = sort_measure(p1);
    SortedMeasure s2 = sort_measure(p2);
    return wasserstein1_1d_sorted(s1.atoms, s1.weights, s2.atoms, s2.weights);
}

AssignmentResult solve_assignment(const CostMatrix& cost) {
    cost.validate();
    const std::size_t n = cost.n;
    const double inf = std::numeric_limits<double>::infinity();

    // Kuhn-Munkres with row/column potentials, 1-based scratch arrays.
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        match[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            std::size_t i0 = match[j0], j1 = 0;
            double delta = inf;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                double cur = cost.at(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            std::size_t j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    AssignmentResult result;
    result.permutation.assign(n, 0);
    for (std::size_t j = 1; j <= n; ++j) result.permutation[match[j] - 1] = j - 1;
    std::vector<double> selected(n);
    for (std::size_t i = 0; i < n; ++i) selected[i] = cost.at(i, result.permutation[i]);
    result.value = average_sorted(selected);
    return result;
}

AssignmentResult ot_uniform_1d_sorted(std::span<const double> values1,
                                      std::span<const double> values2) {
    if (values1.size() != values2.size())
        throw ShapeError("value lists have different lengths");
    if (values1.empty()) throw std::invalid_argument("empty value lists");
    const std::size_t n = values1.size();

    std::vector<std::size_t> order1(n), order2(n);
    std::iota(order1.begin(), order1.end(), std::size_t{0});
    std::iota(order2.begin(), order2.end(), std::size_t{0});
    std::stable_sort(order1.begin(), order1.end(),
                     [&](std::size_t a, std::size_t b) { return values1[a] < values1[b]; });
    std::stable_sort(order2.begin(), order2.end(),
                     [&](std::size_t a, std::size_t b) { return values2[a] < values2[b]; });

    AssignmentResult result;
    result.permutation.assign(n, 0);
    std::vector<double> selected(n);
    for (std::size_t r = 0; r < n; ++r) {
        result.permutation[order1[r]] = order2[r];
        selected[r] = std::abs(values1[order1[r]] - values2[order2[r]]);
    }
    result.value = average_sorted(selected);
    return result;
}

}  // namespace hipmlab
