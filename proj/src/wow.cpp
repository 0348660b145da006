#include "hipmlab/wow.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "hipmlab/errors.hpp"
#include "hipmlab/parallel.hpp"

namespace hipmlab {

namespace {

struct SortedLaw {
    std::vector<std::vector<double>> atoms;
    std::vector<std::vector<double>> weights;
};

// Sort every member once so each pairwise W1 is a linear merge.
SortedLaw presort(const EmpiricalLaw& law) {
    SortedLaw s;
    s.atoms.resize(law.size());
    s.weights.resize(law.size());
    for (std::size_t i = 0; i < law.size(); ++i) {
        const auto& p = law.members[i];
        std::vector<std::size_t> order(p.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return p.atoms[a] < p.atoms[b];
        });
        s.atoms[i].reserve(p.size());
        s.weights[i].reserve(p.size());
        for (std::size_t k : order) {
            s.atoms[i].push_back(p.atoms[k]);
            s.weights[i].push_back(p.weights[k]);
        }
    }
    return s;
}

}  // namespace

CostMatrix pairwise_wasserstein_matrix(const EmpiricalLaw& q1, const EmpiricalLaw& q2) {
    if (q1.size() != q2.size())
        throw ShapeError("laws have different member counts (" + std::to_string(q1.size()) +
                         " vs " + std::to_string(q2.size()) + ")");
    const std::size_t n = q1.size();
    SortedLaw s1 = presort(q1);
    SortedLaw s2 = presort(q2);

    CostMatrix cost;
    cost.n = n;
    cost.entries.resize(n * n);
    parallel_for(n, [&](std::size_t i1) {
        for (std::size_t i2 = 0; i2 < n; ++i2) {
            cost.entries[i1 * n + i2] = wasserstein1_1d_sorted(s1.atoms[i1], s1.weights[i1],
                                                               s2.atoms[i2], s2.weights[i2]);
        }
    });
    return cost;
}

double wow_distance(const EmpiricalLaw& q1, const EmpiricalLaw& q2) {
    return solve_assignment(pairwise_wasserstein_matrix(q1, q2)).value;
}

}  // namespace hipmlab
