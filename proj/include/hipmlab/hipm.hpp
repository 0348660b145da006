#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hipmlab/measures.hpp"
#include "hipmlab/ot1d.hpp"

namespace hipmlab {

// A discretized 1-Lipschitz test function, parametrized by its normalized
// derivative g on grid gaps. f is recovered by the cumulative map
// f_0 = 0, f_{q+1} = f_q + dx * g_q, so |g_q| <= 1 is exactly the Lipschitz
// constraint.
struct LipschitzProfile {
    Grid grid;
    std::vector<double> g;  // grid.points - 1 values in [-1, 1]

    std::vector<double> f() const;
    void validate() const;
};

enum class LineSearchRule {
    projected,      // expected increase = <a, a> with a the projected gradient
    full_gradient,  // expected increase = <a, grad>, the literal pseudocode form
};

struct AscentConfig {
    std::size_t n_init = 8;
    std::size_t n_step = 500;
    double epsilon = 1e-7;
    bool include_identity_init = true;
    std::uint64_t seed = 0;
    LineSearchRule line_search = LineSearchRule::projected;
    bool record_trace = false;
};

struct AscentTraceRow {
    std::size_t restart = 0;
    std::size_t iteration = 0;
    double value = 0.0;
    double step = 0.0;
};

struct AscentResult {
    double best_value = 0.0;
    LipschitzProfile best_profile;
    std::vector<AscentTraceRow> trace;  // filled only when record_trace
};

struct ObjectiveResult {
    double value = 0.0;
    std::vector<std::size_t> permutation;
};

// Per-member integrals: s_i = sum_q w_{i,q} f_q.
std::vector<double> scalarize(const GriddedLaw& law, std::span<const double> f);

// G(f) = min over permutations of (1/n) sum_i |s1_i - s2_{sigma(i)}|; the
// optimal permutation comes from sorting the two scalarized samples.
ObjectiveResult objective_G(const GriddedLaw& q1, const GriddedLaw& q2,
                            std::span<const double> f);

// Facet gradient: grad_q = (1/n) sum_i (w1_{i,q} - w2_{sigma(i),q}) * sign_i,
// with sign_i = sign(s1_i - s2_{sigma(i)}) and sign(0) = 0.
std::vector<double> gradient_G(const GriddedLaw& q1, const GriddedLaw& q2,
                               std::span<const double> f);

// Chain rule through the cumulative map: component q is dx times the suffix
// sum of gradient_G past q.
std::vector<double> gradient_Ghat(const GriddedLaw& q1, const GriddedLaw& q2,
                                  const LipschitzProfile& profile);

// Algorithm: n_init restarts of projected gradient ascent over the box
// [-1,1]^(M-1) with backtracking line search; returns the best restart. The
// result is a feasible value, hence a lower approximation of the Lipschitz
// HIPM between the two gridded laws.
AscentResult projected_gradient_ascent(const GriddedLaw& q1, const GriddedLaw& q2,
                                       const AscentConfig& config);

// Projects both laws onto the grid and runs the ascent.
double hipm_lip_distance(const EmpiricalLaw& q1, const EmpiricalLaw& q2, const Grid& grid,
                         const AscentConfig& config);

// W1 between the empirical distributions of the member means: the value of
// the identity test function, always a lower bound of the Lipschitz HIPM.
double mean_lower_bound(const EmpiricalLaw& q1, const EmpiricalLaw& q2);

}  // namespace hipmlab
