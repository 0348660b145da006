#include "hipmlab/hipm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <string>

#include "hipmlab/errors.hpp"
#include "hipmlab/parallel.hpp"
#include "hipmlab/rng.hpp"

namespace hipmlab {

namespace {

bool same_grid(const Grid& g1, const Grid& g2) {
    return g1.a == g2.a && g1.b == g2.b && g1.points == g2.points;
}

void check_compatible(const GriddedLaw& q1, const GriddedLaw& q2) {
    if (!same_grid(q1.grid, q2.grid)) throw ShapeError("laws live on different grids");
    if (q1.members != q2.members)
        throw ShapeError("laws have different member counts (" + std::to_string(q1.members) +
                         " vs " + std::to_string(q2.members) + ")");
}

// f = A g for the cumulative matrix A (first row zero, lower-triangular
// ones scaled by dx).
std::vector<double> cumulative_f(const Grid& grid, std::span<const double> g) {
    std::vector<double> f(grid.points, 0.0);
    const double dx = grid.dx();
    for (std::size_t q = 0; q + 1 < grid.points; ++q) f[q + 1] = f[q] + dx * g[q];
    return f;
}

struct Facet {
    double value = 0.0;
    std::vector<std::size_t> permutation;
    std::vector<double> signs;  // sign(s1_i - s2_{sigma(i)}), 0 on ties
};

Facet facet_at(std::span<const double> s1, std::span<const double> s2) {
    AssignmentResult match = ot_uniform_1d_sorted(s1, s2);
    Facet facet;
    facet.value = match.value;
    facet.permutation = std::move(match.permutation);
    facet.signs.resize(s1.size());
    for (std::size_t i = 0; i < s1.size(); ++i) {
        double d = s1[i] - s2[facet.permutation[i]];
        facet.signs[i] = d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0);
    }
    return facet;
}

std::vector<double> gradient_from_facet(const GriddedLaw& q1, const GriddedLaw& q2,
                                        const Facet& facet) {
    const std::size_t n = q1.members, m = q1.grid.points;
    std::vector<double> grad(m, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double s = facet.signs[i];
        if (s == 0.0) continue;
        const double* w1 = q1.row(i);
        const double* w2 = q2.row(facet.permutation[i]);
        for (std::size_t q = 0; q < m; ++q) grad[q] += s * (w1[q] - w2[q]);
    }
    for (double& v : grad) v /= static_cast<double>(n);
    return grad;
}

// A^T v: suffix sums scaled by dx.
std::vector<double> transpose_cumulative(const Grid& grid, std::span<const double> grad) {
    std::vector<double> out(grid.points - 1, 0.0);
    const double dx = grid.dx();
    double suffix = 0.0;
    for (std::size_t q = grid.points - 1; q >= 1; --q) {
        suffix += grad[q];
        out[q - 1] = dx * suffix;
    }
    return out;
}

}  // namespace

std::vector<double> LipschitzProfile::f() const { return cumulative_f(grid, g); }

void LipschitzProfile::validate() const {
    if (g.size() != grid.points - 1)
        throw std::invalid_argument("profile has wrong derivative length");
    for (double v : g) {
        if (!(std::abs(v) <= 1.0)) throw std::invalid_argument("derivative outside [-1, 1]");
    }
}

std::vector<double> scalarize(const GriddedLaw& law, std::span<const double> f) {
    if (f.size() != law.grid.points)
        throw std::invalid_argument("test-function vector length does not match grid");
    const std::size_t n = law.members, m = law.grid.points;
    std::vector<double> s(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double* w = law.row(i);
        double acc = 0.0;
        for (std::size_t q = 0; q < m; ++q) acc += w[q] * f[q];
        s[i] = acc;
    }
    return s;
}

ObjectiveResult objective_G(const GriddedLaw& q1, const GriddedLaw& q2,
                            std::span<const double> f) {
    check_compatible(q1, q2);
    std::vector<double> s1 = scalarize(q1, f);
    std::vector<double> s2 = scalarize(q2, f);
    Facet facet = facet_at(s1, s2);
    return {facet.value, std::move(facet.permutation)};
}

std::vector<double> gradient_G(const GriddedLaw& q1, const GriddedLaw& q2,
                               std::span<const double> f) {
    check_compatible(q1, q2);
    std::vector<double> s1 = scalarize(q1, f);
    std::vector<double> s2 = scalarize(q2, f);
    return gradient_from_facet(q1, q2, facet_at(s1, s2));
}

std::vector<double> gradient_Ghat(const GriddedLaw& q1, const GriddedLaw& q2,
                                  const LipschitzProfile& profile) {
    profile.validate();
    std::vector<double> grad = gradient_G(q1, q2, profile.f());
    return transpose_cumulative(profile.grid, grad);
}

namespace {

struct RestartOutcome {
    double value = 0.0;
    std::vector<double> g;
    std::vector<AscentTraceRow> trace;
};

RestartOutcome run_restart(const GriddedLaw& q1, const GriddedLaw& q2,
                           const AscentConfig& config, std::size_t restart_index) {
    const Grid& grid = q1.grid;
    const std::size_t dim = grid.points - 1;

    std::vector<double> g(dim);
    if (restart_index == 0 && config.include_identity_init) {
        std::fill(g.begin(), g.end(), 1.0);
    } else {
        Rng rng = Rng(config.seed).substream(restart_index);
        for (double& v : g) v = rng.uniform(-1.0, 1.0);
    }

    std::vector<double> f = cumulative_f(grid, g);
    std::vector<double> s1 = scalarize(q1, f);
    std::vector<double> s2 = scalarize(q2, f);
    Facet facet = facet_at(s1, s2);

    RestartOutcome out;
    out.value = facet.value;
    if (config.record_trace)
        out.trace.push_back({restart_index, 0, facet.value, 0.0});

    for (std::size_t step = 0; step < config.n_step; ++step) {
        if (!std::isfinite(facet.value))
            throw NumericalError("non-finite objective in ascent restart " +
                                 std::to_string(restart_index) + " at step " +
                                 std::to_string(step));

        std::vector<double> grad = gradient_from_facet(q1, q2, facet);
        std::vector<double> ghat = transpose_cumulative(grid, grad);

        // Drop components that would push g outside the box.
        std::vector<double> dir = ghat;
        for (std::size_t q = 0; q < dim; ++q) {
            if (g[q] >= 1.0 && dir[q] > 0.0) dir[q] = 0.0;
            if (g[q] <= -1.0 && dir[q] < 0.0) dir[q] = 0.0;
        }

        double expected = 0.0;
        for (std::size_t q = 0; q < dim; ++q) {
            expected += config.line_search == LineSearchRule::projected ? dir[q] * dir[q]
                                                                        : dir[q] * ghat[q];
        }
        if (expected <= config.epsilon) break;

        double t_max = std::numeric_limits<double>::infinity();
        for (std::size_t q = 0; q < dim; ++q) {
            if (dir[q] > 0.0) t_max = std::min(t_max, (1.0 - g[q]) / dir[q]);
            else if (dir[q] < 0.0) t_max = std::min(t_max, (-1.0 - g[q]) / dir[q]);
        }
        if (!(t_max > 0.0)) break;  // direction fully blocked

        // Objective along the ray is G(f + t * A dir): precompute the
        // scalarized direction so each trial is a sort, not an O(nM) product.
        std::vector<double> f_dir = cumulative_f(grid, dir);
        std::vector<double> s1_dir = scalarize(q1, f_dir);
        std::vector<double> s2_dir = scalarize(q2, f_dir);

        const double base_value = facet.value;
        double t = t_max;
        Facet trial;
        bool accepted = false;
        std::vector<double> t1(s1.size()), t2(s2.size());
        while (t >= 1e-14 * t_max) {
            for (std::size_t i = 0; i < s1.size(); ++i) {
                t1[i] = s1[i] + t * s1_dir[i];
                t2[i] = s2[i] + t * s2_dir[i];
            }
            trial = facet_at(t1, t2);
            if (trial.value >= base_value + 0.5 * t * expected) {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) break;  // flat facet, line search exhausted

        for (std::size_t q = 0; q < dim; ++q)
            g[q] = std::clamp(g[q] + t * dir[q], -1.0, 1.0);
        f = cumulative_f(grid, g);
        s1 = scalarize(q1, f);
        s2 = scalarize(q2, f);
        facet = facet_at(s1, s2);
        // Re-evaluating at the clamped point can only wiggle by rounding;
        // keep the monotone record.
        out.value = std::max(out.value, facet.value);
        if (config.record_trace)
            out.trace.push_back({restart_index, step + 1, facet.value, t});
    }

    out.value = std::max(out.value, facet.value);
    out.g = std::move(g);
    return out;
}

}  // namespace

AscentResult projected_gradient_ascent(const GriddedLaw& q1, const GriddedLaw& q2,
                                       const AscentConfig& config) {
    check_compatible(q1, q2);
    if (config.n_init < 1 || config.n_step < 1)
        throw std::invalid_argument("ascent needs n_init >= 1 and n_step >= 1");
    if (!(config.epsilon >= 0.0)) throw std::invalid_argument("epsilon must be >= 0");

    std::vector<RestartOutcome> outcomes(config.n_init);
    std::exception_ptr failure;
    std::mutex failure_mutex;
    parallel_for(config.n_init, [&](std::size_t r) {
        try {
            outcomes[r] = run_restart(q1, q2, config, r);
        } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    });
    if (failure) std::rethrow_exception(failure);

    std::size_t best = 0;
    for (std::size_t r = 1; r < config.n_init; ++r) {
        if (outcomes[r].value > outcomes[best].value) best = r;
    }

    AscentResult result;
    result.best_value = outcomes[best].value;
    result.best_profile = LipschitzProfile{q1.grid, std::move(outcomes[best].g)};
    if (config.record_trace) {
        for (auto& o : outcomes)
            result.trace.insert(result.trace.end(), o.trace.begin(), o.trace.end());
    }
    return result;
}

double hipm_lip_distance(const EmpiricalLaw& q1, const EmpiricalLaw& q2, const Grid& grid,
                         const AscentConfig& config) {
    GriddedLaw g1 = project_law_to_grid(q1, grid);
    GriddedLaw g2 = project_law_to_grid(q2, grid);
    return projected_gradient_ascent(g1, g2, config).best_value;
}

double mean_lower_bound(const EmpiricalLaw& q1, const EmpiricalLaw& q2) {
    if (q1.size() != q2.size())
        throw ShapeError("laws have different member counts");
    std::vector<double> means1(q1.size()), means2(q2.size());
    for (std::size_t i = 0; i < q1.size(); ++i) means1[i] = q1.members[i].mean();
    for (std::size_t i = 0; i < q2.size(); ++i) means2[i] = q2.members[i].mean();
    return ot_uniform_1d_sorted(means1, means2).value;
}

}  // namespace hipmlab
