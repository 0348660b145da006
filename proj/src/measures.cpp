#include "hipmlab/measures.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace hipmlab {

double DiscreteMeasure::mean() const {
    double m = 0.0;
    for (std::size_t j = 0; j < atoms.size(); ++j) m += weights[j] * atoms[j];
    return m;
}

void DiscreteMeasure::validate(const Interval& domain) const {
    if (atoms.empty()) throw std::invalid_argument("measure has no atoms");
    if (atoms.size() != weights.size())
        throw std::invalid_argument("atom/weight length mismatch");
    double sum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw std::invalid_argument("negative or NaN weight");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("weights sum to " + std::to_string(sum) + ", not 1");
    for (double x : atoms) {
        if (!std::isfinite(x) || !domain.contains(x))
            throw std::invalid_argument("atom outside domain");
    }
}

void DiscreteMeasure::renormalize() {
    double sum = 0.0;
    for (double w : weights) sum += w;
    if (std::abs(sum - 1.0) > 1e-15 && sum > 0.0) {
        for (double& w : weights) w /= sum;
    }
}

void EmpiricalLaw::validate() const {
    if (members.empty()) throw std::invalid_argument("law has no members");
    if (!(domain.a < domain.b)) throw std::invalid_argument("empty domain interval");
    for (const auto& p : members) p.validate(domain);
}

Grid::Grid(double a_, double b_, std::size_t points_) : a(a_), b(b_), points(points_) {
    if (!(a < b)) throw std::invalid_argument("grid requires a < b");
    if (points < 2) throw std::invalid_argument("grid requires at least 2 points");
}

void GriddedLaw::validate() const {
    if (members == 0) throw std::invalid_argument("gridded law has no members");
    if (weights.size() != members * grid.points)
        throw std::invalid_argument("weight array size mismatch");
    for (std::size_t i = 0; i < members; ++i) {
        double sum = 0.0;
        for (std::size_t q = 0; q < grid.points; ++q) {
            double w = at(i, q);
            if (!(w >= 0.0)) throw std::invalid_argument("negative or NaN grid weight");
            sum += w;
        }
        if (std::abs(sum - 1.0) > 1e-12)
            throw std::invalid_argument("grid row " + std::to_string(i) + " sums to " +
                                        std::to_string(sum));
    }
}

double sample_base(const BaseMeasure& base, Rng& rng) {
    struct Visitor {
        Rng& rng;
        double operator()(const UniformBase& u) { return rng.uniform(u.lo, u.hi); }
        double operator()(const TwoUniformBase& m) {
            const UniformBase& u = rng.uniform() < m.first_weight ? m.first : m.second;
            return rng.uniform(u.lo, u.hi);
        }
        double operator()(const EmpiricalBase& e) {
            double u = rng.uniform();
            double acc = 0.0;
            const auto& p = e.measure;
            for (std::size_t j = 0; j < p.size(); ++j) {
                acc += p.weights[j];
                if (u < acc) return p.atoms[j];
            }
            return p.atoms.back();
        }
    };
    return std::visit(Visitor{rng}, base);
}

Interval base_support(const BaseMeasure& base) {
    struct Visitor {
        Interval operator()(const UniformBase& u) { return {u.lo, u.hi}; }
        Interval operator()(const TwoUniformBase& m) {
            return {std::min(m.first.lo, m.second.lo), std::max(m.first.hi, m.second.hi)};
        }
        Interval operator()(const EmpiricalBase& e) {
            double lo = e.measure.atoms.front(), hi = lo;
            for (double x : e.measure.atoms) {
                lo = std::min(lo, x);
                hi = std::max(hi, x);
            }
            return {lo, hi};
        }
    };
    return std::visit(Visitor{}, base);
}

namespace {

void check_sampler_params(double alpha, std::size_t n) {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw std::invalid_argument("alpha must be positive and finite");
    if (n < 1) throw std::invalid_argument("count must be at least 1");
}

// Beta(1, alpha) by inverse CDF.
double sample_beta_1_alpha(double alpha, Rng& rng) {
    double u = rng.uniform();
    return 1.0 - std::pow(1.0 - u, 1.0 / alpha);
}

double sample_standard_normal(Rng& rng) {
    // Box-Muller; consumes exactly two uniforms per call.
    double u1 = rng.uniform_pos();
    double u2 = rng.uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

// Marsaglia-Tsang for shape >= 1, boosted from shape+1 below 1.
double sample_gamma(double shape, Rng& rng) {
    if (shape < 1.0) {
        double u = rng.uniform_pos();
        return sample_gamma(shape + 1.0, rng) * std::pow(u, 1.0 / shape);
    }
    double d = shape - 1.0 / 3.0;
    double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = sample_standard_normal(rng);
        double v = 1.0 + c * x;
        if (v <= 0.0) continue;
        v = v * v * v;
        double u = rng.uniform_pos();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

}  // namespace

StickBreakingWeights sample_stick_breaking_weights(double alpha, std::size_t n, Rng& rng) {
    check_sampler_params(alpha, n);
    StickBreakingWeights out;
    out.weights.resize(n);
    double remaining = 1.0;  // prod_{j<i} (1 - V_j)
    for (std::size_t i = 0; i < n; ++i) {
        double v = sample_beta_1_alpha(alpha, rng);
        out.weights[i] = v * remaining;
        remaining *= 1.0 - v;
    }
    out.residual = remaining;
    return out;
}

DiscreteMeasure sample_truncated_stick_breaking(const DPParams& params, std::size_t n, Rng& rng) {
    check_sampler_params(params.alpha, n);
    DiscreteMeasure p;
    p.atoms.resize(n);
    for (std::size_t i = 0; i < n; ++i) p.atoms[i] = sample_base(params.base, rng);
    if (n == 1) {
        p.weights = {1.0};
        return p;
    }
    auto sticks = sample_stick_breaking_weights(params.alpha, n - 1, rng);
    p.weights = std::move(sticks.weights);
    p.weights.push_back(sticks.residual);
    p.renormalize();
    return p;
}

DiscreteMeasure sample_dirichlet_multinomial(const DPParams& params, std::size_t n, Rng& rng) {
    check_sampler_params(params.alpha, n);
    DiscreteMeasure p;
    p.atoms.resize(n);
    for (std::size_t i = 0; i < n; ++i) p.atoms[i] = sample_base(params.base, rng);
    double shape = params.alpha / static_cast<double>(n);
    p.weights.resize(n);
    for (;;) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            p.weights[i] = sample_gamma(shape, rng);
            sum += p.weights[i];
        }
        // All-zero gamma draws can happen for tiny shapes; resample instead of
        // dividing by zero.
        if (sum > 0.0 && std::isfinite(sum)) {
            for (double& w : p.weights) w /= sum;
            break;
        }
    }
    p.renormalize();
    return p;
}

std::vector<double> sample_dp_marginals_polya(const DPParams& params, std::size_t m, Rng& rng) {
    check_sampler_params(params.alpha, m);
    std::vector<double> draws;
    draws.reserve(m);
    draws.push_back(sample_base(params.base, rng));
    for (std::size_t k = 1; k < m; ++k) {
        double p_fresh = params.alpha / (params.alpha + static_cast<double>(k));
        if (rng.uniform() < p_fresh) {
            draws.push_back(sample_base(params.base, rng));
        } else {
            draws.push_back(draws[rng.uniform_index(k)]);
        }
    }
    return draws;
}

DiscreteMeasure hierarchical_empirical_measure(const DPParams& params, std::size_t n, Rng& rng) {
    DiscreteMeasure p;
    p.atoms = sample_dp_marginals_polya(params, n, rng);
    p.weights.assign(n, 1.0 / static_cast<double>(n));
    p.renormalize();
    return p;
}

EmpiricalLaw empirical_hierarchical_estimator(const DPParams& params, std::size_t n,
                                              std::size_t m, Rng& rng) {
    check_sampler_params(params.alpha, n);
    if (m < 1) throw std::invalid_argument("count must be at least 1");
    EmpiricalLaw law;
    law.domain = base_support(params.base);
    law.members.resize(n);
    // Member i depends only on (fork seed, i): growing n keeps earlier members.
    Rng base = rng.fork();
    for (std::size_t i = 0; i < n; ++i) {
        Rng member_rng = base.substream(i);
        law.members[i] = hierarchical_empirical_measure(params, m, member_rng);
    }
    return law;
}

std::vector<double> project_to_grid(const DiscreteMeasure& p, const Grid& grid) {
    const double dx = grid.dx();
    std::vector<double> row(grid.points, 0.0);
    for (std::size_t j = 0; j < p.size(); ++j) {
        double x = p.atoms[j];
        if (!(x >= grid.a && x <= grid.b))
            throw std::domain_error("atom " + std::to_string(x) + " outside grid interval");
        double t = (x - grid.a) / dx;
        auto lo = static_cast<std::size_t>(t);
        if (lo >= grid.points - 1) lo = grid.points - 2;
        // Nearest point; exact midpoints go to the lower index.
        std::size_t q = (t - static_cast<double>(lo) > 0.5) ? lo + 1 : lo;
        row[q] += p.weights[j];
    }
    double sum = 0.0;
    for (double w : row) sum += w;
    if (std::abs(sum - 1.0) > 1e-15 && sum > 0.0) {
        for (double& w : row) w /= sum;
    }
    return row;
}

GriddedLaw project_law_to_grid(const EmpiricalLaw& law, const Grid& grid) {
    GriddedLaw out;
    out.grid = grid;
    out.members = law.size();
    out.weights.resize(out.members * grid.points);
    for (std::size_t i = 0; i < out.members; ++i) {
        auto row = project_to_grid(law.members[i], grid);
        std::copy(row.begin(), row.end(), out.weights.begin() + i * grid.points);
    }
    return out;
}

}  // namespace hipmlab
