#include "hipmlab/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

namespace hipmlab {

namespace {

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

void check_params(double alpha, std::size_t n_atoms) {
    if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
    if (n_atoms < 1) throw std::invalid_argument("atom count must be at least 1");
}

// Composite midpoint of integrand over the hull of both domains.
double quad_midpoint(const Interval& domain, std::size_t points,
                     const std::function<double(double)>& integrand) {
    if (points < 2) throw std::invalid_argument("quadrature needs at least 2 points");
    const double h = domain.length() / static_cast<double>(points);
    double sum = 0.0;
    for (std::size_t k = 0; k < points; ++k) {
        double x = domain.a + (static_cast<double>(k) + 0.5) * h;
        sum += integrand(x);
    }
    return sum * h;
}

Interval hull(const Interval& d1, const Interval& d2) {
    return {std::min(d1.a, d2.a), std::max(d1.b, d2.b)};
}

}  // namespace

Cdf cdf_uniform(double lo, double hi) {
    if (!(lo < hi)) throw std::invalid_argument("uniform needs lo < hi");
    return {{lo, hi}, [lo, hi](double x) { return clamp01((x - lo) / (hi - lo)); }};
}

Cdf cdf_two_uniform(const TwoUniformBase& mix) {
    Cdf c1 = cdf_uniform(mix.first.lo, mix.first.hi);
    Cdf c2 = cdf_uniform(mix.second.lo, mix.second.hi);
    double w = mix.first_weight;
    if (!(w >= 0.0 && w <= 1.0)) throw std::invalid_argument("mixture weight outside [0,1]");
    Interval dom = hull(c1.domain, c2.domain);
    return {dom, [c1, c2, w](double x) { return w * c1(x) + (1.0 - w) * c2(x); }};
}

Cdf cdf_empirical(const DiscreteMeasure& p, const Interval& domain) {
    p.validate(domain);
    struct Table {
        std::vector<double> atoms;
        std::vector<double> cumulative;
    };
    auto table = std::make_shared<Table>();
    std::vector<std::pair<double, double>> sorted;
    sorted.reserve(p.size());
    for (std::size_t j = 0; j < p.size(); ++j) sorted.emplace_back(p.atoms[j], p.weights[j]);
    std::sort(sorted.begin(), sorted.end());
    double acc = 0.0;
    for (const auto& [a, w] : sorted) {
        acc += w;
        table->atoms.push_back(a);
        table->cumulative.push_back(acc);
    }
    return {domain, [table](double x) {
                auto it = std::upper_bound(table->atoms.begin(), table->atoms.end(), x);
                if (it == table->atoms.begin()) return 0.0;
                return clamp01(table->cumulative[static_cast<std::size_t>(
                    it - table->atoms.begin() - 1)]);
            }};
}

Cdf cdf_dirac(double x, const Interval& domain) {
    return {domain, [x](double t) { return t >= x ? 1.0 : 0.0; }};
}

Cdf cdf_of_base(const BaseMeasure& base) {
    struct Visitor {
        Cdf operator()(const UniformBase& u) { return cdf_uniform(u.lo, u.hi); }
        Cdf operator()(const TwoUniformBase& m) { return cdf_two_uniform(m); }
        Cdf operator()(const EmpiricalBase& e) {
            return cdf_empirical(e.measure, base_support(BaseMeasure{e}));
        }
    };
    return std::visit(Visitor{}, base);
}

double wasserstein1_from_cdfs(const Cdf& f1, const Cdf& f2, std::size_t quadrature_points) {
    Interval dom = hull(f1.domain, f2.domain);
    return quad_midpoint(dom, quadrature_points,
                         [&](double x) { return std::abs(f1(x) - f2(x)); });
}

double species_sampling_wow(const Cdf& f1, const Cdf& f2, std::size_t quadrature_points) {
    return wasserstein1_from_cdfs(f1, f2, quadrature_points);
}

double dirmult_upper_bound(std::size_t n_atoms, const Cdf& f0, std::size_t quadrature_points) {
    check_params(1.0, n_atoms);
    double integral = quad_midpoint(f0.domain, quadrature_points, [&](double x) {
        double f = f0(x);
        return std::sqrt(f * (1.0 - f));
    });
    return integral / std::sqrt(static_cast<double>(n_atoms));
}

double stickbreaking_upper_bound(double alpha, std::size_t n_atoms, const Cdf& f0,
                                 std::size_t quadrature_points) {
    check_params(alpha, n_atoms);
    double integral = quad_midpoint(f0.domain, quadrature_points, [&](double x) {
        double f = f0(x);
        return f * (1.0 - f);
    });
    return 2.0 * std::pow(alpha / (alpha + 1.0), static_cast<double>(n_atoms)) * integral;
}

double hier_empirical_upper_bound(double alpha, std::size_t n_atoms, const Cdf& f0,
                                  std::size_t quadrature_points) {
    check_params(alpha, n_atoms);
    double integral = quad_midpoint(f0.domain, quadrature_points, [&](double x) {
        double f = f0(x);
        return std::sqrt(f * (1.0 - f));
    });
    return std::sqrt(alpha / (static_cast<double>(n_atoms) * (alpha + 1.0))) * integral;
}

}  // namespace hipmlab
