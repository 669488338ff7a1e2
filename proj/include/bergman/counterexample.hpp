#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "bergman/measure.hpp"
#include "bergman/multi_index.hpp"
#include "bergman/quadrature.hpp"
#include "bergman/rational.hpp"

namespace bergman {

/// Arc-shrink search could not meet the kernel budget for layer k.
struct BudgetUnreachable : std::runtime_error {
    BudgetUnreachable(int layer, double achieved_value)
        : std::runtime_error("kernel budget unreachable for layer " + std::to_string(layer) +
                             " (achieved " + std::to_string(achieved_value) + ")"),
          k(layer),
          achieved(achieved_value) {}
    int k;
    double achieved;
};

/// One layer of the construction: the ring (inner, outer)^n in radial
/// coordinates, a product of arcs [-pi q, pi q] on the torus, and a product
/// trapezoid bump that is 1 on the inner half of both ring and arcs.
struct CounterexampleLayer {
    Rational inner;
    Rational outer;
    Rational arc_fraction;   // q: per-coordinate arc is [-pi q, pi q], sigma share q
    double kernel_integral;  // achieved quadrature estimate of int_{E_k} K dtheta
};

/// The piecewise continuous function 0 <= f <= 1 on D^n built from K layers
/// with pairwise disjoint ring x arc supports. Continuous on the open
/// polydisc, attains 1 on a set of positive measure in every layer, yet its
/// quasi-homogeneous components all vanish at the boundary.
class CounterexampleSymbol {
public:
    CounterexampleSymbol(ProductMeasure pm, std::vector<CounterexampleLayer> layers)
        : pm_(std::move(pm)), layers_(std::move(layers)) {
        for (std::size_t k = 0; k < layers_.size(); ++k) {
            const auto& l = layers_[k];
            if (!(l.inner > 0 && l.inner < l.outer && l.outer < 1))
                throw std::invalid_argument("CounterexampleSymbol: bad ring radii");
            if (!(l.arc_fraction > 0 && l.arc_fraction < 1))
                throw std::invalid_argument("CounterexampleSymbol: bad arc fraction");
            if (k > 0 && !(layers_[k - 1].outer <= l.inner))
                throw std::invalid_argument("CounterexampleSymbol: rings must be disjoint");
        }
    }

    const ProductMeasure& measure() const { return pm_; }
    std::size_t dim() const { return pm_.dim(); }
    std::size_t layer_count() const { return layers_.size(); }
    const CounterexampleLayer& layer(std::size_t k) const { return layers_[k]; }

    /// sigma(V_k) = q^n, exact.
    Rational sigma(std::size_t k) const {
        Rational s = 1;
        for (std::size_t j = 0; j < dim(); ++j) s *= layers_[k].arc_fraction;
        return s;
    }

    /// 1-D radial trapezoid of layer k: 0 at the ring edges, 1 on the
    /// central half, linear on the outer quarters.
    double radial_bump(std::size_t k, double t) const {
        double a = to_double(layers_[k].inner), b = to_double(layers_[k].outer);
        if (t <= a || t >= b) return 0;
        double quarter = 0.25 * (b - a);
        if (t < a + quarter) return (t - a) / quarter;
        if (t > b - quarter) return (b - t) / quarter;
        return 1;
    }

    /// 1-D angular trapezoid of layer k on [-pi q, pi q] (2pi-periodic):
    /// 1 on the inner half of the arc, linear ramps to 0 at the arc ends.
    double angular_bump(std::size_t k, double theta) const {
        double w = std::numbers::pi * to_double(layers_[k].arc_fraction);
        double t = std::remainder(theta, 2 * std::numbers::pi);
        double a = std::abs(t);
        if (a >= w) return 0;
        if (a <= 0.5 * w) return 1;
        return (w - a) / (0.5 * w);
    }

    /// Index of the ring containing the radial vector (all coordinates in
    /// the same open ring), or -1.
    int ring_of(const std::vector<double>& r) const {
        for (std::size_t k = 0; k < layers_.size(); ++k) {
            bool in = true;
            double a = to_double(layers_[k].inner), b = to_double(layers_[k].outer);
            for (double rj : r) in = in && rj > a && rj < b;
            if (in) return static_cast<int>(k);
        }
        return -1;
    }

    double evaluate(const std::vector<double>& r, const std::vector<double>& theta) const {
        if (r.size() != dim() || theta.size() != dim())
            throw std::invalid_argument("evaluate: dimension mismatch");
        int k = ring_of(r);
        if (k < 0) return 0;
        double v = 1;
        for (std::size_t j = 0; j < dim(); ++j)
            v *= radial_bump(k, r[j]) * angular_bump(k, theta[j]);
        return v;
    }

    double evaluate(const std::vector<std::complex<double>>& z) const {
        std::vector<double> r(dim()), th(dim());
        for (std::size_t j = 0; j < dim(); ++j) {
            r[j] = std::abs(z[j]);
            th[j] = std::arg(z[j]);
        }
        return evaluate(r, th);
    }

private:
    ProductMeasure pm_;
    std::vector<CounterexampleLayer> layers_;
};

/// Quadrature estimate of int over one ring of (1 - t^2)^{-2} 2t dt
/// (the per-coordinate kernel x PowerWeight(1) density factor).
inline double ring_kernel_factor(const CounterexampleLayer& l, const QuadratureRule& rule) {
    GaussLegendre gl(rule.radial_order, to_double(l.inner), to_double(l.outer));
    return gl.integrate([](double t) {
        double d = 1 - t * t;
        return 2 * t / (d * d);
    });
}

/// Exact value of the same integral, (1-b^2)^{-1} - (1-a^2)^{-1}; used as
/// an independent reference for the quadrature route.
inline double ring_kernel_factor_closed_form(const CounterexampleLayer& l) {
    double a = to_double(l.inner), b = to_double(l.outer);
    return 1 / (1 - b * b) - 1 / (1 - a * a);
}

/// Builds the K-layer construction for PowerWeight(1) factors with radii
/// r_j = 1 - 2^{-j}. Every consecutive ring already has positive measure,
/// so no subsequence of radii needs to be selected. Arc widths are halved
/// until both
/// sigma(V_k) < 1/k and the quadrature kernel integral over E_k is below
/// budget_scale / k^2.
inline CounterexampleSymbol build_counterexample(const ProductMeasure& pm, int K,
                                                 double budget_scale = 1.0,
                                                 const QuadratureRule& rule = {},
                                                 int max_halvings = 60) {
    std::size_t n = pm.dim();
    if (n < 2) throw std::invalid_argument("build_counterexample: need n >= 2");
    if (K < 2) throw std::invalid_argument("build_counterexample: need K >= 2");
    for (std::size_t j = 0; j < n; ++j)
        if (!pm.factor(j).is_power_weight() || pm.factor(j).beta() != 1)
            throw std::invalid_argument("build_counterexample: needs PowerWeight(1) factors");

    std::vector<CounterexampleLayer> layers;
    Rational pow2 = Rational(1, 2);
    for (int k = 1; k <= K; ++k) {
        CounterexampleLayer l;
        l.inner = 1 - pow2;           // 1 - 2^{-k}
        l.outer = 1 - pow2 / 2;       // 1 - 2^{-(k+1)}
        l.arc_fraction = Rational(1, 2);
        double radial = ring_kernel_factor(l, rule);
        double radial_prod = std::pow(radial, static_cast<double>(n));
        double budget = budget_scale / (static_cast<double>(k) * k);
        Rational sigma_cap = Rational(1, k);
        int it = 0;
        for (;; ++it) {
            Rational sigma = 1;
            for (std::size_t j = 0; j < n; ++j) sigma *= l.arc_fraction;
            l.kernel_integral = to_double(sigma) * radial_prod;
            if (sigma < sigma_cap && l.kernel_integral < budget) break;
            if (it >= max_halvings) throw BudgetUnreachable(k, l.kernel_integral);
            l.arc_fraction /= 2;
        }
        layers.push_back(l);
        pow2 /= 2;
    }
    return CounterexampleSymbol(pm, std::move(layers));
}

/// Quadrature estimate of sum_k int_{E_k} |f|^2 K_z(z) dtheta, the
/// Hilbert-Schmidt majorant. Factorizes per layer into radial and angular
/// 1-D integrals since the bump is a coordinate product.
struct HsSumResult {
    double estimate = 0;
    double bound = 0;  // sum_{k<=K} budget 1/k^2 plus the declared tolerance
    bool pass = false;
};

inline double layer_hs_integral(const CounterexampleSymbol& ce, std::size_t k,
                                const QuadratureRule& rule) {
    const auto& l = ce.layer(k);
    GaussLegendre gl(rule.radial_order, to_double(l.inner), to_double(l.outer));
    double radial = gl.integrate([&](double t) {
        double b = ce.radial_bump(k, t);
        double d = 1 - t * t;
        return b * b * 2 * t / (d * d);
    });
    double angular =
        circle_average(rule.angular_size, [&](double th) {
            double b = ce.angular_bump(k, th);
            return b * b;
        });
    double v = 1;
    for (std::size_t j = 0; j < ce.dim(); ++j) v *= radial * angular;
    return v;
}

inline HsSumResult hs_sum_check(const CounterexampleSymbol& ce, const QuadratureRule& rule,
                                double tol = 1e-2) {
    HsSumResult res;
    for (std::size_t k = 0; k < ce.layer_count(); ++k) {
        res.estimate += layer_hs_integral(ce, k, rule);
        res.bound += 1.0 / ((k + 1.0) * (k + 1.0));
    }
    res.bound += tol;
    res.pass = res.estimate <= res.bound;
    return res;
}

/// sum over the truncated box {0..N}^n of ||f e_m||^2, by the same
/// quadrature: per coordinate int rho^2(t) S_N(t) 2t dt with the truncated
/// kernel S_N(t) = sum_{m<=N} (m+1) t^{2m}, times the angular share.
inline double hs_box_sum(const CounterexampleSymbol& ce, const QuadratureRule& rule, int N) {
    double total = 0;
    for (std::size_t k = 0; k < ce.layer_count(); ++k) {
        const auto& l = ce.layer(k);
        GaussLegendre gl(rule.radial_order, to_double(l.inner), to_double(l.outer));
        double radial = gl.integrate([&](double t) {
            double b = ce.radial_bump(k, t);
            double s = 0, tp = 1, t2 = t * t;
            for (int m = 0; m <= N; ++m) {
                s += (m + 1) * tp;
                tp *= t2;
            }
            return b * b * s * 2 * t;
        });
        double angular = circle_average(rule.angular_size, [&](double th) {
            double b = ce.angular_bump(k, th);
            return b * b;
        });
        double v = 1;
        for (std::size_t j = 0; j < ce.dim(); ++j) v *= radial * angular;
        total += v;
    }
    return total;
}

/// Q_s(f) at the point with radial vector r and angles 0, by angular
/// quadrature of the toral integral. At most one layer contributes.
inline std::complex<double> q_component(const CounterexampleSymbol& ce, const MultiIndex& s,
                                        const std::vector<double>& r,
                                        const QuadratureRule& rule) {
    if (s.dim() != ce.dim() || r.size() != ce.dim())
        throw std::invalid_argument("q_component: dimension mismatch");
    int k = ce.ring_of(r);
    if (k < 0) return 0;
    std::complex<double> v = 1;
    for (std::size_t j = 0; j < ce.dim(); ++j) {
        double rb = ce.radial_bump(k, r[j]);
        std::complex<double> acc = 0;
        double h = 2 * std::numbers::pi / static_cast<double>(rule.angular_size);
        for (std::size_t i = 0; i < rule.angular_size; ++i) {
            double phi = i * h;
            acc += ce.angular_bump(k, phi) *
                   std::exp(std::complex<double>(0, -s[j] * phi));
        }
        acc /= static_cast<double>(rule.angular_size);
        v *= rb * acc;
    }
    return v;
}

struct QProfileRow {
    std::vector<double> r;
    int ring = -1;
    double q0 = 0;
    double qs = 0;  // |Q_s|
};

/// Decay table of |Q_s(f)| and Q_0(f) over a radial grid, with the
/// pointwise bound |Q_s| <= Q_0 recorded per row.
inline std::vector<QProfileRow> q_profile(const CounterexampleSymbol& ce, const MultiIndex& s,
                                          const std::vector<std::vector<double>>& grid,
                                          const QuadratureRule& rule) {
    MultiIndex zero(ce.dim(), 0);
    std::vector<QProfileRow> rows;
    for (const auto& r : grid) {
        QProfileRow row;
        row.r = r;
        row.ring = ce.ring_of(r);
        row.q0 = q_component(ce, zero, r, rule).real();
        row.qs = std::abs(q_component(ce, s, r, rule));
        rows.push_back(std::move(row));
    }
    return rows;
}

/// The two checked facts behind the no-decomposition argument: every layer
/// holds an explicit plateau cell of exact positive measure where f = 1
/// (so f does not vanish at the boundary), while the quasi-components decay
/// to 0 at the boundary (grid evidence).
struct NoDecompositionReport {
    std::vector<Rational> plateau_measures;  // one exact value per layer
    std::vector<double> q0_max_beyond_ring;  // max Q_0 past ring k0, per k0 = 1..K
    bool q_dominated = true;                 // |Q_s| <= Q_0 held at all grid points tested
};

inline NoDecompositionReport no_decomposition_witness(const CounterexampleSymbol& ce,
                                                      const QuadratureRule& rule) {
    NoDecompositionReport rep;
    std::size_t n = ce.dim();
    std::size_t K = ce.layer_count();

    // Plateau cell of layer k: radially the central half of the ring in each
    // coordinate, angularly the inner half of each arc. theta-measure is the
    // product of PowerWeight(1) interval masses and angular fractions.
    for (std::size_t k = 0; k < K; ++k) {
        const auto& l = ce.layer(k);
        Rational len = l.outer - l.inner;
        Rational a = l.inner + len / 4, b = l.outer - len / 4;
        Rational cell = 1;
        for (std::size_t j = 0; j < n; ++j)
            cell *= (b * b - a * a) * (l.arc_fraction / 2);
        rep.plateau_measures.push_back(cell);
    }

    // Diagonal radial grid: midpoints plus quarter points of every ring.
    std::vector<std::vector<double>> grid;
    for (std::size_t k = 0; k < K; ++k) {
        const auto& l = ce.layer(k);
        double a = to_double(l.inner), b = to_double(l.outer);
        for (double frac : {0.25, 0.5, 0.75})
            grid.push_back(std::vector<double>(n, a + frac * (b - a)));
    }

    MultiIndex zero(n, 0);
    std::vector<double> q0(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        q0[i] = q_component(ce, zero, grid[i], rule).real();

    for (std::size_t k0 = 1; k0 <= K; ++k0) {
        double inner_k0 = to_double(ce.layer(k0 - 1).inner);
        double mx = 0;
        for (std::size_t i = 0; i < grid.size(); ++i)
            if (grid[i][0] > inner_k0) mx = std::max(mx, q0[i]);
        rep.q0_max_beyond_ring.push_back(mx);
    }

    // |Q_s| <= Q_0 for all |s_j| <= 2.
    std::vector<MultiIndex> degrees;
    MultiIndex s(n, -2);
    for (;;) {
        degrees.push_back(s);
        std::size_t j = 0;
        while (j < n && s[j] == 2) s[j++] = -2;
        if (j == n) break;
        ++s[j];
    }
    for (const auto& deg : degrees)
        for (std::size_t i = 0; i < grid.size(); ++i) {
            double qs = std::abs(q_component(ce, deg, grid[i], rule));
            if (qs > q0[i] + 1e-9) rep.q_dominated = false;
        }
    return rep;
}

}  // namespace bergman
