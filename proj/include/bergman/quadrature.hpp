#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace bergman {

/// Gauss-Legendre rule on [a, b]; exact for polynomials of degree < 2*order.
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;

    GaussLegendre(std::size_t order, double a, double b) {
        if (order == 0 || b <= a) throw std::invalid_argument("GaussLegendre: bad rule");
        nodes.resize(order);
        weights.resize(order);
        // Newton on P_n, starting from the Chebyshev-like estimate.
        for (std::size_t i = 0; i < order; ++i) {
            double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
            double pp = 0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1, p1 = x;
                for (std::size_t k = 2; k <= order; ++k) {
                    double p2 = ((2.0 * k - 1) * x * p1 - (k - 1) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                pp = order * (x * p1 - p0) / (x * x - 1);
                double dx = p1 / pp;
                x -= dx;
                if (std::abs(dx) < 1e-15) break;
            }
            nodes[i] = 0.5 * (b - a) * x + 0.5 * (a + b);
            weights[i] = (b - a) / ((1 - x * x) * pp * pp);
        }
    }

    double integrate(const std::function<double(double)>& f) const {
        double s = 0;
        for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
        return s;
    }
};

/// Normalized trapezoid rule on the circle: (1/2pi) int_0^{2pi} f, computed
/// on a uniform grid. Exact for trigonometric polynomials of degree < size.
inline double circle_average(std::size_t size, const std::function<double(double)>& f) {
    if (size == 0) throw std::invalid_argument("circle_average: empty grid");
    double s = 0;
    double h = 2 * std::numbers::pi / static_cast<double>(size);
    for (std::size_t i = 0; i < size; ++i) s += f(i * h);
    return s / static_cast<double>(size);
}

/// Declared-precision tensor rule: per-coordinate radial Gauss order and
/// angular grid size. Reported numbers always carry the rule used.
struct QuadratureRule {
    std::size_t radial_order = 32;
    std::size_t angular_size = 4096;
};

}  // namespace bergman
