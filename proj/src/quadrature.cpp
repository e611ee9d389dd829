#include "psq/quadrature.hpp"

#include <cmath>
#include <vector>

namespace psq {

namespace {

// Abscissa/weight pair for the tanh-sinh map x = 1/2 (1 + tanh((pi/2) sinh t)).
// The point is returned as a distance from the *nearer* endpoint so callers
// can resolve integrable endpoint behaviour without catastrophic rounding.
struct TsNode {
    double x_from_0; // distance from 0 (exact for the left half)
    double x_from_1; // distance from 1 (exact for the right half)
    double weight;   // dx/dt
};

TsNode ts_node(double t) {
    const double s = 1.5707963267948966 * std::sinh(t);
    // x = 1/(1+e^{-2s}) and 1-x = 1/(1+e^{2s}); both forms are cancellation-free.
    const double em = std::exp(-2.0 * std::abs(s));
    const double near_side = em / (1.0 + em); // distance from the closer endpoint
    const double far_side = 1.0 / (1.0 + em);
    // dx/dt = (pi/2) cosh t / (2 cosh^2 s), written as a stable product.
    const double w = 1.5707963267948966 * std::cosh(t) * 2.0 * near_side * far_side;
    TsNode node;
    if (s >= 0.0) {
        node.x_from_1 = near_side;
        node.x_from_0 = far_side;
    } else {
        node.x_from_0 = near_side;
        node.x_from_1 = far_side;
    }
    node.weight = w;
    return node;
}

} // namespace

double tanh_sinh_01(const std::function<double(double)>& f, double rel_tol, double abs_floor,
                    bool* converged) {
    // Level-doubling tanh-sinh rule. Level 0 uses step h0; each refinement
    // halves the step and only evaluates the new (odd) nodes.
    const double t_max = 6.5; // tanh(pi/2 sinh 6.5) is 1 to beyond double precision
    const double h0 = 0.5;
    if (converged) *converged = false;

    auto eval = [&](double t) {
        const TsNode node = ts_node(t);
        const double x = node.x_from_0;
        if (!(x > 0.0) || !(x < 1.0)) return 0.0;
        const double v = f(x);
        return std::isfinite(v) ? v * node.weight : 0.0;
    };

    double h = h0;
    double sum = eval(0.0);
    for (int k = 1; k * h <= t_max; ++k) sum += eval(k * h) + eval(-k * h);
    double integral = sum * h;

    const int max_level = 10;
    for (int level = 1; level <= max_level; ++level) {
        h *= 0.5;
        double add = 0.0;
        for (int k = 1; k * h <= t_max; k += 2) add += eval(k * h) + eval(-k * h);
        sum += add;
        const double next = sum * h;
        const double diff = std::abs(next - integral);
        integral = next;
        if (level >= 3 && diff <= std::max(rel_tol * std::abs(integral), abs_floor)) {
            if (converged) *converged = true;
            return integral;
        }
    }
    return integral;
}

} // namespace psq
