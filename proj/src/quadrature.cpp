#include "debtcrit/quadrature.hpp"

#include <boost/math/differentiation/finite_difference.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <algorithm>
#include <cmath>
#include <queue>
#include <string>
#include <vector>

#include "debtcrit/errors.hpp"

namespace debtcrit {

namespace {

constexpr const char* kModule = "asymptotics";

std::vector<double> panel_edges(double a, double b, double ratio) {
    std::vector<double> edges{a};
    if (a > 0.0 && b / a > ratio) {
        const auto panels = static_cast<int>(std::ceil(std::log(b / a) / std::log(ratio)));
        const double step = std::log(b / a) / panels;
        for (int i = 1; i < panels; ++i) {
            edges.push_back(a * std::exp(step * i));
        }
    }
    edges.push_back(b);
    return edges;
}

struct Panel {
    double a = 0.0;
    double b = 0.0;
    double value = 0.0;
    double error = 0.0;
    unsigned depth = 0;

    bool operator<(const Panel& other) const { return error < other.error; }
};

Panel evaluate_panel(const Integrand& f, double a, double b, unsigned depth) {
    using boost::math::quadrature::gauss_kronrod;
    Panel p{a, b, 0.0, 0.0, depth};
    double unscaled_error = 0.0;
    // max_depth 0: a single 15-point rule, error reported on the [-1, 1] scale.
    p.value = gauss_kronrod<double, 15>::integrate(f, a, b, 0, 0.0, &unscaled_error);
    p.error = unscaled_error * 0.5 * (b - a);
    return p;
}

}  // namespace

double integrate(const Integrand& f, double a, double b, const QuadratureOptions& opts) {
    if (!std::isfinite(a) || !std::isfinite(b)) {
        throw Error(ErrorKind::InvalidArgument, kModule, "integration limits must be finite");
    }
    if (a == b) {
        return 0.0;
    }
    if (b < a) {
        return -integrate(f, b, a, opts);
    }

    // Global adaptive scheme: always bisect the panel with the largest error.
    std::priority_queue<Panel> queue;
    double total = 0.0;
    double error = 0.0;
    const auto edges = panel_edges(a, b, opts.panel_ratio);
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const auto p = evaluate_panel(f, edges[i], edges[i + 1], 0);
        total += p.value;
        error += p.error;
        queue.push(p);
    }

    while (error > std::max(opts.abs_tol, opts.rel_tol * std::abs(total))) {
        const Panel worst = queue.top();
        if (worst.depth >= opts.max_depth) {
            throw Error(ErrorKind::QuadratureFailure, kModule,
                        "adaptive refinement hit the depth limit; error estimate " + std::to_string(error));
        }
        queue.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        const auto left = evaluate_panel(f, worst.a, mid, worst.depth + 1);
        const auto right = evaluate_panel(f, mid, worst.b, worst.depth + 1);
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);
    }
    if (!std::isfinite(total)) {
        throw Error(ErrorKind::QuadratureFailure, kModule, "integrand produced a non-finite value");
    }
    return total;
}

double euler_maclaurin_integral(const Integrand& f, double a, double b, int order, const QuadratureOptions& opts) {
    if (order < 0 || order > 2) {
        throw Error(ErrorKind::InvalidArgument, kModule, "Euler-Maclaurin order must be 0, 1 or 2");
    }
    double value = integrate(f, a, b, opts);
    if (order >= 1) {
        value += 0.5 * (f(a) + f(b));
    }
    if (order >= 2) {
        using boost::math::differentiation::finite_difference_derivative;
        value += (finite_difference_derivative(f, b) - finite_difference_derivative(f, a)) / 12.0;
    }
    return value;
}

}  // namespace debtcrit
