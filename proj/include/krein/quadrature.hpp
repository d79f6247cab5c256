#ifndef KREIN_QUADRATURE_HPP
#define KREIN_QUADRATURE_HPP

#include <functional>
#include <vector>

namespace krein {

// Gauss-Legendre rule on [-1, 1].
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
    explicit GaussLegendre(int n);
};

const GaussLegendre& gauss_legendre_20();

// Integrate f over [a, b] with fixed-order panels of width <= max_panel.
double integrate_panels(const std::function<double(double)>& f, double a, double b,
                        double max_panel);

// Same, but the integrand can evaluate at prescribed real nodes to complex values.
// Used for contour integrands with complex parameters.
template <typename F>
auto integrate_panels_t(F&& f, double a, double b, double max_panel)
    -> decltype(f(0.0)) {
    using R = decltype(f(0.0));
    if (!(b > a)) return R{};
    const GaussLegendre& gl = gauss_legendre_20();
    int n_panels = static_cast<int>((b - a) / max_panel) + 1;
    double h = (b - a) / n_panels;
    R total{};
    for (int p = 0; p < n_panels; ++p) {
        double lo = a + p * h;
        double mid = lo + 0.5 * h;
        double half = 0.5 * h;
        R acc{};
        for (std::size_t i = 0; i < gl.nodes.size(); ++i)
            acc += gl.weights[i] * f(mid + half * gl.nodes[i]);
        total += half * acc;
    }
    return total;
}

}  // namespace krein

#endif
