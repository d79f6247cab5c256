#include "krein/quadrature.hpp"

#include <cmath>

namespace krein {

// Nodes by Newton iteration on P_n with the usual cosine initial guess.
GaussLegendre::GaussLegendre(int n) {
    nodes.resize(n);
    weights.resize(n);
    const double pi = 3.14159265358979323846;
    int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
        weights[n - 1 - i] = weights[i];
    }
}

const GaussLegendre& gauss_legendre_20() {
    static const GaussLegendre gl(20);
    return gl;
}

double integrate_panels(const std::function<double(double)>& f, double a, double b,
                        double max_panel) {
    return integrate_panels_t(f, a, b, max_panel);
}

}  // namespace krein
