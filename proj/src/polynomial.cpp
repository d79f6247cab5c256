#include "krein/polynomial.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "krein/errors.hpp"

namespace krein {

Poly poly_mul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly c(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

Poly poly_add(const Poly& a, const Poly& b) {
    Poly c(std::max(a.size(), b.size()), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) c[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) c[i] += b[i];
    return c;
}

Poly poly_scale(const Poly& a, double s) {
    Poly c = a;
    for (double& v : c) v *= s;
    return c;
}

Poly poly_stretch(const Poly& a, double s) {
    Poly c = a;
    double f = 1.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        c[i] *= f;
        f *= s;
    }
    return c;
}

int poly_degree(const Poly& a, double drop_tol) {
    double scale = 0.0;
    for (double v : a) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) return -1;
    for (std::size_t i = a.size(); i-- > 0;)
        if (std::abs(a[i]) > drop_tol * scale) return static_cast<int>(i);
    return -1;
}

namespace {

// Parlett-Reinsch balancing: diagonal similarity with powers of two so the
// row/column norms of the companion matrix agree.
void balance(Eigen::MatrixXd& a) {
    const int n = static_cast<int>(a.rows());
    const double radix = 2.0, sq = radix * radix;
    bool done = false;
    int sweeps = 0;
    while (!done && sweeps++ < 100) {
        done = true;
        for (int i = 0; i < n; ++i) {
            double r = 0.0, c = 0.0;
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                c += std::abs(a(j, i));
                r += std::abs(a(i, j));
            }
            if (c == 0.0 || r == 0.0) continue;
            double g = r / radix, f = 1.0, s = c + r;
            while (c < g) {
                f *= radix;
                c *= sq;
            }
            g = r * radix;
            while (c > g) {
                f /= radix;
                c /= sq;
            }
            if ((c + r) / f < 0.95 * s) {
                done = false;
                a.col(i) *= f;
                a.row(i) *= 1.0 / f;
            }
        }
    }
}

}  // namespace

std::vector<Complex> poly_roots(const Poly& coeffs) {
    const double drop_tol = 1e-14;
    int deg = poly_degree(coeffs, drop_tol);
    if (deg < 0) throw DegenerateSystemError("polynomial vanishes identically");
    if (deg == 0) return {};

    // Strip exact roots at the origin.
    std::size_t low = 0;
    double scale = 0.0;
    for (double v : coeffs) scale = std::max(scale, std::abs(v));
    while (low < static_cast<std::size_t>(deg) && std::abs(coeffs[low]) <= 1e-300 * scale) ++low;

    std::vector<Complex> roots(low, Complex(0.0, 0.0));
    int n = deg - static_cast<int>(low);
    if (n == 0) return roots;

    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
    double lead = coeffs[deg];
    for (int i = 0; i < n; ++i) companion(i, n - 1) = -coeffs[low + i] / lead;
    for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;

    balance(companion);
    Eigen::EigenSolver<Eigen::MatrixXd> es(companion, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success) throw Error("companion eigensolve failed");
    for (int i = 0; i < n; ++i) roots.push_back(es.eigenvalues()[i]);
    std::sort(roots.begin(), roots.end(), complex_order);
    return roots;
}

}  // namespace krein
