#include "krein/profile.hpp"

#include <algorithm>
#include <cmath>

namespace krein {

namespace {

// Natural cubic spline second derivatives for nodes (x, y).
std::vector<double> spline_second_derivs(const std::vector<double>& x,
                                         const std::vector<double>& y) {
    const std::size_t n = x.size();
    std::vector<double> y2(n, 0.0), u(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        double sig = (x[i] - x[i - 1]) / (x[i + 1] - x[i - 1]);
        double p = sig * y2[i - 1] + 2.0;
        y2[i] = (sig - 1.0) / p;
        u[i] = (y[i + 1] - y[i]) / (x[i + 1] - x[i]) - (y[i] - y[i - 1]) / (x[i] - x[i - 1]);
        u[i] = (6.0 * u[i] / (x[i + 1] - x[i - 1]) - sig * u[i - 1]) / p;
    }
    for (std::size_t k = n - 1; k-- > 1;) y2[k] = y2[k] * y2[k + 1] + u[k];
    return y2;
}

}  // namespace

DistributionProfile DistributionProfile::maxwellian() {
    DistributionProfile p;
    p.kind_ = Kind::Maxwellian;
    p.decay_scale_ = 1.0;
    p.support_lo_ = -8.0;
    p.support_hi_ = 8.0;
    return p;
}

DistributionProfile DistributionProfile::bi_maxwellian(double separation) {
    if (!(separation >= 0.0)) throw Error("bi_maxwellian: separation must be nonnegative");
    DistributionProfile p;
    p.kind_ = Kind::BiMaxwellian;
    p.separation_ = separation;
    p.decay_scale_ = 1.0;
    p.support_lo_ = -separation - 8.0;
    p.support_hi_ = separation + 8.0;
    return p;
}

DistributionProfile DistributionProfile::tabulated(std::vector<double> p_grid,
                                                   std::vector<double> values) {
    if (p_grid.size() < 4 || p_grid.size() != values.size())
        throw Error("tabulated profile: need >= 4 matching grid points");
    for (std::size_t i = 1; i < p_grid.size(); ++i)
        if (!(p_grid[i] > p_grid[i - 1])) throw Error("tabulated profile: grid must increase");
    for (double v : values)
        if (v < 0.0) throw Error("tabulated profile: f0 must be nonnegative");

    DistributionProfile p;
    p.kind_ = Kind::Tabulated;
    p.p_grid_ = std::move(p_grid);
    p.values_ = std::move(values);
    const auto& x = p.p_grid_;
    const auto& f = p.values_;
    const std::size_t n = x.size();

    // Centered differences at the nodes, one-sided at the ends.
    p.deriv_nodes_.resize(n);
    for (std::size_t i = 1; i + 1 < n; ++i)
        p.deriv_nodes_[i] = (f[i + 1] - f[i - 1]) / (x[i + 1] - x[i - 1]);
    p.deriv_nodes_[0] = (f[1] - f[0]) / (x[1] - x[0]);
    p.deriv_nodes_[n - 1] = (f[n - 1] - f[n - 2]) / (x[n - 1] - x[n - 2]);

    p.second_nodes_.resize(n);
    for (std::size_t i = 1; i + 1 < n; ++i)
        p.second_nodes_[i] =
            (p.deriv_nodes_[i + 1] - p.deriv_nodes_[i - 1]) / (x[i + 1] - x[i - 1]);
    p.second_nodes_[0] = p.second_nodes_[1];
    p.second_nodes_[n - 1] = p.second_nodes_[n - 2];

    p.spline_f_ = spline_second_derivs(x, f);
    p.spline_d_ = spline_second_derivs(x, p.deriv_nodes_);
    p.spline_s_ = spline_second_derivs(x, p.second_nodes_);

    p.support_lo_ = x.front();
    p.support_hi_ = x.back();
    // Thermal width estimate from the second moment of the table.
    double m0 = 0.0, m1 = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double dx = x[i + 1] - x[i];
        double fm = 0.5 * (f[i] + f[i + 1]);
        double xm = 0.5 * (x[i] + x[i + 1]);
        m0 += fm * dx;
        m1 += xm * fm * dx;
        m2 += xm * xm * fm * dx;
    }
    if (m0 > 0.0) {
        double mean = m1 / m0;
        double var = std::max(m2 / m0 - mean * mean, 0.0);
        p.decay_scale_ = std::max(std::sqrt(var), (x.back() - x.front()) / 16.0);
    } else {
        p.decay_scale_ = (x.back() - x.front()) / 16.0;
    }
    return p;
}

double DistributionProfile::eval_spline(const std::vector<double>& y,
                                        const std::vector<double>& y2, double p) const {
    const auto& x = p_grid_;
    if (p <= x.front() || p >= x.back()) return 0.0;  // compactly supported
    auto it = std::upper_bound(x.begin(), x.end(), p);
    std::size_t hi = static_cast<std::size_t>(it - x.begin());
    std::size_t lo = hi - 1;
    double h = x[hi] - x[lo];
    double a = (x[hi] - p) / h, b = (p - x[lo]) / h;
    return a * y[lo] + b * y[hi] +
           ((a * a * a - a) * y2[lo] + (b * b * b - b) * y2[hi]) * h * h / 6.0;
}

double DistributionProfile::f0(double p) const {
    switch (kind_) {
        case Kind::Maxwellian: return std::exp(-p * p);
        case Kind::BiMaxwellian: {
            double a = p + separation_, b = p - separation_;
            return std::exp(-a * a) + std::exp(-b * b);
        }
        default: return eval_spline(values_, spline_f_, p);
    }
}

double DistributionProfile::f0_prime(double p) const {
    switch (kind_) {
        case Kind::Maxwellian: return -2.0 * p * std::exp(-p * p);
        case Kind::BiMaxwellian: {
            double a = p + separation_, b = p - separation_;
            return -2.0 * a * std::exp(-a * a) - 2.0 * b * std::exp(-b * b);
        }
        default: return eval_spline(deriv_nodes_, spline_d_, p);
    }
}

double DistributionProfile::f0_second(double p) const {
    switch (kind_) {
        case Kind::Maxwellian: return (4.0 * p * p - 2.0) * std::exp(-p * p);
        case Kind::BiMaxwellian: {
            double a = p + separation_, b = p - separation_;
            return (4.0 * a * a - 2.0) * std::exp(-a * a) + (4.0 * b * b - 2.0) * std::exp(-b * b);
        }
        default: return eval_spline(second_nodes_, spline_s_, p);
    }
}

Complex DistributionProfile::f0_prime(Complex p) const {
    switch (kind_) {
        case Kind::Maxwellian: return -2.0 * p * std::exp(-p * p);
        case Kind::BiMaxwellian: {
            Complex a = p + separation_, b = p - separation_;
            return -2.0 * a * std::exp(-a * a) - 2.0 * b * std::exp(-b * b);
        }
        default: throw Error("tabulated profile has no analytic continuation");
    }
}

Complex DistributionProfile::f0_second(Complex p) const {
    switch (kind_) {
        case Kind::Maxwellian: return (4.0 * p * p - 2.0) * std::exp(-p * p);
        case Kind::BiMaxwellian: {
            Complex a = p + separation_, b = p - separation_;
            return (4.0 * a * a - 2.0) * std::exp(-a * a) +
                   (4.0 * b * b - 2.0) * std::exp(-b * b);
        }
        default: throw Error("tabulated profile has no analytic continuation");
    }
}

double DistributionProfile::max_f0(std::pair<double, double> p_range, int scan_points) const {
    double best = 0.0;
    for (int i = 0; i <= scan_points; ++i) {
        double p = p_range.first + (p_range.second - p_range.first) * i / scan_points;
        best = std::max(best, f0(p));
    }
    return best;
}

}  // namespace krein
