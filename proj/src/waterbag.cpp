#include "krein/waterbag.hpp"

#include <algorithm>
#include <cmath>

#include "krein/dispersion.hpp"
#include "krein/profile.hpp"

namespace krein {

namespace {

void normalize_bag(std::vector<double>& contours, std::vector<double>& levels, bool merge_equal,
                   double merge_tol) {
    if (contours.empty()) throw Error("waterbag: no contours");
    if (levels.size() != contours.size() + 1)
        throw Error("waterbag: levels must have one more entry than contours");
    if (levels.front() != 0.0 || levels.back() != 0.0)
        throw Error("waterbag: outermost levels must vanish");
    for (double f : levels)
        if (!(f >= 0.0)) throw Error("waterbag: levels must be nonnegative");

    // Sort contours carrying their bounding levels along.
    std::vector<std::size_t> order(contours.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return contours[a] < contours[b]; });
    bool sorted = true;
    for (std::size_t i = 0; i < order.size(); ++i) sorted = sorted && order[i] == i;
    if (!sorted) throw Error("waterbag: contours must be given in increasing order");

    double span = std::max(1.0, std::abs(contours.back() - contours.front()));
    for (std::size_t i = 0; i + 1 < contours.size(); ++i) {
        double gap = contours[i + 1] - contours[i];
        if (gap <= (merge_equal ? merge_tol : 0.0) * span || gap <= 0.0) {
            if (!merge_equal || gap < -merge_tol * span)
                throw Error("waterbag: contours must be strictly increasing (use merge option)");
            // Coalesce: drop the level wedged between the two contours.
            contours[i] = 0.5 * (contours[i] + contours[i + 1]);
            contours.erase(contours.begin() + i + 1);
            levels.erase(levels.begin() + i + 1);
            --i;
        }
    }
}

}  // namespace

WaterbagEquilibrium::WaterbagEquilibrium(std::vector<double> contours, std::vector<double> levels,
                                         bool merge_equal, double merge_tol)
    : contours_(std::move(contours)), levels_(std::move(levels)) {
    if (merge_equal && merge_tol <= 0.0) merge_tol = 1e-12;
    normalize_bag(contours_, levels_, merge_equal, merge_tol);

    // Drop contours whose jump cancelled out entirely.
    double fscale = 0.0;
    for (double f : levels_) fscale = std::max(fscale, f);
    jumps_.clear();
    for (std::size_t i = 0; i < contours_.size();) {
        double j = levels_[i + 1] - levels_[i];
        if (std::abs(j) <= 1e-15 * std::max(1.0, fscale)) {
            contours_.erase(contours_.begin() + i);
            levels_.erase(levels_.begin() + i + 1);
        } else {
            ++i;
        }
    }
    if (contours_.size() < 2)
        throw Error("waterbag: need at least two contours with nonzero jumps");
    jumps_.resize(contours_.size());
    for (std::size_t i = 0; i < contours_.size(); ++i) jumps_[i] = levels_[i + 1] - levels_[i];
}

WaterbagEquilibrium WaterbagEquilibrium::from_jumps(
    const std::vector<std::pair<double, double>>& pairs, bool merge_equal, double merge_tol) {
    if (pairs.size() < 2) throw Error("waterbag: need at least two (p0, jump) pairs");
    std::vector<std::pair<double, double>> sorted = pairs;
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> contours, levels;
    levels.push_back(0.0);
    double run = 0.0, scale = 0.0;
    for (const auto& [p, j] : sorted) {
        contours.push_back(p);
        run += j;
        scale = std::max(scale, std::abs(run));
        levels.push_back(run);
    }
    if (std::abs(run) > 1e-9 * std::max(1.0, scale))
        throw Error("waterbag: jumps do not telescope to zero");
    levels.back() = 0.0;
    for (double& f : levels) {
        if (f < 0.0 && f > -1e-12 * std::max(1.0, scale)) f = 0.0;
    }
    return WaterbagEquilibrium(std::move(contours), std::move(levels), merge_equal, merge_tol);
}

Complex waterbag_dispersion(const WaterbagEquilibrium& wb, double k, Complex u,
                            const Tolerances& tol) {
    if (!(k > 0.0)) throw Error("waterbag_dispersion: wavenumber must be positive");
    const auto& c = wb.contours();
    const auto& j = wb.jumps();
    double span = std::max(1.0, c.back() - c.front());
    Complex acc = 1.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        Complex d = u - c[i];
        if (std::abs(d) < tol.near_pole * span)
            throw PoleEvaluationError("waterbag dispersion evaluated at a contour");
        acc += j[i] / d / (k * k);
    }
    return acc;
}

Complex waterbag_dispersion_deriv(const WaterbagEquilibrium& wb, double k, Complex u,
                                  const Tolerances& tol) {
    const auto& c = wb.contours();
    const auto& j = wb.jumps();
    double span = std::max(1.0, c.back() - c.front());
    Complex acc = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        Complex d = u - c[i];
        if (std::abs(d) < tol.near_pole * span)
            throw PoleEvaluationError("waterbag dispersion derivative at a contour");
        acc -= j[i] / (d * d) / (k * k);
    }
    return acc;
}

Eigen::MatrixXd evolution_generator_real(const WaterbagEquilibrium& wb, double k) {
    if (!(k > 0.0)) throw Error("evolution matrix: wavenumber must be positive");
    const auto& c = wb.contours();
    const auto& j = wb.jumps();
    const int m = static_cast<int>(c.size());
    Eigen::MatrixXd b(m, m);
    for (int r = 0; r < m; ++r)
        for (int s = 0; s < m; ++s) b(r, s) = j[s] / k - (r == s ? k * c[r] : 0.0);
    return b;
}

Eigen::MatrixXcd linear_evolution_matrix(const WaterbagEquilibrium& wb, double k) {
    return Complex(0.0, 1.0) * evolution_generator_real(wb, k).cast<Complex>();
}

double mode_energy(const WaterbagEquilibrium& wb, double k, double u, const Tolerances& tol) {
    return mode_signature(DispersionFamily::of(wb), k, k * u, tol).energy;
}

double mode_energy_closed_form(const WaterbagEquilibrium& wb, double k, double u) {
    const auto& c = wb.contours();
    const auto& j = wb.jumps();
    double acc = 1.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        double d = u - c[i];
        acc -= j[i] * c[i] / (d * d) / (k * k);
    }
    return acc;
}

std::vector<IntervalRoots> locate_interval_roots(const WaterbagEquilibrium& wb, double k,
                                                 const Tolerances& tol) {
    const auto& c = wb.contours();
    const auto& j = wb.jumps();
    const std::size_t m = c.size();
    DispersionFamily fam = DispersionFamily::of(wb);

    auto eps = [&](double u) { return waterbag_dispersion(wb, k, Complex(u, 0.0), tol).real(); };

    // All roots live within sum|jump|/k^2 of the contour hull.
    double reach = 1.0;
    for (double ji : j) reach += std::abs(ji);
    reach /= k * k;
    reach += 1.0;

    // Polished polynomial roots as candidates.
    std::vector<double> candidates;
    for (const auto& mode : find_discrete_modes(fam, k, tol))
        if (mode.omega.imag() == 0.0 && !mode.suspect) candidates.push_back(mode.omega.real() / k);

    std::vector<IntervalRoots> out;
    for (std::size_t iv = 0; iv <= m; ++iv) {
        double lo = iv == 0 ? c.front() - reach : c[iv - 1];
        double hi = iv == m ? c.back() + reach : c[iv];
        double width = hi - lo;
        double delta = 1e-7 * width;

        IntervalRoots rec;
        rec.interval = iv;
        if (iv > 0 && iv < m) rec.same_sign_jumps = j[iv - 1] * j[iv] > 0.0;

        std::vector<double> found;
        for (double u : candidates)
            if (u > lo + delta && u < hi - delta) found.push_back(u);

        // Sign-change scan on a cosine-clustered grid (dense near the poles),
        // bisected to locate anything the polynomial route lost to rounding.
        int n = 128;
        for (int attempt = 0; attempt < 3; ++attempt, n *= 2) {
            std::vector<double> scan_roots;
            double prev_u = lo + delta;
            double prev_e = eps(prev_u);
            const double pi = 3.14159265358979323846;
            for (int i = 1; i <= n; ++i) {
                double t = 0.5 * (1.0 - std::cos(pi * i / n));
                double u = lo + delta + (width - 2.0 * delta) * t;
                double e = eps(u);
                if (prev_e == 0.0) scan_roots.push_back(prev_u);
                if (prev_e * e < 0.0) {
                    double a = prev_u, b = u, fa = prev_e;
                    for (int it = 0; it < 200; ++it) {
                        double mid = 0.5 * (a + b);
                        double fm = eps(mid);
                        if (fm == 0.0 || b - a < 1e-14 * std::max(1.0, std::abs(mid))) {
                            a = b = mid;
                            break;
                        }
                        if (fa * fm < 0.0)
                            b = mid;
                        else {
                            a = mid;
                            fa = fm;
                        }
                    }
                    scan_roots.push_back(0.5 * (a + b));
                }
                prev_u = u;
                prev_e = e;
            }
            // Merge candidate and scanned roots.
            std::vector<double> merged = found;
            for (double u : scan_roots) {
                bool dup = false;
                for (double v : merged)
                    if (std::abs(u - v) < 1e-8 * std::max(1.0, width)) dup = true;
                if (!dup) merged.push_back(u);
            }
            std::sort(merged.begin(), merged.end());

            // Parity check against the boundary signs; rescan denser on mismatch.
            double e_lo = eps(lo + delta), e_hi = eps(hi - delta);
            bool odd_expected = e_lo * e_hi < 0.0;
            if ((merged.size() % 2 == 1) == odd_expected || attempt == 2) {
                rec.roots = std::move(merged);
                break;
            }
        }
        out.push_back(std::move(rec));
    }
    return out;
}

WaterbagFluidView to_multifluid(const WaterbagEquilibrium& wb, bool strict) {
    WaterbagFluidView view;
    const auto& c = wb.contours();
    const auto& lv = wb.levels();
    for (std::size_t layer = 1; layer < lv.size() - 1; ++layer) {
        double f = lv[layer];
        if (f <= 0.0) {
            if (strict) throw ZeroLevelLayerError("waterbag layer has vanishing f");
            continue;  // vacuum gap: no fluid there
        }
        WaterbagFluidLayer fl;
        double w = c[layer] - c[layer - 1];
        fl.f = f;
        fl.rho = f * w;
        fl.u = 0.5 * (c[layer] + c[layer - 1]);
        fl.u_theta = 0.5 * w;
        fl.pressure = fl.rho * fl.rho * fl.rho / (12.0 * f * f);
        view.layers.push_back(fl);
    }
    if (view.layers.empty()) throw ZeroLevelLayerError("waterbag has no layers with f > 0");
    return view;
}

MultiFluidEquilibrium WaterbagFluidView::as_multifluid() const {
    std::vector<FluidSpecies> sp;
    sp.reserve(layers.size());
    for (const auto& l : layers) sp.push_back({l.rho, l.u, l.u_theta});
    return MultiFluidEquilibrium(std::move(sp), Coupling::PlasmaBare);
}

WaterbagEquilibrium discretize_distribution(const DistributionProfile& profile, int m_levels,
                                            std::pair<double, double> p_range) {
    if (m_levels < 2 || m_levels % 2 != 0)
        throw Error("discretize: level count must be an even integer >= 2");
    if (!(p_range.second > p_range.first)) throw Error("discretize: empty momentum range");

    double fmax = profile.max_f0(p_range);
    if (!(fmax > 0.0)) throw NonResolvableProfileError("discretize: profile vanishes on p_range");
    const int half = m_levels / 2;
    const double dl = fmax / half;

    // Quantize f0 to the nearest multiple of dl; contours sit where f0 crosses
    // the half-level boundaries (j - 1/2) dl.
    auto quant = [&](double p) {
        int n = static_cast<int>(std::floor(profile.f0(p) / dl + 0.5));
        return std::max(n, 0);
    };

    const int scan = std::max(4096, 64 * m_levels);
    std::vector<double> contours, levels;
    levels.push_back(0.0);
    double prev_p = p_range.first;
    int prev_n = quant(prev_p);
    if (prev_n != 0)
        throw NonResolvableProfileError("discretize: f0 not negligible at the range edge");

    int n_now = prev_n;
    for (int i = 1; i <= scan; ++i) {
        double p = p_range.first + (p_range.second - p_range.first) * i / scan;
        int n = quant(p);
        while (n != n_now) {
            int step = n > n_now ? +1 : -1;
            // Boundary level between n_now and n_now + step.
            double boundary = (std::max(n_now, n_now + step) - 0.5) * dl;
            double a = prev_p, b = p;
            double fa = profile.f0(a) - boundary;
            for (int it = 0; it < 120; ++it) {
                double mid = 0.5 * (a + b);
                double fm = profile.f0(mid) - boundary;
                if (fm == 0.0) {
                    a = b = mid;
                    break;
                }
                if (fa * fm < 0.0)
                    b = mid;
                else {
                    a = mid;
                    fa = fm;
                }
            }
            n_now += step;
            contours.push_back(0.5 * (a + b));
            levels.push_back(n_now * dl);
        }
        prev_p = p;
        prev_n = n;
    }
    if (n_now != 0)
        throw NonResolvableProfileError("discretize: level crossings not closed inside p_range");
    if (contours.size() < 2)
        throw NonResolvableProfileError("discretize: no resolvable level crossings");
    return WaterbagEquilibrium(std::move(contours), std::move(levels));
}

}  // namespace krein
