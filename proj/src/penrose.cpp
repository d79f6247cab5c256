#include "krein/penrose.hpp"

#include <algorithm>
#include <cmath>

#include "krein/errors.hpp"
#include "krein/quadrature.hpp"

namespace krein {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Window {
    double lo, hi, panel;
};

Window integration_window(const DistributionProfile& profile, double u_re) {
    double s = profile.decay_scale();
    Window w;
    w.lo = std::min(profile.support_lo(), u_re - 2.0 * s);
    w.hi = std::max(profile.support_hi(), u_re + 2.0 * s);
    w.panel = 0.5 * s;
    return w;
}

void check_tail(const DistributionProfile& profile, const Window& w, double u_re,
                const Tolerances& tol) {
    double s = std::max(profile.decay_scale(), 1e-12);
    // Sample just inside the declared support; whatever the profile carries
    // at its own boundary bounds the mass the truncation discards.
    double lo_probe = std::max(w.lo, profile.support_lo()) + 0.05 * s;
    double hi_probe = std::min(w.hi, profile.support_hi()) - 0.05 * s;
    double tail = profile.f0(lo_probe) / std::max(std::abs(u_re - w.lo), s) +
                  profile.f0(hi_probe) / std::max(std::abs(w.hi - u_re), s);
    if (tail > tol.truncation_tail)
        throw TruncationError("hilbert transform: truncated tail above tolerance");
}

// PV int_{lo}^{hi} f0'(p)/(p-u) dp for real u inside (lo, hi).
double pv_integral(const DistributionProfile& profile, double u, const Window& w) {
    double fu = profile.f0_prime(u);
    auto g = [&](double p) {
        double d = p - u;
        if (std::abs(d) < 1e-12) return profile.f0_second(u);
        return (profile.f0_prime(p) - fu) / d;
    };
    double val = integrate_panels(g, w.lo, u, w.panel) + integrate_panels(g, u, w.hi, w.panel);
    val += fu * std::log((w.hi - u) / (u - w.lo));
    return val;
}

}  // namespace

double hilbert_transform(const DistributionProfile& profile, double u, const Tolerances& tol) {
    if (!std::isfinite(u)) throw Error("hilbert transform: u must be finite");
    Window w = integration_window(profile, u);
    check_tail(profile, w, u, tol);
    return pv_integral(profile, u, w) / kPi;
}

Complex vlasov_dispersion(const DistributionProfile& profile, double k, Complex u,
                          const Tolerances& tol) {
    if (!(k > 0.0)) throw Error("vlasov dispersion: wavenumber must be positive");
    if (u.imag() < 0.0)
        throw Error("vlasov dispersion: defined on the closed upper half plane only");
    if (u.imag() == 0.0) {
        double ur = u.real();
        Window w = integration_window(profile, ur);
        check_tail(profile, w, ur, tol);
        Complex integral(pv_integral(profile, ur, w), kPi * profile.f0_prime(ur));
        return 1.0 - integral / (k * k);
    }
    // Off the axis the subtracted integrand is entire; the log term uses the
    // principal branch, which is continuous for Im u > 0.
    Window w = integration_window(profile, u.real());
    check_tail(profile, w, u.real(), tol);
    Complex fu = profile.f0_prime(u);
    auto g = [&](double p) -> Complex {
        Complex d = p - u;
        return (profile.f0_prime(Complex(p, 0.0)) - fu) / d;
    };
    Complex val = integrate_panels_t(g, w.lo, u.real(), w.panel) +
                  integrate_panels_t(g, u.real(), w.hi, w.panel);
    val += fu * (std::log(Complex(w.hi, 0.0) - u) - std::log(Complex(w.lo, 0.0) - u));
    return 1.0 - val / (k * k);
}

Complex vlasov_dispersion_deriv(const DistributionProfile& profile, double k, Complex u,
                                const Tolerances& tol) {
    if (!(k > 0.0)) throw Error("vlasov dispersion: wavenumber must be positive");
    if (u.imag() < 0.0)
        throw Error("vlasov dispersion: defined on the closed upper half plane only");
    Window w = integration_window(profile, u.real());
    check_tail(profile, w, u.real(), tol);
    // d eps/du = -k^-2 int f0''/(p-u) dp after integrating by parts.
    if (u.imag() == 0.0) {
        double ur = u.real();
        double fs = profile.f0_second(ur);
        auto g = [&](double p) {
            double d = p - ur;
            if (std::abs(d) < 1e-12) return 0.0;  // odd remainder, third derivative scale
            return (profile.f0_second(p) - fs) / d;
        };
        double pv = integrate_panels(g, w.lo, ur, w.panel) + integrate_panels(g, ur, w.hi, w.panel);
        pv += fs * std::log((w.hi - ur) / (ur - w.lo));
        return -Complex(pv, kPi * fs) / (k * k);
    }
    Complex fs = profile.f0_second(u);
    auto g = [&](double p) -> Complex {
        Complex d = p - u;
        return (profile.f0_second(Complex(p, 0.0)) - fs) / d;
    };
    Complex val = integrate_panels_t(g, w.lo, u.real(), w.panel) +
                  integrate_panels_t(g, u.real(), w.hi, w.panel);
    val += fs * (std::log(Complex(w.hi, 0.0) - u) - std::log(Complex(w.lo, 0.0) - u));
    return -val / (k * k);
}

PenroseContour penrose_contour(const DistributionProfile& profile, double k,
                               const ContourSpec& spec, const Tolerances& tol) {
    if (!(k > 0.0)) throw Error("penrose contour: wavenumber must be positive");
    double half = spec.half_width;
    if (half <= 0.0) half = std::max(std::abs(profile.support_lo()), profile.support_hi());
    if (half < 8.0 * profile.decay_scale())
        throw Error("penrose contour: half width below 8 decay scales");
    int n = std::max(spec.base_points, 32);

    PenroseContour out;
    out.k = k;
    out.grazing_tol = spec.grazing_tol;
    auto eval = [&](double u) { return vlasov_dispersion(profile, k, Complex(u, 0.0), tol); };

    auto angle_between = [](Complex a, Complex b) {
        double d = std::arg(b) - std::arg(a);
        while (d > kPi) d -= 2.0 * kPi;
        while (d < -kPi) d += 2.0 * kPi;
        return std::abs(d);
    };

    // Emit a refined polyline between consecutive base nodes, in order.
    double refine_band = 10.0 * spec.grazing_tol;
    std::function<void(double, Complex, double, Complex, int)> emit =
        [&](double u0, Complex e0, double u1, Complex e1, int depth) {
            bool bad_angle = angle_between(e0, e1) > tol.contour_angle;
            bool need = bad_angle || (std::min(std::abs(e0), std::abs(e1)) < refine_band &&
                                      u1 - u0 > half * 1e-7);
            if (!need || depth >= spec.max_refine_depth) {
                if (bad_angle) out.angle_resolved = false;
                out.u.push_back(u1);
                out.eps.push_back(e1);
                return;
            }
            double um = 0.5 * (u0 + u1);
            Complex em = eval(um);
            emit(u0, e0, um, em, depth + 1);
            emit(um, em, u1, e1, depth + 1);
        };

    double u0 = -half;
    Complex e0 = eval(u0);
    out.u.push_back(u0);
    out.eps.push_back(e0);
    for (int i = 1; i < n; ++i) {
        double u1 = -half + 2.0 * half * i / (n - 1);
        Complex e1 = eval(u1);
        emit(u0, e0, u1, e1, 0);
        u0 = u1;
        e0 = e1;
    }

    out.min_abs = 1e300;
    for (const Complex& e : out.eps) out.min_abs = std::min(out.min_abs, std::abs(e));
    out.grazing = out.min_abs < spec.grazing_tol;
    return out;
}

int winding_number(const PenroseContour& contour) {
    // An exponentially close pass is still resolvable as long as the angle
    // refinement succeeded and |eps| sits above the evaluation noise floor.
    if (contour.min_abs < 1e-5 * contour.grazing_tol || !contour.angle_resolved)
        throw OriginGrazingError("winding number: contour passes through the origin (marginal)");
    if (contour.eps.size() < 3) throw Error("winding number: contour too short");
    double total = 0.0;
    const std::size_t n = contour.eps.size();
    for (std::size_t i = 0; i + 1 <= n; ++i) {
        const Complex& a = contour.eps[i % n];
        const Complex& b = contour.eps[(i + 1) % n];  // closes back to the start
        double d = std::arg(b) - std::arg(a);
        while (d > kPi) d -= 2.0 * kPi;
        while (d < -kPi) d += 2.0 * kPi;
        total += d;
    }
    double turns = total / (2.0 * kPi);
    int w = static_cast<int>(std::lround(turns));
    if (std::abs(turns - w) > 0.05)
        throw Error("winding number: angle accumulation did not close to an integer");
    return w;
}

std::vector<double> profile_critical_points(const DistributionProfile& profile) {
    double lo = profile.support_lo(), hi = profile.support_hi();
    const int n = 2048;
    std::vector<double> zeros;
    double prev_p = lo, prev_d = profile.f0_prime(lo);
    for (int i = 1; i <= n; ++i) {
        double p = lo + (hi - lo) * i / n;
        double d = profile.f0_prime(p);
        if (prev_d == 0.0 && std::abs(profile.f0(prev_p)) > 0.0) zeros.push_back(prev_p);
        if (prev_d * d < 0.0) {
            double a = prev_p, b = p, fa = prev_d;
            for (int it = 0; it < 100; ++it) {
                double mid = 0.5 * (a + b);
                double fm = profile.f0_prime(mid);
                if (fm == 0.0 || b - a < 1e-13 * std::max(1.0, std::abs(mid))) {
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
            zeros.push_back(0.5 * (a + b));
        }
        prev_p = p;
        prev_d = d;
    }
    return zeros;
}

StabilityResult classify_stability(const DistributionProfile& profile, double k,
                                   const ContourSpec& spec, const Tolerances& tol) {
    PenroseContour c = penrose_contour(profile, k, spec, tol);
    StabilityResult r;
    r.min_abs = c.min_abs;

    // Embedded neutral modes live where f0' vanishes; marginality means eps
    // itself vanishes at one of those velocities.
    r.min_abs_critical = 1e300;
    for (double u0 : profile_critical_points(profile))
        r.min_abs_critical = std::min(
            r.min_abs_critical, std::abs(vlasov_dispersion(profile, k, Complex(u0, 0.0), tol)));
    if (r.min_abs_critical < spec.grazing_tol) {
        r.kind = StabilityResult::Kind::Marginal;
        return r;
    }
    int w = 0;
    try {
        w = winding_number(c);
    } catch (const OriginGrazingError&) {
        r.kind = StabilityResult::Kind::Marginal;
        return r;
    }
    if (w == 0) {
        r.kind = StabilityResult::Kind::Stable;
    } else {
        r.kind = StabilityResult::Kind::Unstable;
        r.unstable_count = w;
    }
    return r;
}

double critical_parameter(const std::function<DistributionProfile(double)>& family, double k,
                          std::pair<double, double> bracket, const ContourSpec& spec,
                          const Tolerances& tol) {
    auto classify = [&](double c) { return classify_stability(family(c), k, spec, tol); };
    StabilityResult lo = classify(bracket.first);
    StabilityResult hi = classify(bracket.second);
    auto same = [](const StabilityResult& a, const StabilityResult& b) {
        return a.kind == b.kind && a.unstable_count == b.unstable_count;
    };
    if (same(lo, hi))
        throw NoSignChangeError("critical parameter: bracket ends classify identically");
    double a = bracket.first, b = bracket.second;
    while (b - a > tol.param_bisect) {
        double mid = 0.5 * (a + b);
        StabilityResult m = classify(mid);
        if (m.kind == StabilityResult::Kind::Marginal) return mid;
        if (same(m, lo))
            a = mid;
        else
            b = mid;
    }
    return 0.5 * (a + b);
}

std::vector<Complex> unstable_roots(const DistributionProfile& profile, double k,
                                    const Tolerances& tol) {
    if (!profile.analytic())
        throw Error("unstable-root oracle requires an analytic profile");
    double spread = std::max(1.0, 0.5 * (profile.support_hi() - profile.support_lo()) - 7.0);
    // Trust region: outside it the analytically continued Gaussians overwhelm
    // the quadrature and eps degenerates to noise.
    const double re_cap = std::max(std::abs(profile.support_lo()), profile.support_hi());
    const double im_cap = 4.0;
    std::vector<Complex> found;
    for (double re_f : {-0.8, -0.4, 0.0, 0.4, 0.8}) {
        for (double im_f : {0.04, 0.15, 0.4, 0.9}) {
            Complex u(re_f * spread, im_f * std::max(1.0, k));
            bool ok = false;
            for (int it = 0; it < 60; ++it) {
                Complex e = vlasov_dispersion(profile, k, u, tol);
                Complex de = vlasov_dispersion_deriv(profile, k, u, tol);
                if (std::abs(de) < 1e-14) break;
                Complex step = e / de;
                u -= step;
                if (u.imag() <= 1e-10) break;  // left the upper half plane
                if (u.imag() > im_cap || std::abs(u.real()) > re_cap) break;
                if (std::abs(step) < 1e-13 * std::max(1.0, std::abs(u))) {
                    ok = true;
                    break;
                }
            }
            if (!ok || u.imag() <= 1e-8 || u.imag() > im_cap) continue;
            if (std::abs(u.real()) > re_cap) continue;
            if (std::abs(vlasov_dispersion(profile, k, u, tol)) > 1e-9) continue;
            bool dup = false;
            for (const Complex& v : found)
                if (std::abs(v - u) < 1e-6 * std::max(1.0, std::abs(v))) dup = true;
            if (!dup) found.push_back(u);
        }
    }
    std::sort(found.begin(), found.end(), complex_order);
    return found;
}

}  // namespace krein
