#include "krein/dispersion.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace krein {

namespace {

struct MergedSpecies {
    double rho, u, c;
};

// Susceptibilities of species with coincident pole pairs add exactly; merging
// them keeps the cleared polynomial free of spurious pole roots.
std::vector<MergedSpecies> merged_species(const MultiFluidEquilibrium& mf) {
    std::vector<MergedSpecies> out;
    for (const auto& s : mf.species()) {
        bool found = false;
        for (auto& m : out) {
            double scale = 1.0 + std::abs(m.u) + std::abs(m.c);
            if (std::abs(m.u - s.u) <= 1e-12 * scale && std::abs(m.c - s.c_s) <= 1e-12 * scale) {
                m.rho += s.rho;
                found = true;
                break;
            }
        }
        if (!found) out.push_back({s.rho, s.u, s.c_s});
    }
    return out;
}

double shield_term(Coupling c, double k) {
    return c == Coupling::PlasmaShielded ? 1.0 / (k * k) : 0.0;
}

void require_positive_k(double k) {
    if (!(k > 0.0)) throw Error("dispersion: wavenumber must be positive");
}

}  // namespace

DispersionFamily DispersionFamily::of(const MultiFluidEquilibrium& mf) {
    DispersionFamily f;
    switch (mf.coupling()) {
        case Coupling::PlasmaShielded:
        case Coupling::PlasmaBare: f.kind_ = Kind::FluidDielectric; break;
        case Coupling::GravitationalJeans: f.kind_ = Kind::JeansDielectric; break;
        case Coupling::Acoustic: f.kind_ = Kind::Acoustic; break;
    }
    f.fluid_ = mf;
    return f;
}

DispersionFamily DispersionFamily::of(const WaterbagEquilibrium& wb) {
    DispersionFamily f;
    f.kind_ = Kind::Waterbag;
    f.bag_ = wb;
    return f;
}

std::vector<double> dispersion_poles(const DispersionFamily& family, double k) {
    require_positive_k(k);
    std::vector<double> poles;
    switch (family.kind()) {
        case DispersionFamily::Kind::FluidDielectric:
        case DispersionFamily::Kind::JeansDielectric:
            for (const auto& s : family.fluid().species()) {
                poles.push_back(k * s.u + k * s.c_s);
                if (s.c_s > 0.0) poles.push_back(k * s.u - k * s.c_s);
            }
            break;
        case DispersionFamily::Kind::Waterbag:
            for (double c : family.bag().contours()) poles.push_back(k * c);
            break;
        case DispersionFamily::Kind::Acoustic: break;
    }
    std::sort(poles.begin(), poles.end());
    return poles;
}

Complex eval_dispersion(const DispersionFamily& family, double k, Complex omega,
                        const Tolerances& tol) {
    require_positive_k(k);
    auto guard_pole = [&](Complex denom, double scale) {
        if (std::abs(denom) < tol.near_pole * std::max(1.0, scale))
            throw PoleEvaluationError("dispersion evaluated at a pole");
    };
    switch (family.kind()) {
        case DispersionFamily::Kind::FluidDielectric: {
            const auto& mf = family.fluid();
            Complex acc = 1.0 + shield_term(mf.coupling(), k);
            for (const auto& s : mf.species()) {
                Complex d = (omega - k * s.u) * (omega - k * s.u) - k * k * s.c_s * s.c_s;
                guard_pole(d, k * k * (s.u * s.u + s.c_s * s.c_s) + 1.0);
                acc -= s.rho / d;
            }
            return acc;
        }
        case DispersionFamily::Kind::JeansDielectric: {
            Complex acc = 1.0;
            for (const auto& s : family.fluid().species()) {
                Complex d = (omega - k * s.u) * (omega - k * s.u) - k * k * s.c_s * s.c_s;
                guard_pole(d, k * k * (s.u * s.u + s.c_s * s.c_s) + 1.0);
                acc += s.rho / d;
            }
            return acc;
        }
        case DispersionFamily::Kind::Waterbag: {
            Complex u = omega / k;
            return waterbag_dispersion(family.bag(), k, u, tol);
        }
        case DispersionFamily::Kind::Acoustic: {
            Complex acc = 1.0;
            for (const auto& s : family.fluid().species())
                acc *= (omega - k * s.u) * (omega - k * s.u) - k * k * s.c_s * s.c_s;
            return acc;
        }
    }
    return {};
}

Complex eval_dispersion_deriv(const DispersionFamily& family, double k, Complex omega,
                              const Tolerances& tol) {
    require_positive_k(k);
    switch (family.kind()) {
        case DispersionFamily::Kind::FluidDielectric:
        case DispersionFamily::Kind::JeansDielectric: {
            double sign = family.kind() == DispersionFamily::Kind::FluidDielectric ? 1.0 : -1.0;
            Complex acc = 0.0;
            for (const auto& s : family.fluid().species()) {
                Complex dm = omega - k * s.u;
                Complex d = dm * dm - k * k * s.c_s * s.c_s;
                if (std::abs(d) < tol.near_pole)
                    throw PoleEvaluationError("dispersion derivative at a pole");
                acc += sign * 2.0 * s.rho * dm / (d * d);
            }
            return acc;
        }
        case DispersionFamily::Kind::Waterbag: {
            Complex u = omega / k;
            // d/d omega = (1/k) d/du
            return waterbag_dispersion_deriv(family.bag(), k, u, tol) / k;
        }
        case DispersionFamily::Kind::Acoustic: {
            // Product rule over the branch factors.
            const auto& sp = family.fluid().species();
            Complex total = 0.0;
            for (std::size_t a = 0; a < sp.size(); ++a) {
                Complex term = 2.0 * (omega - k * sp[a].u);
                for (std::size_t b = 0; b < sp.size(); ++b) {
                    if (b == a) continue;
                    term *= (omega - k * sp[b].u) * (omega - k * sp[b].u) -
                            k * k * sp[b].c_s * sp[b].c_s;
                }
                total += term;
            }
            return total;
        }
    }
    return {};
}

Poly dispersion_polynomial(const DispersionFamily& family, double k) {
    require_positive_k(k);
    switch (family.kind()) {
        case DispersionFamily::Kind::FluidDielectric:
        case DispersionFamily::Kind::JeansDielectric: {
            const auto merged = merged_species(family.fluid());
            const bool jeans = family.kind() == DispersionFamily::Kind::JeansDielectric;
            std::vector<Poly> d;
            d.reserve(merged.size());
            for (const auto& m : merged)
                d.push_back({k * k * (m.u * m.u - m.c * m.c), -2.0 * k * m.u, 1.0});
            Poly prod{1.0};
            for (const auto& q : d) prod = poly_mul(prod, q);
            double lead = jeans ? 1.0 : 1.0 + shield_term(family.fluid().coupling(), k);
            Poly num = poly_scale(prod, lead);
            for (std::size_t a = 0; a < merged.size(); ++a) {
                Poly rest{1.0};
                for (std::size_t b = 0; b < merged.size(); ++b)
                    if (b != a) rest = poly_mul(rest, d[b]);
                num = poly_add(num, poly_scale(rest, jeans ? merged[a].rho : -merged[a].rho));
            }
            return num;
        }
        case DispersionFamily::Kind::Waterbag: {
            const auto& wb = family.bag();
            const auto& c = wb.contours();
            const auto& j = wb.jumps();
            Poly prod{1.0};
            for (double ci : c) prod = poly_mul(prod, Poly{-ci, 1.0});
            Poly num = prod;
            for (std::size_t i = 0; i < c.size(); ++i) {
                Poly rest{1.0};
                for (std::size_t m = 0; m < c.size(); ++m)
                    if (m != i) rest = poly_mul(rest, Poly{-c[m], 1.0});
                num = poly_add(num, poly_scale(rest, j[i] / (k * k)));
            }
            return num;
        }
        case DispersionFamily::Kind::Acoustic: {
            Poly prod{1.0};
            for (const auto& s : family.fluid().species())
                prod = poly_mul(prod, Poly{k * k * (s.u * s.u - s.c_s * s.c_s), -2.0 * k * s.u, 1.0});
            return prod;
        }
    }
    return {};
}

CounterstreamFrequencies counterstream_frequencies(double u_e, double k) {
    if (!(u_e > 0.0) || !(k > 0.0))
        throw Error("counterstream_frequencies: u_e and k must be positive");
    double opk = 1.0 + k * k;
    double common = 1.0 / (2.0 * opk) + u_e * u_e;
    double rad = std::sqrt(1.0 / (4.0 * opk * opk) + 2.0 * u_e * u_e / opk);
    CounterstreamFrequencies out;
    out.k = k;
    out.omega_plus = k * std::sqrt(common + rad);
    out.bracket_minus = common - rad;
    if (out.bracket_minus >= 0.0) out.omega_minus = k * std::sqrt(out.bracket_minus);
    return out;
}

double CounterstreamFrequencies::growth_rate() const {
    return bracket_minus < 0.0 ? k * std::sqrt(-bracket_minus) : 0.0;
}

SignatureResult mode_signature(const DispersionFamily& family, double k, double omega,
                               const Tolerances& tol) {
    require_positive_k(k);
    if (family.kind() == DispersionFamily::Kind::Acoustic) {
        // Uncoupled sound branches carry unit positive action energy; a
        // degenerate (cold, double) root is marginal.
        int hits = 0;
        for (const auto& s : family.fluid().species()) {
            if (std::abs(omega - k * (s.u + s.c_s)) < 1e-9 * std::max(1.0, std::abs(omega))) ++hits;
            if (s.c_s > 0.0 &&
                std::abs(omega - k * (s.u - s.c_s)) < 1e-9 * std::max(1.0, std::abs(omega)))
                ++hits;
            if (s.c_s == 0.0 &&
                std::abs(omega - k * s.u) < 1e-9 * std::max(1.0, std::abs(omega)))
                ++hits;  // the cold branch pair counts once per species
        }
        if (hits == 0) throw NotARootError("acoustic signature requested away from a branch");
        SignatureResult r;
        r.energy = std::abs(omega);
        r.signature = (hits == 1 && r.energy > tol.marginal_energy) ? Signature::Positive
                                                                    : Signature::Marginal;
        return r;
    }

    Complex w(omega, 0.0);
    Complex eps = eval_dispersion(family, k, w, tol);
    // One Newton step decouples the check from how the caller found the root.
    Complex deriv = eval_dispersion_deriv(family, k, w, tol);
    if (std::abs(deriv) > 1e-14 && std::abs(eps) > 0.0) {
        Complex w2 = w - eps / deriv;
        if (std::abs(w2.imag()) < 1e-9) {
            Complex eps2 = eval_dispersion(family, k, Complex(w2.real(), 0.0), tol);
            if (std::abs(eps2) < std::abs(eps)) {
                w = Complex(w2.real(), 0.0);
                eps = eps2;
                deriv = eval_dispersion_deriv(family, k, w, tol);
            }
        }
    }
    if (std::abs(eps) > 10.0 * tol.root_accept)
        throw NotARootError("mode_signature: eps does not vanish at the given frequency");

    SignatureResult r;
    r.energy = omega * deriv.real();
    if (std::abs(r.energy) < tol.marginal_energy)
        r.signature = Signature::Marginal;
    else
        r.signature = r.energy > 0.0 ? Signature::Positive : Signature::Negative;
    return r;
}

std::vector<ModeRecord> find_discrete_modes(const DispersionFamily& family, double k,
                                            const Tolerances& tol) {
    require_positive_k(k);
    const bool in_u = family.kind() == DispersionFamily::Kind::Waterbag;

    double scale = 1.0;
    {
        std::vector<double> poles = dispersion_poles(family, k);
        for (double p : poles) scale = std::max(scale, std::abs(in_u ? p / k : p));
    }

    std::vector<Complex> roots;
    if (in_u) {
        // The waterbag dispersion is the secular equation of the evolution
        // generator (diagonal plus rank one); its eigenvalues stay accurate
        // for hundreds of tightly clustered contours where the cleared
        // polynomial's coefficients are hopeless.
        Eigen::MatrixXd gen = evolution_generator_real(family.bag(), k);
        Eigen::EigenSolver<Eigen::MatrixXd> es(gen, /*computeEigenvectors=*/false);
        if (es.info() != Eigen::Success) throw Error("evolution eigensolve failed");
        roots.reserve(gen.rows());
        for (int i = 0; i < gen.rows(); ++i) roots.push_back(-es.eigenvalues()[i] / k);
    } else {
        // Rescale the variable toward O(1) before the companion solve.
        Poly num = dispersion_polynomial(family, k);
        roots = poly_roots(poly_stretch(num, scale));
        for (auto& r : roots) r *= scale;
    }

    const bool acoustic = family.kind() == DispersionFamily::Kind::Acoustic;
    std::vector<double> poles_x;  // natural-variable pole positions
    for (double p : dispersion_poles(family, k)) poles_x.push_back(in_u ? p / k : p);

    std::vector<ModeRecord> out;
    out.reserve(roots.size());
    for (Complex x : roots) {
        bool suspect = false;
        if (!acoustic) {
            double pole_dist = 1e300;
            for (double p : poles_x) pole_dist = std::min(pole_dist, std::abs(x - p));
            if (pole_dist < tol.near_pole * std::max(1.0, scale)) {
                suspect = true;  // keep it, flagged; polishing on eps would blow up
            } else {
                // One Newton step on eps itself (companion accuracy is limited
                // by polynomial conditioning, eps is not).
                try {
                    for (int it = 0; it < 3; ++it) {
                        Complex w = in_u ? Complex(k) * x : x;
                        Complex e = eval_dispersion(family, k, w, tol);
                        if (std::abs(e) < 1e-15) break;
                        Complex de = eval_dispersion_deriv(family, k, w, tol);
                        if (in_u) de *= k;  // d eps / du
                        if (std::abs(de) < 1e-14) break;
                        Complex step = e / de;
                        if (std::abs(step) > 0.1 * std::max(1.0, std::abs(x))) break;
                        Complex xn = x - step;
                        double nd = 1e300;
                        for (double p : poles_x) nd = std::min(nd, std::abs(xn - p));
                        if (nd < tol.near_pole * std::max(1.0, scale)) break;
                        Complex wn = in_u ? Complex(k) * xn : xn;
                        if (std::abs(eval_dispersion(family, k, wn, tol)) >= std::abs(e)) break;
                        x = xn;
                    }
                    // Acceptance on eps itself; anything worse stays flagged.
                    Complex w = in_u ? Complex(k) * x : x;
                    if (std::abs(eval_dispersion(family, k, w, tol)) > 10.0 * tol.root_accept)
                        suspect = true;
                } catch (const PoleEvaluationError&) {
                    // Quadratic pole pairs of near-cold species trip the |D|
                    // guard before the plain root-to-pole distance does.
                    suspect = true;
                }
            }
        }
        if (std::abs(x.imag()) <= tol.pair_symmetry * std::max(1.0, std::abs(x.real())))
            x = Complex(x.real(), 0.0);
        ModeRecord m;
        m.k = k;
        m.omega = in_u ? Complex(k) * x : x;
        m.suspect = suspect;
        out.push_back(m);
    }

    // Conjugate symmetrization: the polynomial is real, so pair off-axis roots
    // exactly; averaging removes the last rounding asymmetry.
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (out[i].omega.imag() <= 0.0) continue;
        double best = 1e300;
        std::size_t match = out.size();
        for (std::size_t j = 0; j < out.size(); ++j) {
            if (out[j].omega.imag() >= 0.0) continue;
            double d = std::abs(out[j].omega - std::conj(out[i].omega));
            if (d < best) {
                best = d;
                match = j;
            }
        }
        if (match < out.size() &&
            best <= tol.pair_symmetry * std::max(1.0, std::abs(out[i].omega))) {
            Complex avg = 0.5 * (out[i].omega + std::conj(out[match].omega));
            out[i].omega = avg;
            out[match].omega = std::conj(avg);
        }
    }

    for (auto& m : out) {
        if (m.omega.imag() != 0.0 || m.suspect) continue;
        try {
            SignatureResult s = mode_signature(family, k, m.omega.real(), tol);
            m.signature = s.signature;
            m.energy = s.energy;
        } catch (const NotARootError&) {
            m.suspect = true;
        } catch (const PoleEvaluationError&) {
            m.suspect = true;
        }
    }

    std::sort(out.begin(), out.end(), mode_order);
    return out;
}

}  // namespace krein
