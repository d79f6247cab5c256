#include "krein/normalform.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace krein {

namespace {

Eigen::MatrixXd poisson_matrix(int n) {
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    j.topRightCorner(n, n) = Eigen::MatrixXd::Identity(n, n);
    j.bottomLeftCorner(n, n) = -Eigen::MatrixXd::Identity(n, n);
    return j;
}

QuadraticBlock counterstream_scaled_block(double u_e, double k) {
    // The symmetric cold two-beam block in the sqrt(u_e)-scaled canonical
    // variables; entries are functions of k and u_e only.
    double a = 1.0 / (2.0 * u_e);
    double b = k * u_e;
    double g = k * k * u_e / (1.0 + k * k);
    QuadraticBlock blk;
    blk.k = k;
    blk.momentum_matrix.resize(4, 4);
    blk.momentum_matrix << a, b, 0, 0,
                           b, g, 0, g,
                           0, 0, a, -b,
                           0, g, -b, g;
    blk.position_matrix.resize(4, 4);
    blk.position_matrix << g, b, g, 0,
                           b, a, 0, 0,
                           g, 0, g, -b,
                           0, 0, -b, a;
    return blk;
}

struct ModeGroup {
    double omega = 0.0;                    // representative frequency, > 0
    std::vector<int> eig_indices;          // indices of the +i omega eigenvalues
    std::vector<Eigen::VectorXcd> basis;   // Gram-diagonalized eigenvectors
    std::vector<double> pairing;           // h(w, w) per basis vector
    bool defective = false;
    bool singular_pairing = false;
};

struct SpectrumWork {
    Eigen::VectorXcd eigenvalues;
    Eigen::MatrixXcd eigenvectors;
    std::vector<ModeGroup> groups;
    double omega_scale = 1.0;
    double zero_tol = 0.0;
    int unstable_count = 0;
    int zero_count = 0;
    bool defective = false;
};

void check_symmetric(const Eigen::MatrixXd& m, double tol, const char* name) {
    double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > tol * scale)
        throw Error(std::string("quadratic block matrix not symmetric: ") + name);
}

SpectrumWork analyze_block(const QuadraticBlock& block, const Tolerances& tol) {
    const int n = block.dof();
    if (n == 0 || block.momentum_matrix.rows() != n || block.momentum_matrix.cols() != n ||
        block.position_matrix.cols() != n)
        throw Error("quadratic block has inconsistent dimensions");
    check_symmetric(block.momentum_matrix, tol.matrix_symmetry, "momentum");
    check_symmetric(block.position_matrix, tol.matrix_symmetry, "position");

    Eigen::MatrixXd flow = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    flow.topRightCorner(n, n) = block.momentum_matrix;    // dq/dt = M p
    flow.bottomLeftCorner(n, n) = -block.position_matrix; // dp/dt = -V q

    Eigen::EigenSolver<Eigen::MatrixXd> es(flow);
    if (es.info() != Eigen::Success) throw Error("flow eigensolve failed");

    SpectrumWork w;
    w.eigenvalues = es.eigenvalues();
    w.eigenvectors = es.eigenvectors();
    for (int i = 0; i < 2 * n; ++i)
        w.omega_scale = std::max(w.omega_scale, std::abs(w.eigenvalues[i]));
    w.zero_tol = tol.axis_departure * std::max(1.0, w.omega_scale);

    std::vector<std::pair<double, int>> neutral;  // (omega > 0, eigen index)
    for (int i = 0; i < 2 * n; ++i) {
        Complex lam = w.eigenvalues[i];
        if (std::abs(lam) <= w.zero_tol) {
            ++w.zero_count;
        } else if (std::abs(lam.real()) <= w.zero_tol) {
            if (lam.imag() > 0.0) neutral.push_back({lam.imag(), i});
        } else if (lam.real() > w.zero_tol) {
            ++w.unstable_count;
        }
    }
    std::sort(neutral.begin(), neutral.end());

    const Eigen::MatrixXd jmat = poisson_matrix(n);
    const Complex minus_i(0.0, -1.0);

    std::size_t at = 0;
    while (at < neutral.size()) {
        ModeGroup grp;
        grp.omega = neutral[at].first;
        grp.eig_indices.push_back(neutral[at].second);
        std::size_t next = at + 1;
        while (next < neutral.size() &&
               neutral[next].first - neutral[next - 1].first <=
                   tol.degenerate_gap * std::max(1.0, grp.omega)) {
            grp.eig_indices.push_back(neutral[next].second);
            ++next;
        }
        const int m = static_cast<int>(grp.eig_indices.size());

        if (m > 1) {
            // Rank test of (flow - i omega I): geometric < algebraic means a
            // genuine Jordan block at the collision.
            Eigen::MatrixXcd shifted = flow.cast<Complex>();
            for (int d = 0; d < 2 * n; ++d) shifted(d, d) -= Complex(0.0, grp.omega);
            Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(shifted);
            qr.setThreshold(tol.jordan_rank * std::max(1.0, w.omega_scale));
            if (qr.rank() > 2 * n - m) grp.defective = true;
        }

        if (!grp.defective) {
            // Hermitian pairing h(v, w) = v^H (-iJ) w restricted to the group;
            // its eigenvectors give symplectically orthogonal modes and its
            // eigenvalue signs are the signatures.
            Eigen::MatrixXcd vecs(2 * n, m);
            for (int c = 0; c < m; ++c) vecs.col(c) = w.eigenvectors.col(grp.eig_indices[c]);
            Eigen::MatrixXcd gram = vecs.adjoint() * (minus_i * jmat.cast<Complex>()) * vecs;
            gram = 0.5 * (gram + gram.adjoint().eval());
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ges(gram);
            double gscale = std::max(1.0, gram.cwiseAbs().maxCoeff());
            for (int c = 0; c < m; ++c) {
                double g = ges.eigenvalues()[c];
                if (std::abs(g) < 1e-10 * gscale) {
                    grp.singular_pairing = true;
                    continue;
                }
                grp.basis.push_back(vecs * ges.eigenvectors().col(c));
                grp.pairing.push_back(g);
            }
            if (grp.basis.size() != static_cast<std::size_t>(m)) grp.singular_pairing = true;
        }
        if (grp.defective) w.defective = true;
        w.groups.push_back(std::move(grp));
        at = next;
    }
    return w;
}

}  // namespace

double block_energy(const QuadraticBlock& block, const Eigen::VectorXd& z) {
    const int n = block.dof();
    Eigen::VectorXd q = z.head(n), p = z.tail(n);
    return 0.5 * (q.dot(block.position_matrix * q) + p.dot(block.momentum_matrix * p));
}

bool counterstream_scheme_applies(const MultiFluidEquilibrium& eq) {
    if (eq.coupling() != Coupling::PlasmaShielded || eq.size() != 2) return false;
    const auto& s = eq.species();
    auto near = [](double a, double b) { return std::abs(a - b) < 1e-12; };
    return near(s[0].rho, 0.5) && near(s[1].rho, 0.5) && near(s[0].c_s, 0.0) &&
           near(s[1].c_s, 0.0) && s[0].u > 0.0 && near(s[0].u, -s[1].u);
}

QuadraticBlock build_block(const MultiFluidEquilibrium& eq, double k, BlockScheme scheme,
                           const Tolerances&) {
    if (!(k > 0.0)) throw Error("build_block: wavenumber must be positive");
    if (scheme == BlockScheme::Auto)
        scheme = counterstream_scheme_applies(eq) ? BlockScheme::CounterstreamScaled
                                                  : BlockScheme::Standard;
    if (scheme == BlockScheme::CounterstreamScaled) {
        if (!counterstream_scheme_applies(eq))
            throw Error("counterstream block scheme needs the symmetric cold two-beam system");
        return counterstream_scaled_block(eq.species()[0].u, k);
    }

    const auto& sp = eq.species();
    const int m = static_cast<int>(sp.size());
    QuadraticBlock blk;
    blk.k = k;
    blk.position_matrix = Eigen::MatrixXd::Zero(2 * m, 2 * m);
    blk.momentum_matrix = Eigen::MatrixXd::Zero(2 * m, 2 * m);

    // Per species a: q-pair (velocity-like, density-like) at (2a, 2a+1) and
    // the matching p-pair.  The coupling field touches only the density-like
    // coordinates q2 and their conjugates p1.
    for (int a = 0; a < m; ++a) {
        double rho = sp[a].rho, u = sp[a].u, c = sp[a].c_s;
        blk.position_matrix(2 * a, 2 * a) = 0.5 * rho;
        blk.position_matrix(2 * a, 2 * a + 1) = 0.5 * u;
        blk.position_matrix(2 * a + 1, 2 * a) = 0.5 * u;
        blk.position_matrix(2 * a + 1, 2 * a + 1) = 0.5 * c * c / rho;
        blk.momentum_matrix(2 * a, 2 * a) = 2.0 * k * k * c * c / rho;
        blk.momentum_matrix(2 * a, 2 * a + 1) = 2.0 * k * k * u;
        blk.momentum_matrix(2 * a + 1, 2 * a) = 2.0 * k * k * u;
        blk.momentum_matrix(2 * a + 1, 2 * a + 1) = 2.0 * k * k * rho;
    }
    double vq = 0.0, mp = 0.0;
    switch (eq.coupling()) {
        case Coupling::PlasmaShielded:
            vq = 0.5 / (1.0 + k * k);
            mp = 2.0 * k * k / (1.0 + k * k);
            break;
        case Coupling::PlasmaBare:
            vq = 0.5 / (k * k);
            mp = 2.0;
            break;
        case Coupling::GravitationalJeans:
            vq = -0.5 / (k * k);
            mp = -2.0;
            break;
        case Coupling::Acoustic: break;
    }
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            blk.position_matrix(2 * a + 1, 2 * b + 1) += vq;
            blk.momentum_matrix(2 * a, 2 * b) += mp;
        }
    return blk;
}

SymplecticSpectrum symplectic_spectrum(const QuadraticBlock& block, const Tolerances& tol) {
    SpectrumWork w = analyze_block(block, tol);
    SymplecticSpectrum out;
    out.defective = w.defective;
    out.unstable_count = w.unstable_count;
    out.zero_count = w.zero_count;

    std::vector<bool> handled(w.eigenvalues.size(), false);
    for (const auto& grp : w.groups) {
        for (std::size_t j = 0; j < grp.eig_indices.size(); ++j) {
            handled[grp.eig_indices[j]] = true;
            Signature sig = Signature::Marginal;
            if (!grp.defective && !grp.singular_pairing)
                sig = grp.pairing[j] > 0.0 ? Signature::Positive : Signature::Negative;
            Complex lam = w.eigenvalues[grp.eig_indices[j]];
            // The +i omega eigenvalue and its conjugate carry the same sign.
            out.entries.push_back({lam, Complex(0.0, 1.0) * lam, sig});
            out.entries.push_back({std::conj(lam), Complex(0.0, 1.0) * std::conj(lam), sig});
        }
    }
    for (int i = 0; i < static_cast<int>(w.eigenvalues.size()); ++i) {
        if (handled[i]) continue;
        Complex lam = w.eigenvalues[i];
        // Conjugates of grouped neutral eigenvalues were mirrored above.
        if (std::abs(lam.real()) <= w.zero_tol && std::abs(lam) > w.zero_tol) continue;
        out.entries.push_back({lam, Complex(0.0, 1.0) * lam, Signature::Marginal});
    }
    std::sort(out.entries.begin(), out.entries.end(), [](const auto& a, const auto& b) {
        return complex_order(a.omega, b.omega);
    });
    return out;
}

NormalFormReport normal_form(const QuadraticBlock& block, const Tolerances& tol) {
    SpectrumWork w = analyze_block(block, tol);
    const int n = block.dof();

    NormalFormReport rep;
    rep.defective = w.defective;
    rep.unstable_pairs = w.unstable_count;

    for (const auto& grp : w.groups)
        for (std::size_t j = 0; j < grp.basis.size(); ++j)
            rep.modes.push_back({grp.omega, grp.pairing[j] > 0.0 ? +1 : -1});
    std::sort(rep.modes.begin(), rep.modes.end(), [](const NormalMode& a, const NormalMode& b) {
        if (a.omega != b.omega) return a.omega < b.omega;
        return a.sigma < b.sigma;
    });

    bool singular = w.defective;
    for (const auto& grp : w.groups) singular = singular || grp.singular_pairing;

    if (w.zero_count > 0 || singular) {
        rep.classification = BlockClass::Degenerate;
        return rep;
    }
    if (w.unstable_count > 0) {
        rep.classification = BlockClass::UnstablePairs;
        return rep;
    }
    if (static_cast<int>(rep.modes.size()) != n) {
        rep.classification = BlockClass::Degenerate;
        return rep;
    }

    // Assemble the diagonalizing transformation column by column.
    rep.classification = BlockClass::AllStable;
    rep.transform.resize(2 * n, 2 * n);
    int col = 0;
    std::vector<std::pair<double, int>> order;  // sort columns like rep.modes
    std::vector<Eigen::VectorXd> qa(n), pb(n);
    std::vector<int> sigma(n);
    for (const auto& grp : w.groups) {
        for (std::size_t j = 0; j < grp.basis.size(); ++j) {
            Eigen::VectorXd a = grp.basis[j].real();
            Eigen::VectorXd b = grp.basis[j].imag();
            double pairing = 0.5 * grp.pairing[j];  // = a^T J b
            double s = std::sqrt(std::abs(pairing));
            qa[col] = a / s;
            pb[col] = (pairing > 0.0 ? 1.0 : -1.0) * b / s;
            sigma[col] = pairing > 0.0 ? +1 : -1;
            order.push_back({grp.omega, col});
            ++col;
        }
    }
    std::sort(order.begin(), order.end());
    rep.modes.clear();
    for (int m = 0; m < n; ++m) {
        rep.transform.col(m) = qa[order[m].second];
        rep.transform.col(n + m) = pb[order[m].second];
        rep.modes.push_back({order[m].first, sigma[order[m].second]});
    }

    // Deterministic probe states confirm the claimed congruence.
    Eigen::MatrixXd jm = poisson_matrix(n);
    double sympl_err = (rep.transform * jm * rep.transform.transpose() - jm).cwiseAbs().maxCoeff();
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(rep.transform);
    double residual = sympl_err;
    unsigned state = 0x9e3779b9u;
    auto next_unit = [&state](int dim) {
        Eigen::VectorXd v(dim);
        for (int i = 0; i < dim; ++i) {
            state = state * 1664525u + 1013904223u;
            v[i] = (state >> 9) * (1.0 / (1u << 23)) - 1.0;
        }
        v.normalize();
        return v;
    };
    for (int probe = 0; probe < 64; ++probe) {
        Eigen::VectorXd z = next_unit(2 * n);
        Eigen::VectorXd zz = lu.solve(z);
        double nf = 0.0;
        for (int m = 0; m < n; ++m)
            nf += 0.5 * sigma[order[m].second] * order[m].first *
                  (zz[m] * zz[m] + zz[n + m] * zz[n + m]);
        residual = std::max(residual, std::abs(block_energy(block, z) - nf));
    }
    rep.congruence_residual = residual;
    double h_scale = 1.0 + std::max(block.position_matrix.cwiseAbs().maxCoeff(),
                                    block.momentum_matrix.cwiseAbs().maxCoeff());
    if (residual > 1e-6 * h_scale)
        throw Error("normal form congruence check failed");
    return rep;
}

NormalFormReport galilean_shift(const NormalFormReport& report, double omega_star,
                                const Tolerances& tol) {
    NormalFormReport out = report;
    double scale = 1.0;
    for (auto& m : out.modes) {
        m.omega -= omega_star;
        scale = std::max(scale, std::abs(m.omega));
    }
    if (out.classification == BlockClass::AllStable) {
        for (const auto& m : out.modes)
            if (std::abs(m.omega) <= tol.degenerate_gap * scale)
                out.classification = BlockClass::Degenerate;
    }
    return out;
}

}  // namespace krein
