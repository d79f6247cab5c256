#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>

#include "krein/bifurcation.hpp"
#include "krein/dispersion.hpp"
#include "krein/normalform.hpp"
#include "oracles.hpp"

using namespace krein;

namespace {

// All flow eigenvalues must be +/- i times the dispersion roots (as a
// multiset).  Matched by optimal assignment: the eigensolver's 1e-17 real
// jitter on neutral eigenvalues defeats naive lexicographic sorting.
void check_flow_vs_dispersion(const MultiFluidEquilibrium& eq, double k, double tol_abs) {
    QuadraticBlock block = build_block(eq, k);
    SymplecticSpectrum spec = symplectic_spectrum(block);
    std::vector<Complex> flow;
    for (const auto& e : spec.entries) flow.push_back(e.lambda);

    std::vector<Complex> expect;
    for (const auto& m : find_discrete_modes(DispersionFamily::of(eq), k)) {
        expect.push_back(Complex(0.0, -1.0) * m.omega);
        expect.push_back(Complex(0.0, 1.0) * std::conj(m.omega));
    }
    REQUIRE(flow.size() == expect.size());
    std::vector<int> assign = match_spectra(flow, expect);
    for (std::size_t i = 0; i < flow.size(); ++i) {
        REQUIRE(assign[i] >= 0);
        CHECK(std::abs(flow[i] - expect[assign[i]]) <
              tol_abs * std::max(1.0, std::abs(expect[assign[i]])));
    }
}

MultiFluidEquilibrium random_fluid(std::mt19937& rng, Coupling coupling) {
    std::uniform_real_distribution<double> rho(0.2, 1.5), vel(-1.5, 1.5), cs(0.1, 1.4);
    for (;;) {
        FluidSpecies a{rho(rng), vel(rng), cs(rng)};
        FluidSpecies b{rho(rng), vel(rng), cs(rng)};
        // Keep the pole pairs distinct so the cleared polynomial is exact.
        if (std::abs(a.u - b.u) < 0.1) continue;
        return MultiFluidEquilibrium({a, b}, coupling);
    }
}

}  // namespace

TEST_SUITE("normalform") {

TEST_CASE("single fluid at rest: diagonal 2x2 block and sound-speed modes") {
    double rho = 1.0, cs = 2.0, k = 3.0;
    auto eq = MultiFluidEquilibrium::sound(rho, cs);
    QuadraticBlock blk = build_block(eq, k);
    REQUIRE(blk.dof() == 2);
    CHECK(blk.position_matrix(0, 0) == doctest::Approx(0.5 * rho));
    CHECK(blk.position_matrix(1, 1) == doctest::Approx(0.5 * cs * cs / rho));
    CHECK(blk.position_matrix(0, 1) == 0.0);
    CHECK(blk.momentum_matrix(0, 0) == doctest::Approx(2.0 * k * k * cs * cs / rho));
    CHECK(blk.momentum_matrix(1, 1) == doctest::Approx(2.0 * k * k * rho));
    CHECK(blk.momentum_matrix(0, 1) == 0.0);

    NormalFormReport rep = normal_form(blk);
    CHECK(rep.classification == BlockClass::AllStable);
    REQUIRE(rep.modes.size() == 2);
    for (const auto& m : rep.modes) {
        CHECK(std::abs(m.omega - k * cs) < 1e-10);
        CHECK(m.sigma == +1);
    }
}

TEST_CASE("counterstream block matches the displayed matrices at k=1, u_e=0.5") {
    auto eq = MultiFluidEquilibrium::counterstream(0.5);
    CHECK(counterstream_scheme_applies(eq));
    QuadraticBlock blk = build_block(eq, 1.0);  // Auto picks the scaled variables
    // Entries: 1/(2 u_e) = 1, k u_e = 1/2, k^2 u_e/(1+k^2) = 1/4.
    Eigen::MatrixXd m_expect(4, 4), v_expect(4, 4);
    m_expect << 1.0, 0.5, 0.0, 0.0,
                0.5, 0.25, 0.0, 0.25,
                0.0, 0.0, 1.0, -0.5,
                0.0, 0.25, -0.5, 0.25;
    v_expect << 0.25, 0.5, 0.25, 0.0,
                0.5, 1.0, 0.0, 0.0,
                0.25, 0.0, 0.25, -0.5,
                0.0, 0.0, -0.5, 1.0;
    CHECK((blk.momentum_matrix - m_expect).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((blk.position_matrix - v_expect).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("scaled and standard canonizations carry the same spectrum") {
    auto eq = MultiFluidEquilibrium::counterstream(0.9);
    double k = 1.0;
    auto spec_scaled = symplectic_spectrum(build_block(eq, k, BlockScheme::CounterstreamScaled));
    auto spec_std = symplectic_spectrum(build_block(eq, k, BlockScheme::Standard));
    REQUIRE(spec_scaled.entries.size() == spec_std.entries.size());
    for (std::size_t i = 0; i < spec_scaled.entries.size(); ++i) {
        CHECK(std::abs(spec_scaled.entries[i].omega - spec_std.entries[i].omega) < 1e-9);
        CHECK(spec_scaled.entries[i].signature == spec_std.entries[i].signature);
    }
}

TEST_CASE("flow eigenvalues equal +/- i dispersion roots across couplings") {
    std::mt19937 rng(4321);
    std::uniform_real_distribution<double> kd(0.3, 2.5);
    int done = 0;
    while (done < 100) {
        Coupling coupling = done % 3 == 0   ? Coupling::PlasmaShielded
                            : done % 3 == 1 ? Coupling::PlasmaBare
                                            : Coupling::GravitationalJeans;
        check_flow_vs_dispersion(random_fluid(rng, coupling), kd(rng), 1e-8);
        ++done;
    }
    // Sound systems as well, where the dispersion is the product form.
    check_flow_vs_dispersion(MultiFluidEquilibrium::sound(0.8, 1.3), 1.7, 1e-10);
}

TEST_CASE("normal-form signatures equal the dielectric-energy signs") {
    std::mt19937 rng(2718);
    std::uniform_real_distribution<double> kd(0.4, 2.0), ud(1.1, 2.2);
    int checked = 0;
    for (int trial = 0; trial < 40; ++trial) {
        double k = kd(rng);
        double u_e = ud(rng) / std::sqrt(1.0 + k * k);  // stable side
        auto eq = MultiFluidEquilibrium::counterstream(u_e);
        QuadraticBlock blk = build_block(eq, k);
        NormalFormReport rep = normal_form(blk);
        if (rep.classification != BlockClass::AllStable) continue;
        auto family = DispersionFamily::of(eq);
        for (const auto& m : rep.modes) {
            auto sig = mode_signature(family, k, m.omega);
            if (sig.signature == Signature::Marginal) continue;
            CHECK((m.sigma > 0) == (sig.signature == Signature::Positive));
            ++checked;
        }
    }
    CHECK(checked > 100);
}

TEST_CASE("stable counterstream blocks carry doubly degenerate opposite pairs") {
    auto eq = MultiFluidEquilibrium::counterstream(0.9);
    NormalFormReport rep = normal_form(build_block(eq, 1.0));
    REQUIRE(rep.classification == BlockClass::AllStable);
    REQUIRE(rep.modes.size() == 4);
    auto fr = counterstream_frequencies(0.9, 1.0);
    CHECK(std::abs(rep.modes[0].omega - *fr.omega_minus) < 1e-9);
    CHECK(std::abs(rep.modes[1].omega - *fr.omega_minus) < 1e-9);
    CHECK(rep.modes[0].sigma == -1);
    CHECK(rep.modes[1].sigma == -1);
    CHECK(std::abs(rep.modes[2].omega - fr.omega_plus) < 1e-9);
    CHECK(std::abs(rep.modes[3].omega - fr.omega_plus) < 1e-9);
    CHECK(rep.modes[2].sigma == +1);
    CHECK(rep.modes[3].sigma == +1);
}

TEST_CASE("energy is reconstructed through the transformation on random states") {
    std::mt19937 rng(1146);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    auto eq = MultiFluidEquilibrium::counterstream(1.1);
    QuadraticBlock blk = build_block(eq, 0.8);
    NormalFormReport rep = normal_form(blk);
    REQUIRE(rep.classification == BlockClass::AllStable);
    const int dim = 2 * blk.dof();
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(rep.transform);
    for (int trial = 0; trial < 1000; ++trial) {
        Eigen::VectorXd z(dim);
        for (int i = 0; i < dim; ++i) z[i] = unit(rng);
        z.normalize();
        Eigen::VectorXd zz = lu.solve(z);
        double nf = 0.0;
        for (std::size_t m = 0; m < rep.modes.size(); ++m)
            nf += 0.5 * rep.modes[m].sigma * rep.modes[m].omega *
                  (zz[m] * zz[m] + zz[m + blk.dof()] * zz[m + blk.dof()]);
        CHECK(std::abs(block_energy(blk, z) - nf) < 1e-9);
    }
}

TEST_CASE("the marginal counterstream block reports a degenerate zero pair") {
    double k = 1.0;
    auto eq = MultiFluidEquilibrium::counterstream(1.0 / std::sqrt(2.0));
    SymplecticSpectrum spec = symplectic_spectrum(build_block(eq, k));
    CHECK(spec.zero_count > 0);
    CHECK(normal_form(build_block(eq, k)).classification == BlockClass::Degenerate);
}

TEST_CASE("negative compressibility turns both sound pairs into pure growth/decay") {
    // Hand-built block for c_s^2 < 0 (the equilibrium type forbids it).
    double rho = 1.0, cs2 = -0.49, k = 1.0;
    QuadraticBlock blk;
    blk.k = k;
    blk.position_matrix = Eigen::MatrixXd::Zero(2, 2);
    blk.momentum_matrix = Eigen::MatrixXd::Zero(2, 2);
    blk.position_matrix(0, 0) = 0.5 * rho;
    blk.position_matrix(1, 1) = 0.5 * cs2 / rho;
    blk.momentum_matrix(0, 0) = 2.0 * k * k * cs2 / rho;
    blk.momentum_matrix(1, 1) = 2.0 * k * k * rho;
    NormalFormReport rep = normal_form(blk);
    CHECK(rep.classification == BlockClass::UnstablePairs);
    CHECK(rep.unstable_pairs == 2);
    for (const auto& e : symplectic_spectrum(blk).entries)
        CHECK(std::abs(e.lambda.imag()) < 1e-10);  // pure real growth/decay
}

TEST_CASE("positive definite blocks are stable with all positive signatures") {
    std::mt19937 rng(555);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        int n = 2 + trial % 3;
        Eigen::MatrixXd a(n, n), b(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                a(i, j) = unit(rng);
                b(i, j) = unit(rng);
            }
        QuadraticBlock blk;
        blk.k = 1.0;
        blk.position_matrix = a.transpose() * a + 0.3 * Eigen::MatrixXd::Identity(n, n);
        blk.momentum_matrix = b.transpose() * b + 0.3 * Eigen::MatrixXd::Identity(n, n);
        NormalFormReport rep = normal_form(blk);
        CHECK(rep.classification == BlockClass::AllStable);
        for (const auto& m : rep.modes) CHECK(m.sigma == +1);
    }
}

TEST_CASE("frame shifts move frequencies, keep signatures, and detect zeroes") {
    auto eq = MultiFluidEquilibrium::counterstream(0.9);
    NormalFormReport rep = normal_form(build_block(eq, 1.0));
    REQUIRE(rep.classification == BlockClass::AllStable);

    NormalFormReport same = galilean_shift(rep, 0.0);
    for (std::size_t i = 0; i < rep.modes.size(); ++i) {
        CHECK(same.modes[i].omega == rep.modes[i].omega);
        CHECK(same.modes[i].sigma == rep.modes[i].sigma);
    }

    double shift = 0.37;
    NormalFormReport round_trip = galilean_shift(galilean_shift(rep, shift), -shift);
    for (std::size_t i = 0; i < rep.modes.size(); ++i)
        CHECK(round_trip.modes[i].omega == doctest::Approx(rep.modes[i].omega).epsilon(1e-14));

    double omega_fast = rep.modes.back().omega;
    NormalFormReport shifted = galilean_shift(rep, omega_fast);
    CHECK(shifted.classification == BlockClass::Degenerate);
    CHECK(std::abs(shifted.modes.back().omega) < 1e-12);
    CHECK(shifted.modes.back().sigma == rep.modes.back().sigma);
}

}  // TEST_SUITE
