// Acceptance suite: one pass/fail line per criterion, exit code = failures.

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <vector>

#include "krein/bifurcation.hpp"
#include "krein/dispersion.hpp"
#include "krein/normalform.hpp"
#include "krein/penrose.hpp"
#include "oracles.hpp"

using namespace krein;

namespace {

struct Harness {
    int failures = 0;
    int index = 0;

    void run(const char* title, const std::function<bool()>& body) {
        ++index;
        auto t0 = std::chrono::steady_clock::now();
        bool ok = false;
        std::string note;
        try {
            ok = body();
        } catch (const std::exception& e) {
            note = std::string(" [exception: ") + e.what() + "]";
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s  criterion %2d: %s (%.2f s)%s\n", ok ? "PASS" : "FAIL", index, title,
                    secs, note.c_str());
        if (!ok) ++failures;
    }
};

bool all_real(const std::vector<ModeRecord>& modes) {
    for (const auto& m : modes)
        if (m.omega.imag() != 0.0) return false;
    return true;
}

WaterbagEquilibrium stable_random_bag(std::mt19937& rng, int max_contours) {
    std::uniform_int_distribution<int> shape(0, 3);
    for (int attempt = 0; attempt < 400; ++attempt) {
        int pick = shape(rng);
        WaterbagEquilibrium bag = pick == 0 ? oracles::random_bag(rng, 4, max_contours)
                                            : oracles::random_onion(rng, 1 + pick);
        if (static_cast<int>(bag.size()) > max_contours) continue;
        auto modes = find_discrete_modes(DispersionFamily::of(bag), 1.0);
        bool suspect = false;
        for (const auto& m : modes) suspect = suspect || m.suspect;
        if (!suspect && all_real(modes)) return bag;
    }
    throw Error("no stable bag found");
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = lo + (hi - lo) * i / (n - 1);
    return g;
}

bool criterion_sound() {
    for (double cs : {0.5, 1.0, 2.0}) {
        for (int k = 1; k <= 10; ++k) {
            auto rep = normal_form(build_block(MultiFluidEquilibrium::sound(1.0, cs), k));
            if (rep.classification != BlockClass::AllStable) return false;
            if (rep.modes.size() != 2) return false;
            for (const auto& m : rep.modes) {
                if (std::abs(m.omega - k * cs) > 1e-10) return false;
                if (m.sigma != +1) return false;
            }
        }
    }
    return true;
}

bool criterion_counterstream() {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> kd(0.1, 5.0), ud(0.05, 2.0);
    for (int trial = 0; trial < 100; ++trial) {
        double k = kd(rng), u_e = ud(rng);
        auto modes = find_discrete_modes(DispersionFamily::of(
                                             MultiFluidEquilibrium::counterstream(u_e)),
                                         k);
        auto expect = oracles::counterstream_roots(u_e, k);
        if (modes.size() != expect.size()) return false;
        std::sort(expect.begin(), expect.end(), complex_order);
        for (std::size_t i = 0; i < modes.size(); ++i)
            if (std::abs(modes[i].omega - expect[i]) > 1e-10) return false;
    }
    for (double k : {0.5, 1.0, 2.0}) {
        double u_star = 1.0 / std::sqrt(1.0 + k * k);
        SweepSpec spec;
        spec.system = SweepSystem::of(MultiFluidEquilibrium::counterstream(1.0));
        spec.control = "stream_speed";
        spec.grid = linspace(0.4 * u_star, 1.7 * u_star, 15);
        spec.k = k;
        SweepResult res = sweep(spec);
        if (res.events.size() != 1) return false;
        if (std::abs(res.events[0].param - u_star) > 1e-6) return false;
        if (res.events[0].kind != BifurcationEvent::Kind::SS) return false;
    }
    return true;
}

bool criterion_jeans() {
    auto family = DispersionFamily::of(MultiFluidEquilibrium::jeans(0.0, 0.0, 1.0, 1.0));
    for (double k : linspace(0.1, 3.0, 59)) {
        auto modes = find_discrete_modes(family, k);
        if (modes.size() != 2) return false;
        double target = k * k - 1.0;
        for (const auto& m : modes) {
            Complex w2 = m.omega * m.omega;
            if (std::abs(w2 - Complex(target, 0.0)) > 1e-10) return false;
        }
    }
    SweepSpec spec;
    spec.system = SweepSystem::of(MultiFluidEquilibrium::jeans(0.0, 0.0, 1.0, 1.0));
    spec.control = "k";
    spec.grid = linspace(0.4, 1.6, 13);
    SweepResult res = sweep(spec);
    if (res.events.size() != 1) return false;
    if (std::abs(res.events[0].param - 1.0) > 1e-6) return false;
    return res.events[0].kind == BifurcationEvent::Kind::SS;
}

bool criterion_penrose_maxwellian() {
    auto profile = DistributionProfile::maxwellian();
    for (double k : {0.3, 0.5, 1.0, 2.0}) {
        ContourSpec coarse, fine;
        fine.base_points = 2 * coarse.base_points - 1;
        int w1 = winding_number(penrose_contour(profile, k, coarse));
        int w2 = winding_number(penrose_contour(profile, k, fine));
        if (w1 != 0 || w2 != 0) return false;
    }
    return true;
}

bool criterion_chh_threshold() {
    double k = 0.5;
    auto family = [](double c) { return DistributionProfile::bi_maxwellian(c); };
    ContourSpec coarse, fine;
    fine.base_points = 2 * coarse.base_points - 1;
    double c1 = critical_parameter(family, k, {0.3, 3.0}, coarse);
    double c2 = critical_parameter(family, k, {0.3, 3.0}, fine);
    if (std::abs(c1 - c2) > 1e-5) return false;
    if (classify_stability(family(c1), k).kind != StabilityResult::Kind::Marginal) return false;
    auto above = classify_stability(family(c1 + 0.2), k, coarse);
    if (above.kind != StabilityResult::Kind::Unstable || above.unstable_count != 1) return false;
    auto roots = unstable_roots(family(c1 + 0.2), k);
    return static_cast<int>(roots.size()) == above.unstable_count;
}

bool criterion_energy_identity() {
    std::mt19937 rng(8080);
    for (int bag_n = 0; bag_n < 100; ++bag_n) {
        auto bag = stable_random_bag(rng, 16);
        for (const auto& rec : locate_interval_roots(bag, 1.0))
            for (double u : rec.roots) {
                double a = mode_energy(bag, 1.0, u);
                double b = mode_energy_closed_form(bag, 1.0, u);
                if (std::abs(a - b) > 1e-9 * std::max(1.0, std::abs(b))) return false;
            }
    }
    return true;
}

bool criterion_signature_rule() {
    std::mt19937 rng(8080);  // the same ensemble as the identity criterion
    int checked = 0;
    for (int bag_n = 0; bag_n < 100; ++bag_n) {
        auto bag = stable_random_bag(rng, 16);
        const auto& c = bag.contours();
        const auto& j = bag.jumps();
        for (const auto& rec : locate_interval_roots(bag, 1.0)) {
            if (!rec.same_sign_jumps || rec.roots.size() != 1) continue;
            std::size_t i = rec.interval;
            if (c[i - 1] * c[i] <= 0.0) continue;
            double energy = mode_energy(bag, 1.0, rec.roots[0]);
            if (std::abs(energy) < 1e-9) continue;
            double expected = -((c[i - 1] > 0.0 ? 1.0 : -1.0) * (j[i - 1] > 0.0 ? 1.0 : -1.0));
            if ((energy > 0.0) != (expected > 0.0)) return false;
            ++checked;
        }
    }
    return checked > 50;
}

bool criterion_matrix_equivalence() {
    std::mt19937 rng(5150);
    for (int m_target : {4, 8, 16, 32}) {
        WaterbagEquilibrium bag = [&] {
            for (;;) {
                auto b = oracles::random_onion(rng, m_target / 2);
                if (static_cast<int>(b.size()) == m_target) return b;
            }
        }();
        double k = 0.9;
        Eigen::MatrixXd gen = evolution_generator_real(bag, k);
        Eigen::EigenSolver<Eigen::MatrixXd> es(gen);
        std::vector<Complex> eig;
        for (int i = 0; i < gen.rows(); ++i)
            eig.push_back(Complex(0.0, 1.0) * es.eigenvalues()[i]);  // A = iB
        std::vector<Complex> expect;
        for (const auto& m : find_discrete_modes(DispersionFamily::of(bag), k))
            expect.push_back(Complex(0.0, -1.0) * m.omega);  // -ik u
        std::sort(eig.begin(), eig.end(), complex_order);
        std::sort(expect.begin(), expect.end(), complex_order);
        if (eig.size() != expect.size()) return false;
        for (std::size_t i = 0; i < eig.size(); ++i)
            if (std::abs(eig[i] - expect[i]) > 1e-8 * std::max(1.0, std::abs(expect[i])))
                return false;
    }
    return true;
}

bool criterion_two_stream_hh() {
    SweepSpec spec;
    spec.system = SweepSystem::of(oracles::two_stream_bag(3.0));
    spec.control = "separation";
    spec.grid = linspace(3.2, 1.4, 19);
    spec.k = 1.0;
    SweepResult res = sweep(spec);
    if (res.events.size() != 1) return false;
    const auto& ev = res.events[0];
    if (ev.kind != BifurcationEvent::Kind::HH) return false;
    if (ev.signature_unavailable || ev.krein_violation) return false;
    bool opposite = (ev.pre_signatures[0] == Signature::Positive &&
                     ev.pre_signatures[1] == Signature::Negative) ||
                    (ev.pre_signatures[0] == Signature::Negative &&
                     ev.pre_signatures[1] == Signature::Positive);
    if (!opposite) return false;
    auto [fam_post, k_post] = realize(spec, ev.param - 1e-3);
    bool off_axis = false;
    for (const auto& m : find_discrete_modes(fam_post, k_post))
        if (std::abs(m.omega.imag()) > 1e-6) off_axis = true;
    return off_axis;
}

bool criterion_krein_audit() {
    auto generator = [](std::mt19937& rng) {
        return SweepSystem::of(oracles::random_bag(rng, 4, 8));
    };
    KreinAuditReport report = krein_audit(generator, "k", {0.3, 3.0}, 21, 200, 20260810u);
    return report.systems == 200 && report.violations == 0;
}

bool criterion_onion_convergence() {
    double k = 0.5, c = 1.5;
    auto profile = DistributionProfile::bi_maxwellian(c);
    auto vlasov = unstable_roots(profile, k);
    if (vlasov.size() != 1) return false;
    double target = k * vlasov[0].imag();
    std::vector<double> errs;
    for (int m : {8, 16, 32, 64}) {
        auto bag = discretize_distribution(profile, m, {-9.5, 9.5});
        double growth = 0.0;
        for (const auto& mode : find_discrete_modes(DispersionFamily::of(bag), k))
            growth = std::max(growth, mode.omega.imag());
        errs.push_back(std::abs(growth - target));
    }
    // Decreasing error from M = 16 onward, ending below 5 percent.
    if (!(errs[2] <= errs[1])) return false;
    if (!(errs[3] <= errs[2])) return false;
    return errs[3] / target < 0.05;
}

}  // namespace

int main() {
    Harness h;
    h.run("sound waves: omega = k c_s, positive signature, multiplicity 2", criterion_sound);
    h.run("counterstream closed form + zero-frequency onset at 1/sqrt(1+k^2)",
          criterion_counterstream);
    h.run("Jeans degenerate branch omega^2 = k^2 - 1 with onset at k = 1", criterion_jeans);
    h.run("Maxwellian Penrose winding 0, refinement-invariant", criterion_penrose_maxwellian);
    h.run("bi-Maxwellian threshold: converged, marginal at c*, one root above",
          criterion_chh_threshold);
    h.run("waterbag dielectric-energy identity on 100 random stable bags",
          criterion_energy_identity);
    h.run("waterbag signature rule -sgn(p0 df), zero violations", criterion_signature_rule);
    h.run("evolution-matrix eigenvalues = -ik (dispersion roots), M in {4,8,16,32}",
          criterion_matrix_equivalence);
    h.run("five-layer two-stream: exactly one opposite-signature Krein collision",
          criterion_two_stream_hh);
    h.run("Krein audit: 200 random bags, no equal-signature onsets", criterion_krein_audit);
    h.run("onion growth rates converge to the kinetic rate (<5% at M=64)",
          criterion_onion_convergence);
    std::printf("%d of %d criteria passed\n", h.index - h.failures, h.index);
    return h.failures;
}
