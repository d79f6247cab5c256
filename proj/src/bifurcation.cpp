#include "krein/bifurcation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

namespace krein {

namespace {

bool all_neutral(const std::vector<ModeRecord>& modes, const Tolerances& tol) {
    for (const auto& m : modes)
        if (std::abs(m.omega.imag()) > tol.axis_departure * std::max(1.0, std::abs(m.omega)))
            return false;
    return true;
}

std::vector<Complex> complex_pairs_off_axis(const std::vector<ModeRecord>& modes,
                                            const Tolerances& tol) {
    std::vector<Complex> up;
    for (const auto& m : modes)
        if (m.omega.imag() > tol.axis_departure * std::max(1.0, std::abs(m.omega)))
            up.push_back(m.omega);
    return up;
}

// Rigid shift of the last vacuum-separated contour group.
WaterbagEquilibrium with_separation(const WaterbagEquilibrium& wb, double separation) {
    const auto& c = wb.contours();
    const auto& lv = wb.levels();
    std::vector<std::vector<std::size_t>> groups(1);
    groups[0].push_back(0);
    for (std::size_t i = 1; i < c.size(); ++i) {
        if (lv[i] == 0.0) groups.emplace_back();  // vacuum layer below contour i
        groups.back().push_back(i);
    }
    if (groups.size() < 2)
        throw Error("separation control needs at least two vacuum-separated contour groups");
    auto center = [&](const std::vector<std::size_t>& g) {
        double s = 0.0;
        for (std::size_t i : g) s += c[i];
        return s / g.size();
    };
    double current = center(groups.back()) - center(groups.front());
    double shift = separation - current;
    std::vector<double> moved = c;
    for (std::size_t i : groups.back()) moved[i] += shift;
    return WaterbagEquilibrium(std::move(moved), lv);
}

MultiFluidEquilibrium with_stream_speed(const MultiFluidEquilibrium& mf, double speed) {
    if (!(speed > 0.0)) throw Error("stream_speed control must stay positive");
    std::vector<FluidSpecies> sp = mf.species();
    bool any = false;
    for (auto& s : sp) {
        if (s.u > 0.0) {
            s.u = speed;
            any = true;
        } else if (s.u < 0.0) {
            s.u = -speed;
            any = true;
        }
    }
    if (!any) throw Error("stream_speed control: no streaming species");
    return MultiFluidEquilibrium(std::move(sp), mf.coupling());
}

}  // namespace

SweepSystem SweepSystem::of(const MultiFluidEquilibrium& mf) {
    SweepSystem s;
    s.kind = Kind::MultiFluid;
    s.fluid = mf;
    return s;
}

SweepSystem SweepSystem::of(const WaterbagEquilibrium& wb) {
    SweepSystem s;
    s.kind = Kind::Waterbag;
    s.bag = wb;
    return s;
}

std::pair<DispersionFamily, double> realize(const SweepSpec& spec, double value) {
    double k = spec.control == "k" ? value : spec.k;
    if (spec.system.kind == SweepSystem::Kind::MultiFluid) {
        if (spec.control == "k")
            return {DispersionFamily::of(*spec.system.fluid), k};
        if (spec.control == "stream_speed")
            return {DispersionFamily::of(with_stream_speed(*spec.system.fluid, value)), k};
        throw ConfigError("control '" + spec.control + "' is not valid for a multifluid system");
    }
    if (spec.control == "k") return {DispersionFamily::of(*spec.system.bag), k};
    if (spec.control == "separation")
        return {DispersionFamily::of(with_separation(*spec.system.bag, value)), k};
    throw ConfigError("control '" + spec.control + "' is not valid for a waterbag system");
}

// Assignment by the standard potential/augmenting-path method (square cost).
std::vector<int> match_spectra(const std::vector<Complex>& from, const std::vector<Complex>& to) {
    const int n = static_cast<int>(std::max(from.size(), to.size()));
    if (n == 0) return {};
    const double big = 1e30;
    auto cost = [&](int i, int j) -> double {
        if (i >= static_cast<int>(from.size()) || j >= static_cast<int>(to.size())) return big;
        return std::abs(from[i] - to[j]);
    };
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, n), way(n + 1, 0);
    for (int i = 0; i < n; ++i) {
        p[n] = i;
        int j0 = n;
        std::vector<double> minv(n + 1, std::numeric_limits<double>::infinity());
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            int i0 = p[j0], j1 = -1;
            double delta = std::numeric_limits<double>::infinity();
            for (int j = 0; j < n; ++j) {
                if (used[j]) continue;
                double cur = cost(i0, j) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != n);
        do {
            int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != n);
    }
    std::vector<int> match(from.size(), -1);
    for (int j = 0; j < n; ++j)
        if (p[j] < static_cast<int>(from.size()) && j < static_cast<int>(to.size()))
            match[p[j]] = j;
    return match;
}

std::optional<BifurcationEvent> classify_event(const std::vector<ModeRecord>& pre_modes,
                                               const std::vector<ModeRecord>& post_modes,
                                               double collision_frequency,
                                               const Tolerances& tol) {
    BifurcationEvent ev;
    std::vector<Complex> newly = complex_pairs_off_axis(post_modes, tol);
    ev.multiplicity = std::max<int>(1, static_cast<int>(newly.size()));
    ev.colliding_frequency = collision_frequency;

    double freq_scale = 1.0;
    for (const auto& m : pre_modes) freq_scale = std::max(freq_scale, std::abs(m.omega));
    const bool zero_freq = std::abs(collision_frequency) < tol.collision_freq * freq_scale;

    // Post-collision structure: a pure growing/decaying pair keeps Re omega = 0.
    ev.post_structure = BifurcationEvent::Post::Doublet;
    for (const Complex& w : newly)
        if (std::abs(w.real()) > tol.collision_freq * freq_scale)
            ev.post_structure = BifurcationEvent::Post::Quartet;

    if (zero_freq) {
        ev.kind = BifurcationEvent::Kind::SS;
        ev.colliding_frequency = 0.0;
    } else {
        ev.kind = BifurcationEvent::Kind::HH;
    }

    // The colliding pair: the two neutral pre-modes closest to the collision
    // frequency (for SS this finds the +/- pair through the origin).
    std::vector<const ModeRecord*> neutral;
    for (const auto& m : pre_modes)
        if (std::abs(m.omega.imag()) <= tol.axis_departure * std::max(1.0, std::abs(m.omega)))
            neutral.push_back(&m);
    std::sort(neutral.begin(), neutral.end(), [&](const ModeRecord* a, const ModeRecord* b) {
        return std::abs(a->omega.real() - collision_frequency) <
               std::abs(b->omega.real() - collision_frequency);
    });
    if (neutral.size() >= 2) {
        ev.pre_signatures[0] = neutral[0]->signature;
        ev.pre_signatures[1] = neutral[1]->signature;
    } else {
        ev.signature_unavailable = true;
    }
    if (ev.pre_signatures[0] == Signature::Marginal ||
        ev.pre_signatures[1] == Signature::Marginal)
        ev.signature_unavailable = true;

    if (ev.kind == BifurcationEvent::Kind::HH && !ev.signature_unavailable) {
        bool opposite = (ev.pre_signatures[0] == Signature::Positive &&
                         ev.pre_signatures[1] == Signature::Negative) ||
                        (ev.pre_signatures[0] == Signature::Negative &&
                         ev.pre_signatures[1] == Signature::Positive);
        if (!opposite) {
            // Without an instability this is an avoided crossing, not an event.
            if (newly.empty()) return std::nullopt;
            ev.krein_violation = true;  // onset observed: flag for the audit
        }
    }
    return ev;
}

SweepResult sweep(const SweepSpec& spec, const Tolerances& tol, int threads) {
    if (spec.grid.size() < 3) throw ConfigError("sweep grid needs at least 3 points");
    bool inc = spec.grid[1] > spec.grid[0];
    for (std::size_t i = 1; i < spec.grid.size(); ++i) {
        bool step_inc = spec.grid[i] > spec.grid[i - 1];
        if (step_inc != inc || spec.grid[i] == spec.grid[i - 1])
            throw ConfigError("sweep grid must be strictly monotone");
    }

    SweepResult out;
    out.params = spec.grid;
    out.loci.resize(spec.grid.size());
    auto solve_range = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            auto [family, k] = realize(spec, spec.grid[i]);
            out.loci[i] = find_discrete_modes(family, k, tol);
        }
    };
    if (threads <= 1) {
        solve_range(0, spec.grid.size());
    } else {
        std::vector<std::thread> pool;
        std::size_t n = spec.grid.size();
        std::size_t per = (n + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            std::size_t lo = std::min(n, t * per), hi = std::min(n, (t + 1) * per);
            if (lo < hi) pool.emplace_back(solve_range, lo, hi);
        }
        for (auto& th : pool) th.join();
    }

    // Locus pairing between consecutive grid points.
    out.pairing.resize(spec.grid.size() > 0 ? spec.grid.size() - 1 : 0);
    for (std::size_t i = 0; i + 1 < spec.grid.size(); ++i) {
        std::vector<Complex> a, b;
        for (const auto& m : out.loci[i]) a.push_back(m.omega);
        for (const auto& m : out.loci[i + 1]) b.push_back(m.omega);
        out.pairing[i] = match_spectra(a, b);
    }

    auto modes_at = [&](double value) {
        auto [family, k] = realize(spec, value);
        return find_discrete_modes(family, k, tol);
    };

    // Instability onsets: refine every neutral <-> non-neutral transition.
    for (std::size_t i = 0; i + 1 < spec.grid.size(); ++i) {
        bool n0 = all_neutral(out.loci[i], tol);
        bool n1 = all_neutral(out.loci[i + 1], tol);
        if (n0 == n1) continue;
        double p_neutral = spec.grid[n0 ? i : i + 1];
        double p_unstable = spec.grid[n0 ? i + 1 : i];
        std::vector<ModeRecord> m_neutral = out.loci[n0 ? i : i + 1];
        std::vector<ModeRecord> m_unstable = out.loci[n0 ? i + 1 : i];
        while (std::abs(p_unstable - p_neutral) > tol.param_bisect) {
            double mid = 0.5 * (p_neutral + p_unstable);
            std::vector<ModeRecord> mm = modes_at(mid);
            if (all_neutral(mm, tol)) {
                p_neutral = mid;
                m_neutral = std::move(mm);
            } else {
                p_unstable = mid;
                m_unstable = std::move(mm);
            }
        }

        // Collision frequency: cluster the real parts of the departing roots
        // (a mirror-symmetric system departs at +w* and -w* simultaneously)
        // and keep the signed representative so the pre-collision pair is
        // looked up on the correct side of the axis.
        std::vector<Complex> newly = complex_pairs_off_axis(m_unstable, tol);
        double omega_star = 0.0;
        {
            std::vector<double> res;
            for (const Complex& w : newly) res.push_back(w.real());
            std::sort(res.begin(), res.end());
            double scale = 1.0;
            for (const auto& m : m_unstable) scale = std::max(scale, std::abs(m.omega));
            std::vector<double> centers;
            std::size_t at = 0;
            while (at < res.size()) {
                std::size_t next = at + 1;
                double sum = res[at];
                while (next < res.size() && res[next] - res[next - 1] < 1e-4 * scale)
                    sum += res[next++];
                centers.push_back(sum / static_cast<double>(next - at));
                at = next;
            }
            for (double c : centers)
                if (std::abs(c) > std::abs(omega_star) ||
                    (std::abs(c) == std::abs(omega_star) && c > omega_star))
                    omega_star = c;
        }

        // Signatures just on the neutral side; if the energies have already
        // entered the marginal band, step back toward the neutral grid point.
        std::vector<ModeRecord> sig_modes = m_neutral;
        {
            double span = std::abs(spec.grid[n0 ? i : i + 1] - p_neutral);
            double back = tol.param_bisect * 100.0;
            auto marginal_pair = [&](const std::vector<ModeRecord>& mm) {
                auto maybe = classify_event(mm, m_unstable, omega_star, tol);
                return maybe && maybe->signature_unavailable;
            };
            int guard = 0;
            while (marginal_pair(sig_modes) && back < span && guard++ < 8) {
                double direction = p_neutral > p_unstable ? 1.0 : -1.0;
                sig_modes = modes_at(p_neutral + direction * back);
                back *= 10.0;
            }
        }

        auto maybe = classify_event(sig_modes, m_unstable, omega_star, tol);
        if (!maybe) continue;
        BifurcationEvent ev = *maybe;
        ev.param = 0.5 * (p_neutral + p_unstable);
        ev.bracket_lo = std::min(p_neutral, p_unstable);
        ev.bracket_hi = std::max(p_neutral, p_unstable);
        out.events.push_back(ev);
    }

    // Close approaches away from any detected event are worth a warning.
    for (std::size_t i = 0; i < out.loci.size(); ++i) {
        const auto& modes = out.loci[i];
        double scale = 1.0;
        for (const auto& m : modes) scale = std::max(scale, std::abs(m.omega));
        for (std::size_t a = 0; a + 1 < modes.size(); ++a) {
            double gap = std::abs(modes[a + 1].omega - modes[a].omega);
            if (gap > tol.pair_symmetry * scale || gap == 0.0) continue;
            bool near_event = false;
            for (const auto& ev : out.events)
                if (out.params[i] >= ev.bracket_lo - tol.param_bisect &&
                    out.params[i] <= ev.bracket_hi + tol.param_bisect)
                    near_event = true;
            if (!near_event)
                out.warnings.push_back("pairing ambiguity: loci within tolerance at parameter " +
                                       std::to_string(out.params[i]) +
                                       "; refine the grid near this value");
        }
    }
    return out;
}

KreinAuditReport krein_audit(const std::function<SweepSystem(std::mt19937&)>& generator,
                             const std::string& control, std::pair<double, double> param_range,
                             int grid_points, int samples, unsigned seed, double fixed_k,
                             const Tolerances& tol) {
    KreinAuditReport report;
    std::mt19937 rng(seed);
    for (int s = 0; s < samples; ++s) {
        SweepSpec spec;
        spec.system = generator(rng);
        spec.control = control;
        spec.k = fixed_k;
        spec.grid.resize(grid_points);
        for (int i = 0; i < grid_points; ++i)
            spec.grid[i] = param_range.first +
                           (param_range.second - param_range.first) * i / (grid_points - 1);
        ++report.systems;
        SweepResult res = sweep(spec, tol);
        for (const auto& ev : res.events) {
            ++report.onsets;
            if (ev.signature_unavailable) {
                ++report.signature_unavailable;
                continue;
            }
            if (ev.kind == BifurcationEvent::Kind::HH && ev.krein_violation) {
                ++report.violations;
                report.details.push_back("sample " + std::to_string(s) +
                                         ": equal-signature onset at parameter " +
                                         std::to_string(ev.param));
            }
        }
    }
    return report;
}

}  // namespace krein
