#include "krein/config.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

#include "krein/normalform.hpp"

namespace krein {

using nlohmann::json;

namespace {

std::string fmt_g(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    q += '"';
    return q;
}

[[noreturn]] void fail(const std::string& msg) { throw ConfigError("config: " + msg); }

const json& need(const json& obj, const char* key, const char* where) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(std::string(where) + " is missing '" + key + "'");
    return *it;
}

double need_number(const json& obj, const char* key, const char* where) {
    const json& v = need(obj, key, where);
    if (!v.is_number()) fail(std::string(where) + "." + key + " must be a number");
    return v.get<double>();
}

std::vector<double> number_list(const json& v, const char* where) {
    if (!v.is_array()) fail(std::string(where) + " must be an array of numbers");
    std::vector<double> out;
    for (const auto& x : v) {
        if (!x.is_number()) fail(std::string(where) + " must contain numbers only");
        out.push_back(x.get<double>());
    }
    return out;
}

Coupling parse_coupling(const std::string& s) {
    if (s == "plasma_shielded") return Coupling::PlasmaShielded;
    if (s == "plasma_bare") return Coupling::PlasmaBare;
    if (s == "jeans") return Coupling::GravitationalJeans;
    if (s == "acoustic") return Coupling::Acoustic;
    fail("unknown coupling '" + s +
         "' (expected plasma_shielded | plasma_bare | jeans | acoustic)");
}

void parse_tolerances(const json& t, Tolerances& tol) {
    auto get = [&](const char* key, double& slot) {
        if (t.contains(key)) {
            if (!t[key].is_number()) fail(std::string("tolerances.") + key + " must be a number");
            slot = t[key].get<double>();
        }
    };
    get("root_accept", tol.root_accept);
    get("pair_symmetry", tol.pair_symmetry);
    get("marginal_energy", tol.marginal_energy);
    get("near_pole", tol.near_pole);
    get("grazing", tol.grazing);
    get("contour_angle", tol.contour_angle);
    get("truncation_tail", tol.truncation_tail);
    get("param_bisect", tol.param_bisect);
    get("collision_freq", tol.collision_freq);
    get("axis_departure", tol.axis_departure);
    get("eig_agreement", tol.eig_agreement);
    get("degenerate_gap", tol.degenerate_gap);
    get("jordan_rank", tol.jordan_rank);
    get("matrix_symmetry", tol.matrix_symmetry);
}

json tolerances_json(const Tolerances& t) {
    return json{{"root_accept", t.root_accept},
                {"pair_symmetry", t.pair_symmetry},
                {"marginal_energy", t.marginal_energy},
                {"near_pole", t.near_pole},
                {"grazing", t.grazing},
                {"contour_angle", t.contour_angle},
                {"truncation_tail", t.truncation_tail},
                {"param_bisect", t.param_bisect},
                {"collision_freq", t.collision_freq},
                {"axis_departure", t.axis_departure},
                {"eig_agreement", t.eig_agreement},
                {"degenerate_gap", t.degenerate_gap},
                {"jordan_rank", t.jordan_rank},
                {"matrix_symmetry", t.matrix_symmetry}};
}

}  // namespace

RunConfig parse_config(const json& doc) {
    if (!doc.is_object()) fail("document must be a JSON object");
    RunConfig cfg;

    // ---- system ----
    const json& system = need(doc, "system", "document");
    int system_keys = 0;
    for (const char* key : {"multifluid", "waterbag", "distribution"})
        if (system.contains(key)) ++system_keys;
    if (system_keys != 1) fail("system must contain exactly one of multifluid|waterbag|distribution");

    if (system.contains("multifluid")) {
        cfg.system_kind = RunConfig::SystemKind::MultiFluid;
        const json& mf = system["multifluid"];
        Coupling coupling =
            parse_coupling(need(mf, "coupling", "system.multifluid").get<std::string>());
        const json& sp = need(mf, "species", "system.multifluid");
        if (!sp.is_array() || sp.empty()) fail("system.multifluid.species must be a nonempty array");
        std::vector<FluidSpecies> species;
        for (const auto& s : sp) {
            FluidSpecies fs;
            fs.rho = need_number(s, "rho", "species entry");
            fs.u = need_number(s, "u", "species entry");
            fs.c_s = need_number(s, "c_s", "species entry");
            species.push_back(fs);
        }
        try {
            cfg.fluid = MultiFluidEquilibrium(std::move(species), coupling);
        } catch (const Error& e) {
            fail(e.what());
        }
    } else if (system.contains("waterbag")) {
        cfg.system_kind = RunConfig::SystemKind::Waterbag;
        const json& wb = system["waterbag"];
        bool merge = wb.value("merge_equal_contours", false);
        try {
            if (wb.contains("pairs")) {
                if (!wb["pairs"].is_array()) fail("system.waterbag.pairs must be an array");
                std::vector<std::pair<double, double>> pairs;
                for (const auto& p : wb["pairs"]) {
                    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
                        fail("each waterbag pair must be [p0, delta_f]");
                    pairs.emplace_back(p[0].get<double>(), p[1].get<double>());
                }
                cfg.bag = WaterbagEquilibrium::from_jumps(pairs, merge);
            } else {
                std::vector<double> contours =
                    number_list(need(wb, "contours", "system.waterbag"), "waterbag.contours");
                std::vector<double> levels =
                    number_list(need(wb, "levels", "system.waterbag"), "waterbag.levels");
                cfg.bag = WaterbagEquilibrium(std::move(contours), std::move(levels), merge);
            }
        } catch (const ConfigError&) {
            throw;
        } catch (const Error& e) {
            fail(e.what());
        }
    } else {
        cfg.system_kind = RunConfig::SystemKind::Distribution;
        const json& d = system["distribution"];
        std::string kind = need(d, "kind", "system.distribution").get<std::string>();
        try {
            if (kind == "maxwellian") {
                cfg.profile = DistributionProfile::maxwellian();
            } else if (kind == "bi_maxwellian") {
                cfg.profile = DistributionProfile::bi_maxwellian(
                    need_number(d, "separation", "system.distribution"));
            } else if (kind == "tabulated") {
                cfg.profile = DistributionProfile::tabulated(
                    number_list(need(d, "p_grid", "system.distribution"), "distribution.p_grid"),
                    number_list(need(d, "values", "system.distribution"), "distribution.values"));
            } else {
                fail("unknown distribution kind '" + kind + "'");
            }
        } catch (const ConfigError&) {
            throw;
        } catch (const Error& e) {
            fail(e.what());
        }
    }

    // ---- analysis ----
    const json& analysis = need(doc, "analysis", "document");
    int analysis_keys = 0;
    for (const char* key : {"modes", "penrose", "sweep", "normalform", "discretize", "scan"})
        if (analysis.contains(key)) ++analysis_keys;
    if (analysis_keys != 1)
        fail("analysis must contain exactly one of modes|penrose|sweep|normalform|discretize|scan");

    const bool is_distribution = cfg.system_kind == RunConfig::SystemKind::Distribution;
    auto require_spectral_system = [&](const char* name) {
        if (is_distribution)
            fail(std::string(name) + " analysis needs a multifluid or waterbag system");
    };
    auto require_distribution = [&](const char* name) {
        if (!is_distribution) fail(std::string(name) + " analysis needs a distribution system");
    };

    if (analysis.contains("modes")) {
        cfg.analysis = RunConfig::AnalysisKind::Modes;
        require_spectral_system("modes");
        cfg.k = need_number(analysis["modes"], "k", "analysis.modes");
    } else if (analysis.contains("penrose")) {
        cfg.analysis = RunConfig::AnalysisKind::Penrose;
        require_distribution("penrose");
        const json& p = analysis["penrose"];
        cfg.k = need_number(p, "k", "analysis.penrose");
        cfg.contour.half_width = p.value("half_width", 0.0);
        cfg.contour.base_points = p.value("base_points", 2001);
        cfg.contour.grazing_tol = p.value("grazing_tol", 1e-4);
    } else if (analysis.contains("sweep")) {
        cfg.analysis = RunConfig::AnalysisKind::Sweep;
        require_spectral_system("sweep");
        const json& s = analysis["sweep"];
        cfg.control = need(s, "control", "analysis.sweep").get<std::string>();
        if (cfg.control != "k") cfg.k = need_number(s, "k", "analysis.sweep");
        const json& grid = need(s, "grid", "analysis.sweep");
        if (grid.is_array()) {
            cfg.grid = number_list(grid, "sweep.grid");
        } else if (grid.is_object()) {
            double lo = need_number(grid, "lo", "sweep.grid");
            double hi = need_number(grid, "hi", "sweep.grid");
            int n = static_cast<int>(need_number(grid, "points", "sweep.grid"));
            if (n < 3) fail("sweep.grid.points must be >= 3");
            for (int i = 0; i < n; ++i) cfg.grid.push_back(lo + (hi - lo) * i / (n - 1));
        } else {
            fail("sweep.grid must be an array or {lo, hi, points}");
        }
        bool fluid_kind = cfg.system_kind == RunConfig::SystemKind::MultiFluid;
        if (cfg.control != "k" && cfg.control != (fluid_kind ? "stream_speed" : "separation"))
            fail("control '" + cfg.control + "' is not valid for this system kind");
    } else if (analysis.contains("normalform")) {
        cfg.analysis = RunConfig::AnalysisKind::NormalForm;
        require_spectral_system("normalform");
        cfg.k = need_number(analysis["normalform"], "k", "analysis.normalform");
    } else if (analysis.contains("discretize")) {
        cfg.analysis = RunConfig::AnalysisKind::Discretize;
        require_distribution("discretize");
        const json& d = analysis["discretize"];
        cfg.levels = static_cast<int>(need_number(d, "levels", "analysis.discretize"));
        std::vector<double> r = number_list(need(d, "p_range", "analysis.discretize"),
                                            "discretize.p_range");
        if (r.size() != 2 || !(r[1] > r[0])) fail("discretize.p_range must be [lo, hi]");
        cfg.p_range = {r[0], r[1]};
    } else {
        cfg.analysis = RunConfig::AnalysisKind::Scan;
        require_spectral_system("scan");
        const json& s = analysis["scan"];
        cfg.k = need_number(s, "k", "analysis.scan");
        std::vector<double> r = number_list(need(s, "u_range", "analysis.scan"), "scan.u_range");
        if (r.size() != 2 || !(r[1] > r[0])) fail("scan.u_range must be [lo, hi]");
        cfg.u_range = {r[0], r[1]};
        cfg.scan_points = static_cast<int>(s.value("points", 801.0));
        if (cfg.scan_points < 2) fail("scan.points must be >= 2");
    }
    if (cfg.analysis != RunConfig::AnalysisKind::Sweep && !(cfg.k > 0.0))
        fail("wavenumber k must be positive");

    // ---- output ----
    const json& output = need(doc, "output", "document");
    std::string format = need(output, "format", "output").get<std::string>();
    if (format == "csv")
        cfg.format = RunConfig::OutputFormat::Csv;
    else if (format == "json")
        cfg.format = RunConfig::OutputFormat::Json;
    else
        fail("output.format must be csv or json");
    cfg.path = need(output, "path", "output").get<std::string>();
    if (cfg.path.empty()) fail("output.path must not be empty");

    if (doc.contains("tolerances")) parse_tolerances(doc["tolerances"], cfg.tolerances);
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open config file '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        fail(std::string("JSON parse error: ") + e.what());
    }
    return parse_config(doc);
}

json resolved_config(const RunConfig& cfg) {
    json doc;
    json system;
    switch (cfg.system_kind) {
        case RunConfig::SystemKind::MultiFluid: {
            json species = json::array();
            for (const auto& s : cfg.fluid->species())
                species.push_back({{"rho", s.rho}, {"u", s.u}, {"c_s", s.c_s}});
            system["multifluid"] = {{"coupling", to_string(cfg.fluid->coupling())},
                                    {"species", species}};
            break;
        }
        case RunConfig::SystemKind::Waterbag:
            system["waterbag"] = {{"contours", cfg.bag->contours()},
                                  {"levels", cfg.bag->levels()}};
            break;
        case RunConfig::SystemKind::Distribution: {
            json d;
            switch (cfg.profile->kind()) {
                case DistributionProfile::Kind::Maxwellian: d["kind"] = "maxwellian"; break;
                case DistributionProfile::Kind::BiMaxwellian:
                    d["kind"] = "bi_maxwellian";
                    d["separation"] = cfg.profile->separation();
                    break;
                case DistributionProfile::Kind::Tabulated:
                    d["kind"] = "tabulated";
                    d["p_grid"] = cfg.profile->grid();
                    d["values"] = cfg.profile->values();
                    break;
            }
            system["distribution"] = d;
            break;
        }
    }
    doc["system"] = system;

    json analysis;
    switch (cfg.analysis) {
        case RunConfig::AnalysisKind::Modes: analysis["modes"] = {{"k", cfg.k}}; break;
        case RunConfig::AnalysisKind::Penrose:
            analysis["penrose"] = {{"k", cfg.k},
                                   {"half_width", cfg.contour.half_width},
                                   {"base_points", cfg.contour.base_points},
                                   {"grazing_tol", cfg.contour.grazing_tol}};
            break;
        case RunConfig::AnalysisKind::Sweep: {
            json s = {{"control", cfg.control}, {"grid", cfg.grid}};
            if (cfg.control != "k") s["k"] = cfg.k;
            analysis["sweep"] = s;
            break;
        }
        case RunConfig::AnalysisKind::NormalForm:
            analysis["normalform"] = {{"k", cfg.k}};
            break;
        case RunConfig::AnalysisKind::Discretize:
            analysis["discretize"] = {{"levels", cfg.levels},
                                      {"p_range", {cfg.p_range.first, cfg.p_range.second}}};
            break;
        case RunConfig::AnalysisKind::Scan:
            analysis["scan"] = {{"k", cfg.k},
                                {"u_range", {cfg.u_range.first, cfg.u_range.second}},
                                {"points", cfg.scan_points}};
            break;
    }
    doc["analysis"] = analysis;
    doc["output"] = {
        {"format", cfg.format == RunConfig::OutputFormat::Csv ? "csv" : "json"},
        {"path", cfg.path}};
    doc["tolerances"] = tolerances_json(cfg.tolerances);
    return doc;
}

json config_schema() {
    json schema;
    schema["system"] = {
        {"multifluid",
         {{"coupling", "plasma_shielded | plasma_bare | jeans | acoustic"},
          {"species", "array of {rho > 0, u, c_s >= 0}"}}},
        {"waterbag",
         {{"contours", "strictly increasing momenta"},
          {"levels", "contours+1 nonnegative values, zero at both ends"},
          {"pairs", "alternative: array of [p0, delta_f] with delta_f = f_above - f_below"},
          {"merge_equal_contours", "optional bool"}}},
        {"distribution",
         {{"kind", "maxwellian | bi_maxwellian | tabulated"},
          {"separation", "bi_maxwellian peak half-separation"},
          {"p_grid", "tabulated abscissae"},
          {"values", "tabulated f0 values"}}}};
    schema["analysis"] = {
        {"modes", {{"k", "wavenumber > 0"}}},
        {"penrose",
         {{"k", "wavenumber > 0"},
          {"half_width", "contour half width (0 = profile support)"},
          {"base_points", "base grid size, default 2001"},
          {"grazing_tol", "marginality band on |eps|, default 1e-4"}}},
        {"sweep",
         {{"control", "k | stream_speed (multifluid) | separation (waterbag)"},
          {"grid", "array of values or {lo, hi, points}"},
          {"k", "fixed wavenumber if control != k"}}},
        {"normalform", {{"k", "wavenumber > 0"}}},
        {"discretize", {{"levels", "even level count"}, {"p_range", "[lo, hi]"}}},
        {"scan", {{"k", "wavenumber > 0"}, {"u_range", "[lo, hi]"}, {"points", "default 801"}}}};
    schema["output"] = {{"format", "csv | json"}, {"path", "output file"}};
    schema["tolerances"] = tolerances_json(Tolerances{});
    schema["columns"] = {
        {"modes", {"k", "re_omega", "im_omega", "signature", "energy", "suspect"}},
        {"penrose", {"u", "re_eps", "im_eps"}},
        {"sweep", {"param", "mode_index", "re_omega", "im_omega", "signature"}},
        {"normalform", {"k", "omega", "sigma"}},
        {"discretize", {"p0", "delta_f"}},
        {"scan", {"u", "eps"}}};
    return schema;
}

namespace {

struct Table {
    std::vector<std::string> columns;
    std::vector<json> rows;  // arrays matching columns
};

void write_output(const RunConfig& cfg, const Table& table, const json& summary) {
    json meta;
    meta["tool"] = {{"name", "krein"}, {"version", "0.1.0"}};
    meta["config"] = resolved_config(cfg);
    meta["summary"] = summary;

    if (cfg.format == RunConfig::OutputFormat::Json) {
        json doc;
        doc["meta"] = meta;
        doc["columns"] = table.columns;
        doc["rows"] = table.rows;
        std::ofstream out(cfg.path);
        if (!out) throw Error("cannot write output file '" + cfg.path + "'");
        out << doc.dump(2) << "\n";
        return;
    }

    std::ofstream out(cfg.path);
    if (!out) throw Error("cannot write output file '" + cfg.path + "'");
    for (std::size_t c = 0; c < table.columns.size(); ++c)
        out << (c ? "," : "") << csv_quote(table.columns[c]);
    out << "\r\n";
    for (const json& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out << ",";
            const json& cell = row[c];
            if (cell.is_number_float())
                out << csv_quote(fmt_g(cell.get<double>()));
            else if (cell.is_number_integer())
                out << cell.get<long long>();
            else if (cell.is_boolean())
                out << (cell.get<bool>() ? 1 : 0);
            else
                out << csv_quote(cell.get<std::string>());
        }
        out << "\r\n";
    }
    std::ofstream meta_out(cfg.path + ".meta.json");
    if (!meta_out) throw Error("cannot write meta file beside '" + cfg.path + "'");
    meta_out << meta.dump(2) << "\n";
}

DispersionFamily family_of(const RunConfig& cfg) {
    if (cfg.system_kind == RunConfig::SystemKind::MultiFluid)
        return DispersionFamily::of(*cfg.fluid);
    return DispersionFamily::of(*cfg.bag);
}

}  // namespace

void run(const RunConfig& cfg, std::ostream& summary_stream, int threads) {
    Table table;
    json summary;

    switch (cfg.analysis) {
        case RunConfig::AnalysisKind::Modes: {
            table.columns = {"k", "re_omega", "im_omega", "signature", "energy", "suspect"};
            auto modes = find_discrete_modes(family_of(cfg), cfg.k, cfg.tolerances);
            for (const auto& m : modes)
                table.rows.push_back(json::array({m.k, m.omega.real(), m.omega.imag(),
                                                  to_string(m.signature), m.energy, m.suspect}));
            summary["mode_count"] = modes.size();
            int unstable = 0;
            for (const auto& m : modes)
                if (m.omega.imag() > cfg.tolerances.axis_departure) ++unstable;
            summary["unstable_count"] = unstable;
            summary_stream << "modes: " << modes.size() << " (" << unstable << " growing)\n";
            break;
        }
        case RunConfig::AnalysisKind::Penrose: {
            table.columns = {"u", "re_eps", "im_eps"};
            PenroseContour contour =
                penrose_contour(*cfg.profile, cfg.k, cfg.contour, cfg.tolerances);
            for (std::size_t i = 0; i < contour.u.size(); ++i)
                table.rows.push_back(json::array(
                    {contour.u[i], contour.eps[i].real(), contour.eps[i].imag()}));
            summary["min_abs_eps"] = contour.min_abs;
            if (contour.grazing) {
                summary["classification"] = "marginal";
                summary_stream << "penrose: Marginal (contour grazes the origin)\n";
            } else {
                int w = winding_number(contour);
                summary["winding"] = w;
                summary["classification"] = w == 0 ? "stable" : "unstable";
                summary_stream << "penrose: " << (w == 0 ? "Stable" : "Unstable") << ", winding "
                               << w << "\n";
            }
            break;
        }
        case RunConfig::AnalysisKind::Sweep: {
            table.columns = {"param", "mode_index", "re_omega", "im_omega", "signature"};
            SweepSpec spec;
            spec.system = cfg.system_kind == RunConfig::SystemKind::MultiFluid
                              ? SweepSystem::of(*cfg.fluid)
                              : SweepSystem::of(*cfg.bag);
            spec.control = cfg.control;
            spec.grid = cfg.grid;
            spec.k = cfg.k;
            SweepResult res = sweep(spec, cfg.tolerances, threads);
            for (std::size_t i = 0; i < res.params.size(); ++i)
                for (std::size_t j = 0; j < res.loci[i].size(); ++j) {
                    const auto& m = res.loci[i][j];
                    table.rows.push_back(json::array({res.params[i], static_cast<long long>(j),
                                                      m.omega.real(), m.omega.imag(),
                                                      to_string(m.signature)}));
                }
            json events = json::array();
            for (const auto& ev : res.events) {
                events.push_back(
                    {{"param", ev.param},
                     {"kind", ev.kind == BifurcationEvent::Kind::SS ? "SS" : "HH"},
                     {"colliding_frequency", ev.colliding_frequency},
                     {"pre_signatures",
                      {to_string(ev.pre_signatures[0]), to_string(ev.pre_signatures[1])}},
                     {"post_structure",
                      ev.post_structure == BifurcationEvent::Post::Doublet ? "doublet"
                                                                           : "quartet"},
                     {"multiplicity", ev.multiplicity},
                     {"signature_unavailable", ev.signature_unavailable},
                     {"krein_violation", ev.krein_violation}});
                summary_stream << "event: " << (ev.kind == BifurcationEvent::Kind::SS ? "SS" : "HH")
                               << " at " << fmt_g(ev.param) << "\n";
            }
            summary["events"] = events;
            summary["warnings"] = res.warnings;
            break;
        }
        case RunConfig::AnalysisKind::NormalForm: {
            table.columns = {"k", "omega", "sigma"};
            MultiFluidEquilibrium eq = cfg.system_kind == RunConfig::SystemKind::MultiFluid
                                           ? *cfg.fluid
                                           : to_multifluid(*cfg.bag).as_multifluid();
            QuadraticBlock block = build_block(eq, cfg.k, BlockScheme::Auto, cfg.tolerances);
            NormalFormReport rep = normal_form(block, cfg.tolerances);
            for (const auto& m : rep.modes)
                table.rows.push_back(json::array({cfg.k, m.omega, m.sigma}));
            const char* cls = rep.classification == BlockClass::AllStable ? "all_stable"
                              : rep.classification == BlockClass::UnstablePairs
                                  ? "unstable_pairs"
                                  : "degenerate";
            summary["classification"] = cls;
            summary["unstable_pairs"] = rep.unstable_pairs;
            summary["congruence_residual"] = rep.congruence_residual;
            summary_stream << "normalform: " << cls << ", " << rep.modes.size() << " modes\n";
            break;
        }
        case RunConfig::AnalysisKind::Discretize: {
            table.columns = {"p0", "delta_f"};
            WaterbagEquilibrium bag =
                discretize_distribution(*cfg.profile, cfg.levels, cfg.p_range);
            for (std::size_t i = 0; i < bag.size(); ++i)
                table.rows.push_back(json::array({bag.contours()[i], bag.jumps()[i]}));
            summary["contours"] = bag.size();
            summary_stream << "discretize: " << bag.size() << " contours\n";
            break;
        }
        case RunConfig::AnalysisKind::Scan: {
            table.columns = {"u", "eps"};
            DispersionFamily family = family_of(cfg);
            std::vector<double> poles = dispersion_poles(family, cfg.k);
            double span = std::max(1.0, cfg.u_range.second - cfg.u_range.first);
            int kept = 0;
            for (int i = 0; i < cfg.scan_points; ++i) {
                double u = cfg.u_range.first +
                           (cfg.u_range.second - cfg.u_range.first) * i / (cfg.scan_points - 1);
                double omega = cfg.k * u;
                bool near_pole = false;
                for (double p : poles)
                    if (std::abs(omega - p) < 1e-6 * span * cfg.k) near_pole = true;
                if (near_pole) continue;
                double eps =
                    eval_dispersion(family, cfg.k, Complex(omega, 0.0), cfg.tolerances).real();
                table.rows.push_back(json::array({u, eps}));
                ++kept;
            }
            summary["points"] = kept;
            summary_stream << "scan: " << kept << " samples\n";
            break;
        }
    }

    write_output(cfg, table, summary);
}

}  // namespace krein
