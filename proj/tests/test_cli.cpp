#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "krein/config.hpp"
#include "oracles.hpp"

using namespace krein;
using nlohmann::json;

namespace {

std::string temp_path(const std::string& name) {
    return std::string("krein_test_") + name;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json counterstream_modes_config(const std::string& out, const std::string& format = "csv") {
    return json{{"system",
                 {{"multifluid",
                   {{"coupling", "plasma_shielded"},
                    {"species",
                     json::array({{{"rho", 0.5}, {"u", 0.2}, {"c_s", 0.0}},
                                  {{"rho", 0.5}, {"u", -0.2}, {"c_s", 0.0}}})}}}}},
                {"analysis", {{"modes", {{"k", 1.0}}}}},
                {"output", {{"format", format}, {"path", out}}}};
}

int count_lines(const std::string& text) {
    int n = 0;
    for (char c : text)
        if (c == '\n') ++n;
    return n;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("configs round-trip through their resolved form") {
    json doc = counterstream_modes_config("x.csv");
    RunConfig cfg = parse_config(doc);
    json resolved = resolved_config(cfg);
    RunConfig cfg2 = parse_config(resolved);
    CHECK(resolved == resolved_config(cfg2));

    json sweep_doc = {{"system", {{"waterbag", {{"contours", {-1.0, 1.0, 1.75, 2.25}},
                                                {"levels", {0.0, 1.0, 0.0, 0.5, 0.0}}}}}},
                      {"analysis",
                       {{"sweep",
                         {{"control", "separation"},
                          {"grid", {{"lo", 3.0}, {"hi", 2.0}, {"points", 5}}},
                          {"k", 1.0}}}}},
                      {"output", {{"format", "json"}, {"path", "y.json"}}}};
    RunConfig swept = parse_config(sweep_doc);
    CHECK(swept.grid.size() == 5);
    json r1 = resolved_config(swept);
    CHECK(r1 == resolved_config(parse_config(r1)));
}

TEST_CASE("illegal combinations are usage errors with no output") {
    json doc = {{"system", {{"waterbag", {{"contours", {-1.0, 1.0}},
                                          {"levels", {0.0, 1.0, 0.0}}}}}},
                {"analysis", {{"penrose", {{"k", 1.0}}}}},
                {"output", {{"format", "csv"}, {"path", temp_path("never.csv")}}}};
    CHECK_THROWS_AS(parse_config(doc), ConfigError);
    std::ifstream never(temp_path("never.csv"));
    CHECK(!never.good());

    json two_analyses = counterstream_modes_config("x.csv");
    two_analyses["analysis"]["scan"] = {{"k", 1.0}, {"u_range", {-2.0, 2.0}}};
    CHECK_THROWS_AS(parse_config(two_analyses), ConfigError);

    json bad_control = {{"system", {{"multifluid",
                                     {{"coupling", "plasma_shielded"},
                                      {"species", json::array({{{"rho", 0.5}, {"u", 0.3},
                                                                {"c_s", 0.0}}})}}}}},
                        {"analysis", {{"sweep", {{"control", "separation"},
                                                 {"grid", {0.1, 0.2, 0.3}},
                                                 {"k", 1.0}}}}},
                        {"output", {{"format", "csv"}, {"path", "z.csv"}}}};
    CHECK_THROWS_AS(parse_config(bad_control), ConfigError);
}

TEST_CASE("modes run emits four records matching the closed form") {
    std::string out = temp_path("modes.csv");
    RunConfig cfg = parse_config(counterstream_modes_config(out));
    std::ostringstream summary;
    run(cfg, summary);
    std::string text = slurp(out);
    CHECK(count_lines(text) == 5);  // header + 4 modes
    // The pure-imaginary growing pair of the u_e = 0.2 equilibrium.
    auto roots = oracles::counterstream_roots(0.2, 1.0);
    double want = 0.0;
    for (const auto& r : roots) want = std::max(want, r.imag());
    bool seen = false;
    std::istringstream lines(text);
    std::string line;
    std::getline(lines, line);  // header
    while (std::getline(lines, line)) {
        // column 3 is im_omega
        std::size_t p1 = line.find(','), p2 = line.find(',', p1 + 1);
        std::size_t p3 = line.find(',', p2 + 1);
        double im = std::stod(line.substr(p2 + 1, p3 - p2 - 1));
        if (std::abs(im - want) < 1e-10) seen = true;
    }
    CHECK(seen);
    std::string meta = slurp(out + ".meta.json");
    json meta_doc = json::parse(meta);
    CHECK(meta_doc["summary"]["unstable_count"] == 1);
    CHECK(meta_doc["config"]["analysis"]["modes"]["k"] == 1.0);
    std::remove(out.c_str());
    std::remove((out + ".meta.json").c_str());
}

TEST_CASE("penrose run reports the stable Maxwellian classification") {
    std::string out = temp_path("penrose.csv");
    json doc = {{"system", {{"distribution", {{"kind", "maxwellian"}}}}},
                {"analysis", {{"penrose", {{"k", 1.0}}}}},
                {"output", {{"format", "csv"}, {"path", out}}}};
    RunConfig cfg = parse_config(doc);
    std::ostringstream summary;
    run(cfg, summary);
    CHECK(summary.str().find("Stable, winding 0") != std::string::npos);
    std::string text = slurp(out);
    CHECK(text.rfind("u,re_eps,im_eps", 0) == 0);
    json meta_doc = json::parse(slurp(out + ".meta.json"));
    CHECK(meta_doc["summary"]["classification"] == "stable");
    CHECK(meta_doc["summary"]["winding"] == 0);
    std::remove(out.c_str());
    std::remove((out + ".meta.json").c_str());
}

TEST_CASE("sweep output is byte-identical across runs and thread counts") {
    json doc = {{"system", {{"waterbag", {{"contours", {-1.0, 1.0, 1.75, 2.25}},
                                          {"levels", {0.0, 1.0, 0.0, 0.5, 0.0}}}}}},
                {"analysis", {{"sweep", {{"control", "separation"},
                                         {"grid", {{"lo", 3.0}, {"hi", 1.6}, {"points", 9}}},
                                         {"k", 1.0}}}}},
                {"output", {{"format", "json"}, {"path", ""}}}};
    std::string a = temp_path("sweep_a.json"), b = temp_path("sweep_b.json");
    doc["output"]["path"] = a;
    RunConfig cfg_a = parse_config(doc);
    doc["output"]["path"] = b;
    RunConfig cfg_b = parse_config(doc);
    std::ostringstream s1, s2;
    run(cfg_a, s1, 1);
    run(cfg_b, s2, 4);
    std::string ta = slurp(a), tb = slurp(b);
    // The only difference may be the embedded output path.
    size_t pa;
    while ((pa = ta.find(a)) != std::string::npos) ta.replace(pa, a.size(), "X");
    while ((pa = tb.find(b)) != std::string::npos) tb.replace(pa, b.size(), "X");
    CHECK(ta == tb);
    json doc_a = json::parse(slurp(a));
    CHECK(doc_a["meta"]["summary"]["events"].size() == 1);
    CHECK(doc_a["columns"] ==
          json::array({"param", "mode_index", "re_omega", "im_omega", "signature"}));
    CHECK(doc_a["meta"]["config"].contains("tolerances"));
    std::remove(a.c_str());
    std::remove(b.c_str());
}

TEST_CASE("discretize output feeds back in as a waterbag system") {
    std::string out = temp_path("onion.json");
    json doc = {{"system", {{"distribution", {{"kind", "bi_maxwellian"}, {"separation", 1.5}}}}},
                {"analysis", {{"discretize", {{"levels", 8}, {"p_range", {-9.0, 9.0}}}}}},
                {"output", {{"format", "json"}, {"path", out}}}};
    std::ostringstream summary;
    run(parse_config(doc), summary);
    json produced = json::parse(slurp(out));
    json pairs = json::array();
    for (const auto& row : produced["rows"]) pairs.push_back(row);
    json back = {{"system", {{"waterbag", {{"pairs", pairs}}}}},
                 {"analysis", {{"modes", {{"k", 0.5}}}}},
                 {"output", {{"format", "csv"}, {"path", temp_path("back.csv")}}}};
    RunConfig cfg = parse_config(back);
    std::ostringstream s2;
    run(cfg, s2);
    CHECK(s2.str().find("modes:") != std::string::npos);
    std::remove(out.c_str());
    std::remove(temp_path("back.csv").c_str());
    std::remove((temp_path("back.csv") + ".meta.json").c_str());
}

TEST_CASE("tolerance overrides reach the meta record") {
    std::string out = temp_path("tol.csv");
    json doc = counterstream_modes_config(out);
    doc["tolerances"] = {{"marginal_energy", 1e-6}, {"grazing", 5e-4}};
    RunConfig cfg = parse_config(doc);
    CHECK(cfg.tolerances.marginal_energy == 1e-6);
    CHECK(cfg.tolerances.grazing == 5e-4);
    CHECK(cfg.tolerances.root_accept == 1e-9);  // untouched defaults stay
    std::ostringstream summary;
    run(cfg, summary);
    json meta_doc = json::parse(slurp(out + ".meta.json"));
    CHECK(meta_doc["config"]["tolerances"]["marginal_energy"] == 1e-6);
    CHECK(meta_doc["config"]["tolerances"]["grazing"] == 5e-4);
    std::remove(out.c_str());
    std::remove((out + ".meta.json").c_str());
}

TEST_CASE("scan emits the graphical dispersion table") {
    std::string out = temp_path("scan.csv");
    json doc = {{"system", {{"waterbag", {{"contours", {-1.0, 1.0, 1.75, 2.25}},
                                          {"levels", {0.0, 1.0, 0.0, 0.5, 0.0}}}}}},
                {"analysis", {{"scan", {{"k", 1.0}, {"u_range", {-3.0, 4.0}},
                                        {"points", 301}}}}},
                {"output", {{"format", "csv"}, {"path", out}}}};
    std::ostringstream summary;
    run(parse_config(doc), summary);
    std::string text = slurp(out);
    CHECK(text.rfind("u,eps", 0) == 0);
    CHECK(count_lines(text) > 200);
    std::remove(out.c_str());
    std::remove((out + ".meta.json").c_str());
}

TEST_CASE("the installed binary honors the subcommand surface") {
    std::string cfg_path = temp_path("cli_cfg.json");
    std::string out = temp_path("cli_out.csv");
    {
        std::ofstream f(cfg_path);
        f << counterstream_modes_config(out).dump(2);
    }
    std::string cli = KREIN_CLI_PATH;
    CHECK(std::system((cli + " schema > /dev/null").c_str()) == 0);
    CHECK(std::system((cli + " validate " + cfg_path + " > /dev/null").c_str()) == 0);
    CHECK(std::system((cli + " run " + cfg_path + " > /dev/null").c_str()) == 0);
    CHECK(slurp(out).rfind("k,re_omega", 0) == 0);

    // Usage failures exit with the dedicated status.
    int rc = std::system((cli + " run /nonexistent.json 2> /dev/null").c_str());
    CHECK(WEXITSTATUS(rc) == 2);
    {
        std::ofstream f(cfg_path);
        f << "{\"system\": {}}";
    }
    rc = std::system((cli + " validate " + cfg_path + " 2> /dev/null").c_str());
    CHECK(WEXITSTATUS(rc) == 2);

    std::remove(cfg_path.c_str());
    std::remove(out.c_str());
    std::remove((out + ".meta.json").c_str());
}

}  // TEST_SUITE
