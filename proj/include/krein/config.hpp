#ifndef KREIN_CONFIG_HPP
#define KREIN_CONFIG_HPP

#include <json.hpp>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "krein/bifurcation.hpp"
#include "krein/penrose.hpp"
#include "krein/profile.hpp"
#include "krein/tolerances.hpp"

namespace krein {

// One run = one system, one analysis, one output sink.
struct RunConfig {
    enum class SystemKind { MultiFluid, Waterbag, Distribution };
    enum class AnalysisKind { Modes, Penrose, Sweep, NormalForm, Discretize, Scan };
    enum class OutputFormat { Csv, Json };

    SystemKind system_kind = SystemKind::MultiFluid;
    std::optional<MultiFluidEquilibrium> fluid;
    std::optional<WaterbagEquilibrium> bag;
    std::optional<DistributionProfile> profile;

    AnalysisKind analysis = AnalysisKind::Modes;
    double k = 1.0;
    ContourSpec contour;                  // penrose
    std::string control;                  // sweep
    std::vector<double> grid;             // sweep
    int levels = 16;                      // discretize
    std::pair<double, double> p_range{-8.0, 8.0};
    std::pair<double, double> u_range{-4.0, 4.0};  // scan
    int scan_points = 801;

    OutputFormat format = OutputFormat::Csv;
    std::string path = "out.csv";

    Tolerances tolerances;
};

// Parse + validate a config document; throws ConfigError with a usable message.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);

// Canonical serialization of a parsed config (round-trips through parse_config).
nlohmann::json resolved_config(const RunConfig& cfg);

// Machine-readable description of the accepted document, including the
// default tolerance table.
nlohmann::json config_schema();

// Execute the analysis and write the output files.  Throws on error; the CLI
// maps exception types to exit codes.
void run(const RunConfig& cfg, std::ostream& summary, int threads = 1);

}  // namespace krein

#endif
