#pragma once

#include "osbk/manifolds.hpp"
#include "osbk/symplectic.hpp"
#include "osbk/tolerances.hpp"
#include "osbk/variational.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace osbk::app {

using nlohmann::json;

/// Exit codes of the driver.
enum ExitCode : int { Ok = 0, Failure = 1, SearchFailed = 2, ConfigError = 3 };

const std::vector<std::string>& command_names();

struct RunConfig {
    std::string command;
    json manifold;
    json params = json::object();
    std::uint64_t seed = 1;
    std::filesystem::path out = ".";
    Tolerances tol = default_tolerances;
    unsigned threads = 1;
};

/// Validates the top-level document and the command block. Throws
/// osbk::Error with code Config on any schema violation.
RunConfig parse_config(const std::string& command, const json& root);

ManifoldSpec parse_manifold(const json& j);
AffineLagrangian parse_lagrangian(const json& j, Eigen::Index dim);

json to_json(const PhaseVector& v);
json to_json(const OrbitPolyline& orbit);
PhaseVector vector_from_json(const json& j, const std::string& what);
OrbitPolyline orbit_from_json(const json& j);

/// Largest verify_pair relative residual and midpoint error over the links
/// of an orbit.
struct OrbitCheck {
    double max_relative = 0.0;
    double max_midpoint_error = 0.0;
};
OrbitCheck revalidate_orbit(const ManifoldSpec& spec, const OrbitPolyline& orbit);

/// Formats with 17 significant digits.
std::string format_double(double v);

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);
void write_json(const std::filesystem::path& path, const json& j);

struct RunResult {
    int exit_code = Ok;
    json result;
    std::vector<std::filesystem::path> artifacts;
};

/// Runs one command and writes result.json plus CSV series into cfg.out.
RunResult run(const RunConfig& cfg);

/// Parses argv, merges flags over the config file and runs. Errors go to
/// `err` as a JSON object with a machine-readable code.
int main_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace osbk::app
