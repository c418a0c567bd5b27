#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "quasifree/channels.hpp"
#include "quasifree/evolution.hpp"
#include "quasifree/models.hpp"
#include "quasifree/spectral.hpp"

namespace quasifree::cli {

/// Schema violation; `path` is a JSON pointer to the offending field.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string path, const std::string& what)
        : std::runtime_error(path + ": " + what), path_(std::move(path)) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

enum class Task { Spectrum, Steady, Evolve, SweepAdr, Oracle, Stochastic, Analytics };
enum class Format { Csv, Json };
enum class SweepMethod { ClosedForm, MomentumSum, Spectral };

Task parse_task(const std::string& name);
std::string task_name(Task t);

struct ModelConfig {
    std::string type = "xy";  // "xy" or "blocks"
    int sites = 0;
    double coupling = 1.0;
    double anisotropy = 0.0;
    /// One value for single runs; the sweep grid for sweep-adr.
    std::vector<double> field{0.0};
    TIBlockSpec blocks;  // type "blocks"
};

struct InitialState {
    std::string kind = "ground";  // ground | vacuum | mixed | fock
    std::vector<int> occupations;
};

struct EvolveConfig {
    double t_end = 10.0;
    double dt = 0.01;
    double sample_interval = 0.0;
    Stepping stepping = Stepping::Automatic;
    InitialState initial;
    bool fit = false;
};

struct SweepConfig {
    std::vector<double> anisotropy;  // empty: the model's gamma
    SweepMethod method = SweepMethod::ClosedForm;
};

struct StochasticConfig {
    double variance = 0.0;
    double correlation_time = 0.01;
    int trajectories = 1000;
    double t_end = 50.0;
    double dt = 0.0;
    double sample_interval = 0.5;
    int bootstrap = 200;
    double constant = 1.0;
    InitialState initial{"fock", {}};
};

struct OracleConfig {
    double t_end = 50.0;
    int samples = 101;
    double tolerance = 1e-8;
};

struct RunConfig {
    Task task = Task::Spectrum;
    ModelConfig model;
    Preset preset = Preset::DephasingZ;
    ChannelStrengths strengths;
    Sector sector = Sector::Antisymmetric;
    EvolveConfig evolve;
    SweepConfig sweep;
    StochasticConfig stochastic;
    OracleConfig oracle;
    std::optional<std::string> output_path;
    Format format = Format::Csv;
    Tolerances tolerances;
    std::uint64_t seed = 7;
    int workers = 0;

    /// Resolved configuration, every default filled in, for provenance records.
    nlohmann::json resolved;
};

/// Validates a configuration document and fills defaults. The task may come
/// from the document ("task") or be forced by the caller.
RunConfig parse_config(const nlohmann::json& doc, std::optional<Task> task = std::nullopt);

/// Reads a JSON file; throws ConfigError with path "" on I/O or syntax errors.
nlohmann::json load_config_file(const std::string& path);

}  // namespace quasifree::cli
