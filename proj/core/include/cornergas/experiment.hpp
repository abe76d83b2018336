#pragma once

#include "cornergas/coulomb.hpp"
#include "cornergas/io.hpp"

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cornergas {

/// How a verdict compares measured against target.
enum class Check {
    Absolute,    ///< |measured - target| <= tolerance
    Relative,    ///< |measured - target| <= tolerance * |target|
    UpperBound,  ///< measured <= target (tolerance is reported only)
    Flag,        ///< measured != 0 (a boolean property)
};

struct Verdict {
    std::string preset;
    std::string label;
    double measured = 0.0;
    double target = 0.0;
    double tolerance = 0.0;
    Check check = Check::Absolute;
    bool pass = false;

    /// "PASS <preset> <label>: measured=... target=... tol=... (kind)"
    std::string line() const;
};

Verdict make_verdict(std::string preset, std::string label, double measured, double target, double tolerance,
                     Check check);

struct ExperimentConfig {
    std::string id;
    std::optional<FamilyConfig> family;   ///< overrides the preset's default families
    std::vector<int> n_schedule;          ///< empty: preset default
    std::vector<double> r_schedule;       ///< values of r - 1; empty: preset default
    std::map<std::string, double> tolerances;  ///< overrides of the preset tolerances
    std::filesystem::path out_dir;        ///< empty: no files written
    Precision precision = Precision::Double;
    int rows = 2048;                      ///< Grunsky rows for the corner presets
    int cols = 8192;                      ///< Grunsky columns (inner sum of B B^*)
    std::size_t memory_budget = std::size_t(4) << 30;

    double tolerance(const std::string& key, double fallback) const;
    /// Throws InvalidArgument on unknown id, non-increasing schedules or a
    /// schedule that cannot fit the memory budget.
    void validate() const;
};

struct ExperimentReport {
    std::string id;
    std::vector<Verdict> verdicts;
    std::vector<std::filesystem::path> files;
    double seconds = 0.0;
    bool passed() const;
};

const std::vector<std::string>& preset_ids();
/// One-line description of the statement a preset reproduces.
std::string preset_statement(const std::string& id);
ExperimentConfig default_config(const std::string& id);
ExperimentConfig parse_experiment_config(const std::string& json_text);
/// Rough single-core runtime estimate, used for scheduling.
double estimated_minutes(const ExperimentConfig& cfg);
/// Peak memory estimate in bytes.
std::size_t estimated_memory(const ExperimentConfig& cfg);

ExperimentReport run_experiment(const ExperimentConfig& cfg);

struct SummaryRow {
    std::string id;
    std::string statement;
    bool ran = false;
    bool pass = false;
    double seconds = 0.0;
};

struct ReproduceResult {
    std::vector<SummaryRow> summary;
    std::vector<ExperimentReport> reports;
    bool passed() const;
};

/// Runs every preset whose estimate fits the budget, cheapest first.
/// parallel runs presets concurrently, each in its own output directory.
ReproduceResult reproduce_all(double budget_minutes, const std::filesystem::path& out_dir, bool parallel = false);

/// Drops the cached large Grunsky matrix shared between corner presets.
void clear_matrix_cache();

}  // namespace cornergas
